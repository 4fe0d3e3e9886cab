"""Line-oriented text primitives: numbering, range repair, snippet rendering, line diffs.

Lines are 1-indexed and split on "\n" only; a single trailing empty segment
is dropped, so "x\n" is one line and "" is zero lines. Any other line-ending
bytes (e.g. "\r" from CRLF files) stay attached to their line verbatim.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass

OMISSION_SEPARATOR = "... ({n} lines omitted) ..."


@dataclass(frozen=True)
class FileBuffer:
    """A file's workspace path plus its full textual content."""

    path: str
    content: str

    def line_count(self) -> int:
        return len(split_lines(self.content))


@dataclass(frozen=True)
class LineRange:
    """Inclusive 1-indexed line span. Well-formed ranges satisfy 1 <= start <= end.

    Construction does not validate: untrusted ranges (e.g. parsed from model
    output) are repaired or dropped by normalize_ranges rather than rejected.
    """

    start: int
    end: int


@dataclass(frozen=True)
class SnippetView:
    """Normalized ranges plus their rendering: numbered lines with omission separators."""

    ranges: tuple[LineRange, ...]
    rendered: str


def split_lines(content: str) -> list[str]:
    """Split content on "\n", dropping the single empty segment a trailing newline creates."""
    if not content:
        return []
    lines = content.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def number_lines(buffer: FileBuffer) -> str:
    """Render every line as "N<TAB>content". Empty content renders as ""."""
    return "\n".join(f"{i}\t{line}" for i, line in enumerate(split_lines(buffer.content), start=1))


def normalize_ranges(ranges: list[LineRange], line_count: int) -> list[LineRange]:
    """Repair and canonicalize untrusted line ranges against a file of line_count lines.

    Clamps each range to [1, line_count], drops ranges that are empty after
    clamping (including reversed start > end ranges, which cover no lines),
    sorts by start, and merges overlapping or adjacent ranges
    (next.start <= prev.end + 1). Idempotent.
    """
    clamped = []
    for r in ranges:
        start = max(r.start, 1)
        end = min(r.end, line_count)
        if start <= end:
            clamped.append(LineRange(start, end))
    clamped.sort(key=lambda r: (r.start, r.end))

    merged: list[LineRange] = []
    for r in clamped:
        if merged and r.start <= merged[-1].end + 1:
            if r.end > merged[-1].end:
                merged[-1] = LineRange(merged[-1].start, r.end)
        else:
            merged.append(r)
    return merged


def render_snippets(buffer: FileBuffer, ranges: list[LineRange]) -> SnippetView:
    """Render normalized ranges as numbered lines, with one omission separator per gap.

    A gap of G >= 1 lines strictly between consecutive ranges becomes one
    "... (G lines omitted) ..." line; lines before the first or after the
    last range get no separator. Expects ranges already normalized.
    """
    lines = split_lines(buffer.content)
    parts: list[str] = []
    prev_end = None
    for r in ranges:
        if prev_end is not None and r.start > prev_end + 1:
            parts.append(OMISSION_SEPARATOR.format(n=r.start - prev_end - 1))
        for i in range(r.start, r.end + 1):
            parts.append(f"{i}\t{lines[i - 1]}")
        prev_end = r.end
    return SnippetView(ranges=tuple(ranges), rendered="\n".join(parts))


def compute_modified_regions(old: FileBuffer, new: FileBuffer) -> list[LineRange]:
    """Line ranges of the new file touched by an LCS line diff against the old file.

    Pure deletions (no surviving line differs) report the line adjacent to the
    deletion point; a change only in the trailing newline reports the last
    line. Identical contents return []. The one unreportable case: when the
    new file is empty, there is no line to report and [] is returned even
    though the contents differ.
    """
    if old.content == new.content:
        return []
    old_lines = split_lines(old.content)
    new_lines = split_lines(new.content)
    regions: list[LineRange] = []
    matcher = difflib.SequenceMatcher(a=old_lines, b=new_lines, autojunk=False)
    for tag, _i1, _i2, j1, j2 in matcher.get_opcodes():
        if tag in ("replace", "insert"):
            regions.append(LineRange(j1 + 1, j2))
        elif tag == "delete" and new_lines:
            anchor = min(j1 + 1, len(new_lines))
            regions.append(LineRange(anchor, anchor))
    if not regions and new_lines:
        n = len(new_lines)
        regions.append(LineRange(n, n))
    return normalize_ranges(regions, len(new_lines))
