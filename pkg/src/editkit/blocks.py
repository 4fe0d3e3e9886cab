"""Parse editor-model output into edit scripts and apply them atomically.

The wire format is the SEARCH/REPLACE block:

    <<<<<<< SEARCH
    exact lines from the original file to find
    =======
    new lines to replace them with
    >>>>>>> REPLACE

An empty SEARCH body means "rewrite the entire file with the REPLACE body".
Marker lines must sit at column 0 and match exactly after trailing-whitespace
strip; anything outside blocks (prose, code fences) is ignored.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import EditKitError
from .textops import FileBuffer, LineRange, compute_modified_regions

SEARCH_MARKER = "<<<<<<< SEARCH"
DIVIDER_MARKER = "======="
REPLACE_MARKER = ">>>>>>> REPLACE"


class EditMode(enum.Enum):
    FIND_REPLACE = "find-replace"
    WHOLE_FILE_REWRITE = "whole-file-rewrite"


class BlockParseError(EditKitError):
    """Editor output could not be parsed into a valid edit script."""


class NoBlocksFound(BlockParseError):
    """No SEARCH/REPLACE block delimiters present in the output."""


class MalformedBlock(BlockParseError):
    """A SEARCH marker was opened but its divider or REPLACE terminator is missing."""


class MixedRewrite(BlockParseError):
    """An empty-search (whole-file rewrite) block cannot coexist with other blocks."""


class EditApplyError(EditKitError):
    """An edit script could not be applied; the target buffer is unchanged."""

    def __init__(self, block_index: int, message: str):
        super().__init__(message)
        self.block_index = block_index


class SearchNotFound(EditApplyError):
    def __init__(self, block_index: int, search: str):
        preview = search if len(search) <= 200 else search[:200] + "..."
        super().__init__(
            block_index,
            f"SEARCH block {block_index} matched nothing; it must match the file "
            f"content exactly, including whitespace. Search text was:\n{preview}",
        )
        self.search = search


class SearchAmbiguous(EditApplyError):
    def __init__(self, block_index: int, match_count: int):
        super().__init__(
            block_index,
            f"SEARCH block {block_index} matched {match_count} locations; each "
            f"search must be unique in the file. Include more surrounding context.",
        )
        self.match_count = match_count


@dataclass(frozen=True)
class EditBlock:
    """One search/replace pair, both sides stored byte-exact."""

    search: str
    replace: str


@dataclass(frozen=True)
class EditScript:
    """Ordered edit blocks plus the edit mode they imply.

    Whole-file rewrite iff there is exactly one block and its search is empty;
    find-replace requires every block to have a non-empty search.
    """

    blocks: tuple[EditBlock, ...]
    mode: EditMode

    def __post_init__(self):
        if self.mode is EditMode.WHOLE_FILE_REWRITE:
            if len(self.blocks) != 1 or self.blocks[0].search != "":
                raise ValueError("whole-file rewrite requires exactly one empty-search block")
        else:
            if not self.blocks or any(b.search == "" for b in self.blocks):
                raise ValueError("find-replace requires one or more non-empty-search blocks")


def _is_marker(line: str, marker: str) -> bool:
    return line.rstrip() == marker


def parse_edit_blocks(model_output: str) -> EditScript:
    """Extract SEARCH/REPLACE blocks from model output and classify the edit mode.

    Block bodies are captured verbatim (joined with "\n", no trailing newline);
    text outside blocks is ignored. Raises NoBlocksFound when no block opens,
    MalformedBlock when a block does not terminate, and MixedRewrite when an
    empty-search block appears alongside any other block.
    """
    lines = model_output.split("\n")
    blocks: list[EditBlock] = []
    i = 0
    while i < len(lines):
        if not _is_marker(lines[i], SEARCH_MARKER):
            i += 1
            continue
        i += 1
        search_lines: list[str] = []
        while i < len(lines) and not _is_marker(lines[i], DIVIDER_MARKER):
            search_lines.append(lines[i])
            i += 1
        if i >= len(lines):
            raise MalformedBlock(f"block {len(blocks)}: SEARCH opened but no '=======' divider found")
        i += 1
        replace_lines: list[str] = []
        while i < len(lines) and not _is_marker(lines[i], REPLACE_MARKER):
            replace_lines.append(lines[i])
            i += 1
        if i >= len(lines):
            raise MalformedBlock(f"block {len(blocks)}: no '>>>>>>> REPLACE' terminator found")
        i += 1
        blocks.append(EditBlock(search="\n".join(search_lines), replace="\n".join(replace_lines)))

    if not blocks:
        raise NoBlocksFound("no SEARCH/REPLACE blocks found in the output")
    if any(b.search == "" for b in blocks):
        if len(blocks) > 1:
            raise MixedRewrite(
                "an empty SEARCH block rewrites the entire file and cannot be combined with other blocks"
            )
        return EditScript(blocks=tuple(blocks), mode=EditMode.WHOLE_FILE_REWRITE)
    return EditScript(blocks=tuple(blocks), mode=EditMode.FIND_REPLACE)


def serialize_edit_script(script: EditScript) -> str:
    """Emit a script back in block syntax; parse_edit_blocks round-trips it.

    Bodies containing lines that look like block markers are not representable
    in the wire format and will not round-trip.
    """
    rendered = []
    for block in script.blocks:
        parts = [SEARCH_MARKER + "\n"]
        if block.search:
            parts.append(block.search + "\n")
        parts.append(DIVIDER_MARKER + "\n")
        if block.replace:
            parts.append(block.replace + "\n")
        parts.append(REPLACE_MARKER)
        rendered.append("".join(parts))
    return "\n\n".join(rendered)


def count_matches(content: str, needle: str) -> int:
    """Non-overlapping occurrences of needle, scanning left to right."""
    if not needle:
        raise ValueError("needle must be non-empty")
    return content.count(needle)


@dataclass(frozen=True)
class EditOutcome:
    """Post-edit buffer, the new-file regions it changed, and how many blocks applied."""

    result: FileBuffer
    modified_regions: tuple[LineRange, ...]
    blocks_applied: int


def apply_edit_script(buffer: FileBuffer, script: EditScript) -> EditOutcome:
    """Apply a script atomically: all blocks succeed or an EditApplyError is raised.

    Whole-file rewrite replaces the content with the block's replace text
    exactly. Find-replace applies blocks in order against the evolving
    content; each search must match exactly once in the content as it stands
    when that block is reached. On failure the caller's buffer is untouched.
    """
    if script.mode is EditMode.WHOLE_FILE_REWRITE:
        new_content = script.blocks[0].replace
    else:
        new_content = buffer.content
        for index, block in enumerate(script.blocks):
            matches = count_matches(new_content, block.search)
            if matches == 0:
                raise SearchNotFound(index, block.search)
            if matches > 1:
                raise SearchAmbiguous(index, matches)
            at = new_content.find(block.search)
            new_content = new_content[:at] + block.replace + new_content[at + len(block.search):]

    result = FileBuffer(path=buffer.path, content=new_content)
    regions = compute_modified_regions(buffer, result)
    return EditOutcome(result=result, modified_regions=tuple(regions), blocks_applied=len(script.blocks))
