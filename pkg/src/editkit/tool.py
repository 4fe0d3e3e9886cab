"""The unified file tool: view / create / edit over a confined workspace.

Every call resolves its path inside the workspace root (symlinks and ".."
included) and returns a ToolResult; domain failures become error results
with a reason, never exceptions, so the calling agent loop keeps control.
Edits persist atomically: a failed edit leaves the on-disk file untouched.
"""

from __future__ import annotations

import os
import shutil
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .errors import EditKitError
from .gateway import Gateway
from .prompts import render_system_prompt  # re-exported: part of this module's surface
from .schemas import export_tool_schemas  # re-exported: part of this module's surface
from .textops import FileBuffer, render_snippets

__all__ = [
    "ToolCall",
    "ToolResult",
    "handle_tool_call",
    "list_directory",
    "export_tool_schemas",
    "render_system_prompt",
]

LISTING_DEPTH = 2
NO_RELEVANT_SECTIONS = "No sections of the file are relevant to the query."


@dataclass(frozen=True)
class ToolCall:
    command: str  # "view" | "create" | "edit"
    path: str
    query: str | None = None
    instruction: str | None = None
    file_text: str | None = None


@dataclass(frozen=True)
class ToolResult:
    status: str  # "ok" | "error"
    body: str
    error_kind: str | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _error(kind: str, reason: str) -> ToolResult:
    return ToolResult(status="error", body=reason, error_kind=kind)


def read_buffer(path: Path, rel: str) -> FileBuffer:
    with open(path, encoding="utf-8", newline="", errors="surrogateescape") as f:
        return FileBuffer(path=rel, content=f.read())


def write_atomic(path: Path, content: str) -> None:
    """Write via a same-directory temp file and rename, preserving the old mode."""
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".editkit-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="", errors="surrogateescape") as f:
            f.write(content)
        if path.exists():
            shutil.copymode(path, tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def list_directory(root: Path, depth: int = LISTING_DEPTH) -> str:
    """Non-hidden entries under root up to `depth` levels, one per line.

    Paths are relative to root, sorted within each directory, directories
    suffixed with "/". Dot-prefixed entries and their subtrees are skipped.
    """
    entries: list[str] = []

    def walk(directory: Path, level: int) -> None:
        for child in sorted(directory.iterdir(), key=lambda c: c.name):
            if child.name.startswith("."):
                continue
            rel = child.relative_to(root)
            entries.append(f"{rel}/" if child.is_dir() else str(rel))
            if child.is_dir() and level < depth:
                walk(child, level + 1)

    walk(root, 1)
    return "\n".join(entries)


def _resolve(workspace: Path, raw_path: str) -> tuple[Path, str] | None:
    """Resolve raw_path inside workspace; None when it escapes the root."""
    root = workspace.resolve()
    candidate = Path(raw_path)
    if not candidate.is_absolute():
        candidate = root / candidate
    resolved = candidate.resolve()
    if resolved != root and root not in resolved.parents:
        return None
    rel = "." if resolved == root else str(resolved.relative_to(root))
    return resolved, rel


def handle_tool_call(call: ToolCall, workspace: Path, gateway: Gateway) -> ToolResult:
    """Dispatch one tool call against the workspace. Never raises domain errors."""
    if call.command not in ("view", "create", "edit"):
        return _error("invalid", f"unknown command {call.command!r}; allowed: view, create, edit")

    located = _resolve(workspace, call.path)
    if located is None:
        return _error("path_escape", f"path {call.path!r} resolves outside the workspace")
    path, rel = located

    try:
        if call.command == "view":
            return _view(call, path, rel, gateway)
        if call.command == "create":
            return _create(call, path, rel)
        return _edit(call, path, rel, gateway)
    except EditKitError as exc:
        kind = type(exc).__name__
        mapping = {
            "ViewerParseError": "viewer_failed",
            "EditorFailed": "editor_failed",
            "AuthError": "backend_error",
            "BackendError": "backend_error",
            "TransientBackendError": "backend_error",
        }
        return _error(mapping.get(kind, "invalid"), str(exc))


def _view(call: ToolCall, path: Path, rel: str, gateway: Gateway) -> ToolResult:
    if path.is_dir():
        return ToolResult(status="ok", body=list_directory(path))
    if not path.is_file():
        return _error("not_found", f"{rel}: no such file or directory")
    if not call.query:
        return _error("missing_param", "`query` is required when viewing a file")
    buffer = read_buffer(path, rel)
    ranges = gateway.run_viewer(buffer, call.query)
    if not ranges:
        return ToolResult(status="ok", body=NO_RELEVANT_SECTIONS)
    return ToolResult(status="ok", body=render_snippets(buffer, ranges).rendered)


def _create(call: ToolCall, path: Path, rel: str) -> ToolResult:
    if call.file_text is None:
        return _error("missing_param", "`file_text` is required for the create command")
    if path.exists():
        return _error("already_exists", f"{rel} already exists; create cannot overwrite")
    path.parent.mkdir(parents=True, exist_ok=True)
    write_atomic(path, call.file_text)
    line_count = FileBuffer(path=rel, content=call.file_text).line_count()
    return ToolResult(status="ok", body=f"Created {rel} ({line_count} lines)")


def _edit(call: ToolCall, path: Path, rel: str, gateway: Gateway) -> ToolResult:
    if not call.instruction:
        return _error("missing_param", "`instruction` is required for the edit command")
    if not path.is_file():
        return _error("not_found", f"{rel}: no such file")
    buffer = read_buffer(path, rel)
    outcome, report = gateway.run_editor(buffer, call.instruction)
    write_atomic(path, outcome.result.content)
    header = f"Edit applied ({outcome.blocks_applied} block(s), {report.attempts} attempt(s))."
    if not outcome.modified_regions:
        return ToolResult(status="ok", body=header + " No lines changed.")
    shown = render_snippets(outcome.result, list(outcome.modified_regions)).rendered
    return ToolResult(status="ok", body=f"{header} Modified regions:\n{shown}")
