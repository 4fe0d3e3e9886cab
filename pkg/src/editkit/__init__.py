"""editkit: search/replace edit engine, snippet viewer, subagent gateway, and eval harness."""

from .blocks import (
    EditBlock,
    EditMode,
    EditOutcome,
    EditScript,
    apply_edit_script,
    count_matches,
    parse_edit_blocks,
    serialize_edit_script,
)
from .errors import EditKitError
from .gateway import BackendConfig, CompletionExchange, Gateway, HttpBackend, MockBackend, SubagentReport
from .harness import EvalInstance, EvalReport, EvalResult, aggregate, evaluate_instance, load_dataset
from .normalize import normalize_code, normalized_match
from .prompts import render_system_prompt
from .schemas import export_tool_schemas
from .textops import (
    FileBuffer,
    LineRange,
    SnippetView,
    compute_modified_regions,
    normalize_ranges,
    number_lines,
    render_snippets,
)
from .tool import ToolCall, ToolResult, handle_tool_call

__version__ = "0.1.0"
