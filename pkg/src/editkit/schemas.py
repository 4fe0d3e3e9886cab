"""Tool schema artifacts: the unified file tool and the shell tool, as JSON.

These are wire-format documents consumed by function-calling APIs; field
names, enum values, defaults, and description strings are fixed. The shell
tool schema is exported for completeness only -- this package does not
execute shell commands.
"""

from __future__ import annotations

import json
from typing import Any

LLM_EDITOR_SCHEMA_JSON = r"""{
  "type": "function",
  "name": "llm_editor",
  "description": "Custom editing tool for viewing, creating and editing files\n* State is persistent across command calls and discussions with the user\n* If `path` is a directory, `view` lists non-hidden files and directories up to 2 levels deep\n* If `path` is a file, `view` uses AI to find and display only the sections relevant to your `query`\n* The `create` command cannot be used if the specified `path` already exists as a file\n\nNotes for using the `view` command:\n* Provide a `query` describing what you're looking for (e.g., \"Where is user authentication handled?\", \"Show me the class definition for User\")\n* The tool reads the file and uses AI to identify relevant line ranges, then displays those sections with line numbers\n* Multiple relevant sections are shown with `... (N lines omitted) ...` separators between them\n\nNotes for using the `edit` command:\n* Provide a clear `instruction` describing what to change and where (identify by function/class/method name)\n* The tool reads the file internally and applies your instruction using AI-powered search-replace\n* Be specific: \"In `MyClass.my_method`, change X to Y\" is better than \"fix the bug\"\n* After editing, the output shows the modified regions",
  "parameters": {
    "type": "object",
    "properties": {
      "command": {
        "type": "string",
        "enum": ["view", "create", "edit"],
        "description": "The command to run. Allowed options are: `view`, `create`, `edit`."
      },
      "path": {
        "type": "string",
        "description": "Absolute path to file or directory, e.g. `/workspace/file.py` or `/workspace`."
      },
      "query": {
        "type": ["string", "null"],
        "default": null,
        "description": "Required for `view` command when `path` points to a file. A natural language query describing what you're looking for in the file. An LLM will analyze the file and return only the line ranges relevant to your query. Examples: 'Where is the authentication logic?', 'Show me the class definition for User', 'Find all functions that handle HTTP requests'."
      },
      "instruction": {
        "type": ["string", "null"],
        "default": null,
        "description": "Required for `edit` command. Detailed instruction describing how to modify the file. Be specific about what changes to make and where (function/class/method name)."
      },
      "file_text": {
        "type": ["string", "null"],
        "default": null,
        "description": "Required for `create` command. The content of the file to be created."
      }
    },
    "required": ["command", "path"]
  }
}"""

EXECUTE_BASH_SCHEMA_JSON = r"""{
  "type": "function",
  "name": "execute_bash",
  "description": "Run commands in a bash shell\n* When invoking this tool, the contents of the \"command\" parameter does NOT need to be XML-escaped.\n* You don't have access to the internet via this tool.\n* You do have access to a mirror of common linux and python packages via apt and pip.\n\n### Command Execution\n* **Non-persistent**: Each shell tool call is executed in a fresh environment. Shell variables, working directory changes, and history are NOT preserved between calls.\n* **Timeout**: Commands have a default timeout of 120 seconds (max 300). Set the `timeout` parameter for long-running commands.\n* **One command at a time**: Chain multiple commands using `&&` (conditional), `;` (sequential), or `||` (on failure).\n\n### Long-running Commands\n* For commands that may run indefinitely (e.g., servers), run in background: `python3 app.py > server.log 2>&1 &`\n* For potentially long commands (installations, tests), set an appropriate `timeout` value.\n\n### Best Practices\n* **Avoid large outputs**: Commands producing massive output may be truncated.\n* **Directory verification**: Verify parent directories exist before creating/editing files.\n\n### Output Handling\n* Stdout and stderr are combined and returned as a string. Output may be truncated if too long.\n* Exit codes are provided in system tags for failed commands.\n* Timeout messages are returned if commands exceed the timeout limit.",
  "parameters": {
    "type": "object",
    "properties": {
      "command": {
        "type": "string",
        "description": "The bash command to execute. You can only execute one bash command at a time. If you need to run multiple commands sequentially, you can use `&&` or `;` to chain them together."
      },
      "timeout": {
        "type": "integer",
        "description": "Optional timeout in seconds for the command execution. If the command takes longer than this, it will be terminated.",
        "default": 120,
        "minimum": 1,
        "maximum": 300
      }
    },
    "required": ["command"]
  }
}"""

LLM_EDITOR_SCHEMA: dict[str, Any] = json.loads(LLM_EDITOR_SCHEMA_JSON)
EXECUTE_BASH_SCHEMA: dict[str, Any] = json.loads(EXECUTE_BASH_SCHEMA_JSON)


def export_tool_schemas() -> dict[str, dict[str, Any]]:
    """Both tool schemas keyed by tool name, key order preserved from the source documents."""
    return {
        "llm_editor": json.loads(LLM_EDITOR_SCHEMA_JSON),
        "execute_bash": json.loads(EXECUTE_BASH_SCHEMA_JSON),
    }
