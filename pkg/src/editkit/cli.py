"""Command-line interface to the edit engine, subagents, and eval harness.

Subcommands:
  view       show the file sections relevant to a query (viewer subagent)
  edit       apply a natural-language edit instruction (editor subagent)
  create     create a new file
  apply      apply a SEARCH/REPLACE blocks file offline, no model involved
  normalize  print the canonical (comment-stripped, single-line) form
  match      exit 0/1 on canonical-form equality of two files
  eval       run an editor over a JSONL dataset and report metrics
  schemas    print the tool JSON schemas
  prompt     render the agent task prompt for a repo + issue statement

Backend settings come from flags or the environment (EDITKIT_ENDPOINT,
EDITKIT_MODEL; the API key is read from the variable named by --key-env).
--mock-script replaces the network with scripted responses: a JSON array of
strings, consumed one per model call.

--editor-cmd runs an external editor process per instance: it receives one
JSON object {"content": ..., "query": ...} on stdin and must print the
model output text (SEARCH/REPLACE blocks or a whole-file rewrite) to
stdout. A nonzero exit counts as a format failure for that instance.

Exit codes: 0 success, 1 domain failure (e.g. a search that does not
match, an infrastructure error during eval), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import subprocess
import sys
from pathlib import Path

from .blocks import BlockParseError, apply_edit_script, parse_edit_blocks
from .errors import EditKitError
from .gateway import BackendConfig, Gateway, MockBackend
from .harness import (
    aggregate,
    completion_editor,
    format_report_table,
    gateway_editor,
    load_dataset,
    oracle_editor,
    report_to_dict,
    result_to_record,
    run_evaluation,
)
from .normalize import normalize_code, normalized_match
from .prompts import render_system_prompt
from .schemas import export_tool_schemas
from .textops import FileBuffer, render_snippets
from .tool import read_buffer, write_atomic

DEFAULT_KEY_ENV = "EDITKIT_API_KEY"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="editkit", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_backend_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--endpoint", default=os.environ.get("EDITKIT_ENDPOINT", ""),
                       help="chat-completions endpoint URL (env: EDITKIT_ENDPOINT)")
        p.add_argument("--model", default=os.environ.get("EDITKIT_MODEL", ""),
                       help="model id (env: EDITKIT_MODEL)")
        p.add_argument("--key-env", default=DEFAULT_KEY_ENV,
                       help="name of the environment variable holding the API key")
        p.add_argument("--timeout", type=float, default=120.0, help="request timeout in seconds")
        p.add_argument("--max-retries", type=int, default=3, help="transport retries per call")
        p.add_argument("--temperature", type=float, default=0.0)
        p.add_argument("--max-reprompts", type=int, default=2,
                       help="corrective re-prompts after a bad model response")
        p.add_argument("--mock-script", default=None,
                       help="path to a JSON array of scripted responses (replaces the backend)")

    p_view = sub.add_parser("view", help="show file sections relevant to a query")
    p_view.add_argument("--file", required=True)
    p_view.add_argument("--query", required=True)
    p_view.add_argument("--json", action="store_true")
    add_backend_flags(p_view)

    p_edit = sub.add_parser("edit", help="apply a natural-language edit instruction")
    p_edit.add_argument("--file", required=True)
    p_edit.add_argument("--instruction", required=True)
    add_backend_flags(p_edit)

    p_create = sub.add_parser("create", help="create a new file")
    p_create.add_argument("--file", required=True)
    p_create.add_argument("--text", default=None, help="file content (default: read stdin)")

    p_apply = sub.add_parser("apply", help="apply a SEARCH/REPLACE blocks file offline")
    p_apply.add_argument("--file", required=True)
    p_apply.add_argument("--blocks", required=True, help="file containing the edit blocks")

    p_norm = sub.add_parser("normalize", help="print the canonical form of a file or stdin")
    p_norm.add_argument("file", nargs="?", default="-")

    p_match = sub.add_parser("match", help="exit 0 iff two files share a canonical form")
    p_match.add_argument("a")
    p_match.add_argument("b")

    p_eval = sub.add_parser("eval", help="evaluate an editor over a JSONL dataset")
    p_eval.add_argument("--dataset", required=True)
    group = p_eval.add_mutually_exclusive_group()
    group.add_argument("--oracle", action="store_true",
                       help="use the ground-truth rewrite editor (score ceiling)")
    group.add_argument("--editor-cmd", default=None,
                       help="external editor command (JSON on stdin, model text on stdout)")
    p_eval.add_argument("--grade", action="store_true", help="run the equivalence judge")
    p_eval.add_argument("--judge-model", default=None,
                        help="model id for grading (default: --model)")
    p_eval.add_argument("--workers", type=int, default=4)
    p_eval.add_argument("--json", action="store_true")
    add_backend_flags(p_eval)

    sub.add_parser("schemas", help="print the tool JSON schemas")

    p_prompt = sub.add_parser("prompt", help="render the agent task prompt")
    p_prompt.add_argument("--repo", required=True)
    p_prompt.add_argument("--issue-file", required=True)

    return parser


def _gateway(args: argparse.Namespace, parser: argparse.ArgumentParser,
             model_override: str | None = None) -> Gateway:
    backend = None
    if args.mock_script:
        script = json.loads(Path(args.mock_script).read_text(encoding="utf-8"))
        if not isinstance(script, list) or not all(isinstance(s, str) for s in script):
            parser.error("--mock-script must be a JSON array of strings")
        backend = MockBackend(script)
    elif not args.endpoint or not args.model:
        parser.error("--endpoint and --model (or --mock-script) are required for this command")
    config = BackendConfig(
        endpoint_url=args.endpoint or "mock://",
        model_id=model_override or args.model or "mock",
        api_key_source=args.key_env,
        request_timeout=args.timeout,
        max_retries=args.max_retries,
    )
    return Gateway(config=config, backend=backend,
                   max_reprompts=args.max_reprompts, temperature=args.temperature)


def _read(path: str) -> FileBuffer:
    return read_buffer(Path(path), path)


def _cmd_view(args, parser) -> int:
    gateway = _gateway(args, parser)
    buffer = _read(args.file)
    ranges = gateway.run_viewer(buffer, args.query)
    if args.json:
        view = render_snippets(buffer, ranges)
        print(json.dumps({"ranges": [[r.start, r.end] for r in ranges], "rendered": view.rendered}))
        return 0
    if not ranges:
        print("No sections of the file are relevant to the query.")
        return 0
    print(render_snippets(buffer, ranges).rendered)
    return 0


def _cmd_edit(args, parser) -> int:
    gateway = _gateway(args, parser)
    buffer = _read(args.file)
    outcome, report = gateway.run_editor(buffer, args.instruction)
    write_atomic(Path(args.file), outcome.result.content)
    print(f"Applied {outcome.blocks_applied} block(s) in {report.attempts} attempt(s).")
    if outcome.modified_regions:
        print(render_snippets(outcome.result, list(outcome.modified_regions)).rendered)
    return 0


def _cmd_create(args) -> int:
    path = Path(args.file)
    if path.exists():
        print(f"error: {args.file} already exists", file=sys.stderr)
        return 1
    text = args.text if args.text is not None else sys.stdin.read()
    path.parent.mkdir(parents=True, exist_ok=True)
    write_atomic(path, text)
    print(f"Created {args.file}")
    return 0


def _cmd_apply(args) -> int:
    buffer = _read(args.file)
    blocks_text = Path(args.blocks).read_text(encoding="utf-8", errors="surrogateescape")
    script = parse_edit_blocks(blocks_text)
    outcome = apply_edit_script(buffer, script)
    write_atomic(Path(args.file), outcome.result.content)
    print(f"Applied {outcome.blocks_applied} block(s) to {args.file}.")
    if outcome.modified_regions:
        print(render_snippets(outcome.result, list(outcome.modified_regions)).rendered)
    return 0


def _cmd_normalize(args) -> int:
    if args.file == "-":
        text = sys.stdin.read()
    else:
        text = Path(args.file).read_text(encoding="utf-8", errors="surrogateescape")
    print(normalize_code(text))
    return 0


def _cmd_match(args) -> int:
    a = Path(args.a).read_text(encoding="utf-8", errors="surrogateescape")
    b = Path(args.b).read_text(encoding="utf-8", errors="surrogateescape")
    if normalized_match(a, b):
        print("equivalent")
        return 0
    print("not equivalent")
    return 1


def _external_editor(command: str):
    argv = shlex.split(command)

    def complete_fn(content: str, query: str) -> str:
        payload = json.dumps({"content": content, "query": query})
        proc = subprocess.run(argv, input=payload, capture_output=True, text=True)
        if proc.returncode != 0:
            raise BlockParseError(
                f"editor command exited {proc.returncode}: {proc.stderr.strip()[:200]}"
            )
        return proc.stdout

    return completion_editor(complete_fn)


def _cmd_eval(args, parser) -> int:
    instances = load_dataset(args.dataset)
    if args.oracle:
        editor = oracle_editor
    elif args.editor_cmd:
        editor = _external_editor(args.editor_cmd)
    else:
        editor = gateway_editor(_gateway(args, parser))
    judge = None
    if args.grade:
        judge = _gateway(args, parser, model_override=args.judge_model)
    run = run_evaluation(instances, editor, grade=args.grade, judge=judge, max_workers=args.workers)
    report = aggregate(run.results)
    if args.json:
        print(json.dumps({
            "report": report_to_dict(report),
            "infra_failures": run.infra_failures,
            "instances": [result_to_record(r) for r in run.results],
        }, indent=2))
    else:
        print(format_report_table(report))
        if run.infra_failures:
            print(f"warning: {run.infra_failures} instance(s) hit infrastructure errors",
                  file=sys.stderr)
    return 1 if run.infra_failures else 0


def _cmd_prompt(args) -> int:
    statement = Path(args.issue_file).read_text(encoding="utf-8")
    print(render_system_prompt(args.repo, statement))
    return 0


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.subcommand == "view":
            return _cmd_view(args, parser)
        if args.subcommand == "edit":
            return _cmd_edit(args, parser)
        if args.subcommand == "create":
            return _cmd_create(args)
        if args.subcommand == "apply":
            return _cmd_apply(args)
        if args.subcommand == "normalize":
            return _cmd_normalize(args)
        if args.subcommand == "match":
            return _cmd_match(args)
        if args.subcommand == "eval":
            return _cmd_eval(args, parser)
        if args.subcommand == "schemas":
            print(json.dumps(export_tool_schemas(), indent=2))
            return 0
        if args.subcommand == "prompt":
            return _cmd_prompt(args)
    except EditKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError(f"unhandled subcommand {args.subcommand}")


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
