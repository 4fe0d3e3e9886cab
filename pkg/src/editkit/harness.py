"""Benchmark harness for editor models over pull-request-derived edit instances.

A dataset is JSONL, one instance per line with fields id, original,
ground_truth, query, and optional meta. Any editor can be plugged in: a
gateway-backed model, an external command, or the built-in oracle that
rewrites straight to ground truth (the score ceiling). Three metrics are
reported per run: format success (the editor produced an applicable edit
script), normalized match (canonical-form equality with ground truth), and
judged equivalence (an LLM compares the candidate and ground-truth diffs).
"""

from __future__ import annotations

import difflib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Union

from .blocks import (
    BlockParseError,
    EditApplyError,
    EditBlock,
    EditMode,
    EditOutcome,
    EditScript,
    apply_edit_script,
    parse_edit_blocks,
)
from .errors import EditKitError
from .gateway import BackendError, CompletionExchange, EditorFailed, Gateway
from .normalize import normalized_match
from .prompts import JUDGE_SYSTEM_PROMPT, judge_user_prompt
from .textops import FileBuffer

log = logging.getLogger(__name__)


class DatasetParseError(EditKitError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line


class DuplicateId(EditKitError):
    pass


class EmptyResults(EditKitError):
    pass


class GradeVerdict(Enum):
    EQUIVALENT = "equivalent"
    NOT_EQUIVALENT = "not_equivalent"
    UNGRADED = "ungraded"


@dataclass(frozen=True)
class EvalInstance:
    """One edit task: a file before the change, after it, and the instruction."""

    id: str
    original_content: str
    ground_truth_content: str
    edit_query: str
    source_meta: dict | None = None


@dataclass(frozen=True)
class EvalResult:
    id: str
    format_ok: bool
    norm_match: bool
    grader_verdict: GradeVerdict | None = None
    attempts: int = 1
    failure_reason: str | None = None


@dataclass(frozen=True)
class EvalReport:
    n_instances: int
    format_pct: float
    norm_match_pct: float
    grader_pct: float | None
    n_graded: int


@dataclass(frozen=True)
class EvalRun:
    """Per-instance results in dataset order plus the infrastructure-failure count."""

    results: list[EvalResult]
    infra_failures: int = 0


# An editor maps an instance to its edit outcome, optionally paired with the
# number of model attempts it took. Format failures are raised, not returned.
InstanceEditor = Callable[[EvalInstance], Union[EditOutcome, tuple[EditOutcome, int]]]

REQUIRED_FIELDS = ("id", "original", "ground_truth", "query")


def load_dataset(path: str | Path) -> list[EvalInstance]:
    """Parse a JSONL dataset, rejecting bad records with line-numbered errors."""
    instances: list[EvalInstance] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            if not raw.strip():
                continue
            try:
                record = json.loads(raw)
            except ValueError as exc:
                raise DatasetParseError(lineno, f"invalid JSON: {exc}") from exc
            if not isinstance(record, dict):
                raise DatasetParseError(lineno, "record is not a JSON object")
            for name in REQUIRED_FIELDS:
                if name not in record:
                    raise DatasetParseError(lineno, f"missing required field {name!r}")
                if not isinstance(record[name], str):
                    raise DatasetParseError(lineno, f"field {name!r} must be a string")
            if record["id"] in seen:
                raise DuplicateId(f"line {lineno}: duplicate instance id {record['id']!r}")
            seen.add(record["id"])
            if record["original"] == record["ground_truth"]:
                log.warning("instance %s: original and ground truth are identical", record["id"])
            instances.append(
                EvalInstance(
                    id=record["id"],
                    original_content=record["original"],
                    ground_truth_content=record["ground_truth"],
                    edit_query=record["query"],
                    source_meta=record.get("meta"),
                )
            )
    return instances


def oracle_editor(instance: EvalInstance) -> EditOutcome:
    """Score-ceiling editor: whole-file rewrite straight to the ground truth."""
    script = EditScript(
        blocks=(EditBlock(search="", replace=instance.ground_truth_content),),
        mode=EditMode.WHOLE_FILE_REWRITE,
    )
    return apply_edit_script(FileBuffer(path=instance.id, content=instance.original_content), script)


def completion_editor(complete_fn: Callable[[str, str], str]) -> InstanceEditor:
    """Adapt a (content, query) -> model-output-text function into an editor.

    The returned editor parses the text as edit blocks and applies them to
    the instance's original content.
    """

    def edit(instance: EvalInstance) -> EditOutcome:
        text = complete_fn(instance.original_content, instance.edit_query)
        script = parse_edit_blocks(text)
        return apply_edit_script(FileBuffer(path=instance.id, content=instance.original_content), script)

    return edit


def gateway_editor(gateway: Gateway) -> InstanceEditor:
    """Editor backed by the editor subagent (with its re-prompt loop)."""

    def edit(instance: EvalInstance) -> tuple[EditOutcome, int]:
        buffer = FileBuffer(path=instance.id, content=instance.original_content)
        outcome, report = gateway.run_editor(buffer, instance.edit_query)
        return outcome, report.attempts

    return edit


def make_unified_diff(before: str, after: str) -> str:
    """Unified diff (3 context lines) between two texts; "" when line-identical."""
    lines = difflib.unified_diff(
        before.splitlines(), after.splitlines(), fromfile="before", tofile="after", lineterm=""
    )
    return "\n".join(lines)


def _parse_verdict(text: str) -> GradeVerdict | None:
    """Read the last "Result:" line; None when it names neither verdict."""
    for line in reversed(text.splitlines()):
        stripped = line.strip()
        if not stripped.startswith("Result:"):
            continue
        token = stripped[len("Result:"):].strip().strip("[].,!").strip()
        if token == "EQUIVALENT":
            return GradeVerdict.EQUIVALENT
        if token == "NOT_EQUIVALENT":
            return GradeVerdict.NOT_EQUIVALENT
        return None
    return None


def grade_equivalence(original: str, candidate_diff: str, truth_diff: str, judge: Gateway) -> GradeVerdict:
    """Ask the judge whether two modifications of the same original are equivalent.

    Retries once on an unparseable reply; backend failure or a second bad
    reply yields UNGRADED so the run continues.
    """
    user_prompt = judge_user_prompt(original, candidate_diff, truth_diff)
    for _ in range(2):
        exchange = CompletionExchange(
            system_prompt=JUDGE_SYSTEM_PROMPT,
            user_prompt=user_prompt,
            model_id=judge.config.model_id,
            temperature=judge.temperature,
            max_output_tokens=judge.max_output_tokens,
        )
        try:
            reply = judge.complete(exchange)
        except BackendError as exc:
            log.warning("judge backend unavailable: %s", exc)
            return GradeVerdict.UNGRADED
        verdict = _parse_verdict(reply.response_text)
        if verdict is not None:
            return verdict
    return GradeVerdict.UNGRADED


def evaluate_instance(
    instance: EvalInstance,
    editor: InstanceEditor,
    grade: bool = False,
    judge: Gateway | None = None,
) -> EvalResult:
    """Run one instance through an editor and score it.

    Editing failures are recorded in the result, never raised; the grader
    runs only when requested and only on format successes.
    """
    try:
        produced = editor(instance)
    except (BlockParseError, EditApplyError, EditorFailed) as exc:
        return EvalResult(
            id=instance.id,
            format_ok=False,
            norm_match=False,
            attempts=getattr(exc, "attempts", 1),
            failure_reason=str(exc),
        )
    outcome, attempts = produced if isinstance(produced, tuple) else (produced, 1)

    norm = normalized_match(outcome.result.content, instance.ground_truth_content)
    verdict = None
    if grade and judge is not None:
        candidate_diff = make_unified_diff(instance.original_content, outcome.result.content)
        truth_diff = make_unified_diff(instance.original_content, instance.ground_truth_content)
        verdict = grade_equivalence(instance.original_content, candidate_diff, truth_diff, judge)
    return EvalResult(
        id=instance.id,
        format_ok=True,
        norm_match=norm,
        grader_verdict=verdict,
        attempts=attempts,
    )


def run_evaluation(
    instances: list[EvalInstance],
    editor: InstanceEditor,
    grade: bool = False,
    judge: Gateway | None = None,
    max_workers: int = 4,
) -> EvalRun:
    """Evaluate all instances with bounded parallelism, preserving dataset order.

    Backend failures inside an instance are recorded as infrastructure
    failures (the result still counts as a format failure) rather than
    aborting the run.
    """

    def run_one(instance: EvalInstance) -> tuple[EvalResult, bool]:
        try:
            return evaluate_instance(instance, editor, grade=grade, judge=judge), False
        except BackendError as exc:
            result = EvalResult(
                id=instance.id,
                format_ok=False,
                norm_match=False,
                failure_reason=f"infrastructure: {exc}",
            )
            return result, True

    if not instances:
        return EvalRun(results=[], infra_failures=0)
    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        outcomes = list(pool.map(run_one, instances))
    results = [r for r, _ in outcomes]
    infra = sum(1 for _, failed in outcomes if failed)
    return EvalRun(results=results, infra_failures=infra)


def aggregate(results: list[EvalResult]) -> EvalReport:
    """Fold per-instance results into percentages (grader over the graded subset)."""
    if not results:
        raise EmptyResults("cannot aggregate zero results")
    n = len(results)
    graded = [r for r in results if r.grader_verdict in (GradeVerdict.EQUIVALENT, GradeVerdict.NOT_EQUIVALENT)]
    grader_pct = None
    if graded:
        grader_pct = 100.0 * sum(r.grader_verdict is GradeVerdict.EQUIVALENT for r in graded) / len(graded)
    return EvalReport(
        n_instances=n,
        format_pct=100.0 * sum(r.format_ok for r in results) / n,
        norm_match_pct=100.0 * sum(r.norm_match for r in results) / n,
        grader_pct=grader_pct,
        n_graded=len(graded),
    )


def result_to_record(result: EvalResult) -> dict:
    """Machine-readable per-instance ledger entry."""
    return {
        "id": result.id,
        "format_ok": result.format_ok,
        "norm_match": result.norm_match,
        "grader_verdict": result.grader_verdict.value if result.grader_verdict else None,
        "attempts": result.attempts,
        "failure_reason": result.failure_reason,
    }


def report_to_dict(report: EvalReport) -> dict:
    return {
        "n_instances": report.n_instances,
        "format_pct": report.format_pct,
        "norm_match_pct": report.norm_match_pct,
        "grader_pct": report.grader_pct,
        "n_graded": report.n_graded,
    }


def format_report_table(report: EvalReport) -> str:
    """Aligned one-row metrics table; grader column is "-" when nothing was graded."""
    headers = ["Instances", "Format (%)", "Grader (%)", "Norm. Match (%)"]
    grader = f"{report.grader_pct:.1f}" if report.grader_pct is not None else "-"
    values = [
        str(report.n_instances),
        f"{report.format_pct:.1f}",
        grader,
        f"{report.norm_match_pct:.1f}",
    ]
    widths = [max(len(h), len(v)) for h, v in zip(headers, values)]
    head = "  ".join(h.rjust(w) for h, w in zip(headers, widths))
    row = "  ".join(v.rjust(w) for v, w in zip(values, widths))
    note = f"(grader over {report.n_graded} graded instances)"
    return f"{head}\n{row}\n{note}"
