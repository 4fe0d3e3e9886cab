"""Drive the viewer and editor subagents against any chat-completion backend.

The transport is pluggable: HttpBackend speaks the OpenAI-compatible chat
protocol; MockBackend replays scripted responses in-process and records the
prompts it receives, so subagent loops are testable end to end without a
network. Transport retries (timeouts, 5xx, rate limits) happen inside
complete(); re-prompting after a bad model response happens in the
run_viewer / run_editor loops, which feed the failure reason back to the
model verbatim.
"""

from __future__ import annotations

import enum
import json
import os
import threading
import time
from dataclasses import dataclass, replace

import requests

from .blocks import EditApplyError, EditOutcome, BlockParseError, apply_edit_script, parse_edit_blocks
from .errors import EditKitError
from .prompts import EDITOR_SYSTEM_PROMPT, VIEWER_SYSTEM_PROMPT, editor_user_prompt, viewer_user_prompt
from .textops import FileBuffer, LineRange, normalize_ranges, number_lines

DEFAULT_TEMPERATURE = 0.0
DEFAULT_MAX_OUTPUT_TOKENS = 8192
DEFAULT_MAX_REPROMPTS = 2


class BackendError(EditKitError):
    """Backend call failed and retries are exhausted (or the failure is not retryable)."""


class AuthError(BackendError):
    """Credentials rejected; never retried."""


class TransientBackendError(BackendError):
    """Single-attempt failure that complete() may retry: timeout, 5xx, rate limit."""


class ViewerParseError(EditKitError):
    """Viewer response was not a valid JSON array of line ranges, every attempt."""


class EditorFailed(EditKitError):
    """Editor could not produce an applicable edit within the retry budget."""

    def __init__(self, attempts: int, last_error: EditKitError, report: "SubagentReport | None" = None):
        super().__init__(f"editor failed after {attempts} attempts: {last_error}")
        self.attempts = attempts
        self.last_error = last_error
        self.report = report


@dataclass(frozen=True)
class TokenUsage:
    input_tokens: int
    output_tokens: int

    def __add__(self, other: "TokenUsage") -> "TokenUsage":
        return TokenUsage(self.input_tokens + other.input_tokens, self.output_tokens + other.output_tokens)


@dataclass(frozen=True)
class CompletionExchange:
    """One request/response pair; prompts are sent verbatim, never truncated."""

    system_prompt: str
    user_prompt: str
    model_id: str
    temperature: float = DEFAULT_TEMPERATURE
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS
    response_text: str = ""
    attempts: int = 0
    usage: TokenUsage | None = None


@dataclass(frozen=True)
class BackendConfig:
    endpoint_url: str
    model_id: str
    api_key_source: str = ""
    request_timeout: float = 120.0
    max_retries: int = 3
    retry_backoff: float = 0.5
    max_in_flight: int = 4

    def __post_init__(self):
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.request_timeout <= 0:
            raise ValueError("request_timeout must be > 0")


class SubagentStatus(enum.Enum):
    OK = "ok"
    PARSE_FAILED = "parse_failed"
    APPLY_FAILED = "apply_failed"
    BACKEND_ERROR = "backend_error"


@dataclass(frozen=True)
class SubagentReport:
    """How many model calls a subagent made, how it ended, and token usage if reported."""

    attempts: int
    final_status: SubagentStatus
    token_usage: TokenUsage | None = None


class HttpBackend:
    """OpenAI-compatible chat-completions transport over HTTP.

    A semaphore bounds in-flight requests across threads; the API key is read
    from the environment variable named by config.api_key_source.
    """

    def __init__(self, config: BackendConfig):
        self.config = config
        self._gate = threading.Semaphore(config.max_in_flight)

    def send(self, exchange: CompletionExchange) -> tuple[str, TokenUsage | None]:
        headers = {"Content-Type": "application/json"}
        if self.config.api_key_source:
            key = os.environ.get(self.config.api_key_source, "")
            if key:
                headers["Authorization"] = f"Bearer {key}"
        payload = {
            "model": exchange.model_id,
            "messages": [
                {"role": "system", "content": exchange.system_prompt},
                {"role": "user", "content": exchange.user_prompt},
            ],
            "temperature": exchange.temperature,
            "max_tokens": exchange.max_output_tokens,
        }
        with self._gate:
            try:
                resp = requests.post(
                    self.config.endpoint_url, json=payload, headers=headers,
                    timeout=self.config.request_timeout,
                )
            except (requests.Timeout, requests.ConnectionError) as exc:
                raise TransientBackendError(f"request failed: {exc}") from exc

        if resp.status_code in (401, 403):
            raise AuthError(f"backend rejected credentials (HTTP {resp.status_code})")
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransientBackendError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        if resp.status_code != 200:
            raise BackendError(f"HTTP {resp.status_code}: {resp.text[:200]}")

        try:
            body = resp.json()
            text = body["choices"][0]["message"]["content"] or ""
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise BackendError(f"malformed completion response: {exc}") from exc
        usage = None
        raw_usage = body.get("usage")
        if isinstance(raw_usage, dict):
            try:
                usage = TokenUsage(int(raw_usage["prompt_tokens"]), int(raw_usage["completion_tokens"]))
            except (KeyError, TypeError, ValueError):
                usage = None
        return text, usage


class MockBackend:
    """Scripted in-process backend: returns (or raises) each item in order.

    Records every exchange it receives in .requests, so tests can assert on
    the exact prompts a subagent sent. Thread-safe.
    """

    def __init__(self, script: list[str | Exception]):
        self._script = list(script)
        self._lock = threading.Lock()
        self.requests: list[CompletionExchange] = []

    def send(self, exchange: CompletionExchange) -> tuple[str, TokenUsage | None]:
        with self._lock:
            self.requests.append(exchange)
            if not self._script:
                raise BackendError("mock script exhausted")
            item = self._script.pop(0)
        if isinstance(item, Exception):
            raise item
        return item, None


def complete(config: BackendConfig, exchange: CompletionExchange, backend) -> CompletionExchange:
    """Send one exchange, retrying transient failures with exponential backoff.

    Returns a copy with response_text, transport attempt count, and usage
    filled. Raises AuthError immediately and BackendError once
    config.max_retries retries are exhausted.
    """
    attempts = 0
    last: TransientBackendError | None = None
    while attempts <= config.max_retries:
        attempts += 1
        try:
            text, usage = backend.send(exchange)
            return replace(exchange, response_text=text, attempts=attempts, usage=usage)
        except AuthError:
            raise
        except TransientBackendError as exc:
            last = exc
            if attempts <= config.max_retries and config.retry_backoff > 0:
                time.sleep(config.retry_backoff * (2 ** (attempts - 1)))
    raise BackendError(f"backend failed after {attempts} attempts: {last}") from last


def extract_json_array(text: str):
    """First top-level JSON array in text, or None. Tolerates surrounding prose."""
    decoder = json.JSONDecoder()
    start = text.find("[")
    while start != -1:
        try:
            value, _ = decoder.raw_decode(text, start)
        except ValueError:
            value = None
        if isinstance(value, list):
            return value
        start = text.find("[", start + 1)
    return None


def parse_viewer_ranges(text: str) -> list[LineRange]:
    """Parse a viewer response into raw (unrepaired) line ranges.

    Raises ValueError naming the problem when the response holds no JSON
    array of two-integer pairs.
    """
    array = extract_json_array(text)
    if array is None:
        raise ValueError("no JSON array found in the response")
    ranges = []
    for item in array:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(type(v) is int for v in item)
        ):
            raise ValueError(f"range {item!r} is not an array of two integers")
        ranges.append(LineRange(item[0], item[1]))
    return ranges


@dataclass
class Gateway:
    """Bound configuration + transport for running subagent calls.

    max_reprompts is the number of corrective re-prompts after a bad model
    response (so max_reprompts + 1 model calls total per subagent request).
    """

    config: BackendConfig
    backend: object = None
    max_reprompts: int = DEFAULT_MAX_REPROMPTS
    temperature: float = DEFAULT_TEMPERATURE
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS

    def __post_init__(self):
        if self.backend is None:
            self.backend = HttpBackend(self.config)

    def complete(self, exchange: CompletionExchange) -> CompletionExchange:
        return complete(self.config, exchange, self.backend)

    def _exchange(self, system_prompt: str, user_prompt: str) -> CompletionExchange:
        return CompletionExchange(
            system_prompt=system_prompt,
            user_prompt=user_prompt,
            model_id=self.config.model_id,
            temperature=self.temperature,
            max_output_tokens=self.max_output_tokens,
        )

    def run_viewer(self, buffer: FileBuffer, query: str) -> list[LineRange]:
        """Ask the viewer for the line ranges relevant to query.

        The model sees the numbered file plus the query; its JSON reply is
        repaired through normalize_ranges, so out-of-bounds or unsorted
        ranges never escape. An empty array is a valid "nothing relevant"
        answer. Raises ViewerParseError once the re-prompt budget is spent.
        """
        if not query:
            raise ValueError("query must be non-empty")
        base_prompt = viewer_user_prompt(number_lines(buffer), query)
        user_prompt = base_prompt
        last_reason = ""
        for _ in range(self.max_reprompts + 1):
            exchange = self.complete(self._exchange(VIEWER_SYSTEM_PROMPT, user_prompt))
            try:
                ranges = parse_viewer_ranges(exchange.response_text)
            except ValueError as exc:
                last_reason = str(exc)
                user_prompt = (
                    base_prompt
                    + f"\n\nNOTE: your previous response was invalid ({last_reason}); "
                    "output only a JSON array of [start_line, end_line] pairs."
                )
                continue
            return normalize_ranges(ranges, buffer.line_count())
        raise ViewerParseError(f"viewer returned no parseable ranges: {last_reason}")

    def run_editor(self, buffer: FileBuffer, instruction: str) -> tuple[EditOutcome, SubagentReport]:
        """Ask the editor to carry out instruction on buffer and apply the result.

        Each failed attempt (unparseable blocks, search mismatch) re-prompts
        with the failure reason verbatim. Raises EditorFailed carrying the
        last error once the budget is spent; the buffer is never modified on
        failure. Transport-level BackendError propagates as-is.
        """
        if not instruction:
            raise ValueError("instruction must be non-empty")
        base_prompt = editor_user_prompt(buffer.content, instruction)
        user_prompt = base_prompt
        attempts = 0
        usage: TokenUsage | None = None
        last_error: EditKitError | None = None
        for _ in range(self.max_reprompts + 1):
            exchange = self.complete(self._exchange(EDITOR_SYSTEM_PROMPT, user_prompt))
            attempts += 1
            if exchange.usage is not None:
                usage = exchange.usage if usage is None else usage + exchange.usage
            try:
                script = parse_edit_blocks(exchange.response_text)
                outcome = apply_edit_script(buffer, script)
            except (BlockParseError, EditApplyError) as exc:
                last_error = exc
                user_prompt = (
                    base_prompt
                    + f"\n\nYour previous response could not be applied: {exc}\n"
                    "Output corrected search-replace blocks only."
                )
                continue
            report = SubagentReport(attempts=attempts, final_status=SubagentStatus.OK, token_usage=usage)
            return outcome, report
        status = (
            SubagentStatus.PARSE_FAILED
            if isinstance(last_error, BlockParseError)
            else SubagentStatus.APPLY_FAILED
        )
        raise EditorFailed(
            attempts,
            last_error,
            report=SubagentReport(attempts=attempts, final_status=status, token_usage=usage),
        )
