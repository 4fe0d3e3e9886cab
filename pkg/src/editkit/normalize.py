"""Canonicalize code for comparison: strip comments, collapse whitespace to one line.

The rules are regex heuristics applied in a fixed order to every input
regardless of language. Comment-like patterns inside string literals are
knowingly mangled (e.g. "http://x" loses its tail to the // rule); that
trade-off is part of the contract, since the same canonical form is used
as a training reward and must stay stable.
"""

from __future__ import annotations

import re

_C_BLOCK = re.compile(r"/\*.*?\*/", re.DOTALL)
_TRIPLE_DOUBLE = re.compile(r'""".*?"""', re.DOTALL)
_TRIPLE_SINGLE = re.compile(r"'''.*?'''", re.DOTALL)
_HTML_COMMENT = re.compile(r"<!--.*?-->", re.DOTALL)
_SLASH_LINE = re.compile(r"//.*$", re.MULTILINE)
_HASH_LINE = re.compile(r"#.*$", re.MULTILINE)
_WHITESPACE = re.compile(r"\s+")


def normalize_code(code: str) -> str:
    """Return the single-line canonical form of code.

    Removal order: /* */ spans, triple-double-quoted spans, triple-single-
    quoted spans, <!-- --> spans (all non-greedy, dot matches newline), then
    //-to-end-of-line and #-to-end-of-line per line; finally every whitespace
    run collapses to a single space and the ends are stripped.
    """
    code = _C_BLOCK.sub("", code)
    code = _TRIPLE_DOUBLE.sub("", code)
    code = _TRIPLE_SINGLE.sub("", code)
    code = _HTML_COMMENT.sub("", code)
    code = _SLASH_LINE.sub("", code)
    code = _HASH_LINE.sub("", code)
    code = _WHITESPACE.sub(" ", code)
    return code.strip()


def normalized_match(a: str, b: str) -> bool:
    """True iff both texts share the same canonical form."""
    return normalize_code(a) == normalize_code(b)
