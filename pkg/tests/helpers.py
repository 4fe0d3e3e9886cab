"""Shared test fixtures: independent oracles, hand-derived vectors, canned texts.

The oracles here are deliberately naive (boolean coverage arrays, splice by
index) so they stay independent of the implementations they check. The
normalization vectors were derived by hand-executing the canonicalization
rules in order; they are frozen expected values, not recorded outputs.
"""

from __future__ import annotations

import random

from editkit.textops import LineRange

# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def coverage_oracle(ranges: list[LineRange], n: int) -> list[LineRange]:
    """Mark covered lines in a boolean array, then re-extract maximal runs."""
    covered = [False] * (n + 2)
    for r in ranges:
        for i in range(max(r.start, 1), min(r.end, n) + 1):
            covered[i] = True
    out: list[LineRange] = []
    i = 1
    while i <= n:
        if covered[i]:
            j = i
            while covered[j + 1]:
                j += 1
            out.append(LineRange(i, j))
            i = j + 1
        else:
            i += 1
    return out


def splice_oracle(content: str, search: str, replace: str) -> str:
    """Reconstruct a unique-match edit by index arithmetic."""
    at = content.find(search)
    assert at != -1, "oracle misuse: search not present"
    assert content.find(search, at + 1) == -1, "oracle misuse: search not unique"
    return content[:at] + replace + content[at + len(search):]


def unique_line_file(rng: random.Random, n_lines: int) -> str:
    """Content whose every line is globally unique, so line spans match uniquely."""
    words = ["alpha", "beta", "gamma", "delta", "omega", "kappa", "sigma", "theta"]
    lines = [
        f"{rng.choice(words)} {rng.choice(words)}({rng.randint(0, 99)}) LINE_{i:04d}"
        for i in range(n_lines)
    ]
    return "\n".join(lines) + ("\n" if rng.random() < 0.5 else "")


# ---------------------------------------------------------------------------
# Canonicalization vectors: (input, expected) derived by hand-executing the
# rules in order: /* */, triple-double, triple-single, <!-- -->, //-to-EOL,
# #-to-EOL, whitespace collapse, strip.
# ---------------------------------------------------------------------------

NORMALIZE_VECTORS: list[tuple[str, str]] = [
    ("def f():\n    return 1  # one\n", "def f(): return 1"),
    ("", ""),
    ('a = "http://x"', 'a = "http:'),  # the string-literal caveat, by design
    ("x = 1", "x = 1"),
    ("  x   =\t1\n\n", "x = 1"),
    ("/* gone */keep", "keep"),
    ("a/* x */b", "ab"),
    ("a\n/* one\ntwo */\nb", "a b"),
    ("a /* no end", "a /* no end"),
    ('def f():\n    """doc"""\n    return 1', "def f(): return 1"),
    ('"""\nmodule doc\n"""\nx = 1', "x = 1"),
    ("'''a'''b", "b"),
    ('x = """ \'\'\'nested\'\'\' """', "x ="),
    ("'''a\"\"\"b'''c\"\"\"d\"\"\"", "'''ad\"\"\""),  # double-quote rule runs first
    ("a<!-- c -->b", "ab"),
    ("<!--\nx\n-->y", "y"),
    ("// full line\ncode", "code"),
    ("code // tail\nmore", "code more"),
    ("#!/usr/bin/env python3\nx", "x"),
    ("a#b#c\nd", "a d"),
    ("   \n\t  ", ""),
    ("def\tf(x,\n  y):pass", "def f(x, y):pass"),
    ("a\r\nb", "a b"),
    ('"""unterminated\nx = 1', '"""unterminated x = 1'),
    ("/* a // b */x", "x"),
    ('"""# not a comment"""x', "x"),
    ('u = "//"', 'u = "'),
    ("y = 5 # note\nz = 6 // note2", "y = 5 z = 6"),
    ("# only a comment", ""),
    ("<!-- unterminated", "<!-- unterminated"),
    ("s = '''it''s'''", "s ="),
]

# ---------------------------------------------------------------------------
# Worked examples from the editor system prompt
# ---------------------------------------------------------------------------

EDITOR_EXAMPLE_1 = """<<<<<<< SEARCH
def calculate_total(items):
    return sum(items)
=======
def calculate_total(items):
    if not items:
        return 0
    return sum(items)
>>>>>>> REPLACE"""

EDITOR_EXAMPLE_1_SEARCH = "def calculate_total(items):\n    return sum(items)"
EDITOR_EXAMPLE_1_REPLACE = "def calculate_total(items):\n    if not items:\n        return 0\n    return sum(items)"

EDITOR_EXAMPLE_1_FILE = (
    "import math\n"
    "\n"
    "def calculate_total(items):\n"
    "    return sum(items)\n"
    "\n"
    "print(calculate_total([1]))\n"
)

EDITOR_EXAMPLE_2 = """<<<<<<< SEARCH
import os
=======
import os
import sys
>>>>>>> REPLACE

<<<<<<< SEARCH
def main():
    pass
=======
def main():
    print("Hello, World!")
>>>>>>> REPLACE"""

EDITOR_EXAMPLE_2_FILE = "import os\n\ndef main():\n    pass\n"
EDITOR_EXAMPLE_2_RESULT = 'import os\nimport sys\n\ndef main():\n    print("Hello, World!")\n'

EDITOR_EXAMPLE_3 = """<<<<<<< SEARCH
=======
#!/usr/bin/env python3
# New file content here
def new_function():
    pass
>>>>>>> REPLACE"""

EDITOR_EXAMPLE_3_CONTENT = "#!/usr/bin/env python3\n# New file content here\ndef new_function():\n    pass"

# ---------------------------------------------------------------------------
# The pull-request replay fixture: original file, ground truth, edit query,
# and the two-block editor response that carries out the change. Imports are
# single physical lines, as in real dataset files.
# ---------------------------------------------------------------------------

REPLAY_ORIGINAL = """import tempfile
from io import BytesIO

import pytest

from PIL import Image, ImageSequence, SpiderImagePlugin

from .helper import assert_image_equal, hopper, is_pypy

TEST_FILE = "Tests/images/hopper.spider"

...

# for issue #4093
def test_odd_size():
    data = BytesIO()
    width = 100
    im = Image.new("F", (width, 64))
    im.save(data, format="SPIDER")

    data.seek(0)
    with Image.open(data) as im2:
        assert_image_equal(im, im2)
"""

REPLAY_GROUND_TRUTH = REPLAY_ORIGINAL.replace(
    "from .helper import assert_image_equal, hopper, is_pypy",
    "from .helper import assert_image_equal_tofile, hopper, is_pypy",
).replace(
    "        assert_image_equal(im, im2)",
    "        assert_image_equal_tofile(im, im2)",
)

REPLAY_QUERY = (
    "Replace the usage of `assert_image_equal` with `assert_image_equal_tofile`, "
    "and update imports accordingly to improve the way image comparisons are "
    "being handled."
)

REPLAY_EDITOR_RESPONSE = """<<<<<<< SEARCH
from .helper import assert_image_equal, hopper, is_pypy
=======
from .helper import assert_image_equal_tofile, hopper, is_pypy
>>>>>>> REPLACE

<<<<<<< SEARCH
        assert_image_equal(im, im2)
=======
        assert_image_equal_tofile(im, im2)
>>>>>>> REPLACE"""
