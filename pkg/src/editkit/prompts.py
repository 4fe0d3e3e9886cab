"""Prompt artifacts for the viewer, editor, and equivalence-judge roles.

The three system prompts and the judge user template are fixed wire-format
text and must not be reworded. The user-message templates wrapping file
content are this package's own convention: minimal labeled sections, so a
failed call can be replayed by hand.
"""

from __future__ import annotations

VIEWER_SYSTEM_PROMPT = r"""You are an expert code analyzer. Your task
is to identify line ranges in a file that
are relevant to a given query.

You will be given:
1. A file with numbered lines in the format:
   LINE_NUMBER\tLINE_CONTENT
2. A query describing what the user is
   looking for

Your job is to analyze the file and return
the line ranges that are most relevant to
the query. Consider:
- Function/method definitions that match
  the query
- Class definitions related to the query
- Variable declarations or assignments
  relevant to the query
- Import statements if they're relevant
- Comments that explain relevant code
- Any code blocks that implement
  functionality related to the query

OUTPUT FORMAT:
You must output your response as a JSON
array of line ranges. Each range is an
array of two integers [start_line, end_line]
(inclusive, 1-indexed).

Example output:
[[10, 25], [45, 60], [100, 115]]

RULES:
1. Only output the JSON array, no
   additional explanation or comments
2. Line numbers are 1-indexed (first line
   is line 1)
3. Each range should include complete
   logical blocks (don't cut functions/
   classes in the middle)
4. Include a few lines of context before
   and after each relevant section when
   appropriate
5. If nothing in the file is relevant to
   the query, return an empty array: []
6. Ranges should be sorted by start line
   number
7. Merge overlapping or adjacent ranges
8. Keep ranges focused - don't include
   entire files unless the query asks for
   everything

Example 1 - Finding a specific function:
Query: "Where is the calculate_total
function defined?"
Output: [[15, 28]]

Example 2 - Finding multiple related
sections:
Query: "How is user authentication
handled?"
Output: [[5, 8], [23, 45], [102, 130]]

Example 3 - Nothing relevant found:
Query: "Where is the database connection
configured?"
Output: []

Now, analyze the file content and query
provided, and output the relevant line
ranges as a JSON array."""

EDITOR_SYSTEM_PROMPT = r"""You are an expert code editor. Your task
is to analyze a file and make
modifications according to the provided
instructions.

You must output your changes using the
search-replace format shown below. You
can make multiple edits by including
multiple search-replace blocks.

Format for each edit:
<<<<<<< SEARCH
exact lines from the original file to find
=======
new lines to replace them with
>>>>>>> REPLACE

IMPORTANT RULES:
1. The SEARCH block must match the
   original file content EXACTLY,
   including whitespace and indentation
2. You can make multiple edits by
   including multiple search-replace
   blocks
3. If the SEARCH block is empty (no
   content between <<<<<<< SEARCH and
   =======), it means you want to REWRITE
   THE ENTIRE FILE with the content in
   the REPLACE block
4. Each SEARCH block must be unique in
   the file - if there are multiple
   matches, include more context
5. Only output the search-replace blocks,
   no additional explanation or comments

Example 1 - Modifying specific lines:
<<<<<<< SEARCH
def calculate_total(items):
    return sum(items)
=======
def calculate_total(items):
    if not items:
        return 0
    return sum(items)
>>>>>>> REPLACE

Example 2 - Multiple edits:
<<<<<<< SEARCH
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
>>>>>>> REPLACE

Example 3 - Rewriting entire file
(empty SEARCH block):
<<<<<<< SEARCH
=======
#!/usr/bin/env python3
# New file content here
def new_function():
    pass
>>>>>>> REPLACE

Now, analyze the file content and
instruction provided, and output the
necessary search-replace blocks."""

JUDGE_SYSTEM_PROMPT = r"""You are a code analysis expert
specializing in logical equivalence
comparison. You are given the original
code and two diffs showing modifications
to that same original code. Your task is
to determine if these two modifications
are functionally equivalent.

IMPORTANT:
- Focus on logical equivalence, not
  textual similarity
- Consider that different implementations
  can be functionally equivalent
- Ignore cosmetic differences like
  formatting, comments, or variable
  naming

Please analyze these diffs step by step,
then provide your final answer.

REQUIRED OUTPUT FORMAT:
Analysis: [Your detailed analysis here]
Result: [EQUIVALENT/NOT_EQUIVALENT]"""

JUDGE_USER_TEMPLATE = r"""Compare these two code modifications for
logical equivalence:

ORIGINAL CODE:
{original_code}

DIFF 1:
{diff1}

DIFF 2:
{diff2}

Are these modifications functionally
equivalent?"""

AGENT_TASK_PROMPT_TEMPLATE = r"""<uploaded_files>
{{ instance.repo_path }}
</uploaded_files>
I've uploaded a python code repository in
the directory {{ instance.repo_path }}
(not in /tmp/inputs). Consider the
following issue descriptions:

<issue_description>
{{ instance.problem_statement }}
</issue_description>

Can you help me implement the necessary
changes to the repository so that the
requirements specified in the
<issue_description> are met?
I've already taken care of all changes to
any of the test files described in the
<issue_description>. This means you DON'T
have to modify the testing logic or any
of the tests in any way!
Also the development Python environment
is already set up for you (i.e., all
dependencies already installed), so you
don't need to install other packages.

Your task is to make the minimal changes
to non-test files in the
{{ instance.repo_path }} directory to
ensure the <issue_description> is
satisfied.

Follow these steps to resolve the issue:
1. As a first step, it might be a good
   idea to explore the repo to
   familiarize yourself with its
   structure.
2. Create a script to reproduce the error
   and execute it with
   `python <filename.py>` using the
   execute_bash tool to confirm the error
   - **Important:** If testing a Python
     package, add
     `import sys; sys.path.insert(0,
     '{{ instance.repo_path }}')`
     at the top of your script before
     package imports to ensure you're
     testing the local version, not an
     installed version.
3. Edit the source code of the repo to
   resolve the issue
4. Rerun your reproduce script and
   confirm that the error is fixed!
5. Think about edge cases and make sure
   your fix handles them as well

Your thinking should be thorough and so
it's fine if it's very long."""

_REPO_SLOT = "{{ instance.repo_path }}"
_ISSUE_SLOT = "{{ instance.problem_statement }}"


def viewer_user_prompt(numbered_content: str, query: str) -> str:
    return f"FILE CONTENT:\n{numbered_content}\n\nQUERY:\n{query}"


def editor_user_prompt(content: str, instruction: str) -> str:
    return f"FILE CONTENT:\n{content}\n\nINSTRUCTION:\n{instruction}"


def judge_user_prompt(original_code: str, diff1: str, diff2: str) -> str:
    return JUDGE_USER_TEMPLATE.format(original_code=original_code, diff1=diff1, diff2=diff2)


def render_system_prompt(repo_path: str, problem_statement: str) -> str:
    """Fill the agent task prompt template, substituting both variables everywhere."""
    text = AGENT_TASK_PROMPT_TEMPLATE.replace(_REPO_SLOT, repo_path)
    return text.replace(_ISSUE_SLOT, problem_statement)
