"""Acceptance gate: every exit criterion at its stated tolerance.

Runs each criterion from unsharpjoint.acceptance and prints its pass/fail
line (visible with pytest -s or in the captured output on failure).
"""

import pytest

from unsharpjoint.acceptance import CRITERIA


@pytest.mark.parametrize(
    "number,name,fn", CRITERIA, ids=[f"criterion-{n}-{name}" for n, name, _ in CRITERIA]
)
def test_acceptance_criterion(number, name, fn):
    result = fn()
    print(result.line)
    assert result.passed, result.line
