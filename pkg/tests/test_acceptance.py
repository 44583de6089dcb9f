"""Every acceptance criterion at full scale, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
finish; they are also repeated in the terminal summary.
"""

import pytest

from csrg.selftest import CRITERIA, run_criterion

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize(
    "criterion",
    [pytest.param(c, marks=pytest.mark.heavy) if c.heavy else c for c in CRITERIA],
    ids=lambda c: f"criterion-{c.number}",
)
def test_criterion(criterion):
    result = run_criterion(criterion)
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.ok, line
    assert result.in_time, line
