"""The fourteen acceptance criteria at full scale, one test each.

Every criterion prints a single ``[PASS]``/``[FAIL]`` line (also collected in
the terminal summary).  Run ``python3 tests/test_acceptance.py`` for the lines
alone.
"""

import pytest

from cohomoforge.suite import CRITERIA, run_criterion

LINES = []


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number):
    result = run_criterion(number, "full")
    line = result.line()
    LINES.append(line)
    print(line)
    assert result.passed, result.data
    assert result.within_budget, f"{result.seconds:.1f}s over the {result.budget}s budget"


if __name__ == "__main__":
    import sys
    failed = 0
    for number, *_ in CRITERIA:
        result = run_criterion(number, "full")
        print(result.line(), flush=True)
        failed += not (result.passed and result.within_budget)
    sys.exit(1 if failed else 0)
