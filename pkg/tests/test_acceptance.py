"""The twelve acceptance criteria, one test each; every test prints its PASS/FAIL line."""

import pytest

from cychom.acceptance import CRITERIA, run_criterion


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, acceptance_log, capsys):
    result = run_criterion(number)
    line = result.line()
    acceptance_log.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert result.ok, "\n".join(str(f) for f in result.failures[:10]) or result.detail


def test_there_are_twelve_criteria():
    assert sorted(CRITERIA) == list(range(1, 13))
