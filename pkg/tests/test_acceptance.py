"""The twelve acceptance criteria, one line of output each."""

import pytest

from kstab.selftest import CRITERIA, run_one


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number, capsys):
    result = run_one(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
