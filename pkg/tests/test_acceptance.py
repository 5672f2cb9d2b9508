"""One line per acceptance criterion; run with -s to see the lines live."""
import pytest

from ninefields.acceptance import CRITERIA, run_one
from ninefields.records import workers_from_env


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    res = run_one(number, workers=workers_from_env(1))
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.line()
