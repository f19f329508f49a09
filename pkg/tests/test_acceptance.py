"""The fourteen acceptance criteria, one line of output each."""
import pytest

from knotfloer.checks import CHECKS, format_line, run_check


@pytest.mark.parametrize("check", CHECKS, ids=lambda c: f"{c.number:02d}-{c.title.replace(' ', '_')}")
def test_criterion(check, capsys):
    result = run_check(check)
    with capsys.disabled():
        print("\n" + format_line(check, result))
    assert result.ok, format_line(check, result)
