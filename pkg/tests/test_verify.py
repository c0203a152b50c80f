import pytest

from cfentropy.verify import SUITES, UnknownSuite, poly_mul, random_rationals, run_suite


def test_poly_mul():
    assert poly_mul((1, -1), (1, 1)) == (1, 0, -1)
    assert poly_mul() == (1,)


def test_random_rationals_are_seeded():
    assert random_rationals(5, 3) == random_rationals(5, 3)
    assert random_rationals(5, 3) != random_rationals(5, 4)


@pytest.mark.parametrize("suite", ["matrices", "gauss"])
def test_quick_suites_pass(suite):
    rep = run_suite(suite)
    assert rep.passed, "\n".join(rep.lines())


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("everything")
    assert SUITES[-1] == "all"
