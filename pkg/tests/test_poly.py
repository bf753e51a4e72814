import random
from fractions import Fraction

import pytest

from stabledirac.linalg import poly_det, rational_rank
from stabledirac.poly import Chart, ChartMismatchError, Poly, PolySyntaxError, parse_poly, random_poly

XY = ("x", "y")


def P(text, vars=XY):
    return parse_poly(text, vars)


def test_difference_of_squares():
    assert P("x + 1") * P("x - 1") == P("x^2 - 1")


def test_additive_inverse():
    p = random_poly(XY, 3, 4)
    assert (p + (-p)).is_zero()


def test_eval_at_point():
    assert P("3*x^2*y").eval_at({"x": 2, "y": Fraction(1, 3)}) == 4


def test_partial_derivatives():
    assert P("x^2*y").diff("x") == P("2*x*y")
    assert P("7").diff("x").is_zero()
    p = random_poly(XY, 3, 11)
    assert p.diff("x").diff("y") == p.diff("y").diff("x")


def test_diff_unknown_coordinate():
    with pytest.raises(ValueError):
        P("x").diff("q")


def test_chart_mismatch_raises():
    with pytest.raises(ChartMismatchError):
        P("x") + parse_poly("x", ("x", "z"))


def test_random_poly_deterministic_and_bounded():
    ch = Chart(("x", "y", "z"))
    assert random_poly(ch, 2, 5) == random_poly(ch, 2, 5)
    assert random_poly(ch, 0, 9).is_constant()
    r = random.Random(0)
    for _ in range(1000):
        p = random_poly(ch, 3, r)
        assert all(sum(e) <= 3 for e in p.terms)
        assert len(p.terms) <= 4


def test_random_poly_coefficients_from_fixed_set():
    r = random.Random(1)
    seen = set()
    for _ in range(300):
        seen |= set(random_poly(XY, 2, r).terms.values())
    assert seen <= {Fraction(c) for c in (-3, -2, -1, 1, 2, 3)}


def test_canonical_text_round_trip():
    p = P("3*x^2*y - 1/2*y + 5")
    assert str(p) == "3*x^2*y - 1/2*y + 5"
    assert P(str(p)) == p


@pytest.mark.parametrize("text, pos", [("3*x +", 5), ("x ^ y", 4), ("2/0", 0), ("q", 0), ("", 0)])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(PolySyntaxError) as info:
        P(text)
    assert info.value.position == pos


def test_format_truncates():
    p = sum((P("x") ** k for k in range(12)), Poly.zero(XY))
    assert p.format(10).endswith("…(+2 terms)")


def test_to_vars_refuses_dropping_a_used_variable():
    with pytest.raises(ValueError):
        P("x*y").to_vars(("x",))


def test_chart_validation():
    with pytest.raises(ValueError):
        Chart(("x", "x"))
    with pytest.raises(ValueError):
        Chart(())
    ch = Chart(("x",), ("t1",))
    assert ch.fresh_names("t", 2) == ("t2", "t3")
    assert ch.extended() == Chart(("x", "t1"))


def test_rational_rank_and_det():
    assert rational_rank([[1, 2], [2, 4]]) == 1
    assert rational_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3
    m = [[P("x"), P("1")], [P("y"), P("x")]]
    assert poly_det(m) == P("x^2 - y")
