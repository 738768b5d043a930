from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings, strategies as st

from randcubic.interval import (DivisorStraddlesZero, DyadicInterval, NegativeEvenRoot,
                                ceil_partial, compare3, floor_partial, interval_arith,
                                interval_div, interval_root, iroot_ceil, iroot_floor)

I = DyadicInterval.from_bounds


def test_exact_sums_and_products():
    assert interval_arith(I(1, 1), I(2, 2), "add").lower == 3
    assert interval_arith(I(1, 1), I(2, 2), "add").is_exact
    prod = interval_arith(I(-1, 1), I(-1, 1), "mul")
    assert (prod.lower, prod.upper) == (-1, 1)
    diff = interval_arith(I(1, 2), I(1, 2), "sub")
    assert (diff.lower, diff.upper) == (-1, 1)


def test_division():
    q = interval_div(I(4, 4), I(2, 2))
    assert q.is_exact and q.lower == 2
    for p in (8, 20, 64, 200):
        third = interval_div(I(1, 1, p), I(3, 3, p))
        assert third.contains(Fraction(1, 3))
        assert third.width <= Fraction(2) ** (1 - p)
    with pytest.raises(DivisorStraddlesZero):
        interval_div(I(1, 1), I(-1, 1))


def test_roots():
    assert interval_root(I(4, 4), 2).lower == 2 and interval_root(I(4, 4), 2).is_exact
    r = interval_root(I(256, 256), 4)
    assert r.lower == r.upper == 4
    assert interval_root(I(27, 27), 3).lower == 3
    assert interval_root(I(-8, -8), 3).lower == -2
    with pytest.raises(NegativeEvenRoot):
        interval_root(I(-1, 1), 2)


def test_sqrt3_against_integer_reference():
    # 60 decimal digits of sqrt(3) from isqrt(3 * 10**120)
    ref_lo = Fraction(isqrt(3 * 10 ** 120), 10 ** 60)
    ref_hi = ref_lo + Fraction(1, 10 ** 60)
    for p in (16, 64, 180):
        r = interval_root(DyadicInterval.exact(3, p), 2)
        assert r.width <= Fraction(2) ** (2 - p)
        assert r.lower <= ref_hi and ref_lo <= r.upper
        assert r.lower ** 2 <= 3 <= r.upper ** 2


def test_compare3_examples():
    assert compare3(I(1, 2), I(3, 4)) is True
    assert compare3(I(3, 4), I(1, 2)) is False
    assert compare3(I(1, 3), I(2, 4)) is None


def test_floor_ceil_examples():
    assert floor_partial(I(Fraction(16, 5), Fraction(17, 5))) == 3
    assert floor_partial(I(Fraction(29, 10), Fraction(31, 10))) is None
    assert floor_partial(I(Fraction(-1, 2), Fraction(-2, 5))) == -1
    assert ceil_partial(I(Fraction(16, 5), Fraction(17, 5))) == 4
    assert ceil_partial(I(Fraction(-1, 2), Fraction(-2, 5))) == 0
    assert ceil_partial(I(Fraction(29, 10), Fraction(31, 10))) is None


@given(st.integers(0, 10 ** 40), st.integers(2, 4))
def test_integer_roots_bracket(n, k):
    lo, hi = iroot_floor(n, k), iroot_ceil(n, k)
    assert lo ** k <= n < (lo + 1) ** k
    assert (hi - 1) ** k < n <= hi ** k or n == hi == 0


# -- randomized differential testing against exact rationals ---------------

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=10 ** 6)
positive = st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=10 ** 6)
precisions = st.sampled_from([8, 16, 32, 64, 128, 256, 512, 1024])

OPS = ("add", "sub", "mul", "div", "sqrt", "cbrt")


@st.composite
def expressions(draw, depth=3):
    """A random expression DAG as nested tuples over rational leaves."""
    if depth == 0 or draw(st.booleans()):
        return draw(rationals)
    op = draw(st.sampled_from(OPS))
    if op in ("sqrt", "cbrt"):
        return (op, draw(expressions(depth=depth - 1)))
    return (op, draw(expressions(depth=depth - 1)), draw(expressions(depth=depth - 1)))


class Skip(Exception):
    pass


def evaluate(expr, prec):
    """(exact rational or None, interval).  Roots are tracked only by bracketing."""
    if isinstance(expr, Fraction):
        return expr, DyadicInterval.exact(expr, prec)
    op = expr[0]
    if op in ("sqrt", "cbrt"):
        xv, xi = evaluate(expr[1], prec)
        k = 2 if op == "sqrt" else 3
        if k == 2 and xi.lo < 0:
            raise Skip
        ri = xi.root(k)
        # exact value is irrational in general: check k-th powers bracket the radicand
        lo, hi = ri.lower, ri.upper
        if xv is not None:
            pw = (lambda z: z ** k)
            assert pw(lo) <= xv <= pw(hi)
        return None, ri
    (xv, xi), (yv, yi) = evaluate(expr[1], prec), evaluate(expr[2], prec)
    if op == "div":
        if not yi.excludes_zero():
            raise Skip
        out = xi / yi
        value = xv / yv if xv is not None and yv is not None else None
    else:
        out = interval_arith(xi, yi, op)
        value = None if xv is None or yv is None else {
            "add": lambda: xv + yv, "sub": lambda: xv - yv, "mul": lambda: xv * yv}[op]()
    for a in (xi, yi):
        assert a.lower <= a.upper
    if value is not None:
        assert out.contains(value)
    # containment of the image of the operand boxes at the corners
    if op != "div" or yi.excludes_zero():
        for x in (xi.lower, xi.upper):
            for y in (yi.lower, yi.upper):
                corner = {"add": lambda: x + y, "sub": lambda: x - y, "mul": lambda: x * y,
                          "div": lambda: x / y}[op]()
                assert out.contains(corner)
    return value, out


@settings(max_examples=300, deadline=None)
@given(expressions(), precisions)
def test_containment_soundness(expr, prec):
    try:
        evaluate(expr, prec)
    except Skip:
        pass


@settings(max_examples=300, deadline=None)
@given(rationals, rationals, precisions)
def test_decisions_never_wrong(x, y, prec):
    xi, yi = DyadicInterval.exact(x, prec), DyadicInterval.exact(y, prec)
    c = compare3(xi, yi)
    if c is not None:
        assert c == (x < y)
    f = floor_partial(xi)
    if f is not None:
        assert f == (x.numerator // x.denominator)
    g = ceil_partial(xi)
    if g is not None:
        assert g == -((-x.numerator) // x.denominator)


@settings(max_examples=200, deadline=None)
@given(positive, st.sampled_from([2, 3, 4]), st.sampled_from([16, 64, 256]))
def test_refinement_and_width(x, k, prec):
    coarse = DyadicInterval.exact(x, prec).root(k)
    fine = DyadicInterval.exact(x, 2 * prec).root(k)
    slack = Fraction(2) ** -prec * max(1, coarse.upper)
    assert coarse.lower - slack <= fine.lower <= fine.upper <= coarse.upper + slack
    assert fine.width <= coarse.width or coarse.width <= slack
    # relative width is O(2^-p)
    assert coarse.width <= Fraction(2) ** (3 - prec) * max(1, coarse.upper)


@settings(max_examples=200, deadline=None)
@given(rationals, positive, precisions)
def test_width_control_of_primitives(x, y, prec):
    xi, yi = DyadicInterval.exact(x, prec), DyadicInterval.exact(y, prec)
    scale = (abs(x) + 1) * (abs(y) + 1) * (1 / y + 1) ** 2
    eps = Fraction(2) ** (4 - prec) * scale
    for out in (xi + yi, xi - yi, xi * yi, xi / yi):
        assert out.width <= eps
