from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from treelike.exactnum import (HALF, ONE, SQRT2, ZERO, Dyadic, Quad, cmp_sqrt_vs_quad, common_exponent,
                               quad_arith, quad_sign, quad_sign_array)

from conftest import dyadics, frac, nonneg_dyadics, quads

mpmath.mp.dps = 80


def mp_value(q: Quad):
    return mpmath.mpf(q.rat.num) / 2 ** q.rat.exp + mpmath.mpf(q.irr.num) / 2 ** q.irr.exp * mpmath.sqrt(2)


def mp_sign(x) -> int:
    # interval oracle: the sign is certain when the interval excludes zero
    iv = mpmath.iv.mpf(x)
    if iv.a > 0:
        return 1
    if iv.b < 0:
        return -1
    return 0


# -- Dyadic -----------------------------------------------------------------

def test_dyadic_canonical_form():
    assert (Dyadic(6, 3).num, Dyadic(6, 3).exp) == (3, 2)
    assert (Dyadic(0, 7).num, Dyadic(0, 7).exp) == (0, 0)
    assert (Dyadic(8, 2).num, Dyadic(8, 2).exp) == (2, 0)
    assert Dyadic(3, 2) == Dyadic(12, 4)
    assert hash(Dyadic(3, 2)) == hash(Dyadic(12, 4))


def test_dyadic_negative_exponent_is_scaled_up():
    assert Dyadic(3, -2) == Dyadic(12)


def test_dyadic_parse_and_json():
    assert Dyadic.parse("-5/8") == Dyadic(-5, 3)
    assert Dyadic.parse("0.375") == Dyadic(3, 3)
    with pytest.raises(ValueError):
        Dyadic.parse("1/3")
    d = Dyadic(-5, 3)
    assert d.to_json() == {"num": "-5", "exp": 3}
    assert Dyadic.from_json(d.to_json()) == d
    assert Dyadic.from_json(7) == Dyadic(7)
    assert Dyadic.from_json("3/8") == Dyadic(3, 3)


def test_dyadic_json_survives_huge_numerators():
    d = Dyadic(2 ** 100 + 1, 5)
    assert Dyadic.from_json(d.to_json()) == d
    assert isinstance(d.to_json()["num"], str)


def test_dyadic_division_is_exact_or_raises():
    assert Dyadic(3, 2) / Dyadic(3, 1) == Dyadic(1, 1)
    with pytest.raises(ValueError):
        Dyadic(1) / Dyadic(3)
    with pytest.raises(ZeroDivisionError):
        Dyadic(1) / Dyadic(0)


@given(dyadics, dyadics)
def test_dyadic_arithmetic_matches_fractions(a, b):
    assert frac(a + b) == frac(a) + frac(b)
    assert frac(a - b) == frac(a) - frac(b)
    assert frac(a * b) == frac(a) * frac(b)
    assert (a < b) == (frac(a) < frac(b))
    assert frac(a.half(3)) == frac(a) / 8


@given(dyadics)
def test_dyadic_stays_canonical(a):
    # odd numerator, or an integer with exponent 0
    assert a.num % 2 == 1 or a.exp == 0
    if a.num == 0:
        assert a.exp == 0
    assert Dyadic.from_fraction(frac(a)) == a


# -- Quad -------------------------------------------------------------------

def test_quad_arith_examples():
    assert quad_arith("add", Quad(1, 0), Quad(0, 1)) == Quad(1, 1)
    assert quad_arith("mul", Quad(0, 1), Quad(0, 1)) == Quad(2, 0)
    diff = quad_arith("sub", Quad(0, Dyadic(1, 1)), Quad(Dyadic(1, 1), 0))
    assert diff == Quad(Dyadic(-1, 1), Dyadic(1, 1))
    assert quad_sign(diff) == 1
    assert quad_arith("neg", Quad(1, 1), ZERO) == Quad(-1, -1)
    with pytest.raises(ValueError):
        quad_arith("div", ONE, ONE)


def test_quad_sign_examples():
    assert quad_sign(Quad(0, 0)) == 0
    assert quad_sign(Quad(-1, 1)) == 1
    # 3 - 2*sqrt(2) > 0 because 9 > 8
    assert quad_sign(Quad(3, -2)) == 1
    assert quad_sign(Quad(-3, 2)) == -1


def test_cmp_sqrt_vs_quad_examples():
    assert cmp_sqrt_vs_quad(Dyadic(2), Quad(0, 1)) == 0
    assert cmp_sqrt_vs_quad(Dyadic(1, 1), Quad(0, Dyadic(1, 1))) == 0
    assert cmp_sqrt_vs_quad(Dyadic(1), Quad(Dyadic(1, 1), Dyadic(1, 1))) == -1
    assert cmp_sqrt_vs_quad(Dyadic(1), Quad(-5)) == 1
    with pytest.raises(ValueError):
        cmp_sqrt_vs_quad(Dyadic(-1), ONE)


def test_constants():
    assert HALF + HALF == ONE
    assert SQRT2 * SQRT2 == Quad(2)
    assert SQRT2.half() * SQRT2 == ONE


def test_exact_ratio():
    assert (SQRT2.half(2)).exact_ratio(SQRT2) == Dyadic(1, 2)
    assert Quad(3, 3).exact_ratio(Quad(1, 1)) == Dyadic(3)
    with pytest.raises(ValueError):
        ONE.exact_ratio(SQRT2)


def test_quad_json_and_hash():
    q = Quad(Dyadic(-3, 4), Dyadic(5, 1))
    assert Quad.from_json(q.to_json()) == q
    assert q.to_json() == {"rat": {"num": "-3", "exp": 4}, "irr": {"num": "5", "exp": 1}}
    assert hash(Quad(Dyadic(3, 2))) == hash(Dyadic(3, 2))
    assert Quad(Dyadic(3, 2)) == Dyadic(3, 2)


@given(dyadics, dyadics, dyadics, dyadics)
def test_quad_sign_agrees_with_interval_oracle(a, b, c, d):
    x = Quad(a, b) - Quad(c, d)
    assert quad_sign(x) == mp_sign(mp_value(x))


@given(nonneg_dyadics, quads)
def test_cmp_sqrt_vs_quad_agrees_with_interval_oracle(n, q):
    got = cmp_sqrt_vs_quad(n, q)
    want = mp_sign(mpmath.sqrt(mpmath.mpf(n.num) / 2 ** n.exp) - mp_value(q))
    # the oracle cannot certify exact ties; those have exact witnesses instead
    if want == 0:
        assert quad_sign(q) >= 0 and q * q == Quad(n)
    else:
        assert got == want


@given(nonneg_dyadics, quads)
def test_cmp_zero_iff_square_root(n, q):
    assert (cmp_sqrt_vs_quad(n, q) == 0) == (quad_sign(q) >= 0 and q * q == Quad(n))


@given(quads, quads, quads)
def test_field_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == ZERO


@given(quads, quads)
def test_quad_ordering_is_total_and_consistent(x, y):
    assert sum([x < y, x == y, y < x]) == 1
    assert (x < y) == (mp_sign(mp_value(y - x)) > 0)


@given(st.lists(st.tuples(st.integers(-2 ** 40, 2 ** 40), st.integers(-2 ** 40, 2 ** 40)), min_size=1, max_size=40))
def test_quad_sign_array_matches_scalar(pairs):
    a = np.array([p[0] for p in pairs], dtype=object)
    b = np.array([p[1] for p in pairs], dtype=object)
    got = quad_sign_array(a, b)
    assert [int(s) for s in got] == [quad_sign(Quad(x, y)) for x, y in pairs]


def test_quad_sign_array_int64():
    a = np.array([3, -3, 1, -1, 0, 0], dtype=np.int64)
    b = np.array([-2, 2, 1, -1, 1, 0], dtype=np.int64)
    assert list(quad_sign_array(a, b)) == [1, -1, 1, -1, 1, 0]


def test_common_exponent():
    assert common_exponent([Dyadic(1, 3), Quad(Dyadic(1, 1), Dyadic(1, 5))]) == 5
    assert common_exponent([]) == 0
    assert Dyadic(3, 2).scaled(5) == 24
    with pytest.raises(ValueError):
        Dyadic(3, 2).scaled(1)


def test_float_only_for_display():
    assert abs(float(SQRT2) - 2 ** 0.5) < 1e-15
    assert float(Dyadic(3, 3)) == 0.375
    assert Fraction(3, 8) == Dyadic(3, 3).to_fraction()
