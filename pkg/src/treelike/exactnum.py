"""Exact arithmetic over dyadic rationals and the quadratic extension by sqrt(2).

Every length, coordinate and height produced by the tower construction is of
the form ``a + b*sqrt(2)`` with ``a`` and ``b`` dyadic, so these two types are
all the verification code needs.  No floats are involved; ``float()`` exists
only for rendering.
"""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Union

import numpy as np

__all__ = [
    "Dyadic",
    "Quad",
    "ZERO",
    "ONE",
    "HALF",
    "SQRT2",
    "quad_arith",
    "quad_sign",
    "cmp_sqrt_vs_quad",
    "common_exponent",
    "quad_sign_array",
]

DyadicLike = Union["Dyadic", int]


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


@total_ordering
class Dyadic:
    """The rational number ``num / 2**exp``, kept in canonical form.

    Canonical means ``num`` is odd, or ``num == exp == 0``.
    """

    __slots__ = ("num", "exp")

    def __init__(self, num: int = 0, exp: int = 0):
        if exp < 0:
            num <<= -exp
            exp = 0
        if num == 0:
            exp = 0
        elif exp:
            tz = (num & -num).bit_length() - 1
            if tz:
                k = tz if tz < exp else exp
                num >>= k
                exp -= k
        self.num = num
        self.exp = exp

    @classmethod
    def coerce(cls, x: DyadicLike) -> "Dyadic":
        if isinstance(x, Dyadic):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        if isinstance(x, Fraction):
            return cls.from_fraction(x)
        raise TypeError(f"cannot interpret {x!r} as a dyadic rational")

    @classmethod
    def from_fraction(cls, f: Fraction) -> "Dyadic":
        den = f.denominator
        if den & (den - 1):
            raise ValueError(f"{f} is not a dyadic rational")
        return cls(f.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Parse ``"3"``, ``"-5/8"`` or ``"0.375"``."""
        return cls.from_fraction(Fraction(text))

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Dyadic):
            if isinstance(other, int):
                other = Dyadic(other)
            else:
                return NotImplemented
        e1, e2 = self.exp, other.exp
        if e1 >= e2:
            return Dyadic(self.num + (other.num << (e1 - e2)), e1)
        return Dyadic((self.num << (e2 - e1)) + other.num, e2)

    __radd__ = __add__

    def __neg__(self):
        d = Dyadic.__new__(Dyadic)
        d.num, d.exp = -self.num, self.exp
        return d

    def __sub__(self, other):
        if not isinstance(other, Dyadic):
            if isinstance(other, int):
                other = Dyadic(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Dyadic):
            return Dyadic(self.num * other.num, self.exp + other.exp)
        if isinstance(other, int):
            return Dyadic(self.num * other, self.exp)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Exact division; raises ValueError if the quotient is not dyadic."""
        other = Dyadic.coerce(other)
        if other.num == 0:
            raise ZeroDivisionError("dyadic division by zero")
        return Dyadic.from_fraction(self.to_fraction() / other.to_fraction())

    def half(self, k: int = 1) -> "Dyadic":
        return Dyadic(self.num, self.exp + k)

    def __abs__(self):
        return self if self.num >= 0 else -self

    # comparison -----------------------------------------------------------

    def sign(self) -> int:
        return _sign(self.num)

    def _cmp(self, other: "Dyadic") -> int:
        e1, e2 = self.exp, other.exp
        if e1 >= e2:
            return _sign(self.num - (other.num << (e1 - e2)))
        return _sign((self.num << (e2 - e1)) - other.num)

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.num == other.num and self.exp == other.exp
        if isinstance(other, int):
            return self.exp == 0 and self.num == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        elif not isinstance(other, Dyadic):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        return hash((self.num, self.exp))

    def __bool__(self):
        return self.num != 0

    # conversion -----------------------------------------------------------

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def scaled(self, k: int) -> int:
        """The integer ``self * 2**k``; requires ``k >= self.exp``."""
        if k < self.exp:
            raise ValueError(f"2**{k} does not clear the denominator of {self}")
        return self.num << (k - self.exp)

    def __float__(self):
        return self.num / (1 << self.exp)

    def __repr__(self):
        return f"Dyadic({self})"

    def __str__(self):
        return str(self.num) if self.exp == 0 else f"{self.num}/{1 << self.exp}"

    def to_json(self) -> dict:
        return {"num": str(self.num), "exp": self.exp}

    @classmethod
    def from_json(cls, obj) -> "Dyadic":
        if isinstance(obj, dict):
            return cls(int(obj["num"]), int(obj["exp"]))
        if isinstance(obj, int) and not isinstance(obj, bool):
            return cls(obj)
        if isinstance(obj, str):
            return cls.parse(obj)
        raise ValueError(f"bad dyadic encoding: {obj!r}")


ZERO_D = Dyadic(0)
ONE_D = Dyadic(1)


@total_ordering
class Quad:
    """The real number ``rat + irr*sqrt(2)`` with dyadic coefficients."""

    __slots__ = ("rat", "irr")

    def __init__(self, rat: DyadicLike = 0, irr: DyadicLike = 0):
        self.rat = rat if isinstance(rat, Dyadic) else Dyadic.coerce(rat)
        self.irr = irr if isinstance(irr, Dyadic) else Dyadic.coerce(irr)

    @classmethod
    def coerce(cls, x) -> "Quad":
        if isinstance(x, Quad):
            return x
        return cls(Dyadic.coerce(x), ZERO_D)

    def __add__(self, other):
        if not isinstance(other, Quad):
            if isinstance(other, (Dyadic, int)):
                return Quad(self.rat + other, self.irr)
            return NotImplemented
        return Quad(self.rat + other.rat, self.irr + other.irr)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.rat, -self.irr)

    def __sub__(self, other):
        if not isinstance(other, Quad):
            if isinstance(other, (Dyadic, int)):
                return Quad(self.rat - other, self.irr)
            return NotImplemented
        return Quad(self.rat - other.rat, self.irr - other.irr)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Quad):
            a, b, c, d = self.rat, self.irr, other.rat, other.irr
            return Quad(a * c + (b * d) * 2, a * d + b * c)
        if isinstance(other, (Dyadic, int)):
            return Quad(self.rat * other, self.irr * other)
        return NotImplemented

    __rmul__ = __mul__

    def half(self, k: int = 1) -> "Quad":
        return Quad(self.rat.half(k), self.irr.half(k))

    def conjugate(self) -> "Quad":
        return Quad(self.rat, -self.irr)

    def norm(self) -> Dyadic:
        """``rat**2 - 2*irr**2``, the product with the conjugate."""
        return self.rat * self.rat - (self.irr * self.irr) * 2

    def exact_ratio(self, other: "Quad") -> Dyadic:
        """The dyadic ``self / other``; raises ValueError when it is not one."""
        other = Quad.coerce(other)
        if not other:
            raise ZeroDivisionError("division by zero Quad")
        # self/other = self * conj(other) / norm(other)
        num = self * other.conjugate()
        den = other.norm()
        if num.irr:
            raise ValueError(f"{self} / {other} is irrational")
        return num.rat / den

    def sign(self) -> int:
        return quad_sign(self)

    def __eq__(self, other):
        if isinstance(other, Quad):
            return self.rat == other.rat and self.irr == other.irr
        if isinstance(other, (Dyadic, int)):
            return not self.irr and self.rat == other
        return NotImplemented

    def __lt__(self, other):
        if not isinstance(other, Quad):
            if isinstance(other, (Dyadic, int)):
                other = Quad.coerce(other)
            else:
                return NotImplemented
        return quad_sign(self - other) < 0

    def __hash__(self):
        if not self.irr:
            return hash(self.rat)
        return hash((self.rat, self.irr))

    def __bool__(self):
        return bool(self.rat) or bool(self.irr)

    def __abs__(self):
        return -self if quad_sign(self) < 0 else self

    def square(self) -> "Quad":
        return self * self

    def __float__(self):
        return float(self.rat) + float(self.irr) * 2 ** 0.5

    def __repr__(self):
        return f"Quad({self})"

    def __str__(self):
        if not self.irr:
            return str(self.rat)
        irr = "√2" if self.irr == 1 else f"({self.irr})√2"
        if not self.rat:
            return irr
        return f"{self.rat} + {irr}"

    def to_json(self) -> dict:
        return {"rat": self.rat.to_json(), "irr": self.irr.to_json()}

    @classmethod
    def from_json(cls, obj) -> "Quad":
        if isinstance(obj, dict) and "rat" in obj:
            return cls(Dyadic.from_json(obj["rat"]), Dyadic.from_json(obj["irr"]))
        return cls(Dyadic.from_json(obj))


ZERO = Quad(0, 0)
ONE = Quad(1, 0)
HALF = Quad(Dyadic(1, 1), 0)
SQRT2 = Quad(0, 1)


def quad_arith(op: str, x: Quad, y: Quad) -> Quad:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    raise ValueError(f"unknown operation {op!r}")


def _sign_rat_irr(a: int, b: int) -> int:
    # sign of a + b*sqrt(2) for integers a, b
    sa, sb = _sign(a), _sign(b)
    if sa == sb or sb == 0:
        return sa
    if sa == 0:
        return sb
    # opposite signs: compare a^2 with 2 b^2
    return sa * _sign(a * a - 2 * b * b)


def quad_sign(x: Quad) -> int:
    """Sign of ``x.rat + x.irr*sqrt(2)`` computed without rounding."""
    a, b = x.rat, x.irr
    k = max(a.exp, b.exp)
    return _sign_rat_irr(a.scaled(k), b.scaled(k))


def cmp_sqrt_vs_quad(n: DyadicLike, q: Quad) -> int:
    """Sign of ``sqrt(n) - q`` for a dyadic ``n >= 0``."""
    n = Dyadic.coerce(n)
    if n.sign() < 0:
        raise ValueError("square root of a negative number")
    q = Quad.coerce(q)
    if quad_sign(q) < 0:
        return 1
    # both sides nonnegative: compare the squares
    return quad_sign(Quad(n) - q * q)


def common_exponent(values: Iterable) -> int:
    """Smallest ``k`` such that every Dyadic or Quad coefficient is an integer at scale ``2**k``."""
    k = 0
    for v in values:
        if isinstance(v, Quad):
            k = max(k, v.rat.exp, v.irr.exp)
        else:
            k = max(k, v.exp)
    return k


def quad_sign_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise sign of ``a + b*sqrt(2)`` for integer arrays.

    The caller is responsible for choosing a dtype wide enough for ``a*a``
    and ``2*b*b`` (use ``dtype=object`` when in doubt).
    """
    sa = np.sign(a)
    sb = np.sign(b)
    out = np.where((sa == sb) | (sb == 0), sa, sb)
    mixed = (sa != 0) & (sb != 0) & (sa != sb)
    if np.any(mixed):
        am, bm = a[mixed], b[mixed]
        out[mixed] = sa[mixed] * np.sign(am * am - 2 * bm * bm)
    return out
