"""Outward-rounded dyadic interval arithmetic.

An interval is stored as ``[lo * 2**exp, hi * 2**exp]`` with integer
``lo <= hi``.  After every operation the mantissas are truncated to
``prec + GUARD_BITS`` significant bits, rounding the lower endpoint down
and the upper endpoint up, so the exact result of the operation is always
contained in the returned interval.

Decisions on intervals are three-valued: ``True``, ``False`` or ``None``
(unknown at the current precision).
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Optional, Union

import gmpy2

GUARD_BITS = 8

Number = Union[int, Fraction, "DyadicInterval"]


class DivisorStraddlesZero(ZeroDivisionError):
    pass


class NegativeEvenRoot(ValueError):
    pass


# above this size GMP's subquadratic division and square root beat CPython's
_GMP_BITS = 2048


def _floordiv(n: int, d: int) -> int:
    if n.bit_length() > _GMP_BITS:
        return int(gmpy2.mpz(n) // d)
    return n // d


def _isqrt(n: int) -> int:
    if n.bit_length() > _GMP_BITS:
        return int(gmpy2.isqrt(n))
    return isqrt(n)


def _norm(lo: int, hi: int, exp: int, prec: int) -> "DyadicInterval":
    excess = max(abs(lo), abs(hi)).bit_length() - prec - GUARD_BITS
    if excess > 0:
        lo >>= excess
        hi = -((-hi) >> excess)
        exp += excess
    return DyadicInterval(lo, hi, exp, prec)


def iroot_floor(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, by integer Newton iteration."""
    if n < 2:
        return n
    if k == 2:
        return _isqrt(n)
    if k == 4:
        return _isqrt(_isqrt(n))
    x = 1 << -(-n.bit_length() // k)  # >= true root
    while True:
        y = ((k - 1) * x + _floordiv(n, x ** (k - 1))) // k
        if y >= x:
            return x
        x = y


def iroot_ceil(n: int, k: int) -> int:
    r = iroot_floor(n, k)
    return r if r ** k == n else r + 1


class DyadicInterval:
    """Closed interval with dyadic endpoints and a working precision in bits."""

    __slots__ = ("lo", "hi", "exp", "prec")

    def __init__(self, lo: int, hi: int, exp: int = 0, prec: int = 64):
        if lo > hi:
            raise ValueError(f"empty interval: lo={lo} > hi={hi}")
        self.lo = lo
        self.hi = hi
        self.exp = exp
        self.prec = prec

    # -- construction -----------------------------------------------------

    @classmethod
    def exact(cls, value: Union[int, Fraction], prec: int = 64) -> "DyadicInterval":
        """Interval for an integer or rational; exact when the value is dyadic."""
        if isinstance(value, int):
            return cls(value, value, 0, prec)
        num, den = value.numerator, value.denominator
        if den & (den - 1) == 0:
            e = den.bit_length() - 1
            return cls(num, num, -e, prec)
        shift = prec + GUARD_BITS + den.bit_length() - num.bit_length() + 1
        shift = max(shift, 0)
        lo = (num << shift) // den
        return _norm(lo, lo + 1, -shift, prec)

    @classmethod
    def from_bounds(cls, lower: Union[int, Fraction], upper: Union[int, Fraction],
                    prec: int = 64) -> "DyadicInterval":
        lo = cls.exact(lower, prec)
        hi = cls.exact(upper, prec)
        return lo.hull(hi)

    def with_prec(self, prec: int) -> "DyadicInterval":
        return _norm(self.lo, self.hi, self.exp, prec)

    # -- inspection -------------------------------------------------------

    @property
    def lower(self) -> Fraction:
        return Fraction(self.lo) * Fraction(2) ** self.exp

    @property
    def upper(self) -> Fraction:
        return Fraction(self.hi) * Fraction(2) ** self.exp

    @property
    def width(self) -> Fraction:
        return Fraction(self.hi - self.lo) * Fraction(2) ** self.exp

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def contains(self, value: Union[int, Fraction]) -> bool:
        return self.lower <= value <= self.upper

    def contains_interval(self, other: "DyadicInterval") -> bool:
        return self.lower <= other.lower and other.upper <= self.upper

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def hull(self, other: "DyadicInterval") -> "DyadicInterval":
        e = min(self.exp, other.exp)
        lo = min(self.lo << (self.exp - e), other.lo << (other.exp - e))
        hi = max(self.hi << (self.exp - e), other.hi << (other.exp - e))
        return _norm(lo, hi, e, max(self.prec, other.prec))

    def __float__(self) -> float:
        return float(self.midpoint())

    def __repr__(self) -> str:
        if self.is_exact:
            return f"DyadicInterval({self.lower}, prec={self.prec})"
        return f"DyadicInterval([{float(self.lower)!r}, {float(self.upper)!r}], prec={self.prec})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DyadicInterval):
            return NotImplemented
        return self.lower == other.lower and self.upper == other.upper

    def __hash__(self) -> int:
        return hash((self.lower, self.upper))

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: Number) -> "DyadicInterval":
        if isinstance(other, DyadicInterval):
            return other
        if isinstance(other, (int, Fraction)):
            return DyadicInterval.exact(other, self.prec)
        raise TypeError(f"unsupported operand {other!r}")

    def __neg__(self) -> "DyadicInterval":
        return DyadicInterval(-self.hi, -self.lo, self.exp, self.prec)

    def __add__(self, other: Number) -> "DyadicInterval":
        if isinstance(other, int):
            if self.exp >= 0:
                e = 0
                lo, hi = self.lo << self.exp, self.hi << self.exp
            else:
                e = self.exp
                lo, hi = self.lo, self.hi
                other <<= -e
            return _norm(lo + other, hi + other, e, self.prec)
        y = self._coerce(other)
        ex, ey = self.exp, y.exp
        if ex == ey:
            return _norm(self.lo + y.lo, self.hi + y.hi, ex, max(self.prec, y.prec))
        if ex < ey:
            s = ey - ex
            return _norm(self.lo + (y.lo << s), self.hi + (y.hi << s), ex, max(self.prec, y.prec))
        s = ex - ey
        return _norm((self.lo << s) + y.lo, (self.hi << s) + y.hi, ey, max(self.prec, y.prec))

    __radd__ = __add__

    def __sub__(self, other: Number) -> "DyadicInterval":
        if isinstance(other, int):
            return self.__add__(-other)
        return self.__add__(-self._coerce(other))

    def __rsub__(self, other: Number) -> "DyadicInterval":
        return (-self).__add__(other)

    def __mul__(self, other: Number) -> "DyadicInterval":
        if isinstance(other, int):
            if other >= 0:
                return _norm(self.lo * other, self.hi * other, self.exp, self.prec)
            return _norm(self.hi * other, self.lo * other, self.exp, self.prec)
        y = self._coerce(other)
        prec = max(self.prec, y.prec)
        # outward-round long exact operands first; the product keeps only prec bits
        x, y = _norm(self.lo, self.hi, self.exp, prec + 2), _norm(y.lo, y.hi, y.exp, prec + 2)
        a, b, c, d = x.lo, x.hi, y.lo, y.hi
        if a >= 0 and c >= 0:
            lo, hi = a * c, b * d
        elif b <= 0 and d <= 0:
            lo, hi = b * d, a * c
        elif a >= 0 and d <= 0:
            lo, hi = b * c, a * d
        elif b <= 0 and c >= 0:
            lo, hi = a * d, b * c
        else:
            p = (a * c, a * d, b * c, b * d)
            lo, hi = min(p), max(p)
        return _norm(lo, hi, x.exp + y.exp, prec)

    __rmul__ = __mul__

    def square(self) -> "DyadicInterval":
        a, b = self.lo, self.hi
        if a >= 0:
            lo, hi = a * a, b * b
        elif b <= 0:
            lo, hi = b * b, a * a
        else:
            lo, hi = 0, max(a * a, b * b)
        return _norm(lo, hi, 2 * self.exp, self.prec)

    def __truediv__(self, other: Number) -> "DyadicInterval":
        y = self._coerce(other)
        if not y.excludes_zero():
            raise DivisorStraddlesZero(f"divisor {y!r} contains zero")
        prec = max(self.prec, y.prec)
        x = _norm(self.lo, self.hi, self.exp, prec + 2)
        rounded = _norm(y.lo, y.hi, y.exp, prec + 2)
        # rounding a very wide divisor may reach zero; keep it exact then
        y = rounded if rounded.excludes_zero() else y
        nums = (x.lo, x.hi)
        dens = (y.lo, y.hi)
        top = max(abs(x.lo), abs(x.hi)).bit_length()
        bot = max(abs(y.lo), abs(y.hi)).bit_length()
        shift = prec + GUARD_BITS + 2 + bot - top
        lows = []
        highs = []
        for n in nums:
            for d in dens:
                if shift >= 0:
                    nn, dd = n << shift, d
                else:
                    nn, dd = n, d << -shift
                if dd < 0:
                    nn, dd = -nn, -dd
                q = _floordiv(nn, dd)
                lows.append(q)
                highs.append(q if q * dd == nn else q + 1)
        return _norm(min(lows), max(highs), x.exp - y.exp - shift, prec)

    def __rtruediv__(self, other: Number) -> "DyadicInterval":
        return self._coerce(other).__truediv__(self)

    def __pow__(self, k: int) -> "DyadicInterval":
        if k == 2:
            return self.square()
        if k < 0:
            return 1 / (self ** -k)
        out = DyadicInterval(1, 1, 0, self.prec)
        for _ in range(k):
            out = out * self
        return out

    def root(self, k: int) -> "DyadicInterval":
        """Interval containing the real k-th roots of every point (k in 2..4)."""
        if k < 1:
            raise ValueError("root order must be positive")
        if k == 1:
            return self
        if self.lo < 0:
            if k % 2 == 0:
                raise NegativeEvenRoot(f"even root of {self!r}")
            if self.hi <= 0:
                return -(-self).root(k)
            return (-DyadicInterval(-self.lo, 0, self.exp, self.prec).root(k)).hull(
                DyadicInterval(0, self.hi, self.exp, self.prec).root(k))
        prec = self.prec
        target = prec + GUARD_BITS + 2
        top = self.hi.bit_length() + self.exp
        # scale so the radicand carries about k * target bits
        e_out = (top - k * target) // k
        s = self.exp - k * e_out
        if s >= 0:
            lo_n, hi_n = self.lo << s, self.hi << s
        else:
            lo_n = self.lo >> -s
            hi_n = -((-self.hi) >> -s)
        return _norm(iroot_floor(lo_n, k), iroot_ceil(hi_n, k), e_out, prec)

    def sqrt(self) -> "DyadicInterval":
        return self.root(2)


def interval_arith(x: DyadicInterval, y: DyadicInterval, op: str) -> DyadicInterval:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown op {op!r}")


def interval_div(x: DyadicInterval, y: DyadicInterval) -> DyadicInterval:
    return x / y


def interval_root(x: DyadicInterval, k: int) -> DyadicInterval:
    return x.root(k)


def compare3(x: Number, y: Number) -> Optional[bool]:
    """Decide ``x < y``; ``None`` when the intervals overlap."""
    if not isinstance(x, DyadicInterval):
        x = y._coerce(x)
    if not isinstance(y, DyadicInterval):
        y = x._coerce(y)
    e = min(x.exp, y.exp)
    xlo, xhi = x.lo << (x.exp - e), x.hi << (x.exp - e)
    ylo, yhi = y.lo << (y.exp - e), y.hi << (y.exp - e)
    if xhi < ylo:
        return True
    if xlo > yhi:
        return False
    return None


def _floor_dyadic(m: int, e: int) -> int:
    return m << e if e >= 0 else m >> -e


def floor_partial(x: DyadicInterval) -> Optional[int]:
    lo = _floor_dyadic(x.lo, x.exp)
    return lo if lo == _floor_dyadic(x.hi, x.exp) else None


def ceil_partial(x: DyadicInterval) -> Optional[int]:
    lo = -_floor_dyadic(-x.lo, x.exp)
    return lo if lo == -_floor_dyadic(-x.hi, x.exp) else None
