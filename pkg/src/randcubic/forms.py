"""Integral binary cubic forms aX^3 + bX^2Y + cXY^2 + dY^3.

GL2 acts by ``(Mf)(v) = det(M)^-1 * f(M^T v)``; under this action the
GL2(Z)-orbits of forms correspond to cubic rings, with disc(f) the ring
discriminant and Stab(f) its automorphism group.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import isqrt
from typing import Iterator, List, NamedTuple, Sequence, Tuple

from . import sturm


class ZeroDiscriminant(ValueError):
    pass


class NonUnimodular(ValueError):
    pass


class ReducibleInput(ValueError):
    pass


class CubicForm(NamedTuple):
    a: int
    b: int
    c: int
    d: int

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c}, {self.d})"

    def to_json(self) -> List[str]:
        return [str(x) for x in self]

    @classmethod
    def from_json(cls, data: Sequence) -> "CubicForm":
        if isinstance(data, str):
            data = json.loads(data)
        if len(data) != 4:
            raise ValueError("a cubic form has exactly four coefficients")
        return cls(*(int(x) for x in data))

    def __call__(self, x, y=1):
        return self.a * x**3 + self.b * x**2 * y + self.c * x * y**2 + self.d * y**3


class GL2Matrix(NamedTuple):
    """2x2 integer matrix ((p, q), (r, s))."""

    p: int
    q: int
    r: int
    s: int

    @property
    def det(self) -> int:
        return self.p * self.s - self.q * self.r

    def __matmul__(self, other: "GL2Matrix") -> "GL2Matrix":
        return GL2Matrix(
            self.p * other.p + self.q * other.r,
            self.p * other.q + self.q * other.s,
            self.r * other.p + self.s * other.r,
            self.r * other.q + self.s * other.s,
        )


IDENTITY = GL2Matrix(1, 0, 0, 1)
SWAP = GL2Matrix(0, 1, 1, 0)
FLIP = GL2Matrix(-1, 0, 0, 1)


def upper_shear(k: int = 1) -> GL2Matrix:
    return GL2Matrix(1, k, 0, 1)


def lower_shear(k: int = 1) -> GL2Matrix:
    """The matrix n(k) = ((1, 0), (k, 1))."""
    return GL2Matrix(1, 0, k, 1)


def discriminant(f: CubicForm) -> int:
    a, b, c, d = f
    return 18 * a * b * c * d + b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d


def q_value(f) -> int:
    """The O2-invariant positive definite quadratic form 5a²+b²+c²+5d²+2ac+2bd."""
    a, b, c, d = f
    return 5 * a * a + b * b + c * c + 5 * d * d + 2 * a * c + 2 * b * d


def apply_matrix(m: GL2Matrix, f: CubicForm) -> CubicForm:
    """The form (Mf)(v) = det(M)^-1 f(M^T v)."""
    det = m.det
    if det not in (1, -1):
        raise NonUnimodular(f"det {det} is not a unit")
    # f(p x + r y, q x + s y) expanded in x, y
    a, b, c, d = f
    p, q, r, s = m
    out = [
        a * p * p * p + b * p * p * q + c * p * q * q + d * q * q * q,
        3 * a * p * p * r + b * (p * p * s + 2 * p * q * r) + c * (q * q * r + 2 * p * q * s) + 3 * d * q * q * s,
        3 * a * p * r * r + b * (q * r * r + 2 * p * r * s) + c * (p * s * s + 2 * q * r * s) + 3 * d * q * s * s,
        a * r * r * r + b * r * r * s + c * r * s * s + d * s * s * s,
    ]
    if det == -1:
        out = [-c for c in out]
    return CubicForm(*out)


def signature_class(f: CubicForm) -> int:
    """Number of real roots in P^1(R): 3 if disc > 0, 1 if disc < 0."""
    disc = discriminant(f)
    if disc == 0:
        raise ZeroDiscriminant(f"{f} has zero discriminant")
    return 3 if disc > 0 else 1


def real_root_count(f: CubicForm) -> int:
    """Distinct roots of f in P^1(R) counted by Sturm sequences."""
    a, b, c, d = f
    poly = [d, c, b, a]
    if a == 0:
        return sturm.count_real_roots(poly) + 1
    return sturm.count_real_roots(poly)


def is_irreducible(f: CubicForm) -> bool:
    """True iff f has no root in P^1(Q).

    The roots of f(X, 1) are m / a for the roots m of the monic cubic
    m^3 + b m^2 + ac m + a^2 d, so a rational root exists exactly when that
    cubic has an integer root.
    """
    a, b, c, d = f
    if a == 0 or d == 0:
        return False
    c, d = a * c, a * a * d
    if max(abs(b), abs(c), abs(d)).bit_length() > _SIEVE_MIN_BITS and not _roots_mod_all(b, c, d):
        return True
    return not monic_cubic_integer_roots(b, c, d)


_SIEVE_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151)
_SIEVE_MODULUS = 1
for _p in _SIEVE_PRIMES:
    _SIEVE_MODULUS *= _p
# below this size the bisection is cheaper than the sieve
_SIEVE_MIN_BITS = 64


def _roots_mod_all(b: int, c: int, d: int) -> bool:
    """Whether m^3 + b m^2 + c m + d has a root modulo every sieve prime.

    An integer root survives reduction mod p, so a False here proves there
    is none.  Irreducible cubics lack roots mod a positive density of primes,
    and this check replaces a bisection over numbers of size ~T by a few
    small residues.
    """
    m = _SIEVE_MODULUS
    b, c, d = b % m, c % m, d % m
    for p in _SIEVE_PRIMES:
        bp, cp, dp = b % p, c % p, d % p
        if not any((((x + bp) * x + cp) * x + dp) % p == 0 for x in range(p)):
            return False
    return True


def _monotone_root(h, lo: int, hi: int):
    """Integer zero of h on [lo, hi], where h is monotone there, or None."""
    if lo > hi:
        return None
    vlo, vhi = h(lo), h(hi)
    if vlo == 0:
        return lo
    if vhi == 0:
        return hi
    if (vlo > 0) == (vhi > 0):
        return None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        v = h(mid)
        if v == 0:
            return mid
        if (v > 0) == (vlo > 0):
            lo = mid
        else:
            hi = mid
    return None


def monic_cubic_integer_roots(b: int, c: int, d: int) -> List[int]:
    """Integer roots of m^3 + b m^2 + c m + d.

    The critical points (-b -+ sqrt(b^2 - 3c)) / 3 split the line into
    monotone pieces; each piece is searched by integer bisection.
    """
    def h(m):
        return ((m + b) * m + c) * m + d

    # Fujiwara: |m| <= 2 max(|b|, |c|^(1/2), |d|^(1/3)), rounded up to powers of two
    bound = 2 * max(abs(b), 1 << (abs(c).bit_length() + 1) // 2,
                    1 << (abs(d).bit_length() + 2) // 3)
    disc = b * b - 3 * c
    if disc <= 0:
        pieces = [(-bound, bound)]
        loose = []
    else:
        r_lo = isqrt(disc)
        r_hi = r_lo if r_lo * r_lo == disc else r_lo + 1
        # x1 lies in [e1, e2] and x2 in [e3, e4]
        e1, e2 = (-b - r_hi) // 3, -((b + r_lo) // 3)
        e3, e4 = (-b + r_lo) // 3, -((b - r_hi) // 3)
        pieces = [(-bound, e1), (e2, e3), (e4, bound)]
        loose = list(range(e1 + 1, e2)) + list(range(e3 + 1, e4))
    roots = {m for m in loose if h(m) == 0}
    for lo, hi in pieces:
        m = _monotone_root(h, lo, hi)
        if m is not None:
            roots.add(m)
    return sorted(roots)


@dataclass(frozen=True)
class RingTable:
    """Multiplication in the basis (1, w1, w2); each product is a coefficient triple."""

    w1w2: Tuple[int, int, int]
    w1w1: Tuple[int, int, int]
    w2w2: Tuple[int, int, int]

    def multiply(self, x: Sequence[int], y: Sequence[int]) -> Tuple[int, int, int]:
        x0, x1, x2 = x
        y0, y1, y2 = y
        out = [x0 * y0, x0 * y1 + x1 * y0, x0 * y2 + x2 * y0]
        for k, t in ((x1 * y1, self.w1w1), (x1 * y2 + x2 * y1, self.w1w2), (x2 * y2, self.w2w2)):
            if k:
                out[0] += k * t[0]
                out[1] += k * t[1]
                out[2] += k * t[2]
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "w1*w2": [str(v) for v in self.w1w2],
            "w1*w1": [str(v) for v in self.w1w1],
            "w2*w2": [str(v) for v in self.w2w2],
        }


def ring_table(f: CubicForm) -> RingTable:
    a, b, c, d = f
    return RingTable(
        w1w2=(-a * d, 0, 0),
        w1w1=(-a * c, -b, a),
        w2w2=(-b * d, -d, c),
    )


def hessian(f: CubicForm) -> Tuple[int, int, int]:
    """Coefficients (P, Q, R) of the covariant P x^2 + Q xy + R y^2."""
    a, b, c, d = f
    return b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d


def _hessian_reduce(f: CubicForm) -> CubicForm:
    """Move f so its (positive definite) Hessian satisfies |Q| <= P <= R."""
    while True:
        p, q, r = hessian(f)
        if not -p < q <= p:
            # n(k) sends (P, Q, R) to (P, Q + 2Pk, ...)
            k = (p - q) // (2 * p)
            f = apply_matrix(lower_shear(k), f)
            continue
        if p > r:
            f = apply_matrix(SWAP, f)
            continue
        return f


def reduced_hessian(f: CubicForm) -> Tuple[int, int, int]:
    """Reduced representative of the GL2(Z)-class of the Hessian of a disc > 0 form.

    Improper equivalence identifies (P, Q, R) with (P, -Q, R), so Q >= 0.
    """
    if discriminant(f) <= 0:
        raise ValueError("the Hessian is definite only for positive discriminant")
    p, q, r = hessian(_hessian_reduce(f))
    return p, abs(q), r


_SMALL_MATRICES = tuple(
    m for m in (GL2Matrix(*e) for e in product(range(-2, 3), repeat=4)) if m.det in (1, -1)
)


def stabilizer(f: CubicForm) -> List[GL2Matrix]:
    """Elements of GL2(Z) fixing a positive discriminant form (bounded search)."""
    g = _hessian_reduce(f)
    return [m for m in _SMALL_MATRICES if apply_matrix(m, g) == g]


def stab_order(f: CubicForm) -> int:
    """Order of Stab_GL2(Z)(f) for an irreducible form: 1 or 3."""
    disc = discriminant(f)
    if disc == 0:
        raise ZeroDiscriminant(f"{f} has zero discriminant")
    if not is_irreducible(f):
        raise ReducibleInput(f"{f} is reducible over Q")
    if disc < 0:
        # fields with complex places are not Galois, so Aut is trivial
        return 1
    n = len(stabilizer(f))
    if n not in (1, 3):
        raise AssertionError(f"unexpected stabilizer order {n} for {f}")
    return n


# -- orbit canonicalization ------------------------------------------------

PRUNE_FACTOR = 64


def _neighbours(f: CubicForm) -> Iterator[CubicForm]:
    a, b, c, d = f
    # upper shear and inverse: f(x, y + x), f(x, y - x)
    yield CubicForm(a + b + c + d, b + 2 * c + 3 * d, c + 3 * d, d)
    yield CubicForm(a - b + c - d, b - 2 * c + 3 * d, c - 3 * d, d)
    # lower shear n(1) and inverse: f(x + y, y), f(x - y, y)
    yield CubicForm(a, 3 * a + b, 3 * a + 2 * b + c, a + b + c + d)
    yield CubicForm(a, b - 3 * a, 3 * a - 2 * b + c, -a + b - c + d)
    # swap and diag(-1, 1), both of determinant -1
    yield CubicForm(-d, -c, -b, -a)
    yield CubicForm(a, -b, c, -d)


def _descend(f: CubicForm) -> CubicForm:
    """Greedy walk along generators while q strictly decreases."""
    best = q_value(f)
    while True:
        for g in _neighbours(f):
            v = q_value(g)
            if v < best:
                f, best = g, v
                break
        else:
            return f


@lru_cache(maxsize=1 << 16)
def _pruned_search(f: CubicForm) -> CubicForm:
    # plain tuples and inlined generators: this loop dominates census time
    start = tuple(f)
    qmin = q_value(start)
    seen = {start: qmin}
    queue = deque([start])
    limit = PRUNE_FACTOR * qmin
    while queue:
        a, b, c, d = queue.popleft()
        for h in (
            (a + b + c + d, b + 2 * c + 3 * d, c + 3 * d, d),
            (a - b + c - d, b - 2 * c + 3 * d, c - 3 * d, d),
            (a, 3 * a + b, 3 * a + 2 * b + c, a + b + c + d),
            (a, b - 3 * a, 3 * a - 2 * b + c, -a + b - c + d),
            (-d, -c, -b, -a),
            (a, -b, c, -d),
        ):
            if h in seen:
                continue
            ha, hb, hc, hd = h
            v = 5 * ha * ha + hb * hb + hc * hc + 5 * hd * hd + 2 * ha * hc + 2 * hb * hd
            seen[h] = v
            if v > limit:
                continue
            if v < qmin:
                qmin = v
                limit = PRUNE_FACTOR * qmin
            queue.append(h)
    return CubicForm(*min(g for g, v in seen.items() if v == qmin))


def canonicalize(f: CubicForm) -> CubicForm:
    """Distinguished representative of the GL2(Z)-orbit of f.

    Breadth-first search over the shear/swap/flip generators, pruning forms
    whose q-value exceeds PRUNE_FACTOR times the smallest seen; returns the
    lexicographically least form of minimal q-value.
    """
    f = CubicForm(*f)
    if discriminant(f) == 0:
        raise ZeroDiscriminant(f"{f} has zero discriminant")
    return _pruned_search(_descend(f))
