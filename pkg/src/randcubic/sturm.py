"""Sturm sequences for integer polynomials.

Polynomials are coefficient lists, lowest degree first.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import List, Sequence

from .interval import iroot_ceil

Poly = List[int]


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def evaluate(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Sequence[int]) -> Poly:
    return [i * c for i, c in enumerate(p)][1:]


def _rem(p: List[Fraction], q: List[Fraction]) -> List[Fraction]:
    p = list(p)
    while len(p) >= len(q):
        f = p[-1] / q[-1]
        k = len(p) - len(q)
        for i, c in enumerate(q):
            p[i + k] -= f * c
        p.pop()
        p = _trim(p)
    return p


def _primitive(p: List[Fraction]) -> Poly:
    """Positive multiple of p with coprime integer coefficients."""
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints]


def squarefree_part(p: Sequence[int]) -> Poly:
    p = _trim(p)
    if len(p) <= 2:
        return p
    a = [Fraction(c) for c in p]
    b = [Fraction(c) for c in derivative(p)]
    while b:
        a, b = b, _rem(a, b)
    if len(a) == 1:
        return list(p)
    # exact division of p by the gcd
    num = [Fraction(c) for c in p]
    quot = [Fraction(0)] * (len(num) - len(a) + 1)
    while len(num) >= len(a):
        f = num[-1] / a[-1]
        k = len(num) - len(a)
        quot[k] = f
        for i, c in enumerate(a):
            num[i + k] -= f * c
        num.pop()
    q = _primitive(quot)
    if (q[-1] > 0) != (p[-1] > 0):
        q = [-c for c in q]
    return q


def sturm_sequence(p: Sequence[int]) -> List[Poly]:
    """Sturm sequence of p, each term scaled by a positive constant to integers."""
    p = _trim(p)
    seq = [list(p)]
    if len(p) <= 1:
        return seq
    seq.append(derivative(p))
    while len(seq[-1]) > 1:
        r = _rem([Fraction(c) for c in seq[-2]], [Fraction(c) for c in seq[-1]])
        if not r:
            break
        seq.append(_primitive([-c for c in r]))
    return seq


def sign_changes(seq: Sequence[Poly], x) -> int:
    count = 0
    last = 0
    for p in seq:
        v = evaluate(p, x)
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if last and s != last:
            count += 1
        last = s
    return count


def root_bound(p: Sequence[int]) -> int:
    """Integer B with every real root of p in (-B, B) (Fujiwara's bound)."""
    p = _trim(p)
    n = len(p) - 1
    lead = abs(p[-1])
    m = 0
    for k in range(1, n + 1):
        c = abs(p[n - k])
        if c:
            m = max(m, iroot_ceil(-(-c // lead), k))
    return 2 * m + 1


def count_real_roots(p: Sequence[int]) -> int:
    """Number of distinct real roots."""
    p = squarefree_part(p)
    if len(p) <= 1:
        return 0
    seq = sturm_sequence(p)
    b = root_bound(p)
    return sign_changes(seq, -b) - sign_changes(seq, b)


def integer_roots(p: Sequence[int]) -> List[int]:
    """All integer roots, found by Sturm-guided bisection over (-B, B]."""
    p = squarefree_part(p)
    if len(p) <= 1:
        return []
    seq = sturm_sequence(p)
    b = root_bound(p)
    roots = []
    stack = [(-b, b, sign_changes(seq, -b), sign_changes(seq, b))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi  # roots in (lo, hi]
        if n == 0:
            continue
        if hi - lo == 1:
            if evaluate(p, hi) == 0:
                roots.append(hi)
            continue
        mid = (lo + hi) // 2
        vmid = sign_changes(seq, mid)
        stack.append((mid, hi, vmid, vhi))
        stack.append((lo, mid, vlo, vmid))
    return sorted(roots)
