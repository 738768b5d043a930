"""Brute-force census of orbits of irreducible cubic forms, and chi-square tools.

Every orbit with 0 < |disc| <= T has a representative inside an explicit
coefficient box (the same box the sampler draws from, widened by the shear
terms for |t| <= 1/2).  The census scans that box, solving the quadratic
``disc(a, b, c, d) = const`` for d instead of looping over it, and merges
forms by their canonical representative.
"""
from __future__ import annotations

import json
from collections import Counter
from math import isqrt
from typing import Dict, Hashable, Iterable, List, Mapping, NamedTuple, Optional, Tuple

from scipy.special import gammaincc

from .forms import CubicForm, canonicalize, discriminant, is_irreducible, stab_order
from .sampler import make_params

MAX_CENSUS_BOUND = 10 ** 5


class BoundTooLarge(ValueError):
    pass


class InsufficientSamples(ValueError):
    pass


class OrbitRecord(NamedTuple):
    form: CubicForm
    disc: int
    signature: int
    stab: int

    def to_json(self) -> str:
        return json.dumps({
            "form": self.form.to_json(),
            "disc": str(self.disc),
            "signature": self.signature,
            "stab": self.stab,
        })


def coefficient_box(r: int, T: int, scale: int = 1) -> Tuple[int, int, int, int]:
    params = make_params(r, T, relaxed=True)
    return tuple(scale * x for x in params.census_box())


def _quadratic_band(qa: int, qb: int, qc: int, v: int) -> Optional[Tuple[int, int]]:
    """Integers d with qa d^2 + qb d + qc >= v, for qa < 0, as a closed range."""

    def ok(d):
        return (qa * d + qb) * d + qc >= v

    # roots of -qa d^2 - qb d + (v - qc) = 0, with den = -2 qa > 0
    delta = qb * qb - 4 * qa * (qc - v)
    if delta < 0:
        return None
    s = isqrt(delta)
    den = -2 * qa
    # the roots are (qb -+ sqrt(delta)) / den; start just outside them
    lo = (qb - s - 1) // den
    hi = -((-(qb + s + 1)) // den)
    while lo <= hi and not ok(lo):
        lo += 1
    while hi >= lo and not ok(hi):
        hi -= 1
    if lo > hi:
        return None
    return lo, hi


def _d_ranges(a: int, b: int, c: int, lo_disc: int, hi_disc: int, dmax: int) -> List[Tuple[int, int]]:
    """Ranges of |d| <= dmax with lo_disc <= disc(a, b, c, d) <= hi_disc."""
    qa = -27 * a * a
    qb = 18 * a * b * c - 4 * b ** 3
    qc = b * b * c * c - 4 * a * c ** 3
    outer = _quadratic_band(qa, qb, qc, lo_disc)
    if outer is None:
        return []
    lo, hi = max(outer[0], -dmax), min(outer[1], dmax)
    if lo > hi:
        return []
    inner = _quadratic_band(qa, qb, qc, hi_disc + 1)
    if inner is None or inner[1] < lo or inner[0] > hi:
        return [(lo, hi)]
    out = []
    if lo < inner[0]:
        out.append((lo, inner[0] - 1))
    if inner[1] < hi:
        out.append((inner[1] + 1, hi))
    return out


def box_forms(r: int, T: int, box: Tuple[int, int, int, int]) -> Iterable[CubicForm]:
    """Forms in the box with a > 0, 0 < |disc| <= T and the sign of disc matching r."""
    A, B, C, D = box
    lo_disc, hi_disc = (1, T) if r == 3 else (-T, -1)
    for a in range(1, A + 1):
        for b in range(-B, B + 1):
            for c in range(-C, C + 1):
                for lo, hi in _d_ranges(a, b, c, lo_disc, hi_disc, D):
                    for d in range(lo, hi + 1):
                        yield CubicForm(a, b, c, d)


def enumerate_orbits(r: int, T: int, *, scale: int = 1) -> List[OrbitRecord]:
    """All orbits of irreducible forms with signature r and 0 < |disc| <= T.

    ``scale`` multiplies the coefficient box, for completeness self-checks.
    """
    if r not in (1, 3):
        raise ValueError(f"signature must be 1 or 3, got {r}")
    T = int(T)
    if T > MAX_CENSUS_BOUND:
        raise BoundTooLarge(f"census bound {T} exceeds {MAX_CENSUS_BOUND}")
    if T < 1:
        return []
    seen: Dict[CubicForm, OrbitRecord] = {}
    for f in box_forms(r, T, coefficient_box(r, T, scale)):
        if f.d == 0 or not is_irreducible(f):
            continue
        g = canonicalize(f)
        if g in seen:
            continue
        disc = discriminant(g)
        seen[g] = OrbitRecord(g, disc, r, stab_order(g))
    return sorted(seen.values(), key=lambda rec: (abs(rec.disc), tuple(rec.form)))


def orbit_weights(records: Iterable[OrbitRecord], mode: str) -> Dict[CubicForm, float]:
    """Expected relative frequencies: 1/stab for weighted mode, equal for uniform mode."""
    if mode == "weighted":
        return {rec.form: 1.0 / rec.stab for rec in records}
    if mode == "uniform":
        return {rec.form: 1.0 for rec in records}
    raise ValueError(f"unknown mode {mode!r}")


class ChiSquare(NamedTuple):
    statistic: float
    df: int
    pvalue: float
    degenerate: bool


def chisquare_gof(observed: Mapping[Hashable, int], expected: Mapping[Hashable, float]) -> ChiSquare:
    """Pearson goodness-of-fit of observed counts against expected weights.

    Weights are normalized to the observed total; categories absent from
    ``observed`` count as zero.
    """
    if not expected:
        raise ValueError("no categories")
    if any(w <= 0 for w in expected.values()):
        raise ValueError("expected weights must be positive")
    stray = set(observed) - set(expected)
    if stray:
        raise ValueError(f"observed categories outside the expected set: {sorted(map(str, stray))[:5]}")
    k = len(expected)
    total = sum(observed.values())
    if total < 5 * k:
        raise InsufficientSamples(f"{total} observations for {k} categories; need {5 * k}")
    if k == 1:
        return ChiSquare(0.0, 0, 1.0, True)
    wsum = sum(expected.values())
    stat = 0.0
    for key, w in expected.items():
        e = total * w / wsum
        o = observed.get(key, 0)
        stat += (o - e) ** 2 / e
    df = k - 1
    return ChiSquare(stat, df, float(gammaincc(df / 2, stat / 2)), False)


def tally(forms: Iterable[CubicForm]) -> Counter:
    """Counts keyed by canonical representative."""
    return Counter(canonicalize(f) for f in forms)
