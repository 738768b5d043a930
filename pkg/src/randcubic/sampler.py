"""Rejection sampler for GL2(Z)-orbits of irreducible integral binary cubic forms.

One *attempt* draws seven lazy uniforms (tau, sigma, pi, Delta_1..Delta_4)
and runs the bit-level procedure at precision p = 2, 4, 8, ...  A decided
failing test rejects the attempt; an undecidable test restarts it at twice
the precision with the same digits.  Conditioned on success the returned
orbit has probability proportional to 1/#Stab(f); thinning successes with
probability #Stab(f)/3 makes all orbits equally likely.
"""
from __future__ import annotations

import enum
import math
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, NamedTuple, Optional

from . import prefilter
from .forms import CubicForm, discriminant, is_irreducible, stab_order
from .interval import DyadicInterval, ceil_partial, compare3, floor_partial
from .lattice import IntBox, LowerUnipotent, PrecisionInsufficient, sample_point
from .randomsource import LazyUniform, RandomStream

HALF = Fraction(1, 2)
DEFAULT_RADIUS = {1: Fraction(7, 4), 3: Fraction(5, 4)}
SMALLEST_BOUND = {1: 23, 3: 49}

# variable indices inside an attempt's stream address
TAU, SIGMA, PI, DELTA1, DELTA2, DELTA3, DELTA4, KEEP = range(8)


class BoundTooSmall(ValueError):
    pass


class Reject(str, enum.Enum):
    RANGE_S = "RangeS"
    THINNING = "Thinning"
    ZERO_A = "ZeroA"
    DISC = "Disc"
    SIGNATURE = "Signature"
    Q_BALL = "QBall"
    REDUCIBLE = "Reducible"


class Outcome(NamedTuple):
    attempt_id: int
    form: Optional[CubicForm]
    reason: Optional[Reject]
    precision: int

    @property
    def ok(self) -> bool:
        return self.form is not None


class Constants(NamedTuple):
    lam: DyadicInterval
    sqrt5_lam: DyadicInterval
    s_min: DyadicInterval
    s_min2: DyadicInterval
    s_max: DyadicInterval
    sigma_min: DyadicInterval
    side_bounds: tuple
    side_product: DyadicInterval
    radius2: DyadicInterval


@dataclass(frozen=True)
class SamplerParams:
    r: int
    T: int
    R: Fraction

    def constants(self, prec: int) -> Constants:
        return _constants(self.r, self.T, self.R, prec)

    def census_box(self, prec: int = 64):
        """Coefficient bounds (A, B, C, D) containing a representative of every orbit."""
        k = self.constants(prec)
        smin_inv = 1 / k.s_min
        a = _ceil_upper(k.lam * smin_inv ** 3)
        b = _ceil_upper(k.sqrt5_lam * smin_inv + Fraction(3, 2) * a)
        c = _ceil_upper(k.sqrt5_lam * k.s_max + 3 * a + b)
        d = _ceil_upper(k.lam * k.s_max ** 3 + a + Fraction(b, 2) + Fraction(c, 2))
        return a, b, c, d


def _ceil_upper(x: DyadicInterval) -> int:
    e = x.exp
    return -((-x.hi << e) if e >= 0 else ((-x.hi) >> -e))


@lru_cache(maxsize=256)
def _constants(r: int, T: int, R: Fraction, prec: int) -> Constants:
    exact = DyadicInterval.exact
    s_min2 = exact(3, prec).root(2) / 2
    s_min = s_min2.root(2)
    lam = exact(T, prec).root(4) * exact(R, prec)
    s_max = (lam / 2).root(3)
    sqrt5_lam = exact(5, prec).root(2) * lam
    # s_max^3 + lam == 3 lam / 2 exactly
    bounds = (
        lam * Fraction(3, 2),
        s_max + sqrt5_lam,
        1 / s_min + sqrt5_lam,
        1 / (s_min * s_min2) + lam,
    )
    prod = bounds[0] * bounds[1] * bounds[2] * bounds[3]
    return Constants(
        lam=lam,
        sqrt5_lam=sqrt5_lam,
        s_min=s_min,
        s_min2=s_min2,
        s_max=s_max,
        sigma_min=s_min2 / s_max.square(),
        side_bounds=bounds,
        side_product=prod,
        radius2=exact(R * R, prec),
    )


def make_params(r: int, T: int, R: Optional[Fraction] = None, *, relaxed: bool = False) -> SamplerParams:
    """Validate (r, T) and fix the radius R (7/4 for r=1, 5/4 for r=3 by default).

    With ``relaxed`` the smallest-discriminant check is skipped (T >= 1 only).
    """
    if r not in (1, 3):
        raise ValueError(f"signature must be 1 or 3, got {r}")
    T = int(T)
    if T < 1:
        raise BoundTooSmall("bound must be at least 1")
    if not relaxed and T < SMALLEST_BOUND[r]:
        raise BoundTooSmall(
            f"no irreducible orbit of signature {r} has |disc| <= {T}; "
            f"the smallest is {SMALLEST_BOUND[r]}")
    R = DEFAULT_RADIUS[r] if R is None else Fraction(R)
    if R <= 0:
        raise ValueError("radius must be positive")
    return SamplerParams(r, T, R)


def _decided(value, trace, label):
    if value is None:
        raise PrecisionInsufficient(label)
    if trace is not None:
        trace.append((label, value))
    return value


def _ceil_any(x):
    if isinstance(x, (int, Fraction)):
        return math.ceil(x)
    return ceil_partial(x)


def _shear_inverse(t: DyadicInterval) -> LowerUnipotent:
    """Inverse of the action of n(t) on coefficient vectors, i.e. n(-t)."""
    t2 = t.square()
    return LowerUnipotent((
        (),
        (t * -3,),
        (t2 * 3, t * -2),
        (-(t2 * t), t2, -t),
    ))


def _iteration(params: SamplerParams, us: List[LazyUniform], prec: int, trace=None):
    """One pass of the attempt at precision ``prec``; returns (form, reason)."""
    k = params.constants(prec)
    t = us[TAU].reveal(prec) - HALF
    sigma = us[SIGMA].reveal(prec)

    if not _decided(compare3(k.sigma_min, sigma), trace, "sigma > s_min^2/s_max^2"):
        return None, Reject.RANGE_S
    sigma_max = k.s_min2 / (1 - t.square()).root(2)
    if not _decided(compare3(sigma, sigma_max), trace, "sigma < s_min^2/sqrt(1-t^2)"):
        return None, Reject.RANGE_S

    u = k.s_min2 / sigma  # s^2
    s = u.root(2)
    s3 = u * s
    raw = (k.lam / s3, k.sqrt5_lam / s, k.sqrt5_lam * s, k.lam * s3)
    sides = tuple(_decided(floor_partial(1 + x), trace, f"l'_{i + 1}") for i, x in enumerate(raw))
    side_prod = sides[0] * sides[1] * sides[2] * sides[3]

    if compare3(k.side_product, side_prod) is True:
        raise AssertionError(f"thinning ratio exceeds 1 at sides {sides}")
    pi = us[PI].reveal(prec)
    if _decided(compare3(side_prod, pi * k.side_product), trace, "pi > ratio"):
        return None, Reject.THINNING

    deltas = tuple(
        _decided(floor_partial(us[DELTA1 + i].reveal(prec) * sides[i]), trace, f"delta_{i + 1}")
        for i in range(4))

    if -(sides[0] // 2) + deltas[0] == 0:
        return None, Reject.ZERO_A
    box = IntBox(tuple(Fraction(-l, 2) for l in sides), sides)

    def ceil(x):
        return _decided(_ceil_any(x), trace, "ceil")

    f = CubicForm(*sample_point(box, _shear_inverse(t), deltas, ceil))

    disc = discriminant(f)
    if not 0 < abs(disc) <= params.T:
        return f, Reject.DISC
    if (disc > 0) != (params.r == 3):
        return f, Reject.SIGNATURE

    a, b, c, d = f
    t2 = t.square()
    # coefficients of n(-t) f
    b1 = b - t * (3 * a)
    c1 = c - t * (2 * b) + t2 * (3 * a)
    d1 = d - t * c + t2 * b - t2 * t * a
    u2 = u.square()
    u3 = u2 * u
    lhs = ((u3.square() * (5 * a * a) + u2.square() * (b1.square() + c1 * (2 * a)))
           + u2 * (c1.square() + b1 * d1 * 2) + d1.square() * 5)
    rhs = k.radius2 * DyadicInterval.exact(abs(disc), prec).root(2) * u3
    if not _decided(compare3(lhs, rhs), trace, "q-ball"):
        return f, Reject.Q_BALL

    if not is_irreducible(f):
        return f, Reject.REDUCIBLE
    return f, None


def _uniforms(stream: RandomStream, attempt_id: int) -> List[LazyUniform]:
    return [LazyUniform(stream.child(attempt_id, v)) for v in range(DELTA4 + 1)]


def attempt(params: SamplerParams, attempt_id: int, stream: RandomStream,
            initial_precision: int = 2) -> Outcome:
    """Run attempt ``attempt_id``, doubling the precision until every test is decided."""
    us = _uniforms(stream, attempt_id)
    prec = initial_precision
    while True:
        try:
            f, reason = _iteration(params, us, prec)
        except PrecisionInsufficient:
            prec *= 2
            continue
        return Outcome(attempt_id, f if reason is None else None, reason, prec)


def replay(params: SamplerParams, attempt_id: int, stream: RandomStream, prec: int):
    """Decision trace of one attempt evaluated at a fixed precision.

    Returns ``(form, reason, trace)`` or raises PrecisionInsufficient.
    """
    trace = []
    f, reason = _iteration(params, _uniforms(stream, attempt_id), prec, trace)
    return f, reason, trace


def keep_for_uniform(stream: RandomStream, attempt_id: int, stab: int) -> bool:
    """Accept with probability stab/3, by comparing a lazy uniform with 1/3."""
    if stab == 3:
        return True
    u = LazyUniform(stream.child(attempt_id, KEEP))
    third = Fraction(1, 3)
    p = 2
    while True:
        below = compare3(u.reveal(p), DyadicInterval.exact(third, p))
        if below is not None:
            return below
        p *= 2


class Sample(NamedTuple):
    """A success; ``precision`` is the first p in 2, 4, 8, ... deciding its attempt."""

    form: CubicForm
    attempt_id: int
    attempts: int
    precision: int
    stab: Optional[int]


def _candidates(params: SamplerParams, seed: int, start: int, count: int, screen: bool):
    """Attempt ids in [start, start+count) not already rejected by the float pre-screen."""
    if screen and prefilter.applicable(params):
        codes = prefilter.screen(params, seed, start, count)
        return (start + i for i in (codes == prefilter.NEEDS_EXACT).nonzero()[0].tolist())
    return range(start, start + count)


def _chunk_hits(params: SamplerParams, seed: int, start: int, count: int, mode: str,
                initial_precision: int, screen: bool = True):
    """Successful (and, in uniform mode, kept) outcomes among attempts [start, start+count)."""
    stream = RandomStream(seed)
    for i in _candidates(params, seed, start, count, screen):
        out = attempt(params, i, stream, initial_precision)
        if not out.ok:
            continue
        if initial_precision != 2:
            # report the precision of the ladder 2, 4, 8, ... so output does not
            # depend on where the schedule started
            out = attempt(params, i, stream, 2)
        stab = None
        if mode == "uniform":
            stab = stab_order(out.form)
            if not keep_for_uniform(stream, i, stab):
                continue
        yield out, stab


def _run_chunk(*args):
    return list(_chunk_hits(*args))


def _chunks(params, seed, mode, start, jobs, initial_precision, chunk, screen):
    if jobs <= 1:
        for lo in itertools.count(start, chunk):
            yield from _chunk_hits(params, seed, lo, chunk, mode, initial_precision, screen)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        starts = itertools.count(start, chunk)
        pending = [pool.submit(_run_chunk, params, seed, next(starts), chunk, mode,
                               initial_precision, screen)
                   for _ in range(2 * jobs)]
        while True:
            head = pending.pop(0)
            pending.append(pool.submit(_run_chunk, params, seed, next(starts), chunk, mode,
                                       initial_precision, screen))
            yield from head.result()


def iter_samples(params: SamplerParams, seed: int, mode: str = "weighted", *, start: int = 0,
                 jobs: int = 1, initial_precision: int = 2, chunk: int = 4096,
                 screen: bool = True) -> Iterator[Sample]:
    """Endless stream of samples: the successes of attempts start, start+1, ...

    The result depends only on ``(params, seed, mode, start)``, never on
    ``jobs``, ``chunk``, ``initial_precision`` or ``screen``.  With
    ``screen`` a vectorized float pass discards provable rejections before
    the exact path sees them (only for bounds up to 2^32).
    """
    if mode not in ("weighted", "uniform"):
        raise ValueError(f"unknown mode {mode!r}")
    last = start - 1
    for out, stab in _chunks(params, seed, mode, start, jobs, initial_precision, chunk, screen):
        yield Sample(out.form, out.attempt_id, out.attempt_id - last, out.precision, stab)
        last = out.attempt_id


def sample_weighted(params: SamplerParams, seed: int, **kw) -> CubicForm:
    """A form whose orbit has probability proportional to 1/#Stab."""
    return next(iter_samples(params, seed, "weighted", **kw)).form


def sample_uniform(params: SamplerParams, seed: int, **kw) -> CubicForm:
    """A form whose orbit is uniform among all orbits with the given (r, T)."""
    return next(iter_samples(params, seed, "uniform", **kw)).form


def success_count(params: SamplerParams, seed: int, attempts: int, *, start: int = 0,
                  screen: bool = True) -> int:
    """Number of successful attempts among ``start .. start + attempts - 1``."""
    return sum(1 for _ in _chunk_hits(params, seed, start, attempts, "weighted", 2, screen))
