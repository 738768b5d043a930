"""Vectorized rejection pre-screen over batches of attempts.

Runs the attempt body on the first 52 digits of every uniform with float64
intervals widened outward by one ulp after each correctly rounded
operation, so every bound encloses the exact real value.  A decision made
here is therefore the true decision, and an attempt it rejects is rejected
with the same reason the exact path would report.  Attempts that pass the
q-ball test, or hit any undecided comparison, are flagged for the exact
dyadic path; successes are only ever produced there.
"""
from __future__ import annotations

import numpy as np

from .randomsource import block_word_np, child_key_np, root_key

NEEDS_EXACT = -1
# codes for definite rejections, matching the order of sampler.Reject
RANGE_S, THINNING, ZERO_A, DISC, SIGNATURE, Q_BALL = range(6)

MAX_BOUND = 1 << 32
# |coefficient| below this keeps every discriminant term inside int64
_COEFF_LIMIT = 1 << 14
_UNSET = -2
_N_UNIFORMS = 7
_SCALE = 2.0 ** -52

_NINF = -np.inf
_PINF = np.inf


def _down(x):
    return np.nextafter(x, _NINF)


def _up(x):
    return np.nextafter(x, _PINF)


def _iv(x):
    """Exact float array as a degenerate interval."""
    return x, x


def _add(x, y):
    return _down(x[0] + y[0]), _up(x[1] + y[1])


def _sub(x, y):
    return _down(x[0] - y[1]), _up(x[1] - y[0])


def _neg(x):
    return -x[1], -x[0]


def _mul(x, y):
    p1 = x[0] * y[0]
    p2 = x[0] * y[1]
    p3 = x[1] * y[0]
    p4 = x[1] * y[1]
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return _down(lo), _up(hi)


def _mul_pos(x, y):
    """Product of intervals known to be non-negative."""
    return _down(x[0] * y[0]), _up(x[1] * y[1])


def _div_pos(x, y):
    """Quotient of a non-negative interval by a positive one."""
    return _down(x[0] / y[1]), _up(x[1] / y[0])


def _sq(x):
    lo2 = x[0] * x[0]
    hi2 = x[1] * x[1]
    straddle = (x[0] < 0) & (x[1] > 0)
    lo = np.where(straddle, 0.0, np.minimum(lo2, hi2))
    return np.maximum(_down(lo), 0.0), _up(np.maximum(lo2, hi2))


def _sqrt(x):
    return np.maximum(_down(np.sqrt(x[0])), 0.0), _up(np.sqrt(x[1]))


def _scale(x, k: float):
    return _mul(x, (np.float64(k), np.float64(k)))


def _floor(x):
    lo = np.floor(x[0])
    return lo, lo == np.floor(x[1])


def _ceil(x):
    lo = np.ceil(x[0])
    return lo, lo == np.ceil(x[1])


def _less(x, y):
    """(decided, value) for the strict comparison x < y."""
    true = x[1] < y[0]
    false = x[0] > y[1]
    return true | false, true


def float_bounds(iv) -> tuple:
    """Outward float64 enclosure of a DyadicInterval."""
    lo, hi = iv.lower, iv.upper
    flo, fhi = float(lo), float(hi)
    if flo > lo:
        flo = float(np.nextafter(flo, _NINF))
    if fhi < hi:
        fhi = float(np.nextafter(fhi, _PINF))
    return np.float64(flo), np.float64(fhi)


class _Codes:
    def __init__(self, n):
        self.code = np.full(n, _UNSET, dtype=np.int64)

    def settle(self, decided, reject, code):
        open_ = self.code == _UNSET
        self.code[open_ & ~decided] = NEEDS_EXACT
        self.code[open_ & decided & reject] = code

    def flag(self, mask):
        self.code[(self.code == _UNSET) & mask] = NEEDS_EXACT


def applicable(params) -> bool:
    return params.T <= MAX_BOUND


def uniform_digits(seed: int, attempt_ids: np.ndarray) -> np.ndarray:
    """Leading 52 digits of the seven attempt uniforms, shape (7, n)."""
    keys = child_key_np(np.uint64(root_key(seed)), attempt_ids)
    out = np.empty((_N_UNIFORMS, len(attempt_ids)), dtype=np.float64)
    for v in range(_N_UNIFORMS):
        words = block_word_np(child_key_np(keys, np.full(len(keys), v, dtype=np.uint64)), 0)
        out[v] = (words >> np.uint64(12)).astype(np.float64)
    return out


def screen(params, seed: int, start: int, count: int) -> np.ndarray:
    """Per-attempt code: a definite rejection code or NEEDS_EXACT."""
    ids = np.arange(start, start + count, dtype=np.uint64)
    digits = uniform_digits(seed, ids)
    with np.errstate(all="ignore"):
        return _screen(params, digits)


def _screen(params, digits: np.ndarray) -> np.ndarray:
    k = params.constants(64)
    lam = float_bounds(k.lam)
    sqrt5_lam = float_bounds(k.sqrt5_lam)
    s_min2 = float_bounds(k.s_min2)
    sigma_min = float_bounds(k.sigma_min)
    side_product = float_bounds(k.side_product)
    radius2 = float_bounds(k.radius2)

    n = digits.shape[1]
    codes = _Codes(n)
    unit = lambda row: (digits[row] * _SCALE, (digits[row] + 1.0) * _SCALE)  # noqa: E731

    tau = unit(0)
    t = (tau[0] - 0.5, tau[1] - 0.5)
    sigma = unit(1)

    decided, below = _less(sigma_min, sigma)
    codes.settle(decided, ~below, RANGE_S)
    t2 = _sq(t)
    one_minus = (_down(1.0 - t2[1]), _up(1.0 - t2[0]))
    sigma_max = _div_pos(s_min2, _sqrt(one_minus))
    decided, below = _less(sigma, sigma_max)
    codes.settle(decided, ~below, RANGE_S)

    u = _div_pos(s_min2, sigma)
    s = _sqrt(u)
    s3 = _mul_pos(u, s)
    raw = (_div_pos(lam, s3), _div_pos(sqrt5_lam, s), _mul_pos(sqrt5_lam, s), _mul_pos(lam, s3))
    sides = []
    for x in raw:
        value, ok = _floor((_down(1.0 + x[0]), _up(1.0 + x[1])))
        codes.settle(ok, np.zeros(n, dtype=bool), 0)
        sides.append(np.where(ok, value, 1.0))

    side_int = [np.minimum(l, 2.0 ** 40).astype(np.int64) for l in sides]
    prod = side_int[0] * side_int[1] * side_int[2] * side_int[3]
    codes.flag(np.maximum.reduce(side_int) >= 1 << 20)
    pf = prod.astype(np.float64)
    sp = (_down(pf), _up(pf))
    pi = unit(2)
    decided, reject = _less(sp, _mul_pos(pi, side_product))
    codes.settle(decided, reject, THINNING)

    deltas = []
    for i in range(4):
        value, ok = _floor(_mul_pos(unit(3 + i), _iv(sides[i])))
        codes.settle(ok, np.zeros(n, dtype=bool), 0)
        deltas.append(np.clip(value, 0.0, sides[i] - 1.0))

    a = -np.floor(sides[0] / 2.0) + deltas[0]
    codes.settle(np.ones(n, dtype=bool), a == 0, ZERO_A)

    def ceil_plus(x, delta):
        value, ok = _ceil(x)
        codes.settle(ok, np.zeros(n, dtype=bool), 0)
        out = np.where(ok, value, 0.0) + delta
        codes.flag(np.abs(out) >= _COEFF_LIMIT)
        return np.where(np.abs(out) < _COEFF_LIMIT, out, 0.0)

    ai = _iv(a)
    a3 = _iv(3.0 * a)
    b = ceil_plus(_add(_iv(-sides[1] / 2.0), _mul(t, a3)), deltas[1])
    bi = _iv(b)
    x3 = _add(_sub(_iv(-sides[2] / 2.0), _mul(t2, a3)), _mul(t, _iv(2.0 * b)))
    c = ceil_plus(x3, deltas[2])
    ci = _iv(c)
    t3 = _mul(t2, t)
    x4 = _add(_sub(_add(_iv(-sides[3] / 2.0), _mul(t3, ai)), _mul(t2, bi)), _mul(t, ci))
    d = ceil_plus(x4, deltas[3])

    ia, ib, ic, id_ = (x.astype(np.int64) for x in (a, b, c, d))
    disc = (18 * ia * ib * ic * id_ + ib * ib * ic * ic - 4 * ia * ic ** 3
            - 4 * ib ** 3 * id_ - 27 * ia * ia * id_ * id_)
    codes.settle(np.ones(n, dtype=bool), (disc == 0) | (np.abs(disc) > params.T), DISC)
    codes.settle(np.ones(n, dtype=bool), (disc > 0) != (params.r == 3), SIGNATURE)

    b1 = _sub(bi, _mul(t, a3))
    c1 = _add(_sub(ci, _mul(t, _iv(2.0 * b))), _mul(t2, a3))
    d1 = _sub(_add(_sub(_iv(d), _mul(t, ci)), _mul(t2, bi)), _mul(t3, ai))
    u2 = _sq(u)
    u3 = _mul_pos(u2, u)
    u4 = _sq(u2)
    u6 = _sq(u3)
    lhs = _mul(u6, _iv(5.0 * a * a))
    lhs = _add(lhs, _mul(u4, _add(_sq(b1), _mul(c1, _iv(2.0 * a)))))
    lhs = _add(lhs, _mul(u2, _add(_sq(c1), _scale(_mul(b1, d1), 2.0))))
    lhs = _add(lhs, _scale(_sq(d1), 5.0))
    root_disc = _sqrt(_iv(np.abs(disc).astype(np.float64)))
    rhs = _mul_pos(_mul_pos(radius2, root_disc), u3)
    decided, inside = _less(lhs, rhs)
    codes.settle(decided, ~inside, Q_BALL)

    code = codes.code
    code[code == _UNSET] = NEEDS_EXACT
    return code
