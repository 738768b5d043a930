"""Lattice points in a box transformed by a lower-triangular unipotent matrix.

For a box I = prod [a_i, a_i + l_i) with integer l_i and lower unipotent M,
the set Z^n ∩ MI has exactly l_1 ... l_n points, and v lies in it iff
``a_i <= v_i + sum_{j<i} m'_ij v_j < a_i + l_i`` where m' = M^-1.  Choosing
``v_i = ceil(a_i - sum_{j<i} m'_ij v_j) + delta_i`` with
``0 <= delta_i < l_i`` enumerates the set bijectively.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence, Tuple


class PrecisionInsufficient(ArithmeticError):
    """A decision could not be made at the current working precision."""


@dataclass(frozen=True)
class IntBox:
    lower: Tuple[Any, ...]
    lengths: Tuple[int, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.lengths):
            raise ValueError("lower corner and lengths differ in dimension")
        for l in self.lengths:
            if not isinstance(l, int) or l < 0:
                raise ValueError(f"side lengths must be non-negative integers, got {l!r}")

    @property
    def dim(self) -> int:
        return len(self.lengths)


@dataclass(frozen=True)
class LowerUnipotent:
    """Lower unipotent matrix given through the strictly-lower part of its inverse.

    ``inverse[i][j]`` for ``j < i`` holds m'_ij; entries may be exact
    rationals or intervals.
    """

    inverse: Tuple[Tuple[Any, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.inverse)

    @classmethod
    def from_matrix(cls, m: Sequence[Sequence]) -> "LowerUnipotent":
        """Build from an exact lower unipotent matrix (rows, full square)."""
        n = len(m)
        for i in range(n):
            if m[i][i] != 1 or any(m[i][j] != 0 for j in range(i + 1, n)):
                raise ValueError("matrix is not lower unipotent")
        inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        # forward substitution: M X = I
        for col in range(n):
            for i in range(n):
                s = Fraction(int(i == col))
                for j in range(i):
                    s -= Fraction(m[i][j]) * inv[j][col]
                inv[i][col] = s
        return cls(tuple(tuple(inv[i][:i]) for i in range(n)))


def count_points(box: IntBox, m: LowerUnipotent) -> int:
    return math.prod(box.lengths)


def exact_ceil(x) -> Optional[int]:
    return math.ceil(x)


def sample_point(box: IntBox, m: LowerUnipotent, deltas: Sequence[int],
                 ceil: Callable[[Any], Optional[int]] = exact_ceil) -> Tuple[int, ...]:
    """The lattice point of Z^n ∩ MI indexed by ``deltas``.

    ``ceil`` returns the ceiling of its argument or None when it cannot be
    decided, in which case PrecisionInsufficient is raised.
    """
    if box.dim != m.dim or len(deltas) != box.dim:
        raise ValueError("dimension mismatch")
    v = []
    for i in range(box.dim):
        if not 0 <= deltas[i] < box.lengths[i]:
            raise ValueError(f"offset {deltas[i]} outside [0, {box.lengths[i]})")
        x = box.lower[i]
        row = m.inverse[i]
        for j in range(i):
            if v[j]:
                x = x - row[j] * v[j]
        k = ceil(x)
        if k is None:
            raise PrecisionInsufficient(f"ceiling of coordinate {i} undecided")
        v.append(k + deltas[i])
    return tuple(v)


def contains(box: IntBox, m: LowerUnipotent, v: Sequence[int]) -> bool:
    """Exact membership test v in MI (rational inverse entries only)."""
    for i in range(box.dim):
        y = Fraction(v[i]) + sum(Fraction(m.inverse[i][j]) * v[j] for j in range(i))
        if not box.lower[i] <= y < box.lower[i] + box.lengths[i]:
            return False
    return True
