"""Uniformly random cubic rings from GL2(Z)-orbits of integral binary cubic forms."""
from .census import OrbitRecord, chisquare_gof, enumerate_orbits
from .forms import (CubicForm, GL2Matrix, apply_matrix, canonicalize, discriminant,
                    is_irreducible, q_value, ring_table, stab_order)
from .interval import DyadicInterval, compare3, ceil_partial, floor_partial
from .randomsource import LazyUniform, RandomStream, fresh_uniform, reveal
from .sampler import (BoundTooSmall, Reject, SamplerParams, attempt, iter_samples, make_params,
                      sample_uniform, sample_weighted)

__all__ = [
    "BoundTooSmall", "CubicForm", "DyadicInterval", "GL2Matrix", "LazyUniform", "OrbitRecord",
    "RandomStream", "Reject", "SamplerParams", "apply_matrix", "attempt", "canonicalize",
    "ceil_partial", "chisquare_gof", "compare3", "discriminant", "enumerate_orbits",
    "floor_partial", "fresh_uniform", "is_irreducible", "iter_samples", "make_params",
    "q_value", "reveal", "ring_table", "sample_uniform", "sample_weighted", "stab_order",
]
