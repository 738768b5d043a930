import itertools
import random
from fractions import Fraction

import pytest

from oracles import brute_force_points, check_instance, random_instance
from randcubic.lattice import IntBox, LowerUnipotent, PrecisionInsufficient, count_points, sample_point


def test_one_dimensional_examples():
    box = IntBox((Fraction(0),), (3,))
    lu = LowerUnipotent.from_matrix([[1]])
    assert count_points(box, lu) == 3
    assert sample_point(box, lu, (1,)) == (1,)


def test_shear_example():
    box = IntBox((Fraction(3, 10), Fraction(-17, 10)), (2, 3))
    lu = LowerUnipotent.from_matrix([[1, 0], [5, 1]])
    assert count_points(box, lu) == 6
    points = sorted(sample_point(box, lu, d) for d in itertools.product(range(2), range(3)))
    assert points == [(1, 4), (1, 5), (1, 6), (2, 9), (2, 10), (2, 11)]
    assert set(points) == brute_force_points([Fraction(3, 10), Fraction(-17, 10)], [2, 3], [[], [50]], 10)


def test_zero_side_gives_no_points():
    box = IntBox((Fraction(0), Fraction(0)), (3, 0))
    assert count_points(box, LowerUnipotent.from_matrix([[1, 0], [2, 1]])) == 0


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        IntBox((0,), (-1,))
    with pytest.raises(ValueError):
        LowerUnipotent.from_matrix([[1, 1], [0, 1]])
    box = IntBox((Fraction(0),), (3,))
    with pytest.raises(ValueError):
        sample_point(box, LowerUnipotent.from_matrix([[1]]), (3,))
    with pytest.raises(PrecisionInsufficient):
        sample_point(box, LowerUnipotent.from_matrix([[1]]), (0,), ceil=lambda x: None)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bijection_random_shears(n):
    rng = random.Random(100 + n)
    for _ in range(100):
        check_instance(*random_instance(rng, n))


def test_bijection_all_side_lengths_small_dimension():
    rng = random.Random(7)
    for n in (1, 2):
        for lengths in itertools.product(range(6), repeat=n):
            lower, _, m, den = random_instance(rng, n)
            check_instance(lower, list(lengths), m, den)
