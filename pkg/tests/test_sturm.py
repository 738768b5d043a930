from hypothesis import given, strategies as st

from randcubic import sturm


def test_integer_roots_examples():
    assert sturm.integer_roots([0, -1, 0, 1]) == [-1, 0, 1]
    assert sturm.integer_roots([-6, 11, -6, 1]) == [1, 2, 3]
    assert sturm.integer_roots([-1, -1, 0, 1]) == []
    assert sturm.integer_roots([-4, 0, 0, 1]) == []


def test_counts_with_repeated_roots():
    # (x - 1)^2 (x + 2)
    assert sturm.count_real_roots([2, -3, 0, 1]) == 2
    assert sturm.integer_roots([2, -3, 0, 1]) == [-2, 1]
    assert sturm.count_real_roots([1, 0, 1]) == 0


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=3))
def test_root_bound_contains_roots(roots):
    poly = [1]
    for r in roots:
        poly = [(-r) * poly[0]] + [poly[i] - r * poly[i + 1] for i in range(len(poly) - 1)] + [poly[-1]]
    b = sturm.root_bound(poly)
    assert all(-b < r < b for r in roots)
    assert sturm.integer_roots(poly) == sorted(set(roots))
    assert sturm.count_real_roots(poly) == len(set(roots))
