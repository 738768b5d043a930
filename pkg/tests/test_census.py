import itertools
import json

import numpy as np
import pytest
from scipy import stats

from randcubic.census import (BoundTooLarge, InsufficientSamples, _d_ranges, chisquare_gof,
                              coefficient_box, enumerate_orbits, orbit_weights, tally)
from randcubic.forms import CubicForm, canonicalize, discriminant, is_irreducible, stab_order
from randcubic.sampler import iter_samples, make_params


def test_smallest_discriminants():
    (rec,) = enumerate_orbits(1, 23)
    assert rec.disc == -23 and rec.stab == 1 and rec.signature == 1
    (rec,) = enumerate_orbits(3, 49)
    assert rec.disc == 49 and rec.stab == 3
    assert enumerate_orbits(1, 22) == []
    assert enumerate_orbits(3, 48) == []


def test_bound_guard():
    with pytest.raises(BoundTooLarge):
        enumerate_orbits(3, 10 ** 5 + 1)


@pytest.mark.parametrize("r", [1, 3])
def test_box_enlargement_stability(r):
    base = enumerate_orbits(r, 1000)
    doubled = enumerate_orbits(r, 1000, scale=2)
    assert [x.form for x in base] == [x.form for x in doubled]


def test_records_are_consistent_and_sorted():
    recs = enumerate_orbits(3, 2000)
    keys = [(abs(r.disc), tuple(r.form)) for r in recs]
    assert keys == sorted(keys)
    for r in recs:
        assert canonicalize(r.form) == r.form
        assert discriminant(r.form) == r.disc
        assert is_irreducible(r.form)
        assert stab_order(r.form) == r.stab
    assert json.loads(recs[0].to_json())["form"] == [str(c) for c in recs[0].form]


def test_stabilizer_histogram():
    assert all(r.stab == 1 for r in enumerate_orbits(1, 1000))
    assert any(r.stab == 3 for r in enumerate_orbits(3, 49))


@pytest.mark.parametrize("r", [1, 3])
def test_counts_grow_roughly_linearly(r):
    counts = {T: len(enumerate_orbits(r, T)) for T in (500, 1000, 2000, 4000)}
    for T in (500, 1000, 2000):
        assert counts[T] <= counts[2 * T]
        assert 1.2 <= counts[2 * T] / counts[T] <= 3.5


def test_d_ranges_match_scan():
    for a, b, c in itertools.product(range(1, 4), range(-4, 5), range(-6, 7)):
        for lo_disc, hi_disc in ((1, 300), (-300, -1)):
            ranges = _d_ranges(a, b, c, lo_disc, hi_disc, 40)
            got = {d for lo, hi in ranges for d in range(lo, hi + 1)}
            want = {d for d in range(-40, 41) if lo_disc <= discriminant((a, b, c, d)) <= hi_disc}
            assert got == want


def test_sampled_forms_fall_inside_census():
    for r, T in ((1, 500), (3, 700)):
        census = {rec.form for rec in enumerate_orbits(r, T)}
        for s in itertools.islice(iter_samples(make_params(r, T), 8), 200):
            assert canonicalize(s.form) in census


def test_chisquare_examples():
    res = chisquare_gof({"x": 30, "y": 60}, {"x": 1.0, "y": 2.0})
    assert res.statistic == 0 and res.pvalue == 1 and res.df == 1
    res = chisquare_gof({"x": 10}, {"x": 1.0})
    assert res.df == 0 and res.degenerate
    with pytest.raises(InsufficientSamples):
        chisquare_gof({"x": 3, "y": 3}, {"x": 1.0, "y": 1.0})
    with pytest.raises(ValueError):
        chisquare_gof({"z": 30}, {"x": 1.0, "y": 1.0})


def test_chisquare_matches_scipy():
    obs = {i: n for i, n in enumerate([18, 25, 31, 26])}
    exp = {0: 1.0, 1: 1.0, 2: 1.0, 3: 1.0}
    ours = chisquare_gof(obs, exp)
    ref = stats.chisquare(list(obs.values()))
    assert ours.statistic == pytest.approx(ref.statistic)
    assert ours.pvalue == pytest.approx(ref.pvalue)


def test_chisquare_pvalues_are_calibrated():
    rng = np.random.default_rng(20)
    weights = np.array([1.0, 1.0, 3.0, 2.0, 0.5, 1.0])
    probs = weights / weights.sum()
    expected = dict(enumerate(weights))
    pvalues = []
    for _ in range(10 ** 4):
        counts = rng.multinomial(300, probs)
        pvalues.append(chisquare_gof(dict(enumerate(counts.tolist())), expected).pvalue)
    assert stats.kstest(pvalues, "uniform").statistic < 0.05


def test_weights_and_tally():
    recs = enumerate_orbits(3, 49)
    assert orbit_weights(recs, "weighted") == {recs[0].form: 1 / 3}
    assert orbit_weights(recs, "uniform") == {recs[0].form: 1.0}
    assert tally([CubicForm(1, 1, -2, -1)] * 3) == {recs[0].form: 3}


def test_coefficient_box_scales():
    assert coefficient_box(3, 1000, 2) == tuple(2 * x for x in coefficient_box(3, 1000))
