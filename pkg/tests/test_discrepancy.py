import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orbitlab.discrepancy import (WeightedSample, correlation_table, erdos_turan_bound, full_discrepancy_1d,
                                  full_discrepancy_bound, grid_coverage, required_pairs, star_discrepancy,
                                  star_discrepancy_bounds)
from orbitlab.errors import InvalidArgument
from orbitlab.scenarios import SQRT2_M1


def brute_star_1d(pts, w):
    w = [v / sum(w) for v in w]
    best = 0.0
    for s in sorted(set(pts)) + [1.0]:
        open_ = sum(v for p, v in zip(pts, w) if p < s)
        closed = sum(v for p, v in zip(pts, w) if p <= s)
        best = max(best, s - open_, closed - s)
    return best


def brute_full_1d(pts, w):
    w = [v / sum(w) for v in w]
    E = sorted(set(pts) | {0.0, 1.0})
    best = 0.0

    def inside_lo(p, u, inc):
        return p > u or (inc and p == u)

    def inside_hi(p, v, inc):
        return p < v or (inc and p == v)

    for u in E:
        for v in E:
            for iu in (False, True):
                for iv in (False, True):
                    if u < v:
                        m = sum(x for p, x in zip(pts, w) if inside_lo(p, u, iu) and inside_hi(p, v, iv))
                        length = v - u
                    elif u == v:
                        at = sum(x for p, x in zip(pts, w) if p == u)
                        if iu and iv:       # the single point
                            m, length = at, 0.0
                        elif not (iu or iv):  # the circle minus the point
                            m, length = 1.0 - at, 1.0
                        else:
                            continue
                    else:
                        m = sum(x for p, x in zip(pts, w) if inside_lo(p, u, iu) or inside_hi(p, v, iv))
                        length = 1 - (u - v)
                    best = max(best, abs(m - length))
    return best


def brute_star_2d(pts, w):
    w = np.asarray(w) / np.sum(w)
    xs = sorted(set(pts[:, 0]) | {1.0})
    ys = sorted(set(pts[:, 1]) | {1.0})
    best = 0.0
    for sx in xs:
        for sy in ys:
            vol = sx * sy
            o = w[(pts[:, 0] < sx) & (pts[:, 1] < sy)].sum()
            c = w[(pts[:, 0] <= sx) & (pts[:, 1] <= sy)].sum()
            best = max(best, vol - o, c - vol)
    return best


grid_points = st.lists(st.integers(0, 15).map(lambda k: k / 16), min_size=1, max_size=25)


def test_examples():
    assert star_discrepancy(WeightedSample.uniform([0.0, 0.0])) == 1.0
    assert star_discrepancy(WeightedSample.uniform([0.0, 0.5])) == 0.5
    n = np.arange(1, 10**4 + 1)
    assert star_discrepancy(WeightedSample.uniform(np.mod(n * SQRT2_M1, 1.0))) < 0.01


def test_single_point():
    rep = full_discrepancy_bound(WeightedSample.uniform([0.3]))
    assert rep.d_full == pytest.approx(1.0) and rep.interval == (rep.d_star, 2 * rep.d_star)
    assert rep.consistent


def test_two_dim_factor():
    pts = np.random.default_rng(0).random((50, 2))
    rep = full_discrepancy_bound(WeightedSample.uniform(pts))
    assert rep.interval[1] == 4 * rep.d_star and rep.d_full is None


@settings(max_examples=150, deadline=None)
@given(grid_points, st.data())
def test_star_1d_matches_brute(pts, data):
    w = data.draw(st.lists(st.integers(1, 5), min_size=len(pts), max_size=len(pts)))
    got = star_discrepancy(WeightedSample(np.array(pts), np.array(w, dtype=float)))
    assert got == pytest.approx(brute_star_1d(pts, w), abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(grid_points, st.data())
def test_full_1d_matches_brute(pts, data):
    w = data.draw(st.lists(st.integers(1, 5), min_size=len(pts), max_size=len(pts)))
    s = WeightedSample(np.array(pts), np.array(w, dtype=float))
    d = full_discrepancy_1d(s)
    assert d == pytest.approx(brute_full_1d(pts, w), abs=1e-12)
    ds = star_discrepancy(s)
    assert ds - 1e-12 <= d <= 2 * ds + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), min_size=1, max_size=20), st.data())
def test_star_2d_matches_brute(cells, data):
    pts = np.array(cells, dtype=float) / 8
    w = np.array(data.draw(st.lists(st.integers(1, 4), min_size=len(cells), max_size=len(cells))), dtype=float)
    got = star_discrepancy(WeightedSample(pts, w))
    assert got == pytest.approx(brute_star_2d(pts, w), abs=1e-12)


def test_star_2d_random_brute():
    rng = np.random.default_rng(1)
    pts = rng.random((200, 2))
    w = 1 / np.arange(1, 201)
    assert star_discrepancy(WeightedSample(pts, w)) == pytest.approx(brute_star_2d(pts, w), abs=1e-12)


@pytest.mark.parametrize("d", [1, 2])
def test_bounds_bracket_exact(d):
    rng = np.random.default_rng(d)
    pts = rng.random((2000, d)) if d == 2 else rng.random(2000)
    s = WeightedSample(pts, 1 / np.arange(1, 2001))
    lo, hi = star_discrepancy_bounds(s, G=64)
    exact = star_discrepancy(s)
    assert lo - 1e-12 <= exact <= hi + 1e-12


def test_caps():
    with pytest.raises(InvalidArgument, match="subsample"):
        star_discrepancy(WeightedSample.uniform(np.zeros((5001, 2))))


def test_sample_validation():
    with pytest.raises(InvalidArgument):
        WeightedSample(np.zeros(3), np.array([1.0, 0.0, 1.0]))
    with pytest.raises(InvalidArgument):
        WeightedSample(np.zeros(3), np.ones(2))
    s = WeightedSample(np.array([0.2, 1.0, -0.25]), np.ones(3), norm=6.0)
    assert s.total_mass == 0.5 and list(s.points[:, 0]) == [0.2, 0.0, 0.75]


def test_erdos_turan_zero():
    K = 9
    corr = {p: 0j for p in required_pairs(K)}
    assert erdos_turan_bound(corr, K, 1.0) == pytest.approx(0.1)


def test_erdos_turan_missing_pair():
    corr = {p: 0j for p in required_pairs(2)}
    del corr[(1, -2)]
    with pytest.raises(InvalidArgument, match=r"\(1, -2\)"):
        erdos_turan_bound(corr, 2, 1.0)


def test_erdos_turan_weights():
    corr = {p: 0j for p in required_pairs(2)}
    corr[(2, -2)] = 8.0
    corr[(0, 1)] = 2.0
    assert erdos_turan_bound(corr, 2, 2.0) == pytest.approx(1 / 3 + (8 / 4 + 2) / 2)


def test_correlation_table_direct():
    rng = np.random.default_rng(4)
    a, b = rng.random(300), rng.random(300)
    w = 1 / np.arange(1, 301)
    tab = correlation_table(a, b, w, 3)
    assert set(tab) == set(required_pairs(3))
    for (m1, m2), v in tab.items():
        want = sum(cmath.exp(2j * math.pi * (m1 * x + m2 * y)) * c for x, y, c in zip(a, b, w))
        assert abs(v - want) < 1e-12


def test_coverage_constant_orbit():
    s = WeightedSample(np.zeros((100, 2)), np.ones(100))
    rep = grid_coverage(s, 8)
    assert rep.n_nonempty == 1 and rep.n_empty == 63
    assert rep.total_mass == pytest.approx(1.0)


def test_coverage_json_roundtrip():
    s = WeightedSample(np.array([0.1, 0.6]), np.ones(2))
    rep = grid_coverage(s, 4)
    d = rep.to_dict()
    assert d["n_empty"] == 2 and d["empty_cells"] == [[1], [3]]
    with pytest.raises(InvalidArgument):
        grid_coverage(s, 1)


def test_coverage_masses_sum():
    rng = np.random.default_rng(5)
    s = WeightedSample(rng.random((1000, 2)), rng.random(1000) + 0.1)
    rep = grid_coverage(s, 8)
    assert rep.masses.sum() == pytest.approx(1.0)
    assert rep.masses.shape == (8, 8)
