"""Acceptance criteria, one test each.  A PASS/FAIL line per criterion is
printed in the terminal summary."""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import record
from orbitlab.analysis import binary_correlation, pretentious_distance_sq
from orbitlab.beurling import beurling_polynomial, interval_majorant, interval_minorant, offset_grid
from orbitlab.discrepancy import (WeightedSample, correlation_table, erdos_turan_bound, full_discrepancy_bound,
                                  grid_coverage, star_discrepancy_bounds)
from orbitlab.multfunc import MultFnSpec, phase_range
from orbitlab.scenarios import (KroneckerQuery, build_preset, cross_violations, diagonal_gaps,
                                kronecker_search, orbit_scan, ppower_search)
from orbitlab.sievecount import (SieveParams, ext_congruence_logmass, ext_stated_limit, phi_curve,
                                 triv_residual)
from orbitlab.torus import archimedean_angles, circular_distance

ONE = MultFnSpec()

# committed calibration constants
TRIV_CONSTANT = 10.0
DISTANCE_BAND = (-1.0, 1.0)
ET_LIMIT = 0.2
DSTAR_FACTOR = 1.0


def finish(number, checks, t0, limit, detail):
    elapsed = time.perf_counter() - t0
    checks = dict(checks, runtime=elapsed < limit)
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    record(number, ok, f"{detail}; {elapsed:.1f}s" + (f"; failed: {', '.join(failed)}" if failed else ""))
    assert ok, f"criterion {number} failed checks: {failed} ({detail})"


def _small_factor(v, bound=13):
    for d in range(2, bound + 1):
        if v % d == 0:
            return d
    return bound + 1


def test_criterion_01_sieve_exactness(table_small):
    t0 = time.perf_counter()
    x = 10**5
    n = np.arange(1, x + 1)
    lpf_n = np.array([_small_factor(v) for v in range(1, x + 1)])
    mismatches = cases = 0
    for B in (1, 2, 4, 12):
        lpf_b = np.array([_small_factor(B * v + 1) for v in range(1, x + 1)])
        for N in range(2, 14):
            rough = (lpf_n > N) & (lpf_b > N)
            for q in (1, 4, 5, 12):
                for a in range(q):
                    want = np.cumsum(rough & (n % q == a))
                    got = phi_curve(SieveParams(N, B, q, a), x, table_small)
                    cases += 1
                    mismatches += int(got[0] != 0 or not np.array_equal(got[1:], want))
    finish(1, {"exact": mismatches == 0}, t0, 60, f"{cases} (N,B,q,a) curves up to 1e5, {mismatches} mismatches")


def test_criterion_02_triv_residual(table_1e6):
    t0 = time.perf_counter()
    worst = 0.0
    for N in (3, 5, 7):
        for B in (2, 4):
            for x in (10**4, 10**5, 10**6):
                worst = max(worst, abs(triv_residual(SieveParams(N, B), x, table_1e6)))
    finish(2, {"bounded": worst <= TRIV_CONSTANT}, t0, 120, f"max |residual| = {worst:.4f} <= {TRIV_CONSTANT}")


def test_criterion_03_beurling():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    t = offset_grid(10**4)
    mean_err = 0.0
    support_ok = True
    violations = 0
    for K in (4, 8, 16, 32):
        P = beurling_polynomial(K)
        mean_err = max(mean_err, abs(P.coefficient(0) - 1 / (2 * (K + 1))))
        support_ok &= all(P.coefficient(m) == 0 for m in (K + 1, K + 5, -K - 1))
        for _ in range(20):
            a, b = np.sort(rng.random(2))
            ind = ((t >= a) & (t <= b)).astype(float)
            lo, hi = interval_minorant(K, a, b), interval_majorant(K, a, b)
            support_ok &= hi.coefficient(K + 1) == 0 and lo.coefficient(-K - 1) == 0
            violations += int(np.count_nonzero(lo(t) > ind + 1e-12))
            violations += int(np.count_nonzero(hi(t) < ind - 1e-12))
    finish(3, {"mean": mean_err <= 1e-12, "support": support_ok, "sandwich": violations == 0}, t0, 30,
           f"mean error {mean_err:.1e}, {violations} sandwich violations")


def test_criterion_04_discrepancy_relation():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    w = 1.0 / np.arange(1, 1001)
    violations = 0
    for _ in range(100):
        rep = full_discrepancy_bound(WeightedSample(rng.random(1000), w))
        violations += int(not rep.consistent)
    finish(4, {"relation": violations == 0}, t0, 60, f"100 samples, {violations} violations")


def test_criterion_05_counterexample_ii(table_1e6):
    t0 = time.perf_counter()
    p = build_preset("counterexample-ii")
    x = 10**6
    viol = cross_violations(p.f, p.g, x, table_1e6)
    cov = grid_coverage(orbit_scan(p.f, p.g, x, table_1e6).sample, 8)
    empty = set(cov.empty_cells)
    off_cross = set(cov.off_cross_cells())
    finish(5, {"invariant": viol == 0, "cells": empty == off_cross and len(empty) == 49}, t0, 60,
           f"{viol} violations, {len(empty)} empty cells")


def test_criterion_06_counterexample_i(table_1e6):
    t0 = time.perf_counter()
    p = build_preset("counterexample-i")
    k, t = p.config["order_k"], p.config["t"]
    ns = np.arange(1, 10**4 + 1)
    ang = phase_range(p.f, 10**4, table_1e6).angles()[1:]
    err = float(np.max(circular_distance(np.mod(k * ang, 1.0), archimedean_angles(ns, k * t))))
    scan = orbit_scan(p.f, p.g, 10**6, table_1e6)
    joint = grid_coverage(scan.sample, 8).n_empty
    m0 = grid_coverage(scan.marginal(0), 16).n_empty
    m1 = grid_coverage(scan.marginal(1), 16).n_empty
    finish(6, {"identity": err <= 1e-9, "joint": joint >= 1, "marginals": m0 == 0 and m1 == 0}, t0, 120,
           f"identity error {err:.1e}, {joint} empty joint cells, marginal empties {m0}/{m1}")


def test_criterion_07_ratio_dichotomy(table_1e7):
    t0 = time.perf_counter()
    rat = build_preset("ratratio-rational").family
    ns = np.arange(2, 10**6 + 1, dtype=np.int64)
    gaps = diagonal_gaps(rat, ns, table_1e7)
    viol = int(np.count_nonzero(gaps > abs(rat.u) / ns))
    irr = build_preset("ratratio-irrational")
    scan = orbit_scan(irr.f, irr.g, 10**7, table_1e7, powers=irr.powers)
    empty = grid_coverage(scan.sample, 8).n_empty
    finish(7, {"diagonal": viol == 0, "irrational": empty == 0}, t0, 600,
           f"{viol} diagonal violations over n <= 1e6, {empty} empty cells at 1e7")


def test_criterion_08_distance_growth(table_1e7):
    t0 = time.perf_counter()
    offsets = []
    for t in (0.5, 1.0, 2.0):
        for x in (10**4, 10**5, 10**6, 10**7):
            d = pretentious_distance_sq(ONE, MultFnSpec(twist=t), 1, x, table_1e7).squared_distance
            offsets.append(d - math.log(1 + abs(t) * math.log(x)))
    lo, hi = DISTANCE_BAND
    finish(8, {"band": lo <= min(offsets) and max(offsets) <= hi and hi - lo <= 2}, t0, 120,
           f"offsets in [{min(offsets):.3f}, {max(offsets):.3f}], band [{lo}, {hi}]")


def test_criterion_09_correlation_decay(table_1e6):
    t0 = time.perf_counter()
    p = build_preset("random-phase")
    corr = [abs(binary_correlation(p.f, p.g, 1, 0, 1, 1, x, table_1e6)) for x in (10**4, 10**5, 10**6)]
    x = 10**6
    scan = orbit_scan(p.f, p.g, x, table_1e6)
    table = correlation_table(scan.theta1, scan.theta2, scan.weights, 8)
    bound = erdos_turan_bound(table, 8, math.log(x))
    lo, hi = star_discrepancy_bounds(WeightedSample(scan.sample.points, scan.weights, norm=math.log(x)))
    finish(9, {"decay": corr[0] > corr[1] > corr[2], "bound": bound <= ET_LIMIT,
               "dstar": hi <= DSTAR_FACTOR * bound}, t0, 300,
           f"|corr| = {', '.join(f'{c:.4f}' for c in corr)}; bound {bound:.3f}; d_star in [{lo:.4f}, {hi:.4f}]")


def _exhaustive(alphas, targets, eta, M, k):
    for m in range(k, M + 1, k):
        if all(min((m * a - t) % 1, 1 - (m * a - t) % 1) < eta for a, t in zip(alphas, targets)):
            return m
    return None


def test_criterion_10_kronecker():
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    disagreements = 0
    for i in range(100):
        dim = 1 + (i % 2)
        alphas = tuple(float(v) for v in rng.random(dim))
        targets = tuple(float(v) for v in rng.random(dim))
        eta = float(rng.uniform(0.002, 0.05)) * dim
        M, k = int(rng.integers(100, 5000)), int(rng.integers(1, 4))
        want = _exhaustive([Fraction(a) for a in alphas], [Fraction(t) for t in targets], Fraction(eta), M, k)
        q = KroneckerQuery(alphas, targets, eta, M, k)
        disagreements += int(kronecker_search(q) != want)
        if dim == 1:
            disagreements += int(kronecker_search(q, accelerated=True) != want)
    uncertified = found = 0
    for seed in range(20):
        r = np.random.default_rng(seed)
        f = MultFnSpec(base=build_preset("random-phase").f.base)
        z, u = float(r.random()), float(r.uniform(-2, 2))
        delta, eta, kk = 0.05, 0.1, int(r.integers(1, 4))
        res = ppower_search(f, z, u, delta, eta, kk, 10, 500, 400)
        if res is None:
            continue
        found += 1
        ang = (res.m * float(f.prime_angle(res.p))) % 1
        chord = abs(np.exp(2j * np.pi * ang) - np.exp(2j * np.pi * z))
        arc = (res.m * u * math.log(res.p) / (2 * math.pi)) % 1
        ok = chord < eta and min(arc, 1 - arc) <= delta and res.m % kk == 0 and res.p > 10 and res.certify()
        uncertified += int(not ok)
    finish(10, {"agreement": disagreements == 0, "ppower": uncertified == 0 and found > 0}, t0, 60,
           f"{disagreements} disagreements on 100 queries; {found} ppower hits, {uncertified} uncertified")


def test_criterion_11_ext_convergence(table_1e6):
    t0 = time.perf_counter()
    limit = float(ext_stated_limit(4, 5, 21, ONE, ONE))
    gaps = [abs(ext_congruence_logmass(4, 5, 21, ONE, ONE, x, table_1e6) - limit) / limit for x in (10**5, 10**6)]
    finish(11, {"within_15pct": gaps[1] <= 0.15, "shrinks": gaps[1] < gaps[0]}, t0, 120,
           f"relative gap to {limit:.6f}: {gaps[0]:.3f} at 1e5, {gaps[1]:.3f} at 1e6")
