"""
Log-weighted discrepancy on T and T^2, the Erdos-Turan style bound and grid
coverage.

A :class:`WeightedSample` holds points in [0, 1)^d with positive weights and a
normaliser.  By default the normaliser is the total weight, so the empirical
measure is a probability measure; pass ``norm=math.log(N)`` for the raw
(1/log N) sum_{n <= N} 1/n weighting.

Exact algorithms:

* d = 1, anchored: one pass over the sorted distinct coordinates, checking
  the open and closed mass at each.
* d = 1, all arcs: with F(s) = mass[0, s) - s tracked through both one-sided
  values, an interval deviation is a difference F(v) - F(u); wrapping arcs add
  the constant (total mass - 1).  Running max/min make this O(M log M).
* d = 2, anchored: corners at data coordinates (and 1), closed boxes for the
  excess and open boxes for the deficit; O(M^2) via one cumulative row per
  x-threshold.

For d = 2 beyond the cap, :func:`star_discrepancy_bounds` brackets D* on a
G x G grid.
"""

from dataclasses import dataclass, field
import json
import math

import numpy as np

from .errors import InvalidArgument
from .torus import TAU

MAX_POINTS_1D = 10**5
MAX_POINTS_2D = 5000
MAX_POINTS_FULL_1D = 10**4


@dataclass(frozen=True, eq=False)
class WeightedSample:
    points: np.ndarray          # shape (M,) or (M, d)
    weights: np.ndarray
    norm: float = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        w = np.asarray(self.weights, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] not in (1, 2):
            raise InvalidArgument("points must be 1- or 2-dimensional")
        if w.shape != (pts.shape[0],):
            raise InvalidArgument("points and weights must have equal length")
        if w.size and w.min() <= 0:
            raise InvalidArgument("weights must be positive")
        pts = np.mod(pts, 1.0)
        pts[pts >= 1.0] = 0.0
        norm = float(w.sum()) if self.norm is None else float(self.norm)
        if not norm > 0:
            raise InvalidArgument("norm must be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "norm", norm)

    @classmethod
    def uniform(cls, points, norm=None):
        points = np.asarray(points, dtype=np.float64)
        return cls(points, np.ones(points.shape[0]), norm)

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    @property
    def total_mass(self) -> float:
        """Total weight over the normaliser (1 with the default norm)."""
        return math.fsum(self.weights.tolist()) / self.norm


@dataclass
class DiscrepancyReport:
    d_star: float
    d_full: float = None
    box_witness: tuple = None
    interval: tuple = None      # (d_star, 2^d d_star)

    @property
    def consistent(self) -> bool:
        if self.d_full is None:
            return True
        lo, hi = self.interval
        return lo - 1e-12 <= self.d_full <= hi + 1e-12


def _distinct_1d(sample: WeightedSample):
    x = sample.points[:, 0]
    order = np.argsort(x, kind="stable")
    xs, inv = np.unique(x[order], return_inverse=True)
    w = np.bincount(inv, weights=sample.weights[order], minlength=xs.size) / sample.norm
    return xs, w


def _star_1d(sample: WeightedSample):
    xs, w = _distinct_1d(sample)
    closed = np.cumsum(w)
    open_ = closed - w
    T = sample.total_mass
    cands = [(0.0, (0.0, "open")), (abs(T - 1.0), (1.0, "closed"))]
    if xs.size:
        i = int(np.argmax(closed - xs))
        cands.append((float(closed[i] - xs[i]), (float(xs[i]), "closed")))
        j = int(np.argmax(xs - open_))
        cands.append((float(xs[j] - open_[j]), (float(xs[j]), "open")))
    val, wit = max(cands, key=lambda c: c[0])
    return val, wit


def _profile_1d(sample: WeightedSample):
    """F at s = 0, then (open, closed) at each distinct point, then s = 1."""
    xs, w = _distinct_1d(sample)
    closed = np.cumsum(w)
    open_ = closed - w
    F = np.empty(2 * xs.size + 2)
    F[0] = 0.0
    F[1:-1:2] = open_ - xs
    F[2:-1:2] = closed - xs
    F[-1] = sample.total_mass - 1.0
    return F


def full_discrepancy_1d(sample: WeightedSample) -> float:
    """Exact sup over all arcs of |mass - length|, d = 1."""
    if sample.d != 1:
        raise InvalidArgument("exact full discrepancy is only implemented for d = 1")
    F = _profile_1d(sample)
    c = sample.total_mass - 1.0
    pmax = np.maximum.accumulate(F)
    pmin = np.minimum.accumulate(F)
    # plain intervals: u before v
    best = max(float(np.max(F - pmin)), float(np.max(pmax - F)))
    # wrapping arcs: v before u, deviation c + F(v) - F(u)
    if F.size > 1:
        wrap_hi = c + pmax[:-1] - F[1:]
        wrap_lo = c + pmin[:-1] - F[1:]
        best = max(best, float(np.max(np.abs(wrap_hi))), float(np.max(np.abs(wrap_lo))))
    return best


def _star_2d(sample: WeightedSample):
    x, y = sample.points[:, 0], sample.points[:, 1]
    w = sample.weights / sample.norm
    xs = np.unique(np.append(x, 1.0))
    ys = np.unique(np.append(y, 1.0))
    xi = np.searchsorted(xs, x)
    yi = np.searchsorted(ys, y)
    order = np.argsort(xi, kind="stable")
    xi, yi, w = xi[order], yi[order], w[order]
    bounds = np.searchsorted(xi, np.arange(xs.size + 1))
    hist = np.zeros(ys.size)
    best, wit = 0.0, (0.0, 0.0, "open")
    for i, sx in enumerate(xs):
        lo, hi = bounds[i], bounds[i + 1]
        # open box [0, sx) x [0, sy): points with x < sx and y < sy
        cum = np.cumsum(hist)
        open_mass = cum - hist
        defect = sx * ys - open_mass
        j = int(np.argmax(defect))
        if defect[j] > best:
            best, wit = float(defect[j]), (float(sx), float(ys[j]), "open")
        np.add.at(hist, yi[lo:hi], w[lo:hi])
        closed_mass = np.cumsum(hist)
        excess = closed_mass - sx * ys
        j = int(np.argmax(excess))
        if excess[j] > best:
            best, wit = float(excess[j]), (float(sx), float(ys[j]), "closed")
    return best, wit


def star_discrepancy(sample: WeightedSample, return_witness: bool = False):
    """Exact anchored discrepancy D* (sup over boxes [0, s) with s in [0, 1]^d)."""
    if sample.d == 1:
        if len(sample) > MAX_POINTS_1D:
            raise InvalidArgument(f"{len(sample)} points exceed the d=1 cap {MAX_POINTS_1D}; subsample or use star_discrepancy_bounds")
        val, wit = _star_1d(sample)
    else:
        if len(sample) > MAX_POINTS_2D:
            raise InvalidArgument(f"{len(sample)} points exceed the d=2 cap {MAX_POINTS_2D}; subsample or use star_discrepancy_bounds")
        val, wit = _star_2d(sample)
    return (val, wit) if return_witness else val


def star_discrepancy_bounds(sample: WeightedSample, G: int = 1024) -> tuple:
    """(lower, upper) bracket for D* from a G^d grid; any sample size."""
    if G < 1:
        raise InvalidArgument("G must be positive")
    d = sample.d
    cell = np.minimum((sample.points * G).astype(np.int64), G - 1)
    g = np.arange(G + 1) / G
    w = sample.weights / sample.norm
    if d == 1:
        h = np.bincount(cell[:, 0], weights=w, minlength=G)
        Mc = np.concatenate([[0.0], np.cumsum(h)])     # mass of [0, g_i)
        vol = g
        lower = float(np.max(np.abs(Mc - vol)))
        upper = float(max(np.max(Mc[1:] - g[:-1]), np.max(g[1:] - Mc[:-1])))
    else:
        h = np.zeros((G, G))
        np.add.at(h, (cell[:, 0], cell[:, 1]), w)
        Mc = np.zeros((G + 1, G + 1))
        Mc[1:, 1:] = h.cumsum(0).cumsum(1)
        vol = np.outer(g, g)
        lower = float(np.max(np.abs(Mc - vol)))
        upper = float(max(np.max(Mc[1:, 1:] - vol[:-1, :-1]), np.max(vol[1:, 1:] - Mc[:-1, :-1])))
    return lower, max(upper, lower)


def full_discrepancy_bound(sample: WeightedSample) -> DiscrepancyReport:
    """[D*, 2^d D*], plus the exact full D when d = 1 and M <= 10^4."""
    ds, wit = star_discrepancy(sample, return_witness=True)
    full = None
    if sample.d == 1 and len(sample) <= MAX_POINTS_FULL_1D:
        full = full_discrepancy_1d(sample)
    return DiscrepancyReport(ds, full, wit, (ds, 2**sample.d * ds))


# ---------------------------------------------------------------------------
# Erdos-Turan

def required_pairs(K: int):
    return [(a, b) for a in range(-K, K + 1) for b in range(-K, K + 1) if (a, b) != (0, 0)]


def erdos_turan_bound(correlations, K: int, log_norm: float) -> float:
    """1/(K+1) + (1/log_norm) sum_{(m1,m2) != 0, |m_i| <= K} |S(m1,m2)| / R(m1,m2).

    S(m1, m2) are the raw weighted sums sum f(n)^{m1} g(n+1)^{m2} / n and
    R(m1, m2) = max(1,|m1|) max(1,|m2|).  The absolute constant is taken as 1.
    """
    if K < 0:
        raise InvalidArgument("K must be nonnegative")
    if not log_norm > 0:
        raise InvalidArgument("log_norm must be positive")
    terms = []
    for m1, m2 in required_pairs(K):
        if (m1, m2) not in correlations:
            raise InvalidArgument(f"missing correlation for (m1, m2) = ({m1}, {m2})")
        terms.append(abs(correlations[(m1, m2)]) / (max(1, abs(m1)) * max(1, abs(m2))))
    return 1.0 / (K + 1) + math.fsum(terms) / log_norm


def correlation_table(theta1: np.ndarray, theta2: np.ndarray, weights: np.ndarray, K: int) -> dict:
    """Raw sums sum_n e(m1 theta1_n + m2 theta2_n) w_n for all |m_i| <= K.

    Uses S(-m) = conj S(m), so only half the pairs are evaluated.
    """
    from .analysis import ksum
    theta1 = np.asarray(theta1, dtype=np.float64)
    theta2 = np.asarray(theta2, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    out = {}
    for m1, m2 in required_pairs(K):
        if (m1, m2) in out:
            continue
        ph = TAU * np.mod(m1 * theta1 + m2 * theta2, 1.0)
        s = complex(ksum(np.cos(ph) * w), ksum(np.sin(ph) * w))
        out[(m1, m2)] = s
        out[(-m1, -m2)] = s.conjugate()
    return out


# ---------------------------------------------------------------------------
# grid coverage

@dataclass
class CoverageReport:
    G: int
    d: int
    masses: np.ndarray = field(repr=False)     # shape (G,) or (G, G), normalised
    total_mass: float = 0.0

    @property
    def empty_cells(self) -> list:
        idx = np.argwhere(self.masses == 0)
        return [tuple(int(v) for v in row) for row in idx]

    @property
    def n_empty(self) -> int:
        return int(np.count_nonzero(self.masses == 0))

    @property
    def n_nonempty(self) -> int:
        return int(self.masses.size - self.n_empty)

    @property
    def min_mass(self) -> float:
        return float(self.masses.min())

    @property
    def max_mass(self) -> float:
        return float(self.masses.max())

    def off_cross_cells(self) -> list:
        """Cells in neither the first row nor the first column (d = 2)."""
        G = self.G
        return [(i, j) for i in range(1, G) for j in range(1, G)]

    def to_dict(self) -> dict:
        cells = []
        for idx in np.ndindex(self.masses.shape):
            cells.append({"cell": list(idx), "mass": float(self.masses[idx])})
        return {
            "G": self.G,
            "d": self.d,
            "n_empty": self.n_empty,
            "empty_cells": [list(c) for c in self.empty_cells],
            "min_mass": self.min_mass,
            "max_mass": self.max_mass,
            "total_mass": self.total_mass,
            "cells": cells,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def grid_coverage(sample: WeightedSample, G: int) -> CoverageReport:
    """Log-weighted mass in each half-open cell of a G^d partition."""
    if G < 2:
        raise InvalidArgument(f"G must be at least 2, got {G}")
    cell = np.minimum((sample.points * G).astype(np.int64), G - 1)
    w = sample.weights / sample.norm
    if sample.d == 1:
        masses = np.bincount(cell[:, 0], weights=w, minlength=G)
    else:
        masses = np.bincount(cell[:, 0] * G + cell[:, 1], weights=w, minlength=G * G).reshape(G, G)
    # bincount leaves exact zeros for untouched cells
    return CoverageReport(G, sample.d, masses, float(masses.sum()))
