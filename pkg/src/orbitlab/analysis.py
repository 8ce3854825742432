"""
Analytic statistics: logarithmic averages, pretentious distance, the
imaginary drift sum, binary correlations and the concentration diagnostic.

Long sums go through :func:`ksum`: numpy pairwise sums over fixed blocks,
combined with ``math.fsum``.  The block layout is fixed, so every result is
bit-reproducible, and the error does not grow with x the way a naive running
sum does.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .arith import SpfTable, prime_pi
from .errors import InvalidArgument, ReachError
from .multfunc import MultFnSpec, phase_difference, phase_range, phases_at, prime_phases
from .sievecount import SieveParams, sieved_candidates
from .torus import TAU

_KBLOCK = 1024


def ksum(values) -> float:
    """Compensated sum of a float array (block-pairwise + fsum)."""
    a = np.asarray(values, dtype=np.float64).ravel()
    if a.size == 0:
        return 0.0
    starts = np.arange(0, a.size, _KBLOCK)
    return math.fsum(np.add.reduceat(a, starts).tolist())


def _primes_in(table: SpfTable, lo, hi) -> np.ndarray:
    if hi > table.limit:
        raise ReachError(f"x={hi} exceeds the sieve limit {table.limit}", "x")
    ps = table.primes
    return ps[(ps > lo) & (ps <= hi)]


@dataclass
class DistanceResult:
    squared_distance: float
    range: tuple        # (N_low, x): primes in (N_low, x]
    prime_terms: int

    @property
    def distance(self) -> float:
        return math.sqrt(self.squared_distance)


def pretentious_distance_sq(f: MultFnSpec, g: MultFnSpec, N_low: int, x: int, table: SpfTable) -> DistanceResult:
    """sum over primes N_low < p <= x of (1 - Re f(p) conj(g(p))) / p."""
    if N_low >= x:
        raise InvalidArgument(f"N_low={N_low} must be below x={x}")
    ps = _primes_in(table, N_low, x)
    diff = phase_difference(prime_phases(f, ps), prime_phases(g, ps))
    terms = (1.0 - np.cos(TAU * diff)) / ps
    # guard the exact zero case against cos rounding
    terms[diff == 0.0] = 0.0
    return DistanceResult(max(ksum(terms), 0.0), (N_low, x), int(ps.size))


def distance_to_twists(f: MultFnSpec, target: MultFnSpec, x: int, table: SpfTable, T: float = None, n_grid: int = 200):
    """Approximate inf over |t| <= T of D(f, target * n^{it}; x)^2 on a grid.

    The grid is {0} plus +-logspace(1e-3, T, n_grid); returns (value, t).
    """
    T = float(x if T is None else T)
    pos = np.geomspace(1e-3, max(T, 2e-3), n_grid)
    grid = np.concatenate([[0.0], pos, -pos])
    best = (math.inf, 0.0)
    for t in grid:
        tw = MultFnSpec(target.exceptions, target.base, target.twist + float(t))
        d = pretentious_distance_sq(f, tw, 1, x, table).squared_distance
        if d < best[0]:
            best = (d, float(t))
    return best


@dataclass
class TriangleReport:
    d_fh: float
    d_fg: float
    d_gh: float
    k: int
    d_fg_k: float       # D(f^k, g^k)
    triangle_ok: bool
    power_ok: bool

    @property
    def passed(self):
        return self.triangle_ok and self.power_ok


def triangle_check(f, g, h, x: int, table: SpfTable, k: int = 2, tol: float = 1e-9) -> TriangleReport:
    """D(f,h) <= D(f,g) + D(g,h) and D(f^k, g^k) <= k D(f,g), on primes <= x."""
    d = lambda a, b: pretentious_distance_sq(a, b, 1, x, table).distance
    fh, fg, gh = d(f, h), d(f, g), d(g, h)
    fgk = d(f.power(k), g.power(k))
    return TriangleReport(fh, fg, gh, k, fgk, fh <= fg + gh + tol, k * fg >= fgk - tol)


def _angles_at(fn: MultFnSpec, ns: np.ndarray, table: SpfTable) -> np.ndarray:
    if ns.size and ns.max() <= table.limit and ns.min() >= 1:
        hi = int(ns.max())
        return phase_range(fn, hi, table).angles()[ns]
    return phases_at(fn, ns, table).angles()


def weighted_exp_sum(angles: np.ndarray, ns: np.ndarray) -> complex:
    """sum e(angle_n) / n, compensated."""
    w = 1.0 / ns.astype(np.float64)
    ph = TAU * angles
    return complex(ksum(np.cos(ph) * w), ksum(np.sin(ph) * w))


def log_average(f: MultFnSpec, x: int, table: SpfTable) -> complex:
    """(1/log x) sum_{n <= x} f(n) / n."""
    if x < 2:
        raise InvalidArgument("x must be at least 2")
    ns = np.arange(1, x + 1, dtype=np.int64)
    ang = phase_range(f, x, table).angles()[1:]
    return weighted_exp_sum(ang, ns) / math.log(x)


@dataclass
class CorrelationResult:
    value: complex
    x: int
    forms: tuple
    degenerate: bool = False    # a1 b2 - a2 b1 = 0

    def __abs__(self):
        return abs(self.value)


def binary_correlation(f, g, a1: int, b1: int, a2: int, b2: int, x: int, table: SpfTable) -> CorrelationResult:
    """(1/log x) sum_{n <= x} f(a1 n + b1) g(a2 n + b2) / n."""
    if a1 < 1 or a2 < 1 or b1 < 0 or b2 < 0:
        raise InvalidArgument("need a1, a2 >= 1 and b1, b2 >= 0")
    if x < 2:
        raise InvalidArgument("x must be at least 2")
    top = max(a1 * x + b1, a2 * x + b2)
    if top > table.reach:
        raise ReachError(f"a*x+b={top} is beyond the factorization reach {table.reach}", "x")
    degenerate = a1 * b2 - a2 * b1 == 0
    if degenerate:
        warnings.warn("a1*b2 - a2*b1 = 0: the forms are proportional and the sum need not decay", stacklevel=2)
    ns = np.arange(1, x + 1, dtype=np.int64)
    ang = _angles_at(f, a1 * ns + b1, table) + _angles_at(g, a2 * ns + b2, table)
    val = weighted_exp_sum(ang, ns) / math.log(x)
    return CorrelationResult(val, x, (a1, b1, a2, b2), degenerate)


def imaginary_drift(f: MultFnSpec, N: int, x: int, table: SpfTable) -> float:
    """sum_{N < p <= x} Im f(p) / p."""
    if N >= x:
        raise InvalidArgument(f"N={N} must be below x={x}")
    ps = _primes_in(table, N, x)
    ph = prime_phases(f, ps)
    im = np.sin(TAU * ph.angles())
    if ph.is_exact:
        # values +-1 have imaginary part exactly 0
        im[(2 * ph.num) % ph.den == 0] = 0.0
    return ksum(im / ps)


@dataclass
class ConcentrationReport:
    lhs: float                 # sum |f(n) - e^{i J}|^2 over sieved n <= x
    drift: float               # J = imaginary drift over (N, x]
    phi: int                   # number of sieved n
    distance_sq: float         # D(f, 1; N, x)^2
    sieve_term: float          # phi * (D^2 + 1/N)
    error_term: float          # 4^{pi(N)} x loglog x / log x
    shifted: bool
    terms: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        rhs = self.sieve_term + self.error_term
        return self.lhs / rhs if rhs > 0 else math.inf


def concentration_diagnostic(f: MultFnSpec, N: int, B: int, x: int, table: SpfTable, shifted: bool = False) -> ConcentrationReport:
    """Concentration of f(n) (or f(Bn+1)) around e^{iJ} on sieved n <= x."""
    if B % 2:
        raise InvalidArgument(f"B must be even, got {B}")
    params = SieveParams(N, B)
    ns = sieved_candidates(params, x, table)
    drift = imaginary_drift(f, N, x, table)
    args = B * ns + 1 if shifted else ns
    ang = _angles_at(f, args, table) if ns.size else np.zeros(0)
    dev = np.abs(np.exp(TAU * 1j * ang) - np.exp(1j * drift)) ** 2
    lhs = ksum(dev)
    dsq = pretentious_distance_sq(f, MultFnSpec(), N, x, table).squared_distance
    sieve_term = ns.size * (dsq + 1.0 / N)
    error_term = 4.0 ** prime_pi(table, N) * x * math.log(math.log(x)) / math.log(x)
    return ConcentrationReport(lhs, drift, int(ns.size), dsq, sieve_term, error_term, shifted,
                               {"sieve_ratio": lhs / sieve_term if sieve_term else math.inf})
