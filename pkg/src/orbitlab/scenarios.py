"""
Constructions and experiments: the two counterexample families, rational
versus irrational ratio families, Kronecker searches and orbit scans.

Orbit scans materialise (f(n), g(n+1)) (or (f(n-1), g(n))) for 2 <= n <= x
with weights 1/n; coverage and discrepancy are then read off the sample.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from .arith import SpfTable, primes_up_to
from .characters import find_character
from .discrepancy import WeightedSample, grid_coverage
from .errors import InvalidArgument, ReachError
from .multfunc import Constant, Dirichlet, MultFnSpec, RandomPhase, phase_range, prime_phases
from .torus import TAU, Angle, circle_value

SQRT2_M1 = math.sqrt(2) - 1
SQRT3_M1 = math.sqrt(3) - 1
GOLDEN_M1 = (math.sqrt(5) - 1) / 2


# ---------------------------------------------------------------------------
# constructions

def _character_rule(order: int, avoid=()):
    return Dirichlet(find_character(order, avoid))


def counterexample_i(order_k: int, order_l: int, t: float):
    """f = h1 n^{it}, g = h2 n^{it} with h1, h2 character extensions of exact orders k, l."""
    if order_k < 2 or order_l < 2:
        raise InvalidArgument(f"orders must be at least 2, got {order_k}, {order_l}")
    if t == 0:
        raise InvalidArgument("t must be nonzero")
    r1 = _character_rule(order_k)
    r2 = _character_rule(order_l, avoid={r1.chi.modulus})
    return MultFnSpec(base=r1, twist=t), MultFnSpec(base=r2, twist=t)


def _irrational_angle(v, name):
    a = v if isinstance(v, Angle) else Angle(float(v))
    if a.is_rational:
        raise InvalidArgument(f"{name} must be a real (irrational-marked) angle")
    return a


def counterexample_ii(p: int, alpha, beta):
    """f and g equal to 1 at every prime except p, where they are e(alpha), e(beta)."""
    if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise InvalidArgument(f"p must be prime, got {p}")
    return (MultFnSpec({p: _irrational_angle(alpha, "alpha")}),
            MultFnSpec({p: _irrational_angle(beta, "beta")}))


@dataclass
class RatioFamily:
    f: MultFnSpec
    g: MultFnSpec
    exponents: tuple     # (k s1, l r1)
    t: float
    t_prime: float
    u: float             # f^{k s1}(n) = n^{iu}, u = s1 t


def ratratio_family(k: int, l: int, r1: int, s1: int, t_prime: float, irrational: bool = False) -> RatioFamily:
    """f with f^k = n^{it}, g with g^l = n^{it'}, t = (r1/s1) t' (or sqrt(2) t').

    The powered pair (f^{k s1}(n), g^{l r1}(n+1)) = (n^{i s1 t}, (n+1)^{i r1 t'})
    hugs the diagonal when t/t' = r1/s1.
    """
    if r1 == 0 or s1 == 0:
        raise InvalidArgument("r1 and s1 must be nonzero")
    if k < 1 or l < 1:
        raise InvalidArgument("k and l must be positive")
    t = math.sqrt(2) * t_prime if irrational else r1 / s1 * t_prime
    h1 = _character_rule(k) if k > 1 else Constant()
    avoid = {h1.chi.modulus} if k > 1 else set()
    h2 = _character_rule(l, avoid) if l > 1 else Constant()
    f = MultFnSpec(base=h1, twist=t / k)
    g = MultFnSpec(base=h2, twist=t_prime / l)
    return RatioFamily(f, g, (k * s1, l * r1), t, t_prime, s1 * t)


def random_phase_pair(seed: int, order: int = None):
    """Two independent seeded random-phase functions (seeds ``seed`` and ``seed + 1``)."""
    return MultFnSpec(base=RandomPhase(seed, order)), MultFnSpec(base=RandomPhase(seed + 1, order))


# ---------------------------------------------------------------------------
# orbits

FORWARD = "forward"      # (f(n), g(n+1))
BACKWARD = "backward"    # (f(n-1), g(n))


@dataclass(eq=False)
class OrbitScan:
    f: MultFnSpec
    g: MultFnSpec
    x: int
    direction: str
    ns: np.ndarray = field(repr=False)
    theta1: np.ndarray = field(repr=False)
    theta2: np.ndarray = field(repr=False)

    @property
    def weights(self) -> np.ndarray:
        return 1.0 / self.ns.astype(np.float64)

    @property
    def sample(self) -> WeightedSample:
        return WeightedSample(np.column_stack([self.theta1, self.theta2]), self.weights)

    def marginal(self, which: int = 0) -> WeightedSample:
        return WeightedSample(self.theta1 if which == 0 else self.theta2, self.weights)

    @property
    def log_mass(self) -> float:
        from .analysis import ksum
        return ksum(self.weights) / math.log(self.x)

    def powered(self, e1: int, e2: int) -> "OrbitScan":
        """The orbit of (f^{e1}, g^{e2}), from the stored angles."""
        t1 = np.mod(e1 * self.theta1, 1.0)
        t2 = np.mod(e2 * self.theta2, 1.0)
        return OrbitScan(self.f.power(e1), self.g.power(e2), self.x, self.direction, self.ns, t1, t2)


def _powered_angles(fn: MultFnSpec, x: int, table: SpfTable, power: int):
    pa = phase_range(fn, x, table)
    if power != 1:
        pa = pa.scaled(power)
    return pa.angles()


def orbit_scan(f: MultFnSpec, g: MultFnSpec, x: int, table: SpfTable, direction: str = FORWARD, powers=(1, 1)) -> OrbitScan:
    """Weighted orbit for 2 <= n <= x.

    ``powers`` raises f and g to integer powers before taking angles; the
    exact rational parts are multiplied exactly.
    """
    if x < 2:
        raise InvalidArgument(f"x must be at least 2, got {x}")
    if direction not in (FORWARD, BACKWARD):
        raise InvalidArgument(f"direction must be {FORWARD!r} or {BACKWARD!r}")
    need = x + 1 if direction == FORWARD else x
    if need > table.limit:
        raise ReachError(f"x={x} needs a sieve up to {need}, table has {table.limit}", "x")
    e1, e2 = powers
    a = _powered_angles(f, need, table, e1)
    b = a if (g is f and e1 == e2) else _powered_angles(g, need, table, e2)
    ns = np.arange(2, x + 1, dtype=np.int64)
    if direction == FORWARD:
        t1, t2 = a[2 : x + 1], b[3 : x + 2]
    else:
        t1, t2 = a[1:x], b[2 : x + 1]
    return OrbitScan(f.power(e1), g.power(e2), x, direction, ns, t1, t2)


def cross_violations(f: MultFnSpec, g: MultFnSpec, x: int, table: SpfTable) -> int:
    """Count n <= x with f(n) != 1 and g(n+1) != 1 (exact for rational parts)."""
    a = phase_range(f, x + 1, table)
    b = phase_range(g, x + 1, table)
    nz = lambda pa, sl: (pa.num[sl] != 0) | ((pa.real[sl] != 0) if pa.real is not None else False)
    return int(np.count_nonzero(nz(a, slice(1, x + 1)) & nz(b, slice(2, x + 2))))


def diagonal_gaps(fam: RatioFamily, ns: np.ndarray, table: SpfTable) -> np.ndarray:
    """|e(f^{k s1}(n)) - e(g^{l r1}(n+1))| at the given n (the l1 distance to the diagonal)."""
    from .multfunc import phases_at
    e1, e2 = fam.exponents
    a = phases_at(fam.f, ns, table).scaled(e1).angles()
    b = phases_at(fam.g, ns + 1, table).scaled(e2).angles()
    return np.abs(np.exp(TAU * 1j * a) - np.exp(TAU * 1j * b))


# ---------------------------------------------------------------------------
# Kronecker searches

def _as_fraction(v) -> Fraction:
    if isinstance(v, Angle):
        v = v.value
    return Fraction(v)


@dataclass(frozen=True)
class KroneckerQuery:
    alphas: tuple
    targets: tuple
    eta: float
    M: int
    k: int = 1

    def __post_init__(self):
        if len(self.alphas) not in (1, 2) or len(self.alphas) != len(self.targets):
            raise InvalidArgument("need 1 or 2 alphas with matching targets")
        if not self.eta > 0:
            raise InvalidArgument("eta must be positive")
        if self.M < 1 or self.k < 1:
            raise InvalidArgument("M and k must be positive")

    def integer_form(self):
        """Common denominator D and integer steps, targets, eta (all times D)."""
        al = [_as_fraction(a) % 1 for a in self.alphas]
        tg = [_as_fraction(t) % 1 for t in self.targets]
        eta = _as_fraction(self.eta)
        D = math.lcm(*(f.denominator for f in al + tg + [eta]))
        steps = [int(self.k * a * D) % D for a in al]
        return D, steps, [int(t * D) for t in tg], int(eta * D)


def _circ_ok(r, T, E, D):
    d = (r - T) % D
    return min(d, D - d) < E


def kronecker_bruteforce(query: KroneckerQuery):
    """Least m <= M, k | m, with ||m alpha_j - target_j|| < eta for all j; exact."""
    D, steps, tg, E = query.integer_form()
    res = [0] * len(steps)
    for j in range(1, query.M // query.k + 1):
        ok = True
        for i, s in enumerate(steps):
            res[i] = (res[i] + s) % D
            ok = ok and _circ_ok(res[i], tg[i], E, D)
        if ok:
            return j * query.k
    return None


def _first_in_range(a: int, m: int, l: int, r: int):
    """Least x >= 0 with l <= (a x) mod m <= r, for 0 <= l <= r < m; None if none."""
    a %= m
    if l == 0:
        return 0
    if a == 0:
        return None
    x = -(-l // a)
    if a * x <= r:
        return x
    # number of wraps k: least k with (m k) mod a in [(-r) mod a, (-l) mod a]
    k = _first_in_range(m % a, a, (-r) % a, (-l) % a)
    if k is None:
        return None
    return -(-(l + m * k) // a)


def kronecker_accelerated(query: KroneckerQuery):
    """Single-alpha search by the Euclid-like first-hit recursion; exact."""
    if len(query.alphas) != 1:
        raise InvalidArgument("accelerated mode handles a single alpha")
    D, (s,), (T,), E = query.integer_form()
    if E == 0:
        return None
    # want least j >= 1 with (s j - T) mod D in (-E, E); put j = y + 1
    lo, hi = (T - E + 1 - s), (T + E - 1 - s)
    if hi - lo + 1 >= D:
        y = 0
    else:
        lo %= D
        hi %= D
        parts = [(lo, hi)] if lo <= hi else [(lo, D - 1), (0, hi)]
        hits = [_first_in_range(s, D, a, b) for a, b in parts]
        hits = [h for h in hits if h is not None]
        if not hits:
            return None
        y = min(hits)
    m = (y + 1) * query.k
    return m if m <= query.M else None


def kronecker_search(query: KroneckerQuery, accelerated: bool = False):
    if accelerated and len(query.alphas) == 1:
        return kronecker_accelerated(query)
    return kronecker_bruteforce(query)


@dataclass
class PPowerResult:
    p: int
    m: int
    chord: float          # |f(p)^m - z|
    arc_distance: float   # circular distance of p^{ium} to 1
    eta: float
    delta: float
    k: int

    def certify(self) -> bool:
        return self.chord < self.eta and self.arc_distance <= self.delta and self.m % self.k == 0


def ppower_search(f: MultFnSpec, z, u: float, delta: float, eta: float, k: int, N: int, prime_bound: int, M: int):
    """First (p, m) in lexicographic order with N < p <= prime_bound prime, k | m <= M,
    |f(p)^m - z| < eta and p^{ium} in the arc of half-length delta about 1."""
    if min(delta, eta) <= 0 or k < 1 or M < 1:
        raise InvalidArgument("delta, eta, k and M must be positive")
    z = z if isinstance(z, Angle) else Angle.parse(z)
    zc = circle_value(z)
    ms = np.arange(k, M + 1, k, dtype=np.int64)
    if ms.size == 0:
        return None
    for p in primes_up_to(prime_bound):
        if p <= N:
            continue
        a = f.prime_angle(p)
        if a.is_rational:
            v = a.value
            ang = (ms * v.numerator % v.denominator) / v.denominator
        else:
            ang = np.mod(ms * float(a), 1.0)
        chord = np.abs(np.exp(TAU * 1j * ang) - zc)
        ph = np.mod(ms * (u * math.log(p) / TAU), 1.0)
        arc = np.minimum(ph, 1.0 - ph)
        hit = np.nonzero((chord < eta) & (arc <= delta))[0]
        if hit.size:
            i = int(hit[0])
            return PPowerResult(p, int(ms[i]), float(chord[i]), float(arc[i]), eta, delta, k)
    return None


# ---------------------------------------------------------------------------
# presets

PRESETS = {
    "counterexample-i": {"kind": "counterexample_i", "order_k": 2, "order_l": 2, "t": 1.0},
    "counterexample-ii": {"kind": "counterexample_ii", "p": 3, "alpha": SQRT2_M1, "beta": SQRT3_M1},
    "ratratio-rational": {"kind": "ratratio", "k": 2, "l": 3, "r1": 1, "s1": 2, "t_prime": 5.0, "irrational": False},
    "ratratio-irrational": {"kind": "ratratio", "k": 2, "l": 3, "r1": 1, "s1": 2, "t_prime": 5.0, "irrational": True},
    "random-phase": {"kind": "random_phase", "seed": 20240101},
}


@dataclass
class Preset:
    name: str
    config: dict
    f: MultFnSpec
    g: MultFnSpec
    powers: tuple = (1, 1)
    family: RatioFamily = None


def build_preset(name: str) -> Preset:
    if name not in PRESETS:
        raise InvalidArgument(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    cfg = dict(PRESETS[name])
    kind = cfg["kind"]
    if kind == "counterexample_i":
        f, g = counterexample_i(cfg["order_k"], cfg["order_l"], cfg["t"])
        return Preset(name, cfg, f, g)
    if kind == "counterexample_ii":
        f, g = counterexample_ii(cfg["p"], cfg["alpha"], cfg["beta"])
        return Preset(name, cfg, f, g)
    if kind == "ratratio":
        fam = ratratio_family(cfg["k"], cfg["l"], cfg["r1"], cfg["s1"], cfg["t_prime"], cfg["irrational"])
        return Preset(name, cfg, fam.f, fam.g, fam.exponents, fam)
    f, g = random_phase_pair(cfg["seed"])
    return Preset(name, cfg, f, g)
