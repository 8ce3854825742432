"""
Sieved counts and level sets over n with P^-(n(Bn+1)) > N.

Everything here is driven by one candidate generator, :func:`sieved_candidates`,
which walks [1, x] in fixed-size blocks (so reductions are deterministic) and
keeps the n with no prime factor <= N in either n or Bn+1, in a prescribed
class mod q.  Level sets then filter candidates by exact rational equality of
the pseudocharacter values, plus optional Archimedean arc conditions.
"""

from dataclasses import dataclass
from fractions import Fraction
import csv
import io
import math

import numpy as np

from .arith import SpfTable, is_squarefree, prime_divisors, prime_pi, primes_up_to, radical
from .errors import InvalidArgument, ReachError
from .multfunc import Constant, Dirichlet, MultFnSpec, Product, Pseudocharacter, phase_range, phases_at
from .torus import Angle, Arc, TAU, ZERO, archimedean_angles, in_arc_array

BLOCK = 1 << 20
MAX_B = 10**6
MAX_Q = 10**4


@dataclass(frozen=True)
class SieveParams:
    N: int
    B: int = 1
    q: int = 1
    a: int = 0

    def __post_init__(self):
        if self.N < 2:
            raise InvalidArgument(f"N must be at least 2, got {self.N}")
        if not 1 <= self.B <= MAX_B:
            raise InvalidArgument(f"B must lie in [1, {MAX_B}], got {self.B}")
        if not 1 <= self.q <= MAX_Q:
            raise InvalidArgument(f"q must lie in [1, {MAX_Q}], got {self.q}")
        object.__setattr__(self, "a", self.a % self.q)

    @property
    def admissible(self) -> bool:
        """gcd(a(Ba+1), q) = 1, the coprimality the main-term formula assumes."""
        return math.gcd(self.a * (self.B * self.a + 1), self.q) == 1


def _check_x(params: SieveParams, x: int, table: SpfTable):
    if x < 1:
        raise InvalidArgument(f"x must be positive, got {x}")
    if x > table.limit:
        raise ReachError(f"x={x} exceeds the sieve limit {table.limit}", "x")
    if params.B * x + 1 > table.reach:
        raise ReachError(f"B*x+1={params.B * x + 1} is beyond the factorization reach {table.reach}", "x")


def _blocks(x: int):
    lo = 1
    while lo <= x:
        hi = min(lo + BLOCK, x + 1)
        yield lo, hi
        lo = hi


def _sieve_mask(params: SieveParams, n: np.ndarray, table: SpfTable) -> np.ndarray:
    spf = table.spf[n]
    ok = (n == 1) | (spf > params.N)
    if params.q > 1:
        ok &= n % params.q == params.a
    m = params.B * n[ok] + 1
    keep = np.ones(m.shape, dtype=bool)
    for p in primes_up_to(params.N):
        keep &= m % p != 0
    idx = np.nonzero(ok)[0]
    ok[idx[~keep]] = False
    return ok


def sieved_candidates(params: SieveParams, x: int, table: SpfTable) -> np.ndarray:
    """All n <= x with P^-(n(Bn+1)) > N and n = a (mod q), ascending."""
    _check_x(params, x, table)
    parts = []
    for lo, hi in _blocks(x):
        n = np.arange(lo, hi, dtype=np.int64)
        parts.append(n[_sieve_mask(params, n, table)])
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def phi_count(params: SieveParams, x: int, table: SpfTable) -> int:
    return int(sieved_candidates(params, x, table).size)


def phi_curve(params: SieveParams, x: int, table: SpfTable) -> np.ndarray:
    """Cumulative counts: entry y is phi_count(params, y) for y in [0, x]."""
    hits = np.zeros(x + 1, dtype=np.int64)
    hits[sieved_candidates(params, x, table)] = 1
    return np.cumsum(hits)


def delta_density(params: SieveParams) -> Fraction:
    """(1/q) prod_{p | B/(B,q)} (1 - 1/p) prod_{3 <= p <= N, p not | q} (1 - 2/p)."""
    out = Fraction(1, params.q)
    for p in prime_divisors(params.B // math.gcd(params.B, params.q)):
        out *= Fraction(p - 1, p)
    for p in primes_up_to(params.N):
        if p >= 3 and params.q % p:
            out *= Fraction(p - 2, p)
    return out


def triv_residual(params: SieveParams, x: int, table: SpfTable) -> float:
    """(phi_count - delta * x) / 4^{pi(N)}."""
    count = phi_count(params, x, table)
    main = delta_density(params) * x
    return float((count - main) / 4 ** prime_pi(table, params.N))


def log_mass(ns: np.ndarray, x: int) -> float:
    """(1/log x) sum 1/n, compensated."""
    if x < 2:
        raise InvalidArgument("log normalisation needs x >= 2")
    return math.fsum((1.0 / np.asarray(ns, dtype=np.float64)).tolist()) / math.log(x)


def sieved_logmass(params: SieveParams, x: int, table: SpfTable) -> float:
    return log_mass(sieved_candidates(params, x, table), x)


# ---------------------------------------------------------------------------
# level sets

@dataclass(frozen=True)
class LevelSetQuery:
    params: SieveParams
    h1: MultFnSpec
    h2: MultFnSpec
    alpha: Angle = ZERO
    beta: Angle = ZERO
    arc_I: tuple = None     # (Arc, u): require n^{iu} in I
    arc_J: tuple = None     # (Arc, v): require n^{iv} in J

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not isinstance(v, Angle):
                object.__setattr__(self, name, Angle.parse(v))
        for name, h in (("h1", self.h1), ("h2", self.h2)):
            if not h.is_rational_valued:
                raise InvalidArgument(f"{name} is not rational-valued; level-set equality is undecidable")
        for name in ("alpha", "beta"):
            if not getattr(self, name).is_rational:
                raise InvalidArgument(f"{name} must be a rational angle")


def levelset_members(query: LevelSetQuery, x: int, table: SpfTable) -> np.ndarray:
    """Members n <= x of the (arc-decorated) level set, ascending."""
    p = query.params
    ns = sieved_candidates(p, x, table)
    if ns.size == 0:
        return ns
    keep = phases_at(query.h1, ns, table).equals(query.alpha)
    ns = ns[keep]
    if ns.size:
        keep = phases_at(query.h2, p.B * ns + 1, table).equals(query.beta)
        ns = ns[keep]
    for dec in (query.arc_I, query.arc_J):
        if dec is not None and ns.size:
            arc, u = dec
            ns = ns[in_arc_array(archimedean_angles(ns, u), arc)]
    return ns


def levelset_logmass(query: LevelSetQuery, x: int, table: SpfTable) -> float:
    return log_mass(levelset_members(query, x, table), x)


def twisted_levelset_sum(query: LevelSetQuery, u: float, x: int, table: SpfTable) -> complex:
    """sum over members n <= x of n^{-1-iu}."""
    ns = levelset_members(query, x, table).astype(np.float64)
    if ns.size == 0:
        return 0j
    if u == 0:
        return complex(math.fsum((1.0 / ns).tolist()), 0.0)
    ph = -u * np.log(ns)
    re = math.fsum((np.cos(ph) / ns).tolist())
    im = math.fsum((np.sin(ph) / ns).tolist())
    return complex(re, im)


def spec_order(h: MultFnSpec) -> int:
    """Common denominator of all values of a rational-valued spec."""
    if not h.is_rational_valued:
        raise InvalidArgument("order is only defined for rational-valued specs")
    den = h.base.denominators
    for a in h.exceptions.values():
        den = math.lcm(den, a.denominator)
    return den


def spec_modulus(h: MultFnSpec) -> int:
    """Modulus of the character underlying h (1 for constant rules)."""
    rule = h.base
    if isinstance(rule, (Dirichlet, Pseudocharacter)):
        return rule.chi.modulus
    if isinstance(rule, Product):
        return math.lcm(1, *(spec_modulus(MultFnSpec(base=r)) for r, _ in rule.factors))
    return 1


def ones_statistic(query: LevelSetQuery, x: int, table: SpfTable) -> float:
    """levelset_logmass / (|I| (Phi/x) / order(h1) order(h2)).

    The lower bound for decorated level sets says this stays bounded below.
    """
    width = query.arc_I[0].length if query.arc_I else 1.0
    phi = phi_count(query.params, x, table)
    denom = width * (phi / x) / (spec_order(query.h1) * spec_order(query.h2))
    if denom == 0:
        raise InvalidArgument("no sieved integers below x")
    return levelset_logmass(query, x, table) / denom


# ---------------------------------------------------------------------------
# congruence-restricted log densities

@dataclass(frozen=True)
class ExtConfig:
    M: int
    M1: int           # M'
    M2: int           # M''
    N: int
    q1: int
    q2: int


def check_ext_hypotheses(M: int, M1: int, M2: int, h1: MultFnSpec, h2: MultFnSpec, N: int = None) -> ExtConfig:
    """Validate the hypothesis list eagerly, naming the first failed clause."""
    if min(M, M1, M2) < 1:
        raise InvalidArgument("M, M', M'' must be positive")
    q1, q2 = spec_modulus(h1), spec_modulus(h2)
    base = 2 * q1 * q2
    if M % base:
        raise InvalidArgument(f"2*q1*q2 = {base} must divide M = {M}")
    if M2 % 2 == 0:
        raise InvalidArgument(f"M'' = {M2} must be odd")
    m, m1, m2 = radical(M // base), radical(M1), radical(M2)
    if math.gcd(m1, base) != 1:
        raise InvalidArgument(f"rad(M') = {m1} must be coprime to 2*q1*q2 = {base}")
    if math.gcd(m, m1) != 1 or math.gcd(m, m2) != 1 or math.gcd(m1, m2) != 1:
        raise InvalidArgument(f"rad(M/2q1q2) = {m}, rad(M') = {m1}, rad(M'') = {m2} must be pairwise coprime")
    prod = m * m1 * m2
    if N is None:
        N = max(prime_divisors(prod), default=2)
    primorial = math.prod(primes_up_to(N))
    if prod != primorial or not is_squarefree(prod):
        raise InvalidArgument(f"rad(M/2q1q2) * rad(M') * rad(M'') = {prod} must equal the primorial of N = {N} ({primorial})")
    if N <= base:
        raise InvalidArgument(f"N = {N} must exceed 2*q1*q2 = {base}")
    return ExtConfig(M, M1, M2, N, q1, q2)


def ext_members(M: int, M1: int, M2: int, h1: MultFnSpec, h2: MultFnSpec, x: int, table: SpfTable, N: int = None) -> np.ndarray:
    check_ext_hypotheses(M, M1, M2, h1, h2, N)
    if x > table.limit:
        raise ReachError(f"x={x} exceeds the sieve limit {table.limit}", "x")
    c = (-pow(M, -1, M1)) % M1 if M1 > 1 else 0
    ns = np.arange(M, x + 1, M, dtype=np.int64)
    if M1 > 1:
        ns = ns[ns % M1 == c]
    for p in prime_divisors(M2):
        ns = ns[(ns % p != 0) & ((ns + 1) % p != 0)]
    if ns.size:
        ns = ns[phases_at(h1, ns, table).equals(ZERO)]
    if ns.size:
        ns = ns[phases_at(h2, ns + 1, table).equals(ZERO)]
    return ns


def ext_congruence_logmass(M: int, M1: int, M2: int, h1: MultFnSpec, h2: MultFnSpec, x: int, table: SpfTable, N: int = None) -> float:
    """(1/log x) sum of 1/n over n <= x with M | n, n = -M^{-1} (mod M'),
    (n(n+1), M'') = 1, h1(n) = 1 and h2(n+1) = 1."""
    return log_mass(ext_members(M, M1, M2, h1, h2, x, table, N), x)


def _m2_factor(M2):
    out = Fraction(1)
    for p in prime_divisors(M2):
        out *= Fraction(p - 2, p)
    return out


def ext_stated_limit(M: int, M1: int, M2: int, h1: MultFnSpec, h2: MultFnSpec) -> Fraction:
    """1 / (M phi(M') klrs) prod_{p | M''} (1 - 2/p), with klrs = order(h1) order(h2)."""
    from .arith import euler_phi
    return Fraction(1, M * euler_phi(M1) * spec_order(h1) * spec_order(h2)) * _m2_factor(M2)


def ext_exact_density(M: int, M1: int, M2: int) -> Fraction:
    """Log density for trivial h1, h2, by counting residues mod M M' rad(M'')."""
    return Fraction(1, M * M1) * _m2_factor(M2)


# ---------------------------------------------------------------------------
# export

def curve_csv(rows, header=("x", "value")) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, (int, str)) else format(float(v), ".17g") for v in row])
    return buf.getvalue()
