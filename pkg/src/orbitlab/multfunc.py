"""
Completely multiplicative functions N -> T, stored additively as angles.

A :class:`MultFnSpec` is a finite table of prime exceptions layered over a
base rule, times an Archimedean twist n^{it}.  Everything downstream works
with angles: f(n) = e(eval(fn, n)).

Evaluation comes in three flavours:

* :func:`eval` -- one integer, exact (``Fraction``) wherever possible;
* :func:`phase_range` -- every n in [0, x], by the recurrence
  v(n) = v(n / spf(n)) + v(spf(n)) over doubling blocks;
* :func:`phases_at` -- an arbitrary integer array, by peeling smallest
  prime factors (values beyond the sieve fall back to trial division).

The two array paths return a :class:`PhaseArray`: integer numerators over a
common denominator (the exact rational part) plus an optional float part.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import json
import math
from typing import Mapping

import numpy as np

from .arith import SpfTable, factorize, primes_up_to, spf_many
from .characters import DirichletCharacter, character_table
from .errors import InvalidArgument, ReachError
from .torus import TAU, Angle, ZERO, archimedean_angle, archimedean_angles

# past this the integer path could overflow int64 while accumulating
_MAX_EXACT_DEN = 2**40


# ---------------------------------------------------------------------------
# prime-value vectors

@dataclass
class _PrimeVals:
    num: np.ndarray     # int64 numerators over den
    den: int
    real: np.ndarray    # float64 or None

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros(n, dtype=np.int64), 1, None)

    def rescale(self, den):
        if den == self.den:
            return self.num
        return self.num * (den // self.den)

    def add(self, other, mult=1):
        den = math.lcm(self.den, other.den)
        if den > _MAX_EXACT_DEN:
            return self.as_real().add(other.as_real(), mult)
        num = (self.rescale(den) + mult * other.rescale(den)) % den
        real = self.real
        if other.real is not None:
            r = mult * other.real
            real = r if real is None else real + r
        return _PrimeVals(num, den, real)

    def as_real(self):
        r = self.num / self.den
        if self.real is not None:
            r = r + self.real
        return _PrimeVals(np.zeros(len(self.num), dtype=np.int64), 1, r)


# ---------------------------------------------------------------------------
# base rules

class BaseRule:
    """Assigns an angle to every prime."""

    rational = True

    def prime_value(self, p: int) -> Angle:
        raise NotImplementedError

    def prime_values(self, ps: np.ndarray) -> _PrimeVals:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @property
    def denominators(self) -> int:
        """Common denominator of all rational values."""
        return 1


@dataclass(frozen=True)
class Constant(BaseRule):
    angle: Angle = ZERO

    def __post_init__(self):
        if not isinstance(self.angle, Angle):
            object.__setattr__(self, "angle", Angle(self.angle))

    @property
    def rational(self):
        return self.angle.is_rational

    @property
    def denominators(self):
        return self.angle.denominator or 1

    def prime_value(self, p):
        return self.angle

    def prime_values(self, ps):
        n = len(ps)
        if self.angle.is_rational:
            v = self.angle.value
            return _PrimeVals(np.full(n, v.numerator, dtype=np.int64), v.denominator, None)
        return _PrimeVals(np.zeros(n, dtype=np.int64), 1, np.full(n, float(self.angle)))

    def to_json(self):
        return {"rule": "constant", "angle": self.angle.to_json()}


@dataclass(frozen=True)
class Dirichlet(BaseRule):
    """The extension chi~ : chi(p) off the modulus, 1 at primes dividing it."""

    chi: DirichletCharacter

    @property
    def denominators(self):
        return self.chi.order

    def prime_value(self, p):
        if self.chi.modulus % p == 0:
            return ZERO
        return self.chi.value(p)

    def prime_values(self, ps):
        num = self.chi.numerators[ps % self.chi.modulus]
        return _PrimeVals(np.where(num < 0, 0, num), self.chi.order, None)

    def to_json(self):
        return {"rule": "dirichlet", "modulus": self.chi.modulus, "index": self.chi.index}


@dataclass(frozen=True)
class Pseudocharacter(BaseRule):
    """h with h(p)^k = chi~(p), on the principal branch: h(p) = {chi(p)} / k."""

    chi: DirichletCharacter
    k: int = 1
    root_choice: str = "principal"

    def __post_init__(self):
        if self.k < 1:
            raise InvalidArgument(f"k must be at least 1, got {self.k}")

    @property
    def denominators(self):
        return self.chi.order * self.k

    @property
    def order(self) -> int:
        """Exact order of h (the least m with m h(p) = 0 at every prime)."""
        return self.chi.order * self.k if self.chi.order > 1 or self.k > 1 else 1

    def prime_value(self, p):
        if self.chi.modulus % p == 0:
            return ZERO
        return Angle(Fraction(int(self.chi.numerators[p % self.chi.modulus]), self.chi.order * self.k))

    def prime_values(self, ps):
        num = self.chi.numerators[ps % self.chi.modulus]
        return _PrimeVals(np.where(num < 0, 0, num), self.chi.order * self.k, None)

    def to_json(self):
        return {"rule": "pseudocharacter", "modulus": self.chi.modulus, "index": self.chi.index, "k": self.k}


_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)


def _splitmix(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = x + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class RandomPhase(BaseRule):
    """Seeded pseudo-random prime angles.

    Each prime's angle is a counter-based hash of (seed, p), so values do not
    depend on evaluation order or range.  With ``order`` set the angle is
    rounded down to a multiple of 1/order (order=2 gives random +-1 values).
    """

    seed: int
    order: int = None

    @property
    def rational(self):
        return self.order is not None

    @property
    def denominators(self):
        return self.order or 1

    def _uniform(self, ps):
        ps = np.asarray(ps, dtype=np.uint64)
        with np.errstate(over="ignore"):
            key = _splitmix(np.uint64(self.seed & 0xFFFFFFFFFFFFFFFF) ^ (ps * np.uint64(0xD1B54A32D192ED03)))
        return (key >> np.uint64(11)).astype(np.float64) / float(2**53)

    def prime_value(self, p):
        u = float(self._uniform(np.array([p]))[0])
        if self.order:
            return Angle(Fraction(int(u * self.order), self.order))
        return Angle(u)

    def prime_values(self, ps):
        u = self._uniform(ps)
        if self.order:
            return _PrimeVals((u * self.order).astype(np.int64), self.order, None)
        return _PrimeVals(np.zeros(len(u), dtype=np.int64), 1, u)

    def to_json(self):
        return {"rule": "random", "seed": self.seed, "order": self.order}


@dataclass(frozen=True)
class Product(BaseRule):
    """Pointwise product of rules with integer multiplicities (negative = conjugate)."""

    factors: tuple = ()

    @property
    def rational(self):
        return all(r.rational for r, _ in self.factors)

    @property
    def denominators(self):
        return math.lcm(1, *(r.denominators for r, _ in self.factors))

    def prime_value(self, p):
        out = ZERO
        for rule, mult in self.factors:
            out = out + mult * rule.prime_value(p)
        return out

    def prime_values(self, ps):
        out = _PrimeVals.zeros(len(ps))
        for rule, mult in self.factors:
            out = out.add(rule.prime_values(ps), mult)
        return out

    def to_json(self):
        return {"rule": "product", "factors": [[r.to_json(), m] for r, m in self.factors]}


def rule_from_json(obj: dict) -> BaseRule:
    kind = obj.get("rule")
    if kind == "constant":
        return Constant(Angle.parse(obj.get("angle", "0")))
    if kind == "dirichlet":
        return Dirichlet(character_table(int(obj["modulus"]))[int(obj["index"])])
    if kind == "pseudocharacter":
        chi = character_table(int(obj["modulus"]))[int(obj["index"])]
        return Pseudocharacter(chi, int(obj.get("k", 1)))
    if kind == "random":
        order = obj.get("order")
        return RandomPhase(int(obj["seed"]), None if order is None else int(order))
    if kind == "product":
        return Product(tuple((rule_from_json(r), int(m)) for r, m in obj["factors"]))
    raise InvalidArgument(f"unknown base rule {kind!r}")


# ---------------------------------------------------------------------------
# the function spec

@dataclass(frozen=True)
class MultFnSpec:
    exceptions: Mapping = field(default_factory=dict)
    base: BaseRule = Constant()
    twist: float = 0.0

    def __post_init__(self):
        exc = {int(p): (a if isinstance(a, Angle) else Angle.parse(a)) for p, a in dict(self.exceptions).items()}
        object.__setattr__(self, "exceptions", exc)
        object.__setattr__(self, "twist", float(self.twist))

    def __hash__(self):
        return hash((tuple(sorted(self.exceptions.items())), self.base, self.twist))

    @property
    def is_rational_valued(self) -> bool:
        """True when every value is an exact root of unity."""
        return self.twist == 0 and self.base.rational and all(a.is_rational for a in self.exceptions.values())

    def prime_angle(self, p: int) -> Angle:
        """Value at a prime, twist included."""
        a = self.exceptions.get(p)
        if a is None:
            a = self.base.prime_value(p)
        return a + archimedean_angle(p, self.twist) if self.twist else a

    def power(self, k: int) -> "MultFnSpec":
        k = int(k)
        return MultFnSpec({p: k * a for p, a in self.exceptions.items()},
                          _power_rule(self.base, k), k * self.twist)

    def conjugate(self) -> "MultFnSpec":
        return self.power(-1)

    def __mul__(self, other: "MultFnSpec") -> "MultFnSpec":
        if not isinstance(other, MultFnSpec):
            return NotImplemented
        primes = set(self.exceptions) | set(other.exceptions)
        exc = {}
        for p in primes:
            a = self.exceptions.get(p, self.base.prime_value(p))
            b = other.exceptions.get(p, other.base.prime_value(p))
            exc[p] = a + b
        return MultFnSpec(exc, Product(((self.base, 1), (other.base, 1))), self.twist + other.twist)

    def to_json(self) -> dict:
        return {
            "exceptions": {str(p): self.exceptions[p].to_json() for p in sorted(self.exceptions)},
            "base": self.base.to_json(),
            "twist": self.twist,
        }

    @classmethod
    def from_json(cls, obj) -> "MultFnSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(
            {int(p): Angle.parse(v) for p, v in obj.get("exceptions", {}).items()},
            rule_from_json(obj.get("base", {"rule": "constant", "angle": "0"})),
            float(obj.get("twist", 0.0)),
        )

    # exception table as vectors, cached per instance
    def _exception_arrays(self):
        cached = self.__dict__.get("_exc_arrays")
        if cached is None:
            ps = np.array(sorted(self.exceptions), dtype=np.int64)
            rat = [self.exceptions[p] for p in ps.tolist()]
            den = math.lcm(1, *(a.denominator for a in rat if a.is_rational))
            if den > _MAX_EXACT_DEN:
                den = None
            cached = (ps, rat, den)
            self.__dict__["_exc_arrays"] = cached
        return cached

    def prime_values(self, ps: np.ndarray) -> _PrimeVals:
        """Prime values (without twist) for an array of primes."""
        ps = np.asarray(ps, dtype=np.int64)
        vals = self.base.prime_values(ps)
        exc_ps, exc_angles, exc_den = self._exception_arrays()
        if exc_ps.size == 0 or ps.size == 0:
            return vals
        pos = np.searchsorted(exc_ps, ps)
        pos_c = np.minimum(pos, exc_ps.size - 1)
        hit = exc_ps[pos_c] == ps
        if not hit.any():
            return vals
        if exc_den is None:
            vals = vals.as_real()
        all_rat = all(a.is_rational for a in exc_angles)
        if exc_den is not None and all_rat and vals.real is None:
            den = math.lcm(vals.den, exc_den)
            if den <= _MAX_EXACT_DEN:
                num = vals.rescale(den).copy()
                exc_num = np.array([int(a.value * den) for a in exc_angles], dtype=np.int64)
                num[hit] = exc_num[pos_c[hit]]
                return _PrimeVals(num, den, None)
        # mixed: move the hit positions fully into the real part
        real = np.zeros(len(ps)) if vals.real is None else vals.real.copy()
        num = vals.num.copy()
        exc_real = np.array([float(a) for a in exc_angles])
        num[hit] = 0
        real[hit] = exc_real[pos_c[hit]]
        return _PrimeVals(num, vals.den, real)


def _power_rule(rule: BaseRule, k: int) -> BaseRule:
    if k == 1:
        return rule
    if isinstance(rule, Constant):
        return Constant(k * rule.angle)
    if isinstance(rule, Product):
        return Product(tuple((r, m * k) for r, m in rule.factors))
    return Product(((rule, k),))


# ---------------------------------------------------------------------------
# evaluation

def eval(fn: MultFnSpec, table: SpfTable, n: int) -> Angle:  # noqa: A001
    """Angle of fn(n): sum of e * angle(p) over p^e || n, plus the twist."""
    n = int(n)
    if n == 1:
        return ZERO
    out = ZERO
    for p, e in factorize(table, n):
        a = fn.exceptions.get(p)
        out = out + e * (a if a is not None else fn.base.prime_value(p))
    if fn.twist:
        out = out + archimedean_angle(n, fn.twist)
    return out


@dataclass
class PhaseArray:
    """Angles for an array of integers, kept exact where possible.

    ``num`` holds numerators over ``den`` (the rational part); ``real`` is
    the float part, including any Archimedean twist, or None.
    """

    num: np.ndarray
    den: int
    real: np.ndarray = None

    @property
    def is_exact(self) -> bool:
        return self.real is None

    def angles(self) -> np.ndarray:
        out = self.num / self.den
        if self.real is not None:
            out = out + self.real
        out = np.mod(out, 1.0)
        out[out >= 1.0] = 0.0
        return out

    def scaled(self, k: int) -> "PhaseArray":
        real = None if self.real is None else k * self.real
        return PhaseArray((self.num * k) % self.den, self.den, real)

    def equals(self, angle: Angle) -> np.ndarray:
        """Exact elementwise test for ``value == angle`` (rational only)."""
        if not self.is_exact or not angle.is_rational:
            raise InvalidArgument("exact comparison needs rational values on both sides")
        v = angle.value
        if self.den % v.denominator:
            return np.zeros(len(self.num), dtype=bool)
        return self.num == v.numerator * (self.den // v.denominator)

    def __len__(self):
        return len(self.num)

    def __getitem__(self, idx):
        real = None if self.real is None else self.real[idx]
        return PhaseArray(self.num[idx], self.den, real)


def _dense_prime_values(fn: MultFnSpec, primes: np.ndarray, size: int) -> _PrimeVals:
    pv = fn.prime_values(primes)
    num = np.zeros(size, dtype=np.int64)
    num[primes] = pv.num
    real = None
    if pv.real is not None:
        real = np.zeros(size)
        real[primes] = pv.real
    return _PrimeVals(num, pv.den, real)


def phase_range(fn: MultFnSpec, x: int, table: SpfTable) -> PhaseArray:
    """Phases of fn(n) for every n in [0, x] (index 0 is a placeholder)."""
    x = int(x)
    if x > table.limit:
        raise ReachError(f"x={x} exceeds the sieve limit {table.limit}", "x")
    size = x + 1
    primes = table.primes[table.primes <= x]
    pv = _dense_prime_values(fn, primes, size)
    den = pv.den
    num = np.zeros(size, dtype=np.int64)
    real = None if pv.real is None else np.zeros(size)
    spf = table.spf[:size].astype(np.int64)
    lo = 2
    while lo <= x:
        hi = min(2 * lo, size)
        n = np.arange(lo, hi)
        p = spf[lo:hi]
        q = n // p
        num[lo:hi] = (num[q] + pv.num[p]) % den
        if real is not None:
            real[lo:hi] = real[q] + pv.real[p]
        lo = hi
    if fn.twist:
        tw = np.zeros(size)
        tw[1:] = archimedean_angles(np.arange(1, size), fn.twist)
        real = tw if real is None else real + tw
    return PhaseArray(num, den, real)


def phases_at(fn: MultFnSpec, ns, table: SpfTable) -> PhaseArray:
    """Phases of fn at an arbitrary positive integer array."""
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size and ns.min() < 1:
        raise InvalidArgument("arguments must be positive")
    rem = ns.copy()
    num = np.zeros(ns.shape, dtype=np.int64)
    real = None
    den = None
    active = np.nonzero(rem > 1)[0]
    while active.size:
        r = rem[active]
        p = spf_many(table, r)
        vals = fn.prime_values(p)
        if den is None:
            den = vals.den
        elif vals.den != den:
            new = math.lcm(den, vals.den)
            num = num * (new // den)
            den = new
        num[active] = (num[active] + vals.rescale(den) if vals.den != den else num[active] + vals.num) % den
        if vals.real is not None:
            if real is None:
                real = np.zeros(ns.shape)
            real[active] += vals.real
        rem[active] = r // p
        active = active[rem[active] > 1]
    if den is None:
        den = 1
    if fn.twist:
        tw = archimedean_angles(ns, fn.twist)
        real = tw if real is None else real + tw
    return PhaseArray(num, den, real)


def angles_range(fn: MultFnSpec, x: int, table: SpfTable) -> np.ndarray:
    return phase_range(fn, x, table).angles()


def values_range(fn: MultFnSpec, x: int, table: SpfTable) -> np.ndarray:
    """Complex values e(fn(n)) for n in [0, x]."""
    return np.exp(TAU * 1j * angles_range(fn, x, table))


# ---------------------------------------------------------------------------
# classification

def support_set(fn: MultFnSpec, m: int, bound: int, tol: float = 1e-12) -> list:
    """Primes p <= bound with fn(p)^m != 1 (T_{fn^m})."""
    if m < 1:
        raise InvalidArgument(f"m must be at least 1, got {m}")
    out = []
    for p in primes_up_to(bound):
        if not (m * fn.prime_angle(p)).is_zero(tol):
            out.append(p)
    return out


def eventually_rational_test(fn: MultFnSpec, k: int, N0: int, bound: int) -> bool:
    """fn(p)^k == 1 for every prime p in (N0, bound]?

    Only certifies up to ``bound``.
    """
    if k < 1:
        raise InvalidArgument(f"k must be at least 1, got {k}")
    if N0 > bound:
        raise InvalidArgument("N0 must not exceed bound")
    return not any(p > N0 for p in support_set(fn, k, bound))


@dataclass
class EkcReport:
    k: int
    l: int
    bound: int
    power_relation: bool           # k f(p) == l g(p) for all p <= bound
    power_failure: int             # first failing prime, or None
    archimedean_relation: bool     # k f(p) == archimedean angle of p^{i k t}
    archimedean_failure: int
    t_prime: float                 # k * twist of f

    @property
    def passed(self) -> bool:
        return self.power_relation and self.archimedean_relation


def ekc_structural_check(f: MultFnSpec, g: MultFnSpec, k: int, l: int, bound: int, tol: float = 1e-9) -> EkcReport:
    """Check f^k = g^l and f^k = n^{it'} on primes up to ``bound``."""
    if k < 1 or l < 1:
        raise InvalidArgument("k and l must be positive")
    t_prime = k * f.twist
    power_fail = arch_fail = None
    for p in primes_up_to(bound):
        kf = k * f.prime_angle(p)
        if power_fail is None and not _close(kf, l * g.prime_angle(p), tol):
            power_fail = p
        if arch_fail is None and not _close(kf, archimedean_angle(p, t_prime), tol):
            arch_fail = p
        if power_fail and arch_fail:
            break
    return EkcReport(k, l, bound, power_fail is None, power_fail, arch_fail is None, arch_fail, t_prime)


def _close(a: Angle, b: Angle, tol):
    if a.is_rational and b.is_rational:
        return a == b
    return a.distance(b) <= tol


def prime_phases(fn: MultFnSpec, ps) -> PhaseArray:
    """Angles of fn at an array of primes, twist included."""
    ps = np.asarray(ps, dtype=np.int64)
    pv = fn.prime_values(ps)
    real = pv.real
    if fn.twist:
        tw = archimedean_angles(ps, fn.twist)
        real = tw if real is None else real + tw
    return PhaseArray(pv.num, pv.den, real)


def phase_difference(a: PhaseArray, b: PhaseArray) -> np.ndarray:
    """a - b reduced to [0, 1), with the rational parts subtracted exactly."""
    den = math.lcm(a.den, b.den)
    if den <= _MAX_EXACT_DEN:
        num = (a.num * (den // a.den) - b.num * (den // b.den)) % den
        out = num / den
    else:
        out = a.num / a.den - b.num / b.den
    if a.real is not None:
        out = out + a.real
    if b.real is not None:
        out = out - b.real
    out = np.mod(out, 1.0)
    out[out >= 1.0] = 0.0
    return out
