"""
Dirichlet characters for small moduli, by brute-force enumeration.

(Z/q)^* is split by CRT into prime-power parts; each part gets explicit cyclic
generators (a primitive root for odd p, {-1, 5} for 2^e with e >= 3) and its
discrete logs are tabulated by walking the powers.  A character is an exponent
vector on those generators.  Values are stored as numerators over the
character's exact order, with -1 marking residues not coprime to q.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
import math

import numpy as np

from .arith import prime_divisors
from .errors import InvalidArgument
from .torus import Angle

MAX_MODULUS = 10**4


@dataclass(frozen=True)
class _Component:
    p: int
    e: int
    orders: tuple      # orders of the cyclic generators of (Z/p^e)^*
    logs: np.ndarray   # shape (len(orders), p^e); -1 off the unit group

    @property
    def pe(self):
        return self.p**self.e


def _multiplicative_order(g, m):
    k, x = 1, g % m
    while x != 1:
        x = x * g % m
        k += 1
    return k


def _component(p: int, e: int) -> _Component:
    pe = p**e
    if p == 2 and e == 1:
        return _Component(2, 1, (), np.zeros((0, 2), dtype=np.int64))
    if p == 2 and e >= 3:
        o2 = 2 ** (e - 2)
        logs = np.full((2, pe), -1, dtype=np.int64)
        x = 1
        for j in range(o2):
            logs[0, x], logs[1, x] = 0, j
            logs[0, pe - x], logs[1, pe - x] = 1, j
            x = x * 5 % pe
        return _Component(2, e, (2, o2), logs)
    phi = pe - pe // p
    g = next(g for g in range(2, pe) if math.gcd(g, p) == 1 and _multiplicative_order(g, pe) == phi)
    logs = np.full((1, pe), -1, dtype=np.int64)
    x = 1
    for j in range(phi):
        logs[0, x] = j
        x = x * g % pe
    return _Component(p, e, (phi,), logs)


@dataclass(frozen=True, eq=False)
class _Group:
    q: int
    components: tuple
    orders: tuple          # all generator orders, concatenated
    exponent: int          # lcm of orders
    logs: np.ndarray       # (n_gens, q) global discrete logs, -1 off the unit group

    @classmethod
    def build(cls, q):
        comps = []
        n = q
        for p in prime_divisors(q):
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            comps.append(_component(p, e))
        orders = tuple(o for c in comps for o in c.orders)
        residues = np.arange(q)
        rows = []
        unit = np.gcd(residues, q) == 1
        for c in comps:
            for row in c.logs:
                r = row[residues % c.pe].copy()
                r[~unit] = -1
                rows.append(r)
        logs = np.array(rows, dtype=np.int64).reshape(len(rows), q)
        exponent = math.lcm(*orders) if orders else 1
        return cls(q, tuple(comps), orders, exponent, logs)


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    modulus: int
    exponents: tuple
    index: int
    _group: _Group = field(repr=False)

    @cached_property
    def _raw(self):
        """Numerators over the group exponent L, -1 off the unit group."""
        g = self._group
        q = self.modulus
        if not g.orders:
            out = np.zeros(q, dtype=np.int64)
        else:
            out = np.zeros(q, dtype=np.int64)
            for c, o, row in zip(self.exponents, g.orders, g.logs):
                out += c * (g.exponent // o) * row
            out %= g.exponent
        out[np.gcd(np.arange(q), q) != 1] = -1
        return out

    @cached_property
    def order(self) -> int:
        g = self._group
        steps = [c * (g.exponent // o) for c, o in zip(self.exponents, g.orders)]
        return g.exponent // math.gcd(g.exponent, *steps)

    @cached_property
    def numerators(self) -> np.ndarray:
        """Values as numerators over ``order``; -1 where gcd(a, q) > 1."""
        raw = self._raw
        scale = self._group.exponent // self.order
        out = np.where(raw >= 0, raw // scale, -1)
        out.setflags(write=False)
        return out

    @property
    def values(self) -> list:
        """Angle at each residue, or None where the character vanishes."""
        return [None if v < 0 else Angle(Fraction(int(v), self.order)) for v in self.numerators]

    def value(self, a: int):
        v = int(self.numerators[a % self.modulus])
        return None if v < 0 else Angle(Fraction(v, self.order))

    @property
    def is_principal(self) -> bool:
        return self.order == 1

    @cached_property
    def conductor(self) -> int:
        # local conductor of each prime-power component
        out = 1
        pos = 0
        for comp in self._group.components:
            ng = len(comp.orders)
            exps = self.exponents[pos : pos + ng]
            pos += ng
            if not any(exps):
                continue
            pe = comp.pe
            local = np.zeros(pe, dtype=np.int64)
            L = math.lcm(*comp.orders)
            for c, o, row in zip(exps, comp.orders, comp.logs):
                local += c * (L // o) * row
            local %= L
            units = np.nonzero(comp.logs[0] >= 0)[0]
            f = comp.e
            for f_try in range(0, comp.e):
                m = comp.p**f_try
                sel = units[units % m == 1 % m]
                if np.all(local[sel] == 0):
                    f = f_try
                    break
            out *= comp.p**f
        return out

    @property
    def primitive(self) -> bool:
        return self.conductor == self.modulus

    def __repr__(self):
        return f"DirichletCharacter(q={self.modulus}, index={self.index}, order={self.order})"


@lru_cache(maxsize=64)
def character_table(q: int) -> tuple:
    """All phi(q) characters mod q; index 0 is the principal character."""
    q = int(q)
    if q < 1 or q > MAX_MODULUS:
        raise InvalidArgument(f"modulus must lie in [1, {MAX_MODULUS}], got {q}")
    group = _Group.build(q)
    ranges = [range(o) for o in group.orders]
    return tuple(
        DirichletCharacter(q, tuple(exps), i, group)
        for i, exps in enumerate(product(*ranges))
    )


def character_of_order(q: int, order: int, skip: int = 0) -> DirichletCharacter:
    """The ``skip``-th character mod q of exact order ``order`` (by table index)."""
    hits = [c for c in character_table(q) if c.order == order]
    if len(hits) <= skip:
        raise InvalidArgument(f"no character of order {order} mod {q}")
    return hits[skip]


def find_character(order: int, avoid=()) -> DirichletCharacter:
    """A primitive character of exact order ``order`` with the smallest
    admissible prime modulus not in ``avoid``."""
    if order == 1:
        return character_table(1)[0]
    q = order + 1
    while True:
        if q not in avoid and (q - 1) % order == 0 and all(q % d for d in range(2, math.isqrt(q) + 1)):
            return character_of_order(q, order)
        q += 1
