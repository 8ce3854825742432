"""
Exact integer substrate: smallest-prime-factor sieve, factorization, P^-(n),
prime counting and radicals.

The sieve is a flat ``int32`` array, so ``build_spf`` is bounded by
``MAX_SPF_LIMIT`` (about 400 MB of table at the cap).  Integers above the table
but below ``limit**2`` are factored by trial division with the sieved primes.
"""

from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np

from .errors import InvalidArgument, ReachError

MAX_SPF_LIMIT = 10**8

INF = math.inf


@dataclass(frozen=True, eq=False)
class SpfTable:
    limit: int
    spf: np.ndarray = field(repr=False)

    @cached_property
    def primes(self) -> np.ndarray:
        idx = np.arange(self.limit + 1)
        mask = self.spf == idx
        mask[:2] = False
        return np.nonzero(mask)[0].astype(np.int64)

    @property
    def reach(self) -> int:
        """Largest integer factorizable with this table."""
        return self.limit * self.limit

    def __getitem__(self, n):
        return self.spf[n]


@dataclass(frozen=True)
class Factorization:
    pairs: tuple

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __eq__(self, other):
        if isinstance(other, Factorization):
            return self.pairs == other.pairs
        return list(self.pairs) == list(other)

    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out


def build_spf(x_max: int) -> SpfTable:
    """Sieve smallest prime factors for every n in [2, x_max]."""
    x_max = int(x_max)
    if x_max < 2:
        raise InvalidArgument(f"x_max must be at least 2, got {x_max}")
    if x_max > MAX_SPF_LIMIT:
        raise InvalidArgument(f"x_max={x_max} exceeds MAX_SPF_LIMIT={MAX_SPF_LIMIT}")
    spf = np.zeros(x_max + 1, dtype=np.int32)
    spf[2::2] = 2
    for p in range(3, math.isqrt(x_max) + 1, 2):
        if spf[p] == 0:
            block = spf[p * p :: 2 * p]
            block[block == 0] = p
    rest = spf == 0
    rest[:2] = False
    spf[rest] = np.nonzero(rest)[0]
    spf[1] = 1
    spf.setflags(write=False)
    return SpfTable(x_max, spf)


_TABLE_CACHE = {}


def table_for(x_max: int) -> SpfTable:
    """Return a cached table covering at least ``x_max``."""
    x_max = max(int(x_max), 2)
    for lim, table in _TABLE_CACHE.items():
        if lim >= x_max:
            return table
    table = build_spf(x_max)
    # keep only the largest table around
    _TABLE_CACHE.clear()
    _TABLE_CACHE[x_max] = table
    return table


def _check_reach(table: SpfTable, n: int, name="n"):
    if n < 1:
        raise InvalidArgument(f"{name} must be positive, got {n}")
    if n > table.reach:
        raise ReachError(f"{name}={n} is beyond the factorization reach {table.reach}", name)


def factorize(table: SpfTable, n: int) -> Factorization:
    n = int(n)
    _check_reach(table, n)
    pairs = []
    if n > table.limit:
        for p in table.primes:
            p = int(p)
            if p * p > n or n <= table.limit:
                break
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                pairs.append((p, e))
        if n > table.limit:
            # no factor up to sqrt: what remains is prime
            pairs.append((n, 1))
            return Factorization(tuple(pairs))
    spf = table.spf
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if pairs and pairs[-1][0] == p:
            pairs[-1] = (p, pairs[-1][1] + e)
        else:
            pairs.append((p, e))
    return Factorization(tuple(pairs))


def p_minus(table: SpfTable, n: int):
    """Smallest prime factor of n, with P^-(1) = +inf."""
    n = int(n)
    _check_reach(table, n)
    if n == 1:
        return INF
    if n <= table.limit:
        return int(table.spf[n])
    return factorize(table, n).pairs[0][0]


def spf_many(table: SpfTable, values) -> np.ndarray:
    """Vectorised smallest prime factor; 1 maps to 1.

    Values above the table are resolved by trial division with sieved primes.
    """
    values = np.asarray(values, dtype=np.int64)
    if values.size == 0:
        return values.copy()
    if values.min() < 1:
        raise InvalidArgument("values must be positive")
    vmax = int(values.max())
    if vmax > table.reach:
        raise ReachError(f"value {vmax} is beyond the factorization reach {table.reach}", "value")
    out = np.empty_like(values)
    small = values <= table.limit
    out[small] = table.spf[values[small]]
    big_idx = np.nonzero(~small)[0]
    if big_idx.size:
        rem = values[big_idx]
        res = np.zeros_like(rem)
        pending = np.arange(rem.size)
        for p in table.primes:
            if pending.size == 0 or p * p > rem[pending].max():
                break
            hit = rem[pending] % p == 0
            res[pending[hit]] = p
            pending = pending[~hit]
        res[pending] = rem[pending]
        out[big_idx] = res
    return out


def rough_mask(values, N: int, table: SpfTable = None) -> np.ndarray:
    """Boolean mask of P^-(v) > N for an integer array (1 counts as rough)."""
    values = np.asarray(values, dtype=np.int64)
    if table is not None and values.size and values.max() <= table.limit:
        spf = table.spf[values]
        return (values == 1) | (spf > N)
    mask = np.ones(values.shape, dtype=bool)
    for p in primes_up_to(N):
        mask &= values % p != 0
    return mask


def primes_up_to(n: int) -> list:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


def prime_pi(table: SpfTable, N: int) -> int:
    """pi(N) by counting sieved primes."""
    if N > table.limit:
        raise ReachError(f"N={N} exceeds table limit {table.limit}", "N")
    return int(np.searchsorted(table.primes, N, side="right"))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def prime_divisors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def radical(n: int) -> int:
    return math.prod(prime_divisors(n))


def is_squarefree(n: int) -> bool:
    return radical(n) == n


def euler_phi(n: int) -> int:
    out = n
    for p in prime_divisors(n):
        out = out // p * (p - 1)
    return out


def smooth_part(a: int, b: int) -> int:
    """(a, b^inf): the part of a supported on primes dividing b."""
    out = 1
    for p in prime_divisors(b):
        while a % p == 0:
            a //= p
            out *= p
    return out


def strip_smooth_part(a: int, b: int) -> int:
    """a / (a, b^inf)."""
    return a // smooth_part(a, b)
