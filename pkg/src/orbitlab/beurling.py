"""
Trigonometric majorants of the sawtooth and of interval indicators.

Vaaler's polynomial approximates psi(t) = {t} - 1/2 by

    V_K(t) = -(1/pi) sum_{n=1}^{K} J(n/(K+1)) sin(2 pi n t) / n,
    J(u)   = pi u (1 - u) cot(pi u) + u,

with |V_K - psi| <= F_{K+1} / (2(K+1)), F the Fejer kernel.  So
B_K = V_K + F_{K+1} / (2(K+1)) majorizes psi, -B_K(-t) minorizes it, and
the mean of B_K is 1/(2(K+1)).  Interval bounds follow from
1_[a,b](t) = (b - a) + psi(t - b) + psi(a - t) away from the endpoints.
"""

from dataclasses import dataclass
import csv
import io
import math

import numpy as np

from .errors import InvalidArgument
from .torus import TAU


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """sum_{|m| <= K} c_m e(m t); ``coeffs[m + K]`` holds c_m."""

    K: int
    coeffs: np.ndarray
    degenerate: bool = False    # minorant with non-positive mean

    def coefficient(self, m: int) -> complex:
        if abs(m) > self.K:
            return 0j
        return complex(self.coeffs[m + self.K])

    @property
    def mean(self) -> float:
        return self.coeffs[self.K].real

    def evaluate_complex(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        m = np.arange(-self.K, self.K + 1)
        return np.exp(TAU * 1j * np.outer(t, m)) @ self.coeffs

    def __call__(self, t):
        out = self.evaluate_complex(t).real
        return out if np.ndim(t) else float(out[0])

    def __add__(self, other):
        K = max(self.K, other.K)
        c = np.zeros(2 * K + 1, dtype=complex)
        c[K - self.K : K + self.K + 1] += self.coeffs
        c[K - other.K : K + other.K + 1] += other.coeffs
        return TrigPolynomial(K, c)

    def is_hermitian(self, tol=1e-15) -> bool:
        return bool(np.allclose(self.coeffs, np.conj(self.coeffs[::-1]), atol=tol, rtol=0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "re", "im"])
        for m in range(-self.K, self.K + 1):
            c = self.coeffs[m + self.K]
            w.writerow([m, format(c.real, ".17g"), format(c.imag, ".17g")])
        return buf.getvalue()


def _J(u):
    return math.pi * u * (1 - u) / math.tan(math.pi * u) + u


def beurling_polynomial(K: int) -> TrigPolynomial:
    """B_K with B_K >= psi and -B_K(-t) <= psi."""
    if K < 1:
        raise InvalidArgument(f"K must be at least 1, got {K}")
    c = np.zeros(2 * K + 1, dtype=complex)
    h = 1.0 / (2 * (K + 1))
    c[K] = h
    for n in range(1, K + 1):
        fej = (1 - n / (K + 1)) * h
        v = _J(n / (K + 1)) / (TAU * n)     # sin term -> +- i v
        c[K + n] = fej + 1j * v
        c[K - n] = fej - 1j * v
    return TrigPolynomial(K, c)


def _check_interval(a, b):
    if not (0 <= a < b < 1):
        raise InvalidArgument(f"need 0 <= a < b < 1, got [{a}, {b}]")


def interval_majorant(K: int, a: float, b: float) -> TrigPolynomial:
    """|I| + B_K(t - b) + B_K(a - t) >= 1_[a,b](t)."""
    _check_interval(a, b)
    bk = beurling_polynomial(K).coeffs
    m = np.arange(-K, K + 1)
    c = bk * np.exp(-TAU * 1j * m * b) + bk[::-1] * np.exp(-TAU * 1j * m * a)
    c[K] += b - a
    return TrigPolynomial(K, c)


def interval_minorant(K: int, a: float, b: float) -> TrigPolynomial:
    """|I| - B_K(b - t) - B_K(t - a) <= 1_[a,b](t).

    Flagged ``degenerate`` when the mean (b - a) - 1/(K+1) is not positive.
    """
    _check_interval(a, b)
    bk = beurling_polynomial(K).coeffs
    m = np.arange(-K, K + 1)
    c = -bk[::-1] * np.exp(-TAU * 1j * m * b) - bk * np.exp(-TAU * 1j * m * a)
    c[K] += b - a
    return TrigPolynomial(K, c, degenerate=(b - a) - 1 / (K + 1) <= 0)


def sawtooth(t):
    t = np.asarray(t, dtype=np.float64)
    return t - np.floor(t) - 0.5


def offset_grid(n: int) -> np.ndarray:
    """n points (j + 1/2)/n, avoiding the jumps at 0."""
    return (np.arange(n) + 0.5) / n
