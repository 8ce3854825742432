"""
Angles on R/Z and points on the 2-torus.

An :class:`Angle` is either an exact reduced fraction in [0, 1) or a float in
[0, 1).  Exactness matters: level-set predicates such as ``h(n) == alpha``
must be decidable without a tolerance, so roots of unity stay rational and
only genuinely irrational quantities (Archimedean twists, Kronecker targets)
are floats.  A rational angle never compares equal to a real one; use
:meth:`Angle.is_close` for tolerance comparisons.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple
import cmath
import math

import numpy as np

from .errors import InvalidArgument

TAU = 2 * math.pi


def _reduce_float(x: float) -> float:
    r = x % 1.0
    # tiny negatives wrap to exactly 1.0 in floating point
    return 0.0 if r >= 1.0 else r


class Angle:
    __slots__ = ("_value",)

    def __init__(self, value=0):
        if isinstance(value, Angle):
            value = value._value
        if isinstance(value, (int, np.integer)):
            value = Fraction(int(value))
        if isinstance(value, Fraction):
            self._value = value - math.floor(value)
        elif isinstance(value, (float, np.floating)):
            if not math.isfinite(value):
                raise InvalidArgument(f"angle must be finite, got {value}")
            self._value = _reduce_float(float(value))
        else:
            raise InvalidArgument(f"cannot build an angle from {value!r}")

    @classmethod
    def rational(cls, a: int, b: int = 1) -> "Angle":
        return cls(Fraction(a, b))

    @classmethod
    def parse(cls, text) -> "Angle":
        """Accept ``"a/b"`` or an integer string (rational) or a float (real)."""
        if isinstance(text, (int, float, Fraction)):
            return cls(text)
        text = str(text).strip()
        try:
            return cls(Fraction(text)) if "." not in text and "e" not in text.lower() else cls(float(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidArgument(f"cannot parse angle {text!r}") from exc

    @property
    def value(self):
        return self._value

    @property
    def is_rational(self) -> bool:
        return isinstance(self._value, Fraction)

    @property
    def denominator(self):
        return self._value.denominator if self.is_rational else None

    def is_zero(self, tol: float = 1e-12) -> bool:
        """Exact for rationals; within ``tol`` of 0 on the circle for reals."""
        if self.is_rational:
            return self._value == 0
        return self.distance(ZERO) <= tol

    def __float__(self):
        return float(self._value)

    def __add__(self, other):
        other = other if isinstance(other, Angle) else Angle(other)
        if self.is_rational and other.is_rational:
            return Angle(self._value + other._value)
        return Angle(float(self._value) + float(other._value))

    __radd__ = __add__

    def __neg__(self):
        return Angle(-self._value)

    def __sub__(self, other):
        other = other if isinstance(other, Angle) else Angle(other)
        return self + (-other)

    def __mul__(self, k):
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        return Angle(self._value * int(k))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Angle):
            return NotImplemented
        if self.is_rational != other.is_rational:
            return False
        return self._value == other._value

    def __hash__(self):
        return hash((self.is_rational, self._value))

    def distance(self, other) -> float:
        """Circular distance in [0, 1/2]."""
        other = other if isinstance(other, Angle) else Angle(other)
        if self.is_rational and other.is_rational:
            d = abs(self._value - other._value)
            return float(min(d, 1 - d))
        d = abs(float(self._value) - float(other._value))
        return min(d, 1.0 - d)

    def is_close(self, other, tol: float = 1e-12) -> bool:
        return self.distance(other) <= tol

    def to_json(self):
        if self.is_rational:
            v = self._value
            return f"{v.numerator}/{v.denominator}"
        return self._value

    def __repr__(self):
        if self.is_rational:
            return f"Angle({self._value.numerator}/{self._value.denominator})"
        return f"Angle({self._value!r})"


ZERO = Angle(0)
HALF = Angle(Fraction(1, 2))


@dataclass(frozen=True)
class Arc:
    center: Angle
    half_length: float

    def __post_init__(self):
        if not (0 < self.half_length <= 0.5):
            raise InvalidArgument(f"half_length must lie in (0, 1/2], got {self.half_length}")
        if not isinstance(self.center, Angle):
            object.__setattr__(self, "center", Angle(self.center))

    @property
    def length(self) -> float:
        return 2 * self.half_length

    @classmethod
    def from_interval(cls, a: float, b: float) -> "Arc":
        return cls(Angle((a + b) / 2), (b - a) / 2)


class TorusPoint2(NamedTuple):
    first: Angle
    second: Angle


def circle_value(angle) -> complex:
    """e(angle) = exp(2 pi i angle)."""
    v = angle.value if isinstance(angle, Angle) else angle
    if isinstance(v, Fraction):
        # exact values at the quarter points
        if v.denominator <= 4 and (4 % v.denominator == 0):
            return (1, 1j, -1, -1j)[int(v * 4) % 4] + 0j
    return cmath.exp(TAU * 1j * float(v))


def ell1_distance(p, q) -> float:
    """|e(p1) - e(q1)| + |e(p2) - e(q2)| between two points of T^2."""
    return abs(circle_value(p[0]) - circle_value(q[0])) + abs(circle_value(p[1]) - circle_value(q[1]))


def in_arc(x, arc: Arc) -> bool:
    """Closed-arc membership by circular distance to the centre."""
    x = x if isinstance(x, Angle) else Angle(x)
    if arc.half_length >= 0.5:
        return True
    return x.distance(arc.center) <= arc.half_length


def archimedean_angle(n: int, t: float) -> Angle:
    """Angle of n^{it}: t log(n) / 2 pi mod 1."""
    if n < 1:
        raise InvalidArgument(f"n must be positive, got {n}")
    if t == 0 or n == 1:
        return ZERO
    return Angle(t * math.log(n) / TAU)


# vectorised helpers used by the scan/sieve engines

def circular_distance(a, b):
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) % 1.0
    return np.minimum(d, 1.0 - d)


def in_arc_array(x, arc: Arc) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if arc.half_length >= 0.5:
        return np.ones(x.shape, dtype=bool)
    return circular_distance(x, float(arc.center)) <= arc.half_length


def archimedean_angles(ns, t: float) -> np.ndarray:
    ns = np.asarray(ns, dtype=float)
    if t == 0:
        return np.zeros(ns.shape)
    return np.mod(t * np.log(ns) / TAU, 1.0)
