import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from orbitlab.errors import InvalidArgument
from orbitlab.torus import (Angle, Arc, archimedean_angle, archimedean_angles, circle_value,
                            circular_distance, ell1_distance, in_arc, in_arc_array)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=1000)


def test_circle_value_examples():
    assert circle_value(Angle(0)) == 1
    assert circle_value(Angle(Fraction(1, 2))) == -1
    z = circle_value(Angle(Fraction(1, 3)))
    assert abs(z - complex(-0.5, math.sqrt(3) / 2)) < 1e-12


def test_ell1_examples():
    a = (Angle(0), Angle(0))
    assert ell1_distance(a, a) == 0
    assert ell1_distance(a, (Angle(Fraction(1, 2)), Angle(Fraction(1, 2)))) == 4
    assert abs(ell1_distance(a, (Angle(Fraction(1, 4)), Angle(0))) - math.sqrt(2)) < 1e-12


def test_in_arc_examples():
    arc = Arc(Angle(0.25), 0.04)
    assert in_arc(Angle(0.25), arc)
    assert not in_arc(Angle(0.30), arc)
    assert in_arc(Angle(0.9), Arc(Angle(0.1), 0.5))


def test_in_arc_wraps():
    arc = Arc(Angle(0.98), 0.05)
    assert in_arc(Angle(0.01), arc)
    assert list(in_arc_array([0.01, 0.5, 0.95], arc)) == [True, False, True]


def test_archimedean_angle_examples():
    assert archimedean_angle(17, 0) == Angle(0)
    assert archimedean_angle(1, 3.3) == Angle(0)
    mpmath.mp.dps = 40
    want = float(mpmath.frac(mpmath.log(10) / (2 * mpmath.pi)))
    assert abs(float(archimedean_angle(10, 1)) - want) < 1e-9


def test_archimedean_angle_rejects_zero():
    with pytest.raises(InvalidArgument):
        archimedean_angle(0, 1.0)


def test_archimedean_vectorised_matches_scalar():
    ns = np.arange(1, 2000)
    v = archimedean_angles(ns, -2.5)
    for n in (1, 2, 10, 999, 1999):
        assert abs(v[n - 1] - float(archimedean_angle(n, -2.5))) < 1e-12


@given(fractions, fractions)
def test_rational_arithmetic_is_exact(a, b):
    x, y = Angle(a), Angle(b)
    assert (x + y) - y == x
    assert x + (-x) == Angle(0)
    assert 0 <= x.value < 1 and x.is_rational


@given(fractions, st.integers(-20, 20))
def test_integer_multiple(a, k):
    assert Angle(a) * k == Angle(a * k)


@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_float_reduction_in_unit_interval(v):
    a = Angle(v)
    assert 0.0 <= float(a) < 1.0
    assert not a.is_rational


@given(st.floats(0, 1, allow_nan=False), st.floats(0, 1, allow_nan=False))
def test_distance_symmetric_and_bounded(a, b):
    d = Angle(a).distance(Angle(b))
    assert 0 <= d <= 0.5
    assert d == pytest.approx(Angle(b).distance(Angle(a)), abs=1e-15)
    assert d == pytest.approx(float(circular_distance(a, b)), abs=1e-12)


def test_parse():
    assert Angle.parse("1/3") == Angle(Fraction(1, 3))
    assert Angle.parse("0.25").is_rational is False
    with pytest.raises(InvalidArgument):
        Angle.parse("abc")


def test_arc_validation():
    with pytest.raises(InvalidArgument):
        Arc(Angle(0), 0.0)
    with pytest.raises(InvalidArgument):
        Arc(Angle(0), 0.6)
