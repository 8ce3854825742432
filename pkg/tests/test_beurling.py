import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orbitlab.beurling import (beurling_polynomial, interval_majorant, interval_minorant, offset_grid,
                               sawtooth)
from orbitlab.errors import InvalidArgument


def indicator(t, a, b):
    return ((t >= a) & (t <= b)).astype(float)


def test_mean():
    assert abs(beurling_polynomial(9).mean - 0.05) < 1e-12
    for K in range(1, 65):
        assert abs(beurling_polynomial(K).coefficient(0) - 1 / (2 * (K + 1))) < 1e-12


def test_support_and_hermitian():
    P = beurling_polynomial(12)
    assert P.coefficient(13) == 0 and P.coefficient(-40) == 0
    assert P.is_hermitian()
    assert np.max(np.abs(P.evaluate_complex(offset_grid(100)).imag)) < 1e-12


def test_coefficient_decay():
    for K in range(1, 65):
        P = beurling_polynomial(K)
        for m in range(1, K + 1):
            assert abs(P.coefficient(m)) <= 3 / m


def test_majorant_point():
    assert beurling_polynomial(16)(0.37) >= -0.13


@pytest.mark.parametrize("K", [1, 2, 4, 8, 16, 32, 64])
def test_majorizes_sawtooth(K):
    P = beurling_polynomial(K)
    t = offset_grid(10**4)
    assert np.all(P(t) >= sawtooth(t) - 1e-12)
    # minorant by reflection
    assert np.all(-P(-t) <= sawtooth(t) + 1e-12)
    # at the jump, the upper limit 1/2 is also majorized
    assert P(0.0) >= 0.5 - 1e-12


def test_full_interval_limit():
    K, eps = 8, 1e-6
    P = interval_majorant(K, 0.0, 1 - eps)
    assert P.mean == pytest.approx(1 + 1 / (K + 1) - eps, abs=1e-12)


def test_interval_examples():
    assert interval_majorant(16, 0.2, 0.5)(0.35) >= 1
    assert interval_minorant(16, 0.2, 0.5)(0.1) <= 0
    assert interval_majorant(16, 0.2, 0.5).coefficient(17) == 0


def test_minorant_degenerate_flag():
    assert interval_minorant(4, 0.1, 0.2).degenerate
    assert not interval_minorant(32, 0.1, 0.2).degenerate


def test_rejects_bad_input():
    with pytest.raises(InvalidArgument):
        beurling_polynomial(0)
    with pytest.raises(InvalidArgument):
        interval_majorant(4, 0.5, 0.2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.floats(0, 0.98), st.floats(0.005, 0.99))
def test_sandwich(K, a, width):
    b = min(a + width, 0.999)
    if b <= a:
        return
    t = np.random.default_rng(K).random(1000)
    ind = indicator(t, a, b)
    assert np.all(interval_minorant(K, a, b)(t) <= ind + 1e-9)
    assert np.all(interval_majorant(K, a, b)(t) >= ind - 1e-9)


def test_csv():
    lines = beurling_polynomial(9).to_csv().splitlines()
    assert lines[0] == "m,re,im" and len(lines) == 20
    assert lines[10].startswith("0,0.05")
