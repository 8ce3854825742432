import math
from fractions import Fraction
from itertools import product

import pytest

from orbitlab.characters import character_table, find_character
from orbitlab.errors import InvalidArgument
from orbitlab.torus import Angle


def units(q):
    return [a for a in range(1, q + 1) if math.gcd(a, q) == 1]


def brute_conductor(chi):
    # least d | q with chi trivial on units a = 1 mod d
    q = chi.modulus
    for d in range(1, q + 1):
        if q % d == 0 and all(chi.value(a) == Angle(0) for a in units(q) if a % d == 1 % d):
            return d


def test_trivial_modulus():
    (chi,) = character_table(1)
    assert all(chi.value(n) == Angle(0) for n in range(10))


def test_mod_4():
    tab = character_table(4)
    assert len(tab) == 2
    nonprincipal = [c for c in tab if not c.is_principal][0]
    assert nonprincipal.value(3) == Angle(Fraction(1, 2))
    assert nonprincipal.value(2) is None


def test_mod_5_orders():
    assert sorted(c.order for c in character_table(5)) == [1, 2, 4, 4]


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 12, 15, 16, 20, 21, 24, 25, 27, 36, 40])
def test_tables_are_the_full_dual_group(q):
    tab = character_table(q)
    U = units(q)
    assert len(tab) == len(U)
    seen = set()
    for chi in tab:
        for a, b in product(U, U):
            assert chi.value(a) + chi.value(b) == chi.value(a * b)
        for a in range(q):
            assert (chi.value(a) is None) == (math.gcd(a, q) != 1)
        seen.add(tuple(chi.value(a) for a in U))
        # order = lcm of value denominators
        assert chi.order == math.lcm(*(chi.value(a).denominator for a in U))
    assert len(seen) == len(U)


@pytest.mark.parametrize("q", [4, 5, 8, 9, 12, 16, 20, 24, 27, 32, 45])
def test_conductor_against_definition(q):
    for chi in character_table(q):
        assert chi.conductor == brute_conductor(chi)


def test_conductors_mod_8():
    assert sorted(c.conductor for c in character_table(8)) == [1, 4, 8, 8]


def test_find_character():
    chi = find_character(4)
    assert chi.order == 4 and chi.modulus == 5 and chi.primitive
    assert find_character(2, avoid={3}).modulus == 5


def test_modulus_cap():
    with pytest.raises(InvalidArgument):
        character_table(0)
