from math import gcd

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from csrg import residue
from csrg.errors import NotCoprime

import oracles as o

PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 61, 67, 71, 97, 101, 107]
pn = st.tuples(st.sampled_from(PRIMES), st.integers(2, 3000)).filter(lambda t: gcd(*t) == 1)


@given(st.integers(1, 10**9))
def test_factorize_matches_sympy(n):
    assert dict(residue.factorize(n)) == o.factorint(n)


@given(st.integers(1, 10**6))
def test_phi_divisors_radical(n):
    assert residue.euler_phi(n) == o.phi(n)
    assert residue.divisors(n) == o.divisors(n)
    rad = 1
    for r in o.factorint(n):
        rad *= r
    assert residue.radical(n) == rad


@given(pn)
def test_order_and_index_match_sympy(t):
    p, n = t
    assert residue.multiplicative_order(p, n) == o.order(p, n)
    assert residue.index_of(p, n) == o.index(p, n)


@given(pn)
def test_order_divides_phi(t):
    p, n = t
    prof = residue.subgroup_profile(p, n)
    assert o.phi(n) % prof.order_f == 0
    assert prof.order_f * prof.index_e == o.phi(n)


@given(pn)
def test_semiprimitive_index_divides_half_phi(t):
    p, n = t
    assert residue.is_semiprimitive(p, n) == o.semiprimitive(p, n)
    if residue.is_semiprimitive(p, n) and n > 2:
        assert (o.phi(n) // 2) % residue.index_of(p, n) == 0


@given(pn)
def test_coset_reps_tile_the_unit_group(t):
    p, n = t
    prof = residue.subgroup_profile(p, n)
    assert len(prof.coset_reps) == prof.index_e
    sub = {pow(p, i, n) for i in range(prof.order_f)}
    seen = [r * s % n for r in prof.coset_reps for s in sub]
    units = [a for a in range(n) if gcd(a, n) == 1]
    assert sorted(seen) == units


@given(pn)
def test_semiprimitive_exponent_is_smallest(t):
    p, n = t
    s = residue.semiprimitive_exponent(p, n)
    if s is None:
        assert not o.semiprimitive(p, n)
    else:
        assert pow(p, s, n) == n - 1 % n
        assert all(pow(p, j, n) != n - 1 for j in range(1, s))


def test_known_values():
    # 2 has order 10 mod 11, so <2> is everything
    assert residue.index_of(2, 11) == 1
    assert residue.index_of(3, 107) == 2
    assert residue.is_semiprimitive(2, 9)
    assert not residue.is_semiprimitive(2, 7)
    assert residue.semiprimitive_exponent(2, 9) == 3


def test_rejects_non_coprime():
    with pytest.raises(NotCoprime):
        residue.multiplicative_order(3, 12)
    with pytest.raises(NotCoprime):
        residue.subgroup_profile(5, 10)


@given(st.sampled_from([3, 5, 7, 11, 13]), st.sampled_from([3, 5, 7, 11, 13, 17, 19]), st.integers(1, 3))
def test_index_stability_matches_direct_computation(p, r, a):
    assume(p != r)
    h, k = r, r**a
    expect = o.index(p, h) == o.index(p, k)
    assert residue.check_index_stability(p, h, k) == expect
