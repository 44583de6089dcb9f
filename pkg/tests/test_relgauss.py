from math import gcd

import numpy as np

import pytest

from csrg import relgauss
from csrg.cycint import CycInt
from csrg.errors import BadParameters, DegenerateCharacter, IndexUnstable, NotPrime, TooLarge, TrivialRestriction
from csrg.gf import build_field, subfield_embed

import oracles as o

# (p, k, p1) with stable index and even f' - f, small enough for exact runs
CASES = [(2, 3, 3), (2, 5, 5), (2, 7, 7), (5, 6, 3), (11, 6, 3), (2, 9, 3), (2, 15, 5)]


def numeric_theta(r):
    """theta from complex Gauss sums over the naive fields."""
    big = build_field(r.p, r.f_prime)
    sub = subfield_embed(big, r.f).sub
    Gb = o.gauss_sum_numeric(o.NaiveField(r.p, big.modulus, big.gamma), r.k_prime, r.u_prime)
    Gs = o.gauss_sum_numeric(o.NaiveField(r.p, sub.modulus, sub.gamma), r.k, r.u)
    return Gb / (r.p ** ((r.f_prime - r.f) / 2) * Gs)


@pytest.mark.parametrize("case", [(2, 3, 3), (5, 6, 3)])
def test_theta_matches_complex_evaluation(case):
    for u in range(1, case[1]):
        r = relgauss.relative_gauss(*case, u=u)
        assert abs(r.theta.embed(1) - numeric_theta(r)) < 1e-6


@pytest.mark.parametrize("case", CASES)
def test_theta_has_unit_modulus(case):
    r = relgauss.relative_gauss(*case)
    assert r.theta * r.theta.conj() == 1
    assert relgauss.root_order_bound_check(r)


@pytest.mark.parametrize("case", CASES)
def test_prediction_holds(case):
    r = relgauss.relative_gauss(*case)
    assert r.predicted_epsilon == 1
    assert r.matches_prediction
    assert r.classification.kind == "PlusOne"


@pytest.mark.parametrize("case", [(2, 3, 3), (2, 5, 5), (5, 6, 3), (11, 6, 3), (2, 9, 3)])
def test_galois_stability_of_classification(case):
    p, k, p1 = case
    base = relgauss.relative_gauss(p, k, p1).classification
    for a in range(2, k * p1):
        if gcd(a, k * p1) != 1:
            continue
        r = relgauss.relative_gauss(p, k, p1, u=a)
        assert r.theta * r.theta.conj() == 1
        if r.predicted_epsilon is not None:
            assert r.classification == base


@pytest.mark.parametrize("case", CASES)
def test_restricted_character_is_compatible(case):
    assert relgauss.restriction_compatible(*case, samples=100)


def test_predicted_sign_examples():
    assert relgauss.predicted_sign(2, 7, 7) == 1
    assert relgauss.predicted_sign(5, 6, 3) == 1
    assert relgauss.predicted_sign(11, 6, 3) == 1
    # p - 1 shares a factor with k'
    assert relgauss.predicted_sign(7, 3, 3) is None
    assert relgauss.predicted_sign(3, 3, 3) is None


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5, 6])
def test_conjugate_exponents(t):
    assert relgauss.conjugate_exponent_check(2, 7, 7, t)


def test_conjugate_exponent_guards():
    with pytest.raises(BadParameters):
        relgauss.conjugate_exponent_check(2, 7, 7, 7)
    with pytest.raises(BadParameters):
        relgauss.conjugate_exponent_check(5, 6, 3, 1)


@pytest.mark.parametrize(
    "p,f,fp,u,order",
    [(2, 2, 4, 1, 15), (2, 2, 4, 2, 15), (3, 1, 2, 1, 8), (3, 1, 2, 3, 8), (5, 1, 2, 1, 24), (3, 1, 4, 1, 80), (2, 3, 21, 1, 49)],
)
def test_trace_one_sum_identity(p, f, fp, u, order):
    assert relgauss.yamamoto_identity_check(p, f, fp, u, order)


def test_trace_one_sum_against_theta():
    # sum over trace-1 representatives = p^((f'-f)/2) theta
    r = relgauss.relative_gauss(2, 7, 7)
    Y = relgauss.yamamoto_sum(2, 3, 21, r.u_prime, 49)
    assert Y == CycInt.integer(2**9) * r.theta


def test_trace_one_sum_brute_force():
    big = build_field(2, 4)
    emb = subfield_embed(big, 2)
    N = 5
    want = 0j


    seen = set()
    for a in range(15):
        x = big.gen**a
        coset = frozenset((x * big.gen ** (N * b)).code() for b in range(3))
        if coset in seen:
            continue
        seen.add(coset)
        for b in range(3):
            y = x * big.gen ** (N * b)
            t = y + y**4
            if t == big.one:
                want += np.exp(2j * np.pi * ((a + N * b) % 15) / 15)
    got = relgauss.yamamoto_sum(2, 2, 4, 1, 15)
    assert emb.sub.f == 2
    assert abs(got.embed(1) - want) < 1e-9


def test_errors():
    with pytest.raises(IndexUnstable):
        relgauss.relative_gauss(2, 3, 5)
    with pytest.raises(BadParameters):
        relgauss.relative_gauss(5, 2, 3)
    with pytest.raises(BadParameters):
        relgauss.relative_gauss(3, 8, 2)
    with pytest.raises(NotPrime):
        relgauss.relative_gauss(2, 3, 9)
    with pytest.raises(TooLarge):
        relgauss.relative_gauss(3, 10, 5)
    with pytest.raises(DegenerateCharacter):
        relgauss.relative_gauss(2, 3, 3, u=3)
    with pytest.raises(TrivialRestriction):
        relgauss.yamamoto_sum(2, 2, 4, 3, 15)


def test_classification_labels():
    assert str(relgauss.classify(CycInt.integer(1, 3)).kind) == "PlusOne"
    assert relgauss.classify(CycInt.integer(-1, 3)).kind == "MinusOne"
    assert str(relgauss.classify(CycInt.zeta(9, 2))) == "RootOfUnity(9, 2)"
    assert relgauss.classify(CycInt.integer(2, 3)).kind == "Other"
