import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csrg import gf
from csrg.errors import DivisionByZero, NotPrime, TooLarge

import oracles as o

SMALL = [(2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2), (11, 1), (13, 2), (2, 6)]


def naive(F):
    return o.NaiveField(F.p, F.modulus, F.gamma)


@pytest.mark.parametrize("p,f", SMALL)
def test_modulus_irreducible_and_gamma_primitive(p, f):
    F = gf.build_field(p, f)
    assert F.modulus[-1] == 1 and len(F.modulus) == f + 1
    assert gf.is_irreducible(F.modulus, p)
    N = naive(F)
    assert len(set(N.powers())) == F.q - 1


@pytest.mark.parametrize("p,f", SMALL)
def test_powers_and_traces_match_sympy_arithmetic(p, f):
    F = gf.build_field(p, f)
    N = naive(F)
    pw = N.powers()
    codes = gf.power_codes(F)
    w = [p**i for i in range(f)]
    assert list(codes) == [sum(c * x for c, x in zip(v, w)) for v in pw]
    tr = gf.power_traces(F)
    assert list(tr) == [N.trace(v) for v in pw]
    for a in range(0, F.q - 1, max(1, (F.q - 1) // 7)):
        assert gf.trace_abs(F.gen**a) == N.trace(pw[a])


def test_prime_field_generators():
    assert gf.build_field(5, 1).gamma == (2,)
    assert gf.build_field(7, 1).gamma == (3,)
    assert gf.build_field(65521, 1).gamma == (17,)


@pytest.mark.parametrize("p,f", SMALL)
def test_trace_surjective_and_linear(p, f):
    F = gf.build_field(p, f)
    tr = gf.power_traces(F)
    assert set(tr.tolist()) | {0} == set(range(p))
    rng = np.random.default_rng(1)
    for _ in range(20):
        x = F.element(rng.integers(0, p, f).tolist())
        y = F.element(rng.integers(0, p, f).tolist())
        c = int(rng.integers(0, p))
        assert gf.trace_abs(x * c + y) == (c * gf.trace_abs(x) + gf.trace_abs(y)) % p


@pytest.mark.parametrize("p,f", SMALL)
def test_frobenius_fixes_prime_field(p, f):
    F = gf.build_field(p, f)
    for a in range(p):
        x = F.scalar(a)
        assert x.frobenius() == x


@pytest.mark.parametrize("p,f,d", [(2, 4, 2), (2, 6, 3), (2, 6, 2), (3, 4, 2), (5, 2, 1), (3, 2, 1)])
def test_trace_transitivity(p, f, d):
    F = gf.build_field(p, f)
    emb = gf.subfield_embed(F, d)
    for code in range(F.q):
        x = F.from_code(code)
        inner = gf.trace_rel(x, d)
        assert inner.field == emb.sub
        assert emb(inner) == emb(inner).frobenius(d)
        assert gf.trace_abs(inner) == gf.trace_abs(x)


@pytest.mark.parametrize("p,f,d", [(2, 4, 2), (2, 6, 3), (3, 4, 2), (7, 2, 1)])
def test_subfield_embedding_is_a_homomorphism(p, f, d):
    F = gf.build_field(p, f)
    emb = gf.subfield_embed(F, d)
    S = emb.sub
    N = (F.q - 1) // (S.q - 1)
    assert emb(S.gen) == F.gen**N
    for a in range(S.q):
        for b in range(0, S.q, 3):
            x, y = S.from_code(a), S.from_code(b)
            assert emb(x * y) == emb(x) * emb(y)
            assert emb(x + y) == emb(x) + emb(y)


@pytest.mark.parametrize("p,f", [(2, 5), (3, 3), (5, 2), (13, 1)])
def test_enumerate_powers_visits_each_element_once(p, f):
    F = gf.build_field(p, f)
    seen = [x.code() for _, x in gf.enumerate_powers(F, 0, F.q - 1)]
    assert sorted(seen) == list(range(1, F.q))


@given(st.sampled_from([(2, 5), (3, 4), (5, 3), (7, 2), (101, 1)]), st.integers(0, 10**6))
def test_dlog_inverts_powering(pf, a):
    F = gf.build_field(*pf)
    a %= F.q - 1
    assert gf.dlog(F.gen**a) == a


@given(st.sampled_from([(2, 5), (3, 3), (5, 2), (17, 1)]), st.integers(1, 10**6), st.integers(1, 10**6))
def test_field_axioms(pf, a, b):
    F = gf.build_field(*pf)
    x, y = F.from_code(a % F.q), F.from_code(b % F.q)
    assert x * y == y * x
    assert (x + y) * y == x * y + y * y
    if not x.is_zero():
        assert x * x.inverse() == F.one


def test_errors():
    with pytest.raises(NotPrime):
        gf.build_field(9, 1)
    with pytest.raises(DivisionByZero):
        gf.build_field(5, 2).zero.inverse()
    assert gf.prime_power(243) == (3, 5)
    assert gf.prime_power(12) is None


def test_block_enumeration_matches_single_pass():
    F = gf.build_field(3, 7)
    full = gf.power_traces(F)
    parts = np.concatenate([T.ravel() for _, T in gf.iter_trace_blocks(F, 0, F.q - 1, chunk_elems=200)])
    assert np.array_equal(parts[: F.q - 1], full)
    assert np.array_equal(gf.power_traces(F, 100, 50), full[100:150])
