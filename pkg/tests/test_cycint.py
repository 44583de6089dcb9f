import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csrg.cycint import CycInt, cyclotomic_polynomial, poly_mul, reduce_group_ring
from csrg.errors import ConductorMismatch, NonIntegralDivision, NotCoprime

import oracles as o

CONDUCTORS = [1, 2, 3, 4, 5, 7, 8, 9, 12, 15, 21, 24, 30, 35, 45, 60, 63, 105]


@st.composite
def element(draw, n=None, lo=-50, hi=50):
    n = draw(st.sampled_from(CONDUCTORS)) if n is None else n
    v = draw(st.lists(st.integers(lo, hi), min_size=n, max_size=n))
    return CycInt(n, v), v


@st.composite
def pair(draw):
    n = draw(st.sampled_from(CONDUCTORS))
    a, va = draw(element(n))
    b, vb = draw(element(n))
    return n, a, va, b, vb


@pytest.mark.parametrize("n", list(range(1, 80)) + [105, 210, 225, 256, 385])
def test_cyclotomic_polynomial_matches_sympy(n):
    from sympy import Poly, cyclotomic_poly
    from sympy.abc import x

    expect = [int(c) for c in reversed(Poly(cyclotomic_poly(n, x), x).all_coeffs())]
    assert list(cyclotomic_polynomial(n)) == expect


@given(element())
def test_reduction_matches_polynomial_remainder(ev):
    a, v = ev
    assert a.coeffs == o.reduce_mod_cyclotomic(v, a.conductor)


@given(element())
def test_reduction_is_idempotent(ev):
    a, _ = ev
    again = CycInt(a.conductor, a.group_ring())
    assert again.coeffs == a.coeffs
    assert list(reduce_group_ring(a.coeffs, a.conductor)) == a.coeffs


@given(pair())
def test_ring_operations_agree_with_embedding(t):
    n, a, va, b, vb = t
    za, zb = o.eval_group_ring(va, n), o.eval_group_ring(vb, n)
    for got, want in [(a + b, za + zb), (a - b, za - zb), (a * b, za * zb), (-a, -za)]:
        assert abs(got.embed(1) - want) < 1e-6 * (1 + abs(want))


@given(element(), st.integers(0, 3))
def test_power(ev, e):
    a, _ = ev
    acc = CycInt.integer(1, a.conductor)
    for _ in range(e):
        acc = acc * a
    assert a**e == acc


@given(st.sampled_from(CONDUCTORS), st.data())
def test_galois_action_composes(n, data):
    a, _ = data.draw(element(n))
    units = [t for t in range(1, max(n, 2)) if o.gcd(t, n) == 1] or [1]
    s = data.draw(st.sampled_from(units))
    t = data.draw(st.sampled_from(units))
    assert a.galois_apply(t).galois_apply(s) == a.galois_apply(s * t % max(n, 1))


@given(element())
def test_norm_form_is_real_nonnegative(ev):
    a, _ = ev
    emb = (a * a.conj()).embeddings()
    assert np.all(np.abs(emb.imag) < 1e-6)
    assert np.all(emb.real > -1e-6)


@given(element())
def test_embeddings_are_galois_conjugates(ev):
    a, _ = ev
    n = a.conductor
    units = [t for t in range(1, n + 1) if o.gcd(t, n) == 1]
    got = a.embeddings()
    for t, z in zip(units, got):
        assert abs(z - a.embed(t)) < 1e-6 * (1 + abs(z))


@given(pair())
def test_lift_preserves_value_and_equality_crosses_conductors(t):
    n, a, _, _, _ = t
    m = 2 * n * 3
    assert a.lift(m) == a
    assert abs(a.lift(m).embed(1) - a.embed(1)) < 1e-6 * (1 + abs(a.embed(1)))


@given(element())
def test_minimize_keeps_value(ev):
    a, _ = ev
    m = a.minimize()
    assert a.conductor % m.conductor == 0 or m.conductor == 1
    assert m == a


def test_zeta_identities():
    z = CycInt.zeta(6)
    assert z**6 == 1
    assert z**3 == -1
    assert CycInt.zeta(4) ** 2 == -1
    assert (1 + CycInt.zeta(3) + CycInt.zeta(3, 2)).is_zero()
    assert CycInt.zeta(10, 5).detect_rational() == -1


def test_root_of_unity_classification():
    assert CycInt.zeta(12, 4).classify_root_of_unity() == (3, 1)
    assert (-CycInt.zeta(15, 1)).classify_root_of_unity() == (30, 17)
    assert (-CycInt.zeta(9, 2)).classify_root_of_unity() == (18, 13)
    assert CycInt.integer(2, 5).classify_root_of_unity() is None
    assert (CycInt.zeta(5) + 1).classify_root_of_unity() is None


def test_exact_division_and_errors():
    a = CycInt(7, [0, 6, 12])
    assert a.exact_div(6) == CycInt(7, [0, 1, 2])
    with pytest.raises(NonIntegralDivision):
        a.exact_div(4)
    with pytest.raises(NotCoprime):
        a.galois_apply(14)
    with pytest.raises(ConductorMismatch):
        a.lift(10)


def test_text_form():
    assert (CycInt.zeta(3) - CycInt.zeta(3, 2)).to_text() == "z^1 - z^2 (conductor 3)"
    assert CycInt.integer(-4, 12).to_text() == "-4"
    assert CycInt(4, [0, 1]).to_json() == {"conductor": 4, "coeffs": [0, 1]}


def test_large_coefficients_stay_exact():
    big = CycInt(5, [10**30, -(10**30) + 1, 3])
    sq = big * big
    want = o.reduce_mod_cyclotomic(
        np.convolve(np.array([10**30, -(10**30) + 1, 3], dtype=object),
                    np.array([10**30, -(10**30) + 1, 3], dtype=object)).tolist(), 5)
    assert sq.coeffs == want


@given(
    st.lists(st.integers(-(2**40), 2**40), min_size=1, max_size=60),
    st.lists(st.integers(-(2**40), 2**40), min_size=1, max_size=60),
)
def test_poly_mul_matches_object_convolution(a, b):
    got = poly_mul(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
    want = np.convolve(np.array(a, dtype=object), np.array(b, dtype=object))
    assert [int(x) for x in got] == [int(x) for x in want]
