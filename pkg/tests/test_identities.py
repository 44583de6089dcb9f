import numpy as np
import pytest

from csrg import identities as idn
from csrg.gauss import build_trace_counts
from csrg.gf import build_field, power_traces

import oracles as o


def test_small_fields_lists_every_prime_power():
    got = idn.small_fields(200)
    want = sorted(
        [(p, f) for p in range(2, 201) if o.factorint(p) == {p: 1} for f in range(1, 9) if p**f <= 200],
        key=lambda t: t[0] ** t[1],
    )
    assert got == want


@pytest.mark.parametrize("p,f,k", [(3, 4, 16), (2, 6, 9), (31, 1, 30), (5, 3, 62)])
def test_counts_from_traces_matches_tables(p, f, k):
    F = build_field(p, f)
    got = idn.counts_from_traces(power_traces(F), k, p)
    assert np.array_equal(got, build_trace_counts(F, k).counts)


def test_suite_is_clean_on_small_fields():
    rep = idn.run_identity_suite(qmax=1 << 9, digit_samples=50)
    assert rep.ok, rep.failures
    assert rep.exact_fields + rep.certified_fields == rep.fields == len(idn.small_fields(1 << 9))
    for name in ("norm", "frobenius", "inverse", "quadratic", "semiprim", "dh_lift", "dh_product", "digit_sum"):
        assert rep.checks[name] > 0, name
    assert "failures=0" in rep.summary()


def test_certified_tier_agrees_with_exact_tier():
    # the same fields, once with every prime field checked exactly and once certified
    exact = idn.run_identity_suite(qmax=90, exact_p_max=1000, digit_samples=10)
    cert = idn.run_identity_suite(qmax=90, exact_p_max=2, digit_samples=10)
    assert exact.ok and cert.ok
    assert cert.certified_fields > 20 and exact.certified_fields == 0
    assert cert.checks == exact.checks
    assert cert.max_deviation + cert.max_bound < 1e-3


def test_certification_rejects_a_large_margin():
    rep = idn.IdentityReport(qmax=1, kmax=1)
    idn._certify(rep, 0.3, 0.2, "fine")
    assert rep.ok
    idn._certify(rep, 0.9, 0.2, "broken")
    assert not rep.ok and "broken" in rep.failures[0]


def test_rounding_bound_grows_with_size():
    assert 0 < idn._dft_bound(1 << 10, 16) < idn._dft_bound(1 << 16, 16) < 1e-6
    assert idn._prod_bound(2.0, 1e-9, 3) > 0


def test_digit_sums_vectorised():
    rep = idn.IdentityReport(qmax=1, kmax=1)
    idn.check_digit_sums(7, 3, 200, np.random.default_rng(3), rep)
    assert rep.ok and rep.checks["digit_sum"] == 200
