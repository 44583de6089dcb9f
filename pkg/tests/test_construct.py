import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from csrg import construct as c
from csrg.errors import BadParameters, DuplicateIndices, HypothesisFailed, InvalidH
from csrg.gf import build_field
from csrg.residue import euler_phi, index_of, multiplicative_order

# the eleven sporadic rows, (No., k, p, f, e), as printed in the source table
TABLE1_ROWS = [
    (1, 11, 3, 5, 2),
    (2, 19, 5, 9, 2),
    (3, 35, 3, 12, 2),
    (4, 37, 7, 9, 4),
    (5, 43, 11, 7, 6),
    (6, 67, 17, 33, 2),
    (7, 107, 3, 53, 2),
    (8, 133, 5, 18, 6),
    (9, 163, 41, 81, 2),
    (10, 323, 3, 144, 2),
    (11, 499, 5, 249, 2),
]


@pytest.mark.parametrize("row", TABLE1_ROWS)
def test_table1_rows(row):
    no, k, p, f, e = row
    spec = c.build_table1(no)
    assert (spec.k, spec.p, spec.f, spec.I) == (k, p, f, (0,))
    assert pow(p, f, k) == 1
    assert multiplicative_order(p, k) == f and index_of(p, k) == e
    assert spec.symbolic == (no not in c.TABLE1_NUMERIC)


def test_table1_bad_row():
    with pytest.raises(BadParameters):
        c.build_table1(12)


def _all_specs():
    out = [c.build_table1(n) for n in range(1, 12)]
    for p, p1 in sorted(c.THM13_I):
        for m in (1, 2):
            out.append(c.build_thm13("i", p, p1, m))
    for p, p1 in sorted(c.THM13_II):
        for m in (1, 2):
            out.append(c.build_thm13("ii", p, p1, m))
    for p, p1, p2 in sorted(c.THM13_III):
        out.append(c.build_thm13("iii", p, p1, 1, p2=p2))
    out.append(c.build_thm14("i", 11, 7))
    out.append(c.build_thm14("i", 53, 7))
    out.append(c.build_thm14("i", 11, 7, m=2))
    for p, p1 in sorted(c.THM14_II_SKEW | c.THM14_II_PALEY):
        out.append(c.build_thm14("ii", p, p1))
    out.append(c.build_srg_family(2, [(3, 2), (5, 1)], e=2))
    out.append(c.build_shd_family(3, 13, 1, 4))
    out.append(c.build_shd_family(3, 13, 2, 4))
    return out


@pytest.mark.parametrize("spec", _all_specs(), ids=lambda s: f"{s.meta['source']}-{s.p}-{s.f}-{s.k}")
def test_every_spec_has_k_dividing_q_minus_1(spec):
    assert pow(spec.p, spec.f, spec.k) == 1 % spec.k
    assert all(0 <= i < spec.k for i in spec.I)
    assert len(set(spec.I)) == len(spec.I)


@pytest.mark.parametrize(
    "spec",
    [s for s in _all_specs() if s.meta.get("predicted") in ("skew_hadamard", "paley_pds") or s.meta["source"] == "shd_family"],
    ids=lambda s: f"{s.meta['source']}-{s.p}-{s.k}",
)
def test_half_size_connection_sets(spec):
    # |I| (q-1)/k = (q-1)/2 exactly when 2|I| = k
    assert 2 * len(spec.I) == spec.k
    if not spec.symbolic:
        assert 2 * spec.size == spec.q - 1


# m lifts give |I| = p1^m, so keep the index sets below ~10^5
LIFT_CASES = [(p, p1, m) for p, p1 in sorted(c.THM13_I) for m in (1, 2, 3) if p1**m <= 10**5]


@pytest.mark.parametrize("p,p1,m", LIFT_CASES)
def test_lift_composition_reproduces_family(p, p1, m):
    base = c.build_thm13("i", p, p1, 1)
    lifted = c.lift_repeatedly(base, m, p1)
    direct = c.build_thm13("i", p, p1, m + 1)
    assert (lifted.p, lifted.f, lifted.k) == (direct.p, direct.f, direct.k)
    assert set(lifted.I) == set(direct.I)


def test_thm13_first_lift():
    s = c.build_thm13("i", 2, 7, 2)
    assert (s.p, s.f, s.k, s.I) == (2, 21, 49, tuple(range(7)))
    assert s.f == euler_phi(49) // 2


def test_srg_family_two_primes():
    s = c.build_srg_family(2, [(3, 2), (5, 1)], e=2)
    assert (s.p, s.f, s.k, s.I) == (2, 12, 45, (0, 5, 10))
    assert s.meta["semiprimitive"] == [{"h_j": 5, "s_j": 2}]
    assert pow(2, 2, 5) == 4


def test_shd_seed_index_set():
    s = c.build_shd_family(3, 13, 1, 4)
    assert s.I == c.standard_H(13, 13)
    assert (s.p, s.f, s.k) == (3, 3, 26)


def test_standard_H_and_validation():
    Q = c.index2_subgroup(7)
    assert Q == [1, 9, 11]
    assert c.standard_H(7) == (0, 1, 2, 4, 8, 9, 11)
    # 2 is a square mod 7, so Q and 2Q agree mod 7 and the sum cannot vanish
    assert not c.validate_H(c.HSet(14, c.standard_H(7), 7), "vanishing-sum")
    # 2 is a non-square mod 13, so Q u 2Q covers every nonzero residue mod 13
    assert c.validate_H(c.HSet(26, c.standard_H(13, 13), 13), "vanishing-sum")
    assert c.validate_H(c.HSet(14, tuple(range(7)), 7), "residue-cover")
    assert not c.validate_H(c.HSet(14, (0, 1), 7), "residue-cover")


def test_thm14_variants():
    s = c.build_thm14("i", 11, 7)
    assert (s.p, s.f, s.k, s.I) == (11, 3, 14, tuple(range(7)))
    assert s.meta["predicted"] == "skew_hadamard"
    assert c.build_thm14("i", 53, 7).meta["predicted"] == "paley_pds"
    with pytest.raises(BadParameters):
        c.build_thm14("i", 11, 5)
    with pytest.raises(InvalidH):
        c.build_thm14("i", 11, 7, H=[0, 1])


def test_builder_errors():
    with pytest.raises(BadParameters):
        c.build_thm13("x", 2, 7, 1)
    with pytest.raises(HypothesisFailed):
        c.build_srg_family(3, [(3, 1)])
    with pytest.raises(HypothesisFailed):
        c.build_srg_family(2, [(7, 1)], e=1)
    with pytest.raises(BadParameters):
        c.ConnectionSpec(5, 1, 3, (0,))
    with pytest.raises(DuplicateIndices):
        c.ConnectionSpec(5, 1, 2, (0, 0))
    with pytest.raises(BadParameters):
        c.ConnectionSpec(5, 1, 2, (2,))
    with pytest.raises(InvalidH):
        c.build_shd_family(3, 13, 1, 4, H=[0, 1])


def test_class_membership():
    F = build_field(3, 3)
    for a in range(26):
        x = F.gen**a
        for i in range(13):
            assert c.cyclotomic_class_membership(F, 13, i, x) == (a % 13 == i)


def test_json_round_trip():
    s = c.build_thm13("iii", 2, 3, 1, p2=5)
    again = c.ConnectionSpec.from_json(json.loads(s.dumps()))
    assert again == s and again.meta == s.meta and again.symbolic == s.symbolic
    assert s.dumps() == again.dumps()


@given(st.sampled_from(sorted(c.THM13_I)), st.integers(1, 2))
def test_listed_pairs_build_quickly_and_unflagged(pp, m):
    s = c.build_thm13("i", *pp, m)
    assert "unlisted" not in s.meta
    assert s.symbolic == s.exceeds(1 << 24)
    assert len(s.I) == pp[1] ** (m - 1)


def test_unlisted_pair_is_flagged():
    s = c.build_thm13("i", 2, 23, 1)
    assert s.meta.get("unlisted") is True


def test_exceeds_without_forming_the_power():
    s = c.build_thm13("i", 5, 499, 2)
    assert s.symbolic and s.exceeds(1 << 24)
    assert not c.build_table1(1).exceeds(243)
    assert c.build_table1(1).exceeds(242)
