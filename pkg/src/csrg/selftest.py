"""The acceptance checks, runnable from the CLI and from the test suite.

Each criterion function returns (ok, detail).  run_criterion times it and
compares against the criterion's time limit.  The quick level skips the two
heavy sporadic rows and runs the identity suite on q <= 2^12 only.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .construct import (
    build_shd_family,
    build_srg_family,
    build_table1,
    build_thm13,
    build_thm14,
    lift_index_set,
    make_spec,
    standard_H,
)
from .gf import build_field
from .identities import run_identity_suite, small_fields
from .relgauss import relative_gauss, root_order_bound_check, yamamoto_identity_check
from .residue import divisors, index_of
from .verify import (
    BRUTE_CAP,
    brute_force_adjacency,
    char_profile,
    char_profile_via_gauss,
    lifted_prediction_matches,
    predict_lifted_profile,
    spec_table,
    verify_paley_pds,
    verify_skew_hadamard,
    verify_srg,
)


def _spec(p, f, k, I):
    return make_spec(p, f, k, I, "selftest", {})


def _srg_tuple(v) -> tuple | None:
    return v.params.as_tuple() if v.kind == "srg" else None


def c1_paley() -> tuple[bool, str]:
    fields = {5: (5, 1), 9: (3, 2), 13: (13, 1), 17: (17, 1), 25: (5, 2), 29: (29, 1)}
    bad = []
    for q, (p, f) in fields.items():
        t = (q - 1) // 4
        got = _srg_tuple(verify_srg(_spec(p, f, 2, [0])))
        if got != (4 * t + 1, 2 * t, t - 1, t):
            bad.append(f"q={q}: {got}")
    return not bad, "; ".join(bad) or f"q in {sorted(fields)} give (4t+1, 2t, t-1, t)"


def c2_table1_no1() -> tuple[bool, str]:
    v = verify_srg(build_table1(1), brute=True)
    ok = (
        _srg_tuple(v) == (243, 22, 1, 2)
        and len(v.profile.distinct()) == 2
        and v.method == "both"
        and (v.params.r, v.params.s) == (4, -5)
    )
    return ok, f"{_srg_tuple(v)} r={v.params.r if v.params else None} s={v.params.s if v.params else None} method={v.method}"


def c3_table1_no3() -> tuple[bool, str]:
    v = verify_srg(build_table1(3), cross_check=True, brute=False)
    ok = v.kind == "srg" and isinstance(v.params.r, int) and isinstance(v.params.s, int)
    return ok, f"{_srg_tuple(v)} r={v.params.r if v.params else None} s={v.params.s if v.params else None}"


def _table1_heavy(no: int) -> tuple[bool, str]:
    v = verify_srg(build_table1(no), brute=False)
    ok = v.kind == "srg" and isinstance(v.params.r, int) and isinstance(v.params.s, int)
    return ok, f"No. {no}: {_srg_tuple(v)} r={v.params.r if v.params else None} s={v.params.s if v.params else None}"


def c4a_table1_no2() -> tuple[bool, str]:
    return _table1_heavy(2)


def c4b_table1_no5() -> tuple[bool, str]:
    return _table1_heavy(5)


def c5_lifted_family() -> tuple[bool, str]:
    base = build_thm13("i", 2, 7, 1)
    spec = build_thm13("i", 2, 7, 2)
    if (spec.p, spec.f, spec.k, spec.I) != (2, 21, 49, tuple(range(7))):
        return False, f"unexpected spec {spec}"
    if lift_index_set(base, 7, 1).I != spec.I:
        return False, "lift of the base does not reproduce the family member"
    bv = verify_srg(base)
    if bv.kind != "srg":
        return False, f"base not strongly regular: {bv.reason}"
    e = index_of(2, 7)
    predicted = predict_lifted_profile(
        (bv.params.r, bv.params.s), len(base.I), base.k, 2, 7, e, 1
    )
    v = verify_srg(spec)
    if v.kind != "srg":
        return False, f"lifted spec not strongly regular: {v.reason}"
    measured = (v.params.r, v.params.s)
    ok = lifted_prediction_matches(predicted, measured) and set(predicted) == {585, -439}
    return ok, f"{_srg_tuple(v)}, measured {measured}, predicted {predicted}"


def c6_two_prime_family() -> tuple[bool, str]:
    hyp = pow(2, 2, 5) == 5 - 1 and index_of(2, 15) == 2 and index_of(2, 45) == 2
    spec = build_srg_family(2, [(3, 2), (5, 1)], e=2)
    shape = (spec.p, spec.f, spec.k, spec.I) == (2, 12, 45, (0, 5, 10))
    v = verify_srg(spec, cross_check=True)
    ok = hyp and shape and v.kind == "srg"
    return ok, f"hypotheses {'hold' if hyp else 'FAIL'}, spec {'ok' if shape else spec}, {_srg_tuple(v)}"


def c7_relative_rational() -> tuple[bool, str]:
    parts = []
    ok = True
    for p, k, p1 in ((2, 3, 3), (2, 5, 5), (2, 7, 7)):
        r = relative_gauss(p, k, p1)
        good = r.theta == 1 and root_order_bound_check(r)
        ok &= good
        parts.append(f"({p},{k},{k * p1}) theta={r.classification}")
    for p, f, fp, order in ((2, 2, 4, 15), (2, 3, 21, 49)):
        good = yamamoto_identity_check(p, f, fp, 1, order)
        ok &= good
        parts.append(f"Yamamoto {p}^{f}->{p}^{fp} order {order} {'ok' if good else 'FAIL'}")
    return ok, "; ".join(parts)


def c8_sign_corollary() -> tuple[bool, str]:
    parts = []
    ok = True
    for p in (5, 11):
        r = relative_gauss(p, 6, 3)
        good = r.predicted_epsilon == 1 and bool(r.matches_prediction)
        ok &= good
        parts.append(f"({p},6,18) theta={r.classification} predicted={r.predicted_epsilon:+d}")
    return ok, "; ".join(parts)


def c9_skew_hadamard() -> tuple[bool, str]:
    parts = []
    v7 = verify_skew_hadamard(_spec(7, 1, 2, [0]))
    parts.append(f"q=7 {v7.kind}")
    s27 = build_shd_family(3, 13, 1, 4)
    expected_I = tuple(sorted(standard_H(13, 13)))
    v27 = verify_skew_hadamard(s27, brute=True)
    roots_ok = v27.profile is not None and all((2 * x + 1) ** 2 == -27 for x in v27.profile.values)
    ok27 = v27.kind == "skew_hadamard" and v27.method == "both" and roots_ok and s27.I == expected_I
    parts.append(f"q=27 {v27.kind} via {v27.method}, (2x+1)^2=-27 {'holds' if roots_ok else 'FAILS'}")
    v1331 = verify_skew_hadamard(build_thm14("i", 11, 7))
    parts.append(f"q=1331 {v1331.kind}")
    v53 = verify_paley_pds(build_thm14("i", 53, 7))
    parts.append(f"q=53^3 {v53.kind}")
    ok = (
        v7.kind == "skew_hadamard"
        and ok27
        and v1331.kind == "skew_hadamard"
        and v53.kind == "paley_pds"
    )
    return ok, "; ".join(parts)


def c10_identities(qmax: int = 1 << 16) -> tuple[bool, str]:
    rep = run_identity_suite(qmax=qmax, kmax=64)
    detail = rep.summary()
    if rep.failures:
        detail += "; first failures: " + ", ".join(rep.failures[:5])
    return rep.ok, detail


def random_specs(count: int, seed: int = 0, qmax: int = 1 << 16, max_conductor: int = 1 << 16):
    """Random numeric specs over fields with q <= qmax, half of them forced symmetric."""
    rng = np.random.default_rng(seed)
    fields = small_fields(qmax)
    out = []
    while len(out) < count:
        p, f = fields[int(rng.integers(len(fields)))]
        q = p**f
        ks = [k for k in divisors(q - 1) if 2 <= k <= 64 and k * p <= max_conductor]
        if not ks:
            continue
        k = ks[int(rng.integers(len(ks)))]
        size = int(rng.integers(1, k + 1))
        I = set(int(i) for i in rng.choice(k, size=size, replace=False))
        if len(out) % 2 == 0 and p > 2:
            j0 = (q - 1) // 2 % k
            I |= {(i + j0) % k for i in I}
        out.append(make_spec(p, f, k, sorted(I), "random", {"seed": seed}))
    return out


def c11_cross_method(count: int = 50, seed: int = 0) -> tuple[bool, str]:
    mismatches = []
    brute_n = 0
    srg_n = 0
    for spec in random_specs(count, seed):
        table = spec_table(spec)
        a = char_profile(None, spec, table)
        b = char_profile_via_gauss(None, spec, table)
        if a != b:
            mismatches.append(f"profile {spec.p}^{spec.f} k={spec.k} I={spec.I}")
        if spec.q <= BRUTE_CAP:
            brute_n += 1
            v = verify_srg(spec, table, brute=False)
            srg_n += v.kind == "srg"
            bf = brute_force_adjacency(spec)
            if _srg_tuple(v) != (bf.as_tuple() if bf else None):
                mismatches.append(f"brute {spec.p}^{spec.f} k={spec.k} I={spec.I}")
    detail = (
        f"{count} profile pairs, {brute_n} brute-force comparisons ({srg_n} SRGs), "
        f"{len(mismatches)} mismatches"
    )
    if mismatches:
        detail += ": " + ", ".join(mismatches[:5])
    return not mismatches, detail


@dataclass(frozen=True)
class Criterion:
    number: str
    title: str
    run: Callable[[], tuple[bool, str]]
    limit_s: float
    heavy: bool = False


CRITERIA: tuple[Criterion, ...] = (
    Criterion("1", "Paley graphs", c1_paley, 1.0),
    Criterion("2", "sporadic No. 1 (243, 22, 1, 2)", c2_table1_no1, 1.0),
    Criterion("3", "sporadic No. 3 over 3^12", c3_table1_no3, 15.0),
    Criterion("4a", "sporadic No. 2 over 5^9", c4a_table1_no2, 60.0, heavy=True),
    Criterion("4b", "sporadic No. 5 over 11^7", c4b_table1_no5, 480.0, heavy=True),
    Criterion("5", "lifted family over 2^21 and its predicted eigenvalues", c5_lifted_family, 180.0),
    Criterion("6", "two-prime family k=45 over 2^12", c6_two_prime_family, 5.0),
    Criterion("7", "relative Gauss sums equal 1; Yamamoto identity", c7_relative_rational, 240.0),
    Criterion("8", "sign corollary for (5,6,18) and (11,6,18)", c8_sign_corollary, 30.0),
    Criterion("9", "skew Hadamard and Paley type sets", c9_skew_hadamard, 120.0),
    Criterion("10", "Gauss sum identity suite, q <= 2^16", c10_identities, 120.0),
    Criterion("11", "cross-method oracle on random specs", c11_cross_method, 120.0),
)


@dataclass(frozen=True)
class CriterionResult:
    number: str
    title: str
    ok: bool
    detail: str
    elapsed_s: float
    limit_s: float

    @property
    def in_time(self) -> bool:
        return self.elapsed_s <= self.limit_s

    @property
    def passed(self) -> bool:
        return self.ok and self.in_time

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        slow = "" if self.in_time else " (over time limit)"
        return (
            f"[{tag}] criterion {self.number}: {self.title}: {self.detail} "
            f"[{self.elapsed_s:.2f} s / {self.limit_s:g} s{slow}]"
        )


def run_criterion(c: Criterion, fn: Callable[[], tuple[bool, str]] | None = None) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, detail = (fn or c.run)()
    except Exception as exc:  # a crash is a failure of the criterion, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(c.number, c.title, ok, detail, time.perf_counter() - t0, c.limit_s)


def run_selftest(level: str, emit: Callable[[str], None] | None = print) -> list[CriterionResult]:
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    results = []
    for c in CRITERIA:
        fn = None
        if level == "quick":
            if c.heavy:
                continue
            if c.number == "10":
                fn = lambda: c10_identities(qmax=1 << 12)  # noqa: E731
        r = run_criterion(c, fn)
        if emit:
            emit(r.line())
        results.append(r)
    return results
