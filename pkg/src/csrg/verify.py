"""Deciding strong regularity and difference-set properties of cyclotomic connection sets.

The restricted eigenvalues of Cay(F_q, D) are psi(gamma^a D), and these depend
only on a mod k.  One trace-count table gives all k of them exactly.  Small
fields are additionally checked by counting differences directly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import gcd, isqrt

import numpy as np

from .construct import ConnectionSpec
from .cycint import CycInt
from .errors import BadResidue, EvenField, NonIntegralPrediction, TooLarge
from .gauss import TraceCountTable, build_trace_counts, gauss_sum_exact, quadratic_gauss_prime
from .gf import VERIFY_CAP, FieldSpec, build_field, power_codes
from .residue import euler_phi

BRUTE_CAP = 4096


@dataclass(frozen=True, eq=False)
class CharProfile:
    values: tuple[CycInt, ...]  # psi(gamma^a D), a = 0..k-1
    size: int  # |D|
    q: int

    def distinct(self) -> list[CycInt]:
        out: list[CycInt] = []
        for v in self.values:
            if not any(v == w for w in out):
                out.append(v)
        return out

    def __eq__(self, other):
        if not isinstance(other, CharProfile):
            return NotImplemented
        return (
            self.size == other.size
            and self.q == other.q
            and len(self.values) == len(other.values)
            and all(a == b for a, b in zip(self.values, other.values))
        )

    __hash__ = None


@dataclass(frozen=True)
class SrgParams:
    v: int
    degree: int
    lam: int
    mu: int
    r: int | CycInt | None = field(default=None, compare=False)
    s: int | CycInt | None = field(default=None, compare=False)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.degree, self.lam, self.mu)

    def to_json(self) -> dict:
        def enc(x):
            if x is None or isinstance(x, int):
                return x
            return x.to_text()

        return {
            "v": self.v,
            "k": self.degree,
            "lambda": self.lam,
            "mu": self.mu,
            "r": enc(self.r),
            "s": enc(self.s),
        }


@dataclass(frozen=True, eq=False)
class Verdict:
    kind: str  # srg | skew_hadamard | paley_pds | none
    params: SrgParams | None = None
    profile: CharProfile | None = None
    method: str = "charsum"  # charsum | brute | both
    reason: str = ""
    elapsed_ms: float | None = None

    @property
    def confirmed(self) -> bool:
        return self.kind != "none"

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "kind": self.kind,
            "params": self.params.to_json() if self.params else None,
            "profile": [v.to_text() for v in self.profile.values] if self.profile else [],
            "method": self.method,
        }
        if self.reason:
            out["reason"] = self.reason
        if timing and self.elapsed_ms is not None:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


# ---------------------------------------------------------------------------
# profiles


def _cap_for(spec: ConnectionSpec, max_q: int | None) -> int:
    if max_q is not None:
        return max_q
    return max(VERIFY_CAP, int(spec.meta.get("cap", 0)))


def spec_table(
    spec: ConnectionSpec,
    max_q: int | None = None,
    threads: int = 1,
    cache=None,
) -> TraceCountTable:
    """The trace-count table for the spec's field and k, through the cache when given."""
    cap = _cap_for(spec, max_q)
    if spec.symbolic and max_q is None:
        raise TooLarge(f"spec over {spec.p}^{spec.f} is symbolic; verification refused")
    if spec.exceeds(cap):
        raise TooLarge(f"q = {spec.p}^{spec.f} exceeds the cap {cap}")
    if cache is not None:
        return cache.get_or_build(spec.p, spec.f, spec.k, threads=threads, max_q=cap)
    return build_trace_counts(build_field(spec.p, spec.f), spec.k, threads=threads, max_q=cap)


def _check_table(spec: ConnectionSpec, table: TraceCountTable) -> None:
    if (table.p, table.f, table.k) != (spec.p, spec.f, spec.k):
        raise ValueError("table does not belong to this spec")
    table.check()


def char_profile(field: FieldSpec | None, spec: ConnectionSpec, table: TraceCountTable | None = None) -> CharProfile:
    """psi(gamma^a D) = sum_{i in I} sum_t counts[(i+a) mod k][t] zeta_p^t, exactly."""
    if table is None:
        if field is None:
            table = spec_table(spec)
        else:
            table = build_trace_counts(field, spec.k, max_q=_cap_for(spec, None))
    _check_table(spec, table)
    c = table.counts
    acc = np.zeros_like(c)
    for i in spec.I:
        acc += np.roll(c, -i, axis=0)  # row a picks up counts[(a + i) mod k]
    values = tuple(CycInt.from_group_ring(spec.p, row) for row in acc)
    return CharProfile(values, spec.size, spec.q)


def char_profile_via_gauss(
    field: FieldSpec | None, spec: ConnectionSpec, table: TraceCountTable | None = None
) -> CharProfile:
    """The same profile through psi(aD) = (1/k) sum_u G(chi^-u) sum_{i in I} chi^u(a gamma^i)."""
    if table is None:
        if field is None:
            table = spec_table(spec)
        else:
            table = build_trace_counts(field, spec.k, max_q=_cap_for(spec, None))
    _check_table(spec, table)
    k = spec.k
    n = k if spec.p == 2 else k * spec.p
    step = n // k  # zeta_k = zeta_n^step
    # W_u = G(chi^-u) * sum_{i in I} zeta_k^(u i), as group-ring vectors over Z/n
    W = []
    for u in range(k):
        S = np.zeros(n, dtype=np.int64)
        for i in spec.I:
            S[(u * i % k) * step] += 1
        W.append((gauss_sum_exact(table, -u).value * CycInt.from_group_ring(n, S)).group_ring())
    values = []
    for a in range(k):
        total = np.zeros(n, dtype=W[0].dtype if all(w.dtype == W[0].dtype for w in W) else object)
        for u in range(k):
            total = total + np.roll(W[u], (u * a % k) * step)
        values.append(CycInt.from_group_ring(n, total).exact_div(k))
    return CharProfile(tuple(values), spec.size, spec.q)


# ---------------------------------------------------------------------------
# brute force


def _field_digits(spec: ConnectionSpec) -> tuple[np.ndarray, np.ndarray]:
    """(codes of gamma^a for a < q-1, membership bitmap of D indexed by code)."""
    F = build_field(spec.p, spec.f)
    codes = power_codes(F)
    cls = np.arange(spec.q - 1) % spec.k
    inD = np.zeros(spec.q, dtype=bool)
    inD[codes[np.isin(cls, spec.I)]] = True
    return codes, inD


def difference_counts(spec: ConnectionSpec) -> np.ndarray:
    """N[d] = #{(x, y) in D x D : x - y = d}, indexed by element code."""
    if spec.q > BRUTE_CAP:
        raise TooLarge(f"brute force is limited to q <= {BRUTE_CAP}")
    p, f = spec.p, spec.f
    _, inD = _field_digits(spec)
    D = np.flatnonzero(inD)
    w = p ** np.arange(f, dtype=np.int64)
    digits = (D[:, None] // w[None, :]) % p  # |D| x f
    N = np.zeros(spec.q, dtype=np.int64)
    for x in digits:
        diff = ((x[None, :] - digits) % p) @ w
        N += np.bincount(diff, minlength=spec.q)
    return N


def _negation_codes(p: int, f: int, q: int) -> np.ndarray:
    w = p ** np.arange(f, dtype=np.int64)
    allc = np.arange(q, dtype=np.int64)
    digits = (allc[:, None] // w[None, :]) % p
    return ((-digits) % p) @ w


def _srg_from_eigen_sum_product(degree: int, rs_sum: int, rs_prod: int) -> tuple[int, int]:
    """lambda = k + r + s + rs and mu = k + rs."""
    return degree + rs_sum + rs_prod, degree + rs_prod


def _int_sqrt_pair(lam: int, mu: int, degree: int):
    """Restricted eigenvalues (r, s) from lambda - mu and k - mu, as ints when rational."""
    b = lam - mu
    disc = b * b + 4 * (degree - mu)
    root = isqrt(disc) if disc >= 0 else None
    if root is not None and root * root == disc and (b + root) % 2 == 0:
        return (b + root) // 2, (b - root) // 2
    return None, None


def brute_force_adjacency(spec: ConnectionSpec) -> SrgParams | None:
    """SRG parameters from common-neighbour counts, or None if the graph is not strongly regular."""
    q = spec.q
    if q > BRUTE_CAP:
        raise TooLarge(f"brute force is limited to q <= {BRUTE_CAP}")
    _, inD = _field_digits(spec)
    neg = _negation_codes(spec.p, spec.f, q)
    if not np.array_equal(inD, inD[neg]):
        return None  # not an undirected graph
    degree = int(inD.sum())
    if degree in (0, q - 1):
        return None  # edgeless or complete
    # the common neighbours of x and y number N[x - y] by translation invariance
    N = difference_counts(spec)
    adj = N[1:][inD[1:]]
    non = N[1:][~inD[1:]]
    if adj.min() != adj.max() or non.min() != non.max():
        return None
    lam, mu = int(adj[0]), int(non[0])
    r, s = _int_sqrt_pair(lam, mu, degree)
    return SrgParams(q, degree, lam, mu, r, s)


# ---------------------------------------------------------------------------
# verdicts


def _neg_shift(spec: ConnectionSpec) -> int:
    """-1 = gamma^((q-1)/2), so -C_i = C_{i + j0}."""
    if spec.p == 2:
        return 0
    # (q-1)/2 mod k from q mod 2k, so huge symbolic fields cost nothing
    return (pow(spec.p, spec.f, 2 * spec.k) - 1) // 2 % spec.k


def _symmetric(spec: ConnectionSpec) -> bool:
    j0 = _neg_shift(spec)
    S = set(spec.I)
    return {(i + j0) % spec.k for i in S} == S


def _profile(spec, table, cross_check: bool) -> tuple[CharProfile, str]:
    prof = char_profile(None, spec, table)
    if cross_check:
        other = char_profile_via_gauss(None, spec, table)
        if other != prof:
            raise AssertionError("character profile and Gauss-sum expansion disagree")
    return prof, "charsum"


def _sort_real(values: list[CycInt]) -> list[CycInt]:
    return sorted(values, key=lambda v: -v.embed(1).real)


def verify_srg(
    spec: ConnectionSpec,
    table: TraceCountTable | None = None,
    *,
    cross_check: bool = False,
    brute: bool | None = None,
    max_q: int | None = None,
) -> Verdict:
    t0 = time.perf_counter()

    def done(kind, **kw):
        return Verdict(kind, elapsed_ms=(time.perf_counter() - t0) * 1e3, **kw)

    if len(spec.I) == spec.k:
        return done("none", reason="complete graph")
    if not _symmetric(spec):
        return done("none", reason="D is not symmetric (-D != D)")
    if table is None:
        table = spec_table(spec, max_q)
    prof, method = _profile(spec, table, cross_check)
    vals = prof.distinct()
    if len(vals) != 2:
        return done("none", profile=prof, reason=f"{len(vals)} distinct restricted eigenvalues")
    r, s = _sort_real(vals)
    rs_sum, rs_prod = (r + s).detect_rational(), (r * s).detect_rational()
    if rs_sum is None or rs_prod is None:
        return done("none", profile=prof, reason="eigenvalues are not roots of an integer quadratic")
    degree = spec.size
    lam, mu = _srg_from_eigen_sum_product(degree, rs_sum, rs_prod)
    if lam < 0 or mu < 0:
        return done("none", profile=prof, reason="negative lambda or mu")
    rr, ss = r.detect_rational(), s.detect_rational()
    params = SrgParams(spec.q, degree, lam, mu, rr if rr is not None else r, ss if ss is not None else s)
    if brute is None:
        brute = spec.q <= BRUTE_CAP
    if brute:
        bf = brute_force_adjacency(spec)
        if bf is None or bf.as_tuple() != params.as_tuple():
            raise AssertionError(f"brute force {bf} disagrees with character verdict {params}")
        method = "both"
    return done("srg", params=params, profile=prof, method=method)


def sqrt_signed_q(p: int, f: int, sign: int) -> CycInt | None:
    """A square root of sign * p^f in Z[zeta_p], or None when it does not lie there."""
    q = p**f
    if f % 2 == 0:
        if sign == 1:
            return CycInt.integer(p ** (f // 2), p)
        return None  # sqrt(-1) is not in Q(zeta_p) for odd p
    if p == 2:
        return None
    g = quadratic_gauss_prime(p)  # g^2 = (-1)^((p-1)/2) p
    pstar = 1 if p % 4 == 1 else -1
    if pstar != sign:
        return None
    root = g * p ** (f // 2)
    assert root * root == sign * q
    return root


def verify_skew_hadamard(
    spec: ConnectionSpec,
    table: TraceCountTable | None = None,
    *,
    cross_check: bool = False,
    brute: bool | None = None,
    max_q: int | None = None,
) -> Verdict:
    t0 = time.perf_counter()

    def done(kind, **kw):
        return Verdict(kind, elapsed_ms=(time.perf_counter() - t0) * 1e3, **kw)

    if spec.p == 2:
        raise EvenField("skew Hadamard difference sets need odd q")
    j0 = _neg_shift(spec)
    S = set(spec.I)
    if {(i + j0) % spec.k for i in S} & S:
        return done("none", reason="D and -D intersect")
    if 2 * len(spec.I) != spec.k:
        return done("none", reason="|D| != (q-1)/2")
    if pow(spec.p, spec.f, 4) == 1:
        return done("none", reason="-q is not a square in Z[zeta_p]; q = 1 mod 4")
    if table is None:
        table = spec_table(spec, max_q)
    q = spec.q
    root = sqrt_signed_q(spec.p, spec.f, -1)
    prof, method = _profile(spec, table, cross_check)
    for v in prof.distinct():
        x = 2 * v + 1
        if not (x == root or x == -root):
            return done("none", profile=prof, reason="a character value is not (-1 +- sqrt(-q))/2")
    if brute is None:
        brute = q <= BRUTE_CAP
    if brute:
        N = difference_counts(spec)
        if not (N[1:] == (q - 3) // 4).all():
            raise AssertionError("difference counts disagree with the character condition")
        method = "both"
    return done("skew_hadamard", profile=prof, method=method)


def verify_paley_pds(
    spec: ConnectionSpec,
    table: TraceCountTable | None = None,
    *,
    cross_check: bool = False,
    brute: bool | None = None,
    max_q: int | None = None,
) -> Verdict:
    t0 = time.perf_counter()

    def done(kind, **kw):
        return Verdict(kind, elapsed_ms=(time.perf_counter() - t0) * 1e3, **kw)

    if pow(spec.p, spec.f, 4) != 1:
        raise BadResidue(f"Paley type needs q = 1 mod 4, got q = {spec.p}^{spec.f}")
    if not _symmetric(spec):
        return done("none", reason="D is not symmetric (-D != D)")
    if 2 * len(spec.I) != spec.k:
        return done("none", reason="|D| != (q-1)/2")
    if table is None:
        table = spec_table(spec, max_q)
    q = spec.q
    root = sqrt_signed_q(spec.p, spec.f, 1)
    assert root is not None
    prof, method = _profile(spec, table, cross_check)
    for v in prof.distinct():
        x = 2 * v + 1
        if not (x == root or x == -root):
            return done("none", profile=prof, reason="a character value is not (-1 +- sqrt(q))/2")
    params = SrgParams(q, (q - 1) // 2, (q - 5) // 4, (q - 1) // 4)
    if brute is None:
        brute = q <= BRUTE_CAP
    if brute:
        bf = brute_force_adjacency(spec)
        if bf is None or bf.as_tuple() != params.as_tuple():
            raise AssertionError(f"brute force {bf} disagrees with the Paley-type verdict")
        method = "both"
    rr = sqrt_signed_q(spec.p, spec.f, 1).detect_rational()
    if rr is not None:
        params = SrgParams(*params.as_tuple(), (rr - 1) // 2, (-rr - 1) // 2)
    return done("paley_pds", params=params, profile=prof, method=method)


# ---------------------------------------------------------------------------
# lifted eigenvalues


def predict_lifted_profile(values, size_I: int, k: int, p: int, p1: int, e: int, eps: int):
    """Two profile values after the index-set lift: eps P s + |I| (eps P - 1)/k, P = p^(phi(k)(p1-1)/(2e))."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    num = euler_phi(k) * (p1 - 1)
    if num % (2 * e):
        raise NonIntegralPrediction(f"phi(k)(p1-1)/(2e) = {num}/{2 * e} is not an integer")
    P = p ** (num // (2 * e))
    shift_num = size_I * (eps * P - 1)
    if shift_num % k:
        raise NonIntegralPrediction(f"|I|(eps P - 1) = {shift_num} is not divisible by k = {k}")
    shift = shift_num // k
    out = []
    for v in values:
        out.append(eps * P * v + shift)
    return tuple(out)


def lifted_prediction_matches(values, measured) -> bool:
    """Set equality of two small collections of ints or CycInts."""
    def norm(x):
        return x if isinstance(x, CycInt) else CycInt.integer(int(x))

    a = [norm(x) for x in values]
    b = [norm(x) for x in measured]
    return all(any(x == y for y in b) for x in a) and all(any(x == y for y in a) for x in b)
