"""Relative Gauss sums.

For k' = k p1 and characters chi' of order k' on F_{p^f'} and chi of order k on
F_{p^f} with chi the restriction of chi', the relative Gauss sum is

    theta = G_f'(chi') / (p^((f'-f)/2) G_f(chi)),

a root of unity.  Compatibility of the two characters is structural: the big
field is built first, the subfield's primitive element is gamma'^N with
N = (q'-1)/(q-1), and chi'(gamma') = zeta_k'^c with c chosen so that
chi'(gamma'^N) = zeta_k.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd

import numpy as np

from .cycint import CycInt
from .errors import (
    BadParameters,
    DegenerateCharacter,
    IncompatibleCharacters,
    IndexUnstable,
    NotADivisor,
    NotCoprime,
    NotPrime,
    TooLarge,
    TrivialRestriction,
)
from .gauss import build_trace_counts, gauss_sum_exact
from .gf import (
    VERIFY_CAP,
    _geometric_rows,
    _matmul_mod,
    _float_safe,
    build_field,
    dlog,
    is_prime,
    power_vectors,
    subfield_embed,
)
from .residue import euler_phi, index_of, multiplicative_order, prime_factors

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Classification:
    """PlusOne, MinusOne, RootOfUnity (with order and exponent) or Other."""

    kind: str
    order: int | None = None
    exponent: int | None = None

    def __str__(self) -> str:
        if self.kind == "RootOfUnity":
            return f"RootOfUnity({self.order}, {self.exponent})"
        return self.kind


def classify(theta: CycInt) -> Classification:
    r = theta.detect_rational()
    if r == 1:
        return Classification("PlusOne")
    if r == -1:
        return Classification("MinusOne")
    ru = theta.classify_root_of_unity()
    if ru is not None:
        return Classification("RootOfUnity", ru[0], ru[1])
    return Classification("Other")


@dataclass(frozen=True, eq=False)
class RelativeGaussResult:
    p: int
    k: int
    p1: int
    u: int
    k_prime: int
    f: int
    f_prime: int
    u_prime: int  # exponent of the big-field character, w.r.t. chi'(gamma') = zeta_k'
    theta: CycInt
    classification: Classification
    predicted_epsilon: int | None  # None means the sign statements do not apply

    @property
    def matches_prediction(self) -> bool | None:
        if self.predicted_epsilon is None:
            return None
        return self.theta == self.predicted_epsilon


@dataclass(frozen=True)
class _Setup:
    p: int
    k: int
    p1: int
    k_prime: int
    f: int
    f_prime: int
    e: int
    c: int  # chi'(gamma') = zeta_k'^c


def _setup(p: int, k: int, p1: int, max_q: int | None = VERIFY_CAP) -> _Setup:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if not is_prime(p1):
        raise NotPrime(f"p1={p1} is not prime")
    if p1 == 2:
        raise BadParameters("p1 must be an odd prime")
    if k < 2:
        raise BadParameters("k must be >= 2")
    kp = k * p1
    if gcd(p, kp) != 1:
        raise NotCoprime(f"p={p} divides k'={kp}")
    e = index_of(p, k)
    if index_of(p, kp) != e:
        raise IndexUnstable(f"index of <{p}> is {e} mod {k} but {index_of(p, kp)} mod {kp}")
    f = multiplicative_order(p, k)
    fp = multiplicative_order(p, kp)
    if (fp - f) % 2:
        raise BadParameters(f"f'-f = {fp - f} is odd; the half power of p is not an integer")
    if max_q is not None and p**fp > max_q:
        raise TooLarge(f"p^f' = {p}^{fp} exceeds the evaluation cap {max_q}")
    N = (p**fp - 1) // (p**f - 1)
    c = next((c for c in range(1, kp) if gcd(c, kp) == 1 and c * N % kp == p1), None)
    if c is None:
        raise IncompatibleCharacters(f"no character of order {kp} restricts to one of order {k}")
    return _Setup(p, k, p1, kp, f, fp, e, c)


def _sign_exponents(p: int, kp: int, p1: int, e: int) -> tuple[int | None, int | None]:
    """(p-1)(p1-1)phi(h)/(4e) for h the odd radical of k' and for h times its 2-part."""
    h_odd = 1
    for r in prime_factors(kp):
        if r != 2:
            h_odd *= r
    two = 1
    m = kp
    while m % 2 == 0:
        m //= 2
        two *= 2
    out = []
    for h in (h_odd, h_odd * two):
        num = (p - 1) * (p1 - 1) * euler_phi(h)
        out.append(num // (4 * e) if num % (4 * e) == 0 else None)
    return out[0], out[1]


def predicted_sign(p: int, k: int, p1: int) -> int | None:
    """The sign the theorems predict for theta, or None when neither applies."""
    kp = k * p1
    if gcd(p, kp) != 1 or k < 2:
        return None
    e = index_of(p, k)
    if index_of(p, kp) != e:
        return None
    if kp % 2 and gcd(kp, p - 1) == 1:
        return 1
    if kp % 4 == 2 and k % 4 == 2 and gcd(kp // 2, p - 1) == 1 and gcd(k // 2, p - 1) == 1:
        a, b = _sign_exponents(p, kp, p1, e)
        if a is None or b is None:
            return None
        if (a - b) % 2:
            log.warning("sign exponent parity depends on the reading of h (%d vs %d)", a, b)
            return None
        return -1 if a % 2 else 1
    return None


def _predicted_for(s: _Setup, u: int) -> int | None:
    eps = predicted_sign(s.p, s.k, s.p1)
    if eps is None:
        return None
    if gcd(u, s.k_prime) == 1:
        return eps
    # non-unit exponents are covered only in the odd case, when p1^v does not divide u
    if s.k_prime % 2 and gcd(s.k_prime, s.p - 1) == 1:
        v = 0
        m = s.k
        while m % s.p1 == 0:
            m //= s.p1
            v += 1
        if u % s.p1**v:
            return 1
    return None


def relative_gauss(p: int, k: int, p1: int, u: int = 1, *, max_q: int = VERIFY_CAP) -> RelativeGaussResult:
    """theta for chi'^(c u) on F_{p^f'} over chi^u on F_{p^f}, computed exactly."""
    s = _setup(p, k, p1, max_q)
    if u % k == 0:
        raise DegenerateCharacter(f"chi^{u} is trivial")
    big = build_field(p, s.f_prime)
    sub = subfield_embed(big, s.f).sub
    up = s.c * u % s.k_prime
    G_big = gauss_sum_exact(build_trace_counts(big, s.k_prime, max_q=max_q), up).value
    G_sub = gauss_sum_exact(build_trace_counts(sub, s.k, max_q=max_q), u % k).value
    G_sub = G_sub.lift(G_big.conductor)
    half = (s.f_prime - s.f) // 2
    theta = (G_big * G_sub.conj()).exact_div(p ** (s.f + half))
    return RelativeGaussResult(
        p=p,
        k=k,
        p1=p1,
        u=u,
        k_prime=s.k_prime,
        f=s.f,
        f_prime=s.f_prime,
        u_prime=up,
        theta=theta,
        classification=classify(theta),
        predicted_epsilon=_predicted_for(s, u),
    )


def restriction_compatible(p: int, k: int, p1: int, samples: int = 100, seed: int = 0) -> bool:
    """Check chi'(x) = chi(x) on sampled subfield elements x."""
    s = _setup(p, k, p1)
    big = build_field(p, s.f_prime)
    emb = subfield_embed(big, s.f)
    sub = emb.sub
    rng = np.random.default_rng(seed)
    for b in rng.integers(0, sub.q - 1, size=samples):
        x = sub.gen ** int(b)
        a = dlog(emb(x))
        # chi'(gamma'^a) = zeta_k'^(c a); chi(gamma^b) = zeta_k^b = zeta_k'^(p1 b)
        if (s.c * a - s.p1 * int(b)) % s.k_prime:
            return False
    return True


def _relative_trace_matrix(big, f: int) -> np.ndarray:
    """Matrix R with (coords of x) @ R = coords of Tr_{q'/q}(x)."""
    q0 = big.p**f
    rows = []
    for i in range(big.f):
        x = big.element([1 if j == i else 0 for j in range(big.f)])
        acc = big.zero
        y = x
        for _ in range(big.f // f):
            acc = acc + y
            y = y**q0
        rows.append(acc.coeffs)
    return np.array(rows, dtype=np.int64)


def yamamoto_sum(p: int, f: int, f_prime: int, u: int, order: int | None = None) -> CycInt:
    """Sum of chi'(x) over x in F_{p^f'} with relative trace 1 down to F_{p^f}.

    chi'(gamma') = zeta_order^u, with order defaulting to q'-1.  The trace-1
    elements are one representative per coset of F_{q'}^*/F_q^* with nonzero
    trace.  The value lies in Z[zeta_order].
    """
    if f < 1 or f_prime % f:
        raise NotADivisor(f"{f} does not divide {f_prime}")
    big = build_field(p, f_prime)
    if big.q > VERIFY_CAP:
        raise TooLarge(f"q' = {big.q} exceeds 2^24")
    Q = big.q - 1
    if order is None:
        order = Q
    if Q % order:
        raise NotADivisor(f"{order} does not divide {Q}")
    q = p**f
    N = Q // (q - 1)
    if u * N % order == 0:
        raise TrivialRestriction("the restriction of chi' to the subfield is trivial")
    fast = _float_safe(big)
    weights = p ** np.arange(big.f, dtype=np.int64)
    # codes of gamma'^(N b), b < q-1, for logs in the subfield
    sub_codes = _geometric_rows(big, big.one, big.gen**N, q - 1) @ weights
    sort = np.argsort(sub_codes)
    sorted_codes = sub_codes[sort]
    R = _relative_trace_matrix(big, f)
    V = power_vectors(big, 0, N)
    tr_codes = _matmul_mod(V, R, p, fast) @ weights
    keep = tr_codes != 0
    a = np.arange(N, dtype=np.int64)[keep]
    b = sort[np.searchsorted(sorted_codes, tr_codes[keep])]
    # x / Tr(x) has trace 1 and chi'(x / Tr(x)) = zeta^(u (a - N b))
    expo = (u % order) * ((a - (N % order) * b) % order) % order
    return CycInt(order, np.bincount(expo, minlength=order).astype(np.int64))


def root_order_bound(p: int, k_prime: int) -> int:
    g = gcd(k_prime, p - 1)
    return 2 * g if k_prime % 2 else g


def root_order_bound_check(result: RelativeGaussResult) -> bool:
    d = root_order_bound(result.p, result.k_prime)
    return result.theta**d == 1


def conjugate_exponent_check(p: int, k: int, p1: int, t: int, *, max_q: int = VERIFY_CAP) -> bool:
    """theta(chi'^t, chi^t) = 1 for odd k' with gcd(k', p-1) = 1 and p1^s not dividing t."""
    kp = k * p1
    if kp % 2 == 0 or gcd(kp, p - 1) != 1:
        raise BadParameters("needs odd k' with gcd(k', p-1) = 1")
    s = 0
    m = k
    while m % p1 == 0:
        m //= p1
        s += 1
    if t % p1**s == 0:
        raise BadParameters(f"{p1}^{s} divides t={t}")
    return relative_gauss(p, k, p1, t, max_q=max_q).theta == 1


def yamamoto_identity_check(p: int, f: int, f_prime: int, u: int, order: int) -> bool:
    """G_f'(chi') = Y G_f(chi) with chi the restriction of chi' and Y the trace-1 sum."""
    big = build_field(p, f_prime)
    sub = subfield_embed(big, f).sub  # gamma_sub = gamma'^N
    N = (big.q - 1) // (sub.q - 1)
    d = order // gcd(order, u * N)  # order of the restriction
    # chi(gamma_sub) = zeta_order^(u N) = zeta_d^(u N d / order)
    u_sub = u * N * d // order % d
    Y = yamamoto_sum(p, f, f_prime, u, order)
    G_big = gauss_sum_exact(build_trace_counts(big, order), u).value
    G_sub = gauss_sum_exact(build_trace_counts(sub, d), u_sub).value
    n = G_big.conductor
    return G_big == Y.lift(n) * G_sub.lift(n)
