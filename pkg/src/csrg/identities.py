"""Identity suite for Gauss sums over all small fields.

For every field F_q with q <= qmax and every character whose order d divides
q-1 with d <= kmax, the suite checks

    norm        G(chi) conj(G(chi)) = q for chi nontrivial
    frobenius   G(chi^p) = G(chi)
    inverse     G(chi^-1) = chi(-1) conj(G(chi))
    trivial     G(1) = -1
    dh_lift     G_fs(chi o N) = (-1)^(s-1) G_f(chi)^s, s in {2, 3}, q^s <= qmax
    dh_product  G(chi) chi^l(l) prod G(chi eta^i) = G(chi^l) prod G(eta^i), l in {2, 3}
    quadratic   G(eta) against the closed form (-1)^(f-1) g^f
    semiprim    G(chi) against the semi-primitive closed form
    digit_sum   s_p(a) (q-1) = (p-1) sum_i (p^i a mod q-1) on random a

Fields with p <= exact_p_max, and all fields of degree f >= 3, are done
literally in Z[zeta_dp].  For the rest (p odd and large, f <= 2) the
conductors are too big for that, and each identity is instead reduced to an
exact statement about the trace sequence T(a) = Tr(gamma^a), or certified
numerically:

* frobenius, inverse and trivial follow from T(pa) = T(a), T(a + (q-1)/2) = -T(a)
  and the histogram of T, all of which are exact integer checks on T.
* quadratic for f = 1 follows from (T(a) | p) = (-1)^a, again exact.  For f = 2,
  and for the semi-primitive closed forms, the character is trivial on F_p^*, so
  G(chi) collapses to an element of Z[zeta_d] computed exactly from the counts.
* norm and dh_product have the shape P = 0 with P in Z[zeta_n].  T(a + m) = g0 T(a)
  (m = (q-1)/(p-1), g0 = gamma^m) is checked exactly; it says that sigma_(1,b)
  multiplies every G(chi) by chi^-1(b), so every conjugate of P is a unit times
  the same expression at chi^a.  A folded FFT evaluates that expression for
  every character whose order divides L = gcd(q-1, 6 lcm(1..kmax)), a
  Galois-stable set containing every order in play.  If each value is below 1
  in absolute value after adding a rounding bound (the textbook estimate with
  a large safety factor), then |Norm(P)| < 1, and Norm(P) is an integer, so
  P = 0.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from math import gcd, lcm, log2

import numpy as np

from .cycint import CycInt
from .gauss import (
    _order_character_exponent,
    TraceCountTable,
    gauss_conductor,
    gauss_sum_exact,
    quadratic_gauss_closed,
    semiprimitive_gauss_closed,
)
from .gf import FieldSpec, build_field, is_prime, power_traces, subfield_embed
from .residue import divisors, semiprimitive_exponent

_EPS = float(np.finfo(np.float64).eps)
# safety factor over the textbook O(eps log n) FFT error estimate, which also
# covers the Bluestein path used for awkward lengths
_FFT_SAFETY = 1000.0


@dataclass
class IdentityReport:
    qmax: int
    kmax: int
    fields: int = 0
    exact_fields: int = 0
    certified_fields: int = 0
    checks: Counter = field(default_factory=Counter)
    failures: list[str] = field(default_factory=list)
    max_deviation: float = 0.0  # largest observed |value| in certified checks
    max_bound: float = 0.0  # largest rounding bound used there
    elapsed_s: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, what: str) -> None:
        self.failures.append(what)

    def summary(self) -> str:
        parts = ", ".join(f"{k}={v}" for k, v in sorted(self.checks.items()))
        return (
            f"{self.fields} fields ({self.exact_fields} exact, {self.certified_fields} certified), "
            f"{parts}; failures={len(self.failures)}; "
            f"certified margin {self.max_deviation + self.max_bound:.2e} < 1"
        )


def small_fields(qmax: int) -> list[tuple[int, int]]:
    """All (p, f) with 2 <= p^f <= qmax, ordered by q."""
    out = []
    for p in range(2, qmax + 1):
        if not is_prime(p):
            continue
        q, f = p, 1
        while q <= qmax:
            out.append((p, f))
            q *= p
            f += 1
    out.sort(key=lambda pf: pf[0] ** pf[1])
    return out


def counts_from_traces(T: np.ndarray, k: int, p: int) -> np.ndarray:
    """The (k, p) trace-count array from a full trace sequence."""
    a = np.arange(T.size, dtype=np.int64)
    return np.bincount((a % k) * p + T, minlength=k * p).reshape(k, p)


def _orders(q: int, kmax: int) -> list[int]:
    return [d for d in divisors(q - 1) if d <= kmax]


def _primitive(d: int) -> list[int]:
    return [u for u in range(d) if gcd(u, d) == 1] if d > 1 else [0]


class _Sums:
    """Exact Gauss sums of one field, tables built on demand per modulus."""

    def __init__(self, F: FieldSpec):
        self.F = F
        self.p, self.f = F.p, F.f
        self.T = power_traces(F)
        self._tables: dict[int, TraceCountTable] = {}
        self._vals: dict[tuple[int, int], CycInt] = {}

    def table(self, k: int) -> TraceCountTable:
        if k not in self._tables:
            t = TraceCountTable(self.p, self.f, k, counts_from_traces(self.T, k, self.p))
            t.check()
            self._tables[k] = t
        return self._tables[k]

    def G(self, k: int, u: int) -> CycInt:
        key = (k, u % k)
        if key not in self._vals:
            self._vals[key] = gauss_sum_exact(self.table(k), u).value
        return self._vals[key]


def _digit_sums(a: np.ndarray, p: int) -> np.ndarray:
    s = np.zeros_like(a)
    a = a.copy()
    while a.any():
        s += a % p
        a //= p
    return s


def check_digit_sums(p: int, f: int, samples: int, rng: np.random.Generator, rep: IdentityReport) -> None:
    N = p**f - 1
    if N < 1:
        return
    a = rng.integers(0, N, size=samples, dtype=np.int64)
    rhs = np.zeros_like(a)
    r = a.copy()
    for _ in range(f):
        rhs += r
        r = r * p % N
    bad = np.nonzero(_digit_sums(a, p) * N != (p - 1) * rhs)[0]
    rep.checks["digit_sum"] += samples
    for i in bad[:5]:
        rep.fail(f"digit_sum p={p} f={f} a={int(a[i])}")


def _exact_field(p: int, f: int, kmax: int, rep: IdentityReport) -> None:
    q = p**f
    S = _Sums(build_field(p, f))
    j0 = (q - 1) // 2 if p > 2 else 0
    for d in _orders(q, kmax):
        n = gauss_conductor(p, d)
        for u in _primitive(d):
            G = S.G(d, u)
            tag = f"q={q} d={d} u={u}"
            if d == 1:
                rep.checks["trivial"] += 1
                if G != -1:
                    rep.fail(f"trivial {tag}")
                continue
            rep.checks["norm"] += 1
            if G * G.conj() != q:
                rep.fail(f"norm {tag}")
            rep.checks["frobenius"] += 1
            if S.G(d, p * u) != G:
                rep.fail(f"frobenius {tag}")
            rep.checks["inverse"] += 1
            sign = CycInt.zeta(n, (u * j0 % d) * (n // d))
            if S.G(d, -u) != sign * G.conj():
                rep.fail(f"inverse {tag}")
            if d == 2:
                rep.checks["quadratic"] += 1
                if G != quadratic_gauss_closed(p, f):
                    rep.fail(f"quadratic {tag}")
            else:
                s = semiprimitive_exponent(p, d)
                if s is not None and f % (2 * s) == 0:
                    rep.checks["semiprim"] += 1
                    if G != semiprimitive_gauss_closed(p, d, f):
                        rep.fail(f"semiprim {tag}")
            for ell in (2, 3):
                if (q - 1) % ell:
                    continue
                _exact_dh_product(S, q, d, u, ell, rep)


def _exact_dh_product(S: _Sums, q: int, d: int, u: int, ell: int, rep: IdentityReport) -> None:
    K = d * ell // gcd(d, ell)
    v = u * (K // d) % K
    if v * ell % K == 0:
        return
    e = K // ell
    n = gauss_conductor(S.p, K)
    a_ell = _order_character_exponent(S.F, ell)
    lhs = S.G(K, v) * CycInt.zeta(n, (v * ell * a_ell % K) * (n // K))
    rhs = S.G(K, v * ell)
    for i in range(1, ell):
        lhs = lhs * S.G(K, v + i * e)
        rhs = rhs * S.G(K, i * e)
    rep.checks["dh_product"] += 1
    if lhs != rhs:
        rep.fail(f"dh_product q={q} d={d} u={u} l={ell}")


def check_dh_lifts(qmax: int, kmax: int, rep: IdentityReport) -> None:
    for p, f in small_fields(qmax):
        q = p**f
        for s in (2, 3):
            if q**s > qmax:
                continue
            big = build_field(p, f * s)
            sub = subfield_embed(big, f).sub  # gamma_sub = Norm(gamma_big)
            B = _Sums(big)
            A = _Sums(sub)
            for d in _orders(q, kmax):
                if d == 1:
                    continue
                for u in _primitive(d):
                    rhs = A.G(d, u) ** s
                    if s % 2 == 0:
                        rhs = -rhs
                    rep.checks["dh_lift"] += 1
                    if B.G(d, u) != rhs:
                        rep.fail(f"dh_lift p={p} f={f} s={s} d={d} u={u}")


def _is_square_mask(p: int) -> np.ndarray:
    """mask[x] is True exactly for the nonzero squares x of F_p."""
    mask = np.zeros(p, dtype=bool)
    x = np.arange(1, p, dtype=np.int64)
    mask[x * x % p] = True
    return mask


def _pairwise_rows(x: np.ndarray) -> np.ndarray:
    """Sum over axis 0 by an explicit halving tree (error grows with log2 of the rows)."""
    while x.shape[0] > 1:
        h = x.shape[0] // 2
        y = x[:h] + x[h : 2 * h]
        if x.shape[0] % 2:
            y[0] += x[-1]
        x = y
    return x[0]


def _dft_bound(N: int, L: int) -> float:
    """Bound on |computed - exact| for each output of the folded DFT.

    N unit-modulus inputs (each rounded to within 2 eps) are folded into L
    class sums by a halving tree of depth <= log2(N/L) + 1, then transformed
    by an FFT of length L.
    """
    depth = log2(max(N // L, 1)) + 2
    return N * _EPS * (2.0 + 1.5 * depth + _FFT_SAFETY * (log2(max(L, 2)) + 1))


def _prod_bound(M: float, err: float, n: int) -> float:
    """|prod x_j - prod y_j| for n factors with |y_j| <= M and |x_j - y_j| <= err."""
    # prod(|y_j| + err) - prod |y_j| is increasing in every |y_j|
    return (M + err) ** n - M**n


def _restricted_sum(counts: np.ndarray, d: int, u: int) -> CycInt | None:
    """G(chi^u) in Z[zeta_d] when chi^u is trivial on F_p^*, else None.

    Then counts[i][t] does not depend on t != 0, and summing zeta_p^t over
    t != 0 gives -1, so G = sum_i zeta_d^(u i) (counts[i][0] - counts[i][1]).
    """
    if not (counts[:, 1:] == counts[:, 1:2]).all():
        return None
    w = counts[:, 0] - counts[:, 1]
    idx = u * np.arange(d, dtype=np.int64) % d
    return CycInt(d, np.bincount(idx, weights=w.astype(np.float64), minlength=d).round().astype(np.int64))


def _certified_field(p: int, f: int, kmax: int, rep: IdentityReport) -> None:
    """Field F_q, p odd, with conductors too large for literal evaluation."""
    F = build_field(p, f)
    q = F.q
    N = q - 1
    m = N // (p - 1)
    T = power_traces(F)
    a = np.arange(N, dtype=np.int64)
    tag = f"q={q}"
    orders = _orders(q, kmax)
    nchar = sum(len(_primitive(d)) for d in orders) - 1

    # exact trace-sequence conditions
    rep.checks["trivial"] += 1
    hist = np.bincount(T, minlength=p)
    if not (hist[1:] - hist[0] == 1).all():
        rep.fail(f"trivial {tag}")
    rep.checks["frobenius"] += nchar
    if f > 1 and not np.array_equal(T[np.arange(N, dtype=np.int64) * p % N], T):
        rep.fail(f"frobenius {tag}")
    rep.checks["inverse"] += nchar
    if not np.array_equal(np.roll(T, -(N // 2)), (p - T) % p):
        rep.fail(f"inverse {tag}")
    g0 = F.prime_generator
    if not np.array_equal(np.roll(T, -m), g0 * T % p):
        rep.fail(f"galois equivariance {tag}")

    # closed forms
    for d in orders:
        if d == 1:
            continue
        if d == 2:
            rep.checks["quadratic"] += 1
            if f == 1:
                # the closed form is g itself: (T(a) | p) = (-1)^a
                sq = _is_square_mask(p)[T]
                good = bool(sq[::2].all()) and not sq[1::2].any()
            else:
                G = _restricted_sum(counts_from_traces(T, 2, p), 2, 1)
                good = G is not None and G == quadratic_gauss_closed(p, f)
            if not good:
                rep.fail(f"quadratic {tag}")
            continue
        s = semiprimitive_exponent(p, d)
        if s is None or f % (2 * s):
            continue
        counts = counts_from_traces(T, d, p)
        closed = semiprimitive_gauss_closed(p, d, f)
        for u in _primitive(d):
            rep.checks["semiprim"] += 1
            G = _restricted_sum(counts, d, u)
            if G is None or G != closed:
                rep.fail(f"semiprim {tag} d={d} u={u}")

    # Certified evaluation of G(chi_v), chi_v(gamma) = exp(2 pi i v / N), for
    # every v that is a multiple of N / L.  That set of characters contains all
    # orders d <= kmax and lcm(d, l), and it is closed under the Galois action.
    L = gcd(N, 6 * lcm(*range(1, kmax + 1)))  # all d <= kmax and lcm(d, l) divide it
    zeta_p = np.exp(2j * np.pi * np.arange(p) / p)
    S = _pairwise_rows(zeta_p[T].reshape(N // L, L))  # class sums over a = i (mod L)
    G = np.fft.ifft(S) * L  # G[j] = G(chi_(j N / L))
    err = _dft_bound(N, L)
    M = float(np.abs(G).max())
    dev = float(np.abs(G.real[1:] ** 2 + G.imag[1:] ** 2 - q).max())
    bound = (2 * M + err) * err
    rep.checks["norm"] += nchar
    _certify(rep, dev, bound, f"norm {tag}")

    roots = np.exp(2j * np.pi * np.arange(L) / L)
    for ell in (2, 3):
        if N % ell:
            continue
        e = L // ell
        # chi_v^l(l) = exp(2 pi i v c / N) with c = l log(l), v = j N / L
        c = ell * (int(np.flatnonzero(T == ell)[0]) if f == 1 else _order_character_exponent(F, ell)) % N
        j = np.arange(L, dtype=np.int64)
        lhs = roots[j * (c % L) % L] * G
        for i in range(1, ell):
            lhs *= np.roll(G, -i * e)
        rhs = np.tile(G[::ell], ell)  # G(chi_v^l)
        for i in range(1, ell):
            rhs = rhs * G[i * e]
        diff = np.abs(lhs - rhs)
        diff[::e] = 0  # v l = 0 (mod N): chi^l trivial, not covered
        # the unit is good to a few eps, scaled by the size of the product
        bound = _prod_bound(M, err, ell) * 2 + 8 * _EPS * (M + err) ** ell
        # counted per character of order d <= kmax, as in the exact tier
        rep.checks["dh_product"] += sum(len(_primitive(d)) for d in orders if d not in (1, ell))
        _certify(rep, float(diff.max()), bound, f"dh_product {tag} l={ell}")


def _certify(rep: IdentityReport, dev: float, bound: float, what: str) -> None:
    rep.max_deviation = max(rep.max_deviation, dev)
    rep.max_bound = max(rep.max_bound, bound)
    if dev + bound >= 1:
        rep.fail(f"{what} (certified margin {dev + bound:.3g})")


def run_identity_suite(
    qmax: int = 1 << 16,
    kmax: int = 64,
    *,
    exact_p_max: int = 61,
    digit_samples: int = 1000,
    seed: int = 0,
) -> IdentityReport:
    """Run every identity on every field with q <= qmax; see the module docstring."""
    t0 = time.perf_counter()
    rep = IdentityReport(qmax, kmax)
    rng = np.random.default_rng(seed)
    for p, f in small_fields(qmax):
        rep.fields += 1
        if p <= exact_p_max or f > 2:
            rep.exact_fields += 1
            _exact_field(p, f, kmax, rep)
        else:
            rep.certified_fields += 1
            _certified_field(p, f, kmax, rep)
        check_digit_sums(p, f, digit_samples, rng, rep)
    check_dh_lifts(qmax, kmax, rep)
    rep.elapsed_s = time.perf_counter() - t0
    return rep
