"""Gauss sums over F_q as exact cyclotomic integers.

Everything is driven by a trace-count table: for a divisor k of q-1,
counts[i][t] is the number of exponents a in [0, q-1) with a = i (mod k) and
Tr(gamma^a) = t.  One pass over the field serves every character of order
dividing k, since with chi(gamma^a) = zeta_k^(u a)

    G(chi^u) = sum_i zeta_k^(u i) sum_t counts[i][t] zeta_p^t.
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path

import numpy as np

from .cycint import CycInt
from .errors import (
    BadDegree,
    CacheFormatError,
    DegenerateCharacter,
    NotADivisor,
    NotSemiprimitive,
    RangeError,
    TooLarge,
)
from .gf import VERIFY_CAP, FieldSpec, build_field, iter_trace_blocks, subfield_embed
from .residue import semiprimitive_exponent


@dataclass(frozen=True, eq=False)
class TraceCountTable:
    p: int
    f: int
    k: int
    counts: np.ndarray  # shape (k, p), int64

    @property
    def q(self) -> int:
        return self.p**self.f

    def check(self) -> None:
        """Assert the class-size invariants."""
        c = self.counts
        if c.shape != (self.k, self.p):
            raise ValueError(f"table shape {c.shape} != ({self.k}, {self.p})")
        if (c < 0).any():
            raise ValueError("negative count")
        rows = c.sum(axis=1)
        if int(rows.sum()) != self.q - 1:
            raise ValueError("counts do not sum to q-1")
        if not (rows == (self.q - 1) // self.k).all():
            raise ValueError("class sizes are not uniform")

    def fold(self, k2: int) -> "TraceCountTable":
        """The table for a divisor k2 of k, by merging residue classes."""
        if self.k % k2:
            raise NotADivisor(f"{k2} does not divide {self.k}")
        c = self.counts.reshape(self.k // k2, k2, self.p).sum(axis=0)
        return TraceCountTable(self.p, self.f, k2, c)

    def __eq__(self, other):
        if not isinstance(other, TraceCountTable):
            return NotImplemented
        return (self.p, self.f, self.k) == (other.p, other.f, other.k) and np.array_equal(
            self.counts, other.counts
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class GaussSumValue:
    value: CycInt
    p: int
    f: int
    k: int
    u: int


def _count_range(field: FieldSpec, k: int, start: int, count: int) -> np.ndarray:
    p = field.p
    out = np.zeros(k * p, dtype=np.int64)
    end = start + count
    for lo, T in iter_trace_blocks(field, start, count):
        rows, B = T.shape
        offs = (lo + B * np.arange(rows, dtype=np.int64)) % k
        cls = offs[:, None] + (np.arange(B, dtype=np.int64) % k)[None, :]
        cls %= k
        idx = (cls * p + T).ravel()
        valid = min(idx.size, end - lo)
        out += np.bincount(idx[:valid], minlength=k * p)
    return out.reshape(k, p)


def build_trace_counts(
    field: FieldSpec, k: int, threads: int = 1, max_q: int = VERIFY_CAP
) -> TraceCountTable:
    """One enumeration pass over gamma^a, bucketed by (a mod k, trace)."""
    q = field.q
    if k < 1 or (q - 1) % k:
        raise NotADivisor(f"{k} does not divide {q - 1}")
    if q > max_q:
        raise TooLarge(f"q={q} exceeds the enumeration cap {max_q}")
    n = q - 1
    threads = max(1, int(threads))
    if threads == 1 or n < (1 << 16):
        counts = _count_range(field, k, 0, n)
    else:
        bounds = [n * i // threads for i in range(threads + 1)]
        with ThreadPoolExecutor(threads) as ex:
            parts = list(
                ex.map(
                    lambda i: _count_range(field, k, bounds[i], bounds[i + 1] - bounds[i]),
                    range(threads),
                )
            )
        counts = sum(parts[1:], parts[0])
    table = TraceCountTable(field.p, field.f, k, counts)
    table.check()
    return table


def gauss_conductor(p: int, k: int) -> int:
    """Ring used for Gauss sums: Z[zeta_kp], or Z[zeta_k] when p = 2."""
    return k if p == 2 else k * p


def gauss_sum_exact(table: TraceCountTable, u: int) -> GaussSumValue:
    """G(chi^u) with chi(gamma) = zeta_k."""
    p, k = table.p, table.k
    c = table.counts
    u %= k
    if p == 2:
        n = k
        w = c[:, 0] - c[:, 1]
        idx = (u * np.arange(k, dtype=np.int64)) % n
        v = np.bincount(idx, weights=w.astype(np.float64), minlength=n)
    else:
        n = k * p
        i = np.arange(k, dtype=np.int64)[:, None]
        t = np.arange(p, dtype=np.int64)[None, :]
        idx = (u * i * p + t * k) % n
        v = np.bincount(idx.ravel(), weights=c.ravel().astype(np.float64), minlength=n)
    value = CycInt(n, np.rint(v).astype(np.int64))
    return GaussSumValue(value, p, table.f, k, u)


def legendre(x: int, p: int) -> int:
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def quadratic_gauss_prime(p: int) -> CycInt:
    """sum_{x=1}^{p-1} (x|p) zeta_p^x, the square root of (-1)^((p-1)/2) p."""
    v = np.array([legendre(x, p) for x in range(p)], dtype=np.int64)
    return CycInt(p, v)


def quadratic_gauss_closed(p: int, f: int) -> CycInt:
    """(-1)^(f-1) g^f with g the quadratic Gauss sum of F_p."""
    if p == 2:
        raise ValueError("p must be odd")
    g = quadratic_gauss_prime(p)
    sq = p if p % 4 == 1 else -p  # g^2
    if f % 2:
        val = g * sq ** (f // 2)
    else:
        val = CycInt.integer(sq ** (f // 2), p)
    return val if f % 2 else -val


def semiprimitive_gauss_closed(p: int, k: int, f: int) -> int:
    """Closed form of G_f(chi) for chi of order k when p is semi-primitive mod k."""
    if k <= 2:
        raise ValueError("closed form needs k > 2")
    s = semiprimitive_exponent(p, k)
    if s is None:
        raise NotSemiprimitive(f"{p} is not semi-primitive modulo {k}")
    if f % (2 * s):
        raise BadDegree(f"2s = {2 * s} does not divide f = {f}")
    t = f // (2 * s)
    mag = p ** (f // 2)
    if p == 2:
        sign = (-1) ** (t - 1)
    else:
        sign = (-1) ** (t - 1 + (p**s + 1) * t // k)
    return sign * mag


def _order_character_exponent(field: FieldSpec, x_in_prime_field: int) -> int:
    """log_gamma of the prime-field element x (x != 0 mod p)."""
    p, q = field.p, field.q
    x = x_in_prime_field % p
    if x == 0:
        raise ValueError("zero has no logarithm")
    if p == 2:
        return 0
    g0 = field.prime_generator
    m, y = 0, 1
    while y != x:
        y = y * g0 % p
        m += 1
    return m * ((q - 1) // (p - 1))


def dh_lift_check(p: int, f: int, k: int, u: int, s: int) -> bool:
    """Davenport-Hasse lifting: G_fs(chi') = (-1)^(s-1) G_f(chi)^s."""
    if s < 1:
        raise ValueError("lift degree must be >= 1")
    q = p**f
    if (q - 1) % k:
        raise NotADivisor(f"{k} does not divide {q - 1}")
    if s == 1:
        return True
    big = build_field(p, f * s)
    sub = subfield_embed(big, f).sub  # its gamma is the norm of big.gamma
    base = gauss_sum_exact(build_trace_counts(sub, k), u).value
    lifted = gauss_sum_exact(build_trace_counts(big, k), u).value
    rhs = base**s
    if s % 2 == 0:
        rhs = -rhs
    return lifted == rhs


def dh_product_check(p: int, r: int, ell: int, u: int, k: int | None = None) -> bool:
    """Davenport-Hasse product formula for chi^u (chi of order k) and eta of order ell.

    Checked in the division-free form
    G(chi) chi^ell(ell) prod G(chi eta^i) = G(chi^ell) prod G(eta^i),
    products over 1 <= i < ell.
    """
    field = build_field(p, r)
    q = field.q
    if k is None:
        k = q - 1
    if ell < 2 or (q - 1) % ell:
        raise NotADivisor(f"ell={ell} must be > 1 and divide {q - 1}")
    if (q - 1) % k:
        raise NotADivisor(f"{k} does not divide {q - 1}")
    K = k * ell // gcd(k, ell)
    table = build_trace_counts(field, K)
    v = u * (K // k) % K
    if v == 0:
        raise DegenerateCharacter("chi^u is trivial")
    if v * ell % K == 0:
        raise DegenerateCharacter("chi^(u ell) is trivial, so chi eta^i is trivial for some i")
    e = K // ell

    def G(w: int) -> CycInt:
        return gauss_sum_exact(table, w).value

    n = gauss_conductor(p, K)
    a_ell = _order_character_exponent(field, ell)
    chi_ell_at_ell = CycInt.zeta(n, (v * ell * a_ell % K) * (n // K))
    lhs = G(v) * chi_ell_at_ell
    rhs = G(v * ell)
    for i in range(1, ell):
        lhs = lhs * G(v + i * e)
        rhs = rhs * G(i * e)
    return lhs == rhs


def digit_sum(a: int, p: int) -> int:
    if a < 0:
        raise ValueError("a must be nonnegative")
    s = 0
    while a:
        a, d = divmod(a, p)
        s += d
    return s


def digit_sum_identity_check(a: int, p: int, f: int) -> bool:
    """s_p(a) = (p-1) sum_i <p^i a / (q-1)>, with exact fractions."""
    q = p**f
    if not 0 <= a < q - 1:
        raise RangeError(f"a must lie in [0, {q - 1})")
    rhs = Fraction(0)
    for i in range(f):
        x = Fraction(p**i * a, q - 1)
        rhs += x - (x.numerator // x.denominator)
    return digit_sum(a, p) == (p - 1) * rhs


# ---------------------------------------------------------------------------
# table files

_MAGIC = b"CSRG"
_VERSION = 1


def write_table(table: TraceCountTable, path: str | Path) -> None:
    head = _MAGIC + bytes([_VERSION]) + struct.pack("<QQQ", table.p, table.f, table.k)
    body = np.ascontiguousarray(table.counts, dtype="<u8").tobytes()
    Path(path).write_bytes(head + body)


def read_table(path: str | Path) -> TraceCountTable:
    raw = Path(path).read_bytes()
    if len(raw) < 29 or raw[:4] != _MAGIC:
        raise CacheFormatError(f"{path}: bad magic")
    if raw[4] != _VERSION:
        raise CacheFormatError(f"{path}: unsupported version {raw[4]}")
    p, f, k = struct.unpack("<QQQ", raw[5:29])
    body = raw[29:]
    if len(body) != 8 * k * p:
        raise CacheFormatError(f"{path}: expected {k * p} counts, found {len(body) // 8}")
    counts = np.frombuffer(body, dtype="<u8").astype(np.int64).reshape(k, p)
    table = TraceCountTable(p, f, k, counts)
    try:
        table.check()
    except ValueError as exc:
        raise CacheFormatError(f"{path}: {exc}") from None
    return table
