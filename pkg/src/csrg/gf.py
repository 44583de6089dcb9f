"""Explicit finite fields F_{p^f}.

Elements are coefficient vectors of residues modulo a fixed irreducible
polynomial, stored low degree first.  The modulus and the primitive element
are chosen deterministically (lexicographically smallest, highest non-leading
coefficient most significant), so every downstream number is reproducible.

The bulk routines at the bottom compute all powers of the primitive element,
or just their absolute traces, with a baby-step/giant-step layout that turns
the whole enumeration into a handful of dense matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from itertools import product
from math import isqrt
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DivisionByZero,
    NotADivisor,
    NotPrime,
    RangeError,
    TooLarge,
)
from .residue import factorize

BUILD_CAP = 2**40
VERIFY_CAP = 2**24

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, f) with q = p^f, or None when q is not a prime power."""
    if q < 2:
        return None
    for f in range(q.bit_length(), 0, -1):
        p = round(q ** (1.0 / f))
        for cand in (p - 1, p, p + 1):
            if cand >= 2 and cand**f == q and is_prime(cand):
                return cand, f
    return None


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient lists low degree first


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            base = i - dm
            for j in range(dm):
                a[base + j] = (a[base + j] - c * m[j]) % p
            a[i] = 0
    return _trim(a[:dm] if len(a) > dm else a)


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _pmulmod(a, b, m, p):
    return _pmod(_pmul(a, b, p), m, p)


def _ppowmod(a: list[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(list(a), m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        e >>= 1
        if e:
            base = _pmulmod(base, base, m, p)
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        inv = pow(b[-1], -1, p)
        b = [c * inv % p for c in b]
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _trim([c % p for c in out])


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p (coefficients low first)."""
    f = len(poly) - 1
    if f < 1 or poly[-1] % p != 1:
        raise ValueError("expected a monic polynomial of positive degree")
    if f == 1:
        return True
    if poly[0] % p == 0:
        return False
    m = list(poly)
    x = [0, 1]
    # frob[i] = x^(p^i) mod m
    frob = [x]
    for _ in range(f):
        frob.append(_ppowmod(frob[-1], p, m, p))
    if _psub(frob[f], x, p):
        return False
    for r, _ in factorize(f):
        g = _pgcd(m, _psub(frob[f // r], x, p), p)
        if len(g) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class FieldSpec:
    """F_{p^f} with a fixed monic modulus and primitive element.

    ``modulus`` has f+1 coefficients (low first, last one is 1); ``gamma``
    has f coefficients.
    """

    p: int
    f: int
    modulus: tuple[int, ...]
    gamma: tuple[int, ...]
    canonical_gamma: bool = dc_field(default=True, compare=False)

    @property
    def q(self) -> int:
        return self.p**self.f

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, f={self.f}, modulus={self.modulus}, gamma={self.gamma})"

    # -- element construction -------------------------------------------
    def element(self, coeffs: Sequence[int]) -> "FieldElement":
        c = [int(x) % self.p for x in coeffs]
        if len(c) > self.f:
            c = _pmod(c, self.modulus, self.p)
        c = c + [0] * (self.f - len(c))
        return FieldElement(self, tuple(c))

    def scalar(self, a: int) -> "FieldElement":
        return self.element([a])

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.f)

    @property
    def one(self) -> "FieldElement":
        return self.scalar(1)

    @property
    def gen(self) -> "FieldElement":
        return FieldElement(self, self.gamma)

    def from_code(self, code: int) -> "FieldElement":
        c = []
        for _ in range(self.f):
            code, r = divmod(code, self.p)
            c.append(r)
        return FieldElement(self, tuple(c))

    def with_gamma(self, gamma: Sequence[int]) -> "FieldSpec":
        """Same field, different primitive element (validated)."""
        g = self.element(gamma).coeffs
        out = FieldSpec(self.p, self.f, self.modulus, g, canonical_gamma=False)
        if not _is_primitive(out, g):
            raise ValueError(f"{g} is not primitive in F_{self.q}")
        return out

    # -- linear algebra helpers --------------------------------------------
    @cached_property
    def x_power_table(self) -> np.ndarray:
        """Row n holds the coordinates of x^n for n < 2f-1."""
        rows = []
        cur = [1]
        for _ in range(2 * self.f - 1):
            rows.append(cur + [0] * (self.f - len(cur)))
            cur = _pmod([0] + cur, self.modulus, self.p)
        return np.array(rows, dtype=np.int64)

    @cached_property
    def _mul_basis(self) -> np.ndarray:
        """Stack P with P[m] the matrix of multiplication by x^m."""
        X = self.x_power_table
        f = self.f
        return np.stack([X[m : m + f] for m in range(f)])

    def mul_matrix(self, y: Sequence[int]) -> np.ndarray:
        """Matrix M with (row vector of a) @ M = coordinates of a*y (mod p)."""
        y = np.asarray(y, dtype=np.int64)
        return np.tensordot(y, self._mul_basis, axes=(0, 0)) % self.p

    @cached_property
    def trace_vector(self) -> np.ndarray:
        """Tr(x^i) for i < f, so Tr(a) = a . trace_vector (mod p)."""
        X = self.x_power_table
        f = self.f
        # trace of the multiplication-by-x^i map
        return np.array(
            [int(np.trace(X[i : i + f])) % self.p for i in range(f)], dtype=np.int64
        )

    @cached_property
    def prime_generator(self) -> int:
        """gamma^((q-1)/(p-1)), a primitive root of the prime field."""
        g = self.gen ** ((self.q - 1) // (self.p - 1)) if self.p > 2 else self.one
        return g.coeffs[0]


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    coeffs: tuple[int, ...]

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field.modulus != self.field.modulus or other.field.p != self.field.p:
                raise ValueError("operands belong to different fields")
            return other
        if isinstance(other, int):
            return self.field.scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        F = self.field
        c = _pmulmod(_trim(list(self.coeffs)), _trim(list(o.coeffs)), F.modulus, F.p)
        return FieldElement(F, tuple(c + [0] * (F.f - len(c))))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        F = self.field
        if e < 0:
            return self.inverse() ** (-e)
        c = _ppowmod(_trim(list(self.coeffs)), e, F.modulus, F.p)
        return FieldElement(F, tuple(c + [0] * (F.f - len(c))))

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def code(self) -> int:
        p = self.field.p
        out = 0
        for c in reversed(self.coeffs):
            out = out * p + c
        return out

    def frobenius(self, times: int = 1) -> "FieldElement":
        return self ** (self.field.p**times)

    def __repr__(self) -> str:
        return f"FieldElement({list(self.coeffs)})"


def _is_primitive(F: FieldSpec, g: Sequence[int]) -> bool:
    n = F.q - 1
    el = FieldElement(F, tuple(g))
    if el.is_zero():
        return False
    if n == 1:
        return True
    for r, _ in factorize(n):
        if (el ** (n // r)).coeffs == F.one.coeffs:
            return False
    return True


@lru_cache(maxsize=256)
def build_field(p: int, f: int) -> FieldSpec:
    """The canonical F_{p^f}: smallest monic irreducible, smallest primitive element."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if f < 1:
        raise ValueError(f"degree must be >= 1, got {f}")
    if p**f > BUILD_CAP:
        raise TooLarge(f"{p}^{f} exceeds 2^40")
    if f == 1:
        n = p - 1
        rs = [r for r, _ in factorize(n)]
        g = next(g for g in range(1, p) if all(pow(g, n // r, p) != 1 for r in rs))
        return FieldSpec(p, 1, (0, 1), (g % p,))
    modulus = None
    # candidates ordered by c_{f-1}, ..., c_0 (highest non-leading coefficient most significant)
    for high in product(range(p), repeat=f):
        cand = high[::-1] + (1,)
        if is_irreducible(cand, p):
            modulus = cand
            break
    assert modulus is not None
    proto = FieldSpec(p, f, modulus, (0,) * f)
    for high in product(range(p), repeat=f):
        cand = high[::-1]
        if _is_primitive(proto, cand):
            return FieldSpec(p, f, modulus, tuple(cand))
    raise AssertionError("no primitive element found")


def trace_abs(x: FieldElement) -> int:
    """Absolute trace Tr_{q/p}(x)."""
    F = x.field
    return int(np.dot(np.asarray(x.coeffs, dtype=np.int64), F.trace_vector) % F.p)


# ---------------------------------------------------------------------------
# linear algebra mod p


def solve_mod_p(A: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Solve x @ A = b over F_p for x; None when inconsistent.

    A has shape (d, f) with full row rank d.
    """
    A = np.asarray(A, dtype=object) % p
    b = np.asarray(b, dtype=object) % p
    d, f = A.shape
    # work with the transposed system A^T x^T = b^T
    M = [[int(A[i][j]) for i in range(d)] + [int(b[j])] for j in range(f)]
    row = 0
    pivots = []
    for col in range(d):
        piv = next((r for r in range(row, f) if M[r][col] % p), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = pow(M[row][col], -1, p)
        M[row] = [v * inv % p for v in M[row]]
        for r in range(f):
            if r != row and M[r][col]:
                c = M[r][col]
                M[r] = [(v - c * w) % p for v, w in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
    for r in range(row, f):
        if M[r][d] % p:
            return None
    x = [0] * d
    for r, col in enumerate(pivots):
        x[col] = M[r][d]
    return np.array(x, dtype=np.int64)


# ---------------------------------------------------------------------------
# subfields


@dataclass(frozen=True)
class SubfieldEmbedding:
    """Field homomorphism F_{p^d} -> F_{p^f}.

    ``images`` row i holds the big-field coordinates of the image of x^i.
    The subfield's primitive element maps to big.gamma^((q-1)/(q0-1)).
    """

    sub: FieldSpec
    big: FieldSpec
    images: np.ndarray

    def __call__(self, y: FieldElement) -> FieldElement:
        v = np.asarray(y.coeffs, dtype=np.int64) @ self.images % self.big.p
        return FieldElement(self.big, tuple(int(c) for c in v))

    def preimage(self, x: FieldElement) -> FieldElement:
        sol = solve_mod_p(self.images, np.asarray(x.coeffs), self.big.p)
        if sol is None:
            raise ValueError(f"{x} is not in the embedded subfield")
        return FieldElement(self.sub, tuple(int(c) for c in sol))


def _poly_eval(F: FieldSpec, coeffs: Sequence[int], x: FieldElement) -> FieldElement:
    acc = F.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@lru_cache(maxsize=128)
def subfield_embed(big: FieldSpec, d: int) -> SubfieldEmbedding:
    """Embed F_{p^d} into ``big`` so that the subfield generator maps to gamma^N.

    N = (q-1)/(q0-1).  When the canonical subfield generator has a different
    minimal polynomial than gamma^N, the subfield keeps its canonical modulus
    and its primitive element is replaced by the preimage of gamma^N.
    """
    if d < 1 or big.f % d:
        raise NotADivisor(f"{d} does not divide {big.f}")
    sub = build_field(big.p, d)
    p = big.p
    N = (big.q - 1) // (sub.q - 1)
    target = big.gen**N
    if d == big.f and sub.modulus == big.modulus:
        emb = SubfieldEmbedding(big, big, np.eye(big.f, dtype=np.int64))
        return emb
    root = None
    if d == 1:
        root = big.zero  # the prime field: x maps to 0, constants to constants
    g = big.one
    # otherwise a root of sub.modulus lies in <gamma^N>
    for _ in range(sub.q - 1 if root is None else 0):
        if _poly_eval(big, sub.modulus, g).is_zero():
            # prefer the conjugate that sends sub.gamma to target
            r = g
            for _ in range(d):
                if _poly_eval(big, sub.gamma, r) == target:
                    root = r
                    break
                r = r**p
            if root is None:
                root = g
            break
        g = g * target
    assert root is not None, "subfield modulus has no root"
    rows = [big.one]
    for _ in range(d - 1):
        rows.append(rows[-1] * root)
    images = np.array([r.coeffs for r in rows], dtype=np.int64)
    emb = SubfieldEmbedding(sub, big, images)
    if emb(sub.gen) != target:
        pre = emb.preimage(target)
        sub = sub.with_gamma(pre.coeffs)
        emb = SubfieldEmbedding(sub, big, images)
    return emb


def trace_rel(x: FieldElement, sub_degree: int) -> FieldElement:
    """Relative trace to F_{p^d}, in the coordinates of subfield_embed(big, d)."""
    F = x.field
    if sub_degree < 1 or F.f % sub_degree:
        raise NotADivisor(f"{sub_degree} does not divide {F.f}")
    emb = subfield_embed(F, sub_degree)
    q0 = F.p**sub_degree
    acc = F.zero
    y = x
    for _ in range(F.f // sub_degree):
        acc = acc + y
        y = y**q0
    return emb.preimage(acc)


# ---------------------------------------------------------------------------
# bulk enumeration


def _block_size(n: int) -> int:
    return max(64, min(1 << 14, 1 << ((isqrt(max(n, 1)) - 1).bit_length())))


def _float_safe(F: FieldSpec) -> bool:
    return F.f * (F.p - 1) ** 2 < 2**52


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int, fast: bool) -> np.ndarray:
    if fast:
        out = a.astype(np.float64) @ b.astype(np.float64)
        return np.fmod(out, p).astype(np.int64)
    return (a.astype(object) @ b.astype(object) % p).astype(np.int64)


def _geometric_rows(F: FieldSpec, base: FieldElement, step: FieldElement, count: int) -> np.ndarray:
    """Rows base * step^i for i < count, by doubling."""
    fast = _float_safe(F)
    rows = np.zeros((count, F.f), dtype=np.int64)
    if count == 0:
        return rows
    rows[0] = base.coeffs
    have = 1
    stepm = step
    while have < count:
        take = min(have, count - have)
        rows[have : have + take] = _matmul_mod(rows[:take], F.mul_matrix(stepm.coeffs), F.p, fast)
        have += take
        stepm = stepm * stepm
    return rows


def power_vectors(F: FieldSpec, start: int, count: int) -> np.ndarray:
    """Coordinates of gamma^a for a in [start, start+count), shape (count, f)."""
    if start < 0 or count < 0 or start + count > F.q - 1:
        raise RangeError(f"range [{start}, {start + count}) outside [0, {F.q - 1})")
    fast = _float_safe(F)
    B = min(_block_size(count), max(count, 1))
    V = _geometric_rows(F, F.one, F.gen, B)
    J = -(-count // B)
    U = _geometric_rows(F, F.gen**start, F.gen**B, J)
    out = np.empty((J * B, F.f), dtype=np.int64)
    for j in range(J):
        out[j * B : (j + 1) * B] = _matmul_mod(V, F.mul_matrix(U[j]), F.p, fast)
    return out[:count]


def power_codes(F: FieldSpec, start: int = 0, count: int | None = None) -> np.ndarray:
    """Integer codes sum c_i p^i of gamma^a for a in [start, start+count)."""
    if count is None:
        count = F.q - 1 - start
    vec = power_vectors(F, start, count)
    weights = F.p ** np.arange(F.f, dtype=np.int64)
    return vec @ weights


def power_traces(F: FieldSpec, start: int = 0, count: int | None = None) -> np.ndarray:
    """Absolute traces Tr(gamma^a) for a in [start, start+count), as int64."""
    if count is None:
        count = F.q - 1 - start
    if start < 0 or count < 0 or start + count > F.q - 1:
        raise RangeError(f"range [{start}, {start + count}) outside [0, {F.q - 1})")
    if F.f == 1 and F.p < (1 << 31):
        # prime field: the trace is the element itself
        B = max(1, int(count**0.5))
        g = F.gamma[0]
        lo = np.empty(B, dtype=np.int64)
        x = 1
        for i in range(B):
            lo[i], x = x, x * g % F.p
        J = -(-count // B)
        hi = np.empty(J, dtype=np.int64)
        x, step = pow(g, start, F.p), pow(g, B, F.p)
        for j in range(J):
            hi[j], x = x, x * step % F.p
        return (hi[:, None] * lo[None, :] % F.p).ravel()[:count]
    out = np.empty(count, dtype=np.int64)
    pos = 0
    for _, block in iter_trace_blocks(F, start, count):
        flat = block.ravel()
        take = min(flat.size, count - pos)
        out[pos : pos + take] = flat[:take]
        pos += take
    return out


def iter_trace_blocks(F: FieldSpec, start: int, count: int, chunk_elems: int = 1 << 22):
    """Yield (first exponent, 2-d array) with row j, column r the trace of gamma^(first + jB + r).

    The final block may extend past start+count; callers mask it.
    """
    fast = _float_safe(F)
    B = min(_block_size(count), max(count, 1))
    J = -(-count // B)
    V = _geometric_rows(F, F.one, F.gen, B)  # B x f
    U = _geometric_rows(F, F.gen**start, F.gen**B, J)  # J x f
    # W[j, i] = Tr(x^i * gamma^(start + jB))
    tv = F.trace_vector
    f = F.f
    X = F.x_power_table
    M = np.array([[int(tv @ X[i + j] % F.p) for j in range(f)] for i in range(f)], dtype=np.int64)
    W = _matmul_mod(U, M, F.p, fast)
    rows_per = max(1, chunk_elems // B)
    for j0 in range(0, J, rows_per):
        j1 = min(J, j0 + rows_per)
        T = _matmul_mod(W[j0:j1], V.T, F.p, fast)
        yield start + j0 * B, T


def enumerate_powers(F: FieldSpec, start: int, count: int) -> Iterator[tuple[int, FieldElement]]:
    """Yield (a, gamma^a) for consecutive a, one multiplication per step."""
    if start < 0 or count < 0 or start + count > F.q - 1:
        raise RangeError(f"range [{start}, {start + count}) outside [0, {F.q - 1})")
    if count == 0:
        return
    x = F.gen**start
    g = F.gen
    for a in range(start, start + count):
        yield a, x
        x = x * g


def dlog(x: FieldElement) -> int:
    """Discrete logarithm to base gamma (baby-step giant-step)."""
    F = x.field
    if x.is_zero():
        raise DivisionByZero("log of zero")
    n = F.q - 1
    m = isqrt(n) + 1
    table = {}
    e = F.one
    for j in range(m):
        table.setdefault(e.coeffs, j)
        e = e * F.gen
    giant = (F.gen**m).inverse()
    y = x
    for i in range(m + 1):
        j = table.get(y.coeffs)
        if j is not None:
            return (i * m + j) % n
        y = y * giant
    raise AssertionError("gamma is not primitive")


def log_table(F: FieldSpec) -> np.ndarray:
    """Array L with L[code(gamma^a)] = a, and L[0] = -1."""
    if F.q > VERIFY_CAP:
        raise TooLarge(f"q={F.q} exceeds 2^24")
    codes = power_codes(F)
    L = np.full(F.q, -1, dtype=np.int64)
    L[codes] = np.arange(F.q - 1, dtype=np.int64)
    return L
