"""Exact arithmetic in Z[zeta_n].

Values are stored in the reduced power basis 1, z, ..., z^(phi(n)-1) with
z = zeta_n, so equality of values is equality of coefficient vectors.

Reduction from the group ring Z[x]/(x^n - 1) runs in near-linear time:
Phi_n(x) = Phi_rad(x^(n/rad)) splits off the non-squarefree part, and a
squarefree m = m' r (r the largest prime) is handled by first reducing modulo
Phi_m'(y^r) and then folding the top phi(m') coefficients with a small
precomputed table.  Products use Kronecker substitution on big integers.
"""

from __future__ import annotations

import cmath
from functools import lru_cache
from math import gcd

import gmpy2
import numpy as np

from .errors import ConductorMismatch, NonIntegralDivision, NotCoprime, TooLarge
from .residue import divisors, euler_phi, factorize

MAX_PHI = 1 << 21
_SAFE = 1 << 62


# ---------------------------------------------------------------------------
# cyclotomic polynomials


def _exact_div_small(num: list[int], den: list[int]) -> list[int]:
    """Exact quotient of integer polynomials, den monic (low first)."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


def _div_by_xm_minus_1(c: np.ndarray, m: int) -> np.ndarray:
    """Exact quotient of c by x^m - 1."""
    L = len(c)
    rows = -(-L // m)
    pad = np.zeros(rows * m, dtype=c.dtype)
    pad[:L] = c
    q = -np.cumsum(pad.reshape(rows, m), axis=0).reshape(-1)
    if np.any(q[L - m : L]):
        raise ArithmeticError("inexact division by x^m - 1")
    return q[: L - m]


def _rad(n: int) -> int:
    r = 1
    for p, _ in factorize(n):
        r *= p
    return r


@lru_cache(maxsize=512)
def _phi_squarefree(m: int) -> tuple[int, ...]:
    if m == 1:
        return (-1, 1)
    primes = [p for p, _ in factorize(m)]
    r = primes[-1]
    mp = m // r
    small = list(_phi_squarefree(mp))
    if mp == 1:
        return tuple([1] * r)
    # Phi_m(x) = Phi_mp(x^r) * Psi_mp(x) / (x^mp - 1), Psi_mp = (x^mp - 1) / Phi_mp
    psi = _exact_div_small([-1] + [0] * (mp - 1) + [1], small)
    big = np.zeros((len(small) - 1) * r + 1, dtype=np.int64)
    big[:: r] = small
    prod = np.convolve(big, np.array(psi, dtype=np.int64))
    out = _div_by_xm_minus_1(prod, mp)
    out = np.trim_zeros(out, "b")
    return tuple(int(c) for c in out)


@lru_cache(maxsize=512)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, low degree first."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rad = _rad(n)
    base = _phi_squarefree(rad)
    e = n // rad
    if e == 1:
        return base
    out = [0] * ((len(base) - 1) * e + 1)
    for i, c in enumerate(base):
        out[i * e] = c
    return tuple(out)


# ---------------------------------------------------------------------------
# reduction


def _as_int(arr: np.ndarray) -> np.ndarray:
    """Downcast an object array to int64 when every entry is small."""
    if arr.dtype == object:
        if arr.size == 0:
            return arr.astype(np.int64)
        mx = max(abs(int(v)) for v in arr.flat)
        if mx < _SAFE:
            return arr.astype(np.int64)
    return arr


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(v)) for v in arr.flat)
    return int(np.abs(arr).max())


@lru_cache(maxsize=256)
def _top_table(m: int) -> np.ndarray:
    """Rows: x^(phi(m)+i) mod Phi_m for i < phi(m/r), r the largest prime of m."""
    r = factorize(m)[-1][0]
    ph = euler_phi(m)
    rows = euler_phi(m // r)
    phi_c = np.array(cyclotomic_polynomial(m)[:ph], dtype=object)
    out = np.zeros((rows, ph), dtype=object)
    cur = -phi_c
    for i in range(rows):
        out[i] = cur
        top = cur[-1]
        nxt = np.empty(ph, dtype=object)
        nxt[0] = 0
        nxt[1:] = cur[:-1]
        cur = nxt - top * phi_c
    return _as_int(out)


@lru_cache(maxsize=256)
def _growth(m: int) -> int:
    """Bound on coefficient growth of _reduce_squarefree for modulus m."""
    if m == 1:
        return 1
    fac = factorize(m)
    if len(fac) == 1:
        return 2
    r = fac[-1][0]
    mp = m // r
    R = _top_table(m)
    return _growth(mp) * (1 + euler_phi(mp) * _maxabs(R))


def _reduce_squarefree(V: np.ndarray, m: int) -> np.ndarray:
    """Reduce each column of V (polynomials in y of degree < m) modulo Phi_m(y)."""
    if m == 1:
        return V
    fac = factorize(m)
    if len(fac) == 1:
        return V[: m - 1] - V[m - 1]
    r = fac[-1][0]
    mp = m // r
    cols = V.shape[1]
    V2 = V.reshape(mp, r * cols)
    W = _reduce_squarefree(V2, mp).reshape(euler_phi(mp) * r, cols)
    ph = euler_phi(m)
    R = _top_table(m)
    low, top = W[:ph], W[ph:]
    if W.dtype == object or R.dtype == object:
        return low + (R.astype(object).T @ top.astype(object))
    return low + R.T @ top


def reduce_group_ring(v, n: int) -> np.ndarray:
    """Power-basis coefficients of sum_i v[i] zeta_n^i (any length, folded mod n)."""
    v = np.asarray(v)
    if v.dtype != object:
        v = v.astype(np.int64)
    if len(v) > n:
        rows = -(-len(v) // n)
        pad = np.zeros(rows * n, dtype=v.dtype)
        pad[: len(v)] = v
        if v.dtype == object:
            pad[len(v) :] = 0
            v = pad.reshape(rows, n).sum(axis=0)
        else:
            if _maxabs(v) * rows >= _SAFE:
                v = pad.astype(object).reshape(rows, n).sum(axis=0)
            else:
                v = pad.reshape(rows, n).sum(axis=0)
    elif len(v) < n:
        pad = np.zeros(n, dtype=v.dtype)
        if v.dtype == object:
            pad[:] = 0
        pad[: len(v)] = v
        v = pad
    rad = _rad(n)
    e = n // rad
    if v.dtype != object and _maxabs(v) * _growth(rad) >= _SAFE:
        v = v.astype(object)
    W = _reduce_squarefree(v.reshape(rad, e), rad)
    return _as_int(np.ascontiguousarray(W).reshape(-1))


# ---------------------------------------------------------------------------
# multiplication


def _nbytes_for(bits: int) -> int:
    return max(1, -(-bits // 8))


def _pack(a: np.ndarray, width: int) -> int:
    if a.dtype != object and width >= 8:
        buf = np.zeros((len(a), width), dtype=np.uint8)
        buf[:, :8] = a.astype("<u8").view(np.uint8).reshape(len(a), 8)
        return int(gmpy2.mpz(int.from_bytes(buf.tobytes(), "little")))
    return int.from_bytes(b"".join(int(c).to_bytes(width, "little") for c in a), "little")


def _unpack(x, count: int, width: int) -> np.ndarray:
    raw = int(x).to_bytes(count * width, "little")
    if width <= 8:
        buf = np.zeros((count, 8), dtype=np.uint8)
        buf[:, :width] = np.frombuffer(raw, dtype=np.uint8).reshape(count, width)
        return buf.view("<u8").reshape(count).astype(np.int64)
    return np.array(
        [int.from_bytes(raw[i * width : (i + 1) * width], "little") for i in range(count)],
        dtype=object,
    )


def _pack_signed(a: np.ndarray, width: int):
    """sum a_i 256^(width i) as an mpz, for signed integer coefficients."""
    return gmpy2.mpz(_pack(np.where(a > 0, a, 0), width)) - gmpy2.mpz(
        _pack(np.where(a < 0, -a, 0), width)
    )


def poly_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of integer polynomials (one signed Kronecker substitution)."""
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    ma, mb = _maxabs(a), _maxabs(b)
    small = min(len(a), len(b))
    if a.dtype != object and b.dtype != object and ma * mb * small < _SAFE and small <= 64:
        return np.convolve(a, b)
    count = len(a) + len(b) - 1
    if ma == 0 or mb == 0:
        return np.zeros(count, dtype=np.int64)
    # one sign bit on top of the largest possible coefficient
    bits = ma.bit_length() + mb.bit_length() + small.bit_length() + 1
    width = _nbytes_for(bits)
    if a.dtype != object and b.dtype != object:
        width = max(width, 8)  # the numpy packing path works in 8-byte slots
    x = _pack_signed(a, width) * _pack_signed(b, width)
    # shift every slot by half its range so all digits are nonnegative
    half = b"\x00" * (width - 1) + b"\x80"
    x += gmpy2.mpz(int.from_bytes(half * count, "little"))
    if width == 8:
        raw = int(x).to_bytes(count * 8, "little")
        d = np.frombuffer(raw, dtype="<u8") ^ np.uint64(1 << 63)
        return d.view(np.int64).copy()
    top = 1 << (8 * width - 1)
    return _as_int(_unpack(x, count, width) - top)


# ---------------------------------------------------------------------------
# the ring element


class CycInt:
    """An element of Z[zeta_n] in the reduced power basis."""

    __slots__ = ("conductor", "_c")
    __hash__ = None  # mutable-free but equality crosses conductors

    def __init__(self, conductor: int, coeffs, *, reduced: bool = False):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        if euler_phi(conductor) > MAX_PHI:
            raise TooLarge(f"conductor {conductor} is too large for dense arithmetic")
        self.conductor = conductor
        arr = np.asarray(coeffs)
        if arr.dtype != object:
            arr = arr.astype(np.int64)
        if not reduced:
            arr = reduce_group_ring(arr, conductor)
        else:
            arr = _as_int(arr)
        arr.setflags(write=False)
        self._c = arr

    # -- constructors -------------------------------------------------------
    @classmethod
    def integer(cls, m: int, conductor: int = 1) -> "CycInt":
        c = np.zeros(euler_phi(conductor), dtype=object if abs(m) >= _SAFE else np.int64)
        c[0] = m
        return cls(conductor, c, reduced=True)

    @classmethod
    def zeta(cls, n: int, power: int = 1) -> "CycInt":
        v = np.zeros(n, dtype=np.int64)
        v[power % n] = 1
        return cls(n, v)

    @classmethod
    def from_group_ring(cls, n: int, v) -> "CycInt":
        return cls(n, v)

    @property
    def coeffs(self) -> list[int]:
        return [int(c) for c in self._c]

    @property
    def array(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c)

    # -- coercion -------------------------------------------------------------
    def lift(self, m: int) -> "CycInt":
        """The same value written with conductor m (a multiple of the current one)."""
        n = self.conductor
        if m == n:
            return self
        if m % n:
            raise ConductorMismatch(f"{n} does not divide {m}")
        step = m // n
        v = np.zeros(m, dtype=self._c.dtype)
        if v.dtype == object:
            v[:] = 0
        v[: len(self._c) * step : step] = self._c
        return CycInt(m, v)

    def _pair(self, other) -> tuple["CycInt", "CycInt"]:
        if isinstance(other, (int, np.integer)):
            return self, CycInt.integer(int(other), self.conductor)
        if not isinstance(other, CycInt):
            return NotImplemented
        if other.conductor == self.conductor:
            return self, other
        r_self, r_other = self.detect_rational(), other.detect_rational()
        if r_other is not None:
            return self, CycInt.integer(r_other, self.conductor)
        if r_self is not None:
            return CycInt.integer(r_self, other.conductor), other
        raise ConductorMismatch(
            f"conductors {self.conductor} and {other.conductor}; lift explicitly"
        )

    # -- ring operations -------------------------------------------------------
    def _combine(self, a: np.ndarray, b: np.ndarray, sign: int) -> np.ndarray:
        if a.dtype == object or b.dtype == object or _maxabs(a) + _maxabs(b) >= _SAFE:
            a, b = a.astype(object), b.astype(object)
        return a + b if sign > 0 else a - b

    def __add__(self, other):
        pair = self._pair(other)
        if pair is NotImplemented:
            return pair
        a, b = pair
        return CycInt(a.conductor, self._combine(a._c, b._c, 1), reduced=True)

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is NotImplemented:
            return pair
        a, b = pair
        return CycInt(a.conductor, self._combine(a._c, b._c, -1), reduced=True)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycInt(self.conductor, -self._c, reduced=True)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            other = int(other)
            if self._c.dtype == object or _maxabs(self._c) * abs(other) >= _SAFE:
                return CycInt(self.conductor, self._c.astype(object) * other, reduced=True)
            return CycInt(self.conductor, self._c * other, reduced=True)
        pair = self._pair(other)
        if pair is NotImplemented:
            return pair
        a, b = pair
        ra, rb = a.detect_rational(), b.detect_rational()
        if ra is not None:
            return b * ra
        if rb is not None:
            return a * rb
        prod = poly_mul(a._c, b._c)
        return CycInt(a.conductor, prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = CycInt.integer(1, self.conductor)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def exact_div(self, d: int) -> "CycInt":
        """Divide every coefficient by the integer d; raise if any is not divisible."""
        if d == 0:
            raise ZeroDivisionError("division by zero")
        c = self._c.astype(object) if self._c.dtype == object else self._c
        if c.dtype == object:
            bad = any(int(x) % d for x in c)
        else:
            bad = bool(np.any(c % d))
        if bad:
            raise NonIntegralDivision(f"not divisible by {d}")
        return CycInt(self.conductor, c // d, reduced=True)

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.detect_rational() == int(other)
        if not isinstance(other, CycInt):
            return NotImplemented
        if self.conductor != other.conductor:
            m = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
            a, b = self.lift(m), other.lift(m)
        else:
            a, b = self, other
        return len(a._c) == len(b._c) and all(int(x) == int(y) for x, y in zip(a._c, b._c)) \
            if (a._c.dtype == object or b._c.dtype == object) else bool(np.array_equal(a._c, b._c))

    def is_zero(self) -> bool:
        return not any(int(x) for x in self._c) if self._c.dtype == object else not self._c.any()

    # -- Galois action -----------------------------------------------------------
    def group_ring(self) -> np.ndarray:
        """Length-n vector v with self = sum v[i] zeta^i (the basis coefficients padded)."""
        n = self.conductor
        v = np.zeros(n, dtype=self._c.dtype)
        if v.dtype == object:
            v[:] = 0
        v[: len(self._c)] = self._c
        return v

    def galois_apply(self, t: int) -> "CycInt":
        n = self.conductor
        if gcd(t, n) != 1:
            raise NotCoprime(f"gcd({t}, {n}) != 1")
        if t % n == 1:
            return self
        idx = (np.arange(len(self._c), dtype=np.int64) * (t % n)) % n
        v = np.zeros(n, dtype=self._c.dtype)
        if v.dtype == object:
            v[:] = 0
        v[idx] = self._c
        return CycInt(n, v)

    def conj(self) -> "CycInt":
        return self.galois_apply(self.conductor - 1) if self.conductor > 2 else self

    # -- inspection ----------------------------------------------------------------
    def detect_rational(self) -> int | None:
        c = self._c
        if len(c) == 1:
            return int(c[0])
        if c.dtype == object:
            if any(int(x) for x in c[1:]):
                return None
        elif c[1:].any():
            return None
        return int(c[0])

    def embed(self, t: int = 1) -> complex:
        """Numerical value under zeta_n -> exp(2 pi i t / n)."""
        n = self.conductor
        ang = 2 * np.pi * t / n * np.arange(len(self._c))
        c = self._c.astype(np.float64)
        return complex(np.sum(c * np.cos(ang)), np.sum(c * np.sin(ang)))

    def embeddings(self) -> np.ndarray:
        """All complex embeddings, indexed by units t mod n in increasing order."""
        n = self.conductor
        units = [t for t in range(1, n + 1) if gcd(t, n) == 1]
        v = np.zeros(n, dtype=np.complex128)
        v[: len(self._c)] = self._c.astype(np.float64)
        full = np.fft.ifft(v) * n  # full[t] = sum v_i exp(2 pi i t i / n)
        return full[[t % n for t in units]]

    def classify_root_of_unity(self) -> tuple[int, int] | None:
        """(m, j) with self = zeta_m^j in lowest terms, or None."""
        n = self.conductor
        z = self.embed(1)
        if abs(abs(z) - 1.0) > 1e-6:
            return None
        J = int(round(cmath.phase(z) * 2 * n / (2 * np.pi))) % (2 * n)
        if J % 2 == 0:
            cand = CycInt.zeta(n, J // 2)
        elif n % 2 == 1:
            cand = -CycInt.zeta(n, (J - n) // 2)
        else:
            return None
        if cand != self:
            return None
        g = gcd(J, 2 * n)
        return (2 * n) // g, J // g

    def minimize(self) -> "CycInt":
        """The same value with the smallest possible conductor."""
        r = self.detect_rational()
        if r is not None:
            return CycInt.integer(r, 1)
        n = self.conductor
        if n % 4 == 2:
            h = n // 2
            # zeta_n^i = (-1)^i zeta_h^(i (h+1)/2)
            i = np.arange(len(self._c))
            v = np.zeros(h, dtype=object)
            v[:] = 0
            signs = np.where(i % 2 == 0, 1, -1)
            np.add.at(v, (i * ((h + 1) // 2)) % h, (self._c.astype(object) * signs))
            return CycInt(h, _as_int(v)).minimize()
        for d in divisors(n):
            if d == n:
                break
            if d % 4 == 2 or d == 1:
                continue
            step = n // d
            ph = euler_phi(d)
            idx = np.arange(ph) * step
            if idx[-1] < len(self._c):
                cand = CycInt(d, self._c[idx], reduced=True)
                if cand.lift(n) == self:
                    return cand.minimize()
            elif euler_phi(n) <= 2048:
                basis = np.array([CycInt.zeta(d, i).lift(n).array for i in range(ph)], dtype=np.float64)
                sol, *_ = np.linalg.lstsq(basis.T, self._c.astype(np.float64), rcond=None)
                cand = CycInt(d, np.rint(sol).astype(np.int64), reduced=True)
                if cand.lift(n) == self:
                    return cand.minimize()
        return self

    # -- presentation -------------------------------------------------------------
    def normal_basis(self) -> list[int]:
        """For prime conductor p: coefficients b_1..b_{p-1} of zeta^1..zeta^(p-1)."""
        p = self.conductor
        c = self.coeffs + [0]
        return [c[t] - c[0] for t in range(1, p)]

    def to_text(self) -> str:
        m = self.minimize()
        r = m.detect_rational()
        if r is not None:
            return str(r)
        n = m.conductor
        if len(factorize(n)) == 1 and factorize(n)[0][1] == 1:
            terms = [(c, t) for t, c in zip(range(1, n), m.normal_basis())]
        else:
            terms = list(zip(m.coeffs, range(len(m.coeffs))))
        parts = []
        for c, t in terms:
            if c == 0:
                continue
            mono = "1" if t == 0 else f"z^{t}"
            mag = abs(c)
            body = mono if mag == 1 else (str(mag) if t == 0 else f"{mag}*{mono}")
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return f"{' '.join(parts)} (conductor {n})"

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coeffs": self.coeffs}

    def __repr__(self) -> str:
        return f"CycInt({self.conductor}, {self.coeffs})"


def detect_rational(a: CycInt) -> int | None:
    return a.detect_rational()


def classify_root_of_unity(a: CycInt) -> tuple[int, int] | None:
    return a.classify_root_of_unity()


def galois_apply(a: CycInt, t: int) -> CycInt:
    return a.galois_apply(t)


def conj(a: CycInt) -> CycInt:
    return a.conj()
