"""Connection sets D = union of cyclotomic classes C_i (i in I) for the known families.

Builders only do arithmetic on indices, so they accept parameters far beyond
what can be enumerated; such specs are flagged ``symbolic`` and the verifier
refuses them.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from itertools import product
from math import gcd, log2
from typing import Iterable

import numpy as np

from .cycint import CycInt
from .errors import (
    BadParameters,
    DuplicateIndices,
    HypothesisFailed,
    InvalidH,
    ZeroElement,
)
from .gf import VERIFY_CAP, FieldElement, FieldSpec, is_prime
from .residue import (
    check_index_stability,
    euler_phi,
    index_of,
    multiplicative_order,
    prime_factors,
)

log = logging.getLogger(__name__)

SCHEMA = "csrg/1"


def _power_exceeds(p: int, f: int, cap: int) -> bool:
    if f * log2(p) > cap.bit_length() + 1:
        return True
    return p**f > cap


@dataclass(frozen=True)
class ConnectionSpec:
    p: int
    f: int
    k: int
    I: tuple[int, ...]
    meta: dict = field(default_factory=dict, compare=False)
    symbolic: bool = False

    def __post_init__(self):
        if not is_prime(self.p):
            raise BadParameters(f"{self.p} is not prime")
        if self.f < 1 or self.k < 1:
            raise BadParameters("f and k must be positive")
        if pow(self.p, self.f, self.k) != 1 % self.k:
            raise BadParameters(f"k={self.k} does not divide {self.p}^{self.f} - 1")
        idx = [int(i) for i in self.I]
        if not idx:
            raise BadParameters("I is empty")
        if any(not 0 <= i < self.k for i in idx):
            raise BadParameters(f"I must lie in [0, {self.k})")
        if len(set(idx)) != len(idx):
            raise DuplicateIndices("I has repeated residues")
        object.__setattr__(self, "I", tuple(sorted(idx)))

    @property
    def q(self) -> int:
        return self.p**self.f

    def exceeds(self, cap: int) -> bool:
        """Whether p^f > cap, without forming p^f for huge symbolic fields."""
        return _power_exceeds(self.p, self.f, cap)

    @property
    def size(self) -> int:
        """|D| = |I| (q-1)/k."""
        return len(self.I) * ((self.q - 1) // self.k)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "p": self.p,
            "f": self.f,
            "k": self.k,
            "I": list(self.I),
            "meta": self.meta,
            "symbolic": self.symbolic,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict) -> "ConnectionSpec":
        if obj.get("schema", SCHEMA) != SCHEMA:
            raise BadParameters(f"unsupported schema {obj.get('schema')!r}")
        p, f = int(obj["p"]), int(obj["f"])
        symbolic = obj.get("symbolic")
        if symbolic is None:
            symbolic = _power_exceeds(p, f, VERIFY_CAP)
        return cls(p, f, int(obj["k"]), tuple(obj["I"]), dict(obj.get("meta", {})), bool(symbolic))


def make_spec(p: int, f: int, k: int, I: Iterable[int], source: str, params: dict, **extra) -> ConnectionSpec:
    meta = {"source": source, "params": params}
    meta.update(extra)
    return ConnectionSpec(p, f, k, tuple(I), meta, _power_exceeds(p, f, VERIFY_CAP))


@dataclass(frozen=True)
class HSet:
    k: int
    H: tuple[int, ...]
    p1: int


def cyclotomic_class_membership(field: FieldSpec, k: int, i: int, x: FieldElement) -> bool:
    """Whether x lies in C_i = gamma^i <gamma^k>."""
    if (field.q - 1) % k:
        raise BadParameters(f"{k} does not divide {field.q - 1}")
    if x.is_zero():
        raise ZeroElement("0 is in no cyclotomic class")
    y = x * field.gen ** ((-i) % (field.q - 1))
    return y ** ((field.q - 1) // k) == field.one


# ---------------------------------------------------------------------------
# the eleven sporadic examples

# No: (k, p, f, e)
TABLE1 = {
    1: (11, 3, 5, 2),
    2: (19, 5, 9, 2),
    3: (35, 3, 12, 2),
    4: (37, 7, 9, 4),
    5: (43, 11, 7, 6),
    6: (67, 17, 33, 2),
    7: (107, 3, 53, 2),
    8: (133, 5, 18, 6),
    9: (163, 41, 81, 2),
    10: (323, 3, 144, 2),
    11: (499, 5, 249, 2),
}

# rows that are verified numerically; No. 5 (11^7) sits just above 2^24
TABLE1_NUMERIC = {1, 2, 3, 5}


def build_table1(no: int) -> ConnectionSpec:
    if no not in TABLE1:
        raise BadParameters(f"the sporadic table has rows 1..11, not {no}")
    k, p, f, e = TABLE1[no]
    q = p**f
    meta = {"source": "table1", "params": {"no": no, "e": e}}
    if no in TABLE1_NUMERIC and q > VERIFY_CAP:
        meta["cap"] = q
    return ConnectionSpec(p, f, k, (0,), meta, no not in TABLE1_NUMERIC)


# ---------------------------------------------------------------------------
# index-2 and index-4 families

THM13_I = {(2, 7), (3, 107), (5, 19), (5, 499), (17, 67), (41, 163)}
THM13_II = {(3, 13), (7, 37)}
THM13_III = {(2, 3, 5), (3, 5, 7), (3, 17, 19)}
THM14_II_SKEW = {(3, 107)}
THM14_II_PALEY = {(5, 19), (17, 67), (41, 163), (5, 499)}


def _flag_unlisted(listed: bool, what: str) -> dict:
    if listed:
        return {}
    log.warning("%s is not among the listed parameters; the result is unproven", what)
    return {"unlisted": True}


def build_thm13(variant: str, p: int, p1: int, m: int, p2: int | None = None, n: int = 1) -> ConnectionSpec:
    if m < 1 or n < 1:
        raise BadParameters("m and n must be >= 1")
    params = {"variant": variant, "p": p, "p1": p1, "m": m}
    if variant in ("i", "ii"):
        k = p1**m
        num = p1 ** (m - 1) * (p1 - 1)
        div = 2 if variant == "i" else 4
        if num % div:
            raise BadParameters(f"{div} does not divide phi({k})")
        f = num // div
        I = range(p1 ** (m - 1))
        listed = (p, p1) in (THM13_I if variant == "i" else THM13_II)
        extra = _flag_unlisted(listed, f"(p, p1) = ({p}, {p1})")
    elif variant == "iii":
        if p2 is None:
            raise BadParameters("variant iii needs p2")
        params.update(p2=p2, n=n)
        k = p1**m * p2**n
        num = p1 ** (m - 1) * (p1 - 1) * p2 ** (n - 1) * (p2 - 1)
        if num % 2:
            raise BadParameters("phi(k) is odd")
        f = num // 2
        I = [(p2**n * i + p1**m * j) % k for i in range(p1 ** (m - 1)) for j in range(p2 ** (n - 1))]
        extra = _flag_unlisted((p, p1, p2) in THM13_III, f"(p, p1, p2) = ({p}, {p1}, {p2})")
    else:
        raise BadParameters(f"unknown variant {variant!r}")
    if pow(p, f, k) != 1:
        raise BadParameters(f"k={k} does not divide {p}^{f} - 1")
    return make_spec(p, f, k, I, f"thm13{variant}", params, predicted="srg", **extra)


def index2_subgroup(p1: int) -> list[int]:
    """Q: the squares in (Z/2p1 Z)^*, ascending."""
    n = 2 * p1
    return sorted({x * x % n for x in range(1, n) if gcd(x, n) == 1})


def standard_H(p1: int, extra: int = 0) -> tuple[int, ...]:
    """Q u 2Q u {extra}, taken mod 2p1."""
    Q = index2_subgroup(p1)
    n = 2 * p1
    return tuple(sorted(set(Q) | {2 * x % n for x in Q} | {extra % n}))


def validate_H(H: HSet, mode: str) -> bool:
    """residue-cover: H mod p1^m hits every class once (p1^m = k/2).
    vanishing-sum: sum of zeta_p1^i over H is 0."""
    if mode == "residue-cover":
        m = H.k // 2
        res = sorted(i % m for i in H.H)
        return res == list(range(m))
    if mode == "vanishing-sum":
        v = np.zeros(H.p1, dtype=np.int64)
        for i in H.H:
            v[i % H.p1] += 1
        return CycInt.from_group_ring(H.p1, v).is_zero()
    raise BadParameters(f"unknown mode {mode!r}")


def _shd_indices(p1: int, e1: int, H: Iterable[int]) -> list[int]:
    """{2 i1 + i k/h mod k : 0 <= i1 < p1^(e1-1), i in H} with k = 2 p1^e1, h = 2 p1."""
    k = 2 * p1**e1
    step = p1 ** (e1 - 1)
    out = [(2 * i1 + i * step) % k for i1 in range(p1 ** (e1 - 1)) for i in H]
    if len(set(out)) != len(out):
        raise DuplicateIndices("index set has repeated residues")
    return out


def build_thm14(
    variant: str,
    p: int,
    p1: int,
    m: int = 1,
    s: int = 1,
    H: Iterable[int] | None = None,
) -> ConnectionSpec:
    if m < 1:
        raise BadParameters("m must be >= 1")
    k = 2 * p1**m
    params = {"variant": variant, "p": p, "p1": p1, "m": m}
    if variant == "i":
        if p1 % 8 != 7 or not is_prime(p1):
            raise BadParameters(f"p1={p1} must be a prime = 7 mod 8")
        if s < 1 or s % 2 == 0:
            raise BadParameters(f"s={s} must be odd")
        if gcd(p, k) != 1:
            raise BadParameters(f"p={p} divides k={k}")
        f0 = multiplicative_order(p, k)
        if 2 * f0 != euler_phi(k):
            raise BadParameters(f"ord_{k}({p}) = {f0}, not phi(k)/2")
        Hs = tuple(range(p1**m)) if H is None else tuple(H)
        if any(not 0 <= i < k for i in Hs) or not validate_H(HSet(k, Hs, p1), "residue-cover"):
            raise InvalidH(f"H must reduce to each residue mod {p1**m} exactly once")
        params.update(s=s, H=list(Hs))
        predicted = "skew_hadamard" if p % 4 == 3 else "paley_pds"
        return make_spec(p, f0 * s, k, Hs, "thm14i", params, predicted=predicted)
    if variant == "ii":
        f = p1 ** (m - 1) * (p1 - 1) // 2
        if pow(p, f, k) != 1:
            raise BadParameters(f"k={k} does not divide {p}^{f} - 1")
        Hs = standard_H(p1) if H is None else tuple(H)
        params["H"] = list(Hs)
        I = _shd_indices(p1, m, Hs)
        if (p, p1) in THM14_II_SKEW:
            extra = {"predicted": "skew_hadamard"}
        elif (p, p1) in THM14_II_PALEY:
            extra = {"predicted": "paley_pds"}
        else:
            extra = _flag_unlisted(False, f"(p, p1) = ({p}, {p1})")
        return make_spec(p, f, k, I, "thm14ii", params, union_bound="exclusive", **extra)
    raise BadParameters(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# general families


def build_srg_family(p: int, primes: Iterable[tuple[int, int]], e: int | None = None) -> ConnectionSpec:
    """k = prod p_j^e_j with D the union over sums of i_j n_j, 0 <= i_j < p_j^(e_j - 1)."""
    primes = [(int(r), int(x)) for r, x in primes]
    if not primes or any(x < 1 for _, x in primes):
        raise BadParameters("need at least one (prime, exponent >= 1)")
    rs = [r for r, _ in primes]
    if len(set(rs)) != len(rs) or any(r == 2 or not is_prime(r) for r in rs):
        raise BadParameters("primes must be distinct odd primes")
    h = 1
    k = 1
    for r, x in primes:
        h *= r
        k *= r**x
    if gcd(p, k) != 1:
        raise HypothesisFailed(f"p={p} divides k={k}")
    eh = index_of(p, h)
    if e is None:
        e = eh
    if eh != e:
        raise HypothesisFailed(f"index of <{p}> mod h={h} is {eh}, not {e}")
    if not check_index_stability(p, h, k):
        raise HypothesisFailed(f"index of <{p}> is not stable from h={h} to k={k}")
    if index_of(p, k) != e:
        raise HypothesisFailed(f"index of <{p}> mod k={k} is {index_of(p, k)}, not {e}")
    if gcd(k, p - 1) != 1:
        raise HypothesisFailed(f"gcd(k, p-1) = {gcd(k, p - 1)} != 1")
    checked = []
    for r, x in primes:
        if x > 1:
            hj = h // r
            s = _minus_one_exponent(p, hj)
            if s is None:
                raise HypothesisFailed(f"no s with {p}^s = -1 (mod {hj})")
            checked.append({"h_j": hj, "s_j": s})
    ns = [k // r**x for r, x in primes]
    ranges = [range(r ** (x - 1)) for r, x in primes]
    I = sorted({sum(i * n for i, n in zip(combo, ns)) % k for combo in product(*ranges)})
    f = euler_phi(k) // e
    params = {"p": p, "primes": [list(t) for t in primes], "e": e}
    return make_spec(p, f, k, I, "srg_family", params, predicted="srg", semiprimitive=checked)


def _minus_one_exponent(p: int, n: int) -> int | None:
    if n <= 2:
        return 1
    x = 1
    for s in range(1, n + 1):
        x = x * p % n
        if x == n - 1:
            return s
        if x == 1:
            return None
    return None


def default_shd_H(p: int, p1: int) -> tuple[int, ...]:
    """The H used for the known index-4 seeds: Q u 2Q u {p1} for (3, 13), Q u 2Q u {0} otherwise."""
    return standard_H(p1, p1 if (p, p1) == (3, 13) else 0)


def build_shd_family(
    p: int, p1: int, e1: int = 1, e: int | None = None, H: Iterable[int] | None = None
) -> ConnectionSpec:
    if not is_prime(p1) or p1 == 2:
        raise BadParameters(f"p1={p1} must be an odd prime")
    if e1 < 1:
        raise BadParameters("e1 must be >= 1")
    h = 2 * p1
    k = 2 * p1**e1
    if gcd(p, k) != 1:
        raise HypothesisFailed(f"p={p} divides k={k}")
    eh = index_of(p, h)
    if e is None:
        e = eh
    if eh != e:
        raise HypothesisFailed(f"index of <{p}> mod h={h} is {eh}, not {e}")
    if index_of(p, k) != e:
        raise HypothesisFailed(f"index of <{p}> mod k={k} is {index_of(p, k)}, not {e}")
    if gcd(k // 2, p - 1) != 1:
        raise HypothesisFailed(f"gcd(k/2, p-1) = {gcd(k // 2, p - 1)} != 1")
    Hs = default_shd_H(p, p1) if H is None else tuple(int(i) for i in H)
    if any(not 0 <= i < h for i in Hs) or len(set(Hs)) != len(Hs):
        raise InvalidH(f"H must be a set of residues in [0, {h})")
    if not validate_H(HSet(h, Hs, p1), "vanishing-sum"):
        raise InvalidH("sum of zeta_p1^i over H is not zero")
    I = _shd_indices(p1, e1, Hs)
    f = euler_phi(k) // e
    params = {"p": p, "p1": p1, "e1": e1, "e": e, "H": list(Hs)}
    return make_spec(p, f, k, I, "shd_family", params, union_bound="exclusive")


def lift_index_set(spec: ConnectionSpec, p1: int, e1: int) -> ConnectionSpec:
    """k' = k p1 and I' = {i p1 + j k/p1^e1 mod k' : i in I, 0 <= j < p1}."""
    k = spec.k
    if e1 < 1 or k % p1**e1 or k % p1 ** (e1 + 1) == 0:
        raise HypothesisFailed(f"{p1}^{e1} must divide k={k} exactly")
    e = index_of(spec.p, k)
    if spec.f * e != euler_phi(k):
        raise HypothesisFailed(f"f={spec.f} is not phi(k)/e = {euler_phi(k) // e}")
    kp = k * p1
    if index_of(spec.p, kp) != e:
        raise HypothesisFailed(f"index of <{spec.p}> changes from k={k} to k'={kp}")
    step = k // p1**e1
    out = [(i * p1 + j * step) % kp for i in spec.I for j in range(p1)]
    if len(set(out)) != len(out):
        raise DuplicateIndices("lifted index set has repeated residues")
    f = euler_phi(kp) // e
    params = {"p1": p1, "e1": e1, "base": {"p": spec.p, "f": spec.f, "k": k, "I": list(spec.I)}}
    extra = {}
    if "predicted" in spec.meta:
        extra["predicted"] = spec.meta["predicted"]
    return make_spec(spec.p, f, kp, out, "lift", params, base_source=spec.meta.get("source"), **extra)


def lift_repeatedly(spec: ConnectionSpec, times: int, p1: int | None = None) -> ConnectionSpec:
    """Apply lift_index_set ``times`` times along p1 (default: the only odd prime of k)."""
    if p1 is None:
        odd = [r for r in prime_factors(spec.k) if r != 2]
        if len(odd) != 1:
            raise BadParameters(f"k={spec.k} has {len(odd)} odd primes; name the one to lift along")
        p1 = odd[0]
    for _ in range(times):
        e1 = 0
        m = spec.k
        while m % p1 == 0:
            m //= p1
            e1 += 1
        spec = lift_index_set(spec, p1, e1)
    return spec
