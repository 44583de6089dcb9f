"""Arithmetic in the unit group (Z/nZ)^*.

Orders, subgroup indices, coset representatives of <p>, semi-primitivity,
and the index-stability condition used by the lifting constructions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd, isqrt

from .errors import BadSupport, NotCoprime


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n by trial division, as ((prime, exponent), ...)."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    m = n
    for d in (2, 3):
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
    d = 5
    step = 2
    while d <= isqrt(m):
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += step
        step = 6 - step
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def prime_factors(n: int) -> list[int]:
    return [r for r, _ in factorize(n)]


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    result = n
    for r, _ in factorize(n):
        result = result // r * (r - 1)
    return result


def divisors(n: int) -> list[int]:
    divs = [1]
    for r, e in factorize(n):
        divs = [d * r**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def radical(n: int) -> int:
    out = 1
    for r in prime_factors(n):
        out *= r
    return out


def multiplicative_order(p: int, n: int) -> int:
    """Order of p in (Z/nZ)^*; 1 for n in {1, 2}."""
    if n < 1:
        raise ValueError("modulus must be positive")
    if n == 1:
        return 1
    if gcd(p, n) != 1:
        raise NotCoprime(f"gcd({p}, {n}) != 1")
    order = euler_phi(n)
    for r, _ in factorize(order):
        while order % r == 0 and pow(p, order // r, n) == 1:
            order //= r
    return order


def index_of(p: int, n: int) -> int:
    """Index [(Z/nZ)^* : <p>]."""
    return euler_phi(n) // multiplicative_order(p, n)


@dataclass(frozen=True)
class SubgroupProfile:
    n: int
    p: int
    order_f: int
    index_e: int
    coset_reps: tuple[int, ...]
    semiprimitive: bool


def _check(p: int, n: int) -> None:
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    if gcd(p, n) != 1:
        raise NotCoprime(f"gcd({p}, {n}) = {gcd(p, n)}")


def subgroup_profile(p: int, n: int) -> SubgroupProfile:
    _check(p, n)
    f = multiplicative_order(p, n)
    subgroup = [pow(p, i, n) for i in range(f)]
    covered = bytearray(n)
    reps = []
    for r in range(n):
        if covered[r] or gcd(r, n) != 1:
            continue
        reps.append(r)
        for s in subgroup:
            covered[r * s % n] = 1
    return SubgroupProfile(
        n=n,
        p=p,
        order_f=f,
        index_e=euler_phi(n) // f,
        coset_reps=tuple(reps),
        semiprimitive=is_semiprimitive(p, n),
    )


def semiprimitive_exponent(p: int, n: int) -> int | None:
    """Smallest s >= 1 with p^s = -1 (mod n), or None."""
    _check(p, n)
    f = multiplicative_order(p, n)
    x = 1
    for s in range(1, f + 1):
        x = x * p % n
        if x == n - 1 or n == 2:
            return s
    return None


def is_semiprimitive(p: int, n: int) -> bool:
    return semiprimitive_exponent(p, n) is not None


def _two_adic(n: int) -> tuple[int, int]:
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    return t, n


def check_index_stability(p: int, h: int, k: int) -> bool:
    """Whether the index of <p> is unchanged when the odd prime powers of a divisor grow.

    ``h`` is 2^t times a squarefree odd number and ``k`` must share its odd
    prime support and its power of two.  For every divisor d of h and every
    divisor d' of k with the same 2-part and the same odd primes as d, the
    indices of <p> modulo d and modulo d' must agree.
    """
    if gcd(p, k) != 1 or gcd(p, h) != 1:
        raise NotCoprime(f"p={p} must be coprime to h={h} and k={k}")
    th, h_odd = _two_adic(h)
    tk, k_odd = _two_adic(k)
    if th != tk:
        raise BadSupport(f"2-parts differ: 2^{th} | h but 2^{tk} | k")
    if any(e > 1 for _, e in factorize(h_odd)) if h_odd > 1 else False:
        raise BadSupport(f"odd part of h={h} is not squarefree")
    odd_primes = prime_factors(h_odd) if h_odd > 1 else []
    k_fact = dict(factorize(k_odd)) if k_odd > 1 else {}
    if sorted(k_fact) != odd_primes:
        raise BadSupport(f"odd prime supports differ: h={h}, k={k}")

    for s in range(th + 1):
        two = 2**s
        for mask in product((0, 1), repeat=len(odd_primes)):
            chosen = [r for r, bit in zip(odd_primes, mask) if bit]
            d = two
            for r in chosen:
                d *= r
            if d == 1:
                continue
            base_index = index_of(p, d)
            for exps in product(*(range(1, k_fact[r] + 1) for r in chosen)):
                d2 = two
                for r, x in zip(chosen, exps):
                    d2 *= r**x
                if index_of(p, d2) != base_index:
                    return False
    return True
