"""Exact integer number theory used by the criteria: factorization, phi, W, c_ell.

All functions are pure and operate on Python integers; only :func:`c_ell`
and :func:`theta` return floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations
from operator import mul

FACTOR_BOUND = 1 << 96
_TRIAL_LIMIT = 1 << 12

# Deterministic Miller-Rabin: the first 13 primes are valid witnesses for
# every n < 3317044064679887385961981 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981
_MR_EXTRA_BASES = (43, 47, 53, 59, 61, 67, 71)


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


SMALL_PRIMES = _small_primes(_TRIAL_LIMIT)


def is_prime(n: int) -> bool:
    """Miller-Rabin primality test, deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in SMALL_PRIMES[:25]:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < _MR_DETERMINISTIC_BOUND else _MR_BASES + _MR_EXTRA_BASES
    for a in bases:
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


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite ``n``."""
    # Deterministic sequence of (seed, constant) pairs keeps factorize reproducible.
    for c in range(1, 200):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard-Brent failed to split {n}")


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of a positive integer.

    ``factors`` holds ``(prime, exponent)`` pairs with strictly increasing primes.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factor list {self.factors}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors {self.factors} do not multiply to {self.value}")

    @classmethod
    def from_primes(cls, primes) -> "Factorization":
        """Factorization of a square-free product of the given distinct primes."""
        ps = sorted(set(primes))
        return cls(reduce(mul, ps, 1), tuple((p, 1) for p in ps))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def nu(self) -> int:
        """Number of distinct prime divisors."""
        return len(self.factors)

    def restrict(self, predicate) -> "Factorization":
        """Square-free factorization of the product of primes satisfying ``predicate``."""
        return Factorization.from_primes(p for p in self.primes if predicate(p))

    def __contains__(self, p: int) -> bool:
        return any(p == q for q, _ in self.factors)


def factorize(t: int) -> Factorization:
    """Factor ``t`` with trial division followed by Pollard-Brent.

    >>> factorize(3124).factors
    ((2, 2), (11, 1), (71, 1))
    """
    if not isinstance(t, int) or isinstance(t, bool):
        raise TypeError(f"expected int, got {type(t).__name__}")
    if t < 1 or t >= FACTOR_BOUND:
        raise ValueError(f"factorize requires 1 <= t < 2**96, got {t}")
    return _factorize_cached(t)


@lru_cache(maxsize=65536)
def _factorize_cached(t: int) -> Factorization:
    found: dict[int, int] = {}
    n = t
    for p in SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    if n > 1:
        if n < _TRIAL_LIMIT * _TRIAL_LIMIT:
            found[n] = found.get(n, 0) + 1
        else:
            _split(n, found)
    return Factorization(t, tuple(sorted(found.items())))


def euler_phi(f: Factorization) -> int:
    result = 1
    for p, e in f.factors:
        result *= (p - 1) * p ** (e - 1)
    return result


def radical(f: Factorization) -> int:
    """Product of the distinct primes dividing ``f.value``."""
    return reduce(mul, f.primes, 1)


def squarefree_part(f: Factorization) -> int:
    # Freeness depends only on the set of primes, so the square-free part is
    # taken to be the radical throughout.
    return radical(f)


def W(f: Factorization) -> int:
    """Number of square-free divisors, ``2**nu``."""
    return 1 << f.nu


def mobius(f: Factorization) -> int:
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if f.nu % 2 else 1


def theta(f: Factorization) -> float:
    """phi(m)/m, returned as a float."""
    return float(theta_exact(f))


def theta_exact(f: Factorization) -> Fraction:
    result = Fraction(1)
    for p in f.primes:
        result *= Fraction(p - 1, p)
    return result


def squarefree_divisors(f: Factorization):
    """Yield ``(d, mu(d), phi(d))`` for every square-free divisor ``d``."""
    ps = f.primes
    for size in range(len(ps) + 1):
        for combo in combinations(ps, size):
            d = reduce(mul, combo, 1)
            phi = reduce(mul, (p - 1 for p in combo), 1)
            yield d, (-1) ** size, phi


def c_ell(f: Factorization, ell: int) -> float:
    """The constant with ``W(t) <= c_ell(t) * t**(1/ell)``.

    Only the distinct primes ``p <= 2**ell`` dividing ``t`` contribute:
    ``c_ell(t) = 2**j / (p_1 ... p_j)**(1/ell)``.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    small = [p for p in f.primes if p <= 1 << ell]
    prod = reduce(mul, small, 1)
    return 2.0 ** len(small) / prod ** (1.0 / ell)


def c_ell_sup(ell: int, allowed=None) -> float:
    """Supremum of ``c_ell`` over all t whose small primes lie in ``allowed``.

    Each prime ``p < 2**ell`` contributes a factor ``2 / p**(1/ell) > 1``, so the
    supremum is the product over every admissible prime below ``2**ell``.
    """
    bound = 1 << ell
    primes = [p for p in SMALL_PRIMES if p <= bound] if bound <= SMALL_PRIMES[-1] else _small_primes(bound)
    if allowed is not None:
        primes = [p for p in primes if allowed(p)]
    value = 1.0
    for p in primes:
        factor = 2.0 / p ** (1.0 / ell)
        if factor > 1.0:
            value *= factor
    return value


def primes_up_to(limit: int) -> list[int]:
    if limit <= SMALL_PRIMES[-1]:
        return [p for p in SMALL_PRIMES if p <= limit]
    return _small_primes(limit)


def odd_prime_powers(lo: int, hi: int) -> list[int]:
    """All odd prime powers ``p**a`` with ``lo <= p**a <= hi``, ascending."""
    out = []
    for p in primes_up_to(hi):
        if p == 2:
            continue
        x = p
        while x <= hi:
            if x >= lo:
                out.append(x)
            x *= p
    out.sort()
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, a)`` with ``q == p**a``; raise if ``q`` is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    f = factorize(q)
    if f.nu != 1:
        raise ValueError(f"{q} is not a prime power")
    return f.factors[0]
