"""Multiplicative and additive characters and the character sums built from them.

Every sum is evaluated by brute force over a field with a dlog table, using
complex doubles and correctly rounded summation (``math.fsum`` on real and
imaginary parts).  Multiplicative characters vanish at 0, including the
trivial one; additive sums include 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ffield import FieldCtx, FieldElem, FieldExtension, is_square
from .zarith import is_prime, prime_power

TOL_PER_TERM = 1e-6


@dataclass(frozen=True)
class SumValue:
    """A character sum with its number of summands.

    ``exact`` marks values known to be integers (degenerate sums).
    """

    value: complex
    terms: int
    exact: bool = False
    note: str = ""

    @property
    def tolerance(self) -> float:
        return 0.0 if self.exact else max(TOL_PER_TERM * self.terms, 1e-9)

    def __abs__(self) -> float:
        return abs(self.value)

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    def isclose(self, other, tol: float | None = None) -> bool:
        other = other.value if isinstance(other, SumValue) else other
        tol = self.tolerance if tol is None else tol
        return abs(self.value - complex(other)) <= max(tol, 1e-9)


def csum(values) -> complex:
    """Correctly rounded sum of a complex array."""
    arr = np.asarray(values, dtype=np.complex128)
    return complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist()))


@dataclass(frozen=True, eq=False)
class CharSpec:
    """The character ``g**t -> exp(2*pi*i*j*t/(|F|-1))`` for the field's fixed generator ``g``."""

    ctx: FieldCtx
    j: int

    @property
    def order(self) -> int:
        n = self.ctx.order
        return n // math.gcd(n, self.j % n)

    d = order

    def is_trivial(self) -> bool:
        return self.j % self.ctx.order == 0

    def __mul__(self, other: "CharSpec") -> "CharSpec":
        if other.ctx is not self.ctx:
            raise ValueError("characters of different fields")
        return CharSpec(self.ctx, (self.j + other.j) % self.ctx.order)

    def conj(self) -> "CharSpec":
        return CharSpec(self.ctx, (-self.j) % self.ctx.order)

    def values(self) -> np.ndarray:
        """Complex array indexed by element index; entry 0 is 0."""
        return _char_values(self.ctx, self.j % self.ctx.order)

    def __call__(self, x: FieldElem) -> complex:
        if x.ctx is not self.ctx:
            raise ValueError("element of a different field")
        if x.is_zero():
            return 0j
        t = self.ctx.dlog(x)
        return cmath.exp(2j * math.pi * ((self.j * t) % self.ctx.order) / self.ctx.order)

    def __repr__(self) -> str:
        return f"CharSpec(F_{self.ctx.p}^{self.ctx.k}, order={self.order}, j={self.j})"


@lru_cache(maxsize=256)
def _char_values(ctx: FieldCtx, j: int) -> np.ndarray:
    _, dlog = ctx.log_tables()
    n = ctx.order
    out = np.zeros(ctx.size, dtype=np.complex128)
    t = dlog[1:]
    out[1:] = np.exp(2j * np.pi * ((j * t) % n) / n)
    out.setflags(write=False)
    return out


def characters(ctx: FieldCtx, d: int) -> list[CharSpec]:
    """All characters of exact order ``d``, by increasing index ``j``."""
    n = ctx.order
    if n % d:
        raise ValueError(f"{d} does not divide {n}")
    step = n // d
    return [CharSpec(ctx, step * u) for u in range(d) if math.gcd(u, d) == 1]


def trivial_character(ctx: FieldCtx) -> CharSpec:
    return CharSpec(ctx, 0)


def quadratic_character(ctx: FieldCtx) -> CharSpec:
    if ctx.p == 2:
        raise ValueError("no quadratic character in characteristic 2")
    return CharSpec(ctx, ctx.order // 2)


def order4_characters(ctx: FieldCtx) -> tuple[CharSpec, CharSpec]:
    """The two characters of order 4, indices N/4 and 3N/4."""
    n = ctx.order
    if n % 4:
        raise ValueError("field has no character of order 4")
    return CharSpec(ctx, n // 4), CharSpec(ctx, 3 * n // 4)


# -- additive characters -----------------------------------------------------


@lru_cache(maxsize=64)
def psi_values(ctx: FieldCtx) -> np.ndarray:
    """Canonical additive character ``exp(2*pi*i*Tr_0(x)/p)`` on every element index."""
    coords = ctx.decode(np.arange(ctx.size, dtype=np.int64))
    tr0 = (coords @ ctx.absolute_trace_vector()) % ctx.p
    out = np.exp(2j * np.pi * tr0 / ctx.p)
    out.setflags(write=False)
    return out


def canonical_psi(ctx: FieldCtx, x: FieldElem) -> complex:
    """Canonical additive character; on F_{q^n} this equals the lift ``psi(Tr(x))``."""
    if x.ctx is not ctx:
        raise ValueError("element of a different field")
    return complex(psi_values(ctx)[ctx.index(x)])


def _scaled_square_indices(ctx: FieldCtx, u: FieldElem) -> np.ndarray:
    """Indices of ``u * x**2`` for every nonzero ``x``, ordered by element index."""
    exp, dlog = ctx.log_tables()
    n = ctx.order
    t = dlog[1:]
    if u.is_zero():
        return np.zeros(n, dtype=np.int64)
    return exp[(2 * t + dlog[ctx.index(u)]) % n]


# -- sums --------------------------------------------------------------------


def gauss_quadratic(ctx: FieldCtx, u: FieldElem) -> SumValue:
    """``g(u) = sum over all x of psi(u x^2)``."""
    if u.is_zero():
        return SumValue(complex(ctx.size), ctx.size, exact=True, note="degenerate: u = 0")
    psi = psi_values(ctx)
    total = 1.0 + csum(psi[_scaled_square_indices(ctx, u)])
    return SumValue(total, ctx.size)


def gauss_general(ctx: FieldCtx, chi: CharSpec) -> SumValue:
    """``G(chi) = sum chi(x) psi(x)``."""
    if chi.is_trivial():
        return SumValue(-1 + 0j, ctx.order, exact=True, note="trivial character")
    return SumValue(csum(chi.values() * psi_values(ctx)), ctx.order)


def mixed_sum_X(ctx: FieldCtx, chi: CharSpec, u: FieldElem) -> SumValue:
    """``X_u(chi) = sum over x != 0 of chi(x) psi(u x^2)``."""
    if chi.ctx is not ctx or u.ctx is not ctx:
        raise ValueError("character and element must live in ctx")
    chi_v = chi.values()[1:]
    if u.is_zero():
        return SumValue(csum(chi_v), ctx.order)
    psi = psi_values(ctx)
    return SumValue(csum(chi_v * psi[_scaled_square_indices(ctx, u)]), ctx.order)


def katz_sum(ext: FieldExtension, theta: FieldElem, chi: CharSpec) -> SumValue:
    """``B = sum over alpha in F_q of chi(theta + alpha)`` for ``F_{q^2} = F_q(theta)``."""
    if ext.n != 2:
        raise ValueError("katz_sum needs a quadratic extension")
    if ext.in_base(theta):
        raise ValueError("theta must generate F_{q^2} over F_q")
    if chi.is_trivial():
        raise ValueError("katz_sum needs a nontrivial character")
    top = ext.top
    idx = [top.index(theta + ext.embed(a)) for a in ext.base.elements()]
    return SumValue(csum(chi.values()[np.array(idx, dtype=np.int64)]), ext.q)


def C_sum(ctx: FieldCtx, chi: CharSpec) -> SumValue:
    """``C(chi) = sum chi(x) chi_2(x^2 - 1)``."""
    exp, dlog = ctx.log_tables()
    eta = quadratic_character(ctx).values()
    sq = ctx.decode(exp[(2 * dlog[1:]) % ctx.order])
    shifted = sq.copy()
    shifted[:, 0] = (shifted[:, 0] - 1) % ctx.p
    return SumValue(csum(chi.values()[1:] * eta[ctx.encode(shifted)]), ctx.order)


def modulus_identity_check(ctx: FieldCtx, chi: CharSpec, b: FieldElem) -> tuple[float, complex, SumValue]:
    """Both sides of ``|X_b(chi)|^2 = (1 + chi(-1)) q^n + chi_2(b) G(chi_2) C(chi)``.

    Returns ``(lhs, rhs, C)`` and raises if ``|C(chi)| > 2 q^{n/2}``.
    """
    if chi.is_trivial():
        raise ValueError("identity needs a nontrivial character")
    if b.is_zero():
        raise ValueError("b must be nonzero")
    lhs = abs(mixed_sum_X(ctx, chi, b).value) ** 2
    eta = quadratic_character(ctx)
    G = gauss_general(ctx, eta).value
    C = C_sum(ctx, chi)
    rhs = (1 + chi(-ctx.one)) * ctx.size + eta(b) * G * C.value
    if abs(C) > 2 * math.sqrt(ctx.size) + C.tolerance:
        raise AssertionError(f"|C(chi)| = {abs(C)} exceeds 2 q^(n/2)")
    return lhs, rhs, C


def paired_sums(ext: FieldExtension, chi: CharSpec, c: FieldElem) -> tuple[float, float]:
    """``(|X_1(chi)|, |X_c(chi)|)`` on F_{q^n} for ``c`` in F_q."""
    top = ext.top
    return abs(mixed_sum_X(top, chi, top.one)), abs(mixed_sum_X(top, chi, ext.embed(c)))


def paired_sum_bound_check(ext: FieldExtension, chi: CharSpec, c: FieldElem) -> bool:
    """``|X_1(chi)| + |X_c(chi)| <= 2 sqrt(2) q^{n/2}`` for a nonsquare ``c`` of F_q."""
    if ext.q % 4 != 1 or ext.n % 2 == 0:
        raise ValueError("needs q = 1 mod 4 and odd n")
    if is_square(c):
        raise ValueError("c must be a nonsquare in F_q")
    a, b = paired_sums(ext, chi, c)
    tol = 2 * TOL_PER_TERM * ext.top.order
    return a + b <= 2 * math.sqrt(2) * math.sqrt(ext.top.size) + tol


# -- predicted signs ---------------------------------------------------------


def eps1(q: int) -> int:
    """Sign of the quadratic Gauss sum of F_{q^2}: +1 iff q = 3 mod 4."""
    if q % 2 == 0:
        raise ValueError("q must be odd")
    return 1 if q % 4 == 3 else -1


def eps2(q: int) -> int:
    """Sign of the quadratic Gauss sum of F_{q^n}, n odd, when it is real.

    ``q = p**a`` counts as a square when ``a`` is even and a fourth power when
    ``4 | a``.  Undefined (imaginary sum) for ``p = 3 mod 4`` with ``a`` odd.
    """
    p, a = prime_power(q)
    if p == 2:
        raise ValueError("q must be odd")
    if p % 4 == 1:
        return 1 if a % 2 else -1
    if a % 2:
        raise ValueError(f"Gauss sum over F_{q}^n is not real for odd n")
    return 1 if a % 4 == 2 else -1


def predicted_gauss_quadratic(q: int, n: int) -> float:
    """``g_n(1)`` from the sign tables: ``eps1 * q`` for n = 2, ``eps2 * q^{n/2}`` for odd n."""
    if n == 2:
        return eps1(q) * q
    if n == 1 or (n % 2 == 1 and is_prime(n)):
        return eps2(q) * q ** (n / 2)
    raise ValueError("sign prediction only for n = 2 or n odd prime")
