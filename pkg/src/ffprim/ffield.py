"""Finite fields F_{p^k} in a power basis, subfield towers, trace and freeness.

A :class:`FieldCtx` is built once per ``(p, k)`` and cached, so contexts can be
compared by identity.  Elements are coefficient tuples over F_p; each element
also has an integer index ``sum(c_i * p**i)`` used by tables and enumeration.
A relative extension F_{q^n}/F_q with ``q = p**a`` is represented by
:class:`FieldExtension`, which builds F_{p^{an}} and embeds F_{p^a} into it.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .zarith import Factorization, factorize, is_prime, prime_power

DLOG_LIMIT = 1 << 24


# -- polynomials over F_p (coefficient lists, lowest degree first) -----------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, mod, p):
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i] % p
        if c:
            for j in range(k + 1):
                prod[i - k + j] -= c * mod[j]
        prod[i] = 0
    return [c % p for c in prod[:k]] + [0] * (k - len(prod[:k]))


def _poly_powmod(base, e, mod, p):
    k = len(mod) - 1
    result = [1] + [0] * (k - 1)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_divmod(a, b, p):
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return q, a


def _poly_gcd(a, b, p):
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        _, r = _poly_divmod(a, b, p)
        a, b = b, r
    return a


def is_irreducible(poly, p: int) -> bool:
    """Rabin's test: ``X^{p^k} = X`` mod f and ``gcd(X^{p^{k/r}} - X, f) = 1``."""
    poly = [c % p for c in poly]
    k = len(poly) - 1
    if k < 1 or poly[-1] == 0:
        return False
    if k == 1:
        return True
    x = [0, 1] + [0] * (k - 2)

    def frob_power(e):
        y = x
        for _ in range(e):
            y = _poly_powmod(y, p, poly, p)
        return y

    if frob_power(k) != x:
        return False
    for r, _ in factorize(k).factors:
        y = frob_power(k // r)
        diff = [(c - d) % p for c, d in zip(y, x)]
        if len(_poly_gcd(diff, poly, p)) != 1:
            return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Least monic irreducible of degree ``k``, ordering the lower coefficients as a base-p integer."""
    if (p, k) == (3, 2):
        return (1, 0, 1)
    for i in range(p**k):
        low = [(i // p**j) % p for j in range(k)]
        poly = low + [1]
        if k > 1 and low[0] == 0:
            continue
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError(f"no irreducible polynomial of degree {k} over F_{p}")


# -- linear algebra mod p ----------------------------------------------------


def _mat_inv_mod(a: list[list[int]], p: int) -> list[list[int]]:
    n = len(a)
    m = [[x % p for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col])
        m[col], m[piv] = m[piv], m[col]
        inv = pow(m[col][col], -1, p)
        m[col] = [x * inv % p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def _independent_rows(rows: list[list[int]], p: int) -> list[int]:
    """Indices of a maximal set of linearly independent rows, greedily from the top."""
    basis: list[list[int]] = []
    chosen = []
    for idx, row in enumerate(rows):
        v = [x % p for x in row]
        for b in basis:
            lead = next(i for i, x in enumerate(b) if x)
            if v[lead]:
                f = v[lead]
                v = [(x - f * y) % p for x, y in zip(v, b)]
        if any(v):
            lead = next(i for i, x in enumerate(v) if x)
            inv = pow(v[lead], -1, p)
            basis.append([x * inv % p for x in v])
            chosen.append(idx)
    return chosen


def _matpow_mod(m: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(m.shape[0], dtype=np.int64)
    base = m.copy()
    while e:
        if e & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        e >>= 1
    return result


# -- elements and contexts ---------------------------------------------------


class FieldElem:
    """An element of a :class:`FieldCtx`, stored as power-basis coordinates."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: "FieldCtx", coeffs):
        coeffs = tuple(int(c) % ctx.p for c in coeffs)
        if len(coeffs) != ctx.k:
            raise ValueError(f"expected {ctx.k} coordinates, got {len(coeffs)}")
        self.ctx = ctx
        self.coeffs = coeffs

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise ValueError("elements belong to different fields")
            return other
        if isinstance(other, int):
            return self.ctx.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.ctx, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.ctx, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return -(self - other)

    def __neg__(self):
        return FieldElem(self.ctx, [-a for a in self.coeffs])

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        return FieldElem(ctx, _poly_mulmod(list(self.coeffs), list(other.coeffs), ctx.modulus, ctx.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        ctx = self.ctx
        if e < 0:
            return self.inverse() ** (-e)
        if self.is_zero():
            return ctx.one if e == 0 else self
        e %= ctx.order
        return FieldElem(ctx, _poly_powmod(list(self.coeffs), e, ctx.modulus, ctx.p))

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.ctx.order - 1)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __int__(self) -> int:
        return self.ctx.index(self)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((id(self.ctx), self.coeffs))

    def __repr__(self) -> str:
        return f"FieldElem(F_{self.ctx.p}^{self.ctx.k}, {format_elem(self)})"


class FieldCtx:
    """The field F_{p^k} = F_p[X]/(modulus) with a fixed primitive element.

    Use :func:`build_field` rather than constructing directly; it caches one
    context per ``(p, k)``.
    """

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be positive")
        self.p = p
        self.k = k
        self.size = p**k
        self.order = self.size - 1
        self.modulus = smallest_irreducible(p, k)
        self.order_fact: Factorization = factorize(self.order) if self.order > 1 else Factorization(1, ())
        self._weights = [p**i for i in range(k)]
        self.generator = self._find_generator()
        self._tables = None
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, k={self.k})"

    # construction helpers
    def _find_generator(self) -> FieldElem:
        for idx in range(1, self.size):
            x = self.element(idx)
            if self.is_primitive(x):
                return x
        raise AssertionError("multiplicative group has no generator")

    def is_primitive(self, x: FieldElem) -> bool:
        if x.is_zero():
            return False
        return all(x ** (self.order // r) != self.one for r in self.order_fact.primes)

    # element constructors
    def element(self, value) -> FieldElem:
        """Element from an integer index or a coefficient sequence."""
        if isinstance(value, FieldElem):
            if value.ctx is not self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            value = int(value)
            if not 0 <= value < self.size:
                raise ValueError(f"index {value} out of range for field of size {self.size}")
            return FieldElem(self, [(value // w) % self.p for w in self._weights])
        return FieldElem(self, list(value))

    __call__ = element

    def scalar(self, c: int) -> FieldElem:
        """Image of the integer ``c`` under Z -> F_p -> F_{p^k}."""
        return FieldElem(self, [c] + [0] * (self.k - 1))

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, [0] * self.k)

    @property
    def one(self) -> FieldElem:
        return self.scalar(1)

    def index(self, x: FieldElem) -> int:
        return sum(c * w for c, w in zip(x.coeffs, self._weights))

    def elements(self) -> Iterator[FieldElem]:
        for idx in range(self.size):
            yield self.element(idx)

    def nonzero(self) -> Iterator[FieldElem]:
        for idx in range(1, self.size):
            yield self.element(idx)

    # linear maps
    def mul_matrix(self, x: FieldElem) -> np.ndarray:
        """k x k matrix over F_p of multiplication by ``x`` acting on column coordinates."""
        cols = []
        for j in range(self.k):
            basis = FieldElem(self, [int(i == j) for i in range(self.k)])
            cols.append((x * basis).coeffs)
        return np.array(cols, dtype=np.int64).T.copy()

    def frobenius_matrix(self, power: int = 1) -> np.ndarray:
        """Matrix of ``x -> x**(p**power)``."""
        cols = []
        for j in range(self.k):
            basis = FieldElem(self, [int(i == j) for i in range(self.k)])
            cols.append((basis ** (self.p**power)).coeffs)
        return np.array(cols, dtype=np.int64).T.copy()

    def encode(self, coords: np.ndarray) -> np.ndarray:
        """Integer indices of the rows of a coordinate array."""
        return coords @ np.array(self._weights, dtype=np.int64)

    def decode(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return np.stack([(idx // w) % self.p for w in self._weights], axis=-1)

    def absolute_trace_vector(self) -> np.ndarray:
        """Row vector ``tau`` with ``Tr_{F_{p^k}/F_p}(x) = tau . coords(x)``."""
        tau = []
        for j in range(self.k):
            basis = FieldElem(self, [int(i == j) for i in range(self.k)])
            tau.append(absolute_trace(basis))
        return np.array(tau, dtype=np.int64)

    # bulk enumeration
    def power_blocks(self, x: FieldElem | None = None, count: int | None = None, block: int = 1 << 18):
        """Yield ``(start, coords)`` with rows the coordinates of ``x**start, ..., x**(start+len-1)``.

        Defaults to the generator and ``count = order``, i.e. every nonzero element once.
        """
        if self.p >= 1 << 26:
            raise ValueError("bulk enumeration requires p < 2**26")
        x = self.generator if x is None else x
        count = self.order if count is None else count
        m = self.mul_matrix(x)
        first = np.zeros((1, self.k), dtype=np.int64)
        first[0, 0] = 1
        rows = first
        step = m
        # doubling: rows holds x^0..x^(L-1), step = M^L
        while rows.shape[0] < min(block, count):
            rows = np.concatenate([rows, (rows @ step.T) % self.p])
            step = (step @ step) % self.p
        rows = rows[: min(block, count)]
        advance = _matpow_mod(m, rows.shape[0], self.p).T
        start = 0
        while start < count:
            take = min(rows.shape[0], count - start)
            yield start, rows[:take]
            start += take
            if start < count:
                rows = (rows @ advance) % self.p

    def log_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """``(exp, dlog)`` with ``exp[t] = index(g**t)`` and ``dlog[index(x)] = t``.

        Built on first use; ``dlog[0]`` is -1.
        """
        if self.size > DLOG_LIMIT:
            raise ValueError(f"dlog table limited to fields of size <= 2**24, got {self.size}")
        with self._lock:
            if self._tables is None:
                exp = np.empty(self.order, dtype=np.int64)
                for start, rows in self.power_blocks():
                    exp[start : start + rows.shape[0]] = self.encode(rows)
                dlog = np.full(self.size, -1, dtype=np.int64)
                dlog[exp] = np.arange(self.order, dtype=np.int64)
                if (dlog[1:] < 0).any():
                    raise AssertionError("generator powers do not cover the field")
                exp.setflags(write=False)
                dlog.setflags(write=False)
                self._tables = (exp, dlog)
        return self._tables

    def dlog(self, x: FieldElem) -> int:
        if x.is_zero():
            raise ValueError("discrete log of zero")
        if self.size <= DLOG_LIMIT:
            return int(self.log_tables()[1][self.index(x)])
        raise ValueError("field too large for a dlog table")


@lru_cache(maxsize=None)
def build_field(p: int, k: int) -> FieldCtx:
    """The cached field F_{p^k}.

    The modulus is the least monic irreducible of degree ``k`` (X^2+1 for
    F_9) and the generator is the primitive element of smallest index.
    """
    return FieldCtx(p, k)


# -- traces and subfields ----------------------------------------------------


def frobenius(x: FieldElem, power: int = 1) -> FieldElem:
    return x ** (x.ctx.p**power)


def absolute_trace(x: FieldElem) -> int:
    """Trace of ``x`` down to the prime field, as an integer in ``[0, p)``."""
    total = x.ctx.zero
    y = x
    for _ in range(x.ctx.k):
        total = total + y
        y = frobenius(y)
    if any(total.coeffs[1:]):
        raise AssertionError("absolute trace left the prime field")
    return total.coeffs[0]


@dataclass(frozen=True, eq=False)
class Subfield:
    """The subfield F_{p^d} of a field F_{p^k} together with its embedding."""

    big: FieldCtx
    small: FieldCtx
    root: FieldElem  # image of X under the embedding
    embed_matrix: np.ndarray  # k x d
    restrict_matrix: np.ndarray  # d x k left inverse of embed_matrix

    def embed(self, x: FieldElem) -> FieldElem:
        if x.ctx is not self.small:
            raise ValueError("element is not in the subfield context")
        coords = (self.embed_matrix @ np.array(x.coeffs, dtype=np.int64)) % self.big.p
        return FieldElem(self.big, coords.tolist())

    def contains(self, x: FieldElem) -> bool:
        return frobenius(x, self.small.k) == x

    def restrict(self, x: FieldElem) -> FieldElem:
        """Coordinates in the subfield's own basis of an element lying in the subfield."""
        if not self.contains(x):
            raise ValueError("element does not lie in the subfield")
        coords = (self.restrict_matrix @ np.array(x.coeffs, dtype=np.int64)) % self.big.p
        return FieldElem(self.small, coords.tolist())


@lru_cache(maxsize=None)
def subfield(big: FieldCtx, d: int) -> Subfield:
    """Embed F_{p^d} (its own cached context) into ``big``; requires ``d | k``."""
    if d < 1 or big.k % d:
        raise ValueError(f"{d} does not divide the extension degree {big.k}")
    p = big.p
    small = build_field(p, d)
    if d == 1:
        root = big.zero
    else:
        # roots of small.modulus are powers of the norm of the generator
        h = big.generator ** (big.order // small.order)
        y = big.one
        for _ in range(small.order):
            value = big.zero
            for c in reversed(small.modulus):
                value = value * y + c
            if value.is_zero():
                root = y
                break
            y = y * h
        else:
            raise AssertionError("subfield modulus has no root in the big field")
    cols = [(root**j if j else big.one).coeffs for j in range(d)]
    emb = np.array(cols, dtype=np.int64).T.copy()
    rows = emb.tolist()
    pivots = _independent_rows(rows, p)
    inv = _mat_inv_mod([rows[i] for i in pivots], p)
    restrict = np.zeros((d, big.k), dtype=np.int64)
    for col, i in enumerate(pivots):
        for r in range(d):
            restrict[r, i] = inv[r][col]
    return Subfield(big, small, root, emb, restrict)


def trace_rel(big: FieldCtx, sub_degree: int, x: FieldElem) -> FieldElem:
    """Relative trace ``sum x**(p^(d*i))`` from ``big`` to its subfield of degree ``d``."""
    sub = subfield(big, sub_degree)
    if x.ctx is not big:
        raise ValueError("element not in the given field")
    total = big.zero
    y = x
    for _ in range(big.k // sub_degree):
        total = total + y
        y = frobenius(y, sub_degree)
    return sub.restrict(total)


class FieldExtension:
    """The pair F_{q^n} / F_q with ``q = p**a``, built as F_{p^{an}} over F_{p^a}."""

    def __init__(self, q: int, n: int):
        p, a = prime_power(q)
        if n < 1:
            raise ValueError("degree must be positive")
        self.q = q
        self.n = n
        self.p = p
        self.a = a
        self.top = build_field(p, a * n)
        self.base = build_field(p, a)
        self.sub = subfield(self.top, a)
        # Tr = sum of Frobenius^(a*i), composed with the restriction to F_q coordinates
        frob = self.top.frobenius_matrix(a)
        total = np.zeros_like(frob)
        power = np.eye(self.top.k, dtype=np.int64)
        for _ in range(n):
            total = (total + power) % p
            power = (frob @ power) % p
        self.trace_matrix = (self.sub.restrict_matrix @ total) % p
        self.trace_matrix.setflags(write=False)

    def __repr__(self) -> str:
        return f"FieldExtension(q={self.q}, n={self.n})"

    @property
    def Q(self) -> int:
        return (self.q**self.n - 1) // (self.q - 1)

    def embed(self, u) -> FieldElem:
        if isinstance(u, int):
            u = self.base.element(u)
        return self.sub.embed(u)

    def trace(self, x: FieldElem) -> FieldElem:
        if x.ctx is not self.top:
            raise ValueError("element not in the extension field")
        coords = (self.trace_matrix @ np.array(x.coeffs, dtype=np.int64)) % self.p
        return FieldElem(self.base, coords.tolist())

    def trace_indices(self, coords: np.ndarray) -> np.ndarray:
        """Base-field indices of the traces of the rows of a top-field coordinate array."""
        return self.base.encode((coords @ self.trace_matrix.T) % self.p)

    def base_elements(self) -> Iterator[FieldElem]:
        return self.base.elements()

    def in_base(self, x: FieldElem) -> bool:
        return self.sub.contains(x)


@lru_cache(maxsize=None)
def extension(q: int, n: int) -> FieldExtension:
    """Cached :class:`FieldExtension` for F_{q^n}/F_q."""
    return FieldExtension(q, n)


# -- orders and freeness -----------------------------------------------------


def element_order(ctx: FieldCtx, x: FieldElem) -> int:
    """Multiplicative order, by stripping prime factors of ``|F^*|``."""
    if x.is_zero():
        raise ValueError("zero has no multiplicative order")
    order = ctx.order
    for r, e in ctx.order_fact.factors:
        for _ in range(e):
            if x ** (order // r) == ctx.one:
                order //= r
            else:
                break
    return order


def is_m_free(ctx: FieldCtx, x: FieldElem, m: int) -> bool:
    if ctx.order % m:
        raise ValueError(f"{m} does not divide {ctx.order}")
    return math.gcd(m, ctx.order // element_order(ctx, x)) == 1


def is_two_primitive(ctx: FieldCtx, x: FieldElem) -> bool:
    """True when ``x`` has order exactly ``(|F| - 1) / 2``."""
    if ctx.p == 2:
        raise ValueError("2-primitive elements need odd characteristic")
    if x.is_zero():
        return False
    return element_order(ctx, x) == ctx.order // 2


def is_square(x: FieldElem) -> bool:
    """Nonzero square test by Euler's criterion."""
    ctx = x.ctx
    if x.is_zero():
        return False
    if ctx.p == 2:
        return True
    return x ** (ctx.order // 2) == ctx.one


def find_nonsquare(ctx: FieldCtx) -> FieldElem:
    # the first element with odd discrete log is the generator itself
    if ctx.p == 2:
        raise ValueError("every element of a binary field is a square")
    return ctx.generator


# -- constructive lemmas -----------------------------------------------------


def basis_with_traces(ext: FieldExtension, beta) -> tuple[FieldElem, FieldElem]:
    """F_q-basis ``(t1, t2)`` of F_{q^2} with ``Tr(t1) = beta`` and ``Tr(t2) = 0``."""
    if ext.n != 2:
        raise ValueError("basis_with_traces needs a quadratic extension")
    if isinstance(beta, int):
        beta = ext.base.element(beta)
    if beta.is_zero():
        raise ValueError("beta must be nonzero")
    top = ext.top
    t1 = next(x for x in top.nonzero() if ext.trace(x) == beta)
    t2_prime = next(x for x in top.nonzero() if not ext.in_base(x / t1))
    coeff = ext.trace(t2_prime) / beta
    t2 = t2_prime - ext.embed(coeff) * t1
    return t1, t2


def _free_primes_split(ext: FieldExtension, xi: FieldElem) -> tuple[int, int]:
    """Split ``q - 1 = L * M`` (coprime) with xi L-free and an r-th power for every prime r | M."""
    top = ext.top
    Q = ext.Q
    L = M = 1
    for r, e in factorize(ext.q - 1).factors if ext.q > 2 else ():
        part = r**e
        if Q % r == 0 or is_m_free(top, xi, r):
            L *= part
        else:
            M *= part
    return L, M


def scale_to_primitive(ext: FieldExtension, xi: FieldElem) -> FieldElem:
    """Least ``c`` in F_q^* (by index) with ``c * xi`` primitive, for Q-free ``xi``."""
    top = ext.top
    if not is_m_free(top, xi, ext.Q):
        raise ValueError("xi must be Q-free")
    for c in ext.base.nonzero():
        if top.is_primitive(ext.embed(c) * xi):
            return c
    raise AssertionError("no scalar makes a Q-free element primitive")


def scale_to_primitive_constructive(ext: FieldExtension, xi: FieldElem) -> FieldElem:
    """The explicit scalar ``c = gamma**(Q*L)`` for the fixed generator ``gamma``."""
    top = ext.top
    if not is_m_free(top, xi, ext.Q):
        raise ValueError("xi must be Q-free")
    L, _ = _free_primes_split(ext, xi)
    c = top.generator ** (ext.Q * L)
    result = ext.sub.restrict(c)
    if not top.is_primitive(c * xi):
        raise AssertionError("constructive scalar failed to give a primitive element")
    return result


# -- formatting --------------------------------------------------------------


def format_elem(x: FieldElem, symbol: str | None = None, signed: bool | None = None) -> str:
    """Human-readable element: an integer for prime fields, else a polynomial.

    F_9 defaults to the symbol ``i`` with balanced coefficients, matching
    ``i**2 = -1``.
    """
    ctx = x.ctx
    if ctx.k == 1:
        return str(x.coeffs[0])
    if symbol is None:
        symbol = "i" if (ctx.p, ctx.k) == (3, 2) else "x"
    if signed is None:
        signed = (ctx.p, ctx.k) == (3, 2)
    terms = []
    for j in range(ctx.k - 1, -1, -1):
        c = x.coeffs[j]
        if signed and c > ctx.p // 2:
            c -= ctx.p
        if c == 0:
            continue
        if j == 0:
            mono = str(abs(c)) if signed else str(c)
        else:
            base = symbol if j == 1 else f"{symbol}^{j}"
            mag = abs(c) if signed else c
            mono = base if mag == 1 else f"{mag}{base}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, mono))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, mono in terms[1:]:
        out += f"{sign}{mono}"
    return out
