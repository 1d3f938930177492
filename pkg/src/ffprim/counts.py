"""Exact counts of squares and 2-primitive elements by trace.

Brute-force censuses stream the powers of the generator through the trace
matrix with numpy.  The character expansions evaluate the same counts through
:mod:`ffprim.chars`, so the two routes check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import chars
from .chars import CharSpec, characters, csum, psi_values
from .ffield import FieldElem, FieldExtension, format_elem, is_m_free, is_square
from .zarith import factorize, is_prime, squarefree_divisors, theta


@dataclass
class TraceCensus:
    """Per-trace counts of the elements of F_{q^n} satisfying ``label``.

    ``counts[b]`` is the count for the base-field element of index ``b``.
    ``complete`` is False when enumeration stopped early, in which case the
    counts are lower bounds.
    """

    q: int
    n: int
    label: str
    counts: np.ndarray
    complete: bool = True
    scanned: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def support(self) -> frozenset[int]:
        return frozenset(int(b) for b in np.flatnonzero(self.counts))

    def __getitem__(self, beta) -> int:
        return int(self.counts[_beta_index(beta)])

    def merge(self, other: "TraceCensus") -> "TraceCensus":
        if (self.q, self.n, self.label) != (other.q, other.n, other.label):
            raise ValueError("cannot merge censuses of different kinds")
        return TraceCensus(
            self.q,
            self.n,
            self.label,
            self.counts + other.counts,
            self.complete and other.complete,
            self.scanned + other.scanned,
        )

    def formatted_support(self, ext: FieldExtension) -> list[str]:
        return [format_elem(ext.base.element(b)) for b in sorted(self.support())]


def _beta_index(beta) -> int:
    if isinstance(beta, FieldElem):
        return beta.ctx.index(beta)
    return int(beta)


def _beta_elem(ext: FieldExtension, beta) -> FieldElem:
    if isinstance(beta, FieldElem):
        if beta.ctx is not ext.base:
            raise ValueError("beta must lie in the base field")
        return beta
    return ext.base.element(int(beta))


def _is_even_pair(q: int, n: int) -> bool:
    return ((q**n - 1) // 2) % 2 == 0


# -- squares with prescribed trace ---------------------------------------------


def m_beta_closed(q: int, n: int, beta) -> int:
    """Number of nonzero squares of F_{q^n} with trace ``beta`` (even pairs, n prime)."""
    from .ffield import extension

    if q % 2 == 0:
        raise ValueError("q must be odd")
    if not is_prime(n):
        raise ValueError(f"closed form needs prime n, got {n}")
    if not _is_even_pair(q, n):
        raise ValueError(f"({q}, {n}) is an odd pair")
    ext = extension(q, 1)
    b = _beta_elem(ext, beta)
    if n == 2:
        if b.is_zero():
            raise ValueError("closed form for n = 2 needs beta != 0")
        return (q - chars.eps1(q)) // 2
    if b.is_zero():
        return (q ** (n - 1) - 1) // 2
    eta = 1 if is_square(b) else -1
    return (q ** (n - 1) + eta * q ** ((n - 1) // 2)) // 2


def _stream_traces(ext: FieldExtension, element: FieldElem, count: int, keep=None, stop=None):
    """Histogram of traces of ``element**t`` for ``t < count``, optionally masked by ``keep(t)``."""
    top = ext.top
    counts = np.zeros(ext.q, dtype=np.int64)
    scanned = 0
    for start, rows in top.power_blocks(element, count):
        tr = ext.trace_indices(rows)
        if keep is not None:
            tr = tr[keep(np.arange(start, start + rows.shape[0], dtype=np.int64))]
        counts += np.bincount(tr, minlength=ext.q)
        scanned = start + rows.shape[0]
        if stop is not None and stop(counts):
            return counts, False, scanned
    return counts, True, scanned


def square_census(ext: FieldExtension) -> TraceCensus:
    """Traces of the nonzero squares, each square counted once (``g**(2j)``, ``j < N/2``)."""
    top = ext.top
    counts, _, scanned = _stream_traces(ext, top.generator**2, top.order // 2)
    return TraceCensus(ext.q, ext.n, "nonzero-square", counts, True, scanned)


def m_beta_brute(ext: FieldExtension, beta) -> int:
    return square_census(ext)[_beta_index(beta)]


# -- 2-primitive elements ------------------------------------------------------


def two_primitive_census(ext: FieldExtension, targets=None) -> TraceCensus:
    """Traces of the elements of order ``N/2``: the ``g**(2j)`` with ``gcd(j, N/2) = 1``.

    With ``targets`` (base indices) enumeration stops once every target has
    appeared, and ``complete`` reports whether the scan was exhaustive.
    """
    top = ext.top
    half = top.order // 2
    target_idx = None if targets is None else np.array(sorted(targets), dtype=np.int64)

    def keep(t):
        return np.gcd(t, half) == 1

    def all_targets_seen(counts):
        return bool((counts[target_idx] > 0).all())

    stop = None if target_idx is None else all_targets_seen
    counts, complete, scanned = _stream_traces(ext, top.generator**2, half, keep, stop)
    return TraceCensus(ext.q, ext.n, "2-primitive", counts, complete, scanned)


def two_primitive_trace_set(ext: FieldExtension) -> frozenset[int]:
    """Exact set of base-field indices that occur as traces of 2-primitive elements."""
    return two_primitive_census(ext).support()


# -- weighted counts N_beta(m) -----------------------------------------------


def n_beta_brute(ext: FieldExtension, m: int, beta) -> int:
    """Number of m-free ``x`` in F_{q^n}^* with ``Tr(x^2) = beta``, by enumeration."""
    top = ext.top
    if top.order % m:
        raise ValueError(f"{m} does not divide q^n - 1")
    b = _beta_elem(ext, beta)
    return sum(1 for x in top.nonzero() if is_m_free(top, x, m) and ext.trace(x * x) == b)


def expansion_terms(ext: FieldExtension, m: int, beta) -> dict[int, complex]:
    """Per square-free ``d | m``: ``mu(d)/phi(d) * sum_chi sum_u conj(psi(u beta)) X_u(chi)``."""
    top, base = ext.top, ext.base
    if top.order % m:
        raise ValueError(f"{m} does not divide q^n - 1")
    b = _beta_elem(ext, beta)
    psi_base = psi_values(base)
    psi_top = psi_values(top)
    lifted = []
    for u in base.elements():
        weight = np.conj(psi_base[base.index(u * b)])
        if u.is_zero():
            lifted.append((weight, None))
        else:
            lifted.append((weight, psi_top[chars._scaled_square_indices(top, ext.embed(u))]))
    out = {}
    for d, mu, phi in squarefree_divisors(factorize(m)):
        acc = []
        for chi in characters(top, d):
            values = chi.values()[1:]
            for weight, psi_sq in lifted:
                X = csum(values) if psi_sq is None else csum(values * psi_sq)
                acc.append(weight * X)
        out[d] = mu / phi * csum(acc)
    return out


def n_beta_char_expansion(ext: FieldExtension, m: int, beta) -> float:
    """``N_beta(m)`` from the Vinogradov expansion; imaginary part must vanish."""
    terms = expansion_terms(ext, m, beta)
    value = theta(factorize(m)) / ext.q * csum(list(terms.values()))
    if abs(value.imag) > 1e-6 * ext.top.size:
        raise AssertionError(f"expansion has imaginary part {value.imag}")
    return value.real


# -- quadratic extensions: elements on the line t1 + alpha t2 -----------------


def q2_prime(q: int) -> int:
    """Square-free part of the odd part of ``q^2 - 1``."""
    f = factorize(q * q - 1)
    return math.prod(p for p in f.primes if p != 2)


def _line_indices(ext: FieldExtension, t1: FieldElem, t2: FieldElem) -> np.ndarray:
    top = ext.top
    return np.array([top.index(t1 + ext.embed(a) * t2) for a in ext.base.elements()], dtype=np.int64)


def q_r_count(ext: FieldExtension, r: int, t1: FieldElem, t2: FieldElem) -> int:
    """Number of ``alpha`` with ``t1 + alpha t2`` r-free, a square and not a fourth power."""
    if ext.n != 2:
        raise ValueError("q_r_count needs n = 2")
    if q2_prime(ext.q) % r:
        raise ValueError(f"{r} does not divide q2' = {q2_prime(ext.q)}")
    top = ext.top
    half, quarter = top.order // 2, top.order // 4
    total = 0
    for a in ext.base.elements():
        x = t1 + ext.embed(a) * t2
        if x.is_zero():
            continue
        if x**half == top.one and x**quarter != top.one and is_m_free(top, x, r):
            total += 1
    return total


def z_sum(ext: FieldExtension, chi: CharSpec, line: np.ndarray) -> complex:
    """``Z(chi) = Y(chi, chi_1) + Y(chi, chi_2) - Y(chi, eta_1) - Y(chi, eta_2)`` along the line."""
    top = ext.top
    eta1, eta2 = chars.order4_characters(top)
    signed = (
        (1, chars.trivial_character(top)),
        (1, chars.quadratic_character(top)),
        (-1, eta1),
        (-1, eta2),
    )
    return csum([sign * csum((chi * other).values()[line]) for sign, other in signed])


def q_r_char_expansion(ext: FieldExtension, r: int, t1: FieldElem, t2: FieldElem) -> float:
    """``Q_r = theta(r)/4 * sum_{d | r} mu(d)/phi(d) sum_chi Z(chi)``."""
    if q2_prime(ext.q) % r:
        raise ValueError(f"{r} does not divide q2' = {q2_prime(ext.q)}")
    line = _line_indices(ext, t1, t2)
    total = []
    for d, mu, phi in squarefree_divisors(factorize(r)):
        total.append(mu / phi * csum([z_sum(ext, chi, line) for chi in characters(ext.top, d)]))
    value = theta(factorize(r)) / 4 * csum(total)
    if abs(value.imag) > 1e-6 * ext.top.size:
        raise AssertionError(f"expansion has imaginary part {value.imag}")
    return value.real


def w2_minus_w4_expansion(x: FieldElem) -> complex:
    """``(1/2) sum_{delta | 4} l_delta sum_{ord chi = delta} chi(x)`` with weights 1/2, 1/2, -1/2."""
    ctx = x.ctx
    weights = {1: 0.5, 2: 0.5, 4: -0.5}
    return 0.5 * sum(w * sum(chi(x) for chi in characters(ctx, d)) for d, w in weights.items())

