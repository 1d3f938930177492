"""Sufficient conditions for a 2-primitive element with prescribed trace.

Each check returns a :class:`CriterionReport` holding both sides of the
decisive inequality and every intermediate quantity.  Inequalities are strict
and a pass within a relative ``1e-9`` of the boundary is demoted to a failure.

Theorem identifiers used in reports:

``odd-pair``            (q^n-1)/2 odd, reduce to primitive elements via x -> -x
``main``                q^{(n-1)/2} > 4W(q^n-1) - 2W(Q) - 1
``trace-zero``          q^{n/2} > 2W(Q)(q-1)
``sieve``               sieved main bound, coefficient 4 / 2
``sieve-sqrt2``         the same with 2*sqrt(2) / sqrt(2) (q = 1 mod 4, n odd)
``sieve-zero``          sieved trace-zero bound over Q, coefficient 2
``sieve-zero-sqrt2``    the same with sqrt(2)
``quadratic``           n = 2 bound on the line t1 + alpha t2
``quadratic-sieve``     its sieved form
``quadratic-simple``    sqrt(q) >= 4W(k)((s-1)/eps + 2)
``generic-*``           c_ell based bounds needing no factorization
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

from .zarith import (
    FACTOR_BOUND,
    W,
    c_ell_sup,
    factorize,
    is_prime,
    prime_power,
    primes_up_to,
    radical,
    theta,
)

MARGIN = 1e-9
SQRT2 = math.sqrt(2.0)

# Rounded constants, each checked against the exact supremum in c_ell_sup.
C4 = 4.87
C4_ODD = 2.9
C6 = 46.103
C6_Q3 = 5.1211

NONZERO = "nonzero"
ZERO = "zero"
BETA_CLASSES = (NONZERO, ZERO)


def holds(lhs: float, rhs: float) -> bool:
    """Strict ``lhs > rhs`` with the safety margin applied against passing."""
    return lhs - rhs > MARGIN * max(1.0, abs(lhs), abs(rhs))


def holds_weak(lhs: float, rhs: float) -> bool:
    """``lhs >= rhs`` with the same margin."""
    return lhs - rhs >= MARGIN * max(1.0, abs(lhs), abs(rhs))


# -- data types ----------------------------------------------------------------


@dataclass(frozen=True)
class PairClass:
    """Classification of ``(q, n)``.

    ``parity`` is ``odd``/``even`` for prime n and ``composite`` otherwise, in
    which case ``reduction`` lists the trace steps ``(base, degree)``; the last
    entry is the prime-degree pair that carries the existence question.
    """

    q: int
    n: int
    parity: str
    n_prime: bool
    reduction: tuple[tuple[int, int], ...] = ()
    special_case: bool = False
    theorems: tuple[str, ...] = ()

    @property
    def final_pair(self) -> tuple[int, int]:
        return self.reduction[-1] if self.reduction else (self.q, self.n)


@dataclass(frozen=True)
class SieveConfig:
    """A kernel ``k`` and sieving primes ``p_1 .. p_s`` with ``k * p_1 ... p_s`` the sieved radical.

    ``split`` is the modulus (Q, or q + 1 for n = 2) whose primes are counted
    by ``r`` and enter ``delta_split`` and ``k_split``.
    """

    kernel: tuple[int, ...]
    sieving: tuple[int, ...]
    split: int
    delta: float
    delta_split: float

    @classmethod
    def build(cls, kernel, sieving, split: int) -> "SieveConfig":
        kernel = tuple(sorted(kernel))
        sieving = tuple(sieving)
        if set(kernel) & set(sieving):
            raise ValueError("kernel and sieving primes overlap")
        delta = 1.0 - math.fsum(1.0 / p for p in sieving)
        delta_split = 1.0 - math.fsum(1.0 / p for p in sieving if split % p == 0)
        return cls(kernel, sieving, split, delta, delta_split)

    @property
    def s(self) -> int:
        return len(self.sieving)

    @property
    def r(self) -> int:
        return sum(1 for p in self.sieving if self.split % p == 0)

    @property
    def k(self) -> int:
        return math.prod(self.kernel)

    @property
    def k_split(self) -> int:
        return math.prod(p for p in self.kernel if self.split % p == 0)

    @property
    def W_k(self) -> int:
        return 1 << len(self.kernel)

    @property
    def W_k_split(self) -> int:
        return 1 << sum(1 for p in self.kernel if self.split % p == 0)

    @property
    def radical(self) -> int:
        return self.k * math.prod(self.sieving)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(s=self.s, r=self.r, k=self.k, k_split=self.k_split)
        return d


@dataclass
class CriterionReport:
    """Outcome of one inequality: verdict is ``holds``, ``fails`` or ``inapplicable``."""

    theorem: str
    q: int
    n: int
    beta_class: str
    lhs: float | None
    rhs: float | None
    verdict: str
    config: SieveConfig | None = None
    quantities: dict = field(default_factory=dict)
    attempts: list["CriterionReport"] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict == "holds"

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "q": self.q,
            "n": self.n,
            "beta_class": self.beta_class,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "verdict": self.verdict,
            "config": None if self.config is None else self.config.to_dict(),
            "quantities": self.quantities,
            "attempts": [a.to_dict() for a in self.attempts],
        }


def _report(theorem, q, n, beta_class, lhs, rhs, config=None, weak=False, **quantities) -> CriterionReport:
    ok = holds_weak(lhs, rhs) if weak else holds(lhs, rhs)
    return CriterionReport(theorem, q, n, beta_class, lhs, rhs, "holds" if ok else "fails", config, quantities)


# -- classification ------------------------------------------------------------


def _check_q(q: int) -> None:
    p, _ = prime_power(q)
    if p == 2:
        raise ValueError("q must be an odd prime power")


def is_even_pair(q: int, n: int) -> bool:
    return ((q**n - 1) // 2) % 2 == 0


def classify_pair(q: int, n: int) -> PairClass:
    _check_q(q)
    if n < 2:
        raise ValueError("n must be at least 2")
    if is_prime(n):
        if n % 2 and q % 4 == 3:
            return PairClass(q, n, "odd", True, theorems=("odd-pair",))
        if n == 2:
            theorems = ("main", "sieve", "quadratic", "quadratic-sieve")
        else:
            theorems = ("main", "trace-zero", "sieve-sqrt2", "sieve-zero-sqrt2", "sieve", "sieve-zero")
        return PairClass(q, n, "even", True, theorems=theorems)
    primes = []
    for p, e in factorize(n).factors:
        primes += [p] * e
    last = primes.pop()  # the largest prime carries the final prime-degree pair
    chain = []
    base = q
    for ell in primes:
        chain.append((base, ell))
        base = base**ell
    chain.append((base, last))
    special = chain[-1] == (9, 2)
    return PairClass(q, n, "composite", False, tuple(chain), special, ("prime-degree-reduction",))


# -- basic criteria ------------------------------------------------------------


def _require_even_prime(q: int, n: int) -> None:
    _check_q(q)
    if not is_prime(n):
        raise ValueError(f"n = {n} is not prime")
    if not is_even_pair(q, n):
        raise ValueError(f"({q}, {n}) is an odd pair")


def check_main(q: int, n: int) -> CriterionReport:
    """``q^{(n-1)/2} > 4W(q^n - 1) - 2W(Q) - 1``, for beta != 0."""
    _require_even_prime(q, n)
    N = q**n - 1
    Q = N // (q - 1)
    w_n, w_q = W(factorize(N)), W(factorize(Q))
    lhs = q ** ((n - 1) / 2)
    rhs = 4 * w_n - 2 * w_q - 1
    return _report("main", q, n, NONZERO, lhs, rhs, W_total=w_n, W_Q=w_q)


def check_O_star(q: int, n: int) -> CriterionReport:
    """``q^{n/2} > 2W(Q)(q-1)``, for beta = 0 and n an odd prime."""
    _require_even_prime(q, n)
    if n == 2:
        raise ValueError("the trace-zero bound needs odd n")
    Q = (q**n - 1) // (q - 1)
    w_q = W(factorize(Q))
    return _report("trace-zero", q, n, ZERO, q ** (n / 2), 2 * w_q * (q - 1), W_Q=w_q)


def sieve_radical(q: int, n: int, beta_class: str) -> tuple[tuple[int, ...], int]:
    """Primes being sieved and the split modulus for a sieve of the given class."""
    if n == 2:
        f = factorize(q * q - 1)
        return tuple(p for p in f.primes if p != 2), q + 1
    N = q**n - 1
    Q = N // (q - 1)
    if beta_class == NONZERO:
        return factorize(N).primes, Q
    return factorize(Q).primes, Q


def _select_theorem(q: int, n: int, beta_class: str) -> str:
    if beta_class == NONZERO:
        return "sieve-sqrt2" if q % 4 == 1 and n % 2 else "sieve"
    if n % 2 == 0:
        raise ValueError("the trace-zero sieve needs odd n")
    return "sieve-zero-sqrt2" if q % 4 == 1 else "sieve-zero"


def sieve_generic(q: int, n: int, beta_class: str, config: SieveConfig, theorem: str | None = None) -> CriterionReport:
    """Sieved forms of the main and trace-zero bounds.

    For beta != 0 the sieved radical is that of ``q^n - 1`` and the kernel
    must stay even; for beta = 0 it is the radical of Q.
    """
    _require_even_prime(q, n)
    if beta_class not in BETA_CLASSES:
        raise ValueError(f"unknown beta class {beta_class!r}")
    theorem = theorem or _select_theorem(q, n, beta_class)
    if theorem in ("sieve-sqrt2", "sieve-zero-sqrt2") and not (q % 4 == 1 and n % 2):
        raise ValueError(f"{theorem} needs q = 1 mod 4 and odd n")
    if beta_class == NONZERO and theorem not in ("sieve", "sieve-sqrt2"):
        raise ValueError(f"{theorem} does not apply to beta != 0")
    if beta_class == ZERO and theorem not in ("sieve-zero", "sieve-zero-sqrt2"):
        raise ValueError(f"{theorem} does not apply to beta = 0")
    N = q**n - 1
    Q = N // (q - 1)
    target = radical(factorize(N)) if beta_class == NONZERO else radical(factorize(Q))
    if config.radical != target or config.split != Q:
        raise ValueError(f"config does not partition the radical {target}")
    quantities = dict(
        delta=config.delta, delta_split=config.delta_split, s=config.s, r=config.r,
        W_k=config.W_k, W_k_split=config.W_k_split, theta_k=theta(factorize(config.k)),
    )
    if config.delta <= 0:
        return CriterionReport(theorem, q, n, beta_class, None, None, "inapplicable", config,
                               dict(quantities, reason="delta <= 0"))
    if beta_class == NONZERO and 2 not in config.kernel:
        return CriterionReport(theorem, q, n, beta_class, None, None, "inapplicable", config,
                               dict(quantities, reason="kernel must be even"))
    d, s, r = config.delta, config.s, config.r
    a_term = (s - 1) / d + 2
    if beta_class == NONZERO:
        b_term = (r - 1 + config.delta_split) / d + 1
        lead, sub = (4.0, 2.0) if theorem == "sieve" else (2 * SQRT2, SQRT2)
        lhs = q ** ((n - 1) / 2)
        rhs = lead * a_term * config.W_k - sub * b_term * config.W_k_split
    else:
        lead = 2.0 if theorem == "sieve-zero" else SQRT2
        lhs = q ** (n / 2 - 1)
        rhs = lead * a_term * config.W_k
    return _report(theorem, q, n, beta_class, lhs, rhs, config, **quantities)


def _n2_parts(q: int):
    r = sieve_radical(q, 2, NONZERO)[0]
    r1 = tuple(p for p in r if (q + 1) % p == 0)
    return r, r1


def check_n2_plain(q: int) -> CriterionReport:
    """Unsieved n = 2 bound on ``r = q2'``, branch chosen by ``q mod 4``."""
    _check_q(q)
    r, r1 = _n2_parts(q)
    sq = math.sqrt(q)
    w_r, w_r1 = 1 << len(r), 1 << len(r1)
    half = 0.5 if q % 4 == 1 else 1.0
    rhs = 4 * (w_r * sq - w_r1 * (sq - 1) * half)
    return _report("quadratic", q, 2, NONZERO, q + 1.0, rhs, W_r=w_r, W_r1=w_r1, r=math.prod(r), r1=math.prod(r1))


def sieve_n2(q: int, config: SieveConfig) -> CriterionReport:
    """Sieved n = 2 bound over ``q2'`` with split modulus ``q + 1``."""
    _check_q(q)
    r_primes, _ = _n2_parts(q)
    if config.radical != math.prod(r_primes) or config.split != q + 1:
        raise ValueError("config does not partition q2'")
    eps = config.delta
    quantities = dict(eps=eps, eps_split=config.delta_split, s=config.s, r=config.r,
                      W_k=config.W_k, W_k1=config.W_k_split)
    if eps <= 0:
        return CriterionReport("quadratic-sieve", q, 2, NONZERO, None, None, "inapplicable", config,
                               dict(quantities, reason="eps <= 0"))
    sq = math.sqrt(q)
    a_term = (config.s - 1) / eps + 2
    b_term = (config.r - 1 + config.delta_split) / eps + 1
    half = 0.5 if q % 4 == 1 else 1.0
    rhs = 4 * (config.W_k * a_term * sq - config.W_k_split * b_term * (sq - 1) * half)
    return _report("quadratic-sieve", q, 2, NONZERO, q + 1.0, rhs, config, **quantities)


def check_eq_both(q: int, config: SieveConfig) -> CriterionReport:
    """Simplified n = 2 sieve: ``sqrt(q) >= 4W(k)((s-1)/eps + 2)``."""
    eps = config.delta
    if eps <= 0:
        return CriterionReport("quadratic-simple", q, 2, NONZERO, None, None, "inapplicable", config)
    rhs = 4 * config.W_k * ((config.s - 1) / eps + 2)
    return _report("quadratic-simple", q, 2, NONZERO, math.sqrt(q), rhs, config, weak=True, eps=eps)


# -- greedy sieving ------------------------------------------------------------


def greedy_configs(primes, split: int, protect=()):
    """Configurations obtained by moving the largest remaining prime into the sieving set."""
    candidates = sorted((p for p in primes if p not in protect), reverse=True)
    for s in range(len(candidates) + 1):
        sieving = candidates[:s]
        kernel = [p for p in primes if p not in sieving]
        yield SieveConfig.build(kernel, sieving, split)


def greedy_sieve(q: int, n: int, beta_class: str) -> CriterionReport:
    """Try sieving configurations greedily until one passes or the slack is exhausted."""
    _require_even_prime(q, n)
    primes, split = sieve_radical(q, n, beta_class)
    attempts = []
    protect = (2,) if beta_class == NONZERO and n != 2 else ()
    for config in greedy_configs(primes, split, protect):
        if config.delta <= 0:
            break
        rep = sieve_n2(q, config) if n == 2 else sieve_generic(q, n, beta_class, config)
        attempts.append(rep)
        if rep.ok:
            break
    last = attempts[-1]
    return CriterionReport(
        "greedy:" + last.theorem, q, n, beta_class, last.lhs, last.rhs,
        "holds" if last.ok else "fails", last.config,
        {"tried": len(attempts)}, attempts,
    )


# -- generic bounds (no factorization) -----------------------------------------


def _log_holds(log_lhs: float, log_rhs: float) -> bool:
    return log_lhs - log_rhs > MARGIN


def generic_check(q: int, n: int, beta_class: str) -> CriterionReport:
    """Bounds valid for every ``q`` using ``W(t) <= c_ell * t^(1/ell)``, evaluated in logs."""
    _require_even_prime(q, n)
    lq = math.log(q)
    if n == 2:
        # sqrt(q) >= 2 * c6 * ((q^2 - 1)/4)^(1/6)
        lhs = 0.5 * lq
        rhs = math.log(2 * C6) + (math.log(q * q - 1) - math.log(4)) / 6
        name = "generic-quadratic"
    elif beta_class == NONZERO:
        lead = 2 * SQRT2 if q % 4 == 1 else 4.0
        if n == 3:
            lhs = 0.25 * lq
            rhs = math.log(lead * C4 / 2**0.25)
        else:
            lhs = (n / 4 - 0.5) * lq
            rhs = math.log(4 * C4 / 2**0.25)
        name = "generic-main"
    else:
        if n == 3:
            Q = q * q + q + 1
            lhs = 0.5 * lq
            rhs = math.log(SQRT2 * C6_Q3) + math.log(Q) / 6
        else:
            Qlog = math.log(q**n - 1) - math.log(q - 1) if n * lq < 700 else n * lq - math.log(q - 1)
            lhs = (n / 2) * lq - math.log(q - 1)
            rhs = math.log(2 * C4_ODD) + Qlog / 4
        name = "generic-trace-zero"
    ok = _log_holds(lhs, rhs)
    return CriterionReport(name, q, n, beta_class, lhs, rhs, "holds" if ok else "fails",
                           quantities={"scale": "log"})


def factorable(q: int, n: int) -> bool:
    return q**n - 1 < FACTOR_BOUND


def analytic_check(q: int, n: int, beta_class: str) -> CriterionReport:
    """Best analytic route for one beta class of an even prime-degree pair.

    Returns the first passing report, or a failure whose ``attempts`` hold every
    route tried.
    """
    _require_even_prime(q, n)
    attempts = []
    if not factorable(q, n):
        rep = generic_check(q, n, beta_class)
        return rep
    if n == 2:
        if beta_class == ZERO:
            raise ValueError("n = 2 has no analytic route for beta = 0")
        first = check_n2_plain(q)
    elif beta_class == NONZERO:
        first = check_main(q, n)
    else:
        first = check_O_star(q, n)
    attempts.append(first)
    if first.ok:
        return first
    greedy = greedy_sieve(q, n, beta_class)
    attempts.append(greedy)
    if greedy.ok:
        return greedy
    return CriterionReport("analytic", q, n, beta_class, None, None, "fails", attempts=attempts)


# -- interval reduction --------------------------------------------------------


class ReductionStep(NamedTuple):
    threshold: float
    justification: str


def check_constants() -> dict[str, float]:
    """Exact suprema behind the rounded constants; each must sit below its constant."""
    sups = {
        "c4": c_ell_sup(4),
        "c4_odd": c_ell_sup(4, lambda p: p != 2),
        "c6": c_ell_sup(6),
        "c6_Q3": c_ell_sup(6, lambda p: p == 3 or p % 6 == 1),
    }
    for name, const in (("c4", C4), ("c4_odd", C4_ODD), ("c6", C6), ("c6_Q3", C6_Q3)):
        if not sups[name] < const:
            raise AssertionError(f"{name} supremum {sups[name]} exceeds {const}")
    return sups


def _nu_cap(bound: float, primes, multiplier: int = 1) -> int:
    prod, nu = multiplier, 0
    for p in primes:
        if prod * p > bound:
            break
        prod *= p
        nu += 1
    return nu


def _solve_threshold(pred, lo: float, hi: float) -> float:
    """Least real ``x`` in ``[lo, hi]`` with ``pred`` true on ``[x, hi]``, by bisection (pred monotone)."""
    for _ in range(200):
        mid = (lo + hi) / 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def interval_reduction(n: int, beta_class: str) -> list[ReductionStep]:
    """Recompute the cascade of thresholds above which every q passes.

    Each step states "every even pair (q, n) with q > threshold satisfies the
    criterion"; the last threshold bounds the q needing an exact check.
    """
    if not is_prime(n):
        raise ValueError("interval reduction is for prime n")
    check_constants()
    odd_primes = [p for p in primes_up_to(1000) if p != 2]
    steps: list[ReductionStep] = []

    def rounds(start: float, nu_of_bound, kernel_size: list[int], sieve_primes, rhs_of, what: str):
        bound = start
        i = 0
        while True:
            nu = nu_of_bound(bound)
            kcount = kernel_size[min(i, len(kernel_size) - 1)]
            s = max(nu - kcount, 0)
            sieving = sieve_primes[kcount : kcount + s]
            delta = 1.0 - math.fsum(1.0 / p for p in sieving)
            if delta <= 0:
                break
            new = rhs_of(s, delta, 1 << kcount)
            if new >= bound * (1 - 1e-12):
                break
            steps.append(ReductionStep(new, (
                f"{what}: q < {bound:.6g} gives nu <= {nu}; kernel {tuple(sieve_primes[:kcount])}, "
                f"sieving {sieving[0] if sieving else '-'}..{sieving[-1] if sieving else '-'} "
                f"(s = {s}, delta = {delta:.6f}) holds for q > {new:.6g}")))
            bound = new
            i += 1

    if n == 2:
        if beta_class != NONZERO:
            raise ValueError("n = 2 only concerns beta != 0")
        t0 = (2 * C6) ** 6 / 4
        steps.append(ReductionStep(t0, f"sqrt(q) >= 2W(q^2-1) with c6 < {C6} on (q^2-1)/4: q > (2*{C6})^6/4"))
        rounds(
            t0,
            lambda b: _nu_cap(b * b, odd_primes, 8) ,
            [2, 1],
            odd_primes,
            lambda s, d, wk: (4 * wk * ((s - 1) / d + 2)) ** 2,
            "simplified quadratic sieve",
        )
        return steps
    if n == 3 and beta_class == NONZERO:
        base = 2 * SQRT2 * C4 / 2**0.25
        t0 = base**4
        steps.append(ReductionStep(t0, f"q^(1/4) > 2*sqrt(2)*{C4}/2^(1/4) = {base:.6f}"))
        rounds(
            t0,
            lambda b: 1 + _nu_cap(b**3, odd_primes, 4),
            [2],
            [2] + odd_primes,
            lambda s, d, wk: 2 * SQRT2 * ((s - 1) / d + 2) * wk,
            "sqrt(2)-sieve over q^3-1",
        )
        return steps
    if n == 3 and beta_class == ZERO:
        q_primes = [3] + [p for p in primes_up_to(10000) if p % 6 == 1]

        def generic(q):
            return 0.5 * math.log(q) - math.log(SQRT2 * C6_Q3) - math.log(q * q + q + 1) / 6 > 0

        t0 = _solve_threshold(generic, 3.0, 1e7)
        steps.append(ReductionStep(t0, f"q^(1/2) > sqrt(2)*{C6_Q3}*(q^2+q+1)^(1/6) with c6(Q) < {C6_Q3}"))
        rounds(
            t0,
            lambda b: _nu_cap(b * b + b + 1, q_primes),
            [1],
            q_primes,
            lambda s, d, wk: (SQRT2 * ((s - 1) / d + 2) * wk) ** 2,
            "sqrt(2)-sieve over Q",
        )
        return steps
    if beta_class == NONZERO:
        rhs = 4 * C4 / 2**0.25
        expo = n / 4 - 0.5
        steps.append(ReductionStep(rhs ** (1 / expo), f"q^({n}/4-1/2) > 4*{C4}/2^(1/4) = {rhs:.4f}"))
        return steps

    def trace_zero(q):
        return (n / 2) * math.log(q) - math.log(q - 1) - math.log(2 * C4_ODD) - (
            math.log(q**n - 1) - math.log(q - 1)) / 4 > 0

    # the left side over the right is increasing in q, so bisection applies
    t0 = _solve_threshold(trace_zero, 2.0, 1e6)
    steps.append(ReductionStep(t0, f"q^(n/2)/(q-1) > 2*{C4_ODD}*Q^(1/4) for q > {t0:.4f}"))
    return steps


def final_threshold(n: int, beta_class: str) -> float:
    return interval_reduction(n, beta_class)[-1].threshold


# -- decision pipeline ---------------------------------------------------------

BRUTE_LIMIT = 1 << 24

PROVEN_ANALYTIC = "proven-analytic"
PROVEN_COMPUTATION = "proven-by-computation"
GENUINE_EXCEPTION = "genuine-exception"


class Unresolved(RuntimeError):
    """No analytic route succeeded and the field is too large to enumerate."""


@dataclass
class Verdict:
    """Final answer for ``(q, n)`` and either one ``beta`` or every admissible one.

    ``trace_set`` holds the base-field indices reached by 2-primitive elements
    when an exhaustive census was run; ``missing`` lists required traces that
    are never reached.
    """

    kind: str
    q: int
    n: int
    beta: int | None
    pair: PairClass
    reports: list[CriterionReport] = field(default_factory=list)
    trace_set: list[int] | None = None
    missing: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def exists(self) -> bool:
        return self.kind != GENUINE_EXCEPTION

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "q": self.q,
            "n": self.n,
            "beta": self.beta,
            "pair": asdict(self.pair),
            "reports": [r.to_dict() for r in self.reports],
            "trace_set": self.trace_set,
            "missing": self.missing,
            "notes": self.notes,
        }


def required_traces(q: int, n: int) -> list[int]:
    """Base indices that must be reached: F_q^* for n = 2, all of F_q otherwise."""
    return list(range(1, q)) if n == 2 else list(range(q))


def _census(q: int, n: int, targets):
    from .counts import two_primitive_census
    from .ffield import extension

    if q**n > BRUTE_LIMIT:
        raise Unresolved(f"F_{q}^{n} exceeds the enumeration limit of {BRUTE_LIMIT} elements")
    ext = extension(q, n)
    return ext, two_primitive_census(ext, targets)


def _odd_pair_report(q: int, n: int) -> CriterionReport:
    return CriterionReport("odd-pair", q, n, "all", None, None, "holds",
                           quantities={"reason": "(q^n-1)/2 odd: x is 2-primitive iff -x is primitive"})


def _beta_classes(n: int, beta: int | None) -> list[str]:
    if beta is None:
        return [NONZERO] if n == 2 else [NONZERO, ZERO]
    return [ZERO if beta == 0 else NONZERO]


def decide_pair(q: int, n: int, beta: int | None = None) -> Verdict:
    """Decide whether F_{q^n} has a 2-primitive element of trace ``beta``.

    ``beta`` is a base-field index (0 is the zero element); ``None`` asks for
    every admissible trace, which excludes 0 when ``n = 2``.
    """
    pair = classify_pair(q, n)
    if beta is not None and not 0 <= beta < q:
        raise ValueError(f"beta index must lie in [0, {q})")
    if pair.parity == "odd":
        return Verdict(PROVEN_ANALYTIC, q, n, beta, pair, [_odd_pair_report(q, n)])
    if pair.parity == "composite":
        return _decide_composite(pair, beta)
    return _decide_even_prime(pair, beta)


def _decide_even_prime(pair: PairClass, beta: int | None) -> Verdict:
    q, n = pair.q, pair.n
    if n == 2 and beta == 0:
        if q == 3:
            return _by_census(pair, beta, [], ["F_9 is small enough to enumerate"])
        # An element of F_{q^2} with trace 0 satisfies x^q = -x, so x^{2(q-1)} = 1
        # and its order is at most 2(q-1) < (q^2-1)/2.
        rep = CriterionReport("trace-zero-quadratic", q, n, ZERO, 2.0 * (q - 1), (q * q - 1) / 2, "fails",
                              quantities={"reason": "trace-0 elements have order dividing 2(q-1)"})
        return Verdict(GENUINE_EXCEPTION, q, n, beta, pair, [rep], missing=[0],
                       notes=["no 2-primitive element of F_{q^2} has trace 0 when q > 3"])
    reports = [analytic_check(q, n, cls) for cls in _beta_classes(n, beta)]
    if all(r.ok for r in reports):
        return Verdict(PROVEN_ANALYTIC, q, n, beta, pair, reports)
    return _by_census(pair, beta, reports, ["analytic criteria inconclusive; exhaustive search"])


def _by_census(pair: PairClass, beta: int | None, reports, notes) -> Verdict:
    q, n = pair.q, pair.n
    need = required_traces(q, n) if beta is None else [beta]
    _, census = _census(q, n, need)
    seen = census.support()
    missing = [b for b in need if b not in seen]
    if not missing:
        return Verdict(PROVEN_COMPUTATION, q, n, beta, pair, list(reports), notes=list(notes)
                       + [f"scanned {census.scanned} powers"])
    # the census ran to completion, so the trace set is exact
    return Verdict(GENUINE_EXCEPTION, q, n, beta, pair, list(reports), sorted(seen), missing, list(notes))


def _decide_composite(pair: PairClass, beta: int | None) -> Verdict:
    """Reduce to the last prime-degree pair ``(q', ell)`` of the chain.

    A 2-primitive element of F_{q^n} with trace ``alpha`` over F_{q'} has
    trace ``Tr_{q'/q}(alpha)`` over F_q, so it suffices to reach, for every
    required ``beta``, some admissible ``alpha`` mapping onto it.
    """
    from .ffield import extension

    q, n = pair.q, pair.n
    q1, ell = pair.final_pair
    inner = decide_pair(q1, ell)
    need = required_traces(q, n) if beta is None else [beta]
    notes = [f"reduced along {list(pair.reduction)} to ({q1}, {ell})"]
    if inner.kind != GENUINE_EXCEPTION:
        return Verdict(inner.kind, q, n, beta, pair, inner.reports, notes=notes + inner.notes)
    # Some traces over F_{q'} are unreachable; push the reached ones down to F_q.
    ext = extension(q1, ell)
    down = extension(q, n // ell)
    reached_inner = inner.trace_set if inner.trace_set is not None else sorted(
        set(range(q1)) - set(inner.missing))
    reached = set()
    if down.top is not ext.base:
        raise AssertionError("intermediate field contexts differ")
    for a in reached_inner:
        reached.add(down.base.index(down.trace(down.top.element(a))))
    missing = [b for b in need if b not in reached]
    notes.append(f"traces over F_{q1} reached: {len(reached_inner)}; pushed down to F_{q}: {sorted(reached)}")
    if not missing:
        return Verdict(PROVEN_COMPUTATION, q, n, beta, pair, inner.reports, notes=notes)
    return Verdict(GENUINE_EXCEPTION, q, n, beta, pair, inner.reports, sorted(reached), missing, notes)
