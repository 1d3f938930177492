import json
import math
from fractions import Fraction

import pytest

from ffprim import criteria as cr
from ffprim.counts import two_primitive_census
from ffprim.ffield import extension
from ffprim.zarith import W, factorize, odd_prime_powers

N2_SURVIVORS = [
    3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49, 53, 59, 61, 67, 71, 73, 79, 81,
    83, 89, 97, 101, 103, 109, 113, 121, 125, 127, 131, 137, 139, 149, 151, 157, 169, 173, 181, 191, 197,
    199, 211, 229, 239, 241, 269, 281, 307, 311, 331, 337, 349, 361, 373, 379, 389, 409, 419, 421, 461,
    463, 509, 521, 529, 569, 571, 601, 617, 631, 659, 661, 701, 761, 769, 841, 859, 881, 911, 1009, 1021,
    1231, 1289, 1301, 1331, 1429, 1609, 1741, 1849, 1861, 2029, 2281, 2311, 2729, 3541,
]


def config_for(q, n, cls, sieving):
    primes, split = cr.sieve_radical(q, n, cls)
    return cr.SieveConfig.build([p for p in primes if p not in sieving], sieving, split)


def coverage(q, n, cls):
    ext = extension(q, n)
    need = [0] if cls == cr.ZERO else list(range(1, q))
    census = two_primitive_census(ext, need)
    return all(census[b] > 0 for b in need)


def test_margin_demotes_ties():
    assert not cr.holds(1.0, 1.0)
    assert not cr.holds(1.0 + 1e-12, 1.0)
    assert cr.holds(1.0 + 1e-6, 1.0)
    assert cr.holds_weak(2.0, 1.0) and not cr.holds_weak(1.0, 1.0)


def test_classify():
    assert cr.classify_pair(7, 3).parity == "odd"
    assert cr.classify_pair(5, 3).parity == "even"
    assert cr.classify_pair(7, 2).parity == "even"
    c = cr.classify_pair(3, 4)
    assert c.parity == "composite" and c.final_pair == (9, 2) and c.special_case
    assert cr.classify_pair(3, 12).reduction == ((3, 2), (9, 2), (81, 3))
    with pytest.raises(ValueError):
        cr.classify_pair(8, 3)
    with pytest.raises(ValueError):
        cr.classify_pair(5, 1)


def test_branch_selection_total():
    for q in odd_prime_powers(3, 300):
        for n in (3, 5, 7):
            if not cr.is_even_pair(q, n):
                continue
            assert cr._select_theorem(q, n, cr.NONZERO) == "sieve-sqrt2"
            assert cr._select_theorem(q, n, cr.ZERO) == "sieve-zero-sqrt2"
        assert cr._select_theorem(q, 2, cr.NONZERO) == "sieve"


def test_main_55_instance():
    rep = cr.check_main(5, 5)
    assert rep.lhs == 25 and rep.rhs == 23 and rep.ok
    assert rep.quantities == {"W_total": 8, "W_Q": 4}
    assert cr.check_O_star(5, 5).ok


@pytest.mark.parametrize("q,cls,sieving", [
    (29, cr.NONZERO, [67, 13, 7]),
    (61, cr.NONZERO, [97, 13, 5]),
    (121, cr.NONZERO, [37, 19, 7]),
    (61, cr.ZERO, [3, 13, 97]),
    (109, cr.ZERO, [7, 571]),
    (29, cr.ZERO, [13, 67]),
    (81, cr.ZERO, [13, 73]),
])
def test_worked_sieve_configs(q, cls, sieving):
    rep = cr.sieve_generic(q, 3, cls, config_for(q, 3, cls, sieving))
    assert rep.ok, rep.to_dict()


def test_sieve_rejects_bad_configs():
    cfg = cr.SieveConfig.build([2], [3], 2 * 3)
    with pytest.raises(ValueError):
        cr.sieve_generic(29, 3, cr.NONZERO, cfg)
    with pytest.raises(ValueError):
        cr.SieveConfig.build([3], [3], 1)
    odd_kernel = config_for(29, 3, cr.NONZERO, [2, 7])
    assert cr.sieve_generic(29, 3, cr.NONZERO, odd_kernel).verdict == "inapplicable"


def test_delta_nonpositive_is_inapplicable():
    # q = 1 or -1 mod every odd prime up to 31 (found by CRT); sieving all of
    # q2' drives the slack below zero
    q = 200560490131
    primes, split = cr.sieve_radical(q, 2, cr.NONZERO)
    cfg = cr.SieveConfig.build([], primes, split)
    assert cfg.delta <= 0
    assert cr.sieve_n2(q, cfg).verdict == "inapplicable"
    assert cr.check_eq_both(q, cfg).verdict == "inapplicable"
    zero = config_for(13, 3, cr.ZERO, [3, 61])
    assert zero.delta > 0


def test_theorem_override_T_and_Z():
    for q in (29, 61, 121, 149):
        for cls, plain, improved in ((cr.NONZERO, "sieve", "sieve-sqrt2"), (cr.ZERO, "sieve-zero", "sieve-zero-sqrt2")):
            primes, split = cr.sieve_radical(q, 3, cls)
            keep = [2] if cls == cr.NONZERO else []
            cfg = cr.SieveConfig.build(keep, [p for p in primes if p not in keep], split)
            a = cr.sieve_generic(q, 3, cls, cfg, theorem=plain)
            b = cr.sieve_generic(q, 3, cls, cfg, theorem=improved)
            if a.verdict != "inapplicable":
                # the improved form never has the larger right-hand side
                assert b.rhs <= a.rhs + 1e-12
                assert not a.ok or b.ok


def test_delta_invariant_over_greedy_attempts():
    for q in (29, 61, 121, 14821, 3541, 2311):
        n = 2 if q > 200 else 3
        rep = cr.greedy_sieve(q, n, cr.NONZERO)
        for att in rep.attempts:
            cfg = att.config
            exact = 1 - sum(Fraction(1, p) for p in cfg.sieving)
            assert abs(cfg.delta - float(exact)) < 1e-12
            assert cfg.radical == math.prod(cr.sieve_radical(q, n, cr.NONZERO)[0])


def test_greedy_examples():
    rep = cr.greedy_sieve(61, 3, cr.NONZERO)
    assert rep.ok and rep.config.sieving == (97, 13, 5)
    assert not cr.greedy_sieve(5, 3, cr.NONZERO).ok
    trivial = cr.greedy_sieve(5, 5, cr.NONZERO)
    assert trivial.ok and trivial.config.s == 0 and trivial.config.delta == 1.0
    assert cr.greedy_sieve(14821, 2, cr.NONZERO).ok
    assert not cr.greedy_sieve(3541, 2, cr.NONZERO).ok


def test_n2_plain_funnel():
    qs = odd_prime_powers(3, 14850)
    assert len(qs) == 1784
    failing = [q for q in qs if not cr.check_n2_plain(q).ok]
    assert len(failing) == 744 and max(failing) == 14821
    assert cr.check_n2_plain(10**6 + 3).ok
    survivors = [q for q in failing if not cr.analytic_check(q, 2, cr.NONZERO).ok]
    assert survivors == N2_SURVIVORS


def test_n3_survivors():
    qs = [q for q in odd_prime_powers(3, 200) if q % 4 == 1]
    assert [q for q in qs if not cr.analytic_check(q, 3, cr.NONZERO).ok] == [5, 9, 13, 25]
    assert [q for q in qs if not cr.analytic_check(q, 3, cr.ZERO).ok] == [5, 9, 13, 25, 37, 49, 121]


def test_unsieved_trace_zero_exceptions():
    # the list quoted with the "(1121 values)" remark has eleven entries
    qs = [q for q in odd_prime_powers(3, 185) if q % 4 == 1]
    fails = [q for q in qs if not cr.sieve_generic(q, 3, cr.ZERO, config_for(q, 3, cr.ZERO, [])).ok]
    assert fails == [5, 9, 13, 25, 29, 37, 49, 61, 81, 109, 121]


def test_interval_reduction_n2():
    steps = cr.interval_reduction(2, cr.NONZERO)
    t = [s.threshold for s in steps]
    assert t[0] == pytest.approx(1.536e11, rel=1e-3)
    assert t[-1] < 14850 and math.ceil(t[-1]) == 14850
    assert t[2] == pytest.approx(41101, abs=1) and t[3] == pytest.approx(25457, abs=1)
    assert all(a > b for a, b in zip(t, t[1:]))
    assert all(isinstance(s.justification, str) and s.justification for s in steps)


def test_interval_reduction_n3():
    t = [s.threshold for s in cr.interval_reduction(3, cr.NONZERO)]
    assert t[0] == pytest.approx(11.5828**4, rel=1e-4)
    assert math.ceil(t[1]) == 361 and math.ceil(t[2]) == 173 and math.ceil(t[3]) == 128
    z = [s.threshold for s in cr.interval_reduction(3, cr.ZERO)]
    assert math.ceil(z[0]) == 144303 and math.ceil(z[1]) == 1067 and math.ceil(z[2]) == 319
    assert 180 < z[3] < 181


def test_interval_reduction_large_n():
    t5 = cr.interval_reduction(5, cr.NONZERO)[0].threshold
    assert 16.38 ** (1 / 0.75) == pytest.approx(t5, rel=1e-3)
    assert 4 * 4.87 / 2**0.25 == pytest.approx(16.38, abs=0.01)
    assert 32 < cr.final_threshold(5, cr.ZERO) < 33
    assert cr.final_threshold(7, cr.ZERO) < 5
    with pytest.raises(ValueError):
        cr.interval_reduction(4, cr.NONZERO)


def test_generic_checks_above_thresholds():
    # the first prime past (2*46.103)^6/4 passes by less than the safety margin
    assert not cr.generic_check(153636746689, 2, cr.NONZERO).ok
    assert cr.generic_check(154000000043, 2, cr.NONZERO).ok
    assert cr.generic_check(18013, 3, cr.NONZERO).ok
    assert cr.generic_check(144341, 3, cr.ZERO).ok
    assert not cr.generic_check(13, 3, cr.ZERO).ok


def test_monotonic_in_q_with_fixed_W():
    seen = {}
    for q in [q for q in odd_prime_powers(3, 3000) if q % 4 == 1]:
        N = q**3 - 1
        prof = (W(factorize(N)), W(factorize(N // (q - 1))))
        ok = cr.check_main(q, 3).ok
        if seen.get(prof):
            assert ok
        seen[prof] = seen.get(prof, False) or ok


def _soundness_pairs():
    pairs = [(q, 2) for q in odd_prime_powers(3, 400)]
    pairs += [(q, 3) for q in odd_prime_powers(3, 215) if q % 4 == 1]
    pairs += [(q, 5) for q in (5, 9, 13, 17, 25)]
    pairs += [(5, 7), (9, 7)]
    return pairs


def test_soundness_against_exhaustive_search():
    """No analytic pass may be contradicted by enumeration."""
    for q, n in _soundness_pairs():
        classes = [cr.NONZERO] if n == 2 else [cr.NONZERO, cr.ZERO]
        for cls in classes:
            reports = [cr.analytic_check(q, n, cls), cr.greedy_sieve(q, n, cls)]
            if n == 2:
                reports.append(cr.check_n2_plain(q))
            elif cls == cr.NONZERO:
                reports.append(cr.check_main(q, n))
            else:
                reports.append(cr.check_O_star(q, n))
            if any(r.ok for r in reports):
                assert coverage(q, n, cls), (q, n, cls)


def test_decide_pair_examples():
    v = cr.decide_pair(7, 3)
    assert v.kind == cr.PROVEN_ANALYTIC and v.reports[0].theorem == "odd-pair"
    v = cr.decide_pair(5, 2)
    assert v.kind == cr.GENUINE_EXCEPTION and v.trace_set == [2, 3] and v.missing == [1, 4]
    assert cr.decide_pair(37, 3, 0).kind == cr.PROVEN_COMPUTATION
    assert cr.decide_pair(5, 2, 2).kind == cr.PROVEN_COMPUTATION
    assert cr.decide_pair(5, 5).kind == cr.PROVEN_ANALYTIC
    assert cr.decide_pair(7, 2, 0).kind == cr.GENUINE_EXCEPTION
    assert cr.decide_pair(3, 2, 0).kind == cr.PROVEN_COMPUTATION
    assert cr.decide_pair(10**6 + 3, 2).kind == cr.PROVEN_ANALYTIC


def test_decide_composite():
    v = cr.decide_pair(3, 4)
    assert v.kind == cr.PROVEN_COMPUTATION
    assert any("(9, 2)" in note for note in v.notes)
    assert cr.decide_pair(5, 4).exists
    assert cr.decide_pair(3, 6).exists
    assert cr.decide_pair(7, 9).kind == cr.PROVEN_ANALYTIC


def test_reports_serialize():
    v = cr.decide_pair(61, 3)
    text = json.dumps(v.to_dict())
    back = json.loads(text)
    assert back["kind"] == v.kind and back["q"] == 61
    cfg = cr.greedy_sieve(61, 3, cr.NONZERO).to_dict()["config"]
    assert cfg["sieving"] == [97, 13, 5] or tuple(cfg["sieving"]) == (97, 13, 5)


def test_constants_checked():
    sups = cr.check_constants()
    assert sups["c4"] < cr.C4 and sups["c6"] < cr.C6 and sups["c6_Q3"] < cr.C6_Q3
