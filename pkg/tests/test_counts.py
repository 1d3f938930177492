import pytest

from ffprim.counts import (
    TraceCensus,
    expansion_terms,
    m_beta_brute,
    m_beta_closed,
    n_beta_brute,
    n_beta_char_expansion,
    q2_prime,
    q_r_char_expansion,
    q_r_count,
    square_census,
    two_primitive_census,
    two_primitive_trace_set,
    w2_minus_w4_expansion,
)
from ffprim.ffield import basis_with_traces, extension, is_two_primitive
from ffprim.zarith import euler_phi, factorize, radical


def naive_trace_set(q, n):
    ext = extension(q, n)
    top = ext.top
    return {ext.base.index(ext.trace(x)) for x in top.nonzero() if is_two_primitive(top, x)}


def test_m_beta_closed_examples():
    assert m_beta_closed(5, 3, 0) == 12
    assert m_beta_closed(5, 2, 1) == 3
    ext = extension(5, 3)
    assert m_beta_closed(5, 3, 2) == 10  # 2 is a nonsquare mod 5
    assert m_beta_brute(ext, 0) == 12 and m_beta_brute(ext, 2) == 10
    assert m_beta_brute(extension(5, 2), 1) == 3


def test_m_beta_closed_rejects():
    with pytest.raises(ValueError):
        m_beta_closed(3, 3, 1)  # odd pair
    with pytest.raises(ValueError):
        m_beta_closed(5, 4, 1)  # composite n
    with pytest.raises(ValueError):
        m_beta_closed(5, 2, 0)


def test_square_census_totals():
    for q, n in [(3, 2), (5, 2), (5, 3), (9, 2), (3, 3)]:
        c = square_census(extension(q, n))
        assert c.total == (q**n - 1) // 2
        assert len(c.counts) == q
    assert list(square_census(extension(3, 2)).counts) == [2, 1, 1]


def test_square_census_is_a_set():
    ext = extension(7, 2)
    squares = {ext.top.index(x * x) for x in ext.top.nonzero()}
    by_trace = {}
    for s in squares:
        b = ext.base.index(ext.trace(ext.top.element(s)))
        by_trace[b] = by_trace.get(b, 0) + 1
    c = square_census(ext)
    assert {b: c[b] for b in range(7) if c[b]} == by_trace


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13, 31])
def test_trace_set_matches_naive(q):
    assert two_primitive_trace_set(extension(q, 2)) == naive_trace_set(q, 2)


def test_trace_sets_examples():
    assert two_primitive_trace_set(extension(5, 2)) == {2, 3}
    assert two_primitive_trace_set(extension(3, 2)) == {0}
    assert two_primitive_trace_set(extension(13, 2)) == {1, 3, 4, 5, 6, 7, 8, 9, 10, 12}
    ext = extension(9, 2)
    c = two_primitive_census(ext)
    assert c.formatted_support(ext) == ["1", "-1", "i", "-i"]


def test_census_counts_and_merge():
    for q, n in [(5, 2), (3, 3), (5, 3), (7, 3), (3, 4)]:
        ext = extension(q, n)
        c = two_primitive_census(ext)
        N = q**n - 1
        even = (N // 2) % 2 == 0
        assert c.total == (euler_phi(factorize(N)) // 2 if even else euler_phi(factorize(N)))
        assert c.complete and c.scanned == N // 2
    a = two_primitive_census(extension(5, 2))
    m = a.merge(a)
    assert m.total == 2 * a.total
    with pytest.raises(ValueError):
        a.merge(square_census(extension(5, 2)))


def test_census_early_stop():
    ext = extension(61, 2)
    c = two_primitive_census(ext, targets=range(1, 61))
    assert all(c[b] > 0 for b in range(1, 61))
    full = two_primitive_census(ext)
    assert set(c.support()) <= set(full.support())
    assert isinstance(c, TraceCensus)


def test_n_beta_examples_f25():
    ext = extension(5, 2)
    q0 = radical(factorize(24))
    assert n_beta_brute(ext, q0, 2) > 0
    assert n_beta_brute(ext, q0, 1) == 0
    for b in range(5):
        two_prim = sum(1 for x in ext.top.nonzero()
                       if is_two_primitive(ext.top, x) and ext.base.index(ext.trace(x)) == b)
        assert n_beta_brute(ext, 24, b) == 2 * two_prim
    for b in range(1, 5):
        assert n_beta_brute(ext, 1, b) == 2 * m_beta_closed(5, 2, b)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6, 8, 12, 24])
def test_n_beta_expansion_f25(m):
    ext = extension(5, 2)
    for b in range(5):
        assert abs(n_beta_char_expansion(ext, m, b) - n_beta_brute(ext, m, b)) <= 1e-6 * 25


@pytest.mark.parametrize("m", [1, 2, 31, 62])
def test_n_beta_expansion_f125(m):
    ext = extension(5, 3)
    for b in range(5):
        assert abs(n_beta_char_expansion(ext, m, b) - n_beta_brute(ext, m, b)) <= 1e-6 * 125


def test_expansion_d1_term_is_twice_m_beta():
    ext = extension(5, 3)
    for b in range(5):
        d1 = expansion_terms(ext, 1, b)[1]
        assert abs(d1.real / 5 - 2 * m_beta_closed(5, 3, b)) < 1e-6


def test_q2_prime():
    assert q2_prime(5) == 3
    assert q2_prime(7) == 3
    assert q2_prime(31) == 3 * 5
    assert q2_prime(13) == 3 * 7


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_q_r_brute_equals_expansion(q):
    ext = extension(q, 2)
    r0 = q2_prime(q)
    divisors = [d for d in range(1, r0 + 1) if r0 % d == 0]
    for b in range(1, q):
        t1, t2 = basis_with_traces(ext, b)
        for r in divisors:
            brute = q_r_count(ext, r, t1, t2)
            assert abs(q_r_char_expansion(ext, r, t1, t2) - brute) < 1e-6 * ext.top.size


def test_q_r_zero_when_trace_missing():
    ext = extension(7, 2)
    t1, t2 = basis_with_traces(ext, 3)
    assert q_r_count(ext, q2_prime(7), t1, t2) == 0
    with pytest.raises(ValueError):
        q_r_count(ext, 5, t1, t2)


@pytest.mark.parametrize("q", [5, 9, 13])
def test_q_r_positive_implies_trace(q):
    ext = extension(q, 2)
    traces = two_primitive_trace_set(ext)
    for b in range(1, q):
        t1, t2 = basis_with_traces(ext, b)
        if q_r_count(ext, q2_prime(q), t1, t2) > 0:
            assert b in traces


def test_w2_minus_w4_identity_f25():
    f = extension(5, 2).top
    for x in f.nonzero():
        sq = x ** (f.order // 2) == f.one
        fourth = x ** (f.order // 4) == f.one
        want = 1.0 if sq and not fourth else 0.0
        assert abs(w2_minus_w4_expansion(x) - want) < 1e-9
