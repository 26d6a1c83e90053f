from fractions import Fraction
from math import comb, gcd

import pytest
from hypothesis import given, settings, strategies as st

from erdosmoser.arith import is_prime
from erdosmoser.bernoulli import (
    BernoulliTable,
    RationalPolynomial,
    X_TIMES_X_PLUS_1_TIMES_2X_PLUS_1,
    agoh_check,
    agoh_phi_check,
    bernoulli,
    bernoulli_diff,
    even_pascal_bernoulli_check,
    even_pascal_bernoulli_sum,
    faulhaber,
    moser_L_divisibility,
    moser_polynomial,
    pascal_bernoulli_check,
    pascal_bernoulli_sum,
    prime_supercongruence_check,
    pseudo_check,
    read_cache,
    staudt_denominator,
    write_cache,
)
from erdosmoser.errors import HypothesisError, TheoremViolation

import oracles

BS = oracles.bernoulli_list(60)


def _frac_mod(x, M):
    return oracles.rational_mod_naive(x, M)


# --- the numbers themselves


def test_named_values():
    assert bernoulli(12) == Fraction(-691, 2730)
    assert bernoulli(3) == 0
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(0) == 1


@pytest.mark.parametrize("k", range(61))
def test_matches_akiyama_tanigawa(k):
    assert bernoulli(k) == BS[k]


def test_staudt_denominators():
    for k in range(2, 61, 2):
        expected = 1
        for p in range(2, k + 2):
            if oracles.naive_is_prime(p) and k % (p - 1) == 0:
                expected *= p
        assert staudt_denominator(k) == expected == BS[k].denominator


def test_staudt_rejects_odd():
    with pytest.raises(ValueError):
        staudt_denominator(3)


def test_numerator_congruence():
    for k in range(2, 61, 2):
        n, D = BS[k].numerator, BS[k].denominator
        assert (n - oracles.d_naive(D)) % D == 0, k


def test_fresh_table_agrees_with_default():
    t = BernoulliTable()
    t.extend(40)
    assert [t[k] for k in range(41)] == BS[:41]
    assert t.pair(12) == (-691, 2730)


# --- cache


def test_cache_round_trip(tmp_path):
    t = BernoulliTable()
    t.extend(30)
    path = tmp_path / "b.tsv"
    t.save(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "0\t1\t1" and lines[1] == "1\t-1\t2" and lines[12] == "12\t-691\t2730"
    u = BernoulliTable()
    u.load(path)
    assert len(u) == 31
    assert [u[k] for k in range(31)] == BS[:31]
    assert read_cache(path)[3] == (3, 0, 1)


@pytest.mark.parametrize(
    "rows",
    [
        [(0, 1, 1), (1, -1, 2), (2, 1, 5)],  # wrong denominator
        [(0, 1, 1), (1, 1, 2)],  # wrong B_1 sign
        [(0, 1, 1), (1, -1, 2), (2, 1, 6), (3, 1, 1)],  # odd index nonzero
    ],
)
def test_cache_rejects_bad_entries(tmp_path, rows):
    path = tmp_path / "bad.tsv"
    write_cache(path, rows)
    with pytest.raises(ValueError):
        BernoulliTable().load(path)


def test_cache_rejects_gap_and_unreduced(tmp_path):
    p = tmp_path / "gap.tsv"
    p.write_text("0\t1\t1\n2\t1\t6\n")
    with pytest.raises(ValueError):
        read_cache(p)
    p.write_text("0\t2\t2\n")
    with pytest.raises(ValueError):
        read_cache(p)


# --- polynomials


def test_faulhaber_small():
    assert faulhaber(0) == RationalPolynomial([0, 1])
    assert faulhaber(2) == RationalPolynomial([0, Fraction(1, 6), Fraction(1, 2), Fraction(1, 3)])
    x = RationalPolynomial([0, 1])
    p4 = x * RationalPolynomial([1, 1]) * RationalPolynomial([1, 2]) * RationalPolynomial([-1, 3, 3]) * Fraction(1, 30)
    assert faulhaber(4) == p4


def test_faulhaber_matches_power_sums():
    for n in range(31):
        P = faulhaber(n)
        assert P.degree == n + 1
        assert P(0) == 0
        for a in range(1, 51):
            assert P(a) == oracles.S(a, n), (n, a)


@pytest.mark.parametrize("n", range(12))
def test_faulhaber_matches_lagrange(n):
    assert faulhaber(n) == RationalPolynomial(oracles.lagrange_poly_eval_coeffs(n))


def test_polynomial_division():
    q, r = divmod(RationalPolynomial([0, 1, 3, 2]) * RationalPolynomial([5, 7]), X_TIMES_X_PLUS_1_TIMES_2X_PLUS_1)
    assert q == RationalPolynomial([5, 7]) and r == RationalPolynomial([])
    q, r = divmod(RationalPolynomial([1, 0, 1]), RationalPolynomial([1, 1]))
    assert q == RationalPolynomial([-1, 1]) and r == RationalPolynomial([2])
    with pytest.raises(ZeroDivisionError):
        divmod(q, RationalPolynomial([0]))


@given(st.lists(st.fractions(max_denominator=50), max_size=6), st.lists(st.fractions(max_denominator=50), min_size=1, max_size=4))
def test_division_identity(a, b):
    A, B = RationalPolynomial(a), RationalPolynomial(b)
    if not B.coeffs:
        return
    q, r = divmod(A, B)
    assert q * B + r == A
    assert r.degree < B.degree or not r.coeffs


# --- pascal-type identities


def test_pascal_named():
    assert pascal_bernoulli_sum(8, 3) == 56 == comb(8, 3)
    assert even_pascal_bernoulli_sum(8, 3) == 28
    assert pascal_bernoulli_check(12, 5)
    assert even_pascal_bernoulli_check(2, 1)
    assert even_pascal_bernoulli_check(10, 4)


def test_pascal_m1_is_n():
    for n in range(1, 25):
        assert pascal_bernoulli_sum(n, 1) == n


def test_pascal_sweep():
    for n in range(1, 21):
        for m in range(1, n + 1):
            assert pascal_bernoulli_check(n, m), (n, m)
        if n % 2 == 0:
            for m in range(1, n):
                assert even_pascal_bernoulli_check(n, m), (n, m)


def test_pascal_bad_args():
    with pytest.raises(ValueError):
        pascal_bernoulli_sum(3, 4)
    with pytest.raises(ValueError):
        even_pascal_bernoulli_sum(7, 3)
    with pytest.raises(ValueError):
        even_pascal_bernoulli_sum(8, 8)


# --- congruences


def test_bernoulli_diff_named():
    assert bernoulli_diff(1, 12) == (455, -39394091, True)
    for n in range(1, 6):
        assert bernoulli_diff(n, 1) == (1, 0, True)


def test_bernoulli_diff_oracle():
    diff = BS[12] - BS[4]
    Q, P, ok = bernoulli_diff(2, 3)
    assert (Q, P) == (diff.denominator, diff.numerator)
    assert Q == BS[12].denominator // BS[4].denominator
    assert ok


def test_bernoulli_diff_sweep():
    for n in range(1, 11):
        for k in range(1, 61 // (2 * n) + 1):
            if 2 * n * k <= 60:
                assert bernoulli_diff(n, k)[2], (n, k)


def _agoh_oracle(n, e):
    i = all((n // p - 1) % p == 0 for p, _ in oracles.trial_factor(n))
    ii = oracles.S(n - 1, e) % n == n - 1
    x = n * BS[e] if e < len(BS) else n * bernoulli(e)
    if gcd(x.denominator, n) != 1:
        return i, ii, None
    return i, ii, _frac_mod(x, n) == n - 1


def test_agoh_named():
    assert agoh_check(5) == (True, True, True)
    assert agoh_check(4) == (False, False, False)


def test_agoh_literal_disagrees_at_30():
    # 30 passes (i), but S_29(29) is 15 mod 30 and 30 B_29 = 0
    assert oracles.S(29, 29) % 30 == 15
    assert agoh_check(30, strict=False) == (True, False, False)
    with pytest.raises(TheoremViolation):
        agoh_check(30)


def test_n_bernoulli_is_n_integral():
    # D_{n-1} is square-free, so a factor p of n always cancels the p in the denominator
    bad = [n for n in range(2, 400) if gcd((n * bernoulli(n - 1)).denominator, n) != 1]
    assert bad == []


@pytest.mark.parametrize("n", list(range(2, 60)) + [30, 858, 1722])
def test_agoh_phi_matches_oracle(n):
    e = oracles.phi_naive(n)
    expected = _agoh_oracle(n, e)
    assert expected[2] is not None
    assert agoh_phi_check(n) == expected


def test_agoh_literal_matches_oracle():
    for n in range(2, 60):
        got = agoh_check(n, strict=False)
        i, ii, iii = _agoh_oracle(n, n - 1)
        assert got == (i, ii, bool(iii)), n


def test_agoh_disagreements_up_to_2000():
    bad = []
    for n in range(2, 2001):
        a = agoh_check(n, strict=False)
        if not a[0] == a[1] == a[2]:
            bad.append(n)
    assert bad == [30, 858, 1722]


def test_agoh_phi_holds_up_to_2000():
    hits = [n for n in range(2, 2001) if agoh_phi_check(n)[0]]
    assert hits == [n for n in range(2, 2001) if oracles.naive_is_prime(n) or n in (30, 858, 1722)]


def test_pseudo_named():
    r = pseudo_check(6)
    assert r.criterion_i is True and r.d == 1 and r.congruence_ii
    assert oracles.S(6, 2) == 91
    r = pseudo_check(1)
    assert r.criterion_i is True and r.congruence_ii
    r = pseudo_check(4)
    assert r.criterion_i is None and r.congruence_ii
    assert oracles.S(4, 2) % 4 == 2 and _frac_mod(4 * BS[2], 4) == 2


def test_pseudo_n2():
    r = pseudo_check(2)
    assert r.criterion_i is True and r.congruence_ii


def test_pseudo_sweep():
    for n in range(1, 501):
        r = pseudo_check(n)
        assert r.congruence_ii, n
        assert r.criterion_i is not False, n
        assert (r.criterion_i is None) == (not oracles.square_free_naive(n))


def test_pseudo_congruence_oracle():
    for n in range(1, 40):
        e = oracles.phi_naive(n)
        assert _frac_mod(n * BS[e], n) == oracles.S(n, e) % n


def test_supercongruence():
    assert oracles.S(5, 4) == 979 and 979 % 125 == 104
    assert _frac_mod(Fraction(-1, 6), 125) == 104
    assert prime_supercongruence_check(5)
    assert prime_supercongruence_check(7)
    for p in (2, 3, 9):
        with pytest.raises(HypothesisError):
            prime_supercongruence_check(p)


def test_supercongruence_sweep():
    for p in range(5, 201):
        if is_prime(p):
            assert prime_supercongruence_check(p), p


def test_supercongruence_oracle_small():
    for p in (5, 7, 11, 13, 17):
        M = p**3
        assert oracles.S(p, p - 1) % M == _frac_mod(p * BS[p - 1], M)


# --- integer-coefficient polynomial


def test_moser_small():
    mp = moser_polynomial(2)
    assert mp.Q == RationalPolynomial([0, 1, 3, 2]) and mp.L == 6 and mp.R == (2, 2)
    assert not mp.content_normalized
    mp = moser_polynomial(1)
    assert mp.Q == RationalPolynomial([0, 1, 1]) and mp.L == 2


def _coeff_gcd(poly):
    g = 0
    for c in poly.coeffs:
        assert c.denominator == 1
        g = gcd(g, c.numerator)
    return g


@pytest.mark.parametrize("n", range(1, 21))
def test_moser_content_and_factor(n):
    mp = moser_polynomial(n)
    assert _coeff_gcd(mp.Q) == 1
    D = [BS[j].denominator for j in range(1, n + 1)]
    R = tuple(d // gcd(d, comb(n + 1, j)) for j, d in zip(range(1, n + 1), D))
    assert mp.R == R
    if n % 2 == 0:
        _, r = divmod(mp.Q, X_TIMES_X_PLUS_1_TIMES_2X_PLUS_1)
        assert not r.coeffs


def test_moser_L_divisibility_named():
    assert oracles.S(6, 2) * 6 == 546
    assert moser_L_divisibility(2, 5)
    assert moser_L_divisibility(2, 1)
    assert moser_L_divisibility(4, 7)
    with pytest.raises(ValueError):
        moser_L_divisibility(3, 5)


@settings(max_examples=60)
@given(st.integers(1, 10).map(lambda k: 2 * k), st.integers(1, 10**6))
def test_moser_L_divisibility_always(n, m):
    # integer coefficients: Q_n(m+1) == Q_n(1) = L (mod m)
    assert moser_L_divisibility(n, m)
