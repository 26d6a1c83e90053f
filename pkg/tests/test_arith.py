import random

import pytest
from hypothesis import given, strategies as st

from erdosmoser.arith import (
    INFINITY,
    FactorizationError,
    NotPrimeError,
    V_p,
    V_p_from_digits,
    base_p_digits,
    crt,
    euler_phi,
    factorization_product,
    factorize,
    is_prime,
    is_square_free,
    mod_pow,
    multiplicative_order,
    primes_up_to,
    primitive_root,
    rational_mod,
    spf_sieve,
    v_p,
)
from fractions import Fraction

import oracles


@pytest.mark.parametrize("q,p,expected", [(51039, 3, 2), (0, 5, INFINITY), (100, 2, 2), (-45, 3, 2), (7, 7, 1)])
def test_v_p_examples(q, p, expected):
    assert v_p(q, p) == expected


def test_v_p_rejects_composite():
    with pytest.raises(NotPrimeError, match="p not prime"):
        v_p(10, 4)


def test_v_p_against_oracle():
    for q in range(1, 3000):
        for p in (2, 3, 5, 7, 11):
            assert v_p(q, p) == oracles.naive_v(q, p)


@given(st.integers(-100, 100), st.integers(-100, 100), st.sampled_from([2, 3, 5, 7]))
def test_v_p_additive(a, b, p):
    assert v_p(a * b, p) == v_p(a, p) + v_p(b, p)


def test_infinity_semantics():
    assert INFINITY + 3 == INFINITY
    assert 3 + INFINITY == INFINITY
    assert INFINITY > 10**100
    assert not INFINITY < 5
    assert 2 * INFINITY == INFINITY


@pytest.mark.parametrize("m,p,expected", [(53, 3, [2, 2, 2, 1]), (0, 5, [0]), (45, 3, [0, 0, 2, 1])])
def test_base_p_digits(m, p, expected):
    assert base_p_digits(m, p) == expected


@pytest.mark.parametrize("m,p,expected", [(53, 3, 3), (5, 3, 1), (3, 2, 2)])
def test_V_p_examples(m, p, expected):
    assert V_p(m, p) == expected


def test_V_p_two_routes_agree():
    for p in (2, 3, 5, 7, 11):
        for m in range(1, 10**4 + 1):
            via_formula = v_p(m - m // p, p) + 1
            assert V_p_from_digits(m, p) == via_formula == oracles.trailing_equal_digits(m, p)


def test_V_p_rejects_zero():
    with pytest.raises(ValueError):
        V_p(0, 3)


@pytest.mark.parametrize(
    "n,expected",
    [(455, [(5, 1), (7, 1), (13, 1)]), (1, []), (47058, [(2, 1), (3, 1), (11, 1), (23, 1), (31, 1)])],
)
def test_factorize_examples(n, expected):
    assert factorize(n) == expected


def test_factorize_reconstructs_range():
    for n in range(1, 10**5 + 1):
        f = factorize(n)
        assert factorization_product(f) == n
        assert all(is_prime(p) and e >= 1 for p, e in f)
        assert [p for p, _ in f] == sorted({p for p, _ in f})


def test_factorize_matches_trial_division():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randrange(1, 10**10)
        assert factorize(n) == oracles.trial_factor(n)


def test_factorize_large_semiprime():
    p, q = 1000000007, 998244353
    assert factorize(p * q * 12) == [(2, 2), (3, 1), (q, 1), (p, 1)]


def test_factorize_effort_exceeded_is_an_error():
    # two 31- and 35-digit primes: out of reach for a tiny iteration cap
    n = 8491659218261819498490029296021 * 58254480569119734123541298976556403
    with pytest.raises(FactorizationError, match="incomplete factorization"):
        factorize(n, effort=1000)


@pytest.mark.parametrize("n,expected", [(47059, True), (1, False), (2217342227, True), (0, False), (-7, False), (2, True)])
def test_is_prime_examples(n, expected):
    assert is_prime(n) is expected


def test_is_prime_against_oracle():
    for n in range(-5, 20000):
        assert is_prime(n) == oracles.naive_is_prime(n)


def test_is_prime_strong_pseudoprimes():
    # strong pseudoprimes to several small bases, and Carmichael numbers
    for n in (2047, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383, 341550071728321, 561, 41041):
        assert not is_prime(n)


def test_is_prime_large_and_certified():
    big_primes = [1729101023519, 8491659218261819498490029296021, 58254480569119734123541298976556403, 2**127 - 1]
    for p in big_primes:
        assert is_prime(p)
    # Pocklington needs n - 1 factored past sqrt(n); these Mersenne primes qualify
    for p in (2**89 - 1, 2**107 - 1, 2**127 - 1):
        assert is_prime(p, certify=True)
    assert not is_prime((2**61 - 1) * (2**89 - 1))
    assert not is_prime(58254480569119734123)


def test_sieves():
    ps = primes_up_to(1000)
    assert list(ps) == [n for n in range(1000 + 1) if oracles.naive_is_prime(n)]
    spf = spf_sieve(500)
    for n in range(2, 501):
        assert spf[n] == oracles.trial_factor(n)[0][0]


@pytest.mark.parametrize("b,e,M,expected", [(2, 10, 1000, 24), (7, 0, 13, 1), (3, 4, 5, 1), (5, 3, 1, 0)])
def test_mod_pow_examples(b, e, M, expected):
    assert mod_pow(b, e, M) == expected


@given(st.integers(-10**6, 10**6), st.integers(0, 500), st.integers(1, 10**9))
def test_mod_pow_matches_builtin(b, e, M):
    assert mod_pow(b, e, M) == pow(b, e, M)


@pytest.mark.parametrize("a,p,expected", [(2, 7, 3), (1, 13, 1), (2, 3, 2)])
def test_multiplicative_order_examples(a, p, expected):
    assert multiplicative_order(a, p) == expected


def test_multiplicative_order_divides_p_minus_1():
    for p in [int(x) for x in primes_up_to(400)]:
        for a in range(1, min(p, 60)):
            t = multiplicative_order(a, p)
            assert (p - 1) % t == 0
            assert t == oracles.order_brute(a, p)


def test_multiplicative_order_rejects_non_units():
    with pytest.raises(ValueError):
        multiplicative_order(14, 7)


@pytest.mark.parametrize("q,expected", [(9, 2), (3, 2), (25, 2), (7, 3), (49, 3), (23, 5)])
def test_primitive_root(q, expected):
    assert primitive_root(q) == expected


def test_primitive_root_is_smallest():
    for q in (3, 5, 7, 9, 11, 13, 25, 27, 49, 121, 169, 343):
        g = primitive_root(q)
        phi = oracles.phi_naive(q)
        assert oracles.order_brute(g, q) == phi
        assert all(oracles.order_brute(h, q) != phi for h in range(2, g) if h % factorize(q)[0][0])


@pytest.mark.parametrize("bad", [8, 2, 15, 1, 36])
def test_primitive_root_rejects(bad):
    with pytest.raises(ValueError):
        primitive_root(bad)


@pytest.mark.parametrize("n,expected", [(9, 6), (1, 1), (729, 486)])
def test_euler_phi_examples(n, expected):
    assert euler_phi(n) == expected


def test_euler_phi_against_oracle():
    for n in range(1, 600):
        assert euler_phi(n) == oracles.phi_naive(n)


def test_square_free():
    for n in range(1, 3000):
        assert is_square_free(n) == oracles.square_free_naive(n)


def test_rational_mod():
    assert rational_mod(Fraction(-1, 6), 5) == 4
    assert rational_mod(Fraction(2, 3), 4) == 2
    for x in (Fraction(7, 9), Fraction(-5, 11), Fraction(3)):
        assert rational_mod(x, 25) == oracles.rational_mod_naive(x, 25)
    with pytest.raises(ValueError):
        rational_mod(Fraction(1, 5), 25)


def test_crt():
    assert crt([2, 3, 2], [3, 5, 7]) == (23, 105)
