from fractions import Fraction
from math import gcd, prod

import pytest
from hypothesis import given, strategies as st

from erdosmoser.arith import factorize, is_prime
from erdosmoser.egyptian import (
    Flag,
    Rule,
    Target,
    classify,
    d_of,
    generate,
    generate_with_factorization,
    leibnitz_power,
    leibnitz_product,
    leibnitz_quotient,
    never_product_check,
    prime_power_criterion,
    search,
    signed_prime_instance_check,
    solve,
    subset_split,
)
from erdosmoser.errors import HypothesisError, PreconditionError

import oracles

N6 = 2214502422
N8 = 8490421583559688410706771261086
GIRGENSOHN_FACTORS = [2, 3, 11, 23, 31, 47059, 2217342227, 1729101023519,
                      8491659218261819498490029296021, 58254480569119734123541298976556403]
GIRGENSOHN = int("4200017949707747062038711509670656632404195753751630609228764416142557211582098432545190323474818")


@pytest.mark.parametrize("n,expected", [(455, -191), (13, -1), (30, -31), (1, 0), (12, -10), (9, -3)])
def test_d_examples(n, expected):
    assert d_of(n) == expected == oracles.d_naive(n)


def test_solution_is_integral():
    for n in range(1, 10**5 + 1, 37):
        sol = solve(n)
        assert sol.unit_fraction_sum().denominator == 1
        assert (sol.d_raw - sol.d_canonical) % n == 0 and 0 <= sol.d_canonical < n


def test_d_against_oracle_and_derivative():
    for n in range(1, 10**4 + 1):
        d = d_of(n)
        assert d == oracles.d_naive(n)
        if (d - 1) % n == 0 or (d + 1) % n == 0:
            assert oracles.square_free_naive(n)
        if n > 1 and oracles.square_free_naive(n):
            assert d == -oracles.arithmetic_derivative(n)


@pytest.mark.parametrize(
    "n,flags",
    [
        (30, Flag.GIUGA | Flag.STRONG_GIUGA | Flag.SQUARE_FREE),
        (42, Flag.PRIMARY_PSEUDOPERFECT | Flag.SQUARE_FREE),
        (66, Flag.SQUARE_FREE),
        (1, Flag.SQUARE_FREE),
        (2, Flag.PRIME | Flag.SQUARE_FREE | Flag.PRIMARY_PSEUDOPERFECT),
        (7, Flag.PRIME | Flag.SQUARE_FREE),
        (12, Flag(0)),
    ],
)
def test_classify_examples(n, flags):
    assert classify(n) == flags


def test_classification_invariants():
    for n in range(1, 5000):
        f = classify(n)
        if Flag.STRONG_GIUGA in f:
            assert Flag.GIUGA in f
        if Flag.GIUGA in f or Flag.PRIMARY_PSEUDOPERFECT in f:
            assert Flag.SQUARE_FREE in f
        if Flag.GIUGA in f:
            assert not is_prime(n)


def test_prime_power_criterion():
    assert prime_power_criterion(12, -10)
    assert gcd(12, 10) == 2  # not square-free, and gcd != 1
    assert prime_power_criterion(30, -31)
    assert prime_power_criterion(9, -3)
    # -16 is not congruent to d(12) = -10 mod 12
    with pytest.raises(PreconditionError, match="not a solution pair"):
        prime_power_criterion(12, -16)
    for n in range(1, 2000):
        assert prime_power_criterion(n, d_of(n))
        assert prime_power_criterion(n, d_of(n) + 5 * n)


@pytest.mark.parametrize("n,k,expected", [(6, 2, -30), (7, 1, -1), (10, 3, -700)])
def test_leibnitz_power_examples(n, k, expected):
    assert leibnitz_power(n, k) == expected == oracles.d_naive(n**k)


@pytest.mark.parametrize("M,n,expected", [(6, 5, -31), (1, 30, -31), (6, 4, -20)])
def test_leibnitz_product_examples(M, n, expected):
    assert leibnitz_product(M, n) == expected == oracles.d_naive(M * n)


@pytest.mark.parametrize("a,b,expected", [(30, 5, -5), (4, 2, -1), (36, 6, -5)])
def test_leibnitz_quotient_examples(a, b, expected):
    assert leibnitz_quotient(a, b) == expected == oracles.d_naive(a // b)


def test_leibnitz_quotient_rejects_non_divisor():
    with pytest.raises(PreconditionError):
        leibnitz_quotient(10, 3)


def test_leibnitz_sweeps():
    for n in range(1, 201):
        for k in range(1, 5):
            leibnitz_power(n, k)
    for M in range(1, 301, 3):
        for n in range(1, 301):
            leibnitz_product(M, n)
    for a in range(1, 10**4 + 1, 7):
        for b in (1, 2, 3, 4, 6, 8, 9, 12, 36, a):
            if a % b == 0:
                leibnitz_quotient(a, b)


def test_generate_examples():
    assert generate(42, Rule.PPP_UP) == 1806
    assert generate(2, "ppp-up") == 6  # n + 1 = 3 is the smallest odd prime
    assert generate(6, Rule.GIUGA_DOWN) == 30
    assert Flag.STRONG_GIUGA in classify(30)
    assert generate(N6, Rule.PPP_SPLIT, 2839805, 1726886521097) == N8
    assert generate(N6, Rule.GIUGA_SPLIT, 45193927, 108510618629) == 554079914617070801288578559178


def test_generate_chains():
    ups = [generate(n, Rule.PPP_UP) for n in (2, 6, 42, 1806, 47058) if is_prime(n + 1) and n + 1 > 2]
    assert ups == [6, 42, 1806, N6]
    downs = [generate(n, Rule.GIUGA_DOWN) for n in (6, 42, 47058)]
    assert downs == [30, 1722, 2214408306]


def test_generate_output_factorization():
    out, fac = generate_with_factorization(N6, Rule.PPP_SPLIT, 2839805, 1726886521097)
    assert [p for p, _ in fac] == [2, 3, 11, 23, 31, 47059, 2217342227, 1729101023519]
    assert prod(p**e for p, e in fac) == out


def test_generate_hypothesis_errors():
    with pytest.raises(HypothesisError, match="not an odd prime"):
        generate(1806, Rule.PPP_UP)
    with pytest.raises(HypothesisError, match="not prime"):
        generate(10, Rule.GIUGA_DOWN)
    with pytest.raises(HypothesisError, match="F\\*G"):
        generate(N6, Rule.PPP_SPLIT, 2839805, 17)
    with pytest.raises(HypothesisError, match="needs both"):
        generate(N6, Rule.PPP_SPLIT, 2839805)


def test_generate_on_non_ppp_is_classified_consistently():
    # input not PPP: output must not be PPP / strong Giuga either
    out = generate(4, Rule.PPP_UP)
    assert out == 20 and Flag.PRIMARY_PSEUDOPERFECT not in classify(out)
    out = generate(8, Rule.GIUGA_DOWN)
    assert out == 56 and Flag.STRONG_GIUGA not in classify(out)


def test_girgensohn_number():
    fac = [(p, 1) for p in GIRGENSOHN_FACTORS]
    assert prod(GIRGENSOHN_FACTORS) == GIRGENSOHN
    assert len(str(GIRGENSOHN)) == 97
    flags = classify(GIRGENSOHN, fac)
    assert Flag.STRONG_GIUGA in flags and Flag.GIUGA in flags and Flag.SQUARE_FREE in flags
    assert d_of(GIRGENSOHN, fac) == -1 - GIRGENSOHN
    # the same number arises from n_8 by the Giuga split rule
    F, G = GIRGENSOHN_FACTORS[-2] - N8, GIRGENSOHN_FACTORS[-1] - N8
    assert F * G == N8 * N8 - 1
    assert generate(N8, Rule.GIUGA_SPLIT, F, G, factorization=factorize(N6) + [(2217342227, 1), (1729101023519, 1)]) == GIRGENSOHN


def test_classify_rejects_bad_fixture():
    with pytest.raises(ValueError):
        classify(30, [(2, 1), (15, 1)])
    with pytest.raises(ValueError):
        classify(30, [(2, 1), (3, 1)])


def test_never_product():
    assert never_product_check(30, 7, -1)
    assert never_product_check(2, 3, -1)
    with pytest.raises(PreconditionError):
        never_product_check(2, 3, 1)  # d(3) = -1, not +1 mod 3
    assert oracles.d_naive(42) == -41 and (-41 - 1) % 42 == 0
    with pytest.raises(PreconditionError):
        never_product_check(6, 7, 1)  # d(7) = -1, not +1 mod 7
    with pytest.raises(PreconditionError):
        never_product_check(6, 4, -1)


def test_never_product_sweep():
    plus = [n for n in range(2, 400) if (oracles.d_naive(n) - 1) % n == 0]
    minus = [n for n in range(2, 400) if (oracles.d_naive(n) + 1) % n == 0]
    for eps, pool in ((1, plus), (-1, minus)):
        for M in pool:
            for n in pool:
                if M < n and gcd(M, n) == 1:
                    assert never_product_check(M, n, eps)


def test_subset_split():
    assert subset_split(30, {2, 3}) == (-25 % 30, -6 % 30)
    assert subset_split(42, set()) == (0, d_of(42) % 42)
    assert subset_split(42, {7}) == (-6 % 42, -35 % 42)
    with pytest.raises(PreconditionError):
        subset_split(30, {7})


def test_signed_prime_instance():
    assert 19 * -37 * -39 == 27417
    assert signed_prime_instance_check()
    assert not signed_prime_instance_check((20, -37, -39))
    assert not signed_prime_instance_check(product_term=False)
    assert sum((Fraction(1, t) for t in (19, -37, -39, 27417)), Fraction(0)) == 0


def _brute(lo, hi, pred):
    return [n for n in range(lo, hi + 1) if pred(n)]


def test_search_examples():
    assert search(1, 10**4, Target.GIUGA).hits == [30, 858, 1722]
    assert search(1, 10**5, Target.PPP).hits == [2, 6, 42, 1806, 47058]
    assert search(1, 100, Target.D_EQUALS_PLUS_1).hits == [2, 6, 42]
    assert search(1, 1, Target.PPP).hits == []


def test_search_against_brute_force():
    hi = 20000
    giuga = _brute(2, hi, lambda n: not oracles.naive_is_prime(n) and (oracles.d_naive(n) + 1) % n == 0)
    ppp = _brute(2, hi, lambda n: oracles.d_naive(n) == 1 - n)
    plus = _brute(2, hi, lambda n: (oracles.d_naive(n) - 1) % n == 0)
    assert search(1, hi, "giuga").hits == giuga
    assert search(1, hi, "ppp").hits == ppp
    assert search(1, hi, "d-plus-1").hits == plus


def test_search_giuga_to_1e5():
    # brute force by the naive oracle confirms the fourth Giuga number
    assert not oracles.naive_is_prime(66198) and (oracles.d_naive(66198) + 1) % 66198 == 0
    assert search(1, 10**5, "giuga").hits == [30, 858, 1722, 66198]


def test_search_chunking_and_jobs_agree():
    a = search(1, 600_000, "giuga", jobs=1).hits
    b = search(1, 600_000, "giuga", jobs=4).hits
    c = search(1, 300_000, "giuga").hits + search(300_001, 600_000, "giuga").hits
    assert a == b == c


def test_search_above_sieve_limit_uses_factorization(monkeypatch):
    import erdosmoser.egyptian as eg

    monkeypatch.setattr(eg, "SIEVE_LIMIT", 1000)
    assert search(1, 2000, "giuga").hits == [30, 858, 1722]
    assert search(1700, 1900, "ppp").hits == [1806]


def test_search_skipped_channel(monkeypatch):
    import erdosmoser.egyptian as eg
    from erdosmoser.arith import FactorizationError

    monkeypatch.setattr(eg, "SIEVE_LIMIT", 0)

    def boom(n, effort=None):
        raise FactorizationError(n, n)

    monkeypatch.setattr(eg, "classify", lambda n, effort=None: boom(n))
    res = search(10, 12, "giuga")
    assert res.hits == [] and res.skipped == [10, 11, 12]


@given(st.integers(2, 10**6))
def test_d_matches_oracle_property(n):
    assert d_of(n) == oracles.d_naive(n)
