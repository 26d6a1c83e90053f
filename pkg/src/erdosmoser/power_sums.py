"""Power sums S_n(m) = 1^n + ... + m^n, restricted sums, and their p-adic behaviour."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import repeat
from math import comb

import numpy as np

from .arith import V_p, factorize, is_prime, v_p
from .errors import HypothesisError, NotCoveredError, TheoremViolation

__all__ = [
    "power_sum",
    "power_sum_mod",
    "power_sum_table",
    "restricted_power_sum",
    "restricted_power_sum_mod",
    "restricted_sum_residue",
    "ResiduePrediction",
    "Decomposition",
    "decompose",
    "congruence_class_prediction",
    "Branch",
    "Prediction",
    "Status",
    "ValuationReport",
    "valuation_report",
    "v2_order",
    "carlitz_von_staudt_residue",
    "pascal_identity_check",
    "even_pascal_check",
    "sharpened_identity_check",
    "snp2_congruence_check",
    "negative_power_sum_check",
]

FAULHABER_CHECK_MAX_N = 50


def power_sum(m: int, n: int, verify: bool = True) -> int:
    """Exact ``S_n(m)`` for ``m, n >= 0`` by direct summation.

    For ``n <= 50`` the result is compared against the Faulhaber polynomial
    unless ``verify`` is false.
    """
    if m < 0 or n < 0:
        raise ValueError("power_sum needs m >= 0 and n >= 0; use restricted_power_sum for n < 0")
    total = sum(map(pow, range(1, m + 1), repeat(n)))
    if verify and n <= FAULHABER_CHECK_MAX_N and m > 0:
        from .bernoulli import faulhaber

        if faulhaber(n)(m) != total:
            raise TheoremViolation(f"Faulhaber polynomial disagrees with direct sum at m={m}, n={n}")
    return total


def power_sum_table(m_max: int, n_max: int) -> list[list[int]]:
    """``table[n][m] == S_n(m)`` for ``0 <= n <= n_max``, ``0 <= m <= m_max``."""
    table = []
    for n in range(n_max + 1):
        row = [0] * (m_max + 1)
        acc = 0
        for j in range(1, m_max + 1):
            acc += j**n
            row[j] = acc
        table.append(row)
    return table


_NUMPY_MODULUS_LIMIT = 1 << 31


def _prefix_power_sum_mod(L, n, M):
    """``S_n(L) mod M`` for ``L`` at most one period of ``M``."""
    if L <= 0 or M == 1:
        return 0
    if M < _NUMPY_MODULUS_LIMIT and L >= 32:
        base = np.arange(1, L + 1, dtype=np.int64) % M
        acc = np.ones(L, dtype=np.int64)
        e = n
        # products of two residues stay below 2**62
        while e:
            if e & 1:
                acc = acc * base % M
            e >>= 1
            if e:
                base = base * base % M
        return int(acc.sum() % M)
    return sum(pow(j, n, M) for j in range(1, L + 1)) % M


def power_sum_mod(m: int, n: int, M: int) -> int:
    """``S_n(m) mod M`` without forming ``S_n(m)``.

    Terms are periodic modulo ``M``, so ``m = qM + r`` reduces to one full
    period times ``q`` plus a partial period: cost is ``O(min(m, M))``.
    """
    if M < 1:
        raise ValueError("modulus must be >= 1")
    if m < 0 or n < 0:
        raise ValueError("power_sum_mod needs m >= 0 and n >= 0")
    q, r = divmod(m, M)
    total = 0
    if q:
        total = q * _prefix_power_sum_mod(M, n, M)
    total += _prefix_power_sum_mod(r, n, M)
    return total % M


def restricted_power_sum(m: int, n: int, p: int):
    """Sum of ``j**n`` over ``1 <= j <= m`` with ``p`` not dividing ``j``.

    Returns an int for ``n >= 0`` and a Fraction for negative ``n``.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if not is_prime(p):
        raise ValueError(f"p not prime: {p}")
    js = (j for j in range(1, m + 1) if j % p)
    if n >= 0:
        return sum(j**n for j in js)
    k = -n
    return sum((Fraction(1, j**k) for j in js), Fraction(0))


def restricted_power_sum_mod(m: int, n: int, p: int, M: int) -> int:
    """Restricted sum modulo ``M``; negative ``n`` uses modular inverses (``gcd(M, j) = 1``)."""
    return sum(pow(j, n, M) for j in range(1, m + 1) if j % p) % M


@dataclass(frozen=True)
class ResiduePrediction:
    residue: int
    modulus: int
    verified: bool | None  # None when p^d q was too large to sum directly


RESIDUE_VERIFY_LIMIT = 10**6


def restricted_sum_residue(p: int, d: int, q: int, n: int) -> ResiduePrediction:
    """Predicted ``S*_n(p^d q) mod p^d``: ``-p^(d-1) q`` when ``p-1 | n``, else 0."""
    if p == 2 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    if d < 1 or q < 1:
        raise ValueError("d and q must be positive")
    M = p**d
    residue = (-(p ** (d - 1)) * q) % M if n % (p - 1) == 0 else 0
    verified = None
    if M * q <= RESIDUE_VERIFY_LIMIT:
        verified = restricted_power_sum_mod(M * q, n, p, M) == residue
    return ResiduePrediction(residue, M, verified)


@dataclass(frozen=True)
class Decomposition:
    """``m = q p^d + r (p^d - 1)/(p - 1)`` with ``q != r (mod p)`` and ``r = m mod p``."""

    p: int
    d: int
    q: int
    r: int

    @property
    def m(self):
        return self.q * self.p**self.d + self.r * (self.p**self.d - 1) // (self.p - 1)


def decompose(m: int, p: int) -> Decomposition:
    if m < 1:
        raise ValueError("m must be positive")
    if p == 2 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    d = V_p(m, p)
    r = m % p
    rest = m - r * (p**d - 1) // (p - 1)
    q, rem = divmod(rest, p**d)
    assert rem == 0 and q % p != r, (m, p, d, q, r)
    return Decomposition(p, d, q, r)


def _case(m, p):
    r = m % p
    if r == 0:
        return "zero"
    if r == p - 1:
        return "minus_one"
    if r == (p - 1) // 2:
        return "half"
    return None


def congruence_class_prediction(m: int, n: int, p: int) -> tuple[int, int]:
    """Predicted ``(residue, modulus)`` of ``S_n(m)`` modulo ``p^V_p(m)``.

    Covers ``m = 0``, ``-1`` and ``(p-1)/2`` mod ``p``.  In the last class the
    zero residue is only established for even ``n``, so odd ``n`` (which then
    never has ``p - 1 | n``) raises :class:`NotCoveredError`.
    """
    if n < 1:
        raise ValueError("n must be positive")
    dec = decompose(m, p)
    case = _case(m, p)
    if case is None:
        raise NotCoveredError(f"m={m} is not 0, -1 or (p-1)/2 modulo {p}")
    M = p**dec.d
    lead = p ** (dec.d - 1)
    divides = n % (p - 1) == 0
    if case == "half" and not divides and n % 2:
        raise NotCoveredError(f"m = (p-1)/2 mod p with odd n={n} is not covered")
    if not divides:
        return 0, M
    if case == "zero":
        return -lead * dec.q % M, M
    if case == "minus_one":
        return -lead * (dec.q + 1) % M, M
    half = pow(2, -1, M)
    return -lead * (dec.q + half) % M, M


class Branch(enum.Enum):
    DIVIDES = "p-1 | n"
    NOT_DIVIDES = "p-1 does not divide n"
    ODD_UNPROVEN = "n odd, m = (p-1)/2 mod p"


class Prediction(enum.Enum):
    EQUALS = "equals V_p - 1"
    AT_LEAST = "at least V_p"


class Status(enum.Enum):
    CONSISTENT = "CONSISTENT"
    VIOLATION = "VIOLATION"
    UNPROVEN_FAILS = "UNPROVEN_FAILS"  # only possible on the ODD_UNPROVEN branch


@dataclass(frozen=True)
class ValuationReport:
    m: int
    n: int
    p: int
    actual_order: int
    V_p_value: int
    branch: Branch
    prediction: Prediction
    order_at_p_minus_1: int
    status: Status
    # what the theorem claims when read literally for the m = (p-1)/2 class,
    # i.e. "equals" for every even n and "at least" for every odd n
    literal_prediction: Prediction
    literal_consistent: bool

    @property
    def predicted_value(self):
        return self.V_p_value - 1 if self.prediction is Prediction.EQUALS else self.V_p_value

    @property
    def consistent(self):
        return self.status is Status.CONSISTENT


def _satisfies(actual, prediction, V, order_pm1):
    if prediction is Prediction.EQUALS:
        return actual == V - 1 and order_pm1 == V - 1
    return actual >= V


def valuation_report(
    m: int, n: int, p: int, value: int | None = None, value_p_minus_1: int | None = None
) -> ValuationReport:
    """Compare the exact ``v_p(S_n(m))`` with the predicted order.

    ``value`` and ``value_p_minus_1`` may carry precomputed ``S_n(m)`` and
    ``S_{p-1}(m)``; range sweeps pass them in from a table.
    """
    if n < 1 or m < 1:
        raise ValueError("m and n must be positive")
    if p == 2 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    case = _case(m, p)
    if case is None:
        raise NotCoveredError(f"residue class m={m} mod {p} not covered")
    S = power_sum(m, n, verify=False) if value is None else value
    actual = v_p(S, p)
    V = V_p(m, p)
    if value_p_minus_1 is None:
        value_p_minus_1 = power_sum(m, p - 1, verify=False)
    order_pm1 = v_p(value_p_minus_1, p)

    divides = n % (p - 1) == 0
    if divides:
        branch, prediction = Branch.DIVIDES, Prediction.EQUALS
    elif case != "half" or n % 2 == 0:
        branch, prediction = Branch.NOT_DIVIDES, Prediction.AT_LEAST
    else:
        branch, prediction = Branch.ODD_UNPROVEN, Prediction.AT_LEAST

    if case == "half":
        literal = Prediction.EQUALS if n % 2 == 0 else Prediction.AT_LEAST
    else:
        literal = prediction

    ok = _satisfies(actual, prediction, V, order_pm1)
    if ok:
        status = Status.CONSISTENT
    elif branch is Branch.ODD_UNPROVEN:
        status = Status.UNPROVEN_FAILS
    else:
        status = Status.VIOLATION
    return ValuationReport(
        m=m,
        n=n,
        p=p,
        actual_order=actual,
        V_p_value=V,
        branch=branch,
        prediction=prediction,
        order_at_p_minus_1=order_pm1,
        status=status,
        literal_prediction=literal,
        literal_consistent=_satisfies(actual, literal, V, order_pm1),
    )


def v2_order(m: int, n: int) -> int:
    """2-adic order of ``S_n(m)`` from the closed form in ``m`` alone."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    base = v_p(m * (m + 1) // 2, 2)
    if n == 1 or n % 2 == 0:
        return base
    return 2 * base


def carlitz_von_staudt_residue(m: int, n: int) -> tuple[int, int]:
    """``(modulus, residue)`` for ``S_n(m)``.

    Even ``n``: modulus ``m+1``, residue ``-sum (m+1)/p`` over primes
    ``p | m+1`` with ``p-1 | n``.  Odd ``n``: modulus ``m(m+1)/2``, residue 0.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if n % 2:
        return m * (m + 1) // 2, 0
    M = m + 1
    total = sum(M // p for p, _ in factorize(M) if n % (p - 1) == 0)
    return M, -total % M


def pascal_identity_check(a: int, n: int) -> bool:
    if a < 0 or n < 1:
        raise ValueError("need a >= 0 and n >= 1")
    lhs = sum(comb(n, k) * power_sum(a, k, verify=False) for k in range(n))
    return lhs == (a + 1) ** n - 1


def even_pascal_check(a: int, n: int) -> bool:
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    if a < 0:
        raise ValueError("a must be non-negative")
    lhs = sum(comb(n, 2 * k) * power_sum(a, 2 * k, verify=False) for k in range((n - 2) // 2 + 1))
    twice_rhs = (a + 1) ** n - (a**n + 1)
    return 2 * lhs == twice_rhs


def sharpened_identity_check(p: int, q: int, n: int, c: int, d: int) -> bool:
    """Block decomposition of ``S_n(p^d q)`` into sums over ``p^c``; ``p`` any integer >= 1."""
    if p < 1 or q < 1 or n < 0 or c < 0 or d < c:
        raise ValueError("need p, q >= 1, n >= 0 and d >= c >= 0")
    S = lambda m, k: power_sum(m, k, verify=False)  # noqa: E731
    outer = p ** (d - c) * q
    block = p**c
    rhs = outer * S(block, n)
    for k in range(1, n + 1):
        rhs += comb(n, k) * block**k * (S(outer, k) - outer**k) * S(block, n - k)
    return S(p**d * q, n) == rhs


def snp2_congruence_check(p: int, n: int) -> bool:
    """``S_n(p^2) == p S_n(p) + p n S_{n-1}(p) (S_1(p) - p)  (mod p^3)``.

    Holds for primes ``p >= 5``.  For ``p = 3`` the truth value is returned
    as is; the first failure is ``n = 8``.
    """
    if not is_prime(p):
        raise ValueError(f"p not prime: {p}")
    if p == 2:
        raise HypothesisError("p = 2 is outside the congruence's range")
    if n < 0:
        raise ValueError("n must be non-negative")
    S = lambda m, k: power_sum(m, k, verify=False)  # noqa: E731
    mod = p**3
    lhs = S(p * p, n)
    # S_{-1} never appears: the n*... term vanishes at n = 0
    rhs = p * S(p, n) + (p * n * S(p, n - 1) * (S(p, 1) - p) if n else 0)
    return (lhs - rhs) % mod == 0


def negative_power_sum_check(p: int, n: int) -> bool:
    """Numerator of ``1 + 1/2^n + ... + 1/(p-1)^n`` is divisible by ``p``.

    For ``n = 1`` and ``p >= 5`` divisibility by ``p^2`` is required as well.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not is_prime(p):
        raise ValueError(f"p not prime: {p}")
    if p < n + 2:
        raise HypothesisError(f"hypothesis not met: p={p} < n+2={n + 2}")
    total = restricted_power_sum(p - 1, -n, p)
    order = v_p(total.numerator, p)
    if n == 1 and p >= 5:
        return order >= 2
    return order >= 1
