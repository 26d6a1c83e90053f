"""Bernoulli numbers, Faulhaber polynomials and the congruences built on them.

Convention: ``B_1 = -1/2``.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, lcm
from pathlib import Path

import gmpy2

from .arith import euler_phi, factorize, is_prime, is_square_free, rational_mod
from .egyptian import d_of
from .errors import HypothesisError, NotIntegralError, TheoremViolation
from .power_sums import power_sum_mod

__all__ = [
    "BernoulliTable",
    "DEFAULT_TABLE",
    "bernoulli",
    "staudt_denominator",
    "RationalPolynomial",
    "faulhaber",
    "pascal_bernoulli_sum",
    "pascal_bernoulli_check",
    "even_pascal_bernoulli_sum",
    "even_pascal_bernoulli_check",
    "bernoulli_diff",
    "agoh_check",
    "agoh_phi_check",
    "PseudoResult",
    "pseudo_check",
    "prime_supercongruence_check",
    "MoserPolynomial",
    "moser_polynomial",
    "moser_L_divisibility",
    "read_cache",
    "write_cache",
]


def staudt_denominator(k: int) -> int:
    """Product of the primes ``p`` with ``p - 1 | k`` (even ``k >= 2``)."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    out = 1
    divisors = [1]
    for q, e in factorize(k):
        divisors = [d * q**i for d in divisors for i in range(e + 1)]
    for d in divisors:
        if is_prime(d + 1):
            out *= d + 1
    return out


class BernoulliTable:
    """Grow-only table of exact Bernoulli numbers.

    Even indices come from ``sum_{j<n} C(n, j) B_j = 0`` solved for the top
    term, accumulated over a common denominator.  Odd indices ``>= 3`` are 0.
    Each new denominator is checked against the von Staudt-Clausen product.
    """

    def __init__(self):
        self._num = [1, -1]
        self._den = [1, 2]
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._num)

    def __getitem__(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("index must be non-negative")
        if k >= len(self._num):
            self.extend(k)
        return Fraction(self._num[k], self._den[k])

    def pair(self, k: int) -> tuple[int, int]:
        """``(n_k, D_k)``, numerator and positive denominator in lowest terms."""
        if k >= len(self._num):
            self.extend(k)
        return self._num[k], self._den[k]

    def extend(self, k: int) -> None:
        with self._lock:
            top = len(self._num) - 1
            if top >= k:
                return
            num = [gmpy2.mpz(x) for x in self._num]
            den = [gmpy2.mpz(x) for x in self._den]
            # common denominator of all B_j with even j < n
            L = gmpy2.mpz(lcm(*self._den))
            for n in range(top + 1, k + 1):
                if n % 2:
                    num.append(gmpy2.mpz(0))
                    den.append(gmpy2.mpz(1))
                    continue
                L = gmpy2.lcm(L, den[n - 2])
                # (n+1) B_n = -sum_{j<n} C(n+1, j) B_j ; B_1 term written out
                s = L - (n + 1) * (L // 2)
                for j in range(2, n, 2):
                    s += gmpy2.comb(n + 1, j) * num[j] * (L // den[j])
                top_num, top_den = -s, L * (n + 1)
                g = gmpy2.gcd(top_num, top_den)
                top_num //= g
                top_den //= g
                if top_den != staudt_denominator(n):
                    raise TheoremViolation(f"denominator of B_{n} is {top_den}, not the von Staudt-Clausen product")
                num.append(top_num)
                den.append(top_den)
            self._num = [int(x) for x in num]
            self._den = [int(x) for x in den]

    def load(self, path) -> None:
        entries = read_cache(path)
        for k, n, d in entries[2:]:
            if (k % 2 and n != 0) or (k % 2 == 0 and d != staudt_denominator(k)):
                raise ValueError(f"{path}: entry {k} is not a Bernoulli number")
        if entries[:2] and [(n, d) for _, n, d in entries[:2]] != [(1, 1), (-1, 2)][: len(entries)]:
            raise ValueError(f"{path}: B_0, B_1 entries are wrong")
        with self._lock:
            if len(entries) > len(self._num):
                self._num = [n for _, n, _ in entries]
                self._den = [d for _, _, d in entries]

    def save(self, path) -> None:
        write_cache(path, [(k, n, d) for k, (n, d) in enumerate(zip(self._num, self._den))])


def read_cache(path) -> list[tuple[int, int, int]]:
    """Parse a Bernoulli cache file: ``k<TAB>numerator<TAB>denominator`` per line."""
    entries = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            k, n, d = (int(x) for x in line.split("\t"))
            if k != len(entries):
                raise ValueError(f"{path}:{lineno}: expected index {len(entries)}, got {k}")
            if d < 1 or gcd(n, d) != 1:
                raise ValueError(f"{path}:{lineno}: fraction not in lowest terms")
            entries.append((k, n, d))
    return entries


def write_cache(path, entries) -> None:
    tmp = Path(str(path) + ".tmp")
    with open(tmp, "w") as fh:
        for k, n, d in entries:
            fh.write(f"{k}\t{n}\t{d}\n")
    os.replace(tmp, path)


DEFAULT_TABLE = BernoulliTable()


def bernoulli(k: int) -> Fraction:
    """Exact ``B_k`` (``B_1 = -1/2``)."""
    return DEFAULT_TABLE[k]


# ---------------------------------------------------------------------------
# polynomials with rational coefficients


class RationalPolynomial:
    """Dense polynomial over Q, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, RationalPolynomial):
            other = RationalPolynomial(other if isinstance(other, (list, tuple)) else [other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RationalPolynomial({[str(c) for c in self.coeffs]})"

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return RationalPolynomial(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
        )

    def __neg__(self):
        return RationalPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, RationalPolynomial):
            return RationalPolynomial([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return RationalPolynomial([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __divmod__(self, divisor):
        if not divisor.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = divisor.degree
        lead = divisor.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dd, 0)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i] / lead
            quot[i - dd] = c
            if c:
                for j, b in enumerate(divisor.coeffs):
                    rem[i - dd + j] -= c * b
        return RationalPolynomial(quot), RationalPolynomial(rem[:dd] if dd else [])

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` primitive in Z[x]."""
        if not self.coeffs:
            return Fraction(0)
        num = gcd(*(c.numerator for c in self.coeffs))
        den = lcm(*(c.denominator for c in self.coeffs))
        return Fraction(num, den)


X_TIMES_X_PLUS_1_TIMES_2X_PLUS_1 = RationalPolynomial([0, 1, 3, 2])


_faulhaber_cache: dict[int, RationalPolynomial] = {}


def faulhaber(n: int) -> RationalPolynomial:
    """The polynomial ``P_n`` of degree ``n+1`` with ``P_n(a) = S_n(a)`` for ``a >= 1``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    poly = _faulhaber_cache.get(n)
    if poly is None:
        coeffs = [Fraction(0)] * (n + 2)
        for j in range(n + 1):
            coeffs[n + 1 - j] = (-1) ** j * comb(n + 1, j) * bernoulli(j) / (n + 1)
        poly = _faulhaber_cache[n] = RationalPolynomial(coeffs)
    return poly


# ---------------------------------------------------------------------------
# Pascal-type identities


def pascal_bernoulli_sum(n: int, m: int) -> Fraction:
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    return sum(
        (
            (-1) ** k * comb(n, k) * comb(k + 1, m) * bernoulli(k + 1 - m) / (k + 1)
            for k in range(m - 1, n)
        ),
        Fraction(0),
    )


def pascal_bernoulli_check(n: int, m: int) -> bool:
    return pascal_bernoulli_sum(n, m) == (-1) ** (m + 1) * comb(n, m)


def even_pascal_bernoulli_sum(n: int, m: int) -> Fraction:
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    start = m // 2  # ceil((m - 1) / 2)
    return sum(
        (
            comb(n, 2 * k) * comb(2 * k + 1, m) * bernoulli(2 * k + 1 - m) / (2 * k + 1)
            for k in range(start, (n - 2) // 2 + 1)
        ),
        Fraction(0),
    )


def even_pascal_bernoulli_check(n: int, m: int) -> bool:
    return even_pascal_bernoulli_sum(n, m) == Fraction((-1) ** (m + 1) * comb(n, m), 2)


# ---------------------------------------------------------------------------
# congruences


def bernoulli_diff(n: int, k: int) -> tuple[int, int, bool]:
    """``(denominator, numerator, ok)`` of ``B_{2nk} - B_{2n}``.

    ``ok`` says the denominator equals ``D_{2nk} / D_{2n}`` and the numerator
    is congruent to ``d(denominator)`` modulo the denominator.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    diff = bernoulli(2 * n * k) - bernoulli(2 * n)
    Q, P = diff.denominator, diff.numerator
    D_big, D_small = DEFAULT_TABLE.pair(2 * n * k)[1], DEFAULT_TABLE.pair(2 * n)[1]
    ok = D_big % D_small == 0 and Q == D_big // D_small and (P - d_of(Q)) % Q == 0
    return Q, P, ok


def _n_integral_residue(x: Fraction, n: int) -> int:
    try:
        return rational_mod(x, n)
    except ValueError:
        raise NotIntegralError(f"{x} is not {n}-integral") from None


def agoh_check(n: int, strict: bool = True) -> tuple[bool, bool, bool]:
    """Evaluate the three conditions of Agoh's equivalence for ``n >= 2``.

    (i) ``p | n/p - 1`` for every prime ``p | n``;
    (ii) ``S_{n-1}(n-1) == -1 (mod n)``;
    (iii) ``n B_{n-1} == -1 (mod n)``.
    With ``strict`` a disagreement raises :class:`TheoremViolation`.  They do
    disagree at Giuga numbers, where (i) holds and (ii), (iii) fail; see
    :func:`agoh_phi_check` for the form that holds for every ``n``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    cond_i = all((n // p - 1) % p == 0 for p, _ in factorize(n))
    cond_ii = power_sum_mod(n - 1, n - 1, n) == n - 1
    try:
        cond_iii = _n_integral_residue(n * bernoulli(n - 1), n) == n - 1
    except NotIntegralError:
        if strict:
            raise
        cond_iii = False
    if strict and not cond_i == cond_ii == cond_iii:
        raise TheoremViolation(f"Agoh conditions disagree at n={n}: {(cond_i, cond_ii, cond_iii)}")
    return cond_i, cond_ii, cond_iii


def agoh_phi_check(n: int, strict: bool = True) -> tuple[bool, bool, bool]:
    """Agoh's conditions with the exponent ``phi(n)`` in place of ``n - 1``.

    (i) ``p | n/p - 1`` for every prime ``p | n``;
    (ii) ``S_phi(n)(n-1) == -1 (mod n)``;
    (iii) ``n B_phi(n) == -1 (mod n)``.
    For prime ``n`` this is the same as :func:`agoh_check`.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    phi = euler_phi(n)
    cond_i = all((n // p - 1) % p == 0 for p, _ in factorize(n))
    cond_ii = power_sum_mod(n - 1, phi, n) == n - 1
    cond_iii = _n_integral_residue(n * bernoulli(phi), n) == n - 1
    if strict and not cond_i == cond_ii == cond_iii:
        raise TheoremViolation(f"phi-form Agoh conditions disagree at n={n}: {(cond_i, cond_ii, cond_iii)}")
    return cond_i, cond_ii, cond_iii


@dataclass(frozen=True)
class PseudoResult:
    criterion_i: bool | None  # None when n is not square-free
    d: int | None  # the d in [1, n] with S_phi(n)(n) == d (mod n)
    congruence_ii: bool


def pseudo_check(n: int) -> PseudoResult:
    """Power sums to the exponent ``phi(n)`` modulo ``n``.

    (i), square-free ``n`` only: for every ``d`` in ``[1, n]``,
    ``p | n/p + d`` for all ``p | n`` exactly when ``S_phi(n)(n) == d (mod n)``.
    (ii) ``S_phi(n)(n) == n B_phi(n) (mod n)`` for all ``n``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    phi = euler_phi(n)
    s = power_sum_mod(n, phi, n)
    primes = [p for p, _ in factorize(n)]
    criterion = None
    d_found = None
    if is_square_free(n):
        criterion = True
        for d in range(1, n + 1):
            lhs = all((n // p + d) % p == 0 for p in primes)
            rhs = s == d % n
            if lhs != rhs:
                criterion = False
            if rhs:
                d_found = d
    congruence = _n_integral_residue(n * bernoulli(phi), n) == s
    return PseudoResult(criterion, d_found, congruence)


def prime_supercongruence_check(p: int) -> bool:
    """``S_{p-1}(p) == p B_{p-1} (mod p^3)`` for primes ``p > 3``."""
    if p <= 3 or not is_prime(p):
        raise HypothesisError(f"hypothesis not met: need a prime p > 3, got {p}")
    M = p**3
    return power_sum_mod(p, p - 1, M) == _n_integral_residue(p * bernoulli(p - 1), M)


# ---------------------------------------------------------------------------
# Moser's integer-coefficient polynomial


@dataclass(frozen=True)
class MoserPolynomial:
    n: int
    Q: RationalPolynomial  # integer coefficients with content 1
    L: int
    R: tuple[int, ...]
    content_normalized: bool  # True if L * P_n had content > 1 and was divided down


def moser_polynomial(n: int) -> MoserPolynomial:
    """``Q_n = L_n P_n`` with ``L_n = (n+1) lcm(R_1, ..., R_n)``, ``R_j = D_j / gcd(D_j, C(n+1, j))``."""
    if n < 1:
        raise ValueError("n must be positive")
    R = tuple(
        DEFAULT_TABLE.pair(j)[1] // gcd(DEFAULT_TABLE.pair(j)[1], comb(n + 1, j)) for j in range(1, n + 1)
    )
    L = (n + 1) * lcm(*R)
    Q = faulhaber(n) * L
    if not Q.is_integral():
        raise TheoremViolation(f"L_{n} P_{n} does not have integer coefficients")
    content = Q.content()
    normalized = content != 1
    if normalized:
        Q = Q * (1 / content)
    if n % 2 == 0:
        _, rem = divmod(Q, X_TIMES_X_PLUS_1_TIMES_2X_PLUS_1)
        if rem.coeffs:
            raise TheoremViolation(f"x(x+1)(2x+1) does not divide Q_{n}")
    return MoserPolynomial(n, Q, L, R, normalized)


def moser_L_divisibility(n: int, m: int) -> bool:
    """``Q_n(m+1) == L_n (mod m)`` with ``Q_n = L_n P_n``."""
    if n % 2 or n < 2:
        raise ValueError("n must be even and >= 2")
    if m < 1:
        raise ValueError("m must be positive")
    mp = moser_polynomial(n)
    value = (faulhaber(n) * mp.L)(m + 1)
    assert value.denominator == 1
    return (value.numerator - mp.L) % m == 0
