"""Exact integer machinery: valuations, base-p digits, primality, factoring.

Everything here is a pure function of its arguments.  Integers are plain
Python ints, rationals are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import enum
import math
import random
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

__all__ = [
    "INFINITY",
    "Infinity",
    "FactorizationError",
    "NotPrimeError",
    "v_p",
    "base_p_digits",
    "V_p",
    "V_p_from_digits",
    "is_prime",
    "primes_up_to",
    "spf_sieve",
    "factorize",
    "factorization_product",
    "is_square_free",
    "mod_pow",
    "multiplicative_order",
    "primitive_root",
    "euler_phi",
    "rational_mod",
    "crt",
]


class Infinity(enum.Enum):
    """The value of ``v_p(0)``.

    Compares greater than every int and absorbs addition, so
    ``INFINITY + k == INFINITY``.
    """

    INFINITY = "inf"

    def __repr__(self):
        return "INFINITY"

    __str__ = __repr__

    def __add__(self, other):
        if isinstance(other, (int, Infinity)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int) and other > 0:
            return self
        return NotImplemented

    __rmul__ = __mul__

    def __lt__(self, other):
        if isinstance(other, (int, Infinity)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, Infinity):
            return True
        if isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, Infinity):
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (int, Infinity)):
            return True
        return NotImplemented


INFINITY = Infinity.INFINITY


class NotPrimeError(ValueError):
    pass


class FactorizationError(RuntimeError):
    """Raised when a factorization cannot be completed within the effort cap."""

    def __init__(self, n, remaining):
        super().__init__(f"incomplete factorization of {n}: cofactor {remaining} resisted splitting")
        self.n = n
        self.remaining = remaining


def _require_prime(p):
    if not is_prime(p):
        raise NotPrimeError(f"p not prime: {p}")


def v_p(q: int, p: int):
    """p-adic order of ``q``; ``INFINITY`` when ``q == 0``."""
    _require_prime(p)
    if q == 0:
        return INFINITY
    q = abs(q)
    if p == 2:
        return (q & -q).bit_length() - 1
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return k


def base_p_digits(m: int, p: int) -> list[int]:
    """Digits of ``m`` in base ``p``, least significant first."""
    _require_prime(p)
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0:
        return [0]
    digits = []
    while m:
        m, r = divmod(m, p)
        digits.append(r)
    return digits


def V_p_from_digits(m: int, p: int) -> int:
    """Number of equal base-``p`` digits at the low end of ``m`` (``m >= 1``)."""
    digits = base_p_digits(m, p)
    run = 1
    while run < len(digits) and digits[run] == digits[0]:
        run += 1
    # past the leading digit come implicit zeros; digits[0] != 0 in that case
    return run


def V_p(m: int, p: int) -> int:
    """``v_p(m - floor(m/p)) + 1``, cross-checked against the trailing-digit count.

    Restricted to positive integers, where the value is always finite.
    """
    if m < 1:
        raise ValueError("V_p is only provided for positive integers")
    value = v_p(m - m // p, p) + 1
    by_digits = V_p_from_digits(m, p)
    if value != by_digits:  # pragma: no cover - would mean a broken identity
        raise AssertionError(f"V_p mismatch for m={m}, p={p}: {value} != {by_digits}")
    return value


# ---------------------------------------------------------------------------
# primality

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# Miller-Rabin with the first 13 primes as bases is exact below this bound.
_DETERMINISTIC_LIMIT = 3317044064679887385961981
MR_ROUNDS = 32


def _mr_round(n, d, s, a):
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int, certify: bool = False) -> bool:
    """Primality test.

    Deterministic below 3.3e24.  Above that, ``MR_ROUNDS`` Miller-Rabin rounds
    with seeded random bases (error below 4**-32).  With ``certify=True`` a
    Pocklington-Lehmer proof is attempted instead, and :class:`FactorizationError`
    is raised when ``n - 1`` cannot be factored far enough.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _DETERMINISTIC_LIMIT:
        return all(_mr_round(n, d, s, a) for a in _SMALL_PRIMES)
    if not all(_mr_round(n, d, s, a) for a in _SMALL_PRIMES):
        return False
    rng = random.Random(n)
    if not all(_mr_round(n, d, s, rng.randrange(2, n - 1)) for _ in range(MR_ROUNDS)):
        return False
    if certify:
        return _pocklington(n)
    return True


def _pocklington(n):
    # Need a fully factored part F of n-1 with F > sqrt(n).
    cofactor = n - 1
    known = []
    for p, e in _trial_divide(cofactor, 10**6)[0]:
        known.append(p)
        cofactor //= p**e
    F = (n - 1) // cofactor
    while F * F <= n:
        if cofactor == 1:
            break
        p = _find_factor(cofactor, max_iterations=10**6)
        if p is None:
            raise FactorizationError(n - 1, cofactor)
        for q, _ in _factor_into(p):
            while cofactor % q == 0:
                cofactor //= q
            known.append(q)
        F = (n - 1) // cofactor
    for q in set(known):
        for a in range(2, 1000):
            if pow(a, n - 1, n) != 1:
                return False
            if gcd(pow(a, (n - 1) // q, n) - 1, n) == 1:
                break
        else:
            raise FactorizationError(n, n)
    return True


@lru_cache(maxsize=8)
def primes_up_to(limit: int) -> np.ndarray:
    """All primes ``<= limit`` as an int64 array (sieve of Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, isqrt(limit) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def spf_sieve(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for ``0..limit`` (entries 0 and 1 are 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in primes_up_to(isqrt(limit)):
        p = int(p)
        block = spf[p * p :: p]
        block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    spf[:2] = 0
    return spf


# ---------------------------------------------------------------------------
# factorization

TRIAL_LIMIT = 10**6
DEFAULT_EFFORT = 2_000_000


def _trial_divide(n, limit):
    """Strip all prime factors ``<= limit``; returns (factors, cofactor)."""
    found = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found.append((p, e))
    if n == 1:
        return found, n
    if isqrt(n) >= 7:
        for p in _trial_primes(limit):
            if p > limit or p * p > n:
                break
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                found.append((p, e))
                if n == 1:
                    break
    return found, n


@lru_cache(maxsize=2)
def _trial_primes(limit):
    return tuple(int(p) for p in primes_up_to(max(limit, 7))[3:])


def _find_factor(n, max_iterations):
    """Brent's variant of Pollard rho.  ``None`` if nothing found in budget."""
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    spent = 0
    while spent < max_iterations:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            spent += r
            r *= 2
            if spent > max_iterations:
                break
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def _factor_into(n, max_iterations=DEFAULT_EFFORT):
    """Factor an integer with no small prime factors left; returns sorted pairs."""
    counts: dict[int, int] = {}
    stack = [n]
    while stack:
        x = stack.pop()
        if x == 1:
            continue
        if is_prime(x):
            counts[x] = counts.get(x, 0) + 1
            continue
        r = isqrt(x)
        if r * r == x:
            stack += [r, r]
            continue
        f = _find_factor(x, max_iterations)
        if f is None:
            raise FactorizationError(n, x)
        stack += [f, x // f]
    return sorted(counts.items())


def factorize(n: int, effort: int = DEFAULT_EFFORT) -> list[tuple[int, int]]:
    """Prime factorization of ``n >= 1`` as ``[(p, e), ...]`` with increasing ``p``.

    Trial division up to 10**6, then Pollard rho capped at ``effort`` iterations
    per cofactor.  Exceeding the cap raises :class:`FactorizationError`.
    """
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    if n < 4:
        return [] if n == 1 else [(n, 1)]
    found, rest = _trial_divide(n, TRIAL_LIMIT)
    if rest > 1:
        if rest < TRIAL_LIMIT**2:
            found.append((rest, 1))
        else:
            merged = dict(found)
            for p, e in _factor_into(rest, effort):
                merged[p] = merged.get(p, 0) + e
            found = sorted(merged.items())
    return found


def factorization_product(factors) -> int:
    out = 1
    for p, e in factors:
        out *= p**e
    return out


def is_square_free(n: int, effort: int = DEFAULT_EFFORT) -> bool:
    if n < 1:
        raise ValueError("is_square_free needs a positive integer")
    return all(e == 1 for _, e in factorize(n, effort))


# ---------------------------------------------------------------------------
# modular arithmetic

def mod_pow(b: int, e: int, M: int) -> int:
    """``b**e mod M`` by left-to-right square-and-multiply."""
    if M < 1:
        raise ValueError("modulus must be >= 1")
    if e < 0:
        raise ValueError("exponent must be non-negative")
    b %= M
    result = 1 % M
    for bit in bin(e)[2:]:
        result = result * result % M
        if bit == "1":
            result = result * b % M
    return result


def multiplicative_order(a: int, p: int) -> int:
    """Least ``t >= 1`` with ``a**t == 1 (mod p)``."""
    _require_prime(p)
    if gcd(a, p) != 1:
        raise ValueError(f"{a} is not invertible modulo {p}")
    order = p - 1
    for q, e in factorize(p - 1):
        for _ in range(e):
            if pow(a, order // q, p) == 1:
                order //= q
            else:
                break
    return order


def _order_mod(a, n, phi, phi_factors):
    order = phi
    for q, e in phi_factors:
        for _ in range(e):
            if pow(a, order // q, n) == 1:
                order //= q
            else:
                break
    return order


def primitive_root(p_power: int) -> int:
    """Smallest primitive root of an odd prime power."""
    if p_power < 3 or p_power % 2 == 0:
        raise ValueError("primitive_root needs an odd prime power")
    factors = factorize(p_power)
    if len(factors) != 1:
        raise ValueError(f"{p_power} is not a prime power")
    p, d = factors[0]
    phi = p ** (d - 1) * (p - 1)
    phi_factors = factorize(phi)
    for g in range(2, p_power):
        if g % p and _order_mod(g, p_power, phi, phi_factors) == phi:
            return g
    raise AssertionError("unreachable: odd prime powers have primitive roots")


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi needs a positive integer")
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def rational_mod(x, M: int) -> int:
    """Reduce a rational ``a/b`` modulo ``M`` as ``a * b^-1``; needs ``gcd(b, M) = 1``."""
    from fractions import Fraction

    x = Fraction(x)
    den = x.denominator
    if gcd(den, M) != 1:
        raise ValueError(f"denominator {den} not invertible modulo {M}")
    if M == 1:
        return 0
    return x.numerator * pow(den, -1, M) % M


def crt(residues, moduli):
    """Combine pairwise-coprime congruences; returns ``(x, M)``."""
    x, M = 0, 1
    for r, m in zip(residues, moduli):
        if gcd(M, m) != 1:
            raise ValueError("moduli must be pairwise coprime")
        t = (r - x) * pow(M, -1, m) % m
        x += M * t
        M *= m
    return x % M, M


def lcm_all(values) -> int:
    return math.lcm(*values) if values else 1
