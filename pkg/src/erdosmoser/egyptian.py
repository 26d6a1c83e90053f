"""The congruence  sum_{p|n} 1/p + d/n == 1 (mod 1)  and the map n -> d(n).

``d(n) = -sum_{p|n} n/p`` is the canonical solution.  Giuga numbers are the
composite n with ``d(n) == -1 (mod n)``; strong Giuga numbers have
``d(n) = -1 - n``; primary pseudoperfect numbers are the n > 1 with
``d(n) = 1 - n``.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, lcm, prod

import numpy as np

from .arith import DEFAULT_EFFORT, FactorizationError, factorization_product, factorize, is_prime, primes_up_to
from .errors import HypothesisError, PreconditionError, TheoremViolation

__all__ = [
    "Flag",
    "EgyptianSolution",
    "solve",
    "d_of",
    "classify",
    "prime_power_criterion",
    "leibnitz_power",
    "leibnitz_product",
    "leibnitz_quotient",
    "Rule",
    "generate",
    "generate_with_factorization",
    "never_product_check",
    "subset_split",
    "signed_prime_instance_check",
    "Target",
    "SearchResult",
    "search",
]


def _factors(n, factorization, effort):
    if factorization is None:
        return factorize(n, effort)
    factorization = sorted(factorization)
    if factorization_product(factorization) != n:
        raise ValueError("supplied factorization does not multiply out to n")
    return factorization


def d_of(n: int, factorization=None, effort: int = DEFAULT_EFFORT) -> int:
    """``-sum n/p`` over the distinct primes ``p | n``; ``d(1) = 0``."""
    if n < 1:
        raise ValueError("n must be positive")
    return -sum(n // p for p, _ in _factors(n, factorization, effort))


@dataclass(frozen=True)
class EgyptianSolution:
    n: int
    d_raw: int
    d_canonical: int

    def unit_fraction_sum(self, factorization=None) -> Fraction:
        """``sum 1/p + d_raw/n``; always an integer."""
        primes = [p for p, _ in _factors(self.n, factorization, DEFAULT_EFFORT)]
        return sum((Fraction(1, p) for p in primes), Fraction(self.d_raw, self.n))


def solve(n: int, factorization=None) -> EgyptianSolution:
    d = d_of(n, factorization)
    return EgyptianSolution(n, d, d % n)


class Flag(enum.Flag):
    GIUGA = enum.auto()
    STRONG_GIUGA = enum.auto()
    PRIMARY_PSEUDOPERFECT = enum.auto()
    SQUARE_FREE = enum.auto()
    PRIME = enum.auto()


NONE = Flag(0)


def classify(n: int, factorization=None, effort: int = DEFAULT_EFFORT) -> Flag:
    """Classification flags of ``n``.

    A ``factorization`` may be supplied for numbers too large to factor; its
    primes are checked with :func:`is_prime` and its product against ``n``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    factors = _factors(n, factorization, effort)
    if factorization is not None and not all(is_prime(p) for p, _ in factors):
        raise ValueError("supplied factorization contains a composite")
    flags = NONE
    if all(e == 1 for _, e in factors):
        flags |= Flag.SQUARE_FREE
    prime = len(factors) == 1 and factors[0][1] == 1
    if prime:
        flags |= Flag.PRIME
    d = -sum(n // p for p, _ in factors)
    if n > 1 and not prime and (d + 1) % n == 0:
        flags |= Flag.GIUGA
        if d == -1 - n:
            flags |= Flag.STRONG_GIUGA
    if n > 1 and d == 1 - n:
        flags |= Flag.PRIMARY_PSEUDOPERFECT
    return flags


def prime_power_criterion(n: int, d: int) -> bool:
    """For a solution pair ``(n, d)``: ``p^e | n`` iff ``p^(e-1) | d`` for each ``p | n``.

    Checks every ``e`` from 1 to ``v_p(n) + 1``, plus: n square-free iff gcd(n, d) = 1.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if (d - d_of(n)) % n:
        raise PreconditionError(f"not a solution pair: ({n}, {d})")
    for p, k in factorize(n):
        for e in range(1, k + 2):
            if (n % p**e == 0) != (d % p ** (e - 1) == 0):
                return False
    square_free = all(e == 1 for _, e in factorize(n))
    return square_free == (gcd(n, d) == 1)


def leibnitz_power(n: int, k: int) -> int:
    """``d(n^k) = n^(k-1) d(n)``."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    value = n ** (k - 1) * d_of(n)
    if value != d_of(n**k):
        raise TheoremViolation(f"power rule fails for n={n}, k={k}")
    return value


def leibnitz_product(M: int, n: int) -> int:
    """``d(Mn) = M d(n) + n d(M) - L d(G)`` with ``G = gcd``, ``L = lcm``."""
    if M < 1 or n < 1:
        raise ValueError("M and n must be positive")
    G, L = gcd(M, n), lcm(M, n)
    value = M * d_of(n) + n * d_of(M) - L * d_of(G)
    if value != d_of(M * n):
        raise TheoremViolation(f"product rule fails for M={M}, n={n}")
    return value


def leibnitz_quotient(a: int, b: int) -> int:
    """``d(a/b) = (b d(a) - a d(b)) / b^2 + ((a/b)/g) d(g)`` with ``g = gcd(b, a/b)``."""
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    if a % b:
        raise PreconditionError(f"{b} does not divide {a}")
    c = a // b
    g = gcd(b, c)
    value = Fraction(b * d_of(a) - a * d_of(b), b * b) + Fraction(c // g * d_of(g))
    if value != d_of(c):
        raise TheoremViolation(f"quotient rule fails for a={a}, b={b}")
    return int(value)


class Rule(enum.Enum):
    PPP_UP = "ppp-up"  # n -> n(n+1), n+1 an odd prime
    GIUGA_DOWN = "giuga-down"  # n -> n(n-1), n-1 prime
    PPP_SPLIT = "ppp-split"  # n -> n(n+F)(n+G), FG = n^2 + 1
    GIUGA_SPLIT = "giuga-split"  # n -> n(n+F)(n+G), FG = n^2 - 1


def generate_with_factorization(n, rule, F=None, G=None, factorization=None):
    """Like :func:`generate` but also returns the factorization of the output."""
    rule = Rule(rule)
    if n < 1:
        raise ValueError("n must be positive")
    base = _factors(n, factorization, DEFAULT_EFFORT)
    if rule is Rule.PPP_UP:
        if not (n + 1 > 2 and is_prime(n + 1)):
            raise HypothesisError(f"n+1 = {n + 1} is not an odd prime")
        new = [n + 1]
    elif rule is Rule.GIUGA_DOWN:
        if not is_prime(n - 1):
            raise HypothesisError(f"n-1 = {n - 1} is not prime")
        new = [n - 1]
    else:
        if F is None or G is None:
            raise HypothesisError(f"{rule.name} needs both F and G")
        sign = 1 if rule is Rule.PPP_SPLIT else -1
        if F * G != n * n + sign:
            raise HypothesisError(f"F*G = {F * G} differs from n^2 {'+' if sign > 0 else '-'} 1")
        for t in (n + F, n + G):
            if not is_prime(t):
                raise HypothesisError(f"{t} = n + {t - n} is not prime")
        if F == G:
            raise HypothesisError("n+F and n+G must be distinct primes")
        new = [n + F, n + G]
    if any(n % q == 0 for q in new):
        raise HypothesisError("new prime already divides n")
    out = n * prod(new)
    out_factors = sorted(base + [(q, 1) for q in new])

    in_ppp = Flag.PRIMARY_PSEUDOPERFECT in classify(n, base)
    out_flags = classify(out, out_factors)
    if rule in (Rule.PPP_UP, Rule.PPP_SPLIT):
        claimed = Flag.PRIMARY_PSEUDOPERFECT in out_flags
    else:
        claimed = Flag.STRONG_GIUGA in out_flags
    if in_ppp != claimed:
        raise TheoremViolation(f"{rule.name}: input PPP={in_ppp} but output classification {out_flags}")
    return out, out_factors


def generate(n: int, rule, F: int | None = None, G: int | None = None, factorization=None) -> int:
    """Build a new number from ``n`` by one of the four prime-adjoining rules.

    The output is primary pseudoperfect (``PPP_*``) or strong Giuga
    (``GIUGA_*``) exactly when ``n`` is primary pseudoperfect; this is
    re-checked on every call.
    """
    return generate_with_factorization(n, rule, F, G, factorization)[0]


def never_product_check(M: int, n: int, epsilon: int) -> bool:
    """True when ``d(Mn) != epsilon (mod Mn)`` for coprime ``M, n > 1`` with ``d == epsilon`` on each."""
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    if M <= 1 or n <= 1:
        raise PreconditionError("M and n must exceed 1")
    if gcd(M, n) != 1:
        raise PreconditionError(f"gcd({M}, {n}) != 1")
    for x in (M, n):
        if (d_of(x) - epsilon) % x:
            raise PreconditionError(f"d({x}) = {d_of(x)} is not {epsilon:+d} mod {x}")
    return (d_of(M * n) - epsilon) % (M * n) != 0


def subset_split(n: int, Q) -> tuple[int, int]:
    """Residues ``(d_Q, d_R)`` mod ``n`` for a split of the prime divisors of ``n`` into ``Q`` and the rest."""
    primes = {p for p, _ in factorize(n)}
    Q = set(Q)
    if not Q <= primes:
        raise PreconditionError(f"{sorted(Q - primes)} do not divide {n}")
    d_Q = -sum(n // p for p in Q) % n
    d_R = -sum(n // p for p in primes - Q) % n
    if (d_Q + d_R - d_of(n)) % n:
        raise TheoremViolation(f"d_Q + d_R != d({n}) mod {n}")
    return d_Q, d_R


def signed_prime_instance_check(terms=(19, -37, -39), product_term: bool = True) -> bool:
    """``1/19 + 1/(-37) + 1/(-39) + 1/27417 == 0`` with ``27417 = 19 * (-37) * (-39)``."""
    total = sum((Fraction(1, t) for t in terms), Fraction(0))
    if product_term:
        total += Fraction(1, prod(terms))
    return total == 0


# ---------------------------------------------------------------------------
# range search


class Target(enum.Enum):
    GIUGA = "giuga"
    PPP = "ppp"
    D_EQUALS_PLUS_1 = "d-plus-1"  # n > 1 with d(n) == 1 (mod n)


@dataclass
class SearchResult:
    hits: list[int]
    skipped: list[int] = field(default_factory=list)


SIEVE_LIMIT = 10**8
_SEGMENT = 1 << 18


def _segment_sums(lo, hi):
    """For n in [lo, hi): (sum_{p|n} n/p, square-free flag) as int64 / bool arrays."""
    n = np.arange(lo, hi, dtype=np.int64)
    rest = n.copy()
    total = np.zeros_like(n)
    square_free = np.ones(len(n), dtype=bool)
    for p in primes_up_to(isqrt(hi - 1) if hi > 1 else 1):
        p = int(p)
        start = (-lo) % p
        idx = np.arange(start, len(n), p)
        if idx.size == 0:
            continue
        total[idx] += n[idx] // p
        sub = rest[idx] // p
        sq = sub % p == 0
        square_free[idx[sq]] = False
        while True:
            more = sub % p == 0
            if not more.any():
                break
            sub[more] //= p
        rest[idx] = sub
    big = rest > 1
    total[big] += n[big] // rest[big]
    return n, total, square_free


def _search_segment(args):
    lo, hi, target = args
    n, total, _ = _segment_sums(lo, hi)
    # total == -d(n); primes are exactly the n > 1 with total == 1
    valid = n > 1
    if target is Target.GIUGA:
        mask = valid & (total != 1) & ((total - 1) % n == 0)
    elif target is Target.PPP:
        mask = valid & (total == n - 1)
    else:
        mask = valid & ((total + 1) % n == 0)
    return [int(x) for x in n[mask]]


def _matches(n, target, effort):
    flags = classify(n, effort=effort)
    if target is Target.GIUGA:
        return Flag.GIUGA in flags
    if target is Target.PPP:
        return Flag.PRIMARY_PSEUDOPERFECT in flags
    return n > 1 and (d_of(n, effort=effort) - 1) % n == 0


def search(lo: int, hi: int, target, jobs: int = 1, effort: int = DEFAULT_EFFORT) -> SearchResult:
    """All ``n`` in ``[lo, hi]`` with the target property, ascending.

    Below ``10**8`` a segmented sieve accumulates ``sum n/p`` per number;
    above it each number is factored, and numbers whose factorization exceeds
    ``effort`` land in ``skipped``.
    """
    target = Target(target)
    if not 1 <= lo <= hi:
        raise ValueError("need 1 <= lo <= hi")
    hits: list[int] = []
    skipped: list[int] = []
    sieve_hi = min(hi, SIEVE_LIMIT)
    if lo <= sieve_hi:
        chunks = [(a, min(a + _SEGMENT, sieve_hi + 1), target) for a in range(lo, sieve_hi + 1, _SEGMENT)]
        if jobs > 1 and len(chunks) > 1:
            with ProcessPoolExecutor(max_workers=min(jobs, os.cpu_count() or 1)) as pool:
                for part in pool.map(_search_segment, chunks):
                    hits.extend(part)
        else:
            for chunk in chunks:
                hits.extend(_search_segment(chunk))
    for n in range(max(lo, SIEVE_LIMIT + 1), hi + 1):
        try:
            if _matches(n, target, effort):
                hits.append(n)
        except FactorizationError:
            skipped.append(n)
    hits.sort()
    return SearchResult(hits, skipped)
