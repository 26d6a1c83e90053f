"""Necessary conditions on solutions of  S_n(m) = a (m+1)^n  and a range sieve built on them.

``a = 1`` is the classical equation (mode ``EME``); general ``a`` is mode
``GEME``.  Every check returns a :class:`ConstraintCertificate`; a FAIL means
``m`` (or the pair ``(m, n)``) cannot be a nontrivial solution.
"""

from __future__ import annotations

import enum
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .arith import DEFAULT_EFFORT, FactorizationError, factorize, is_prime, multiplicative_order, v_p
from .egyptian import d_of
from .errors import PreconditionError
from .power_sums import power_sum

__all__ = [
    "Mode",
    "Status",
    "ConstraintCertificate",
    "NProfile",
    "DEFAULT_PROFILE",
    "verify_trivial",
    "direct_equation_check",
    "em_residue_constraints",
    "em_prime_constraints",
    "rabbit_certificate",
    "SieveSummary",
    "sieve_range",
]


class Mode(enum.Enum):
    EME = "eme"
    GEME = "geme"


class Status(enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    NOT_APPLICABLE = "NOT_APPLICABLE"


@dataclass(frozen=True)
class ConstraintCertificate:
    constraint_id: str
    status: Status
    witness: str

    def __str__(self):
        return f"{self.constraint_id}\t{self.status.value}\t{self.witness}"


@dataclass(frozen=True)
class NProfile:
    """What is known about an unknown exponent ``n``: it is a multiple of ``divisor``."""

    divisor: int = 2**8 * 3**5

    def __post_init__(self):
        if self.divisor < 1:
            raise ValueError("divisor must be positive")

    def divides(self, k: int) -> bool | None:
        """True if ``k | n`` is forced, None if undecidable."""
        return True if self.divisor % k == 0 else None


DEFAULT_PROFILE = NProfile()

PASS, FAIL, NA = Status.PASS, Status.FAIL, Status.NOT_APPLICABLE


def _cert(cid, ok, witness):
    status = NA if ok is None else (PASS if ok else FAIL)
    return ConstraintCertificate(cid, status, witness)


def verify_trivial(a: int) -> bool:
    """``1 + 2 + ... + 2a == a (2a + 1)``."""
    if a < 1:
        raise ValueError("a must be positive")
    return sum(range(1, 2 * a + 1)) == a * (2 * a + 1)


DIRECT_M_MAX = 10**6
DIRECT_N_MAX = 10**3


def direct_equation_check(m: int, n: int, a: int = 1) -> bool:
    """Exact test of ``S_n(m) == a (m+1)^n``."""
    if m < 1 or n < 1 or a < 1:
        raise ValueError("m, n and a must be positive")
    if m > DIRECT_M_MAX or n > DIRECT_N_MAX:
        raise PreconditionError(f"direct check limited to m <= {DIRECT_M_MAX}, n <= {DIRECT_N_MAX}")
    # cheap necessary condition first: both sides mod a small prime
    M = 1_000_003
    rhs_mod = a * pow(m + 1, n, M) % M
    if m < 20_000 and sum(pow(j, n, M) for j in range(1, m + 1)) % M != rhs_mod:
        return False
    return power_sum(m, n, verify=False) == a * (m + 1) ** n


# ---------------------------------------------------------------------------
# constraints depending on m only (plus the parity of n when known)


def _square_free_cert(cid, label, x, effort, square_free=None):
    if square_free is not None:
        ok = square_free(x)
    else:
        try:
            ok = all(e == 1 for _, e in factorize(x, effort))
        except FactorizationError as exc:
            return ConstraintCertificate(cid, NA, f"{label} = {x}: {exc}")
    return _cert(cid, ok, f"{label} = {x} {'is' if ok else 'is not'} square-free")


def em_residue_constraints(m: int, mode=Mode.EME, n: int | None = None,
                           effort: int = DEFAULT_EFFORT, _square_free=None) -> list[ConstraintCertificate]:
    """Residue and square-freeness conditions on ``m``.

    The residue classes hold for nontrivial solutions, which have even ``n``;
    with an explicit odd ``n`` they are NOT_APPLICABLE.
    """
    if m < 1:
        raise ValueError("m must be positive")
    mode = Mode(mode)
    odd_n = n is not None and n % 2 == 1
    certs = []
    if mode is Mode.EME:
        if odd_n:
            certs.append(_cert("residue-mod-18", None, f"n = {n} is odd"))
        else:
            certs.append(_cert("residue-mod-18", m % 18 in (6, 10), f"m = {m} == {m % 18} (mod 18), need 6 or 10"))
        certs.append(_cert("even", m % 2 == 0, f"m = {m} == {m % 2} (mod 2)"))
        certs.append(_square_free_cert("square-free-m", "m", m, effort, _square_free))
        if m % 2:
            certs.append(_cert("square-free-half-m-plus-2", None, f"(m+2)/2 not an integer for m = {m}"))
        else:
            certs.append(_square_free_cert("square-free-half-m-plus-2", "(m+2)/2", (m + 2) // 2, effort, _square_free))
        certs.append(_square_free_cert("square-free-2m-plus-1", "2m+1", 2 * m + 1, effort, _square_free))
        certs.append(_square_free_cert("square-free-2m-plus-3", "2m+3", 2 * m + 3, effort, _square_free))
    else:
        if odd_n:
            certs.append(_cert("residue-mod-6", None, f"n = {n} is odd"))
        else:
            certs.append(_cert("residue-mod-6", m % 6 in (0, 4), f"m = {m} == {m % 6} (mod 6), need 0 or 4"))
        if m % 5 != 4:
            certs.append(_cert("mod-5-forces-n", None, f"m = {m} is not 4 (mod 5)"))
        elif n is None or odd_n:
            certs.append(_cert("mod-5-forces-n", None, "n unknown" if n is None else f"n = {n} is odd"))
        else:
            certs.append(_cert("mod-5-forces-n", n % 4 == 2, f"m == 4 (mod 5) needs n == 2 (mod 4); n = {n}"))
    return certs


# ---------------------------------------------------------------------------
# prime-by-prime constraints


def _divides_n(k, n):
    """``k | n`` as True/False, or None when ``n`` is a profile that cannot decide."""
    if isinstance(n, NProfile):
        return n.divides(k)
    return n % k == 0


def _describe_n(n):
    return f"n a multiple of {n.divisor}" if isinstance(n, NProfile) else f"n = {n}"


def _combine(cid, parts):
    """One certificate from several clause outcomes: any FAIL wins, then any PASS."""
    statuses = [ok for ok, _ in parts]
    if any(ok is False for ok in statuses):
        status = FAIL
    elif any(ok is True for ok in statuses):
        status = PASS
    else:
        status = NA
    return ConstraintCertificate(cid, status, "; ".join(text for _, text in parts))


def em_prime_constraints(m: int, n, p: int, mode=Mode.EME) -> ConstraintCertificate:
    """Conditions at an odd prime ``p`` dividing ``m + 1``, ``m`` or ``m - (p-1)/2``.

    ``n`` is an explicit exponent or an :class:`NProfile`.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    mode = Mode(mode)
    cid = f"em-prime[p={p}]"
    odd_n = not isinstance(n, NProfile) and n % 2 == 1
    pm1 = _divides_n(p - 1, n)
    parts = []

    if (m + 1) % p == 0:
        ok = None if pm1 is None else not pm1
        parts.append((ok, f"p | m+1 needs p-1 = {p - 1} not dividing n ({_describe_n(n)})"))

    if mode is Mode.EME and m % p == 0:
        parts.append((pm1, f"p | m needs p-1 = {p - 1} | n ({_describe_n(n)})"))
        parts.append(((m + p) % (p * p) == 0, f"p | m needs p^2 = {p * p} | m+p = {m + p}"))

    if mode is Mode.EME and (2 * m + 1) % p == 0:
        if odd_n:
            parts.append((None, f"p | m-(p-1)/2 clause needs even n; n = {n}"))
        else:
            p2 = p * p
            inv2 = (p2 + 1) // 2
            target = -(p + inv2) % p2
            parts.append((pm1, f"p | m-(p-1)/2 needs p-1 = {p - 1} | n ({_describe_n(n)})"))
            parts.append((m % p2 == target,
                          f"p | m-(p-1)/2 needs m == -(p + 1/2) == {target} (mod {p2}), "
                          f"1/2 read as the inverse of 2 mod p^2; m == {m % p2}"))

    if not parts:
        return ConstraintCertificate(cid, NA, f"p = {p} divides none of m+1, m, m-(p-1)/2")
    return _combine(cid, parts)


def _v_p_two_power_minus_one(n, p):
    """``v_p(2^n - 1)`` for odd prime ``p`` without forming ``2^n``."""
    t = multiplicative_order(2, p)
    if n % t:
        return 0
    base = 1
    while pow(2, t, p ** (base + 1)) == 1:
        base += 1
    # lifting the exponent: v_p(2^(tk) - 1) = v_p(2^t - 1) + v_p(k)
    return base + v_p(n // t, p)


def rabbit_certificate(m: int, n, effort: int = DEFAULT_EFFORT) -> list[ConstraintCertificate]:
    """Conditions at each prime dividing ``m - 1``, plus the bound ``3n >= 2m``.

    ``n`` is explicit or an :class:`NProfile`.  With an explicit odd ``n``
    everything is NOT_APPLICABLE: nontrivial solutions have even ``n``.
    """
    if m < 3:
        raise PreconditionError("rabbit certificate needs m >= 3")
    profile = isinstance(n, NProfile)
    if not profile and n < 1:
        raise ValueError("n must be positive")
    N = m - 1
    if not profile and n % 2:
        return [ConstraintCertificate("rabbit", NA, f"n = {n} is odd; conditions concern even n")]

    certs = []
    if profile:
        ok = True if 3 * n.divisor >= 2 * m else None
        certs.append(_cert("moser-bound", ok, f"3n >= 2m = {2 * m} with {_describe_n(n)}"))
    else:
        certs.append(_cert("moser-bound", 3 * n >= 2 * m, f"3n = {3 * n}, 2m = {2 * m}"))

    try:
        factors = factorize(N, effort)
    except FactorizationError as exc:
        certs.append(ConstraintCertificate("rabbit", NA, f"m-1 = {N}: {exc}"))
        return certs

    # (i): d = 2^n - 1 - X solves the Egyptian congruence for m - 1
    if profile:
        certs.append(_cert("rabbit-i", None, "needs n exactly"))
    else:
        X = sum(N // p for p, _ in factors if n % (p - 1))
        d = (pow(2, n, N) - 1 - X) % N
        canonical = d_of(N, factors) % N
        certs.append(_cert("rabbit-i", d == canonical,
                           f"d = 2^n-1-X == {d} (mod {N}), d(m-1) == {canonical}"))

    for p, e in factors:
        if p == 2:
            certs.append(_cert(f"rabbit-ii[p=2]", None, "p = 2: ord_2(2) undefined"))
            continue
        t = multiplicative_order(2, p)
        # (ii): ord_p(2) | n and n >= p-1
        if profile:
            div = n.divides(t)
            bound = True if n.divisor >= p - 1 else None
            ok = None if div is None or bound is None else True
            certs.append(_cert(f"rabbit-ii[p={p}]", ok, f"ord_{p}(2) = {t} | n, n >= {p - 1}; {_describe_n(n)}"))
        else:
            div, bound = n % t == 0, n >= p - 1
            k = (n - (p - 1)) // t if div and bound else None
            certs.append(_cert(f"rabbit-ii[p={p}]", div and bound,
                               f"ord_{p}(2) = {t}, n = {n}, n >= {p - 1}: {bound}, k = {k}"))
        # (iii): p^(e-1) | 2^n - 1
        if e == 1:
            certs.append(_cert(f"rabbit-iii[p={p}]", True, "e = 1, nothing to check"))
        else:
            pk = p ** (e - 1)
            if profile:
                ok = True if pow(2, n.divisor, pk) == 1 else None
            else:
                ok = pow(2, n, pk) == 1
            certs.append(_cert(f"rabbit-iii[p={p}]", ok, f"e = v_{p}(m-1) = {e}; need {pk} | 2^n-1"))
        # (iv): p-1 | n forces v_p(m-1) > v_p(2^n - 1)
        pm1 = _divides_n(p - 1, n)
        if pm1 is None:
            certs.append(_cert(f"rabbit-iv[p={p}]", None, f"p-1 = {p - 1} | n undecided"))
        elif not pm1:
            certs.append(_cert(f"rabbit-iv[p={p}]", None, f"p-1 = {p - 1} does not divide n"))
        else:
            # under a profile 2^D - 1 | 2^n - 1, so v_p(2^D - 1) is a lower bound
            f = _v_p_two_power_minus_one(n.divisor if profile else n, p)
            certs.append(_cert(f"rabbit-iv[p={p}]", e >= f + 1,
                               f"v_{p}(2^n-1) {'>=' if profile else '='} {f}, need {p}^{f + 1} | m-1; v_{p}(m-1) = {e}"))
    return certs


# ---------------------------------------------------------------------------
# range sieve


@dataclass
class SieveSummary:
    lo: int
    hi: int
    checked: int
    survivors: list[int] = field(default_factory=list)
    histogram: dict[str, int] = field(default_factory=dict)

    @property
    def survivor_count(self) -> int:
        return len(self.survivors)


def _histogram_key(cid):
    return cid.split("[", 1)[0]


def _square_free_table(limit):
    import numpy as np
    from .arith import primes_up_to
    from math import isqrt

    table = np.ones(limit + 1, dtype=bool)
    for p in primes_up_to(isqrt(limit)):
        p2 = int(p) * int(p)
        table[p2::p2] = False
    return table


_TABLE_LIMIT = 50_000_000


def _sieve_chunk(args):
    lo, hi, profile, mode, effort = args
    lookup = None
    if 2 * hi + 3 <= _TABLE_LIMIT:
        table = _square_free_table(2 * hi + 3)
        lookup = lambda x: bool(table[x])
    survivors, hist = [], Counter()
    for m in range(lo, hi + 1):
        certs = em_residue_constraints(m, mode, effort=effort, _square_free=lookup)
        if profile is not None:
            primes = set()
            for x in (m, m + 1, 2 * m + 1):
                try:
                    primes.update(p for p, _ in factorize(x, effort) if p > 2)
                except FactorizationError:
                    pass
            certs += [em_prime_constraints(m, profile, p, mode) for p in sorted(primes)]
            if mode is Mode.EME and m >= 3:
                certs += rabbit_certificate(m, profile, effort)
        failed = {_histogram_key(c.constraint_id) for c in certs if c.status is FAIL}
        if failed:
            hist.update(failed)
        else:
            survivors.append(m)
    return survivors, hist


def sieve_range(lo: int, hi: int, profile: NProfile | None = None, mode=Mode.EME,
                jobs: int = 1, effort: int = DEFAULT_EFFORT, chunk: int = 20_000) -> SieveSummary:
    """Apply the m-only constraints (and, given a profile, the n-dependent ones) to ``lo..hi``.

    The histogram counts, per constraint, how many ``m`` it rejected; one ``m``
    may be rejected by several.
    """
    if not 1 <= lo <= hi:
        raise ValueError("need 1 <= lo <= hi")
    mode = Mode(mode)
    chunks = [(a, min(a + chunk - 1, hi), profile, mode, effort) for a in range(lo, hi + 1, chunk)]
    if jobs > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, os.cpu_count() or 1)) as pool:
            parts = list(pool.map(_sieve_chunk, chunks))
    else:
        parts = [_sieve_chunk(c) for c in chunks]
    survivors, hist = [], Counter()
    for s, h in parts:
        survivors.extend(s)
        hist.update(h)
    return SieveSummary(lo, hi, hi - lo + 1, survivors, dict(sorted(hist.items())))
