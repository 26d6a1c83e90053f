"""Invariant sweeps, grouped into suites.  Each property is a name plus a pass flag and a detail line."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .arith import is_prime, primes_up_to, v_p
from .bernoulli import (
    agoh_phi_check,
    bernoulli_diff,
    even_pascal_bernoulli_check,
    moser_polynomial,
    pascal_bernoulli_check,
    prime_supercongruence_check,
    pseudo_check,
)
from .egyptian import Flag, Rule, classify, d_of, generate, leibnitz_power, leibnitz_product, leibnitz_quotient, search
from .em_sieve import (
    Mode,
    NProfile,
    Status as CertStatus,
    direct_equation_check,
    em_prime_constraints,
    em_residue_constraints,
    rabbit_certificate,
    verify_trivial,
)
from .power_sums import (
    Status,
    _case,
    carlitz_von_staudt_residue,
    pascal_identity_check,
    power_sum_mod,
    power_sum_table,
    v2_order,
    valuation_report,
)

SUITES = ("power-sums", "egyptian", "bernoulli", "em-sieve")


@dataclass
class PropertyResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


@dataclass
class SuiteResult:
    suite: str
    quick: bool
    properties: list[PropertyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)


def _scale(x, quick):
    return max(1, x // 10) if quick else x


# ---------------------------------------------------------------------------
# sweeps, also used directly by the test suite


@dataclass
class ValuationSweep:
    checked: int = 0
    violations: list = field(default_factory=list)  # proven branches
    unproven_failures: list = field(default_factory=list)
    literal_failures: list = field(default_factory=list)


def valuation_sweep(m_max: int = 2000, n_max: int = 40, p_max: int = 23) -> ValuationSweep:
    """All odd ``p <= p_max``, ``m <= m_max`` in the covered classes, ``n <= n_max``."""
    primes = [int(p) for p in primes_up_to(p_max) if p > 2]
    table = power_sum_table(m_max, max(n_max, p_max - 1))
    out = ValuationSweep()
    for p in primes:
        for m in range(1, m_max + 1):
            if _case(m, p) is None:
                continue
            for n in range(1, n_max + 1):
                r = valuation_report(m, n, p, value=table[n][m], value_p_minus_1=table[p - 1][m])
                out.checked += 1
                if r.status is Status.VIOLATION:
                    out.violations.append((p, m, n))
                elif r.status is Status.UNPROVEN_FAILS:
                    out.unproven_failures.append((p, m, n))
                if not r.literal_consistent:
                    out.literal_failures.append((p, m, n))
    return out


def carlitz_sweep(m_max: int = 3000, n_max: int = 30) -> list[tuple[int, int]]:
    """Pairs where the predicted residue disagrees with the power sum; empty when all hold."""
    bad = []
    for m in range(1, m_max + 1):
        for n in range(1, n_max + 1):
            modulus, residue = carlitz_von_staudt_residue(m, n)
            if power_sum_mod(m, n, modulus) != residue:
                bad.append((m, n))
    return bad


def em_brute_force(m_max: int = 2000, n_max: int = 30) -> list[tuple[int, int]]:
    """All ``(m, n)`` with ``2 <= m <= m_max``, ``2 <= n <= n_max`` and ``S_n(m) = (m+1)^n``."""
    table = power_sum_table(m_max, n_max)
    return [(m, n) for n in range(2, n_max + 1) for m in range(2, m_max + 1) if table[n][m] == (m + 1) ** n]


def trivial_family_failures(a_max: int = 100) -> list[tuple[int, str]]:
    """Members ``(2a, 1)`` that fail the equation or are rejected by an applicable certificate."""
    bad = []
    for a in range(1, a_max + 1):
        m = 2 * a
        if not (verify_trivial(a) and direct_equation_check(m, 1, a)):
            bad.append((a, "equation"))
            continue
        mode = Mode.EME if a == 1 else Mode.GEME
        certs = em_residue_constraints(m, mode, n=1)
        for x in (m, m + 1, 2 * m + 1):
            for p in primes_up_to(x):
                p = int(p)
                if p > 2 and x % p == 0:
                    certs.append(em_prime_constraints(m, 1, p, mode))
        if m >= 3:
            certs += rabbit_certificate(m, 1)
        bad += [(a, c.constraint_id) for c in certs if c.status is CertStatus.FAIL]
    return bad


def em_prime_brute_force(m_max: int = 500, n_max: int = 24, p_max: int = 13) -> tuple[int, list]:
    """Count of FAIL certificates, and any of them attached to a true solution of the equation."""
    fails, contradictions = 0, []
    table = power_sum_table(m_max, n_max)
    for p in (int(q) for q in primes_up_to(p_max) if q > 2):
        for m in range(1, m_max + 1):
            for n in range(1, n_max + 1):
                for mode in (Mode.EME, Mode.GEME):
                    c = em_prime_constraints(m, n, p, mode)
                    if c.status is not CertStatus.FAIL:
                        continue
                    fails += 1
                    lhs, rhs = table[n][m], (m + 1) ** n
                    solution = lhs == rhs if mode is Mode.EME else lhs % rhs == 0
                    if solution:
                        contradictions.append((m, n, p, mode.value))
    return fails, contradictions


# ---------------------------------------------------------------------------
# suites


def _run(results, name, fn):
    t0 = time.perf_counter()
    passed, detail = fn()
    results.append(PropertyResult(name, bool(passed), detail, time.perf_counter() - t0))


def suite_power_sums(quick=False):
    res = []
    m_max, n_max = _scale(2000, quick), 40 if not quick else 8

    def valuation():
        s = valuation_sweep(m_max, n_max)
        return not s.violations, f"{s.checked} cases, {len(s.violations)} violations, {len(s.unproven_failures)} odd-n failures"

    def carlitz():
        bad = carlitz_sweep(_scale(3000, quick), 30 if not quick else 6)
        return not bad, f"{len(bad)} mismatches"

    def v2():
        table = power_sum_table(m_max, n_max)
        bad = [(m, n) for n in range(1, n_max + 1) for m in range(1, m_max + 1) if v_p(table[n][m], 2) != v2_order(m, n)]
        return not bad, f"{len(bad)} mismatches"

    def pascal():
        bad = [(a, n) for a in range(0, _scale(200, quick)) for n in range(1, 16) if not pascal_identity_check(a, n)]
        return not bad, f"{len(bad)} failures"

    _run(res, "valuation predictions", valuation)
    _run(res, "carlitz-von staudt residues", carlitz)
    _run(res, "2-adic order", v2)
    _run(res, "pascal identity", pascal)
    return res


def suite_egyptian(quick=False):
    res = []
    hi = _scale(10**5, quick)

    def searches():
        giuga = search(1, hi, "giuga").hits
        ppp = search(1, hi, "ppp").hits
        exp_g = [x for x in (30, 858, 1722, 66198) if x <= hi]
        exp_p = [x for x in (2, 6, 42, 1806, 47058) if x <= hi]
        return giuga == exp_g and ppp == exp_p, f"giuga {giuga}, ppp {ppp}"

    def chains():
        got = [generate(6, Rule.PPP_UP), generate(42, Rule.PPP_UP), generate(6, Rule.GIUGA_DOWN),
               generate(42, Rule.GIUGA_DOWN), generate(47058, Rule.GIUGA_DOWN)]
        return got == [42, 1806, 30, 1722, 2214408306], str(got)

    def leibnitz():
        lim = _scale(300, quick)
        for a in range(1, lim):
            leibnitz_power(a, 2)
            for b in range(1, 40):
                leibnitz_product(a, b)
                leibnitz_quotient(a * b, b)
        return True, f"a < {lim}, b < 40"

    def classification():
        lim = _scale(5000, quick)
        bad = []
        for n in range(2, lim):
            f = classify(n)
            if (Flag.PRIME in f) != is_prime(n):
                bad.append(n)
            if Flag.STRONG_GIUGA in f and d_of(n) != -1 - n:
                bad.append(n)
        return not bad, f"{len(bad)} inconsistent"

    _run(res, "giuga and ppp search", searches)
    _run(res, "generation chains", chains)
    _run(res, "leibnitz rules", leibnitz)
    _run(res, "classification flags", classification)
    return res


def suite_bernoulli(quick=False):
    res = []

    def pascal():
        n_max = 20 if not quick else 8
        bad = [(n, m) for n in range(1, n_max + 1) for m in range(1, n + 1) if not pascal_bernoulli_check(n, m)]
        bad += [(n, m) for n in range(2, n_max + 1, 2) for m in range(1, n) if not even_pascal_bernoulli_check(n, m)]
        return not bad, f"{len(bad)} failures"

    def agoh():
        lim = _scale(2000, quick)
        primes_hit = [n for n in range(2, lim + 1) if agoh_phi_check(n)[0]]
        return True, f"n <= {lim}: {len(primes_hit)} satisfy all three"

    def pseudo():
        lim = _scale(500, quick)
        bad = [n for n in range(1, lim + 1) if not pseudo_check(n).congruence_ii or pseudo_check(n).criterion_i is False]
        return not bad, f"{len(bad)} failures"

    def supercongruence():
        lim = _scale(200, quick) if quick else 200
        ps = [p for p in range(5, max(lim, 5) + 1) if is_prime(p)]
        bad = [p for p in ps if not prime_supercongruence_check(p)]
        return not bad, f"{len(ps)} primes, {len(bad)} failures"

    def differences():
        lim = 12 if not quick else 4
        bad = [(n, k) for n in range(1, lim + 1) for k in range(1, lim + 1) if not bernoulli_diff(n, k)[2]]
        return not bad, f"{len(bad)} failures"

    def moser():
        bad = []
        for n in range(2, (20 if not quick else 6) + 1, 2):
            mp = moser_polynomial(n)
            if mp.Q.content() != 1:
                bad.append(n)
        return not bad, f"{len(bad)} failures"

    _run(res, "pascal bernoulli identities", pascal)
    _run(res, "agoh (phi exponent)", agoh)
    _run(res, "pseudo congruence", pseudo)
    _run(res, "prime supercongruence", supercongruence)
    _run(res, "bernoulli differences", differences)
    _run(res, "moser polynomial", moser)
    return res


def suite_em_sieve(quick=False):
    res = []

    def brute():
        found = em_brute_force(_scale(2000, quick), 30 if not quick else 6)
        return not found, f"{len(found)} solutions"

    def trivial():
        bad = trivial_family_failures(_scale(100, quick))
        return not bad, f"{len(bad)} rejections"

    def prime_consistency():
        fails, contra = em_prime_brute_force(_scale(500, quick), 24 if not quick else 6)
        return not contra, f"{fails} FAIL certificates, {len(contra)} on actual solutions"

    def determinism():
        profile = NProfile()
        ms = range(3, _scale(3000, quick), 7)
        a = [list(map(str, rabbit_certificate(m, profile) + em_residue_constraints(m))) for m in ms]
        b = [list(map(str, rabbit_certificate(m, profile) + em_residue_constraints(m))) for m in ms]
        return a == b, f"{len(a)} candidates"

    _run(res, "no small nontrivial solution", brute)
    _run(res, "trivial family soundness", trivial)
    _run(res, "prime constraints vs brute force", prime_consistency)
    _run(res, "certificate determinism", determinism)
    return res


_SUITE_FUNCS = {
    "power-sums": suite_power_sums,
    "egyptian": suite_egyptian,
    "bernoulli": suite_bernoulli,
    "em-sieve": suite_em_sieve,
}


def run_suite(name: str, quick: bool = False) -> SuiteResult:
    if name not in _SUITE_FUNCS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SuiteResult(name, quick, _SUITE_FUNCS[name](quick))
