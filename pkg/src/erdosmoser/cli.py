"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 a checked identity failed
(a bug alarm), 3 factorization effort exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path

from . import em_sieve, verify
from .arith import DEFAULT_EFFORT, FactorizationError, factorize, is_prime
from .bernoulli import DEFAULT_TABLE, read_cache
from .egyptian import Rule, Target, classify, generate_with_factorization, search, solve
from .errors import HypothesisError, NotCoveredError, PreconditionError, TheoremViolation
from .power_sums import Status, power_sum, power_sum_mod, restricted_power_sum, valuation_report

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output records


def _normalize(value):
    """Turn a value into JSON-compatible data with every integer as a decimal string."""
    if isinstance(value, bool) or value is None or isinstance(value, float):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, Enum):
        return _normalize(value.value)
    if isinstance(value, (list, tuple)):
        return [_normalize(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _normalize(v) for k, v in value.items()}
    return str(value)


@dataclass
class OutputRecord:
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    theorem: str | None = None
    elapsed: float = 0.0

    def __post_init__(self):
        self.inputs = _normalize(self.inputs)
        self.outputs = _normalize(self.outputs)

    def to_dict(self):
        return {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "theorem": self.theorem,
            "elapsed": self.elapsed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        data = json.loads(text)
        return cls(data["command"], data["inputs"], data["outputs"], data["theorem"], data["elapsed"])

    def to_tsv(self) -> str:
        rows = [("command", "", self.command)]
        rows += [("input", k, v) for k, v in self.inputs.items()]
        rows += [("output", k, v) for k, v in self.outputs.items()]
        rows += [("theorem", "", self.theorem), ("elapsed", "", self.elapsed)]
        return "".join(f"{a}\t{b}\t{_tsv_cell(v)}\n" for a, b, v in rows)

    @classmethod
    def from_tsv(cls, text: str) -> "OutputRecord":
        rec = cls("")
        for line in text.splitlines():
            section, key, cell = line.split("\t", 2)
            value = _tsv_parse(cell)
            if section == "command":
                rec.command = value
            elif section == "input":
                rec.inputs[key] = value
            elif section == "output":
                rec.outputs[key] = value
            elif section == "theorem":
                rec.theorem = value
            elif section == "elapsed":
                rec.elapsed = value
            else:
                raise ValueError(f"unknown section {section!r}")
        return rec


_INT_RE = re.compile(r"-?\d+\Z")


def _tsv_cell(value) -> str:
    # integers (already strings) print bare; other strings bare unless they would parse as something else
    if isinstance(value, str):
        if _INT_RE.match(value):
            return value
        if "\t" in value or "\n" in value or value == "" or value.startswith('"'):
            return json.dumps(value)
        try:
            json.loads(value)
        except ValueError:
            return value
        return json.dumps(value)
    return json.dumps(value)


def _tsv_parse(cell: str):
    if _INT_RE.match(cell):
        return cell
    try:
        return json.loads(cell)
    except ValueError:
        return cell


# ---------------------------------------------------------------------------
# subcommands; each returns (record, exit code)


def _cache_path(args) -> Path:
    if args.cache:
        return Path(args.cache)
    if os.environ.get("MF_CACHE"):
        return Path(os.environ["MF_CACHE"])
    base = Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache"))
    return base / "erdosmoser" / "bernoulli.tsv"


def cmd_valuation(args):
    try:
        r = valuation_report(args.m, args.n, args.p)
    except NotCoveredError as exc:
        raise UsageError(str(exc)) from None
    out = {
        "actual": r.actual_order,
        "V_p": r.V_p_value,
        "branch": r.branch,
        "prediction": r.prediction.name,
        "predicted": r.predicted_value,
        "order_at_p_minus_1": r.order_at_p_minus_1,
        "status": r.status,
        "literal_prediction": r.literal_prediction.name,
        "literal_consistent": r.literal_consistent,
    }
    code = EXIT_VIOLATION if r.status is Status.VIOLATION else EXIT_OK
    return OutputRecord("valuation", vars_of(args, "m", "n", "p"), out, "p-adic order of power sums"), code


def cmd_powersum(args):
    out = {}
    if args.p is not None:
        if not is_prime(args.p):
            raise UsageError(f"--p {args.p} is not prime")
        value = restricted_power_sum(args.m, args.n, args.p)
        out["restricted_sum"] = value if args.mod is None else value % args.mod
    elif args.mod is not None:
        out["sum_mod"] = power_sum_mod(args.m, args.n, args.mod)
    else:
        if args.n < 0:
            raise UsageError("negative exponents need --p")
        out["sum"] = power_sum(args.m, args.n)
    return OutputRecord("powersum", vars_of(args, "m", "n", "p", "mod"), out,
                        "faulhaber cross-check" if "sum" in out and args.n <= 50 else None), EXIT_OK


def _parse_factors(text):
    if text is None:
        return None
    factors = {}
    for part in text.replace("*", ",").split(","):
        part = part.strip()
        if not part:
            continue
        base, _, exp = part.partition("^")
        factors[int(base)] = factors.get(int(base), 0) + int(exp or 1)
    return sorted(factors.items())


def cmd_egyptian(args):
    factors = _parse_factors(args.factors)
    inputs = vars_of(args, "n", "factors", "rule", "F", "G")
    if args.rule:
        try:
            out_n, out_f = generate_with_factorization(args.n, Rule(args.rule), args.F, args.G, factors)
        except (HypothesisError, PreconditionError) as exc:
            raise UsageError(str(exc)) from None
        flags = classify(out_n, out_f)
        return OutputRecord("egyptian", inputs, {
            "result": out_n,
            "factorization": [f"{p}^{e}" if e > 1 else str(p) for p, e in out_f],
            "flags": _flag_names(flags),
        }, "prime-adjoining rules"), EXIT_OK
    sol = solve(args.n, factors)
    flags = classify(args.n, factors, effort=args.effort)
    return OutputRecord("egyptian", inputs, {
        "d": sol.d_raw,
        "d_mod_n": sol.d_canonical,
        "flags": _flag_names(flags),
    }, "egyptian fraction congruence"), EXIT_OK


def _flag_names(flags):
    return [f.name for f in type(flags) if f in flags]


def cmd_search(args):
    target = Target.GIUGA if args.giuga else Target.PPP if args.ppp else Target.D_EQUALS_PLUS_1
    if args.hi < args.lo:
        return OutputRecord("search", {"lo": args.lo, "hi": args.hi, "target": target}, {"hits": [], "skipped": []}), EXIT_OK
    res = search(args.lo, args.hi, target, jobs=args.jobs, effort=args.effort)
    return OutputRecord("search", {"lo": args.lo, "hi": args.hi, "target": target},
                        {"hits": res.hits, "skipped": res.skipped}), EXIT_OK


def cmd_bernoulli(args):
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    path = _cache_path(args)
    table = DEFAULT_TABLE
    on_disk = 0
    if path.exists():
        try:
            table.load(path)
            on_disk = len(read_cache(path))
        except ValueError as exc:
            raise UsageError(f"bad cache file: {exc}") from None
    n_k, D_k = table.pair(args.k)
    # the table may hold more than the file, from this call or an earlier one in-process
    if len(table) > on_disk:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            table.save(path)
        except OSError as exc:
            print(f"erdosmoser bernoulli: warning: cache not written: {exc}", file=sys.stderr)
    return OutputRecord("bernoulli", {"k": args.k, "cache": str(path)},
                        {"numerator": n_k, "denominator": D_k}, "von staudt-clausen denominators"), EXIT_OK


def cmd_em_check(args):
    mode = em_sieve.Mode(args.mode)
    n = args.n if args.n is not None else em_sieve.NProfile(args.profile)
    certs = em_sieve.em_residue_constraints(args.m, mode, n=args.n, effort=args.effort)
    primes = set()
    for x in (args.m, args.m + 1, 2 * args.m + 1):
        primes.update(p for p, _ in factorize(x, args.effort) if p > 2)
    certs += [em_sieve.em_prime_constraints(args.m, n, p, mode) for p in sorted(primes)]
    if mode is em_sieve.Mode.EME and args.m >= 3:
        certs += em_sieve.rabbit_certificate(args.m, n, args.effort)
    verdict = "REJECTED" if any(c.status is em_sieve.Status.FAIL for c in certs) else "NOT_REJECTED"
    return OutputRecord("em-check", {"m": args.m, "n": args.n, "profile": None if args.n else args.profile, "mode": mode},
                        {"verdict": verdict,
                         "certificates": [[c.constraint_id, c.status.value, c.witness] for c in certs]},
                        "erdos-moser necessary conditions"), EXIT_OK


def cmd_em_sieve(args):
    profile = None if args.no_profile else em_sieve.NProfile(args.profile)
    s = em_sieve.sieve_range(args.lo, args.hi, profile, args.mode, jobs=args.jobs, effort=args.effort)
    return OutputRecord("em-sieve", {"lo": args.lo, "hi": args.hi, "profile": None if profile is None else profile.divisor,
                                     "mode": args.mode},
                        {"checked": s.checked, "survivor_count": s.survivor_count, "survivors": s.survivors,
                         "histogram": s.histogram}, "erdos-moser necessary conditions"), EXIT_OK


def cmd_verify(args):
    try:
        res = verify.run_suite(args.suite, quick=args.quick)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    out = {p.name: f"{'PASS' if p.passed else 'FAIL'}: {p.detail}" for p in res.properties}
    out["suite"] = "PASS" if res.passed else "FAIL"
    return OutputRecord("verify", {"suite": args.suite, "quick": args.quick}, out), EXIT_OK if res.passed else EXIT_VIOLATION


def vars_of(args, *names):
    return {k: getattr(args, k) for k in names if getattr(args, k, None) is not None}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured JSON output")
    common.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1)
    common.add_argument("--effort", type=_positive, default=DEFAULT_EFFORT, help="factorization cap")
    common.add_argument("--cache", help="Bernoulli cache file (default $MF_CACHE)")

    parser = _Parser(prog="erdosmoser", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("valuation", parents=[common], help="p-adic order of S_n(m) against its prediction")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--p", type=_positive, required=True)
    p.set_defaults(func=cmd_valuation)

    p = sub.add_parser("powersum", parents=[common], help="S_n(m), optionally restricted or reduced")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=_positive, help="omit multiples of this prime")
    p.add_argument("--mod", type=_positive)
    p.set_defaults(func=cmd_powersum)

    p = sub.add_parser("egyptian", parents=[common], help="d(n), classification, generation rules")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--factors", help="factorization of n, e.g. 2,3,5^2")
    p.add_argument("--rule", choices=[r.value for r in Rule])
    p.add_argument("--F", type=_positive)
    p.add_argument("--G", type=_positive)
    p.set_defaults(func=cmd_egyptian)

    p = sub.add_parser("search", parents=[common], help="Giuga, primary pseudoperfect, or d == 1 numbers in a range")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--giuga", action="store_true")
    g.add_argument("--ppp", action="store_true")
    g.add_argument("--d-plus-1", action="store_true")
    p.add_argument("--lo", type=_positive, default=1)
    p.add_argument("--hi", type=_positive, required=True)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("bernoulli", parents=[common], help="exact B_k")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_bernoulli)

    p = sub.add_parser("em-check", parents=[common], help="certificates for one candidate m")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--n", type=_positive)
    p.add_argument("--profile", type=_positive, default=em_sieve.DEFAULT_PROFILE.divisor,
                   help="known divisor of n when --n is absent")
    p.add_argument("--mode", choices=[m.value for m in em_sieve.Mode], default="eme")
    p.set_defaults(func=cmd_em_check)

    p = sub.add_parser("em-sieve", parents=[common], help="sieve a range of m")
    p.add_argument("--lo", type=_positive, default=1)
    p.add_argument("--hi", type=_positive, required=True)
    p.add_argument("--profile", type=_positive, default=em_sieve.DEFAULT_PROFILE.divisor)
    p.add_argument("--no-profile", action="store_true", help="m-only constraints")
    p.add_argument("--mode", choices=[m.value for m in em_sieve.Mode], default="eme")
    p.set_defaults(func=cmd_em_sieve)

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("--suite", required=True, help=", ".join(verify.SUITES))
    p.add_argument("--quick", action="store_true", help="ranges shrunk tenfold")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error already printed
        return exc.code or EXIT_OK
    t0 = time.perf_counter()
    try:
        record, code = args.func(args)
    except UsageError as exc:
        print(f"erdosmoser {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FactorizationError as exc:
        print(f"erdosmoser {args.command}: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except TheoremViolation as exc:
        print(f"erdosmoser {args.command}: identity check failed: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (ValueError, PreconditionError) as exc:
        print(f"erdosmoser {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    record.elapsed = round(time.perf_counter() - t0, 6)
    sys.stdout.write(record.to_json() + "\n" if args.json else record.to_tsv())
    return code


if __name__ == "__main__":
    sys.exit(main())
