"""Command-line front end: ``theta-lgr <command> [flags]``.

Exit codes: 0 ok, 1 property failure, 2 parse error, 3 invariant violation,
4 domain error.  The seed falls back to ``THETA_LGR_SEED`` and then to 0;
all randomness goes through ``random.Random`` (Mersenne Twister) so output
is byte-identical across runs and platforms.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from . import lagrangian as lg
from .linalg import Matrix, format_rational, parse_rational
from .sampling import sample_many
from .symplectic import FactorizationError, is_in_theta_monoid, is_symplectic, theta_triple_factor
from .verify import SUITES, report, run_suites

EXIT_OK, EXIT_PROPERTY, EXIT_PARSE, EXIT_INVARIANT, EXIT_DOMAIN = 0, 1, 2, 3, 4
SEED_ENV = "THETA_LGR_SEED"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


# -- argument parsing ---------------------------------------------------------


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return x


def _seed(text: str) -> int:
    try:
        s = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return s


def parse_ranks(text: str) -> list[int]:
    """``"3"`` or ``"1-4"``."""
    try:
        if "-" in text:
            lo, hi = (int(x) for x in text.split("-", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"rank must be N or LO-HI, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad rank range {text!r}")
    return list(range(lo, hi + 1))


def parse_index_list(text: str) -> list[int]:
    text = text.strip()
    if text in ("", "-", "none"):
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise CliError(EXIT_PARSE, f"expected comma-separated integers, got {text!r}") from None


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--n", type=parse_ranks, default=d(None), help="rank, or a range LO-HI for verify")
    parser.add_argument("--seed", type=_seed, default=d(None), help=f"PRNG seed (fallback: ${SEED_ENV}, then 0)")
    parser.add_argument("--tolerance", type=_positive_float, default=d(1e-9), help="orbit witness residual tolerance")
    parser.add_argument("--input", default=d(None), help="input JSON file ('-' for stdin)")
    parser.add_argument("--output", default=d(None), help="write output here instead of stdout")
    parser.add_argument("--json", action="store_true", default=d(False), help="machine-readable JSON output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="theta-lgr", description="Theta-positivity on the Lagrangian Grassmannian.")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("classify", parents=[common], help="stratum signature and positivity of a point")

    p = sub.add_parser("sample", parents=[common], help="seeded points in a stratum")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--stratum", help="double coset pair k,l")
    grp.add_argument("--cell", help="Cholesky cell index set, e.g. 1,3 (use 'none' for the empty set)")
    grp.add_argument("--family", choices=("interior", "nonnegative", "any"))
    p.add_argument("--count", type=int, default=1)

    p = sub.add_parser("verify", parents=[common], help="run property suites")
    p.add_argument("--suite", action="append", help=f"suite name, repeatable or comma separated ({', '.join(SUITES)})")
    p.add_argument("--count", type=int, default=50, help="random cases per suite and rank")

    sub.add_parser("factor", parents=[common], help="triple factorization of a monoid element")
    sub.add_parser("plucker", parents=[common], help="Plücker coordinates of a point")

    p = sub.add_parser("flow", parents=[common], help="apply the contracting flow")
    p.add_argument("--c", default="2", help="flow parameter, a positive rational")
    return parser


# -- input and output -------------------------------------------------------


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None


def _load_json(path: str | None) -> Any:
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"malformed JSON: {exc}") from None


def _load_point(path: str | None) -> lg.LagrangianPoint:
    obj = _load_json(path)
    try:
        return lg.LagrangianPoint.from_json(obj)
    except lg.NotLagrangianError as exc:
        raise CliError(EXIT_INVARIANT, f"not a Lagrangian point, violated invariant: {exc}") from None
    except (ValueError, TypeError, KeyError, AttributeError) as exc:
        raise CliError(EXIT_PARSE, f"malformed point: {exc}") from None


def _load_matrix(path: str | None) -> Matrix:
    obj = _load_json(path)
    try:
        return Matrix.from_json(obj)
    except (ValueError, TypeError, KeyError, AttributeError) as exc:
        raise CliError(EXIT_PARSE, f"malformed matrix: {exc}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _single_rank(args) -> int:
    if args.n is None:
        raise CliError(EXIT_PARSE, "--n is required")
    if len(args.n) != 1:
        raise CliError(EXIT_PARSE, "this command takes a single rank")
    return args.n[0]


def resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return _seed(env)
    except argparse.ArgumentTypeError as exc:
        raise CliError(EXIT_PARSE, f"{SEED_ENV}: {exc}") from None


# -- commands -----------------------------------------------------------------


def classify_report(p: lg.LagrangianPoint) -> dict:
    out = lg.signature(p).to_json()
    out["theta"] = lg.theta_class(p)
    out["plucker_class"] = lg.plucker_sign_class(p)
    out["gs_list"] = [",".join(map(str, s)) for s in sorted(lg.gs_list(p))]
    return out


def cmd_classify(args) -> int:
    p = _load_point(args.input)
    _emit(args, dumps(classify_report(p)))
    return EXIT_OK


def cmd_sample(args) -> int:
    n = _single_rank(args)
    if args.count < 0:
        raise CliError(EXIT_PARSE, "--count must be nonnegative")
    if args.stratum is not None:
        pair = parse_index_list(args.stratum)
        if len(pair) != 2:
            raise CliError(EXIT_PARSE, "--stratum needs k,l")
        stratum: Any = tuple(pair)
    elif args.cell is not None:
        stratum = frozenset(parse_index_list(args.cell))
    else:
        stratum = args.family
    seed = resolve_seed(args)
    try:
        points = sample_many(stratum, seed, n, args.count)
    except ValueError as exc:
        raise CliError(EXIT_DOMAIN, str(exc)) from None
    for p in points:
        # every emitted point re-classifies to its request
        if isinstance(stratum, tuple) and lg.classify_double(p) != stratum:
            raise CliError(EXIT_INVARIANT, "sampled point left its stratum")
        if isinstance(stratum, frozenset) and lg.cell_index(p) != stratum:
            raise CliError(EXIT_INVARIANT, "sampled point left its cell")
    lines = [json.dumps(p.to_json(), sort_keys=True, separators=(",", ":")) for p in points]
    _emit(args, "".join(line + "\n" for line in lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    suites: list[str] = []
    for item in args.suite or [",".join(SUITES)]:
        suites.extend(s.strip() for s in item.split(",") if s.strip())
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise CliError(EXIT_PARSE, f"unknown suite(s): {', '.join(unknown)}")
    ranks = args.n if args.n is not None else [1, 2, 3]
    seed = resolve_seed(args)
    results = run_suites(suites, ranks, args.count, seed, args.tolerance)
    rep = report(results, seed)
    if args.json:
        _emit(args, dumps(rep))
    else:
        lines = [
            f"{'PASS' if r.passed else 'FAIL'} {r.suite} n={r.n} cases={r.cases} failures={r.failures}"
            for r in results
        ]
        for r in results:
            if r.counterexample is not None:
                lines.append(f"counterexample {r.suite} n={r.n}: {json.dumps(r.counterexample, sort_keys=True)}")
        lines.append("all suites passed" if rep["passed"] else "some suites failed")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if rep["passed"] else EXIT_PROPERTY


def cmd_factor(args) -> int:
    g = _load_matrix(args.input)
    if not is_symplectic(g):
        raise CliError(EXIT_INVARIANT, "matrix is not symplectic (M^t Omega M != Omega)")
    try:
        u_minus, levi, u_plus = theta_triple_factor(g)
    except FactorizationError as exc:
        raise CliError(EXIT_DOMAIN, f"not in the theta-nonnegative monoid: {exc}") from None
    out = {
        "u_minus": u_minus.to_json(),
        "levi": levi.to_json(),
        "u_plus": u_plus.to_json(),
        "exact": u_minus @ levi @ u_plus == g,
        "block_criterion": is_in_theta_monoid(g),
    }
    _emit(args, dumps(out))
    return EXIT_OK


def cmd_plucker(args) -> int:
    p = _load_point(args.input)
    out = {
        "coords": lg.plucker_to_json(lg.plucker(p)),
        "sign_class": lg.plucker_sign_class(p),
        "gs_list": [",".join(map(str, s)) for s in sorted(lg.gs_list(p))],
    }
    _emit(args, dumps(out))
    return EXIT_OK


def cmd_flow(args) -> int:
    try:
        c = parse_rational(args.c)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    if c <= 0:
        raise CliError(EXIT_DOMAIN, "flow parameter must be positive")
    p = _load_point(args.input)
    q = lg.flow(c, p)
    out = {"c": format_rational(c), "point": q.to_json(), "theta": lg.theta_class(q)}
    try:
        out["chart"] = lg.chart(q).to_json()
    except ValueError:
        out["chart"] = None
    _emit(args, dumps(out))
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "sample": cmd_sample,
    "verify": cmd_verify,
    "factor": cmd_factor,
    "plucker": cmd_plucker,
    "flow": cmd_flow,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, matching the parse-error code
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"theta-lgr: {exc}", file=sys.stderr)
        return exc.code
    except lg.NotLagrangianError as exc:
        print(f"theta-lgr: violated invariant: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"theta-lgr: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
