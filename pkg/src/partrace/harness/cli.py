"""Command line front end: ``partrace {verify,search,gen,eval}``.

Exit status: 0 when every evaluated inequality holds, 2 when at least one is
violated beyond tolerance, 1 on usage, I/O or hypothesis-configuration errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from partrace import generators as gen
from partrace import inequalities as ineq
from partrace.errors import HypothesisError, MatrixIOError, PartraceError, UsageError
from partrace.harness.families import CHECKS, FAMILIES, PARAM_TERM, encode_param
from partrace.harness.matio import load_matrix, matrix_to_dict, save_matrix
from partrace.harness.search import minimize_gap
from partrace.harness.suite import (
    SuiteConfig,
    hypothesis_row,
    retolerance,
    row_to_json,
    rows_to_csv,
    run_suite,
    verdict_row,
)

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2
EVAL_CHECKS = tuple(ineq.BLOCK_CHECKS)
GEN_FAMILIES = ("psd", "psd_full", "blockdiag", "ppt", "sector")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_dims(text):
    dims = []
    for part in text.split(","):
        try:
            m, n = part.lower().split("x")
            dims.append((int(m), int(n)))
        except ValueError:
            raise UsageError(f"bad dims {part!r}, expected MxN") from None
    return tuple(dims)


def parse_floats(text):
    out = []
    for part in text.split(","):
        try:
            out.append(math.inf if part.strip().lower() == "inf" else float(part))
        except ValueError:
            raise UsageError(f"bad number {part!r}") from None
    return tuple(out)


def parse_checks(text, allowed):
    if text.strip() == "all":
        return tuple(allowed)
    checks = tuple(c.strip() for c in text.split(",") if c.strip())
    unknown = [c for c in checks if c not in allowed]
    if unknown:
        raise UsageError(f"unknown check(s): {', '.join(unknown)}")
    return checks


def build_parser():
    parser = _Parser(prog="partrace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="run a randomized verification suite")
    p.add_argument("--checks", default="all")
    p.add_argument("--dims", default="2x2")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float)
    p.add_argument("--alpha")
    p.add_argument("--q")
    p.add_argument("--out")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("search", help="minimize an inequality gap over generator latents")
    p.add_argument("--checks", required=True, help="a single check id")
    p.add_argument("--dims", default="2x2")
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--q")
    p.add_argument("--alpha")
    p.add_argument("--family", choices=tuple(FAMILIES))
    p.add_argument("--explore", action="store_true",
                   help="disable hypothesis checks (ppt_reversal then samples PSD, not PPT)")
    p.add_argument("--out")

    p = sub.add_parser("gen", help="write a random instance to a matrix file")
    p.add_argument("--family", choices=GEN_FAMILIES, default="psd")
    p.add_argument("--dims", default="2x2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--rank", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--terms", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="evaluate checks on a matrix file")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--checks", default="all")
    p.add_argument("--q")
    p.add_argument("--alpha")
    p.add_argument("--tol", type=float)
    p.add_argument("--out")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    return parser


def _emit(text, path):
    if path:
        try:
            with open(path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise MatrixIOError(f"{path}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(text)


def _format_rows(rows, fmt):
    if fmt == "csv":
        return rows_to_csv(rows)
    return "".join(row_to_json(r) + "\n" for r in rows)


def cmd_verify(args):
    cfg = SuiteConfig(
        checks=parse_checks(args.checks, CHECKS),
        dims=parse_dims(args.dims),
        trials=args.trials,
        seed=args.seed,
        tol=args.tol,
        **({"alphas": parse_floats(args.alpha)} if args.alpha else {}),
        **({"qs": parse_floats(args.q)} if args.q else {}),
    )
    if args.workers < 1:
        raise UsageError("workers must be >= 1")
    report = run_suite(cfg, workers=args.workers)
    _emit(_format_rows(report.rows, args.format), args.out)
    for check, agg in report.aggregates.items():
        print(f"{check:>13}: {agg.holds}/{agg.count} hold, {agg.violations} violated, "
              f"{agg.hypothesis_errors} hypothesis errors, min gap {agg.min_gap:.3e}", file=sys.stderr)
    print(f"wall time {report.wall_time:.2f}s", file=sys.stderr)
    return EXIT_VIOLATION if report.violations else EXIT_OK


def cmd_search(args):
    check = args.checks.strip()
    if check not in CHECKS:
        raise UsageError(f"unknown check {check!r}")
    dims = parse_dims(args.dims)
    if len(dims) != 1:
        raise UsageError("search takes a single --dims value")
    kind = CHECKS[check].param
    raw = {"q": args.q, "alpha": args.alpha}.get(kind)
    param = parse_floats(raw)[0] if raw else None
    m, n = dims[0]
    rec = minimize_gap(check, m, n, args.budget, args.seed, param=param, family=args.family,
                       explore=args.explore)
    out = {
        "check": rec.check, "m": m, "n": n, "seed": rec.seed, "family": rec.family,
        "explore": rec.explore, "restart": rec.restart, "best_gap": rec.best_gap,
        "evaluations": rec.trace_length, "trace": rec.trace,
        "param": encode_param(kind, rec.param) if kind else None,
        "param_name": PARAM_TERM.get(kind),
        "verdict": {"lhs": rec.verdict.lhs, "rhs": rec.verdict.rhs, "tolerance": rec.verdict.tolerance,
                    "holds": rec.verdict.holds, "terms": {**rec.verdict.terms, **rec.verdict.extras}},
    }
    if hasattr(rec.instance, "data"):
        out["instance"] = matrix_to_dict(rec.instance)
    text = json.dumps(out, allow_nan=False) + "\n"
    _emit(text, args.out)
    label = "explored" if rec.explore else "searched"
    print(f"{label} {rec.trace_length} instances, best gap {rec.best_gap:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_gen(args):
    dims = parse_dims(args.dims)
    if len(dims) != 1:
        raise UsageError("gen takes a single --dims value")
    m, n = dims[0]
    try:
        cfg = gen.GeneratorConfig(args.seed, m, n, rank=args.rank, alpha=args.alpha, terms=args.terms,
                                  index=args.index)
    except PartraceError as exc:
        raise UsageError(str(exc)) from None
    if args.family == "psd_full":
        a = gen.rand_psd_block(cfg)
    elif args.family == "ppt":
        a = gen.rand_ppt_separable(cfg)
    elif args.family == "sector":
        a = gen.rand_sector_block(cfg if cfg.alpha is not None else
                                  gen.GeneratorConfig(args.seed, m, n, alpha=math.pi / 4, index=args.index))
    elif args.family == "psd" and args.rank is not None:
        a = gen.rand_psd_block(cfg)
    else:
        a = FAMILIES[args.family].instance(args.seed, m, n, args.index)
    save_matrix(args.out, a)
    return EXIT_OK


def cmd_eval(args):
    a = load_matrix(args.path)
    explicit = args.checks.strip() != "all"
    checks = parse_checks(args.checks, EVAL_CHECKS)
    qs = parse_floats(args.q) if args.q else (1.0, 2.0, 3.0, math.inf)
    alpha = parse_floats(args.alpha)[0] if args.alpha else None
    rows = []
    hypothesis_failed = []
    for check in checks:
        fn = ineq.BLOCK_CHECKS[check]
        params = qs if check == "schatten" else (None,)
        for p in params:
            extra = {"inv_q": encode_param("q", p)} if check == "schatten" else {}
            try:
                if check == "schatten":
                    v = fn(a, p)
                elif check in ("sector_det", "sector_main"):
                    v = fn(a, alpha)
                else:
                    v = fn(a)
            except HypothesisError as err:
                rows.append(hypothesis_row(err, check, a.m, a.n, 0, 0, extra))
                hypothesis_failed.append(f"{check}: {err}")
                continue
            if args.tol is not None:
                v = retolerance(v, args.tol)
            rows.append(verdict_row(v, check, a.m, a.n, 0, 0, extra))
    _emit(_format_rows(rows, args.format), args.out)
    for msg in hypothesis_failed:
        print(f"hypothesis not met: {msg}", file=sys.stderr)
    if any(r["hypothesis_ok"] and not r["holds"] for r in rows):
        return EXIT_VIOLATION
    if explicit and hypothesis_failed:
        return EXIT_ERROR
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "search": cmd_search, "gen": cmd_gen, "eval": cmd_eval}


def cli_main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"partrace: usage error: {exc}", file=sys.stderr)
    except MatrixIOError as exc:
        print(f"partrace: I/O error: {exc}", file=sys.stderr)
    except PartraceError as exc:
        print(f"partrace: {exc}", file=sys.stderr)
    return EXIT_ERROR


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
