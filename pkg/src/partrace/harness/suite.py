"""Seeded verification suites and their JSONL/CSV reports."""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

from partrace import inequalities as ineq
from partrace.errors import HypothesisError, UsageError
from partrace.harness.families import (
    CHECKS,
    DEFAULT_ALPHA,
    DEFAULT_Q,
    FAMILIES,
    PARAM_TERM,
    decode_param,
    encode_param,
    evaluate,
)

ROW_FIELDS = ("check", "m", "n", "seed", "index", "lhs", "rhs", "gap", "tolerance", "holds",
              "hypothesis_ok", "scale_note", "terms")
BASE_REL = {"ando": ineq.LOEWNER_REL, "complement": ineq.LOEWNER_REL, "ppt_map": ineq.LOEWNER_REL}


@dataclass(frozen=True)
class SuiteConfig:
    checks: tuple
    dims: tuple
    trials: int
    seed: int
    tol: Optional[float] = None
    alphas: tuple = DEFAULT_ALPHA
    qs: tuple = DEFAULT_Q

    def __post_init__(self):
        if self.trials < 1:
            raise UsageError(f"trials must be >= 1, got {self.trials}")
        if not self.dims:
            raise UsageError("dims must be non-empty")
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise UsageError(f"unknown check(s): {', '.join(unknown)}")
        if not self.checks:
            raise UsageError("no checks selected")
        for m, n in self.dims:
            if m < 1 or n < 1:
                raise UsageError(f"invalid dims {m}x{n}")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise UsageError("seed must be an unsigned 64-bit integer")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("tol must be positive")
        for q in self.qs:
            if not q >= 1:
                raise UsageError(f"q must be >= 1 or inf, got {q}")
        for a in self.alphas:
            if not 0 <= a < math.pi / 2:
                raise UsageError(f"alpha must lie in [0, pi/2), got {a}")


@dataclass
class CheckAggregate:
    count: int = 0
    holds: int = 0
    violations: int = 0
    hypothesis_errors: int = 0
    min_gap: float = math.inf
    argmin_seed: Optional[int] = None
    argmin_index: Optional[int] = None
    argmin_dims: Optional[tuple] = None


@dataclass
class SuiteReport:
    config: SuiteConfig
    rows: list
    aggregates: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def violations(self):
        return [r for r in self.rows if r["hypothesis_ok"] and not r["holds"]]

    def to_jsonl(self) -> str:
        return "".join(row_to_json(r) + "\n" for r in self.rows)

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)

    def summary(self) -> dict:
        return {
            "config": {**asdict(self.config), "qs": [encode_param("q", q) for q in self.config.qs]},
            "aggregates": {k: asdict(v) for k, v in self.aggregates.items()},
            "wall_time": self.wall_time,
        }


def row_to_json(row) -> str:
    return json.dumps({k: row[k] for k in ROW_FIELDS}, allow_nan=False)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROW_FIELDS)
    for r in rows:
        writer.writerow([json.dumps(r["terms"], allow_nan=False) if k == "terms" else r[k] for k in ROW_FIELDS])
    return buf.getvalue()


def retolerance(v: ineq.Verdict, rel: float) -> ineq.Verdict:
    """Same verdict re-judged with relative tolerance ``rel``."""
    base = BASE_REL.get(v.id, ineq.SCALAR_REL)
    tol = v.tolerance * (rel / base)
    return ineq.Verdict(v.id, v.terms, v.lhs, v.rhs, v.gap, tol, bool(v.gap >= -tol), v.scale_note,
                        v.scale, v.degree, v.extras)


def verdict_row(v: ineq.Verdict, check, m, n, seed, index, extra_terms=None) -> dict:
    terms = {**v.terms, **v.extras, **(extra_terms or {})}
    return {"check": check, "m": m, "n": n, "seed": seed, "index": index, "lhs": v.lhs, "rhs": v.rhs,
            "gap": v.gap, "tolerance": v.tolerance, "holds": v.holds, "hypothesis_ok": True,
            "scale_note": v.scale_note, "terms": terms}


def hypothesis_row(err: HypothesisError, check, m, n, seed, index, extra_terms=None) -> dict:
    terms = {k: float(v) for k, v in err.details.items()
             if isinstance(v, (int, float)) and math.isfinite(v)}
    terms.update(extra_terms or {})
    return {"check": check, "m": m, "n": n, "seed": seed, "index": index, "lhs": 0.0, "rhs": 0.0,
            "gap": 0.0, "tolerance": 0.0, "holds": False, "hypothesis_ok": False,
            "scale_note": f"hypothesis error: {err}", "terms": terms}


def evaluate_task(task) -> dict:
    """One report row; ``task = (check, m, n, seed, index, param, tol)``."""
    check_id, m, n, seed, index, param, tol = task
    check = CHECKS[check_id]
    extra = {PARAM_TERM[check.param]: encode_param(check.param, param)} if check.param else {}
    family = FAMILIES[check.family]
    alpha = param if check.param == "alpha" else None
    try:
        instance = family.instance(seed, m, n, index, alpha)
        v = evaluate(check_id, instance, param)
    except HypothesisError as err:
        return hypothesis_row(err, check_id, m, n, seed, index, extra)
    if tol is not None:
        v = retolerance(v, tol)
    return verdict_row(v, check_id, m, n, seed, index, extra)


def tasks_for(cfg: SuiteConfig):
    for check_id in cfg.checks:
        kind = CHECKS[check_id].param
        params = {"q": cfg.qs, "alpha": cfg.alphas}.get(kind, (None,))
        for m, n in cfg.dims:
            for p in params:
                for index in range(cfg.trials):
                    yield (check_id, m, n, cfg.seed, index, p, cfg.tol)


def aggregate(rows) -> dict:
    out = {}
    for r in rows:
        agg = out.setdefault(r["check"], CheckAggregate())
        agg.count += 1
        if not r["hypothesis_ok"]:
            agg.hypothesis_errors += 1
            continue
        if r["holds"]:
            agg.holds += 1
        else:
            agg.violations += 1
        if r["gap"] < agg.min_gap:
            agg.min_gap = r["gap"]
            agg.argmin_seed, agg.argmin_index = r["seed"], r["index"]
            agg.argmin_dims = (r["m"], r["n"])
    return out


def run_suite(cfg: SuiteConfig, workers: int = 1) -> SuiteReport:
    """Evaluate every ``(check, dims, parameter, trial)`` of ``cfg``.

    Rows come back in task order whatever the worker count, so the report is
    reproducible from the config alone.
    """
    start = time.perf_counter()
    tasks = list(tasks_for(cfg))
    if workers <= 1:
        rows = [evaluate_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(evaluate_task, tasks, chunksize=chunk))
    return SuiteReport(cfg, rows, aggregate(rows), time.perf_counter() - start)


def replay_row(row) -> ineq.Verdict:
    """Regenerate the instance behind a report row and re-evaluate it."""
    check = CHECKS[row["check"]]
    param = None
    if check.param:
        param = decode_param(check.param, row["terms"][PARAM_TERM[check.param]])
    family = FAMILIES[check.family]
    alpha = param if check.param == "alpha" else None
    instance = family.instance(row["seed"], row["m"], row["n"], row["index"], alpha)
    return evaluate(row["check"], instance, param)
