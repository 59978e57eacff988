"""Gap minimization over generator latents (empirical tightness probe)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from partrace import generators as gen
from partrace.errors import GenerationError, HypothesisError, UsageError
from partrace.harness.families import CHECKS, FAMILIES, evaluate, latent_copy

RESTART_BUDGET = 500
SIGMA_START = 0.3
SIGMA_MIN = 1e-10
SIGMA_MAX = 2.0


@dataclass
class TightnessRecord:
    check: str
    m: int
    n: int
    seed: int
    family: str
    param: Optional[float]
    explore: bool
    best_gap: float
    restart: int
    latent: dict
    instance: object
    verdict: object
    trace: list = field(default_factory=list)

    @property
    def trace_length(self) -> int:
        return len(self.trace)

    def reevaluate(self):
        inst = FAMILIES[self.family].build(self.m, self.n, self.latent, self.param)
        return evaluate(self.check, inst, self.param, self.explore)


def _perturb(latent, rng, sigma, frozen):
    """Gaussian kick on one randomly chosen latent coordinate."""
    keys = [k for k in sorted(latent) if k not in frozen and latent[k].size]
    key = keys[int(rng.integers(len(keys)))]
    out = latent_copy(latent)
    arr = out[key]
    pos = int(rng.integers(arr.size))
    flat = arr.reshape(-1)
    if np.iscomplexobj(arr):
        flat[pos] += sigma * gen.complex_gaussian(rng, ())
    else:
        flat[pos] += sigma * rng.standard_normal()
    out[key] = flat.reshape(arr.shape)
    return out


def minimize_gap(check: str, m: int, n: int, budget: int, seed: int, *, param=None,
                 family: Optional[str] = None, explore: bool = False) -> TightnessRecord:
    """Random restarts plus coordinate-wise Gaussian perturbation of latent factors.

    A step is accepted only when it lowers the gap and the rebuilt instance
    still passes the check's hypotheses (skipped under ``explore``). Every
    evaluation appends the running best gap to ``trace``.

    ``explore`` on ``ppt_reversal`` draws from the PSD family instead of the
    separable one and never asserts the outcome.
    """
    if check not in CHECKS:
        raise UsageError(f"unknown check {check!r}")
    if budget < 1:
        raise UsageError("budget must be >= 1")
    spec = CHECKS[check]
    if family is None:
        family = "psd" if (explore and check == "ppt_reversal") else spec.family
    if family not in FAMILIES:
        raise UsageError(f"unknown family {family!r}")
    fam = FAMILIES[family]
    if param is None:
        param = {"q": 1.0, "alpha": math.pi / 4}.get(spec.param)

    def gap_of(latent):
        try:
            inst = fam.build(m, n, latent, param)
            v = evaluate(check, inst, param, explore)
        except (HypothesisError, GenerationError):
            return None, None, None
        return v.gap, inst, v

    best = None
    trace = []
    restarts = max(1, math.ceil(budget / RESTART_BUDGET))
    used = 0
    for r in range(restarts):
        if used >= budget:
            break
        rng = gen.stream(seed, gen.SEARCH, r)
        latent = fam.latent(seed, m, n, r)
        gap, inst, v = gap_of(latent)
        used += 1
        if gap is not None and (best is None or gap < best.best_gap):
            best = TightnessRecord(check, m, n, seed, family, param, explore, gap, r, latent, inst, v)
        trace.append(best.best_gap if best else math.inf)
        current = gap
        sigma = SIGMA_START
        stop = min(budget, used + RESTART_BUDGET - 1) if r < restarts - 1 else budget
        while used < stop:
            cand = _perturb(latent, rng, sigma, fam.frozen)
            cgap, cinst, cv = gap_of(cand)
            used += 1
            if cgap is not None and (current is None or cgap < current):
                latent, current = cand, cgap
                sigma = min(SIGMA_MAX, sigma * 1.5)
                if best is None or cgap < best.best_gap:
                    best = TightnessRecord(check, m, n, seed, family, param, explore, cgap, r, cand, cinst, cv)
            else:
                sigma = max(SIGMA_MIN, sigma * 0.8)
            trace.append(best.best_gap if best else math.inf)
    if best is None:
        raise GenerationError("no valid instance found within the budget")
    best.trace = trace
    return best
