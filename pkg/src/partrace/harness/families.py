"""Instance families and the check registry used by the suite and the search.

An instance is addressed by ``(family, m, n, seed, index)`` plus an optional
family parameter (the sector angle). Its latent factors come from
``generators.stream(seed, tag, *dims, index)``, so any report row can be
regenerated from its coordinates alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from partrace import generators as gen
from partrace import inequalities as ineq
from partrace.blockops import BlockMatrix
from partrace.cones import sector_margin
from partrace.errors import HypothesisError

DEFAULT_Q = (1.0, 2.0, 3.0, math.inf)
DEFAULT_ALPHA = (0.0, math.pi / 6, math.pi / 4, math.pi / 3)


def _sample_psd_mixed(rng, m, n):
    # Half the draws are full rank, the rest have a uniformly chosen deficient rank.
    mn = m * n
    rank = mn if mn == 1 or rng.random() < 0.5 else int(rng.integers(1, mn))
    return gen.sample_psd_latent(rng, m, n, rank)


def _build_sector(m, n, latent, alpha):
    return BlockMatrix(m, n, gen.build_sector(latent, alpha))


def _build_quadruple(m, n, latent, _):
    return gen.build_quadruple_latent(latent, float(latent.get("z_scale", 1.0)))


def _build_triple(m, n, latent, _):
    return tuple(gen.gram(latent[k]) for k in ("a", "b", "c"))


@dataclass(frozen=True)
class Family:
    name: str
    tag: int
    keys: Callable  # (m, n) -> stream key dims
    sample: Callable  # (rng, m, n) -> latent dict
    build: Callable  # (m, n, latent, param) -> instance, or None when out of class
    frozen: tuple = ()  # latent entries the search never perturbs

    def latent(self, seed, m, n, index):
        return self.sample(gen.stream(seed, self.tag, *self.keys(m, n), index), m, n)

    def instance(self, seed, m, n, index, param=None):
        return self.build(m, n, self.latent(seed, m, n, index), param)


FAMILIES = {
    "psd": Family("psd", gen.PSD_MIXED, lambda m, n: (m, n), _sample_psd_mixed,
                  lambda m, n, lat, _: gen.build_psd(m, n, lat)),
    "psd_full": Family("psd_full", gen.PSD, lambda m, n: (m, n),
                       lambda rng, m, n: gen.sample_psd_latent(rng, m, n),
                       lambda m, n, lat, _: gen.build_psd(m, n, lat)),
    "blockdiag": Family("blockdiag", gen.BLOCKDIAG, lambda m, n: (m, n), gen.sample_blockdiag_latent,
                        lambda m, n, lat, _: gen.build_blockdiag(m, n, lat)),
    "ppt": Family("ppt", gen.PPT, lambda m, n: (m, n), lambda rng, m, n: gen.sample_ppt_latent(rng, m, n),
                  lambda m, n, lat, _: gen.build_ppt(m, n, lat)),
    "sector": Family("sector", gen.SECTOR, lambda m, n: (m * n,),
                     lambda rng, m, n: gen.sample_sector_latent(rng, m * n), _build_sector),
    "quadruple": Family("quadruple", gen.QUADRUPLE, lambda m, n: (m * n,),
                        lambda rng, m, n: gen.sample_valid_quadruple_latent(rng, m * n), _build_quadruple,
                        frozen=("z_scale",)),
    "triple": Family("triple", gen.TRIPLE, lambda m, n: (m * n,),
                     lambda rng, m, n: gen.sample_triple_latent(rng, m * n), _build_triple),
}


@dataclass(frozen=True)
class Check:
    id: str
    family: str
    evaluate: Callable  # (instance, param, explore) -> Verdict
    param: Optional[str] = None  # "q" or "alpha"


def _block(fn):
    return lambda inst, _p, _e: fn(inst)


def _sector(fn):
    def evaluate(inst, alpha, _e):
        margin, re_pd = sector_margin(inst.data)
        if not re_pd or margin > alpha + ineq.ALPHA_SLACK:
            raise HypothesisError("generated matrix left its sector", {"alpha_min": margin, "alpha_gen": alpha})
        return fn(inst)
    return evaluate


CHECKS = {
    "schatten": Check("schatten", "psd", lambda inst, q, _e: ineq.check_schatten(inst, q), "q"),
    "ando": Check("ando", "psd", _block(ineq.check_ando_loewner)),
    "complement": Check("complement", "psd", _block(ineq.check_complement_loewner)),
    "ppt_map": Check("ppt_map", "psd", _block(ineq.check_ppt_map)),
    "lin": Check("lin", "psd", _block(ineq.check_lin)),
    "main": Check("main", "psd", _block(ineq.check_main)),
    "swapped": Check("swapped", "psd", _block(ineq.check_swapped)),
    "ppt_reversal": Check("ppt_reversal", "ppt",
                          lambda inst, _p, explore: ineq.check_ppt_reversal(inst, require=not explore)),
    "sector_det": Check("sector_det", "sector", _sector(ineq.check_sector_det), "alpha"),
    "re_singular": Check("re_singular", "sector", _sector(ineq.check_re_singular), "alpha"),
    "sector_main": Check("sector_main", "sector", _sector(ineq.check_sector_main), "alpha"),
    "det_four": Check("det_four", "quadruple", lambda inst, _p, _e: ineq.check_det_four(*inst)),
    "three_term": Check("three_term", "triple", lambda inst, _p, _e: ineq.check_three_term(*inst)),
}

PARAM_TERM = {"q": "inv_q", "alpha": "alpha_gen"}


def encode_param(kind, value):
    if kind == "q":
        return 0.0 if math.isinf(value) else 1.0 / value
    return float(value)


def decode_param(kind, stored):
    if kind == "q":
        return math.inf if stored == 0.0 else 1.0 / stored
    return float(stored)


def evaluate(check_id, instance, param=None, explore=False):
    """Verdict of ``check_id`` on an already built instance."""
    check = CHECKS[check_id]
    if instance is None:
        raise HypothesisError("latent factors fall outside the hypothesis class")
    return check.evaluate(instance, param, explore)


def latent_copy(latent):
    return {k: np.array(v, copy=True) for k, v in latent.items()}
