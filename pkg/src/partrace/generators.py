"""Seeded random instances for every hypothesis class the checkers use.

Randomness comes from numpy's PCG64 seeded through
``SeedSequence([seed, family, *dims, index])``: each instance owns an
independent stream, so output depends only on its coordinates and never on
call order or threading.

Each family is split into ``sample_*`` (draw latent Gaussian factors) and
``build_*`` (deterministic map from latents to the matrix). The tightness
search perturbs latents and rebuilds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from partrace.blockops import BlockMatrix
from partrace.cones import is_psd, loewner_ge
from partrace.errors import DomainError, GenerationError
from partrace.matkernel import hermitian_eig, kron, psd_sqrt

# Stream tags; part of the reproducibility contract, never renumber.
HERMITIAN, PSD, PPT, SECTOR, QUADRUPLE, TRIPLE, BLOCKDIAG, MATRIX, PSD_MIXED, SEARCH = range(1, 11)

SECTOR_RIDGE = 1e-3
QUADRUPLE_ATTEMPTS = 1000
QUADRUPLE_ROUNDS = 20


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    m: int
    n: int
    rank: Optional[int] = None
    alpha: Optional[float] = None
    terms: Optional[int] = None
    index: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DomainError("m and n must be positive")
        if self.rank is not None and not (0 <= self.rank <= self.m * self.n):
            raise DomainError(f"rank must lie in [0, m*n], got {self.rank}")
        if self.alpha is not None and not (0.0 <= self.alpha < math.pi / 2):
            raise DomainError(f"alpha must lie in [0, pi/2), got {self.alpha}")
        if self.terms is not None and self.terms < 1:
            raise DomainError("terms must be >= 1")


def stream(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for the coordinates ``(seed, *keys)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, keys)])))


def _rng(seed, *keys):
    if isinstance(seed, np.random.Generator):
        return seed
    return stream(seed, *keys)


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussian entries, ``E|z|^2 = 1``."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def gram(g) -> np.ndarray:
    g = np.asarray(g, dtype=np.complex128)
    a = g @ g.conj().T
    return 0.5 * (a + a.conj().T)


def psd_clip(a) -> np.ndarray:
    """Zero out the negative eigenvalues of a Hermitian matrix."""
    spec = hermitian_eig(a)
    v = spec.eigenvectors
    a = (v * np.clip(spec.eigenvalues, 0.0, None)) @ v.conj().T
    return 0.5 * (a + a.conj().T)


def _trace_normalized(a):
    t = np.trace(a).real
    return a / t if t > 0 else a


def rand_hermitian(d: int, seed) -> np.ndarray:
    if d < 1:
        raise DomainError("d must be >= 1")
    g = complex_gaussian(_rng(seed, HERMITIAN, d), (d, d))
    return (g + g.conj().T) / 2


# -- PSD block matrices ---------------------------------------------------------

def sample_psd_latent(rng, m, n, rank=None):
    rank = m * n if rank is None else rank
    return {"g": complex_gaussian(rng, (m * n, rank))}


def build_psd(m, n, latent) -> BlockMatrix:
    return BlockMatrix(m, n, _trace_normalized(gram(latent["g"])))


def rand_psd_block(cfg: GeneratorConfig) -> BlockMatrix:
    """``G G*`` with ``G`` of shape ``(mn, rank)``, normalized to unit trace."""
    rng = stream(cfg.seed, PSD, cfg.m, cfg.n, cfg.index)
    return build_psd(cfg.m, cfg.n, sample_psd_latent(rng, cfg.m, cfg.n, cfg.rank))


def sample_blockdiag_latent(rng, m, n):
    return {"g": complex_gaussian(rng, (m, n, n))}


def build_blockdiag(m, n, latent) -> BlockMatrix:
    a = np.zeros((m * n, m * n), dtype=np.complex128)
    for i in range(m):
        a[i * n:(i + 1) * n, i * n:(i + 1) * n] = gram(latent["g"][i])
    return BlockMatrix(m, n, _trace_normalized(a))


# -- separable (PPT) block matrices ---------------------------------------------

def sample_ppt_latent(rng, m, n, terms=None):
    terms = m * n if terms is None else terms
    return {"p": complex_gaussian(rng, (terms, m, m)), "q": complex_gaussian(rng, (terms, n, n))}


def build_ppt(m, n, latent) -> BlockMatrix:
    a = np.zeros((m * n, m * n), dtype=np.complex128)
    for p, q in zip(latent["p"], latent["q"]):
        a += kron(gram(p), gram(q))
    return BlockMatrix(m, n, _trace_normalized(a))


def rand_ppt_separable(cfg: GeneratorConfig) -> BlockMatrix:
    """``sum_i P_i (x) Q_i`` with independent Gram factors; PPT by construction."""
    rng = stream(cfg.seed, PPT, cfg.m, cfg.n, cfg.index)
    return build_ppt(cfg.m, cfg.n, sample_ppt_latent(rng, cfg.m, cfg.n, cfg.terms))


# -- sector matrices ------------------------------------------------------------

def sample_sector_latent(rng, d):
    return {
        "b": complex_gaussian(rng, (d, d)),
        "k": complex_gaussian(rng, (d, d)),
        "u": np.array(rng.uniform()),
    }


def build_sector_from(b, k) -> np.ndarray:
    """``B + i B^{1/2} K B^{1/2}``; its sector half-angle is ``atan(max|eig K|)``."""
    root = psd_sqrt(b)
    return np.asarray(b, dtype=np.complex128) + 1j * (root @ np.asarray(k, dtype=np.complex128) @ root)


def build_sector(latent, alpha: float) -> np.ndarray:
    if not (0.0 <= alpha < math.pi / 2):
        raise DomainError(f"alpha must lie in [0, pi/2), got {alpha}")
    d = latent["b"].shape[0]
    b = gram(latent["b"]) + SECTOR_RIDGE * np.eye(d)
    k0 = latent["k"]
    k0 = (k0 + k0.conj().T) / 2
    radius = float(np.abs(hermitian_eig(k0).eigenvalues).max())
    u = float(np.clip(latent["u"], 0.0, 1.0))
    if alpha == 0.0 or radius == 0.0:
        k = np.zeros((d, d), dtype=np.complex128)
    else:
        k = k0 * (u * math.tan(alpha) / radius)
    return build_sector_from(b, k)


def rand_sector(d: int, alpha: float, seed, index: int = 0) -> np.ndarray:
    if not (0.0 <= alpha < math.pi / 2):
        raise DomainError(f"alpha must lie in [0, pi/2), got {alpha}")
    rng = _rng(seed, SECTOR, d, index)
    return build_sector(sample_sector_latent(rng, d), alpha)


def rand_sector_block(cfg: GeneratorConfig) -> BlockMatrix:
    d = cfg.m * cfg.n
    rng = stream(cfg.seed, SECTOR, d, cfg.index)
    return BlockMatrix(cfg.m, cfg.n, build_sector(sample_sector_latent(rng, d), cfg.alpha or 0.0))


# -- quadruples for the four-determinant lemma ----------------------------------

def sample_quadruple_latent(rng, ell):
    return {key: complex_gaussian(rng, (ell, ell)) for key in ("w", "z", "s", "u")}


def build_quadruple(w, z, s, u):
    """``X = W + S`` and ``Y = clip(Z - S) + U`` from PSD ``W, Z, S, U``."""
    x = w + s
    y = psd_clip(z - s) + u
    return x, y, w, z


def quadruple_preconditions(x, y, w, z, tol_scale=1e-10):
    """Named Loewner verdicts for the lemma's hypotheses, PSD-ness included."""
    checks = {f"{name} >= 0": is_psd(mat, tol_scale) for name, mat in zip("XYWZ", (x, y, w, z))}
    checks["X+Y >= W+Z"] = loewner_ge(x + y, w + z, tol_scale)
    checks["X >= W"] = loewner_ge(x, w, tol_scale)
    checks["X >= Z"] = loewner_ge(x, z, tol_scale)
    return checks


def build_quadruple_latent(latent, z_scale=1.0):
    """Quadruple from latents, or ``None`` when ``X >= Z`` fails."""
    w, z, s, u = (gram(latent[k]) for k in ("w", "z", "s", "u"))
    z = z * z_scale
    if not loewner_ge(w + s, z):
        return None
    return build_quadruple(w, z, s, u)


def sample_valid_quadruple_latent(rng, ell):
    """Latents whose quadruple satisfies ``X >= Z``, with the ``Z`` shrink factor used.

    Draws are rejected until ``X >= Z``; after each block of 1000 failures
    ``Z`` is halved.
    """
    z_scale = 1.0
    for _ in range(QUADRUPLE_ROUNDS):
        for _ in range(QUADRUPLE_ATTEMPTS):
            latent = sample_quadruple_latent(rng, ell)
            if build_quadruple_latent(latent, z_scale) is not None:
                latent["z_scale"] = np.array(z_scale)
                return latent
        z_scale *= 0.5
    raise GenerationError(f"no quadruple with X >= Z after {QUADRUPLE_ROUNDS} rounds")


def rand_lemma_quadruple(ell: int, seed, index: int = 0):
    """Random ``(X, Y, W, Z)`` satisfying every hypothesis of the lemma, re-verified."""
    if ell < 1:
        raise DomainError("ell must be >= 1")
    rng = _rng(seed, QUADRUPLE, ell, index)
    latent = sample_valid_quadruple_latent(rng, ell)
    quad = build_quadruple_latent(latent, float(latent["z_scale"]))
    failed = [k for k, v in quadruple_preconditions(*quad).items() if not v]
    if failed:
        raise GenerationError(f"constructed quadruple fails {failed}")
    return quad


def sample_triple_latent(rng, ell):
    return {key: complex_gaussian(rng, (ell, ell)) for key in ("a", "b", "c")}


def rand_psd_triple(ell: int, seed, index: int = 0):
    rng = _rng(seed, TRIPLE, ell, index)
    lat = sample_triple_latent(rng, ell)
    return tuple(gram(lat[k]) for k in ("a", "b", "c"))


def rand_matrix(d: int, seed, index: int = 0) -> np.ndarray:
    """Square complex Ginibre matrix."""
    return complex_gaussian(_rng(seed, MATRIX, d, index), (d, d))
