"""Order and geometric predicates: PSD, Loewner order, PPT, sectors."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from partrace.blockops import BlockMatrix, partial_transpose
from partrace.errors import DimensionError, DomainError
from partrace.matkernel import eigvalsh, fro_norm, hermitian_eig

DEFAULT_TOL = 1e-10
HERMITIAN_REL = 1e-10
# Real part counts as positive definite only above this fraction of its top eigenvalue.
RE_PD_REL = 1e-12


@dataclass(frozen=True)
class SectorParams:
    """Half-opening angle of the sector ``{r e^{i phi}: r > 0, |phi| <= alpha}``."""

    alpha: float
    tan_alpha: float = float("nan")

    def __post_init__(self):
        if not (0.0 <= self.alpha < math.pi / 2):
            raise DomainError(f"alpha must lie in [0, pi/2), got {self.alpha}")
        object.__setattr__(self, "tan_alpha", math.tan(self.alpha))


@dataclass(frozen=True)
class PsdVerdict:
    lambda_min: float
    lambda_max: float
    is_psd: bool
    tolerance_used: float

    def __bool__(self):
        return self.is_psd


def _hermitian(a, rel=HERMITIAN_REL):
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got {a.shape}")
    if fro_norm(a - a.conj().T) > rel * max(1.0, fro_norm(a)):
        raise DomainError("matrix is not Hermitian")
    return 0.5 * (a + a.conj().T)


def cartesian_parts(a) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian ``(re, im)`` with ``a = re + i*im``."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got {a.shape}")
    ah = a.conj().T
    return 0.5 * (a + ah), -0.5j * (a - ah)


def _verdict(w, tol_scale, scale=None):
    if w.size == 0:
        return PsdVerdict(0.0, 0.0, True, tol_scale)
    lmin, lmax = float(w[-1]), float(w[0])
    tol = tol_scale * (max(1.0, lmax) if scale is None else scale)
    return PsdVerdict(lmin, lmax, lmin >= -tol, tol)


def is_psd(a, tol_scale: float = DEFAULT_TOL) -> PsdVerdict:
    """PSD test with tolerance ``tol_scale * max(1, lambda_max)``."""
    return _verdict(eigvalsh(_hermitian(a)), tol_scale)


def loewner_ge(a, b, tol_scale: float = DEFAULT_TOL) -> PsdVerdict:
    """Decide ``a >= b`` with tolerance scaled by ``max(1, |a|_F, |b|_F)``."""
    a = _hermitian(a)
    b = _hermitian(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    scale = max(1.0, fro_norm(a), fro_norm(b))
    return _verdict(eigvalsh(a - b), tol_scale, scale)


def is_ppt(a: BlockMatrix, tol_scale: float = DEFAULT_TOL) -> tuple[PsdVerdict, PsdVerdict]:
    """PSD verdicts for ``a`` and its partial transpose; PPT iff both hold."""
    return is_psd(a.data, tol_scale), is_psd(partial_transpose(a).data, tol_scale)


def sector_margin(a) -> tuple[float, bool]:
    """Smallest ``alpha`` with ``W(a)`` inside the sector of half-angle ``alpha``.

    Uses ``K = Re(a)^{-1/2} Im(a) Re(a)^{-1/2}``: ``|x* Im(a) x| <= tan(alpha) x* Re(a) x``
    for all ``x`` exactly when ``max |eig K| <= tan(alpha)``. Returns
    ``(inf, False)`` when the real part is not positive definite.
    """
    re, im = cartesian_parts(a)
    spec = hermitian_eig(re)
    w = spec.eigenvalues
    if w.size == 0:
        return 0.0, True
    if not w[-1] > RE_PD_REL * max(1.0, float(w[0])):
        return math.inf, False
    v = spec.eigenvectors
    inv_root = (v * (1.0 / np.sqrt(w))) @ v.conj().T
    k = inv_root @ im @ inv_root
    kw = eigvalsh(0.5 * (k + k.conj().T))
    return math.atan(float(np.abs(kw).max())), True


def support_function(a, theta: float) -> float:
    """``lambda_min(Re(e^{-i theta} a))``, the support of ``W(a)`` in direction ``theta``."""
    rotated = np.exp(-1j * theta) * np.asarray(a, dtype=np.complex128)
    re, _ = cartesian_parts(rotated)
    w = eigvalsh(re)
    return float(w[-1]) if w.size else 0.0


def sector_margin_grid(a, points: int = 181) -> float:
    """Sector half-angle estimated from the support function alone.

    Scans ``points`` directions over ``[-pi/2, pi/2]`` and refines each sign
    change by root finding. Independent of the algebraic route in
    :func:`sector_margin`.
    """
    h = lambda t: support_function(a, t)  # noqa: E731
    if h(0.0) <= 0.0:
        return math.inf
    grid = np.linspace(0.0, math.pi / 2, (points + 1) // 2)

    def edge(sign):
        prev = 0.0
        for t in grid[1:]:
            if h(sign * t) < 0.0:
                return brentq(lambda s: h(sign * s), prev, t, xtol=1e-14, rtol=1e-14)
            prev = t
        return math.pi / 2

    upper = edge(1.0)
    lower = edge(-1.0)
    return max(math.pi / 2 - upper, math.pi / 2 - lower, 0.0)
