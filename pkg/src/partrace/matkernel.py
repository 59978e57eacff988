"""Dense complex linear algebra on ``complex128`` numpy arrays.

The eigensolver and determinant run on a compiled extension when it is
importable and fall back to an equivalent numpy implementation otherwise.
Set ``PARTRACE_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from partrace.errors import DimensionError, DomainError, NumericError

if os.environ.get("PARTRACE_PURE_PYTHON", "") not in ("", "0"):
    from partrace import _pykernels as _kernels

    BACKEND = "python"
else:
    try:
        from partrace import _ckernels as _kernels

        BACKEND = "cython"
    except ImportError:  # extension not built
        from partrace import _pykernels as _kernels

        BACKEND = "python"

EIG_OFFDIAG_REL = 1e-13
EIG_MAX_SWEEPS = 40
HERMITIAN_REL = 1e-12
SQRT_CLIP_REL = 1e-10
SQRT_REJECT_REL = 1e-6


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a) -> np.ndarray:
    """Validate and convert to a 2-D finite ``complex128`` array (a copy)."""
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("matrix has non-finite entries")
    return arr


def _square(a, name="matrix"):
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a


def fro_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a), "fro"))


def matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return np.asarray(a, dtype=np.complex128).conj().T.copy()


def frobenius_inner(a, b) -> complex:
    """``tr(a* b)``."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def lu_det(a) -> complex:
    """Determinant via LU with partial pivoting.

    Returns exactly zero when a pivot column is numerically empty (all
    moduli below 1e-300).
    """
    a = _square(a)
    work = np.ascontiguousarray(a, dtype=np.complex128).copy()
    return _kernels.lu_det(work)


def hermitian_eig(a) -> Spectrum:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi.

    The input is symmetrized as ``(a + a*)/2`` first. Sweeps visit the upper
    triangle in row-major order, so results are reproducible.
    """
    a = _square(a)
    scale = fro_norm(a)
    if fro_norm(a - a.conj().T) > HERMITIAN_REL * max(1.0, scale):
        raise DomainError("matrix is not Hermitian")
    work = np.ascontiguousarray(0.5 * (a + a.conj().T))
    n = work.shape[0]
    if n == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    w, v, _, converged = _kernels.jacobi_eigh(work, EIG_OFFDIAG_REL * scale, EIG_MAX_SWEEPS)
    if not converged:
        residual = float(np.abs(np.triu(work, 1)).max())
        raise NumericError(f"Jacobi did not converge in {EIG_MAX_SWEEPS} sweeps", residual)
    order = np.argsort(-w, kind="stable")
    return Spectrum(np.asarray(w)[order], np.asarray(v)[:, order])


def eigvalsh(a) -> np.ndarray:
    return hermitian_eig(a).eigenvalues


def psd_sqrt(a) -> np.ndarray:
    """Positive square root; tiny negative eigenvalues are clipped to zero."""
    spec = hermitian_eig(a)
    w = spec.eigenvalues
    if w.size == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    bound = max(1.0, float(w[0]))
    if w[-1] < -SQRT_REJECT_REL * bound:
        raise DomainError(f"matrix is indefinite (lambda_min={w[-1]:.3e})")
    root = np.sqrt(np.clip(w, 0.0, None))
    v = spec.eigenvectors
    return (v * root) @ v.conj().T


def singular_values(a) -> np.ndarray:
    """Singular values, descending, as eigenvalues of ``(a* a)^(1/2)``.

    Hermitian input takes ``|eig(a)|`` directly: squaring first would turn
    an eigenvalue of 1e-16 into noise of order sqrt(eps).
    """
    a = _square(a)
    if fro_norm(a - a.conj().T) <= HERMITIAN_REL * max(1.0, fro_norm(a)):
        return np.sort(np.abs(eigvalsh(a)))[::-1]
    gram = a.conj().T @ a
    gram = 0.5 * (gram + gram.conj().T)
    return np.sqrt(np.clip(eigvalsh(gram), 0.0, None))


def schatten_norm(a, q) -> float:
    q = float(q)
    if not q >= 1.0:
        raise DomainError(f"Schatten index must be >= 1 or inf, got {q}")
    s = singular_values(a)
    if s.size == 0:
        return 0.0
    if math.isinf(q):
        return float(s[0])
    if q == 1.0:
        return float(s.sum())
    top = s[0]
    if top == 0.0:
        return 0.0
    return float(top * np.sum((s / top) ** q) ** (1.0 / q))


def kron(a, b) -> np.ndarray:
    """Tensor product: block ``(i, j)`` is ``a[i, j] * b``."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    r1, c1 = a.shape
    r2, c2 = b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(r1 * r2, c1 * c2)
