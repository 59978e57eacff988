"""Pure-Python (numpy) versions of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable, or when
``PARTRACE_PURE_PYTHON=1`` is set. The algorithms and sweep order are
identical to the compiled versions.
"""
import math

import numpy as np

PIVOT_FLOOR = 1e-300


def _rotation(app, aqq, r):
    # Rutishauser's stable tangent for the real symmetric 2x2 problem.
    theta = (aqq - app) / (2.0 * r)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    return t, c, t * c


def jacobi_eigh(a, threshold, max_sweeps):
    """Cyclic complex Jacobi on a Hermitian matrix, in place.

    Returns ``(diag, vectors, sweeps, converged)``. ``diag`` is unsorted.
    ``threshold`` is the absolute bound on off-diagonal moduli.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    sweeps = 0
    converged = False
    while True:
        off = 0.0
        for p in range(n - 1):
            row_max = np.abs(a[p, p + 1:]).max()
            if row_max > off:
                off = row_max
        if off <= threshold:
            converged = True
            break
        if sweeps >= max_sweeps:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                t, c, s = _rotation(app, aqq, r)
                cph = phase.conjugate()

                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - (s * cph) * colq
                a[:, q] = s * colp + (c * cph) * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - (s * phase) * rowq
                a[q, :] = s * rowp + (c * phase) * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - (s * cph) * vq
                v[:, q] = s * vp + (c * cph) * vq
    return a.diagonal().real.copy(), v, sweeps, converged


def lu_det(a):
    """Determinant by LU with partial pivoting on maximal modulus, in place."""
    n = a.shape[0]
    det = 1.0 + 0.0j
    for k in range(n):
        col = np.abs(a[k:, k])
        p = k + int(np.argmax(col))
        if col[p - k] < PIVOT_FLOOR:
            return 0.0 + 0.0j
        if p != k:
            a[[k, p], :] = a[[p, k], :]
            det = -det
        pivot = a[k, k]
        det *= pivot
        if k + 1 < n:
            a[k + 1:, k] /= pivot
            a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return complex(det)
