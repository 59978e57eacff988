# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: cyclic complex Jacobi and pivoted LU determinant."""
import numpy as np

from libc.math cimport sqrt, fabs, hypot, copysign

cdef double PIVOT_FLOOR = 1e-300


cdef inline double cabs(double complex z) nogil:
    return hypot(z.real, z.imag)


def jacobi_eigh(double complex[:, ::1] a, double threshold, int max_sweeps):
    """Cyclic complex Jacobi on a Hermitian matrix, in place.

    Returns ``(diag, vectors, sweeps, converged)`` like the Python kernel.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef double off, r, app, aqq, theta, t, c, s, m
    cdef double complex apq, phase, cph, xp, xq
    cdef int sweeps = 0
    cdef bint converged = False
    vec = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] v = vec

    with nogil:
        while True:
            off = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    m = cabs(a[p, q])
                    if m > off:
                        off = m
            if off <= threshold:
                converged = True
                break
            if sweeps >= max_sweeps:
                break
            sweeps += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    r = cabs(apq)
                    if r == 0.0:
                        continue
                    phase = apq / r
                    cph = phase.conjugate()
                    app = a[p, p].real
                    aqq = a[q, q].real
                    theta = (aqq - app) / (2.0 * r)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = copysign(1.0, theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(n):
                        xp = a[k, p]
                        xq = a[k, q]
                        a[k, p] = c * xp - (s * cph) * xq
                        a[k, q] = s * xp + (c * cph) * xq
                    for k in range(n):
                        xp = a[p, k]
                        xq = a[q, k]
                        a[p, k] = c * xp - (s * phase) * xq
                        a[q, k] = s * xp + (c * phase) * xq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = app - t * r
                    a[q, q] = aqq + t * r
                    for k in range(n):
                        xp = v[k, p]
                        xq = v[k, q]
                        v[k, p] = c * xp - (s * cph) * xq
                        v[k, q] = s * xp + (c * cph) * xq

    diag = np.empty(n, dtype=np.float64)
    for k in range(n):
        diag[k] = a[k, k].real
    return diag, vec, sweeps, converged


def lu_det(double complex[:, ::1] a):
    """Determinant by LU with partial pivoting on maximal modulus, in place."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, p
    cdef double best, m
    cdef double complex det = 1.0, pivot, f, tmp
    with nogil:
        for k in range(n):
            p = k
            best = cabs(a[k, k])
            for i in range(k + 1, n):
                m = cabs(a[i, k])
                if m > best:
                    best = m
                    p = i
            if best < PIVOT_FLOOR:
                det = 0.0
                break
            if p != k:
                for j in range(n):
                    tmp = a[k, j]
                    a[k, j] = a[p, j]
                    a[p, j] = tmp
                det = -det
            pivot = a[k, k]
            det = det * pivot
            for i in range(k + 1, n):
                f = a[i, k] / pivot
                a[i, k] = f
                for j in range(k + 1, n):
                    a[i, j] = a[i, j] - f * a[k, j]
    return complex(det.real, det.imag)
