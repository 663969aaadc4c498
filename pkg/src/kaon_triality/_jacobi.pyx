# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi kernel for small complex Hermitian matrices."""
import numpy as np
from libc.math cimport sqrt, fabs, hypot, copysign


cdef int _jacobi(double[:, ::1] ar, double[:, ::1] ai, double[::1] d,
                 double[:, ::1] vr, double[:, ::1] vi,
                 double tol, int max_sweeps) noexcept nogil:
    cdef Py_ssize_t n = ar.shape[0]
    cdef Py_ssize_t i, p, q
    cdef int sweep
    cdef double off, r, wr, wi, theta, t, c, s
    cdef double xr, xi, yr, yi, nr, ni, mr, mi

    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for p in range(i + 1, n):
                off += ar[i, p] * ar[i, p] + ai[i, p] * ai[i, p]
        if sqrt(2.0 * off) <= tol:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = hypot(ar[p, q], ai[p, q])
                if r == 0.0:
                    continue
                # w = a_pq / |a_pq|; rotations below use conj(w)
                wr = ar[p, q] / r
                wi = ai[p, q] / r
                theta = (d[q] - d[p]) / (2.0 * r)
                t = copysign(1.0, theta) / (fabs(theta) + hypot(theta, 1.0))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                d[p] -= t * r
                d[q] += t * r
                ar[p, q] = 0.0
                ai[p, q] = 0.0
                ar[q, p] = 0.0
                ai[q, p] = 0.0
                for i in range(n):
                    if i == p or i == q:
                        continue
                    xr = ar[i, p]
                    xi = ai[i, p]
                    # y = conj(w) * a_iq
                    yr = wr * ar[i, q] + wi * ai[i, q]
                    yi = wr * ai[i, q] - wi * ar[i, q]
                    nr = c * xr - s * yr
                    ni = c * xi - s * yi
                    mr = s * xr + c * yr
                    mi = s * xi + c * yi
                    ar[i, p] = nr
                    ai[i, p] = ni
                    ar[i, q] = mr
                    ai[i, q] = mi
                    ar[p, i] = nr
                    ai[p, i] = -ni
                    ar[q, i] = mr
                    ai[q, i] = -mi
                for i in range(n):
                    xr = vr[i, p]
                    xi = vi[i, p]
                    yr = wr * vr[i, q] + wi * vi[i, q]
                    yi = wr * vi[i, q] - wi * vr[i, q]
                    vr[i, p] = c * xr - s * yr
                    vi[i, p] = c * xi - s * yi
                    vr[i, q] = s * xr + c * yr
                    vi[i, q] = s * xi + c * yi
    return -1


def jacobi_hermitian(const double[:, :] re, const double[:, :] im, double tol, int max_sweeps):
    """Diagonalise the Hermitian matrix ``re + 1j*im``.

    Same contract as the pure-Python fallback: returns
    ``(eigenvalues, vec_re, vec_im, sweeps)`` with unsorted eigenvalues and
    ``sweeps == -1`` on non-convergence. The GIL is released while rotating.
    """
    cdef Py_ssize_t n = re.shape[0]
    cdef Py_ssize_t i, j
    buf = np.empty((5, n, n), dtype=np.float64)
    cdef double[:, :, ::1] b = buf
    cdef double[:, ::1] ar = b[0]
    cdef double[:, ::1] ai = b[1]
    cdef double[:, ::1] vr = b[2]
    cdef double[:, ::1] vi = b[3]
    cdef double[::1] d = b[4, 0]
    cdef int sweeps
    with nogil:
        for i in range(n):
            for j in range(n):
                ar[i, j] = re[i, j]
                ai[i, j] = im[i, j]
                vr[i, j] = 1.0 if i == j else 0.0
                vi[i, j] = 0.0
            d[i] = re[i, i]
        sweeps = _jacobi(ar, ai, d, vr, vi, tol, max_sweeps)
    return buf[4, 0].copy(), buf[2], buf[3], sweeps
