"""Pure-Python cyclic Jacobi kernel for small complex Hermitian matrices.

Used when the compiled ``_jacobi`` extension is not available. Mirrors the
extension rotation for rotation, so both backends agree to roundoff.
"""
import math


def jacobi_hermitian(re, im, tol, max_sweeps):
    """Diagonalise the Hermitian matrix ``re + 1j*im``.

    ``re`` and ``im`` are row-major nested sequences. Returns
    ``(eigenvalues, vec_re, vec_im, sweeps)`` with eigenvectors as columns,
    unsorted. ``sweeps`` is -1 if the off-diagonal norm did not drop below
    ``tol`` within ``max_sweeps`` sweeps.
    """
    n = len(re)
    a = [[complex(re[i][j], im[i][j]) for j in range(n)] for i in range(n)]
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    d = [a[i][i].real for i in range(n)]

    sweeps = -1
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                z = a[i][j]
                off += z.real * z.real + z.imag * z.imag
        if math.sqrt(2.0 * off) <= tol:
            sweeps = sweep
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                r = abs(apq)
                if r == 0.0:
                    continue
                w = apq / r
                wc = w.conjugate()
                theta = (d[q] - d[p]) / (2.0 * r)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                d[p] -= t * r
                d[q] += t * r
                a[p][q] = 0j
                a[q][p] = 0j
                for i in range(n):
                    if i != p and i != q:
                        aip = a[i][p]
                        aiq = a[i][q]
                        nip = c * aip - s * wc * aiq
                        niq = s * aip + c * wc * aiq
                        a[i][p] = nip
                        a[i][q] = niq
                        a[p][i] = nip.conjugate()
                        a[q][i] = niq.conjugate()
                for i in range(n):
                    vip = v[i][p]
                    viq = v[i][q]
                    v[i][p] = c * vip - s * wc * viq
                    v[i][q] = s * vip + c * wc * viq

    vec_re = [[v[i][j].real for j in range(n)] for i in range(n)]
    vec_im = [[v[i][j].imag for j in range(n)] for i in range(n)]
    return d, vec_re, vec_im, sweeps
