"""Dense complex linear algebra for small Hermitian matrices.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
Eigen-decompositions go through a cyclic Jacobi solver; the compiled kernel
is used when it was built, otherwise the pure-Python one.

Composite indices follow ``a * dim_b + b`` (subsystem A is the slow index).
"""
import math
from typing import NamedTuple

import numpy as np

try:
    from ._jacobi import jacobi_hermitian as _jacobi_compiled
except ImportError:  # pragma: no cover - depends on the build
    _jacobi_compiled = None
from ._jacobi_py import jacobi_hermitian as _jacobi_python

BACKEND = "compiled" if _jacobi_compiled is not None else "python"

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
OFFDIAG_TOL = 1e-14
MAX_SWEEPS = 100
ROUNDOFF_ZERO = 8 * np.finfo(np.float64).eps


class LinalgError(ValueError):
    """Raised when an input violates a linear-algebra precondition."""


class ShapeError(LinalgError):
    pass


class NotHermitianError(LinalgError):
    pass


class NotPSDError(LinalgError):
    pass


class ConvergenceError(ArithmeticError):
    pass


class HermitianEigen(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def available_backends():
    names = ["python"]
    if _jacobi_compiled is not None:
        names.insert(0, "compiled")
    return names


def _kernel(backend):
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if _jacobi_compiled is None:
            raise LinalgError("compiled Jacobi kernel is not built")
        return _jacobi_compiled
    if backend == "python":
        return _jacobi_python
    raise LinalgError(f"unknown backend {backend!r}")


def as_matrix(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise LinalgError("matrix has non-finite entries")
    return m


def _square(m):
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


def matmul(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a):
    return as_matrix(a).conj().T


def add(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"cannot add {a.shape} and {b.shape}")
    return a + b


def scale(a, factor):
    return complex(factor) * as_matrix(a)


def _herm_err(m):
    return float(np.abs(m - m.conj().T).max()) if m.size else 0.0


def hermiticity_error(m):
    return _herm_err(_square(m))


def hermitian_eigen(m, *, backend=None):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues are returned in ascending order; eigenvectors are the columns
    of a unitary matrix. Sweeping stops once the off-diagonal Frobenius norm
    falls below ``1e-14`` times the Frobenius norm of ``m``.

    Raises:
        ShapeError: ``m`` is not square.
        NotHermitianError: ``max|m - m^H|`` exceeds ``1e-10``.
        ConvergenceError: not diagonal after 100 sweeps.
    """
    m = _square(m)
    kernel = _kernel(backend)
    err = _herm_err(m)
    if err > HERMITIAN_TOL:
        raise NotHermitianError(f"matrix is not Hermitian (max |M - M^H| = {err:.3e})")
    if err:
        m = 0.5 * (m + m.conj().T)
    norm = math.sqrt(float(np.vdot(m, m).real))
    tol = OFFDIAG_TOL * norm if norm > 0.0 else OFFDIAG_TOL
    w, vr, vi, sweeps = kernel(
        np.ascontiguousarray(m.real), np.ascontiguousarray(m.imag), tol, MAX_SWEEPS
    )
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    w = np.asarray(w, dtype=np.float64)
    v = np.asarray(vr, dtype=np.float64) + 1j * np.asarray(vi, dtype=np.float64)
    order = np.argsort(w, kind="stable")
    return HermitianEigen(w[order], v[:, order])


def _clamped_eigen(m, backend=None):
    w, v = hermitian_eigen(m, backend=backend)
    if w.size and w[0] < -PSD_TOL:
        raise NotPSDError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    if w.size:
        # eigenvalues at roundoff level are zero; sqrt would amplify them to ~1e-8
        w[w <= ROUNDOFF_ZERO * w.size * w[-1]] = 0.0
    return w, v


def psd_sqrt(m, *, backend=None):
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-1e-10, 0)`` are treated as roundoff and clamped to 0,
    as are positive ones within a few ulps of zero relative to the largest.
    """
    w, v = _clamped_eigen(m, backend)
    return (v * np.sqrt(w)) @ v.conj().T


def trace_norm(m, *, backend=None):
    """Sum of singular values; uses the eigenvalues when ``m`` is Hermitian."""
    m = _square(m)
    if _herm_err(m) <= HERMITIAN_TOL:
        return float(np.sum(np.abs(hermitian_eigen(m, backend=backend).eigenvalues)))
    mm = m.conj().T @ m
    w = hermitian_eigen(mm, backend=backend).eigenvalues
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))))


def partial_trace(rho, dim_a, dim_b, keep="A"):
    """Trace out one factor of a bipartite operator on ``C^dim_a (x) C^dim_b``."""
    rho = _square(rho)
    if dim_a < 1 or dim_b < 1 or rho.shape[0] != dim_a * dim_b:
        raise ShapeError(
            f"operator of shape {rho.shape} does not match dims {dim_a} x {dim_b}"
        )
    t = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("ibjb->ij", t)
    if keep == "B":
        return np.einsum("aiaj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def von_neumann_entropy(rho, *, base=None, backend=None):
    """``-Tr[rho log rho]`` in nats, or in the given logarithm base."""
    w, _ = _clamped_eigen(rho, backend)
    w = w[w > 0.0]
    # an eigenvalue of 1 + ulp would give a tiny negative entropy
    s = max(float(-np.sum(w * np.log(w))), 0.0)
    if base is not None:
        s /= np.log(base)
    return s


def fidelity(rho, sigma, *, backend=None):
    """Uhlmann fidelity ``Tr sqrt(sqrt(rho) sigma sqrt(rho))``.

    Applied as-is to subnormalised operators, no renormalisation.
    """
    r = psd_sqrt(rho, backend=backend)
    inner = r @ as_matrix(sigma) @ r
    inner = 0.5 * (inner + inner.conj().T)
    w, _ = _clamped_eigen(inner, backend)
    return float(np.sum(np.sqrt(w)))


def trace_distance(rho, sigma, *, backend=None):
    return 0.5 * trace_norm(add(rho, -as_matrix(sigma)), backend=backend)
