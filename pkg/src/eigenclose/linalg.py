"""Dense symmetric linear algebra kernel.

Everything downstream (counting functions, pencil bounds, fixed-point
solves) reduces to a handful of operations on real symmetric matrices:
a pivot-checked Cholesky factorization, the symmetric-definite
generalized eigenvalue problem, numerical kernel extraction and the
inverse square root of a Gram matrix.  All tolerances are relative to
the matrix scale so the routines behave identically under rescaling.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NegativeEigenvalueError, NotPositiveDefiniteError

#: default relative tolerance used for rank / definiteness decisions
DEFAULT_TOL = 1e-10


def _as_float_matrix(a):
    """Coerce to a floating square matrix, keeping extended precision."""
    a = np.asarray(a)
    if not np.issubdtype(a.dtype, np.floating):
        a = a.astype(float)
    return a


def symmetrize(a):
    """Return the exactly symmetric part ``(a + a.T) / 2`` of a square array.

    Floating-point addition is commutative, so the result satisfies
    ``b[i, j] == b[j, i]`` bit for bit.  The dtype (double or extended)
    is preserved.
    """
    a = _as_float_matrix(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return 0.5 * (a + a.T)


def check_symmetric(a, name="matrix"):
    """Validate that ``a`` is square and symmetric as stored."""
    a = _as_float_matrix(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        worst = np.max(np.abs(a - a.T))
        raise ValueError(
            f"{name} is not symmetric as stored (max asymmetry {worst:.3e}); "
            f"pass it through symmetrize() first"
        )
    return a


@dataclass
class EigenPairs:
    """Eigenvalues (ascending) with matching eigenvector columns.

    ``vectors[:, i]`` belongs to ``values[i]`` and the columns are
    orthonormal in the inner product the solve was performed in.
    """

    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.vectors = np.asarray(self.vectors, dtype=float)
        if self.vectors.shape[1] != self.values.shape[0]:
            raise ValueError("values / vectors size mismatch")
        if np.any(np.diff(self.values) < 0):
            raise ValueError("eigenvalues must be ascending")


def cholesky_spd(m, tol=DEFAULT_TOL):
    """Lower Cholesky factor of a symmetric positive definite matrix.

    Parameters
    ----------
    m : (n, n) array_like
        Symmetric matrix.
    tol : float
        A pivot is accepted only if it exceeds ``tol`` times the largest
        diagonal entry of ``m``.

    Returns
    -------
    L : (n, n) ndarray
        Lower triangular with ``L @ L.T == m`` up to roundoff.

    Raises
    ------
    NotPositiveDefiniteError
        If a pivot falls at or below the relative threshold.  The error
        carries the pivot index and value.
    """
    a = check_symmetric(m, "cholesky_spd input")
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    threshold = tol * max(np.max(np.diag(a)), 0.0)
    L = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - L[j, :j] @ L[j, :j]
        if pivot <= threshold:
            raise NotPositiveDefiniteError(j, pivot)
        L[j, j] = np.sqrt(pivot)
        if j + 1 < n:
            L[j + 1 :, j] = (a[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


def sym_generalized_eig(a, b, tol=DEFAULT_TOL):
    """Solve ``a x = lam b x`` with symmetric ``a`` and SPD ``b``.

    Eigenvalues come back ascending and the eigenvector columns are
    b-orthonormal: ``vectors.T @ b @ vectors == I``.

    Raises
    ------
    NotPositiveDefiniteError
        If ``b`` fails the pivot-checked Cholesky test.
    """
    a = check_symmetric(a, "pencil matrix a")
    b = check_symmetric(b, "pencil matrix b")
    if a.shape != b.shape:
        raise ValueError("pencil matrices must have identical shape")
    # definiteness gate with a meaningful error (double is enough here)
    cholesky_spd(b.astype(float, copy=False), tol)
    if a.shape[0] == 0:
        return EigenPairs(np.zeros(0), np.zeros((0, 0)))
    # LAPACK works in double; extended-precision input is rounded here
    values, vectors = scipy.linalg.eigh(
        a.astype(float, copy=False), b.astype(float, copy=False)
    )
    return EigenPairs(values, vectors)


def kernel_basis(m, tol=DEFAULT_TOL):
    """Numerical kernel of a positive semidefinite symmetric matrix.

    Parameters
    ----------
    m : (n, n) array_like
        Symmetric matrix expected to be PSD up to roundoff.
    tol : float
        Eigenvalues at or below ``tol * max(1, ||m||_2)`` count as zero.

    Returns
    -------
    k : int
        Kernel dimension.
    basis : (n, k) ndarray
        Orthonormal kernel basis (Euclidean inner product).

    Raises
    ------
    NegativeEigenvalueError
        If the smallest eigenvalue lies below ``-tol * ||m||_2``; a PSD
        matrix cannot do that except through corrupted input.
    """
    a = check_symmetric(m, "kernel_basis input")
    if a.shape[0] == 0:
        return 0, np.zeros((0, 0))
    values, vectors = np.linalg.eigh(a.astype(float, copy=False))
    norm = max(abs(values[0]), abs(values[-1]))
    if values[0] < -tol * norm:
        raise NegativeEigenvalueError(values[0], tol * norm)
    threshold = tol * max(1.0, norm)
    k = int(np.count_nonzero(values <= threshold))
    return k, vectors[:, :k]


def kernel_split(m, tol=DEFAULT_TOL):
    """Kernel basis plus an orthonormal basis of its complement.

    Same classification rule as :func:`kernel_basis`; the second return
    value spans the orthogonal complement of the numerical kernel and is
    handy for deflation.
    """
    a = check_symmetric(m, "kernel_split input")
    if a.shape[0] == 0:
        return np.zeros((0, 0)), np.zeros((0, 0))
    values, vectors = np.linalg.eigh(a.astype(float, copy=False))
    norm = max(abs(values[0]), abs(values[-1]))
    if values[0] < -tol * norm:
        raise NegativeEigenvalueError(values[0], tol * norm)
    threshold = tol * max(1.0, norm)
    k = int(np.count_nonzero(values <= threshold))
    return vectors[:, :k], vectors[:, k:]


def inv_sqrt(g, tol=DEFAULT_TOL):
    """Inverse square root of a symmetric positive definite matrix.

    Computed from the eigendecomposition, so the result is symmetric and
    satisfies ``inv_sqrt(g) @ g @ inv_sqrt(g) == I`` up to roundoff.

    Raises
    ------
    NotPositiveDefiniteError
        If the smallest eigenvalue is at or below ``tol * ||g||_2``.
    """
    a = check_symmetric(g, "inv_sqrt input")
    if a.shape[0] == 0:
        return np.zeros((0, 0))
    values, vectors = np.linalg.eigh(a.astype(float, copy=False))
    norm = max(abs(values[0]), abs(values[-1]))
    if values[0] <= tol * norm:
        raise NotPositiveDefiniteError(int(np.argmin(values)), values[0])
    return symmetrize((vectors / np.sqrt(values)) @ vectors.T)
