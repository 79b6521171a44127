"""
SPD matrices
------------

Riemannian machinery for symmetric / Hermitian positive definite matrices
under the Log-Euclidean metric: matrix logarithm and exponential, the
(squared) Log-Euclidean distance, the isometric tangent-space vectorization
and the Log-Euclidean mean.

Notes
-----
* One code path serves both real-symmetric (graph Laplacians) and complex
  Hermitian (channel) matrices
* Eigen-decompositions always use numpy.linalg.eigh, which returns a real
  spectrum for Hermitian input
"""

from functools import cached_property

import numpy as np

HERMITIAN_TOL = 1e-10


class SpdMatrix:
    """
    Symmetric (Hermitian) positive definite matrix

    Attributes
    ----------
    entries : ndarray (float or complex)
        Read-only matrix, shape (dim, dim)

    dim : int

    eigenvalues : ndarray (float)
        Ascending, all strictly positive

    eigenvectors : ndarray
        Unitary matrix of eigenvectors (columns)
    """

    def __init__(self, entries):
        """
        SpdMatrix class constructor

        Parameters
        ----------
        entries : array_like
            Square Hermitian matrix. Asymmetry up to a relative tolerance of
            1e-10 is removed by symmetrization.

        Notes
        -----
        Raises ValueError naming the smallest eigenvalue when the matrix is
        not positive definite
        """
        entries = _as_hermitian(entries)
        eigenvalues, eigenvectors = np.linalg.eigh(entries)

        if not eigenvalues[0] > 0:
            raise ValueError(
                f"Matrix is not positive definite: smallest eigenvalue {eigenvalues[0]!r}"
            )

        self.entries = entries
        self.dim = entries.shape[0]
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors
        for array in (self.entries, self.eigenvalues, self.eigenvectors):
            array.flags.writeable = False

    @property
    def is_complex(self):
        return np.iscomplexobj(self.entries)

    @cached_property
    def log(self):
        """Principal matrix logarithm (cached)"""
        U = self.eigenvectors
        return LogMatrix((U * np.log(self.eigenvalues)) @ U.conj().T)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self):
        return (
            f"SpdMatrix(dim={self.dim}, eigenvalues=[{self.eigenvalues[0]:.4g}, ..., "
            f"{self.eigenvalues[-1]:.4g}])"
        )


class LogMatrix:
    """
    Principal logarithm of an SpdMatrix: Hermitian, not necessarily positive
    definite

    Attributes
    ----------
    entries : ndarray (float or complex)

    dim : int
    """

    def __init__(self, entries):
        self.entries = _as_hermitian(entries)
        self.dim = self.entries.shape[0]
        self.entries.flags.writeable = False

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self):
        return f"LogMatrix(dim={self.dim})"


def as_spd(matrix):
    """Return matrix as an SpdMatrix (validating array input)"""
    if isinstance(matrix, SpdMatrix):
        return matrix
    return SpdMatrix(matrix)


def matrix_log(matrix):
    """
    Principal matrix logarithm

    Parameters
    ----------
    matrix : SpdMatrix or array_like

    Returns
    -------
    log : LogMatrix
        U diag(ln lambda) U^H for the eigen-decomposition U diag(lambda) U^H
    """
    return as_spd(matrix).log


def matrix_exp(log):
    """
    Matrix exponential of a Hermitian matrix, the inverse of matrix_log

    Parameters
    ----------
    log : LogMatrix or array_like

    Returns
    -------
    matrix : SpdMatrix
    """
    entries = np.asarray(log) if isinstance(log, LogMatrix) else _as_hermitian(log)
    eigenvalues, U = np.linalg.eigh(entries)
    return SpdMatrix((U * np.exp(eigenvalues)) @ U.conj().T)


def sqrtm(matrix):
    """
    Hermitian square root Q^(1/2) = U diag(sqrt(lambda)) U^H

    Returns
    -------
    root : ndarray
    """
    matrix = as_spd(matrix)
    U = matrix.eigenvectors
    return (U * np.sqrt(matrix.eigenvalues)) @ U.conj().T


def lem_distance(s1, s2):
    """
    Log-Euclidean distance D(S1, S2) = ||log(S1) - log(S2)||_F^2

    Parameters
    ----------
    s1, s2 : SpdMatrix or array_like

    Returns
    -------
    distance : float
        Non-negative and symmetric. D is the squared Frobenius norm, so the
        triangle inequality holds for sqrt(D), not for D itself.
    """
    s1 = as_spd(s1)
    s2 = as_spd(s2)
    if s1.dim != s2.dim:
        raise ValueError(f"Dimension mismatch: {s1.dim} vs {s2.dim}")

    difference = s1.log.entries - s2.log.entries
    return float(np.sum(np.abs(difference) ** 2))


def log_vectorize(log):
    """
    Isometric vectorization of a Hermitian matrix into the tangent space

    Parameters
    ----------
    log : LogMatrix or array_like

    Returns
    -------
    vector : ndarray (float)
        Real symmetric input: the upper triangle (row major), off-diagonal
        entries scaled by sqrt(2), length dim (dim + 1) / 2. Complex
        Hermitian input: the real diagonal, then the real and imaginary parts
        of the strict upper triangle scaled by sqrt(2), length dim^2. In both
        cases the Euclidean norm equals the Frobenius norm of the input.
    """
    entries = np.asarray(log)
    dim = entries.shape[-1]

    if not np.iscomplexobj(entries):
        rows, cols = np.triu_indices(dim)
        coeffs = np.where(rows == cols, 1.0, np.sqrt(2))
        return coeffs * entries[..., rows, cols]

    rows, cols = np.triu_indices(dim, k=1)
    upper = entries[..., rows, cols]
    return np.concatenate(
        [
            np.real(np.diagonal(entries, axis1=-2, axis2=-1)),
            np.sqrt(2) * upper.real,
            np.sqrt(2) * upper.imag,
        ],
        axis=-1,
    )


def unvectorize(vector, dim, hermitian=False):
    """
    Inverse of log_vectorize

    Returns
    -------
    log : LogMatrix
    """
    vector = np.asarray(vector, dtype=float)

    if not hermitian:
        entries = np.zeros((dim, dim))
        rows, cols = np.triu_indices(dim)
        coeffs = np.where(rows == cols, 1.0, 1 / np.sqrt(2))
        entries[rows, cols] = coeffs * vector
        entries[cols, rows] = entries[rows, cols]
        return LogMatrix(entries)

    entries = np.diag(vector[:dim]).astype(complex)
    rows, cols = np.triu_indices(dim, k=1)
    n_upper = len(rows)
    upper = (vector[dim : dim + n_upper] + 1j * vector[dim + n_upper :]) / np.sqrt(2)
    entries[rows, cols] = upper
    entries[cols, rows] = upper.conj()
    return LogMatrix(entries)


def log_euclidean_mean(matrices):
    """
    Log-Euclidean mean exp(mean_i log(S_i))

    Parameters
    ----------
    matrices : sequence of SpdMatrix

    Returns
    -------
    mean : SpdMatrix
    """
    matrices = [as_spd(matrix) for matrix in matrices]
    if not matrices:
        raise ValueError("The Log-Euclidean mean of an empty set is undefined")

    dims = {matrix.dim for matrix in matrices}
    if len(dims) > 1:
        raise ValueError(f"Dimension mismatch: {sorted(dims)}")

    mean_log = np.mean([matrix.log.entries for matrix in matrices], axis=0)
    return matrix_exp(mean_log)


def _as_hermitian(entries):
    """
    Check that entries form a square Hermitian matrix (relative tolerance
    1e-10) and return its exactly Hermitian part
    """
    entries = np.array(entries)
    if not np.iscomplexobj(entries):
        entries = entries.astype(float)

    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {entries.shape}")

    scale = max(np.max(np.abs(entries), initial=0.0), 1.0)
    asymmetry = np.max(np.abs(entries - entries.conj().T), initial=0.0)
    if asymmetry > HERMITIAN_TOL * scale:
        raise ValueError(f"Matrix is not Hermitian (asymmetry {asymmetry:.3e})")

    return (entries + entries.conj().T) / 2
