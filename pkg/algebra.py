"""
Dense complex linear algebra on the small matrices used by the simulator.

Matrices are plain complex128 numpy arrays. Vectorization is row-major:
vec_row(A rho B) == kron(A, B.T) @ vec_row(rho).
"""
import functools
import logging

import numpy as np
import scipy.linalg

import constants
from errors import DimensionError, NumericalError, ValidationError

logger = logging.getLogger(constants.TOOL_NAME)


def as_cmatrix(matrix, square = False):
    """
    Convert to a finite 2D complex128 array, optionally requiring it to be square.
    """

    array = np.asarray(matrix, dtype = np.complex128)

    if array.ndim != 2:
        raise DimensionError(f'Expected a matrix, got an array with shape {array.shape}.')

    if square and array.shape[0] != array.shape[1]:
        raise DimensionError(f'Expected a square matrix, got shape {array.shape}.')

    if not np.all(np.isfinite(array)):
        raise ValidationError('Matrix has non-finite entries.')

    return array


def frozen(array):
    """
    Mark an array read-only so values can be shared between threads.
    """

    array.setflags(write = False)
    return array


class EigenResult:
    """
    Eigenvalues with right and left eigenvectors stored as columns.

    When the matrix is diagonalizable, left_vectors[:, i].conj() @ right_vectors[:, j] == delta_ij.
    """

    def __init__(self, eigenvalues, right_vectors, left_vectors, defective, vector_condition, min_gap):
        self.eigenvalues = frozen(eigenvalues)
        self.right_vectors = frozen(right_vectors)
        self.left_vectors = frozen(left_vectors)
        self.defective = defective
        self.vector_condition = vector_condition
        self.min_gap = min_gap


    def __len__(self):
        return len(self.eigenvalues)


    def reconstruct(self):
        """
        R diag(lambda) L^dagger, which equals the input matrix when not defective.
        """
        return self.right_vectors @ np.diag(self.eigenvalues) @ self.left_vectors.conj().T


def _ordering(eigenvalues):
    # Real parts closer than this count as equal, so conjugate pairs sort by imaginary part.
    scale = max(1.0, float(np.max(np.abs(eigenvalues)))) if len(eigenvalues) else 1.0
    tie = 1e-9 * scale

    def compare(i, j):
        a, b = eigenvalues[i], eigenvalues[j]

        if abs(a.real - b.real) > tie:
            return -1 if a.real > b.real else 1

        if a.imag != b.imag:
            return -1 if a.imag > b.imag else 1

        return 0

    return sorted(range(len(eigenvalues)), key = functools.cmp_to_key(compare))


def min_pairwise_gap(values):
    """
    Smallest distance between two entries of a list of complex numbers.
    """

    values = np.asarray(values)

    if len(values) < 2:
        return float('inf')

    distances = np.abs(values[:, None] - values[None, :])
    distances[np.diag_indices(len(values))] = np.inf

    return float(distances.min())


def eig_general(matrix):
    """
    General eigendecomposition with biorthonormal left and right eigenvectors.

    Eigenvalues come out in descending real part, ties broken by descending imaginary part.
    The result is flagged defective when the eigenvector matrix is ill conditioned, when two
    eigenvalues (nearly) coincide, or when two eigenvectors are numerically parallel.
    """

    matrix = as_cmatrix(matrix, square = True)
    n = matrix.shape[0]

    try:
        eigenvalues, left, right = scipy.linalg.eig(matrix, left = True, right = True)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f'Eigensolver failed on a {n}x{n} matrix: {e}') from e

    order = _ordering(eigenvalues)
    eigenvalues = eigenvalues[order]
    right = right[:, order]
    left = left[:, order]

    right = right / np.linalg.norm(right, axis = 0)

    gap = min_pairwise_gap(eigenvalues)
    radius = float(np.max(np.abs(eigenvalues))) if n else 0.0

    overlaps = np.abs(right.conj().T @ right)
    overlaps[np.diag_indices(n)] = 0.0
    max_overlap = float(overlaps.max()) if n > 1 else 0.0

    condition = float(np.linalg.cond(right))
    if not np.isfinite(condition):
        condition = float('inf')

    defective = (
        condition > constants.DEFECTIVE_CONDITION
        or gap < constants.DEFECTIVE_GAP * max(1.0, radius)
        or max_overlap > constants.COALESCED_OVERLAP
    )

    if np.isfinite(condition) and condition < 1e12:
        # L^dagger = R^-1 makes the two sets exactly biorthonormal, also inside degenerate subspaces.
        left = scipy.linalg.inv(right).conj().T
    else:
        # Best effort: pair each left vector with its own right vector.
        for i in range(n):
            pairing = np.vdot(left[:, i], right[:, i])
            if abs(pairing) > 0:
                left[:, i] = left[:, i] / np.conj(pairing)

    if defective:
        logger.debug(f'Defective spectrum: condition={condition:.3e}, gap={gap:.3e}, overlap={max_overlap:.15f}')

    return EigenResult(eigenvalues, right, left, defective, condition, gap)


def expm(matrix, t = 1.0):
    """
    exp(M t) by scaling and squaring with a degree 13 Pade approximant.

    Valid for defective matrices, and t may be negative.
    """

    matrix = as_cmatrix(matrix, square = True)

    if not np.isfinite(t):
        raise ValidationError(f'Time must be finite, got {t}.')

    result = scipy.linalg.expm(matrix * t)

    if not np.all(np.isfinite(result)):
        raise NumericalError(f'Matrix exponential overflowed at t={t}.')

    return result


def kron(a, b):
    """
    Kronecker product, (i, j) block equal to a[i, j] * b.
    """
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def vec_row(rho):
    """
    Stack the rows of a square matrix into one vector.

    For a qubit in the {|1>, |2>} basis the order is (rho11, rho12, rho21, rho22).
    """

    rho = as_cmatrix(rho, square = True)
    return rho.reshape(-1).copy()


def unvec_row(vector):
    """
    Inverse of vec_row.
    """

    vector = np.asarray(vector, dtype = np.complex128).reshape(-1)
    n = int(round(np.sqrt(len(vector))))

    if n * n != len(vector):
        raise DimensionError(f'Vector of length {len(vector)} is not a vectorized square matrix.')

    return vector.reshape(n, n).copy()


def identity(n):
    return np.eye(n, dtype = np.complex128)
