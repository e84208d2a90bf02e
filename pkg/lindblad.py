"""
Lindblad Liouvillians in the row-major superoperator representation.
"""
import numpy as np

import algebra
import constants
from errors import DimensionError, ValidationError

ROW_MAJOR = "row-major"


class Channel:
    """
    A dissipation channel: Lindblad operator Gamma_k with its rate gamma_k.
    """

    def __init__(self, rate, operator):
        if not np.isfinite(rate) or rate < 0:
            raise ValidationError(f'Channel rate must be a finite non-negative number, got {rate}.')

        self.rate = float(rate)
        self.operator = algebra.frozen(algebra.as_cmatrix(operator, square = True))


    @property
    def dim(self):
        return self.operator.shape[0]


    def jump_superoperator(self):
        """
        J(Gamma) rho = Gamma rho Gamma^dagger, without the rate.
        """
        return algebra.kron(self.operator, self.operator.conj())


    def damping_superoperator(self):
        """
        -1/2 {Gamma^dagger Gamma, rho}, without the rate.
        """
        n = self.dim
        gg = self.operator.conj().T @ self.operator
        eye = algebra.identity(n)
        return -0.5 * (algebra.kron(gg, eye) + algebra.kron(eye, gg.T))


    def __repr__(self):
        return f'Channel(rate={self.rate})'


class Superoperator:
    """
    A linear map on n x n matrices, stored as the n^2 x n^2 matrix acting on vec_row(rho).
    """

    def __init__(self, matrix, dim = None, convention = ROW_MAJOR):
        matrix = algebra.as_cmatrix(matrix, square = True)

        if dim is None:
            dim = int(round(np.sqrt(matrix.shape[0])))

        if dim * dim != matrix.shape[0]:
            raise DimensionError(f'A {matrix.shape[0]}x{matrix.shape[0]} matrix is not a superoperator on {dim}x{dim} matrices.')

        if convention != ROW_MAJOR:
            raise ValidationError(f'Unsupported vectorization convention {convention!r}.')

        self.dim = dim
        self.matrix = algebra.frozen(matrix)
        self.convention = convention


    def __eq__(self, other):
        return (
            isinstance(other, Superoperator)
            and self.dim == other.dim
            and self.convention == other.convention
            and np.array_equal(self.matrix, other.matrix)
        )


    def __add__(self, other):
        if isinstance(other, Superoperator):
            if other.dim != self.dim:
                raise DimensionError(f'Cannot add superoperators on dimensions {self.dim} and {other.dim}.')
            return Superoperator(self.matrix + other.matrix, self.dim)

        # A scalar shift, c * identity.
        return Superoperator(self.matrix + other * algebra.identity(self.dim ** 2), self.dim)


    def __sub__(self, other):
        if isinstance(other, Superoperator):
            return self + Superoperator(-other.matrix, other.dim)
        return self + (-other)


    def __repr__(self):
        return f'Superoperator(dim={self.dim}, convention={self.convention!r})'


def hamiltonian_superoperator(hamiltonian):
    """
    -i[H, rho] in row-major form.
    """

    n = hamiltonian.shape[0]
    eye = algebra.identity(n)
    return -1j * (algebra.kron(hamiltonian, eye) - algebra.kron(eye, hamiltonian.T))


def check_hermitian(hamiltonian, tol = constants.HERMITIAN_TOL):
    hamiltonian = algebra.as_cmatrix(hamiltonian, square = True)
    deviation = float(np.max(np.abs(hamiltonian - hamiltonian.conj().T))) if hamiltonian.size else 0.0

    if deviation > tol:
        raise ValidationError(f'Hamiltonian is not Hermitian (max deviation {deviation:.3e}).')

    return hamiltonian


def build_lindblad(hamiltonian, channels, drop_jumps = ()):
    """
    Build the Lindblad Liouvillian

        L rho = -i[H, rho] + sum_k gamma_k [Gamma_k rho Gamma_k^dagger - 1/2 {Gamma_k^dagger Gamma_k, rho}].

    Channels whose index is in drop_jumps keep their damping term but lose the jump term,
    which is the no-jump generator used for postselection.
    """

    hamiltonian = check_hermitian(hamiltonian)
    n = hamiltonian.shape[0]

    matrix = hamiltonian_superoperator(hamiltonian)

    for index, channel in enumerate(channels):
        if channel.dim != n:
            raise DimensionError(f'Channel {index} acts on dimension {channel.dim}, Hamiltonian on {n}.')

        matrix = matrix + channel.rate * channel.damping_superoperator()

        if index not in drop_jumps:
            matrix = matrix + channel.rate * channel.jump_superoperator()

    return Superoperator(matrix, n)


def apply(superoperator, rho):
    """
    d rho / dt = unvec(S vec(rho)).
    """

    rho = algebra.as_cmatrix(rho, square = True)

    if rho.shape[0] != superoperator.dim:
        raise DimensionError(f'State has dimension {rho.shape[0]}, superoperator acts on {superoperator.dim}.')

    return algebra.unvec_row(superoperator.matrix @ algebra.vec_row(rho))


def projector(n, i, j):
    """
    |i><j| on an n-level system.
    """

    op = np.zeros((n, n), dtype = np.complex128)
    op[i, j] = 1.0
    return op
