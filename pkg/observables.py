"""
Quantities reported for qubit states, and the closed-form references they are checked against.

Bloch convention: x = 2 Re rho12, y = -2 Im rho12, z = rho11 - rho22, so |1> sits at the north pole.
"""
import logging
import math

import numpy as np

import algebra
import constants
from errors import DomainError, ValidationError

logger = logging.getLogger(constants.TOOL_NAME)


class BlochVector:

    def __init__(self, x, y, z):
        self.x = float(x)
        self.y = float(y)
        self.z = float(z)


    def __iter__(self):
        return iter((self.x, self.y, self.z))


    def __repr__(self):
        return f'BlochVector({self.x:.6g}, {self.y:.6g}, {self.z:.6g})'


    def as_tuple(self):
        return (self.x, self.y, self.z)


    def as_array(self):
        return np.array([self.x, self.y, self.z])


    def norm(self):
        return bloch_norm(self)


def bloch_norm(v):
    """
    Length of a Bloch vector: 1 for pure states, 0 for the fully mixed state.
    """
    return float(np.linalg.norm(np.asarray(list(v), dtype = float)))


def ket(amplitudes):
    """
    A normalized state vector from amplitudes.
    """

    vector = np.asarray(amplitudes, dtype = np.complex128).reshape(-1)
    norm = np.linalg.norm(vector)

    if not np.isfinite(norm) or norm == 0:
        raise ValidationError('State vector must be finite and non-zero.')

    return vector / norm


def psi0():
    """
    The default initial state (|1> + e^{i 3pi/4}|2>) / sqrt(2).
    """
    return np.array(constants.PSI0_AMPLITUDES, dtype = np.complex128)


def density_matrix(vector):
    vector = np.asarray(vector, dtype = np.complex128).reshape(-1)
    return np.outer(vector, vector.conj())


def hermitize(rho):
    return 0.5 * (rho + rho.conj().T)


def check_density_matrix(rho, tol = constants.STATE_TOL):
    """
    Require a Hermitian, unit-trace, positive semidefinite matrix.
    """

    rho = algebra.as_cmatrix(rho, square = True)

    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValidationError('Density matrix is not Hermitian.')

    trace = np.trace(rho)

    if abs(trace - 1) > tol:
        raise ValidationError(f'Density matrix trace is {trace.real:.12g}, expected 1.')

    lowest = float(np.linalg.eigvalsh(hermitize(rho)).min())

    if lowest < -tol:
        raise ValidationError(f'Density matrix has negative eigenvalue {lowest:.3e}.')

    return rho


def _check_unit_trace(rho):
    rho = algebra.as_cmatrix(rho, square = True)

    if abs(np.trace(rho) - 1) > constants.STATE_TOL:
        raise ValidationError(f'Expected a normalized state, trace is {np.trace(rho).real:.12g}.')

    return rho


def bloch(rho):
    rho = _check_unit_trace(rho)

    if rho.shape != (2, 2):
        raise ValidationError(f'Bloch vectors need a qubit state, got shape {rho.shape}.')

    if np.max(np.abs(rho - rho.conj().T)) > constants.STATE_TOL:
        raise ValidationError('Density matrix is not Hermitian.')

    coherence = rho[0, 1]
    return BlochVector(2 * coherence.real, -2 * coherence.imag, (rho[0, 0] - rho[1, 1]).real)


def p2(rho):
    """
    Population of |2>, clipped to [0, 1].
    """

    rho = _check_unit_trace(rho)
    value = float(rho[1, 1].real)

    if value < -constants.STATE_TOL or value > 1 + constants.STATE_TOL:
        logger.warning(f'P2 = {value:.12g} is outside [0, 1]; clipping.')

    return min(1.0, max(0.0, value))


def purity(rho):
    rho = _check_unit_trace(rho)
    return float(np.trace(rho @ rho).real)


def trace_distance(a, b):
    """
    1/2 of the trace norm of a - b.
    """

    difference = hermitize(algebra.as_cmatrix(a) - algebra.as_cmatrix(b))
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(difference))))


def zdl_state(psi, gamma, t):
    """
    The zero-damping state (P gamma t |1><1| + |psi><psi|) / (1 + P gamma t), P = |<2|psi>|^2.
    """

    if gamma < 0 or t < 0:
        raise DomainError(f'Zero-damping state needs gamma >= 0 and t >= 0, got gamma={gamma}, t={t}.')

    psi = ket(psi)
    weight = abs(psi[1]) ** 2 * gamma * t

    rho = density_matrix(psi)
    rho[0, 0] += weight

    return rho / (1 + weight)


def p2_poly(p, gamma, t):
    """
    Polynomial decay (gamma t + 1/P)^-1 of the |2> population.
    """

    if not 0 < p <= 1:
        raise DomainError(f'Polynomial decay is undefined for P = {p}.')

    return 1 / (gamma * t + 1 / p)


def ll_steady_bloch(gamma_d, omega):
    """
    Steady state of the ordinary Lindblad qubit: (0, -2 gamma_d omega, gamma_d^2) / (gamma_d^2 + 2 omega^2).
    """

    if gamma_d <= 0:
        raise DomainError(f'The Lindblad steady state formula needs gamma_d > 0, got {gamma_d}.')

    denominator = gamma_d ** 2 + 2 * omega ** 2
    return BlochVector(0.0, -2 * gamma_d * omega / denominator, gamma_d ** 2 / denominator)


def _point_segment_distance(point, a, b):
    direction = b - a
    s = float(np.dot(point - a, direction) / np.dot(direction, direction))
    s = min(1.0, max(0.0, s))
    return float(np.linalg.norm(point - (a + s * direction)))


def collinearity(path, a, b):
    """
    Largest distance from a point of the path to the segment [a, b].
    """

    if not path:
        raise ValidationError('Collinearity needs a non-empty path.')

    a = np.asarray(list(a), dtype = float)
    b = np.asarray(list(b), dtype = float)

    if math.isclose(float(np.linalg.norm(b - a)), 0.0, abs_tol = 1e-15):
        raise DomainError('Collinearity segment is degenerate (a == b).')

    return max(_point_segment_distance(np.asarray(list(point), dtype = float), a, b) for point in path)
