"""
Spectra, time evolution, normalization and exceptional points of qubit Liouvillians.
"""
import logging

import numpy as np

import algebra
import constants
import generalized
import observables
from errors import DegeneratePostselectionError, DimensionError, NumericalError, ValidationError

logger = logging.getLogger(constants.TOOL_NAME)


class LiouvillianSpectrum:
    """
    Eigenvalues of a 4x4 Liouvillian with biorthonormal right (rho_i) and left (sigma_i) eigenmatrices,
    Tr(sigma_i^dagger rho_j) = delta_ij when not defective.
    """

    def __init__(self, eigen):
        self.eigen = eigen
        self.eigenvalues = eigen.eigenvalues
        self.right_matrices = [algebra.unvec_row(eigen.right_vectors[:, i]) for i in range(len(eigen))]
        self.left_matrices = [algebra.unvec_row(eigen.left_vectors[:, i]) for i in range(len(eigen))]
        self.defective = eigen.defective
        self.min_gap = eigen.min_gap
        self.vector_condition = eigen.vector_condition


    def __len__(self):
        return len(self.eigenvalues)


class EPQuery:

    def __init__(self, gamma_d, gamma_j):
        gamma_d = float(gamma_d)
        gamma_j = float(gamma_j)

        if not (np.isfinite(gamma_d) and np.isfinite(gamma_j)):
            raise ValidationError(f'EP query needs finite rates, got gamma_d={gamma_d}, gamma_j={gamma_j}.')

        if gamma_j < 0:
            raise ValidationError(f'gamma_j must be non-negative, got {gamma_j}.')

        self.gamma_d = gamma_d
        self.gamma_j = gamma_j


    def __repr__(self):
        return f'EPQuery(gamma_d={self.gamma_d}, gamma_j={self.gamma_j})'


def decompose(liouvillian):
    if liouvillian.dim != 2:
        raise DimensionError(f'decompose handles qubit Liouvillians, got dimension {liouvillian.dim}; use algebra.eig_general.')

    return LiouvillianSpectrum(algebra.eig_general(liouvillian.matrix))


def _initial_vector(liouvillian, rho0):
    rho0 = observables.check_density_matrix(rho0)

    if rho0.shape[0] != liouvillian.dim:
        raise DimensionError(f'State has dimension {rho0.shape[0]}, Liouvillian acts on {liouvillian.dim}.')

    return algebra.vec_row(rho0)


def evolve_series(liouvillian, rho0, times):
    """
    Unnormalized states exp(L t) rho0 for every t in times.

    Uses the biorthonormal eigen-expansion when L is diagonalizable and the Pade propagator otherwise.
    """

    vector = _initial_vector(liouvillian, rho0)
    eigen = algebra.eig_general(liouvillian.matrix)

    if eigen.defective:
        logger.warning(f'Liouvillian is (nearly) defective (condition {eigen.vector_condition:.3e}); using the Pade propagator.')
    else:
        coefficients = eigen.left_vectors.conj().T @ vector

    states = []

    for t in times:
        if t == 0:
            evolved = vector
        elif eigen.defective:
            evolved = algebra.expm(liouvillian.matrix, t) @ vector
        else:
            evolved = eigen.right_vectors @ (np.exp(eigen.eigenvalues * t) * coefficients)

        if not np.all(np.isfinite(evolved)):
            raise NumericalError(f'Evolution is not finite at t={t}.')

        states.append(algebra.unvec_row(evolved))

    return states


def evolve(liouvillian, rho0, t):
    return evolve_series(liouvillian, rho0, [t])[0]


def evolve_expm(liouvillian, rho0, t):
    """
    exp(L t) rho0 through the Pade propagator only.
    """

    vector = _initial_vector(liouvillian, rho0)
    return algebra.unvec_row(algebra.expm(liouvillian.matrix, t) @ vector)


def normalize(rho, t = None):
    """
    Divide by the trace; the postselected ensemble is empty when the trace is below the floor.
    """

    trace = np.trace(rho).real

    if not np.isfinite(trace) or trace <= constants.TRACE_FLOOR:
        raise DegeneratePostselectionError(f'State trace {trace:.3e} is below the postselection floor' + (f' at t={t}.' if t is not None else '.'), t)

    return observables.hermitize(rho / trace)


def evolve_normalized_series(liouvillian, rho0, times):
    return [normalize(rho, t) for rho, t in zip(evolve_series(liouvillian, rho0, times), times)]


def evolve_normalized(liouvillian, rho0, t):
    return normalize(evolve(liouvillian, rho0, t), t)


def _normalized_mode(matrix):
    trace = np.trace(matrix)

    if abs(trace) <= constants.TRACE_FLOOR:
        raise NumericalError('Eigenmatrix is traceless and cannot be normalized to a state.')

    # Rotate the phase so the trace is real and positive.
    matrix = observables.hermitize(matrix * (np.conj(trace) / abs(trace)))
    return matrix / np.trace(matrix).real


def steady_state(liouvillian):
    """
    The fixed point rho_0 when lambda_0 = 0, otherwise None.
    """

    spectrum = decompose(liouvillian)

    if abs(spectrum.eigenvalues[0]) > constants.STEADY_TOL:
        return None

    return _normalized_mode(spectrum.right_matrices[0])


def dominant_mode(liouvillian):
    """
    The normalized long-time attractor: the slowest-decaying eigenmatrix that carries trace.
    """

    spectrum = decompose(liouvillian)
    values = spectrum.eigenvalues
    tie = 1e-9 * max(1.0, float(np.max(np.abs(values))))

    candidates = [i for i in range(len(values)) if values[0].real - values[i].real <= tie]
    best = max(candidates, key = lambda i: abs(np.trace(spectrum.right_matrices[i])))

    return _normalized_mode(spectrum.right_matrices[best])


def ep_residual(q, omega):
    """
    108 gamma_J^2 Omega^4 + (4 Omega^2 - gamma_d^2)^3, zero on the exceptional surface.
    """

    if omega < 0:
        raise ValidationError(f'omega must be non-negative, got {omega}.')

    return 108 * q.gamma_j ** 2 * omega ** 4 + (4 * omega ** 2 - q.gamma_d ** 2) ** 3


def ep_locus(q):
    """
    Every Omega >= 0 on the exceptional surface for the given (gamma_d, gamma_J), ascending.

    Solves 64x^3 + (108 gamma_J^2 - 48 gamma_d^2)x^2 + 12 gamma_d^4 x - gamma_d^6 = 0 for x = Omega^2.
    """

    d2 = q.gamma_d * q.gamma_d

    if q.gamma_j == 0:
        # (4x - gamma_d^2)^3: a triple root, which companion-matrix solvers only resolve to ~1e-5.
        return [abs(q.gamma_d) / 2]

    coefficients = [64.0, 108 * q.gamma_j * q.gamma_j - 48 * d2, 12 * d2 * d2, -d2 * d2 * d2]
    roots = np.roots(coefficients)

    omegas = []

    for root in roots:
        tol = constants.ROOT_IMAG_TOL * (1 + abs(root))

        if abs(root.imag) > tol or root.real < -tol:
            continue

        omega = float(np.sqrt(max(root.real, 0.0)))

        if not any(abs(omega - known) <= 1e-12 * (1 + omega) for known in omegas):
            omegas.append(omega)

    return sorted(omegas)


def _lambda3_index(liouvillian, eigenvalues):
    # L[3, 3] = -gamma_d, and lambda_3 = -gamma_d / 2 belongs to the decoupled Re(rho12) mode.
    target = liouvillian.matrix[3, 3] / 2
    return int(np.argmin(np.abs(eigenvalues - target)))


def ep_distance(liouvillian):
    """
    (min_gap, coalescence) of the closest pair among lambda_0, lambda_1, lambda_2.

    coalescence is the overlap of the two unit right eigenvectors and tends to 1 at an EP.
    """

    spectrum = decompose(liouvillian)
    values = spectrum.eigenvalues
    vectors = spectrum.eigen.right_vectors

    skip = _lambda3_index(liouvillian, values)
    others = [i for i in range(len(values)) if i != skip]

    pairs = [(others[a], others[b]) for a in range(len(others)) for b in range(a + 1, len(others))]
    i, j = min(pairs, key = lambda pair: abs(values[pair[0]] - values[pair[1]]))

    min_gap = float(abs(values[i] - values[j]))
    coalescence = float(abs(np.vdot(vectors[:, i], vectors[:, j])))

    return min_gap, min(1.0, coalescence)


def evolve_nhh_pure(p, psi, t):
    """
    Normalized pure-state evolution exp(-i H_eff t) psi on the gamma_J = 0 plane.
    """

    if p.gamma_j != 0:
        raise ValidationError(f'Pure-state evolution needs gamma_j = 0, got {p.gamma_j}.')

    psi = observables.ket(psi)
    evolved = algebra.expm(-1j * generalized.nhh_hamiltonian(p), t) @ psi
    norm = float(np.linalg.norm(evolved))

    if not np.isfinite(norm) or norm ** 2 <= constants.TRACE_FLOOR:
        raise DegeneratePostselectionError(f'Pure state norm vanished at t={t}.', t)

    return evolved / norm


def with_global_decay(liouvillian, rate):
    """
    L - rate * I, the generator of the unnormalized postselected state.
    """
    return liouvillian - rate
