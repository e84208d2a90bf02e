"""
The generalized Liouvillian L_g of a driven qubit, whose damping rate gamma_d and quantum jump
rate gamma_J are independent, and its realization by postselecting three-level systems.

Qubit basis is {|1>, |2>} (array indices 0, 1); three-level basis is {|0>, |1>, |2>}.
"""
import numpy as np

import algebra
import lindblad
from errors import NumericalError, ValidationError
from lindblad import Channel, Superoperator


def _rate(name, value, signed = False):
    value = float(value)

    if not np.isfinite(value):
        raise ValidationError(f'{name} must be finite, got {value}.')

    if not signed and value < 0:
        raise ValidationError(f'{name} must be non-negative, got {value}.')

    return value


class GLParams:
    """
    Parameters of L_g. gamma_d may be negative (negative damping); gamma_j and omega may not.
    """

    def __init__(self, gamma_d, gamma_j, omega):
        self.gamma_d = _rate('gamma_d', gamma_d, signed = True)
        self.gamma_j = _rate('gamma_j', gamma_j)
        self.omega = _rate('omega', omega)


    def __eq__(self, other):
        return isinstance(other, GLParams) and (self.gamma_d, self.gamma_j, self.omega) == (other.gamma_d, other.gamma_j, other.omega)


    def __repr__(self):
        return f'GLParams(gamma_d={self.gamma_d}, gamma_j={self.gamma_j}, omega={self.omega})'


    def as_dict(self):
        return {'gamma_d': self.gamma_d, 'gamma_j': self.gamma_j, 'omega': self.omega}


    def rate_scale(self):
        return max(abs(self.gamma_d), self.gamma_j, self.omega)


class LadderParams:
    """
    Ladder system |2> -> |1> -> |0>: Gamma_1 = |0><1| with rate gamma_1, Gamma_2 = |1><2| with rate gamma_2,
    and a drive omega between |1> and |2>.

    Postselecting on no Gamma_1 jump realizes L_g with gamma_d = gamma_2 - gamma_1, gamma_J = gamma_2.
    """

    kind = 'ladder'

    def __init__(self, gamma_1, gamma_2, omega):
        self.gamma_1 = _rate('gamma_1', gamma_1)
        self.gamma_2 = _rate('gamma_2', gamma_2)
        self.omega = _rate('omega', omega)


    def __eq__(self, other):
        return isinstance(other, LadderParams) and (self.gamma_1, self.gamma_2, self.omega) == (other.gamma_1, other.gamma_2, other.omega)


    def __repr__(self):
        return f'LadderParams(gamma_1={self.gamma_1}, gamma_2={self.gamma_2}, omega={self.omega})'


    def as_dict(self):
        return {'gamma_1': self.gamma_1, 'gamma_2': self.gamma_2, 'omega': self.omega}


    @property
    def global_decay(self):
        return self.gamma_1


    def effective(self):
        """
        The GLParams this system realizes.
        """
        return GLParams(self.gamma_2 - self.gamma_1, self.gamma_2, self.omega)


    def rate_scale(self):
        return max(self.gamma_1, self.gamma_2, self.omega)


    def reduce(self):
        return reduce_ladder(self)


class LambdaParams:
    """
    Lambda system: |2> decays to |0> (Gamma_1 = |0><2|, rate gamma_1) and to |1> (Gamma_2 = |1><2|, rate gamma_2).

    Postselecting on no Gamma_1 jump realizes L_g with gamma_d = gamma_1 + gamma_2, gamma_J = gamma_2.
    """

    kind = 'lambda'

    def __init__(self, gamma_1, gamma_2, omega):
        self.gamma_1 = _rate('gamma_1', gamma_1)
        self.gamma_2 = _rate('gamma_2', gamma_2)
        self.omega = _rate('omega', omega)


    def __repr__(self):
        return f'LambdaParams(gamma_1={self.gamma_1}, gamma_2={self.gamma_2}, omega={self.omega})'


    def as_dict(self):
        return {'gamma_1': self.gamma_1, 'gamma_2': self.gamma_2, 'omega': self.omega}


    @property
    def global_decay(self):
        return 0.0


    def effective(self):
        return GLParams(self.gamma_1 + self.gamma_2, self.gamma_2, self.omega)


    def reduce(self):
        return reduce_lambda(self.gamma_1, self.gamma_2, self.omega)


class ReducedSystem:
    """
    Result of a postselected reduction: rho_sub(t) = exp(-global_decay t) exp(generator t) rho_sub(0).
    """

    def __init__(self, global_decay, generator):
        self.global_decay = global_decay
        self.generator = generator


    def __repr__(self):
        return f'ReducedSystem(global_decay={self.global_decay}, generator={self.generator!r})'


def build_Lg(p):
    """
    The 4x4 matrix of L_g acting on (rho11, rho12, rho21, rho22).
    """

    h = p.omega / 2
    half = p.gamma_d / 2

    matrix = np.array([
        [0,       1j * h,  -1j * h,  p.gamma_j],
        [1j * h,  -half,   0,        -1j * h],
        [-1j * h, 0,       -half,    1j * h],
        [0,       -1j * h, 1j * h,   -p.gamma_d],
    ], dtype = np.complex128)

    return Superoperator(matrix, 2)


def drive_hamiltonian(n, omega, lower, upper):
    """
    (omega / 2)(|upper><lower| + |lower><upper|) on n levels.
    """
    return (omega / 2) * (lindblad.projector(n, upper, lower) + lindblad.projector(n, lower, upper))


def nhh_hamiltonian(p):
    """
    H_sub - i (gamma_d / 2)|2><2|, the generator of the gamma_J = 0 plane.
    """

    hamiltonian = drive_hamiltonian(2, p.omega, 0, 1)
    hamiltonian[1, 1] -= 0.5j * p.gamma_d
    return hamiltonian


def subspace_indices(n, levels):
    """
    Positions in vec_row of the matrix elements rho_ij with i, j both in levels.
    """
    return [n * i + j for i in levels for j in levels]


def project_no_jump(hamiltonian, channels, postselected, levels):
    """
    Build the Lindblad generator without the jump term of the postselected channel and
    restrict it to the vectorized components with both indices in levels.

    The discarded components must not feed the kept ones; this is checked, not assumed.
    """

    full = lindblad.build_lindblad(hamiltonian, channels, drop_jumps = (postselected,))
    n = full.dim

    keep = subspace_indices(n, levels)
    drop = [index for index in range(n * n) if index not in keep]

    if np.any(full.matrix[np.ix_(keep, drop)] != 0):
        raise NumericalError('Postselected subspace is fed by discarded components; the reduction is not closed.')

    return full.matrix[np.ix_(keep, keep)]


def reduce_ladder(p):
    """
    Reduce the ladder system to the {|1>, |2>} subspace by removing the Gamma_1 jumps.

    The -gamma_1 part that is proportional to the identity is returned separately as the global decay.
    """

    hamiltonian = drive_hamiltonian(3, p.omega, 1, 2)
    channels = [
        Channel(p.gamma_1, lindblad.projector(3, 0, 1)),
        Channel(p.gamma_2, lindblad.projector(3, 1, 2)),
    ]

    projected = project_no_jump(hamiltonian, channels, 0, (1, 2))
    generator = projected + p.gamma_1 * algebra.identity(4)

    return ReducedSystem(p.gamma_1, Superoperator(generator, 2))


def reduce_lambda(gamma_1, gamma_2, omega):
    """
    Reduce the Lambda system to the {|1>, |2>} subspace by removing the Gamma_1 jumps.

    Both channels damp |2>, so gamma_d = gamma_1 + gamma_2 and nothing leaks from |1>: the global decay is 0.
    """

    p = LambdaParams(gamma_1, gamma_2, omega)

    hamiltonian = drive_hamiltonian(3, p.omega, 1, 2)
    channels = [
        Channel(p.gamma_1, lindblad.projector(3, 0, 2)),
        Channel(p.gamma_2, lindblad.projector(3, 1, 2)),
    ]

    projected = project_no_jump(hamiltonian, channels, 0, (1, 2))

    return ReducedSystem(0.0, Superoperator(projected, 2))


def alpha(p):
    """
    gamma_d / gamma_J, or None on the gamma_J = 0 (NHH) plane.
    """

    if p.gamma_j == 0:
        return None

    return p.gamma_d / p.gamma_j


def realize(p):
    """
    A three-level system whose postselected dynamics is L_g(p).

    gamma_d <= gamma_J needs a ladder, gamma_d > gamma_J a Lambda system.
    """

    if p.gamma_d <= p.gamma_j:
        return LadderParams(p.gamma_j - p.gamma_d, p.gamma_j, p.omega)

    return LambdaParams(p.gamma_d - p.gamma_j, p.gamma_j, p.omega)
