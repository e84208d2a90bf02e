import itertools

import numpy as np
import pytest

import algebra
import generalized
import lindblad
import observables
import spectral
from errors import NumericalError, ValidationError
from generalized import GLParams, LadderParams, LambdaParams
from lindblad import Channel

# Dyadic rates keep every entry exactly representable, so the reductions can be compared bit for bit.
RATES = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0]
DRIVES = [0.0, 0.25, 1.0, 2.0]


def test_build_Lg_matrix_form():
    s = generalized.build_Lg(GLParams(0.5, 1.0, 2.0))

    expected = np.array([
        [0, 1j, -1j, 1.0],
        [1j, -0.25, 0, -1j],
        [-1j, 0, -0.25, 1j],
        [0, -1j, 1j, -0.5],
    ])

    assert s.dim == 2
    assert np.array_equal(s.matrix, expected)


@pytest.mark.parametrize('gamma_1, gamma_2, omega', list(itertools.product(RATES, RATES, DRIVES)))
def test_ladder_reduction_is_exact(gamma_1, gamma_2, omega):
    reduced = generalized.reduce_ladder(LadderParams(gamma_1, gamma_2, omega))

    assert reduced.global_decay == gamma_1
    assert reduced.generator == generalized.build_Lg(GLParams(gamma_2 - gamma_1, gamma_2, omega))


@pytest.mark.parametrize('gamma_1, gamma_2, omega', [(0.5, 1.0, 0.25), (1.0, 0.0, 2.0), (2.0, 1.5, 1.0), (0.0, 0.0, 1.0)])
def test_lambda_reduction_is_exact(gamma_1, gamma_2, omega):
    reduced = generalized.reduce_lambda(gamma_1, gamma_2, omega)

    assert reduced.global_decay == 0.0
    assert reduced.generator == generalized.build_Lg(GLParams(gamma_1 + gamma_2, gamma_2, omega))


def test_ladder_reduction_close_for_arbitrary_rates():
    rng = np.random.default_rng(2)

    for gamma_1, gamma_2, omega in rng.uniform(0, 3, size = (20, 3)):
        p = LadderParams(gamma_1, gamma_2, omega)
        reduced = p.reduce()
        assert np.allclose(reduced.generator.matrix, generalized.build_Lg(p.effective()).matrix, atol = 1e-14)


def test_unclosed_projection_is_detected():
    # Driving |0> <-> |1> feeds the kept block from the discarded |0> components.
    hamiltonian = generalized.drive_hamiltonian(3, 1.0, 0, 1)
    channels = [Channel(1.0, lindblad.projector(3, 0, 1)), Channel(1.0, lindblad.projector(3, 1, 2))]

    with pytest.raises(NumericalError):
        generalized.project_no_jump(hamiltonian, channels, 0, (1, 2))


def test_alpha():
    assert generalized.alpha(GLParams(0.5, 1.0, 0.0)) == 0.5
    assert generalized.alpha(GLParams(-1.0, 0.5, 0.0)) == -2.0
    assert generalized.alpha(GLParams(1.0, 0.0, 0.3)) is None


def test_ladder_effective_parameters():
    assert LadderParams(2.0, 1.0, 0.5).effective() == GLParams(-1.0, 1.0, 0.5)
    assert LadderParams(1.0, 1.0, 0.0).effective() == GLParams(0.0, 1.0, 0.0)
    assert LambdaParams(0.5, 1.0, 0.0).effective() == GLParams(1.5, 1.0, 0.0)


@pytest.mark.parametrize('gamma_d, gamma_j', [(-1.0, 1.0), (0.0, 1.0), (1.0, 1.0), (0.5, 1.0), (1.0, 0.0), (3.0, 1.0), (-2.0, 0.0)])
def test_realize_inverts_the_reductions(gamma_d, gamma_j):
    p = GLParams(gamma_d, gamma_j, 0.5)
    system = generalized.realize(p)

    assert system.kind == ('ladder' if gamma_d <= gamma_j else 'lambda')
    assert system.effective() == p
    assert system.reduce().generator == generalized.build_Lg(p)


def test_nhh_hamiltonian_generates_the_jump_free_plane():
    p = GLParams(0.7, 0.0, 1.3)
    h = generalized.nhh_hamiltonian(p)
    eye = algebra.identity(2)

    superoperator = -1j * (np.kron(h, eye) - np.kron(eye, h.conj()))

    assert np.allclose(superoperator, generalized.build_Lg(p).matrix, atol = 1e-15)


def test_parameter_validation():
    with pytest.raises(ValidationError):
        GLParams(1.0, -0.1, 0.0)

    with pytest.raises(ValidationError):
        GLParams(np.nan, 1.0, 0.0)

    with pytest.raises(ValidationError):
        LadderParams(1.0, 1.0, -1.0)

    assert GLParams(-3.0, 0.0, 0.0).gamma_d == -3.0


@pytest.mark.parametrize('omega', [0.24, 2.0])
def test_flipping_damping_sign_swaps_the_levels(omega):
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])
    rho0 = observables.density_matrix(observables.psi0())

    gaining = generalized.build_Lg(GLParams(-1.0, 0.0, omega))
    losing = generalized.build_Lg(GLParams(1.0, 0.0, omega))

    for t in [0.5, 1.0, 3.0]:
        direct = spectral.evolve_normalized(gaining, rho0, t)
        mirrored = flip @ spectral.evolve_normalized(losing, flip @ rho0 @ flip, t) @ flip

        assert np.allclose(direct, mirrored, atol = 1e-10)
