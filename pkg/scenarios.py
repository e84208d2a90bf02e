"""
Parameter sets of the reproduction panels. Every rate is a multiple of constants.PANEL_RATE,
which plays the role of |gamma_d| in the damping comparisons and of gamma in the zero-damping ones.
"""
import constants
import observables
from generalized import GLParams, LadderParams

MASTER = 'master'
ZDL_ANALYTIC = 'zdl_analytic'
MONTE_CARLO = 'monte_carlo'


class Curve:

    def __init__(self, name, parameters, method = MASTER):
        self.name = name
        self.parameters = parameters
        self.method = method


    def __repr__(self):
        return f'Curve({self.name!r}, {self.parameters!r}, {self.method!r})'


class Panel:

    def __init__(self, name, description, curves, t_scale = constants.DEFAULT_T_SCALE, collinearity = False):
        self.name = name
        self.description = description
        self.curves = curves
        self.t_scale = t_scale
        self.collinearity = collinearity


def _damping_panel(name, gamma_j, omega):
    rate = constants.PANEL_RATE

    return Panel(
        name,
        f'negative, positive and zero damping with gamma_J = {gamma_j:g}|gamma_d|, Omega = {omega:g}|gamma_d|',
        [
            Curve('negative', GLParams(-rate, gamma_j * rate, omega * rate)),
            Curve('positive', GLParams(rate, gamma_j * rate, omega * rate)),
            Curve('zero', GLParams(0.0, gamma_j * rate, omega * rate)),
        ],
    )


def _zero_damping_panel(name, omega):
    rate = constants.PANEL_RATE

    return Panel(
        name,
        f'zero damping against NHH and LL dynamics with Omega = {omega:g} gamma',
        [
            Curve('zdl', GLParams(0.0, rate, omega * rate)),
            Curve('nhh', GLParams(rate, 0.0, omega * rate)),
            Curve('ll', GLParams(rate, rate, omega * rate)),
        ],
        collinearity = True,
    )


def _decay_panel(name):
    rate = constants.PANEL_RATE

    return Panel(
        name,
        'decay of the |2> population: LL and NHH master equations, ZDL closed form and ZDL Monte-Carlo',
        [
            Curve('ll_master', GLParams(rate, rate, 0.0)),
            Curve('nhh_master', GLParams(rate, 0.0, 0.0)),
            Curve('zdl_analytic', GLParams(0.0, rate, 0.0), ZDL_ANALYTIC),
            Curve('zdl_monte_carlo', LadderParams(rate, rate, 0.0), MONTE_CARLO),
        ],
        # Survivors thin out as e^{-gamma t}(1 + gamma t / 2).
        t_scale = constants.DEFAULT_TRAJECTORY_T_SCALE,
    )


PANELS = {
    panel.name: panel
    for panel in (
        _damping_panel('fig2a', 0.0, 0.24),
        _damping_panel('fig2b', 0.0, 2.0),
        _damping_panel('fig2c', 1.0, 0.24),
        _damping_panel('fig2d', 1.0, 2.0),
        _zero_damping_panel('fig3a', 0.0),
        _zero_damping_panel('fig3b', 0.24),
        _zero_damping_panel('fig3c', 2.0),
        _decay_panel('fig3e'),
    )
}


def collinearity_segment(psi0):
    """
    Zero-damping states mix psi0 with |1>, so their Bloch path runs from psi0 towards the north pole.
    """
    return observables.bloch(observables.density_matrix(psi0)), observables.BlochVector(0.0, 0.0, 1.0)
