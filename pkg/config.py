"""
Run configuration for the command line.

Values are layered, lowest precedence first: built-in defaults, the --config file, GLSIM_<KEY>
environment variables and finally command line flags. The config file is flat KEY=value text read
with python-dotenv; keys are case insensitive and - and _ are interchangeable.
"""
import logging
import os

import numpy as np
from dotenv import dotenv_values

import constants
import generalized
import observables
import util
from errors import ConfigurationError

logger = logging.getLogger(constants.TOOL_NAME)

KEYS = (
    'gamma_d', 'gamma_j', 'omega', 'gamma_1', 'gamma_2', 'psi0', 't_max', 'points',
    'n_traj', 'dt', 'seed', 'workers', 'format', 'out', 'sweep',
)

FORMATS = ('csv', 'json')

STATE_LABELS = {
    'psi0': constants.PSI0_AMPLITUDES,
    'ket1': (1.0, 0.0),
    'ket2': (0.0, 1.0),
}


class RunConfig:
    """
    Everything a command needs to run. t_max, dt and out stay None when not given, and
    the command picks a default suited to its parameters.
    """

    def __init__(self, mode, parameters, initial_state = 'psi0', psi0 = None, t_max = None, points = constants.DEFAULT_POINTS,
                 n_traj = constants.DEFAULT_N_TRAJ, dt = None, seed = constants.DEFAULT_SEED, workers = constants.DEFAULT_WORKERS,
                 out = None, format = constants.DEFAULT_FORMAT, sweeps = (), plot_stub = False, panel = None):
        self.mode = mode
        self.parameters = parameters
        self.initial_state = initial_state
        self.psi0 = observables.psi0() if psi0 is None else psi0
        self.t_max = t_max
        self.points = points
        self.n_traj = n_traj
        self.dt = dt
        self.seed = seed
        self.workers = workers
        self.out = out
        self.format = format
        self.sweeps = list(sweeps)
        self.plot_stub = plot_stub
        self.panel = panel

        if self.points < 2:
            raise ConfigurationError(f'points must be at least 2, got {self.points}.')

        if self.n_traj < 1:
            raise ConfigurationError(f'n_traj must be positive, got {self.n_traj}.')

        if self.workers < 1:
            raise ConfigurationError(f'workers must be positive, got {self.workers}.')

        if not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError(f'seed must be a 64-bit unsigned integer, got {self.seed}.')

        if self.format not in FORMATS:
            raise ConfigurationError(f'format must be one of {", ".join(FORMATS)}, got {self.format!r}.')

        if self.t_max is not None and not self.t_max > 0:
            raise ConfigurationError(f't_max must be positive, got {self.t_max}.')

        if self.dt is not None and not self.dt > 0:
            raise ConfigurationError(f'dt must be positive, got {self.dt}.')

        names = [sweep.name for sweep in self.sweeps]
        if len(set(names)) != len(names):
            raise ConfigurationError(f'A parameter is swept twice: {", ".join(names)}.')


    @property
    def is_ladder(self):
        return isinstance(self.parameters, generalized.LadderParams)


    def rate_scale(self, parameters = None):
        scale = (parameters or self.parameters).rate_scale()
        return scale if scale > 0 else 1.0


    def times(self, t_scale = constants.DEFAULT_T_SCALE, rate = None):
        """
        The output time grid, t * rate in [0, t_scale] unless t_max was given.
        """

        t_max = self.t_max if self.t_max is not None else t_scale / (rate or self.rate_scale())
        return util.time_grid(t_max, self.points)


    def trajectory_dt(self, system):
        if self.dt is not None:
            return self.dt
        return constants.DT_FACTOR / max(system.rate_scale(), constants.RATE_EPSILON)


    def echo(self, parameters = None):
        """
        The parameters written into every output header. Worker count and output location are left out
        so the output does not depend on them.
        """

        parameters = parameters or self.parameters

        echo = {
            'mode': self.mode,
            'kind': getattr(parameters, 'kind', 'generalized'),
            **parameters.as_dict(),
            'psi0': self.initial_state,
            'points': self.points,
        }

        if self.t_max is not None:
            echo['t_max'] = self.t_max

        if self.sweeps:
            echo['sweep'] = [str(sweep) for sweep in self.sweeps]

        if self.mode in ('trajectories', 'reproduce'):
            echo['n_traj'] = self.n_traj
            echo['seed'] = self.seed
            if self.dt is not None:
                echo['dt'] = self.dt

        if self.panel is not None:
            echo['panel'] = self.panel

        return echo


def parse_state(text):
    """
    Read an initial state: psi0, ket1, ket2, or two comma separated complex amplitudes.

    Returns (label, normalized amplitudes on {|1>, |2>}).
    """

    label = str(text).strip()
    amplitudes = STATE_LABELS.get(label.lower())

    if amplitudes is not None:
        return label.lower(), np.array(amplitudes, dtype = np.complex128)

    amplitudes = util.parse_amplitudes(label)

    if len(amplitudes) != 2:
        raise ConfigurationError(f'An initial state needs 2 amplitudes, got {len(amplitudes)}.')

    norm = float(np.linalg.norm(amplitudes))

    if norm > 0 and abs(norm - 1) > constants.NORM_TOL:
        logger.warning(f'Initial state amplitudes have norm {norm:.12g}; normalizing.')

    return label, observables.ket(amplitudes)


def read_config_file(path):
    if not os.path.isfile(path):
        raise ConfigurationError(f'Config file {path} does not exist.')

    values = {}

    for key, value in dotenv_values(path).items():
        key = util.normalize_key(key)

        if key not in KEYS:
            raise ConfigurationError(f'Unknown key {key!r} in config file {path}.')

        if value is None:
            raise ConfigurationError(f'Key {key!r} in config file {path} has no value.')

        values[key] = value

    return values


def read_environment(environ = None):
    environ = os.environ if environ is None else environ

    return {
        key: environ[f'{constants.ENVVAR_PREFIX}{key.upper()}']
        for key in KEYS
        if f'{constants.ENVVAR_PREFIX}{key.upper()}' in environ
    }


def _split_sweeps(value):
    if isinstance(value, (list, tuple)):
        return list(value)
    return [part for part in str(value).split(';') if part.strip()]


def _parameters(values):
    ladder = [key for key in ('gamma_1', 'gamma_2') if key in values]
    generalized_keys = [key for key in ('gamma_d', 'gamma_j') if key in values]
    omega = util.parse_float(values.get('omega', constants.DEFAULT_OMEGA), 'omega')

    if ladder and generalized_keys:
        raise ConfigurationError('Give either gamma_d/gamma_j or gamma_1/gamma_2, not both.')

    if ladder:
        if len(ladder) != 2:
            raise ConfigurationError('A ladder system needs both gamma_1 and gamma_2.')

        return generalized.LadderParams(
            util.parse_float(values['gamma_1'], 'gamma_1'),
            util.parse_float(values['gamma_2'], 'gamma_2'),
            omega,
        )

    return generalized.GLParams(
        util.parse_float(values.get('gamma_d', constants.DEFAULT_GAMMA_D), 'gamma_d'),
        util.parse_float(values.get('gamma_j', constants.DEFAULT_GAMMA_J), 'gamma_j'),
        omega,
    )


def build(mode, flags, environ = None):
    """
    Merge defaults, config file, environment and flags into a RunConfig.

    flags maps option names to values, None meaning "not given". 'config', 'plot_stub' and 'panel'
    are read from flags only.
    """

    flags = {util.normalize_key(key): value for key, value in flags.items()}

    values = {}

    if flags.get('config'):
        values.update(read_config_file(flags['config']))

    values.update(read_environment(environ))
    values.update({key: value for key, value in flags.items() if key in KEYS and value is not None and value != []})

    label, psi0 = parse_state(values.get('psi0', 'psi0'))

    return RunConfig(
        mode = mode,
        parameters = _parameters(values),
        initial_state = label,
        psi0 = psi0,
        t_max = util.parse_float(values['t_max'], 't_max') if 't_max' in values else None,
        points = util.parse_int(values.get('points', constants.DEFAULT_POINTS), 'points'),
        n_traj = util.parse_int(values.get('n_traj', constants.DEFAULT_N_TRAJ), 'n_traj'),
        dt = util.parse_float(values['dt'], 'dt') if 'dt' in values else None,
        seed = util.parse_int(values.get('seed', constants.DEFAULT_SEED), 'seed'),
        workers = util.parse_int(values.get('workers', constants.DEFAULT_WORKERS), 'workers'),
        out = values.get('out'),
        format = str(values.get('format', constants.DEFAULT_FORMAT)).lower(),
        sweeps = [util.Sweep.parse(text) for text in _split_sweeps(values.get('sweep', []))],
        plot_stub = bool(flags.get('plot_stub')),
        panel = flags.get('panel'),
    )
