"""
Subcommands of the glsim command line tool.

Each command is a function registered with the command decorator; its docstring supplies the
help text and a Usage: block that is printed when the function returns command.BAD_USAGE.
"""
import argparse
import itertools
import logging
import math

import numpy as np
import pandas as pd

import command as cmd
import config
import constants
import display
import generalized
import observables
import scenarios
import spectral
import trajectories
from errors import ConfigurationError, SimulationError

logger = logging.getLogger(constants.TOOL_NAME)

_command_map = dict()

EVOLVE_COLUMNS = ['t', 'x', 'y', 'z', 'purity', 'trace_unnormalized', 'p2', 'survivor_model']
TRAJECTORY_COLUMNS = ['t', 'p2_mc', 'stderr', 'survivor_fraction', 'survivor_stderr', 'survivor_model', 'p2_master']
EP_COLUMNS = ['gamma_d', 'gamma_j', 'omega_root']
PARAMETER_SWEEPS = ('gamma_d', 'gamma_j', 'omega', 'gamma_1', 'gamma_2', 'alpha')


def command(*commands, **kwargs):
    """ Decorator to add a subcommand. """
    global _command_map

    command_object = cmd.Command(**kwargs)

    def add_command(function):
        global _command_map

        command_object.set_function(function)

        for command_name in commands:
            _command_map[command_name] = command_object

        return function

    return add_command


def command_map():
    return _command_map


def swept(parameters, name, value):
    """
    A copy of parameters with one value replaced. alpha sets gamma_d = alpha * gamma_J.
    """

    if name == 'alpha':
        if isinstance(parameters, generalized.LadderParams):
            parameters = parameters.effective()

        if parameters.gamma_j == 0:
            raise ConfigurationError('An alpha sweep needs gamma_j > 0.')

        return generalized.GLParams(value * parameters.gamma_j, parameters.gamma_j, parameters.omega)

    values = parameters.as_dict()

    if name not in values:
        raise ConfigurationError(f'Cannot sweep {name!r} for {parameters!r}.')

    values[name] = value
    return type(parameters)(**values)


def as_generalized(parameters):
    if isinstance(parameters, generalized.LadderParams):
        return parameters.effective()
    return parameters


def spectrum_row(p):
    liouvillian = generalized.build_Lg(p)
    spectrum = spectral.decompose(liouvillian)
    min_gap, coalescence = spectral.ep_distance(liouvillian)

    row = p.as_dict()

    for i, value in enumerate(spectrum.eigenvalues):
        row[f're_lambda_{i}'] = float(value.real)
        row[f'im_lambda_{i}'] = float(value.imag)

    row['defective'] = bool(spectrum.defective)
    row['min_gap'] = min_gap
    row['coalescence'] = coalescence

    return row


def evolution_frame(parameters, psi0, times):
    """
    Normalized postselected evolution of rho0 = |psi0><psi0| on a time grid.

    For a ladder system trace_unnormalized includes the global decay e^{-gamma_1 t}. survivor_model is
    the selection probability of the ladder or Lambda system that realizes the parameters.
    """

    rho0 = observables.density_matrix(psi0)

    if isinstance(parameters, generalized.LadderParams):
        system = parameters
        generator = parameters.reduce().generator
    else:
        system = generalized.realize(parameters)
        generator = generalized.build_Lg(parameters)

    rows = []

    for t, rho in zip(times, spectral.evolve_series(generator, rho0, times)):
        trace = float(np.trace(rho).real)
        survivor = math.exp(-system.global_decay * t) * trace
        state = spectral.normalize(rho, t)
        x, y, z = observables.bloch(state)

        rows.append({
            't': t,
            'x': x,
            'y': y,
            'z': z,
            'purity': observables.purity(state),
            'trace_unnormalized': survivor if system is parameters else trace,
            'p2': observables.p2(state),
            'survivor_model': survivor,
        })

    return pd.DataFrame(rows, columns = EVOLVE_COLUMNS)


def zdl_frame(parameters, psi0, times):
    """
    The closed-form zero-damping evolution with gamma = gamma_J.
    """

    gamma = parameters.gamma_j
    population = abs(psi0[1]) ** 2
    rows = []

    for t in times:
        state = observables.zdl_state(psi0, gamma, t)
        x, y, z = observables.bloch(state)
        rows.append({'t': t, 'x': x, 'y': y, 'z': z, 'purity': observables.purity(state), 'p2': observables.p2_poly(population, gamma, t)})

    return pd.DataFrame(rows, columns = ['t', 'x', 'y', 'z', 'purity', 'p2'])


def trajectory_frame(cfg, system, times):
    traj_cfg = trajectories.TrajectoryConfig(system, cfg.psi0, times[-1], cfg.trajectory_dt(system), cfg.n_traj, cfg.seed, times)
    result = trajectories.run_ensemble(traj_cfg, cfg.workers)

    model = trajectories.survivor_model(traj_cfg)
    master = spectral.evolve_normalized_series(system.reduce().generator, traj_cfg.rho0(), times)

    frame = pd.DataFrame({
        't': times,
        'p2_mc': result.p2(),
        'stderr': result.stderr_p2,
        'survivor_fraction': result.survivor_fraction,
        'survivor_stderr': result.stderr_survivor,
        'survivor_model': [model(t) for t in times],
        'p2_master': [observables.p2(rho) for rho in master],
    }, columns = TRAJECTORY_COLUMNS)

    return frame, traj_cfg


def _write(arguments, frame, parameters, out):
    cfg = arguments.config
    path = display.write_table(frame, parameters, out, cfg.format, arguments.stdout)

    if cfg.plot_stub:
        if path is None or cfg.format != 'csv':
            logger.warning('--plot-stub needs CSV output to a file; skipping the stub.')
        else:
            display.write_plot_stub(path, list(frame.columns), frame.columns[0])

    return path


@command('spectrum', sweeps = PARAMETER_SWEEPS, max_sweeps = 1)
def cmd_spectrum(args):
    """
    Eigenvalues of L_g, with exceptional point diagnostics.

    Prints one row per grid point: the parameters, the real and imaginary parts of the four eigenvalues
    ordered by decreasing real part, whether L_g is (nearly) defective, and the smallest gap and
    eigenvector overlap among the three eigenvalues that can coalesce. Ladder rates are converted to
    the gamma_d, gamma_J they realize. alpha sweeps set gamma_d = alpha * gamma_J.

    Usage:
    %TOOL% %COMMAND% [--gamma-d GD] [--gamma-j GJ] [--omega W] [--sweep NAME=START:STOP:N]
    """

    cfg = args.config

    if cfg.sweeps:
        sweep = cfg.sweeps[0]
        points = [as_generalized(swept(cfg.parameters, sweep.name, value)) for value in sweep.values()]
    else:
        points = [as_generalized(cfg.parameters)]

    frame = pd.DataFrame([spectrum_row(p) for p in points])
    _write(args, frame, cfg.echo(), cfg.out or '-')


@command('evolve')
def cmd_evolve(args):
    """
    Postselected evolution of the initial state, as Bloch vectors.

    Rows hold t, the Bloch vector, purity, the unnormalized trace, P2 and the predicted selection probability.
    Ladder rates (--gamma-1, --gamma-2) include the global decay in the trace. The default grid covers
    t * max(|gamma_d|, gamma_J, Omega) in [0, 10].

    Usage:
    %TOOL% %COMMAND% [--gamma-d GD --gamma-j GJ | --gamma-1 G1 --gamma-2 G2] [--omega W] [--psi0 STATE] [--t-max T] [--points N]
    """

    cfg = args.config
    frame = evolution_frame(cfg.parameters, cfg.psi0, cfg.times())
    _write(args, frame, cfg.echo(), cfg.out or '-')


@command('ep-locus', sweeps = ('gamma_d', 'gamma_j'), max_sweeps = 2)
def cmd_ep_locus(args):
    """
    Drive strengths Omega at which L_g has an exceptional point.

    Prints every root for each (gamma_d, gamma_J) grid point. The locus is even in gamma_d.

    Usage:
    %TOOL% %COMMAND% [--gamma-d GD] [--gamma-j GJ] [--sweep gamma_d=START:STOP:N] [--sweep gamma_j=START:STOP:N]
    """

    cfg = args.config
    p = as_generalized(cfg.parameters)
    grids = {sweep.name: sweep.values() for sweep in cfg.sweeps}

    rows = []

    for gamma_d, gamma_j in itertools.product(grids.get('gamma_d', [p.gamma_d]), grids.get('gamma_j', [p.gamma_j])):
        query = spectral.EPQuery(gamma_d, gamma_j)

        for omega in spectral.ep_locus(query):
            rows.append({'gamma_d': query.gamma_d, 'gamma_j': query.gamma_j, 'omega_root': omega})

    frame = pd.DataFrame(rows, columns = EP_COLUMNS)
    _write(args, frame, cfg.echo(), cfg.out or '-')


@command('trajectories', require_ladder = True)
def cmd_trajectories(args):
    """
    Monte-Carlo trajectories of the ladder system, postselected on no Gamma_1 jump.

    Compares the trajectory average of P2 and the survivor fraction with the master equation
    and the predicted selection probability. The default grid covers t * max(gamma_1, gamma_2, Omega)
    in [0, 5]; dt defaults to 1e-3 / max(gamma_1, gamma_2, Omega).

    Usage:
    %TOOL% %COMMAND% --gamma-1 G1 --gamma-2 G2 [--omega W] [--n-traj N] [--dt DT] [--seed S] [--workers W]
    """

    cfg = args.config
    times = cfg.times(constants.DEFAULT_TRAJECTORY_T_SCALE)
    frame, traj_cfg = trajectory_frame(cfg, cfg.parameters, times)
    _write(args, frame, {**cfg.echo(), 'dt': traj_cfg.dt}, cfg.out or '-')


@command('reproduce')
def cmd_reproduce(args):
    """
    Write the data behind one reproduction panel, one file per curve.

    fig2a-d compare negative, positive and zero damping. fig3a-c compare zero damping with the NHH and LL
    dynamics and add <panel>_collinearity with each path's distance from the straight line to |1>.
    fig3e holds the decay of P2, including a Monte-Carlo curve. --out names the output directory.

    Usage:
    %TOOL% %COMMAND% fig2a|fig2b|fig2c|fig2d|fig3a|fig3b|fig3c|fig3e [--out DIR] [--n-traj N] [--seed S] [--workers W]
    """

    cfg = args.config
    panel = scenarios.PANELS.get(cfg.panel)

    if panel is None:
        return cmd.BAD_USAGE

    directory = cfg.out or '.'

    if directory == '-':
        raise ConfigurationError('reproduce writes several files; --out must be a directory.')

    times = cfg.times(panel.t_scale, constants.PANEL_RATE)
    segment = scenarios.collinearity_segment(cfg.psi0)
    residuals = []

    logger.info(f'Reproducing {panel.name}: {panel.description}.')

    for curve in panel.curves:
        echo = {**cfg.echo(curve.parameters), 'curve': curve.name, 'method': curve.method}

        if curve.method == scenarios.MONTE_CARLO:
            frame, traj_cfg = trajectory_frame(cfg, curve.parameters, times)
            echo['dt'] = traj_cfg.dt
        elif curve.method == scenarios.ZDL_ANALYTIC:
            frame = zdl_frame(curve.parameters, cfg.psi0, times)
        else:
            frame = evolution_frame(curve.parameters, cfg.psi0, times)

        _write(args, frame, echo, display.table_path(directory, f'{panel.name}_{curve.name}', cfg.format))

        if panel.collinearity:
            path = [observables.BlochVector(x, y, z) for x, y, z in zip(frame['x'], frame['y'], frame['z'])]
            residuals.append({'curve': curve.name, 'residual': observables.collinearity(path, *segment)})

    if panel.collinearity:
        frame = pd.DataFrame(residuals, columns = ['curve', 'residual'])
        display.write_table(frame, cfg.echo(), display.table_path(directory, f'{panel.name}_collinearity', cfg.format), cfg.format, args.stdout)


def _add_options(parser):
    parser.add_argument('--out', help = 'output file, - for stdout (reproduce: output directory)')
    parser.add_argument('--format', choices = config.FORMATS, type = str.lower)
    parser.add_argument('--config', help = 'KEY=value file with defaults for these options')
    parser.add_argument('--gamma-d', dest = 'gamma_d')
    parser.add_argument('--gamma-j', dest = 'gamma_j')
    parser.add_argument('--omega')
    parser.add_argument('--gamma-1', dest = 'gamma_1')
    parser.add_argument('--gamma-2', dest = 'gamma_2')
    parser.add_argument('--psi0', help = 'psi0, ket1, ket2 or two amplitudes such as "0.6,0.8j"')
    parser.add_argument('--t-max', dest = 't_max')
    parser.add_argument('--points')
    parser.add_argument('--n-traj', dest = 'n_traj')
    parser.add_argument('--dt')
    parser.add_argument('--seed')
    parser.add_argument('--workers')
    parser.add_argument('--sweep', action = 'append', default = [], metavar = 'NAME=START:STOP:N')
    parser.add_argument('--plot-stub', dest = 'plot_stub', action = 'store_true', help = 'also write a <name>_plot.py stub')


def build_parser():
    parser = argparse.ArgumentParser(prog = constants.TOOL_NAME, description = 'Generalized Liouvillian simulator for a driven qubit.')
    parser.add_argument('--version', action = 'version', version = f'{constants.TOOL_NAME} {constants.VERSION}')
    subparsers = parser.add_subparsers(dest = 'command', required = True)

    for name, command_object in _command_map.items():
        subparser = subparsers.add_parser(
            name,
            help = command_object.short_help,
            description = '\n\n'.join(text for text in (command_object.short_help, command_object.long_help) if text),
            formatter_class = argparse.RawDescriptionHelpFormatter,
        )
        _add_options(subparser)

        if name == 'reproduce':
            subparser.add_argument('panel', nargs = '?')

    return parser


def run(argv, stdout = None, stderr = None, environ = None):
    """
    Parse argv, run the subcommand and return the exit code.
    """

    options = vars(build_parser().parse_args(argv))
    name = options.pop('command')
    command_object = _command_map[name]

    try:
        cfg = config.build(name, options, environ)
        return command_object.run(cmd.CommandArguments(name, cfg, stdout, stderr))
    except SimulationError as e:
        logger.error(f'{name} failed: {e}')
        return e.exit_code
