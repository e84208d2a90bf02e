import io
import json
import os

import numpy as np
import pandas as pd
import pytest

import cli
import constants


def run(*argv, environ = None):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout = stdout, stderr = stderr, environ = environ or {})
    return code, stdout.getvalue(), stderr.getvalue()


def read_table(text):
    return pd.read_csv(io.StringIO(text), comment = '#')


def header(text):
    first = text.splitlines()[0]
    prefix = f'# {constants.TOOL_NAME} {constants.VERSION} '
    assert first.startswith(prefix)
    return json.loads(first[len(prefix):])


def test_every_command_is_registered():
    assert set(cli.command_map()) == {'spectrum', 'evolve', 'ep-locus', 'trajectories', 'reproduce'}

    for command_object in cli.command_map().values():
        assert command_object.short_help
        assert command_object.usage.startswith('Usage:')


def test_spectrum_without_drive():
    code, out, _ = run('spectrum', '--gamma-d', '1', '--gamma-j', '0.7', '--omega', '0')
    frame = read_table(out)

    assert code == 0
    assert len(frame) == 1
    assert np.allclose([frame[f're_lambda_{i}'][0] for i in range(4)], [0.0, -0.5, -0.5, -1.0], atol = 1e-12)
    assert np.allclose([frame[f'im_lambda_{i}'][0] for i in range(4)], 0.0, atol = 1e-12)


def test_spectrum_sweep_finds_the_exceptional_point():
    code, out, _ = run('spectrum', '--gamma-d', '1', '--gamma-j', '1', '--sweep', 'omega=0:1:101')
    frame = read_table(out)

    assert code == 0
    assert len(frame) == 101
    assert int(frame['min_gap'].idxmin()) == 25
    assert frame['omega'][25] == pytest.approx(0.25)
    assert bool(frame['defective'][25])


def test_spectrum_converts_ladder_rates():
    code, out, _ = run('spectrum', '--gamma-1', '2', '--gamma-2', '1')
    frame = read_table(out)

    assert code == 0
    assert frame['gamma_d'][0] == -1.0
    assert frame['gamma_j'][0] == 1.0


def test_spectrum_alpha_sweep():
    code, out, _ = run('spectrum', '--gamma-j', '2', '--sweep', 'alpha=-1:1:3')
    frame = read_table(out)

    assert code == 0
    assert list(frame['gamma_d']) == [-2.0, 0.0, 2.0]


def test_sweep_errors():
    assert run('spectrum', '--sweep', 'omega=0:1:3', '--sweep', 'gamma_j=0:1:3')[0] == constants.EXIT_CONFIG
    assert run('spectrum', '--sweep', 'omega=0:1')[0] == constants.EXIT_CONFIG
    assert run('evolve', '--sweep', 'omega=0:1:3')[0] == constants.EXIT_CONFIG
    assert run('ep-locus', '--sweep', 'omega=0:1:3')[0] == constants.EXIT_CONFIG


def test_ep_locus_special_cases():
    code, out, _ = run('ep-locus', '--gamma-d', '1', '--gamma-j', '0')
    frame = read_table(out)

    assert code == 0
    assert list(frame.columns) == ['gamma_d', 'gamma_j', 'omega_root']
    assert len(frame) == 1
    assert frame['omega_root'][0] == pytest.approx(0.5, abs = 1e-9)

    frame = read_table(run('ep-locus', '--gamma-d', '1', '--gamma-j', '1')[1])
    assert frame['omega_root'][0] == pytest.approx(0.25, abs = 1e-9)


def test_ep_locus_grid_is_even_in_gamma_d():
    code, out, _ = run('ep-locus', '--sweep', 'gamma_d=-1:1:5', '--sweep', 'gamma_j=0.5:1.5:3')
    frame = read_table(out)

    assert code == 0
    assert set(frame['gamma_j']) == {0.5, 1.0, 1.5}

    for (gamma_d, gamma_j), group in frame.groupby(['gamma_d', 'gamma_j']):
        if gamma_d == 0:
            continue
        mirror = frame[(frame['gamma_d'] == -gamma_d) & (frame['gamma_j'] == gamma_j)]
        assert np.allclose(sorted(group['omega_root']), sorted(mirror['omega_root']), atol = 1e-12)


def test_evolve_zero_damping_decays_polynomially():
    code, out, _ = run('evolve', '--gamma-d', '0', '--gamma-j', '1', '--omega', '0', '--t-max', '10', '--points', '11')
    frame = read_table(out)

    assert code == 0
    assert list(frame.columns) == cli.EVOLVE_COLUMNS
    assert np.allclose(frame['p2'], 1 / (frame['t'] + 2), atol = 1e-10)
    assert np.allclose(frame['survivor_model'], np.exp(-frame['t']) * (1 + frame['t'] / 2), atol = 1e-10)


def test_evolve_nhh_stays_pure():
    code, out, _ = run('evolve', '--gamma-d', '1', '--gamma-j', '0', '--omega', '2', '--points', '41')
    frame = read_table(out)

    assert code == 0
    assert np.allclose(frame['purity'], 1.0, atol = 1e-10)


def test_evolve_reaches_the_ll_steady_state():
    code, out, _ = run('evolve', '--gamma-d', '1', '--gamma-j', '1', '--omega', '2', '--t-max', '50', '--points', '11')
    frame = read_table(out)
    last = frame.iloc[-1]

    assert code == 0
    assert np.allclose([last['x'], last['y'], last['z']], [0.0, -4 / 9, 1 / 9], atol = 1e-6)
    assert np.allclose(frame['trace_unnormalized'], 1.0, atol = 1e-9)


def test_evolve_ladder_trace_includes_the_global_decay():
    code, out, _ = run('evolve', '--gamma-1', '1', '--gamma-2', '1', '--t-max', '2', '--points', '3')
    frame = read_table(out)

    assert code == 0
    assert np.allclose(frame['trace_unnormalized'], frame['survivor_model'])
    assert frame['trace_unnormalized'][2] == pytest.approx(np.exp(-2) * 2, abs = 1e-10)


def test_evolve_initial_states():
    frame = read_table(run('evolve', '--psi0', 'ket2', '--gamma-d', '1', '--gamma-j', '0', '--t-max', '1', '--points', '2')[1])
    assert frame['z'][0] == pytest.approx(-1.0)

    frame = read_table(run('evolve', '--psi0', '0.6,0.8j', '--t-max', '1', '--points', '2')[1])
    assert frame['p2'][0] == pytest.approx(0.64)

    assert run('evolve', '--psi0', '1,2,3')[0] == constants.EXIT_CONFIG


def test_empty_postselection_exits_with_its_own_code():
    code, _, _ = run('evolve', '--gamma-d', '1000', '--gamma-j', '0', '--psi0', 'ket2', '--t-max', '1', '--points', '3')
    assert code == constants.EXIT_POSTSELECTION


def test_trajectories_need_a_ladder():
    assert run('trajectories', '--gamma-d', '1', '--gamma-j', '1', '--n-traj', '10')[0] == constants.EXIT_CONFIG
    assert run('trajectories', '--gamma-1', '1', '--n-traj', '10')[0] == constants.EXIT_CONFIG


def test_trajectories_do_not_depend_on_workers():
    argv = ['trajectories', '--gamma-1', '1', '--gamma-2', '1', '--n-traj', '200', '--t-max', '2', '--points', '6']

    code, serial, _ = run(*argv, '--workers', '1')
    _, parallel, _ = run(*argv, '--workers', '2')

    assert code == 0
    assert serial == parallel

    frame = read_table(serial)
    assert list(frame.columns) == cli.TRAJECTORY_COLUMNS
    assert frame['survivor_fraction'][0] == 1.0
    assert np.allclose(frame['p2_master'], 1 / (frame['t'] + 2), atol = 1e-10)

    echo = header(serial)
    assert echo['n_traj'] == 200
    assert echo['dt'] == 1e-3
    assert 'workers' not in echo


def test_trajectories_reject_a_coarse_dt():
    assert run('trajectories', '--gamma-1', '1', '--gamma-2', '1', '--dt', '0.1', '--n-traj', '10')[0] == constants.EXIT_CONFIG


def test_reproduce_zero_damping_panel(tmp_path):
    code, _, _ = run('reproduce', 'fig3a', '--out', str(tmp_path), '--points', '51')

    assert code == 0
    assert sorted(os.listdir(tmp_path)) == ['fig3a_collinearity.csv', 'fig3a_ll.csv', 'fig3a_nhh.csv', 'fig3a_zdl.csv']

    with open(tmp_path / 'fig3a_collinearity.csv', encoding = 'utf-8') as f:
        residuals = read_table(f.read()).set_index('curve')['residual']

    assert residuals['zdl'] <= 1e-10

    with open(tmp_path / 'fig3a_zdl.csv', encoding = 'utf-8') as f:
        text = f.read()

    echo = header(text)
    assert echo['panel'] == 'fig3a'
    assert echo['curve'] == 'zdl'
    assert echo['gamma_d'] == 0.0
    assert read_table(text)['t'].iloc[-1] == pytest.approx(10.0)


def test_reproduce_damping_panel(tmp_path):
    code, _, _ = run('reproduce', 'fig2c', '--out', str(tmp_path / 'fig2c'), '--points', '21')

    assert code == 0
    assert sorted(os.listdir(tmp_path / 'fig2c')) == ['fig2c_negative.csv', 'fig2c_positive.csv', 'fig2c_zero.csv']


def test_reproduce_decay_panel(tmp_path):
    code, _, _ = run('reproduce', 'fig3e', '--out', str(tmp_path), '--points', '4', '--t-max', '3', '--n-traj', '300')

    assert code == 0

    with open(tmp_path / 'fig3e_zdl_analytic.csv', encoding = 'utf-8') as f:
        analytic = read_table(f.read())
    with open(tmp_path / 'fig3e_zdl_monte_carlo.csv', encoding = 'utf-8') as f:
        monte_carlo = read_table(f.read())

    assert np.allclose(analytic['p2'], 1 / (analytic['t'] + 2))
    assert np.allclose(monte_carlo['p2_master'], analytic['p2'], atol = 1e-10)


def test_reproduce_unknown_panel_prints_usage():
    code, _, err = run('reproduce', 'fig9')

    assert code == constants.EXIT_CONFIG
    assert 'Usage:' in err
    assert 'glsim reproduce' in err

    assert run('reproduce')[0] == constants.EXIT_CONFIG
    assert run('reproduce', 'fig2a', '--out', '-')[0] == constants.EXIT_CONFIG


def test_configuration_precedence(tmp_path):
    path = tmp_path / 'run.env'
    path.write_text('GAMMA_D=0.5\nOMEGA=2\nGAMMA-J=3\n', encoding = 'utf-8')

    _, out, _ = run('spectrum', '--config', str(path), '--gamma-j', '0.25', environ = {'GLSIM_OMEGA': '1'})
    echo = header(out)

    assert echo['gamma_d'] == 0.5
    assert echo['omega'] == 1.0
    assert echo['gamma_j'] == 0.25

    _, out, _ = run('spectrum', '--config', str(path), '--omega', '3', environ = {'GLSIM_OMEGA': '1'})
    assert header(out)['omega'] == 3.0
    assert header(out)['gamma_j'] == 3.0


def test_configuration_errors(tmp_path):
    path = tmp_path / 'run.env'
    path.write_text('COLOUR=red\n', encoding = 'utf-8')

    assert run('spectrum', '--config', str(path))[0] == constants.EXIT_CONFIG
    assert run('spectrum', '--config', str(tmp_path / 'missing.env'))[0] == constants.EXIT_CONFIG
    assert run('spectrum', '--gamma-d', '1', '--gamma-1', '1', '--gamma-2', '1')[0] == constants.EXIT_CONFIG
    assert run('spectrum', '--gamma-j', '-1')[0] == constants.EXIT_CONFIG
    assert run('evolve', '--points', '1')[0] == constants.EXIT_CONFIG
    assert run('spectrum', environ = {'GLSIM_OMEGA': 'fast'})[0] == constants.EXIT_CONFIG


def test_json_output():
    code, out, _ = run('ep-locus', '--gamma-d', '1', '--gamma-j', '0', '--format', 'json')
    document = json.loads(out)

    assert code == 0
    assert document['tool'] == constants.TOOL_NAME
    assert document['version'] == constants.VERSION
    assert document['parameters']['mode'] == 'ep-locus'
    assert document['rows'][0]['omega_root'] == pytest.approx(0.5, abs = 1e-9)


def test_output_is_reproducible(tmp_path):
    argv = ['evolve', '--gamma-d', '-1', '--gamma-j', '1', '--omega', '0.24', '--points', '21']

    run(*argv, '--out', str(tmp_path / 'a.csv'))
    run(*argv, '--out', str(tmp_path / 'b' / 'b.csv'))

    assert (tmp_path / 'a.csv').read_bytes() == (tmp_path / 'b' / 'b.csv').read_bytes()


def test_plot_stub(tmp_path):
    code, _, _ = run('evolve', '--out', str(tmp_path / 'evolve.csv'), '--plot-stub', '--points', '5')

    assert code == 0

    stub = (tmp_path / 'evolve_plot.py').read_text(encoding = 'utf-8')
    assert "'evolve.csv'" in stub
    assert "'purity'" in stub
    assert 'matplotlib' in stub


def test_plot_stub_skipped_for_stdout():
    code, out, _ = run('evolve', '--plot-stub', '--points', '5')

    assert code == 0
    assert out.startswith('# glsim')
