"""
Monte-Carlo wavefunction simulation of the driven ladder system |2> -> |1> -> |0>, postselected on
trajectories that never jump through Gamma_1 = |0><1|.

Trajectories are stepped in fixed blocks of constants.TRAJECTORY_BLOCK, vectorized over the block.
Every trajectory draws from its own random stream, seeded from (master_seed, trajectory index), and
blocks are reduced in a fixed order, so results do not depend on how many workers run the blocks.
"""
import concurrent.futures
import itertools
import logging
import math

import numpy as np

import algebra
import constants
import generalized
import observables
from errors import ConfigurationError, DegeneratePostselectionError, ValidationError

logger = logging.getLogger(constants.TOOL_NAME)

GAMMA_1 = 1
GAMMA_2 = 2


class TrajectoryConfig:

    def __init__(self, system, psi0, t_max, dt, n_traj, master_seed, sample_times):
        if not isinstance(system, generalized.LadderParams):
            raise ConfigurationError(f'Trajectories simulate a ladder system, got {system!r}.')

        self.system = system
        self.psi0 = self._check_psi0(psi0)

        self.t_max = float(t_max)
        if not np.isfinite(self.t_max) or self.t_max < 0:
            raise ConfigurationError(f't_max must be finite and non-negative, got {t_max}.')

        self.dt = float(dt)
        limit = constants.DT_FACTOR / max(system.rate_scale(), constants.RATE_EPSILON)
        if not self.dt > 0 or self.dt > limit * (1 + 1e-9):
            raise ConfigurationError(f'dt = {dt} must lie in (0, {limit:.6g}] for these rates.')

        self.n_traj = int(n_traj)
        if self.n_traj < 1:
            raise ConfigurationError(f'n_traj must be positive, got {n_traj}.')

        self.master_seed = int(master_seed)
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigurationError(f'master_seed must be a 64-bit unsigned integer, got {master_seed}.')

        self.sample_times = [float(t) for t in sample_times]
        if any(b < a for a, b in zip(self.sample_times, self.sample_times[1:])):
            raise ConfigurationError('sample_times must be sorted.')
        if self.sample_times and (self.sample_times[0] < 0 or self.sample_times[-1] > self.t_max * (1 + 1e-12)):
            raise ConfigurationError(f'sample_times must lie in [0, {self.t_max}].')

        self.n_steps = math.ceil(self.t_max / self.dt - 1e-9) if self.t_max > 0 else 0
        self.step = self.t_max / self.n_steps if self.n_steps else self.dt
        self.sample_steps = [min(self.n_steps, int(round(t / self.step))) for t in self.sample_times]


    @staticmethod
    def _check_psi0(psi0):
        psi0 = np.asarray(psi0, dtype = np.complex128).reshape(-1)

        if len(psi0) == 2:
            psi0 = np.concatenate([[0.0], psi0])

        if len(psi0) != 3:
            raise ValidationError(f'psi0 must have 2 or 3 amplitudes, got {len(psi0)}.')

        if abs(np.linalg.norm(psi0) - 1) > constants.NORM_TOL:
            raise ValidationError('psi0 must have unit norm.')

        if abs(psi0[0]) > constants.NORM_TOL:
            raise ValidationError('psi0 must be supported on {|1>, |2>}.')

        return psi0


    def rho0(self):
        """
        Initial density matrix on the {|1>, |2>} subspace.
        """
        return observables.density_matrix(self.psi0[1:])


    def as_dict(self):
        return {
            **self.system.as_dict(),
            't_max': self.t_max,
            'dt': self.dt,
            'n_traj': self.n_traj,
            'seed': self.master_seed,
            'points': len(self.sample_times),
        }


class TrajectoryRecord:
    """
    One stochastic realization. samples holds the states at the sample times reached before a Gamma_1 jump.
    """

    def __init__(self, index, jumps, samples, selected):
        self.index = index
        self.jumps = jumps
        self.samples = samples
        self.selected = selected


    def __repr__(self):
        return f'TrajectoryRecord(index={self.index}, jumps={len(self.jumps)}, selected={self.selected})'


class EnsembleResult:

    def __init__(self, times, rho_tilde, survivor_fraction, stderr_p2, stderr_survivor, survivors, n_traj):
        self.times = times
        self.rho_tilde = rho_tilde
        self.survivor_fraction = survivor_fraction
        self.stderr_p2 = stderr_p2
        self.stderr_survivor = stderr_survivor
        self.survivors = survivors
        self.n_traj = n_traj


    def p2(self):
        return [observables.p2(rho) for rho in self.rho_tilde]


def random_stream(master_seed, index):
    """
    The random generator of one trajectory.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key = (index,)))


def no_jump_propagator(system, step):
    """
    exp(-i H_eff step) restricted to {|1>, |2>}, H_eff = H - (i/2)(gamma_1|1><1| + gamma_2|2><2|).
    """

    h_eff = generalized.drive_hamiltonian(2, system.omega, 0, 1)
    h_eff[0, 0] -= 0.5j * system.gamma_1
    h_eff[1, 1] -= 0.5j * system.gamma_2

    return algebra.expm(-1j * h_eff, step)


def _simulate_block(cfg, indices):
    """
    Step the trajectories in indices together.

    Returns the sampled {|1>, |2>} amplitudes, a mask of which samples were taken before any
    Gamma_1 jump, the final survival flags and the jump lists.
    """

    size = len(indices)
    n_samples = len(cfg.sample_steps)
    gamma_1, gamma_2, step = cfg.system.gamma_1, cfg.system.gamma_2, cfg.step

    streams = [random_stream(cfg.master_seed, index) for index in indices]
    chunk = max(1, int(constants.RANDOM_CHUNK))
    draws = None

    u = no_jump_propagator(cfg.system, step)

    a = np.full(size, cfg.psi0[1])
    b = np.full(size, cfg.psi0[2])
    alive = np.ones(size, dtype = bool)
    jumps = [[] for _ in range(size)]

    samples = np.zeros((size, n_samples, 2), dtype = np.complex128)
    sampled = np.zeros((size, n_samples), dtype = bool)
    next_sample = 0

    for k in range(cfg.n_steps + 1):
        while next_sample < n_samples and cfg.sample_steps[next_sample] == k:
            samples[:, next_sample, 0] = a
            samples[:, next_sample, 1] = b
            sampled[:, next_sample] = alive
            next_sample += 1

        if k == cfg.n_steps:
            break

        # Consecutive draws continue each stream, so the chunk size does not change the numbers.
        if k % chunk == 0:
            count = min(chunk, cfg.n_steps - k)
            draws = np.stack([stream.random((count, 2)) for stream in streams], axis = 1)

        r = draws[k % chunk]
        p1 = gamma_1 * np.abs(a) ** 2 * step
        p2 = gamma_2 * np.abs(b) ** 2 * step
        total = p1 + p2

        jumped = alive & (r[:, 0] < total)
        first = jumped & (r[:, 1] * total < p1)
        second = jumped & ~first
        quiet = alive & ~jumped

        na = u[0, 0] * a + u[0, 1] * b
        nb = u[1, 0] * a + u[1, 1] * b
        norm = np.sqrt(np.abs(na) ** 2 + np.abs(nb) ** 2)
        a = np.where(quiet, na / norm, a)
        b = np.where(quiet, nb / norm, b)

        # Gamma_2 jump: the state collapses onto |1>, keeping the phase of the |2> amplitude.
        magnitude = np.abs(b)
        phase = np.divide(b, magnitude, out = np.ones_like(b), where = magnitude > 0)
        a = np.where(second, phase, a)
        b = np.where(second, 0, b)

        alive &= ~first

        if jumped.any():
            t = (k + 1) * step
            for i in np.flatnonzero(jumped):
                jumps[i].append((t, GAMMA_1 if first[i] else GAMMA_2))

    return samples, sampled, alive, jumps


def simulate_trajectory(cfg, index):
    samples, sampled, alive, jumps = _simulate_block(cfg, [index])

    states = [
        np.concatenate([[0.0], samples[0, s]])
        for s in range(len(cfg.sample_steps))
        if sampled[0, s]
    ]

    return TrajectoryRecord(index, jumps[0], states, bool(alive[0]))


def _reduce_block(cfg, indices):
    """
    Sums over the selected trajectories of one block, per sample time.
    """

    samples, sampled, alive, jumps = _simulate_block(cfg, indices)

    a = np.where(sampled, samples[:, :, 0], 0)
    b = np.where(sampled, samples[:, :, 1], 0)

    rho = np.empty((len(cfg.sample_steps), 2, 2), dtype = np.complex128)
    rho[:, 0, 0] = (a * a.conj()).sum(axis = 0)
    rho[:, 0, 1] = (a * b.conj()).sum(axis = 0)
    rho[:, 1, 0] = (b * a.conj()).sum(axis = 0)
    rho[:, 1, 1] = (b * b.conj()).sum(axis = 0)

    p2 = np.abs(b) ** 2

    logger.debug(f'Block {indices[0]}-{indices[-1]}: {int(alive.sum())}/{len(indices)} survived.')

    return sampled.sum(axis = 0), rho, p2.sum(axis = 0), (p2 ** 2).sum(axis = 0)


def p2_stderr(p2_sum, p2_sq_sum, count):
    """
    Standard error of the mean P2 over count survivors.

    Never below 1 / (2 count), the half-width the Wilson score interval keeps for a sample
    without spread, so a handful of identical survivors still reports an error.
    """

    floor = 1 / (2 * count)

    if count < 2:
        return floor

    mean = p2_sum / count
    variance = max(p2_sq_sum / count - mean ** 2, 0.0)

    return max(math.sqrt(variance / (count - 1)), floor)


def blocks(n_traj, size = constants.TRAJECTORY_BLOCK):
    return [list(range(start, min(start + size, n_traj))) for start in range(0, n_traj, size)]


def run_ensemble(cfg, workers = 1):
    """
    Average |psi><psi| over the selected trajectories at every sample time and normalize.
    """

    chunks = blocks(cfg.n_traj)
    n_samples = len(cfg.sample_steps)

    logger.info(f'Running {cfg.n_traj} trajectories in {len(chunks)} blocks on {workers} worker(s).')

    counts = np.zeros(n_samples, dtype = np.int64)
    rho_sum = np.zeros((n_samples, 2, 2), dtype = np.complex128)
    p2_sum = np.zeros(n_samples)
    p2_sq_sum = np.zeros(n_samples)

    if workers > 1:
        executor = concurrent.futures.ProcessPoolExecutor(max_workers = workers)
        results = executor.map(_reduce_block, itertools.repeat(cfg), chunks)
    else:
        executor = None
        results = map(_reduce_block, itertools.repeat(cfg), chunks)

    try:
        # map yields in submission order, which fixes the summation order.
        for block_counts, block_rho, block_p2, block_p2_sq in results:
            counts += block_counts
            rho_sum += block_rho
            p2_sum += block_p2
            p2_sq_sum += block_p2_sq
    finally:
        if executor is not None:
            executor.shutdown()

    rho_tilde = []
    stderr_p2 = []

    for s, t in enumerate(cfg.sample_times):
        if counts[s] == 0:
            raise DegeneratePostselectionError(f'No trajectory survived postselection at t={t}.', t)

        trace = np.trace(rho_sum[s]).real
        rho_tilde.append(observables.hermitize(rho_sum[s] / trace))

        stderr_p2.append(p2_stderr(p2_sum[s], p2_sq_sum[s], int(counts[s])))

    survivor_fraction = counts / cfg.n_traj
    stderr_survivor = np.sqrt(survivor_fraction * (1 - survivor_fraction) / cfg.n_traj)

    return EnsembleResult(
        list(cfg.sample_times),
        rho_tilde,
        [float(f) for f in survivor_fraction],
        stderr_p2,
        [float(s) for s in stderr_survivor],
        [int(c) for c in counts],
        cfg.n_traj,
    )


def survivor_model(cfg):
    """
    Predicted selection probability t -> Tr[exp(-gamma_1 t) exp(L_g t) rho0].
    """

    reduced = generalized.reduce_ladder(cfg.system)
    vector = algebra.vec_row(cfg.rho0())
    trace_row = algebra.vec_row(algebra.identity(2))

    def probability(t):
        evolved = algebra.expm(reduced.generator.matrix, t) @ vector
        return float((math.exp(-reduced.global_decay * t) * (trace_row @ evolved)).real)

    return probability
