"""Seeded ensembles of overdamped Langevin trajectories.

Trajectories are split into fixed-size blocks. Block ``b`` draws its noise
from a Philox stream keyed by ``(seed, b)``, so the ensemble depends only on
the seed and the configuration, never on how many worker threads ran the
blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import SI, DomainError, PhysicalConstants, TrapParameters

BLOCK_SIZE = 4096


class StabilityError(DomainError):
    pass


@dataclass(frozen=True)
class SimConfig:
    dt: float
    n_steps: int
    n_trajectories: int
    seed: int = 0
    x0: float = 0.0
    record_every: int = 1  # keep every k-th step; step 0 and n_steps are always kept

    def __post_init__(self):
        if not self.dt > 0:
            raise DomainError("dt must be positive")
        if self.n_steps < 1 or self.n_trajectories < 1:
            raise DomainError("need at least one step and one trajectory")
        if self.record_every < 1:
            raise DomainError("record_every must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")

    def record_steps(self) -> np.ndarray:
        steps = np.arange(0, self.n_steps + 1, self.record_every)
        if steps[-1] != self.n_steps:
            steps = np.append(steps, self.n_steps)
        return steps


@dataclass(frozen=True, eq=False)
class TrajectoryEnsemble:
    positions: np.ndarray  # (n_trajectories, n_records)
    times: np.ndarray
    config: SimConfig

    def __post_init__(self):
        self.positions.setflags(write=False)
        self.times.setflags(write=False)


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    """Per-time sample statistics.

    ``variance_t`` is about the sample mean (ddof=1); ``msd_t`` is about the
    origin, so msd = (n-1)/n * variance + mean**2.
    """

    times: np.ndarray
    mean_t: np.ndarray
    variance_t: np.ndarray
    msd_t: np.ndarray


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def _run_blocks(config: SimConfig, step, workers: int | None) -> TrajectoryEnsemble:
    """Drive ``step(x, rng)`` over all blocks and collect the recorded steps."""
    n = config.n_trajectories
    record_steps = config.record_steps()
    positions = np.empty((n, len(record_steps)))
    bounds = [(b, lo, min(lo + BLOCK_SIZE, n)) for b, lo in enumerate(range(0, n, BLOCK_SIZE))]

    def run(block):
        b, lo, hi = block
        rng = _block_rng(config.seed, b)
        x = np.full(hi - lo, float(config.x0))
        positions[lo:hi, 0] = x
        col = 1
        for i in range(1, config.n_steps + 1):
            x = step(x, rng)
            if col < len(record_steps) and record_steps[col] == i:
                positions[lo:hi, col] = x
                col += 1

    if workers is None or workers <= 1:
        for block in bounds:
            run(block)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, bounds))
    return TrajectoryEnsemble(positions, record_steps * config.dt, config)


def simulate_free(D: float, config: SimConfig, workers: int | None = None) -> TrajectoryEnsemble:
    """Euler-Maruyama for dx = sqrt(2D) dW (exact in distribution for constant D)."""
    if D < 0:
        raise DomainError("D must be non-negative")
    amp = math.sqrt(2 * D * config.dt)

    def step(x, rng):
        return x + amp * rng.standard_normal(x.shape[0])

    return _run_blocks(config, step, workers)


def simulate_trapped(
    trap: TrapParameters,
    temperature: float,
    config: SimConfig,
    *,
    method: str = "euler",
    constants: PhysicalConstants = SI,
    workers: int | None = None,
) -> TrajectoryEnsemble:
    """Overdamped particle in a harmonic trap: drift -kM x, diffusion k_B T M.

    ``method="exact"`` uses the exact OU transition instead of Euler-Maruyama,
    which removes the time-discretisation bias entirely.
    """
    kM = trap.relaxation_rate_kM
    if not kM > 0:
        raise DomainError("trapped simulation needs a positive relaxation rate")
    if config.dt > 0.05 / kM:
        raise StabilityError(f"dt = {config.dt:.3g} exceeds 0.05/kM = {0.05 / kM:.3g}")
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    D = trap.diffusion_coefficient(temperature, constants)
    dt = config.dt

    if method == "euler":
        decay = 1.0 - kM * dt
        amp = math.sqrt(2 * D * dt)
    elif method == "exact":
        decay = math.exp(-kM * dt)
        amp = math.sqrt(D / kM * -math.expm1(-2 * kM * dt))
    else:
        raise DomainError(f"unknown method {method!r}")

    if amp == 0:
        # T = 0: the noise term vanishes, no draws needed
        def step(x, rng):
            return decay * x
    else:
        def step(x, rng):
            return decay * x + amp * rng.standard_normal(x.shape[0])

    return _run_blocks(config, step, workers)


def ensemble_stats(ensemble: TrajectoryEnsemble) -> EnsembleStats:
    pos = ensemble.positions
    if pos.shape[0] < 2:
        raise DomainError("sample variance needs at least two trajectories")
    return EnsembleStats(
        times=ensemble.times,
        mean_t=pos.mean(axis=0),
        variance_t=pos.var(axis=0, ddof=1),
        msd_t=np.mean(pos**2, axis=0),
    )
