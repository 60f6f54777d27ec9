"""Grid solvers for the trapped Fokker-Planck equation and the harmonic
Schrödinger equation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import get_lapack_funcs

from .core import SI, DomainError, PhysicalConstants, SolverError, TrapParameters, gaussian_pdf, GaussianState
from .grid import NORM_TOL, GridField, GridSpec, trapezoid_weights

NEGATIVE_BLOWUP = -1e-6


@dataclass(frozen=True, eq=False)
class SolveReport:
    final_field: GridField
    snapshots: list[tuple[float, GridField]]
    mass_drift: float
    norm_drift: float
    trace: dict[str, np.ndarray] = field(default_factory=dict)


def field_moments(f: GridField) -> tuple[float, float, float]:
    """Trapezoid norm, mean and central second moment of the density."""
    w = trapezoid_weights(f.grid.n_points, f.dx)
    p = f.density()
    x = f.x
    norm = float(w @ p)
    mean = float(w @ (x * p)) / norm
    var = float(w @ ((x - mean) ** 2 * p)) / norm
    return norm, mean, var


def l1_distance(a: GridField, b: GridField) -> float:
    if a.grid != b.grid:
        raise DomainError("l1_distance needs fields on identical grids")
    w = trapezoid_weights(a.grid.n_points, a.dx)
    return float(w @ np.abs(a.density() - b.density()))


def density_field(grid: GridSpec, state: GaussianState, check_norm: bool = True) -> GridField:
    return GridField(grid, gaussian_pdf(state, grid.x), check_norm=check_norm)


def _snapshot_steps(times, dt, n_steps):
    out = {}
    for t in sorted(times):
        out.setdefault(min(max(int(round(t / dt)), 0), n_steps), []).append(t)
    return out


# -- Fokker-Planck -----------------------------------------------------------


def fokker_planck_operator(x: np.ndarray, kM: float, D: float):
    """Tridiagonal (lower, diag, upper) of dp/dt = d/dx [kM x p + D dp/dx].

    Flux form on the nodes: the flux between nodes i and i+1 uses the
    midpoint drift and the averaged density, the boundary nodes own half
    cells and see zero flux through the wall. The trapezoid weights are
    then a left null vector, so the discrete mass is conserved exactly.
    """
    n = x.size
    dx = x[1] - x[0]
    xm = 0.5 * (x[:-1] + x[1:])
    a = 0.5 * kM * xm - D / dx  # coefficient of p_i in the flux F_{i+1/2}
    b = 0.5 * kM * xm + D / dx  # coefficient of p_{i+1}
    diag = np.zeros(n)
    lower = np.zeros(n - 1)
    upper = np.zeros(n - 1)
    diag[:-1] += a / dx
    upper[:] = b / dx
    diag[1:] -= b / dx
    lower[:] = -a / dx
    # half cells at the walls
    diag[0] *= 2
    upper[0] *= 2
    diag[-1] *= 2
    lower[-1] *= 2
    return lower, diag, upper


def fp_initial_width(dx: float, sigma0: float) -> float:
    """Width of the narrow Gaussian that stands in for the delta at x0."""
    if math.isinf(sigma0):
        return 3 * dx
    return max(3 * dx, sigma0 / 100)


def solve_fokker_planck(
    trap: TrapParameters,
    temperature: float,
    x0: float,
    t_end: float,
    dt: float,
    grid: GridSpec,
    snapshot_times=(),
    constants: PhysicalConstants = SI,
) -> SolveReport:
    """Crank-Nicolson integration from a narrow Gaussian centred at x0."""
    kM = trap.relaxation_rate_kM
    D = trap.diffusion_coefficient(temperature, constants)
    if not D > 0:
        raise SolverError("Fokker-Planck solve needs a positive diffusion coefficient")
    if kM < 0:
        raise SolverError("relaxation rate must be non-negative")
    if not (t_end > 0 and dt > 0):
        raise SolverError("t_end and dt must be positive")
    dx = grid.dx
    if dt > 0.25 * dx * dx / D * (1 + 1e-12):
        raise SolverError(f"dt = {dt:.4g} exceeds 0.25 dx^2 / D = {0.25 * dx * dx / D:.4g}")
    if kM > 0 and dt > 0.05 / kM * (1 + 1e-12):
        raise SolverError(f"dt = {dt:.4g} exceeds 0.05 / kM = {0.05 / kM:.4g}")
    if kM > 0:
        sigma0 = math.sqrt(trap.stationary_variance(temperature, constants))
        spread = sigma0
    else:
        sigma0 = math.inf
        spread = math.sqrt(2 * D * t_end)
    half = abs(x0) + 8 * spread
    if not grid.covers(half):
        raise SolverError(f"undersized grid: need [-{half:.6g}, {half:.6g}]")

    x = grid.x
    w = trapezoid_weights(grid.n_points, dx)
    p = gaussian_pdf(GaussianState(x0, fp_initial_width(dx, sigma0) ** 2), x)
    p = p / (w @ p)
    mass0 = float(w @ p)

    lower, diag, upper = fokker_planck_operator(x, kM, D)
    h = 0.5 * dt
    gttrf, gttrs = get_lapack_funcs(("gttrf", "gttrs"), dtype=np.float64)
    dl, d, du, du2, ipiv, info = gttrf(-h * lower, 1.0 - h * diag, -h * upper)
    if info != 0:
        raise SolverError(f"Crank-Nicolson factorisation failed (info={info})")

    n_steps = max(1, int(math.ceil(t_end / dt - 1e-9)))
    wanted = _snapshot_steps(snapshot_times, dt, n_steps)
    snapshots = []

    def emit(step):
        pmin = p.min()
        if pmin < NEGATIVE_BLOWUP:
            raise SolverError(f"negative density {pmin:.3g} at t = {step * dt:.6g}")
        return GridField(grid, np.clip(p, 0.0, None), check_norm=False)

    if 0 in wanted:
        snapshots += [(t, emit(0)) for t in wanted[0]]
    for step in range(1, n_steps + 1):
        rhs = p + h * diag * p
        rhs[:-1] += h * upper * p[1:]
        rhs[1:] += h * lower * p[:-1]
        p, info = gttrs(dl, d, du, du2, ipiv, rhs)
        if info != 0 or not np.isfinite(p[0]):
            raise SolverError("Crank-Nicolson solve failed")
        if step in wanted:
            snap = emit(step)
            snapshots += [(t, snap) for t in wanted[step]]
    final = emit(n_steps)
    drift = abs(float(w @ p) - mass0)
    return SolveReport(final, snapshots, mass_drift=drift, norm_drift=drift)


# -- Schrödinger -------------------------------------------------------------


def wavenumbers(grid: GridSpec) -> np.ndarray:
    return 2 * math.pi * np.fft.fftfreq(grid.n_points, d=grid.dx)


def energy_components(
    psi: GridField, mass: float, omega: float, constants: PhysicalConstants = SI
) -> tuple[float, float]:
    """Spectral kinetic and potential energy expectations of a wavefunction."""
    hbar = constants.hbar
    n = psi.grid.n_points
    dx = psi.dx
    phat = np.fft.fft(psi.values)
    k = wavenumbers(psi.grid)
    kinetic = hbar**2 / (2 * mass) * float(np.sum(k**2 * np.abs(phat) ** 2)) * dx / n
    potential = 0.5 * mass * omega**2 * float(np.sum(psi.x**2 * psi.density())) * dx
    return kinetic, potential


def _classical_amplitude(psi: GridField, mass: float, omega: float, hbar: float) -> float:
    _, mean, _ = field_moments(psi)
    dpsi = np.fft.ifft(1j * wavenumbers(psi.grid) * np.fft.fft(psi.values))
    momentum = hbar * float(np.sum(np.conj(psi.values) * -1j * dpsi).real) * psi.dx
    return math.hypot(mean, momentum / (mass * omega))


def solve_schrodinger(
    mass: float,
    omega: float,
    psi0: GridField,
    t_end: float,
    dt: float,
    snapshot_times=(),
    constants: PhysicalConstants = SI,
    trace_every: int = 0,
) -> SolveReport:
    """Strang split-step Fourier propagation in V = m omega^2 x^2 / 2.

    Half potential kick, full kinetic step in wavenumber space, half kick.
    With ``trace_every > 0`` the report's ``trace`` holds t, mean, variance,
    kinetic and potential energy every that many steps.
    """
    if psi0.kind != "wavefunction":
        raise DomainError("psi0 must be a wavefunction field")
    if abs(psi0.norm() - 1.0) > NORM_TOL:
        raise DomainError(f"psi0 not normalized: norm = {psi0.norm():.10g}")
    if not (mass > 0 and omega > 0 and t_end > 0 and dt > 0):
        raise DomainError("mass, omega, t_end and dt must be positive")
    period = 2 * math.pi / omega
    if dt > 0.02 * period * (1 + 1e-12):
        raise DomainError(f"dt = {dt:.4g} exceeds 0.02 of the period {period:.4g}")
    hbar = constants.hbar
    sigma = math.sqrt(hbar / (2 * mass * omega))
    psi0.grid.require_span(_classical_amplitude(psi0, mass, omega, hbar) + 8 * sigma)

    grid = psi0.grid
    n_steps = max(1, int(math.ceil(t_end / dt - 1e-9)))
    dt = t_end / n_steps
    x = grid.x
    k = wavenumbers(grid)
    half_kick = np.exp(-0.5j * dt * 0.5 * mass * omega**2 * x**2 / hbar)
    drift = np.exp(-0.5j * dt * hbar * k**2 / mass)

    psi = np.array(psi0.values)
    norm0 = psi0.norm()
    wanted = _snapshot_steps(snapshot_times, dt, n_steps)
    snapshots = []
    trace = {key: [] for key in ("t", "mean", "variance", "kinetic", "potential")}

    def field_now():
        return GridField(grid, psi, kind="wavefunction", check_norm=False)

    def record(step):
        f = field_now()
        _, mean, var = field_moments(f)
        kin, pot = energy_components(f, mass, omega, constants)
        for key, val in zip(trace, (step * dt, mean, var, kin, pot)):
            trace[key].append(val)

    if 0 in wanted:
        snapshots += [(t, field_now()) for t in wanted[0]]
    if trace_every:
        record(0)
    for step in range(1, n_steps + 1):
        psi = half_kick * np.fft.ifft(drift * np.fft.fft(half_kick * psi))
        if step in wanted:
            snap = field_now()
            snapshots += [(t, snap) for t in wanted[step]]
        if trace_every and (step % trace_every == 0 or step == n_steps):
            record(step)
    final = field_now()
    drift_norm = abs(final.norm() - norm0)
    return SolveReport(
        final,
        snapshots,
        mass_drift=drift_norm,
        norm_drift=drift_norm,
        trace={key: np.array(val) for key, val in trace.items()} if trace_every else {},
    )
