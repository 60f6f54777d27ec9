"""Long-format datasets behind the figures, plus the evolve engines.

Every row is ``(series, t_or_param, x, value)``. Floats are written with 17
significant digits so a dataset round-trips exactly; ``None`` becomes an
empty field.
"""

from __future__ import annotations

import csv
import io
import math

import numpy as np

from .analytic import CoherentStateSpec, coherent_density, coherent_wavefunction, ou_state
from .core import NATURAL, SI, DomainError, PhysicalConstants, TrapParameters, gaussian_pdf
from .duality import de_broglie_wavelength, molecule_catalog, required_shear_modulus_from_ratio
from .grid import GridSpec
from .langevin import SimConfig, ensemble_stats, simulate_trapped
from .solvers import field_moments, solve_fokker_planck, solve_schrodinger

HEADER = ("series", "t_or_param", "x", "value")

# x in units of sigma0 (trapped) or sigma (coherent)
FIGURE_GRID = GridSpec(-12.0, 12.0, 2049)

FIG2_RATIOS = (2.0, 4.0)
FIG2_TIMES = (0.05, 1.0, 2.0, 50.0)
FIG5_RATIOS = (2.0, 4.0)
FIG5_PHASES = tuple(k * math.pi / 4 for k in range(8))
FIG4_RATIOS = (2e-15, 3e-15)


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return f"{float(v):.16e}"


def write_rows(rows, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(HEADER)
    for series, t, x, value in rows:
        w.writerow((series, fmt(t), fmt(x), fmt(value)))


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    write_rows(rows, buf)
    return buf.getvalue()


def read_rows(text: str) -> list[tuple[str, float, float, float]]:
    """Parse a dataset back; empty fields become NaN."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != HEADER:
        raise DomainError(f"unexpected header {header}")
    out = []
    for series, t, x, value in reader:
        out.append((series, float(t) if t else math.nan, float(x) if x else math.nan, float(value)))
    return out


def _label(kind: str, name: str, ratio: float) -> str:
    return f"{kind}[{name}={ratio:g}]"


def _density_rows(label, t, x, p):
    return [(label, t, xi, pi) for xi, pi in zip(x, p)]


# -- trapped particle, damped well --------------------------------------------

OU_TRAP = TrapParameters.nondimensional()  # kM = 1, sigma0 = 1 at temperature 1


def ou_rows(
    ratio: float,
    times,
    engine: str = "analytic",
    *,
    grid: GridSpec = FIGURE_GRID,
    seed: int = 42,
    n_trajectories: int = 20000,
    dt: float | None = None,
):
    """Density and moment rows for a particle released at x0 = ratio * sigma0.

    Time is t * kM. Returns ``(rows, moments)`` with ``moments`` a list of
    ``(t, mean, variance)``.
    """
    times = sorted(float(t) for t in times)
    if not times or times[0] <= 0:
        raise DomainError("times must be positive")
    name = "x0/sigma0"
    dens, mom = _label("density", name, ratio), []
    x = grid.x
    snaps = []
    if engine == "analytic":
        for t in times:
            s = ou_state(OU_TRAP, 1.0, ratio, t, NATURAL)
            snaps.append((t, gaussian_pdf(s, x), s.mean, s.variance))
    elif engine == "pde":
        step = dt if dt is not None else min(0.25 * grid.dx**2, 0.05)
        report = solve_fokker_planck(OU_TRAP, 1.0, ratio, times[-1], step, grid, times, NATURAL)
        for t, f in report.snapshots:
            _, mean, var = field_moments(f)
            snaps.append((t, np.array(f.values), mean, var))
    elif engine == "ensemble":
        step = dt if dt is not None else 0.01
        idx = [int(round(t / step)) for t in times]
        stride = math.gcd(*idx)
        cfg = SimConfig(step, idx[-1], n_trajectories, seed, ratio, record_every=stride)
        ens = simulate_trapped(OU_TRAP, 1.0, cfg, constants=NATURAL)
        stats = ensemble_stats(ens)
        dx = grid.dx
        edges = np.concatenate(([x[0] - dx / 2], 0.5 * (x[:-1] + x[1:]), [x[-1] + dx / 2]))
        for t, i in zip(times, idx):
            col = int(np.searchsorted(ens.times, i * step - 1e-12 * step))
            counts, _ = np.histogram(ens.positions[:, col], bins=edges)
            snaps.append((t, counts / (n_trajectories * dx), stats.mean_t[col], stats.variance_t[col]))
    else:
        raise DomainError(f"unknown engine {engine!r}")

    rows = []
    for t, p, mean, var in snaps:
        rows += _density_rows(dens, t, x, p)
        rows.append((_label("mean", name, ratio), t, None, mean))
        rows.append((_label("variance", name, ratio), t, None, var))
        mom.append((t, mean, var))
    return rows, mom


def fig2_rows(ratios=FIG2_RATIOS, times=FIG2_TIMES, grid: GridSpec = FIGURE_GRID):
    rows = []
    for r in ratios:
        rows += ou_rows(r, times, "analytic", grid=grid)[0]
    return rows


# -- coherent state, undamped well --------------------------------------------


def coherent_spec(ratio: float) -> CoherentStateSpec:
    # hbar = m = 1, omega = 1/2 makes sigma = 1, so x is already x / sigma
    return CoherentStateSpec(mass=1.0, omega=0.5, x0=ratio, constants=NATURAL)


def coherent_rows(ratio: float, phases, engine: str = "analytic", *, grid: GridSpec = FIGURE_GRID,
                  steps_per_period: int = 20000):
    """Density rows at the requested omega * t values."""
    phases = sorted(float(p) for p in phases)
    if not phases or phases[0] < 0:
        raise DomainError("omega t values must be non-negative")
    spec = coherent_spec(ratio)
    name = "x0/sigma"
    x = grid.x
    snaps = []
    if engine == "analytic":
        for wt in phases:
            s = coherent_density(spec, wt / spec.omega)
            snaps.append((wt, gaussian_pdf(s, x), s.mean, s.variance))
    elif engine == "pde":
        psi0 = coherent_wavefunction(spec, 0.0, grid)
        t_end = phases[-1] / spec.omega
        if t_end == 0:
            snaps.append((0.0, psi0.density(), *field_moments(psi0)[1:]))
        else:
            dt = spec.period / steps_per_period
            report = solve_schrodinger(spec.mass, spec.omega, psi0, t_end, dt,
                                       [wt / spec.omega for wt in phases], NATURAL)
            for (t, f), wt in zip(report.snapshots, phases):
                _, mean, var = field_moments(f)
                snaps.append((wt, f.density(), mean, var))
    elif engine == "ensemble":
        raise DomainError("the ensemble engine has no coherent-state mode")
    else:
        raise DomainError(f"unknown engine {engine!r}")

    rows, mom = [], []
    for wt, p, mean, var in snaps:
        rows += _density_rows(_label("density", name, ratio), wt, x, p)
        rows.append((_label("mean", name, ratio), wt, None, mean))
        rows.append((_label("variance", name, ratio), wt, None, var))
        mom.append((wt, mean, var))
    return rows, mom


def fig5_rows(ratios=FIG5_RATIOS, phases=FIG5_PHASES, grid: GridSpec = FIGURE_GRID):
    rows = []
    for r in ratios:
        rows += coherent_rows(r, phases, "analytic", grid=grid)[0]
    return rows


# -- requirements ---------------------------------------------------------------


def fig3_rows(temperature: float = 300.0, n_points: int = 200, constants: PhysicalConstants = SI):
    """de Broglie wavelength against mass over the catalog's mass range."""
    masses = [e.particle.mass for e in molecule_catalog()]
    grid = np.geomspace(min(masses), max(masses), n_points)
    return [("lambda", m, None, de_broglie_wavelength(m, temperature, constants)) for m in grid]


def fig4_rows(ratios=FIG4_RATIOS, t_min: float = 1.0, t_max: float = 400.0, n_points: int = 400,
              constants: PhysicalConstants = SI):
    """Required shear modulus against temperature for fixed m/R."""
    temps = np.linspace(t_min, t_max, n_points)
    rows = []
    for r in ratios:
        label = f"G[m/R={r:g}]"
        rows += [(label, T, None, required_shear_modulus_from_ratio(r, T, constants)) for T in temps]
    return rows
