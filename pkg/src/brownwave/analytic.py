"""Closed-form densities and wavefunctions.

Free diffusion, the overdamped trapped (Ornstein-Uhlenbeck) particle, the
harmonic-oscillator coherent state, and the kinetic-energy functional of a
wavefunction built on top of a Gaussian density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    SI,
    DegenerateStateError,
    DomainError,
    GaussianState,
    PhysicalConstants,
    TrapParameters,
    gaussian_pdf,
)
from .grid import NORM_TOL, GridField, GridSpec, trapezoid_weights


def free_diffusion_variance(D: float, t: float, dims_N: int = 1) -> float:
    """Mean-square displacement 2 N D t of free diffusion in N dimensions."""
    if dims_N not in (1, 2, 3):
        raise DomainError(f"number of dimensions must be 1, 2 or 3, got {dims_N}")
    if D < 0 or t < 0:
        raise DomainError("D and t must be non-negative")
    return 2 * dims_N * D * t


def free_diffusion_state(D: float, t: float) -> GaussianState:
    if t == 0:
        raise DegenerateStateError("free diffusion from the origin is a delta at t = 0")
    if not (D > 0 and t > 0):
        raise DomainError("free diffusion needs D > 0 and t > 0")
    return GaussianState(mean=0.0, variance=free_diffusion_variance(D, t))


def ou_state(
    trap: TrapParameters,
    temperature: float,
    x0: float,
    t: float,
    constants: PhysicalConstants = SI,
) -> GaussianState:
    """Density of a particle released at x0 in a damped harmonic trap."""
    kM = trap.relaxation_rate_kM
    if not kM > 0:
        raise DomainError("ou_state needs a positive relaxation rate")
    if t == 0:
        raise DegenerateStateError("trapped particle starts as a delta at x0")
    if t < 0:
        raise DomainError("t must be non-negative")
    sigma0_sq = trap.stationary_variance(temperature, constants)
    return GaussianState(
        mean=x0 * math.exp(-kM * t),
        variance=sigma0_sq * -math.expm1(-2 * kM * t),
    )


@dataclass(frozen=True)
class CoherentStateSpec:
    mass: float
    omega: float
    x0: float = 0.0
    constants: PhysicalConstants = field(default=SI, repr=False)
    a_param: float = field(init=False)

    def __post_init__(self):
        if not (self.mass > 0 and self.omega > 0):
            raise DomainError("coherent state needs positive mass and omega")
        object.__setattr__(self, "a_param", math.sqrt(self.mass * self.omega / self.constants.hbar))

    @property
    def variance(self) -> float:
        return 1.0 / (2 * self.a_param**2)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)

    @property
    def period(self) -> float:
        return 2 * math.pi / self.omega

    def required_half_width(self) -> float:
        return abs(self.x0) + 8 * self.sigma


def coherent_density(spec: CoherentStateSpec, t: float) -> GaussianState:
    return GaussianState(mean=spec.x0 * math.cos(spec.omega * t), variance=spec.variance)


def coherent_wavefunction(spec: CoherentStateSpec, t: float, grid: GridSpec) -> GridField:
    grid.require_span(spec.required_half_width())
    a2 = spec.a_param**2
    wt = spec.omega * t
    x = grid.x
    x0 = spec.x0
    envelope = -0.5 * a2 * (x - x0 * math.cos(wt)) ** 2
    phase = -0.5 * wt - a2 * (x * x0 * math.sin(wt) - 0.25 * x0**2 * math.sin(2 * wt))
    psi = math.sqrt(spec.a_param) / math.pi**0.25 * np.exp(envelope + 1j * phase)
    return GridField(grid, psi, kind="wavefunction")


@dataclass(frozen=True, eq=False)
class WavePair:
    """Real and imaginary parts of a wavefunction with |psi|^2 = p."""

    x: np.ndarray
    psi1: np.ndarray
    psi2: np.ndarray
    phase_phi: float

    def psi(self) -> np.ndarray:
        return self.psi1 + 1j * self.psi2


def decompose_wavefunction(state: GaussianState, x, phase_phi: float = 0.0) -> WavePair:
    """Split sqrt(p) into cos(phi) sqrt(p) and sin(phi) sqrt(p)."""
    x = np.asarray(x, dtype=float)
    root = np.sqrt(gaussian_pdf(state, x))
    return WavePair(x=x, psi1=math.cos(phase_phi) * root, psi2=math.sin(phase_phi) * root,
                    phase_phi=phase_phi)


def wavepair_field(pair: WavePair, grid: GridSpec) -> GridField:
    if pair.x.shape != (grid.n_points,) or not np.allclose(pair.x, grid.x, rtol=0, atol=1e-12 * grid.dx):
        raise DomainError("wave pair was not sampled on this grid")
    return GridField(grid, pair.psi(), kind="wavefunction")


def gradient_amplitude_sq(state: GaussianState, x):
    """|dpsi/dx|^2 = (x - mu)^2 p / (4 sigma^4); independent of the phase."""
    x = np.asarray(x, dtype=float)
    return (x - state.mean) ** 2 * gaussian_pdf(state, x) / (4 * state.variance**2)


def kinetic_energy_gaussian(mass: float, variance: float, constants: PhysicalConstants = SI) -> float:
    if not (mass > 0 and variance > 0):
        raise DomainError("mass and variance must be positive")
    return constants.hbar**2 / (8 * mass * variance)


def kinetic_energy_numeric(psi: GridField, mass: float, constants: PhysicalConstants = SI) -> float:
    """(hbar^2 / 2m) * integral |dpsi/dx|^2, by finite differences.

    Second-order centred differences inside, second-order one-sided at the
    two ends, trapezoid quadrature.
    """
    if psi.kind != "wavefunction":
        raise DomainError("kinetic energy needs a wavefunction field")
    if abs(psi.norm() - 1.0) > NORM_TOL:
        raise DomainError(f"wavefunction not normalized: norm = {psi.norm():.10g}")
    if not mass > 0:
        raise DomainError("mass must be positive")
    dpsi = np.gradient(psi.values, psi.dx, edge_order=2)
    integrand = dpsi.real**2 + dpsi.imag**2
    return constants.hbar**2 / (2 * mass) * float(trapezoid_weights(psi.grid.n_points, psi.dx) @ integrand)
