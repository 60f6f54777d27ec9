"""Physical constants, particle/medium parameters and the Gaussian density.

Everything is strict SI unless a function is handed ``NATURAL`` constants
(hbar = k_B = 1), which the solver tests use to stay away from 1e-34 scales.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Input outside the domain of an operation."""


class UndampedMediumError(DomainError):
    pass


class DegenerateStateError(DomainError):
    """A zero-variance (delta) state was requested."""


class SolverError(RuntimeError):
    """A numerical integration failed or was asked to run unstably."""


@dataclass(frozen=True)
class PhysicalConstants:
    planck_h: float
    hbar: float
    boltzmann_kB: float
    dalton: float

    def __post_init__(self):
        for name in ("planck_h", "hbar", "boltzmann_kB", "dalton"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if not math.isclose(self.hbar, self.planck_h / (2 * math.pi), rel_tol=1e-12):
            raise DomainError("hbar must equal planck_h / (2 pi)")


# CODATA 2018
SI = PhysicalConstants(
    planck_h=6.62607015e-34,
    hbar=6.62607015e-34 / (2 * math.pi),
    boltzmann_kB=1.380649e-23,
    dalton=1.66053906660e-27,
)

NATURAL = PhysicalConstants(planck_h=2 * math.pi, hbar=1.0, boltzmann_kB=1.0, dalton=1.0)


@dataclass(frozen=True)
class ParticleSpec:
    mass: float
    radius: float
    label: str = ""

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if not self.radius > 0:
            raise DomainError(f"radius must be positive, got {self.radius}")

    @property
    def mass_over_radius(self) -> float:
        return self.mass / self.radius


@dataclass(frozen=True)
class MediumSpec:
    temperature: float
    shear_viscosity: float
    shear_modulus: float

    def __post_init__(self):
        if not self.temperature > 0:
            raise DomainError("temperature must be positive")
        if not self.shear_viscosity >= 0:
            raise DomainError("shear_viscosity must be non-negative")
        if not self.shear_modulus >= 0:
            raise DomainError("shear_modulus must be non-negative")


@dataclass(frozen=True)
class TrapParameters:
    stiffness_k: float
    mobility: float
    relaxation_rate_kM: float
    trap_frequency_omega: float

    def diffusion_coefficient(self, temperature: float, constants: PhysicalConstants = SI) -> float:
        """k_B T M, the diffusion coefficient of the trapped particle."""
        return constants.boltzmann_kB * temperature * self.mobility

    def stationary_variance(self, temperature: float, constants: PhysicalConstants = SI) -> float:
        """k_B T / k; infinite for a zero-stiffness trap."""
        if self.stiffness_k == 0:
            return math.inf
        return constants.boltzmann_kB * temperature / self.stiffness_k

    @classmethod
    def nondimensional(cls, relaxation_rate: float = 1.0, stiffness: float = 1.0, mass: float = 1.0):
        """Trap with mobility = kM / k, for use with ``NATURAL`` constants.

        With the defaults and temperature 1 this gives kM = 1 and sigma0 = 1.
        """
        mobility = relaxation_rate / stiffness if stiffness > 0 else 1.0
        return cls(
            stiffness_k=stiffness,
            mobility=mobility,
            relaxation_rate_kM=relaxation_rate,
            trap_frequency_omega=math.sqrt(stiffness / mass),
        )


@dataclass(frozen=True)
class GaussianState:
    mean: float
    variance: float

    def __post_init__(self):
        if not self.variance > 0:
            raise DegenerateStateError(
                f"variance must be positive (got {self.variance}); use a narrow Gaussian for a delta"
            )

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


def da_to_kg(mass_da: float, constants: PhysicalConstants = SI) -> float:
    if not mass_da > 0:
        raise DomainError(f"mass in Da must be positive, got {mass_da}")
    return mass_da * constants.dalton


def trap_parameters(particle: ParticleSpec, medium: MediumSpec) -> TrapParameters:
    """Stiffness 6 pi R G, Stokes mobility 1/(6 pi R eta), kM and omega."""
    if medium.shear_viscosity == 0:
        raise UndampedMediumError("undamped medium: shear_viscosity = 0 has no finite mobility")
    stiffness = 6 * math.pi * particle.radius * medium.shear_modulus
    mobility = 1.0 / (6 * math.pi * particle.radius * medium.shear_viscosity)
    return TrapParameters(
        stiffness_k=stiffness,
        mobility=mobility,
        # G/eta directly; the product k * M only agrees to rounding
        relaxation_rate_kM=medium.shear_modulus / medium.shear_viscosity,
        trap_frequency_omega=math.sqrt(stiffness / particle.mass),
    )


def gaussian_pdf(state: GaussianState, x):
    x = np.asarray(x, dtype=float)
    # |x - mu| keeps pdf(mu + d) == pdf(mu - d) bit for bit
    z = np.abs(x - state.mean)
    out = np.exp(-0.5 * z * z / state.variance) / math.sqrt(2 * math.pi * state.variance)
    return out if out.ndim else float(out)
