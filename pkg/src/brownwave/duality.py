"""What a Brownian particle needs in order to behave as a matter wave.

Equating the quantum kinetic energy of a Gaussian wave packet,
hbar^2 / (8 m sigma^2), with the equipartition value k_B T / 2 pins the
position variance. Everything else here follows from that variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import SI, DomainError, ParticleSpec, PhysicalConstants, da_to_kg


def _check_mT(mass, temperature):
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")
    if not temperature > 0:
        raise DomainError(f"temperature must be positive, got {temperature}")


def duality_variance(mass: float, temperature: float, constants: PhysicalConstants = SI) -> float:
    """hbar^2 / (4 m k_B T): the only variance compatible with equipartition."""
    _check_mT(mass, temperature)
    return constants.hbar**2 / (4 * mass * constants.boltzmann_kB * temperature)


def required_diffusion(mass: float, temperature: float, t: float, constants: PhysicalConstants = SI) -> float:
    """Diffusion coefficient a freely diffusing particle would need at time t.

    Setting 2 D t equal to the duality variance gives D proportional to 1/t,
    which diverges as t -> 0 and contradicts a constant D.
    """
    _check_mT(mass, temperature)
    if not t > 0:
        raise DomainError(f"required diffusion coefficient diverges at t = {t}; need t > 0")
    return constants.hbar**2 / (8 * mass * constants.boltzmann_kB * temperature) / t


def longterm_frequency(temperature: float, constants: PhysicalConstants = SI) -> float:
    return 2 * constants.boltzmann_kB * temperature / constants.hbar


def required_frequency(
    temperature: float, relaxation_rate_kM: float, t: float, constants: PhysicalConstants = SI
) -> float:
    """Trap frequency for which the trapped density has the duality variance at time t.

    kM = 0 is the undamped well, which has the long-term value at once.
    """
    if not temperature > 0:
        raise DomainError("temperature must be positive")
    if relaxation_rate_kM < 0 or t < 0:
        raise DomainError("relaxation rate and time must be non-negative")
    omega_inf = longterm_frequency(temperature, constants)
    if relaxation_rate_kM == 0 or math.isinf(t):
        return omega_inf
    return omega_inf * math.sqrt(-math.expm1(-2 * relaxation_rate_kM * t))


def de_broglie_wavelength(mass: float, temperature: float, constants: PhysicalConstants = SI) -> float:
    _check_mT(mass, temperature)
    return math.pi * constants.hbar / math.sqrt(mass * constants.boltzmann_kB * temperature)


def dispersion_omega(wavelength: float, mass: float, constants: PhysicalConstants = SI) -> float:
    """Free-particle dispersion omega = (hbar / 2m) (2 pi / lambda)^2."""
    if not wavelength > 0 or not mass > 0:
        raise DomainError("wavelength and mass must be positive")
    return constants.hbar / (2 * mass) * (2 * math.pi / wavelength) ** 2


def required_shear_modulus_from_ratio(
    m_over_R: float, temperature: float, constants: PhysicalConstants = SI
) -> float:
    if not m_over_R > 0:
        raise DomainError("m/R must be positive")
    if not temperature > 0:
        raise DomainError("temperature must be positive")
    return 2 / (3 * math.pi) * m_over_R * (constants.boltzmann_kB * temperature / constants.hbar) ** 2


def required_shear_modulus(particle: ParticleSpec, temperature: float, constants: PhysicalConstants = SI) -> float:
    """Shear modulus of the embedding solid that traps at omega = 2 k_B T / hbar."""
    return required_shear_modulus_from_ratio(particle.mass_over_radius, temperature, constants)


@dataclass(frozen=True)
class CatalogEntry:
    particle: ParticleSpec
    m_over_R: float  # as quoted in the literature, kg/m
    mass_da: float
    radius_nm: float


_CATALOG = (
    ("C60", 720.0, 0.35, 3.42e-15),
    ("PFNS10", 6910.0, 1.7, 6.75e-15),
    ("TPPF152", 5310.0, 3.0, 2.94e-15),
    ("Gramicidin A", 1860.0, 1.5, 2.05e-15),
)


def molecule_catalog() -> list[CatalogEntry]:
    """Molecules for which matter-wave interference has been reported."""
    return [
        CatalogEntry(ParticleSpec(da_to_kg(m_da), r_nm * 1e-9, label), ratio, m_da, r_nm)
        for label, m_da, r_nm, ratio in _CATALOG
    ]


def catalog_lookup(label: str) -> CatalogEntry:
    key = label.replace(" ", "").lower()
    for entry in molecule_catalog():
        if entry.particle.label.replace(" ", "").lower() == key:
            return entry
    raise DomainError(f"unknown molecule {label!r}; known: {', '.join(e[0] for e in _CATALOG)}")


@dataclass(frozen=True)
class DualityReport:
    required_variance: float
    required_omega_longterm: float
    de_broglie_lambda: float
    required_shear_modulus: float
    mean_kinetic_energy: float
    ground_state_energy: float

    def as_dict(self) -> dict:
        return {
            "sigma2": self.required_variance,
            "sigma": math.sqrt(self.required_variance),
            "omega": self.required_omega_longterm,
            "lambda": self.de_broglie_lambda,
            "G": self.required_shear_modulus,
            "mean_kinetic_energy": self.mean_kinetic_energy,
            "ground_state_energy": self.ground_state_energy,
        }


def duality_report(particle: ParticleSpec, temperature: float, constants: PhysicalConstants = SI) -> DualityReport:
    omega = longterm_frequency(temperature, constants)
    return DualityReport(
        required_variance=duality_variance(particle.mass, temperature, constants),
        required_omega_longterm=omega,
        de_broglie_lambda=de_broglie_wavelength(particle.mass, temperature, constants),
        required_shear_modulus=required_shear_modulus(particle, temperature, constants),
        mean_kinetic_energy=0.5 * constants.boltzmann_kB * temperature,
        ground_state_energy=0.5 * constants.hbar * omega,
    )
