"""Can a Brownian particle behave as a matter wave?

Closed forms, grid solvers and Langevin ensembles for the Gaussian position
density of free, damped-trapped and undamped-trapped particles, and the
requirements (variance, trap frequency, wavelength, shear modulus) that
equipartition imposes on a particle-wave duality.
"""

__version__ = "0.1.0"

from .core import (
    NATURAL,
    SI,
    DegenerateStateError,
    DomainError,
    GaussianState,
    MediumSpec,
    ParticleSpec,
    PhysicalConstants,
    SolverError,
    TrapParameters,
    UndampedMediumError,
    da_to_kg,
    gaussian_pdf,
    trap_parameters,
)
from .duality import (
    DualityReport,
    de_broglie_wavelength,
    dispersion_omega,
    duality_report,
    duality_variance,
    molecule_catalog,
    required_diffusion,
    required_frequency,
    required_shear_modulus,
)
