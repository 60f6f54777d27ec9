"""Uniform 1-D grids carrying a density or a complex wavefunction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DomainError

MIN_POINTS = 64
NORM_TOL = 1e-6


def trapezoid_weights(n: int, dx: float) -> np.ndarray:
    w = np.full(n, dx)
    w[0] = w[-1] = 0.5 * dx
    return w


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < MIN_POINTS:
            raise DomainError(f"need at least {MIN_POINTS} grid points, got {self.n_points}")
        if not self.x_max > self.x_min:
            raise DomainError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def covers(self, half_width: float, center: float = 0.0) -> bool:
        return self.x_min <= center - half_width and self.x_max >= center + half_width

    def require_span(self, half_width: float, what: str = "grid"):
        if not self.covers(half_width):
            raise DomainError(
                f"undersized {what}: need [-{half_width:.6g}, {half_width:.6g}], "
                f"got [{self.x_min:.6g}, {self.x_max:.6g}]"
            )

    @classmethod
    def symmetric(cls, half_width: float, n_points: int) -> "GridSpec":
        return cls(-half_width, half_width, n_points)


@dataclass(frozen=True, eq=False)
class GridField:
    """Samples on a uniform grid.

    ``kind`` is ``"density"`` (real values) or ``"wavefunction"`` (complex
    values; ``real``/``imag`` are the two real channels psi1, psi2).
    """

    grid: GridSpec
    values: np.ndarray
    kind: str = "density"
    check_norm: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.kind not in ("density", "wavefunction"):
            raise DomainError(f"unknown field kind {self.kind!r}")
        dtype = complex if self.kind == "wavefunction" else float
        values = np.array(self.values, dtype=dtype)
        if values.shape != (self.grid.n_points,):
            raise DomainError("values do not match grid size")
        if self.kind == "density":
            if values.min() < -1e-12:
                raise DomainError(f"density has negative values (min {values.min():.3g})")
            values = np.clip(values, 0.0, None)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.check_norm and abs(self.norm() - 1.0) > NORM_TOL:
            raise DomainError(f"{self.kind} not normalized on grid: norm = {self.norm():.10g}")

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def dx(self) -> float:
        return self.grid.dx

    def density(self) -> np.ndarray:
        if self.kind == "wavefunction":
            return self.values.real**2 + self.values.imag**2
        return self.values

    def norm(self) -> float:
        return float(trapezoid_weights(self.grid.n_points, self.dx) @ self.density())
