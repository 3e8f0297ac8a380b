"""Grid check of the lower-partner spectrum 2 n D.

Discretizes ``-psi'' + [(k1 + D x)^2 - D] psi = E psi`` with the
three-point stencil on a uniform grid (Dirichlet outside the window) and
compares the lowest eigenvalues with the closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Band, DerivedParams, PhysicalParams, SpectrumLevel, susy_potentials
from .errors import NegativeEigenvalue, ValidationError
from .numerics import TridiagonalMatrix, eigen_smallest

# Beyond about a dozen levels the reference grid's h^2 error exceeds 1e-3 D.
MAX_LEVELS = 12
MIN_MARGIN = 6.0
REFERENCE_HALF_WIDTH = 12.0
REFERENCE_POINTS = 2001


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValidationError(f"grid needs x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.n_points < 16:
            raise ValidationError(f"grid needs at least 16 points, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def refined(self) -> "GridSpec":
        """Same window with the spacing halved."""
        return GridSpec(self.x_min, self.x_max, 2 * self.n_points - 1)

    @classmethod
    def reference(cls, dp: DerivedParams, k1: float = 0.0) -> "GridSpec":
        """Window of +/- 12/sqrt(D) around the potential minimum, 2001 points."""
        center = -k1 / dp.d
        half = REFERENCE_HALF_WIDTH / math.sqrt(dp.d)
        return cls(center - half, center + half, REFERENCE_POINTS)


@dataclass(frozen=True)
class SpectrumReport:
    computed: np.ndarray
    analytic: np.ndarray
    abs_deviation: np.ndarray
    grid: GridSpec

    @property
    def max_deviation(self) -> float:
        return float(self.abs_deviation.max())


def check_window(dp: DerivedParams, k1: float, grid: GridSpec) -> None:
    center = -k1 / dp.d
    margin = MIN_MARGIN / math.sqrt(dp.d)
    if grid.x_min > center - margin or grid.x_max < center + margin:
        raise ValidationError(
            f"grid-window-too-small: [{grid.x_min}, {grid.x_max}] must extend "
            f"{margin:.6g} beyond the minimum at x={center:.6g} on both sides"
        )


def build_hamiltonian(dp: DerivedParams, k1: float, grid: GridSpec) -> TridiagonalMatrix:
    check_window(dp, k1, grid)
    h = grid.spacing
    v_minus, _ = susy_potentials(grid.points(), k1, dp)
    diag = 2.0 / h**2 + v_minus
    offdiag = np.full(grid.n_points - 1, -1.0 / h**2)
    return TridiagonalMatrix(diag, offdiag)


def verify_spectrum(dp: DerivedParams, k1: float, grid: GridSpec, n_levels: int = 6) -> SpectrumReport:
    if not 1 <= n_levels <= MAX_LEVELS:
        raise ValidationError(
            f"grid accuracy budget: n_levels must be in [1, {MAX_LEVELS}], got {n_levels}"
        )
    computed = eigen_smallest(build_hamiltonian(dp, k1, grid), n_levels)
    analytic = 2.0 * dp.d * np.arange(n_levels)
    return SpectrumReport(computed, analytic, np.abs(computed - analytic), grid)


def dirac_levels_from_oracle(
    report: SpectrumReport, phys: PhysicalParams, tolerance: float = 1e-5
) -> list[SpectrumLevel]:
    """Electron Dirac energies hbar v_F sqrt(E_-) from grid eigenvalues.

    Eigenvalues in [-10*tolerance, 0) are treated as zero; anything lower
    means the discretization failed.
    """
    levels = []
    for n, value in enumerate(report.computed):
        if value < -10.0 * tolerance:
            raise NegativeEigenvalue(f"negative-eigenvalue: level {n} has E_- = {value!r}")
        energy = phys.hbar * phys.v_f * math.sqrt(max(float(value), 0.0))
        levels.append(SpectrumLevel(n, Band.ELECTRON, energy))
    return levels
