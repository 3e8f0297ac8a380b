"""Landau levels of graphene in a uniform perpendicular field.

Conventions: the reduced oscillator problem uses 2m = hbar = 1, so the
partner potentials are ``(k1 + D x)**2 -/+ D`` and the lower partner has
eigenvalues ``2 n D``. Dirac energies follow as ``+/- hbar v_F sqrt(2 n D)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import constants

from .errors import ValidationError
from .numerics import integrate


class Units(enum.Enum):
    NATURAL = "natural"
    SI = "si"


class Band(enum.Enum):
    ELECTRON = 1
    HOLE = -1

    @property
    def sign(self) -> int:
        return self.value


@dataclass(frozen=True)
class PhysicalParams:
    """Fundamental constants plus the applied field strength.

    In natural units every constant is 1 and ``b0`` is read directly as D.
    """

    hbar: float = 1.0
    v_f: float = 1.0
    c: float = 1.0
    e_charge: float = 1.0
    k_boltz: float = 1.0
    b0: float = 1.0
    units: Units = Units.NATURAL

    def __post_init__(self):
        for name in ("hbar", "v_f", "c", "e_charge", "k_boltz"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValidationError(f"{name} must be positive and finite, got {value}")
        if not (self.b0 >= 0 and math.isfinite(self.b0)):
            raise ValidationError(f"b0 must be >= 0, got {self.b0}")

    @classmethod
    def natural(cls, d: float = 1.0, k_boltz: float = 1.0) -> "PhysicalParams":
        return cls(b0=d, k_boltz=k_boltz, units=Units.NATURAL)

    @classmethod
    def si(cls, b0: float) -> "PhysicalParams":
        """CODATA constants with v_F = c/300; ``b0`` in tesla."""
        return cls(
            hbar=constants.hbar,
            v_f=constants.c / 300.0,
            c=constants.c,
            e_charge=constants.e,
            k_boltz=constants.k,
            b0=b0,
            units=Units.SI,
        )

    def field_constant(self) -> float:
        """Inverse squared magnetic length D."""
        if self.units is Units.SI:
            # SI minimal coupling has no 1/c: D = eB/hbar.
            return self.e_charge * self.b0 / self.hbar
        return self.e_charge * self.b0 / (self.c * self.hbar)


@dataclass(frozen=True)
class DerivedParams:
    d: float
    lambda_max: float
    a: float
    b: float

    def __post_init__(self):
        for name in ("d", "lambda_max", "a", "b"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValidationError(f"{name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class SpectrumLevel:
    n: int
    band: Band
    energy: float


@dataclass(frozen=True)
class WavefunctionSample:
    x: float
    psi_upper: complex
    psi_lower: complex
    k1: float


def derive_params(phys: PhysicalParams, lambda_max: float = 1.0) -> DerivedParams:
    """Composite constants D, a = hbar v_F sqrt(2 D lambda) and b = D hbar^2 v_F^2."""
    if not lambda_max > 0:
        raise ValidationError(f"lambda must be positive, got {lambda_max}")
    if phys.b0 == 0:
        raise ValidationError("zero-field: b0 = 0 collapses the Landau spectrum")
    d = phys.field_constant()
    b = d * (phys.hbar * phys.v_f) ** 2
    return DerivedParams(d=d, lambda_max=lambda_max, a=math.sqrt(2.0 * b * lambda_max), b=b)


def landau_energy(n: int, band: Band, dp: DerivedParams, phys: PhysicalParams) -> float:
    if n < 0:
        raise ValidationError(f"Landau index must be >= 0, got {n}")
    if n == 0:
        return 0.0
    return band.sign * phys.hbar * phys.v_f * math.sqrt(2.0 * n * dp.d)


def landau_spectrum(n_max: int, dp: DerivedParams, phys: PhysicalParams) -> list[SpectrumLevel]:
    """Electron and hole levels for n = 0..n_max, electrons first at each n."""
    if n_max < 0:
        raise ValidationError(f"n_max must be >= 0, got {n_max}")
    return [
        SpectrumLevel(n, band, landau_energy(n, band, dp, phys))
        for n in range(n_max + 1)
        for band in (Band.ELECTRON, Band.HOLE)
    ]


def superpotential(x, k1: float, dp: DerivedParams):
    return k1 + dp.d * x


def susy_potentials(x, k1: float, dp: DerivedParams):
    """Partner potentials ``(V_minus, V_plus) = W**2 -/+ W'`` for W = k1 + D x."""
    w = superpotential(x, k1, dp)
    return w * w - dp.d, w * w + dp.d


def hermite(n: int, z):
    """Physicists' Hermite polynomial H_n(z) by upward recurrence.

    Accepts scalars or numpy arrays.
    """
    if n < 0:
        raise ValidationError(f"Hermite degree must be >= 0, got {n}")
    z = np.asarray(z, dtype=float) if not np.isscalar(z) else float(z)
    h_prev = np.ones_like(z) if isinstance(z, np.ndarray) else 1.0
    if n == 0:
        return h_prev
    h = 2.0 * z
    for k in range(1, n):
        h_prev, h = h, 2.0 * z * h - 2.0 * k * h_prev
    return h


def oscillator_variable(x, k1: float, dp: DerivedParams):
    """Completed-square coordinate z = sqrt(D) (x + k1/D)."""
    return math.sqrt(dp.d) * (x + k1 / dp.d)


@lru_cache(maxsize=256)
def normalization_constant(n: int, d: float) -> float:
    """C_n making the n-th oscillator state unit-normalized, by quadrature."""
    # exp(-z^2) H_n(z)^2 is negligible past |z| = sqrt(2n+1) + 10.
    half_width = math.sqrt(2 * n + 1) + 10.0
    res = integrate(
        lambda z: math.exp(-z * z) * hermite(n, z) ** 2,
        -half_width, half_width, rel_tol=1e-13,
    )
    return 1.0 / math.sqrt(res.value / math.sqrt(d))


def wavefunction(n: int, x, k1: float, dp: DerivedParams, normalized: bool = True):
    """Oscillator eigenfunction C_n exp(-z^2/2) H_n(z) of the lower partner."""
    z = oscillator_variable(x, k1, dp)
    raw = np.exp(-0.5 * z * z) * hermite(n, z)
    if not normalized:
        return raw
    return normalization_constant(n, dp.d) * raw


def spinor(n: int, x, y, k1: float, dp: DerivedParams):
    """Two-component Dirac spinor ``exp(i k1 y) (psi_n, i psi_{n+1})``."""
    phase = np.exp(1j * k1 * np.asarray(y, dtype=float))
    upper = phase * wavefunction(n, x, k1, dp)
    lower = 1j * phase * wavefunction(n + 1, x, k1, dp)
    if np.ndim(upper) == 0:
        return complex(upper), complex(lower)
    return upper, lower


def spinor_samples(n: int, xs, k1: float, dp: DerivedParams, y: float = 0.0) -> list[WavefunctionSample]:
    upper, lower = spinor(n, np.asarray(xs, dtype=float), y, k1, dp)
    return [
        WavefunctionSample(float(x), complex(u), complex(l), k1)
        for x, u, l in zip(xs, np.atleast_1d(upper), np.atleast_1d(lower))
    ]
