"""Superstatistics with the quadratic-correction Boltzmann factor.

    B(E) = exp(-beta E) (1 + q beta^2 E^2 / 2)

Two partition functions are provided. :func:`partition_super_closed` is the
published closed form (2 + 6q)/(a^2 beta^2), from which U_s, F_s, S_s and
C_s follow. :func:`partition_super_integral` integrates B over n in
[0, inf) directly, giving (1 + 3q)/(b beta^2). They agree only when
lambda = 1 (a^2 = 2b); otherwise they differ by the factor lambda.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .canonical import check_beta, validate_beta_grid, check_identity
from .core import DerivedParams
from .errors import LandauError, ValidationError
from .numerics import QuadratureResult, integrate_semi_infinite

IDENTITY_RTOL = 1e-12


@dataclass(frozen=True)
class SuperstatConfig:
    """Deformation parameter; [0, 1] unless ``permissive`` allows any q >= 0."""

    q: float
    permissive: bool = False

    def __post_init__(self):
        validate_q(self.q, self.permissive)


@dataclass(frozen=True)
class SuperstatPoint:
    beta: float
    q: float
    z_s: float
    u_s: float
    c_s: float
    s_s: float
    f_s: float


def validate_q(q: float, permissive: bool = False) -> None:
    if not (q >= 0 and math.isfinite(q)):
        raise ValidationError(f"q must be a finite value >= 0, got {q}")
    if not permissive and q > 1:
        raise ValidationError(f"q={q} outside [0, 1]; enable permissive q to allow it")


def boltzmann_factor_q(energy: float, beta: float, q: float) -> float:
    check_beta(beta)
    if q < 0:
        raise ValidationError(f"q must be >= 0, got {q}")
    x = beta * energy
    return math.exp(-x) * (1.0 + 0.5 * q * x * x)


def boltzmann_slope_q(energy: float, beta: float, q: float) -> float:
    """d B / d beta at fixed E and q."""
    x = beta * energy
    return math.exp(-x) * energy * (q * x - (1.0 + 0.5 * q * x * x))


def _log_partition_super(beta: float, q: float, dp: DerivedParams) -> float:
    return math.log(2.0 + 6.0 * q) - 2.0 * math.log(dp.a * beta)


def partition_super_closed(beta: float, q: float, dp: DerivedParams) -> float:
    check_beta(beta)
    validate_q(q, permissive=True)
    return (2.0 + 6.0 * q) / (dp.a * dp.a * beta * beta)


def partition_super_integral(
    beta: float, q: float, dp: DerivedParams, rel_tol: float = 1e-12
) -> QuadratureResult:
    """Quadrature of B(E(n)) over n in [0, inf).

    Integrated in m = sqrt(n) (dn = 2m dm) so the integrand decays
    exponentially and the semi-infinite map applies.
    """
    check_beta(beta)
    validate_q(q, permissive=True)
    slope = math.sqrt(2.0 * dp.b)

    def integrand(m):
        return 2.0 * m * boltzmann_factor_q(slope * m, beta, q)

    return integrate_semi_infinite(integrand, 0.0, rel_tol, scale=1.0 / (beta * slope))


def partition_super_analytic(beta: float, q: float, dp: DerivedParams) -> float:
    """Exact value of :func:`partition_super_integral`, (1 + 3q)/(b beta^2)."""
    return (1.0 + 3.0 * q) / (dp.b * beta * beta)


def mean_energy_s(beta: float, q: float) -> float:
    check_beta(beta)
    return 2.0 / beta


def free_energy_s(beta: float, q: float, dp: DerivedParams) -> float:
    check_beta(beta)
    return -_log_partition_super(beta, q, dp) / beta


def entropy_s(beta: float, q: float, dp: DerivedParams, k_boltz: float = 1.0) -> float:
    check_beta(beta)
    return k_boltz * (2.0 + _log_partition_super(beta, q, dp))


def heat_capacity_s(q: float, k_boltz: float = 1.0) -> float:
    return 2.0 * k_boltz


def superstat_point(beta: float, q: float, dp: DerivedParams, k_boltz: float = 1.0) -> SuperstatPoint:
    point = SuperstatPoint(
        beta=beta,
        q=q,
        z_s=partition_super_closed(beta, q, dp),
        u_s=mean_energy_s(beta, q),
        c_s=heat_capacity_s(q, k_boltz),
        s_s=entropy_s(beta, q, dp, k_boltz),
        f_s=free_energy_s(beta, q, dp),
    )
    check_identity(point.f_s, point.u_s, point.s_s, beta, k_boltz, IDENTITY_RTOL)
    return point


def superstat_sweep(
    betas: Sequence[float],
    q: float,
    dp: DerivedParams,
    k_boltz: float = 1.0,
    permissive_q: bool = False,
) -> list[SuperstatPoint]:
    validate_q(q, permissive_q)
    points = []
    for beta in validate_beta_grid(betas):
        try:
            points.append(superstat_point(beta, q, dp, k_boltz))
        except LandauError as exc:
            raise type(exc)(f"beta={beta}: {exc}") from exc
    return points
