"""Canonical thermodynamics of the electron branch in the continuum limit.

With E(n) = hbar v_F sqrt(2 n D) and the level sum replaced by an integral
over n in [0, lambda], the partition function reduces to

    Z(beta) = P(2, beta a) / (beta**2 b)

where P(k, t) = 1 - exp(-t) sum_{i<k} t**i/i! (see
:func:`numerics.incomplete_gamma_kernel`). Every quantity below is written
through these kernels so that nothing cancels catastrophically as
beta a -> 0. The ``*_direct`` functions keep the textbook expressions for
cross-checks at beta a >= 0.5.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import DerivedParams
from .errors import ComputationError, LandauError, ValidationError
from .numerics import QuadratureResult, incomplete_gamma_kernel, integrate

# F = U - S/(k beta) is checked to this relative tolerance in sweeps.
IDENTITY_RTOL = 1e-9


@dataclass(frozen=True)
class ThermoPoint:
    beta: float
    z: float
    u: float
    c: float
    s: float
    f: float


def check_beta(beta: float) -> None:
    if not (beta > 0 and math.isfinite(beta)):
        raise ValidationError(f"nonphysical-temperature: beta must be positive, got {beta}")


def _kernels(beta: float, dp: DerivedParams):
    t = beta * dp.a
    return t, incomplete_gamma_kernel(2, t), incomplete_gamma_kernel(3, t), incomplete_gamma_kernel(4, t)


def partition_closed(beta: float, dp: DerivedParams) -> float:
    check_beta(beta)
    return incomplete_gamma_kernel(2, beta * dp.a) / (beta * beta * dp.b)


def log_partition(beta: float, dp: DerivedParams) -> float:
    return math.log(partition_closed(beta, dp))


def partition_integral(beta: float, dp: DerivedParams, rel_tol: float = 1e-12) -> QuadratureResult:
    """Direct quadrature of exp(-beta E(n)) over n in [0, lambda]."""
    check_beta(beta)
    # hbar v_F sqrt(2 D) == sqrt(2 b)
    slope = math.sqrt(2.0 * dp.b)
    return integrate(lambda n: math.exp(-beta * slope * math.sqrt(n)), 0.0, dp.lambda_max, rel_tol)


def mean_energy(beta: float, dp: DerivedParams) -> float:
    """U = -d ln Z / d beta = 2 P(3, t) / (beta P(2, t)), t = beta a."""
    check_beta(beta)
    _, k2, k3, _ = _kernels(beta, dp)
    return 2.0 * k3 / (beta * k2)


def heat_capacity(beta: float, dp: DerivedParams, k_boltz: float = 1.0) -> float:
    """C = k beta^2 d^2 ln Z / d beta^2.

    Written as the scaled energy variance, 6 P(4,t)/P(2,t) - (2 P(3,t)/P(2,t))^2,
    which loses at most one digit as t -> 0 (where C ~ k t^2/18).
    """
    check_beta(beta)
    _, k2, k3, k4 = _kernels(beta, dp)
    mean = 2.0 * k3 / k2
    return k_boltz * (6.0 * k4 / k2 - mean * mean)


def entropy(beta: float, dp: DerivedParams, k_boltz: float = 1.0) -> float:
    """S = k (ln Z + beta U). Negative at low temperature (continuum entropy)."""
    return k_boltz * (log_partition(beta, dp) + beta * mean_energy(beta, dp))


def free_energy(beta: float, dp: DerivedParams) -> float:
    return -log_partition(beta, dp) / beta


def partition_direct(beta: float, dp: DerivedParams) -> float:
    t = beta * dp.a
    return (math.exp(-t) * (-1.0 - t) + 1.0) / (beta * beta * dp.b)


def mean_energy_direct(beta: float, dp: DerivedParams) -> float:
    a = dp.a
    e = math.exp(-beta * a)
    return (2.0 - e * (a * a * beta * beta + 2.0 * a * beta + 2.0)) / (
        beta * (1.0 - e - a * beta * e)
    )


def heat_capacity_direct(beta: float, dp: DerivedParams, k_boltz: float = 1.0) -> float:
    t = beta * dp.a
    e1 = math.exp(-t)
    e2 = math.exp(-2.0 * t)
    num = -2.0 + e1 * (t**3 - t**2 + 4.0 * t + 4.0) + e2 * (-t**2 - 4.0 * t - 2.0)
    den = (-1.0 + e1 + t * e1) ** 2
    return -k_boltz * num / den


def thermo_point(beta: float, dp: DerivedParams, k_boltz: float = 1.0) -> ThermoPoint:
    check_beta(beta)
    ln_z = log_partition(beta, dp)
    u = mean_energy(beta, dp)
    s = k_boltz * (ln_z + beta * u)
    f = -ln_z / beta
    point = ThermoPoint(
        beta=beta,
        z=math.exp(ln_z),
        u=u,
        c=heat_capacity(beta, dp, k_boltz),
        s=s,
        f=f,
    )
    check_identity(point.f, point.u, point.s, beta, k_boltz, IDENTITY_RTOL)
    return point


def check_identity(f: float, u: float, s: float, beta: float, k_boltz: float, rtol: float) -> None:
    """Raise unless F = U - S/(k beta), relative to the largest of the three terms."""
    ts = s / (k_boltz * beta)
    scale = max(abs(f), abs(u), abs(ts))
    if not abs(f - (u - ts)) <= rtol * scale:  # also rejects NaN
        raise ComputationError(
            f"F = U - TS violated at beta={beta}: F={f!r}, U={u!r}, S/(k beta)={ts!r}"
        )


def validate_beta_grid(betas: Sequence[float]) -> list[float]:
    betas = [float(b) for b in betas]
    if not betas:
        raise ValidationError("empty-sweep: no beta values given")
    for beta in betas:
        check_beta(beta)
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValidationError("beta grid must be strictly ascending")
    return betas


def thermo_sweep(betas: Sequence[float], dp: DerivedParams, k_boltz: float = 1.0) -> list[ThermoPoint]:
    points = []
    for beta in validate_beta_grid(betas):
        try:
            points.append(thermo_point(beta, dp, k_boltz))
        except LandauError as exc:
            raise type(exc)(f"beta={beta}: {exc}") from exc
    return points
