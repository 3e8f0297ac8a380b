"""Numerical kernels used by the physics modules and their test oracles.

Quadrature is backed by QUADPACK (``scipy.integrate.quad``) and the
tridiagonal eigenproblem by LAPACK bisection (``stebz``); the series
kernels and finite-difference derivative are implemented here.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate as _integrate
from scipy.linalg import eigvalsh_tridiagonal

from .errors import QuadratureBudgetExceeded, StepUnderflow, ValidationError

EPS = sys.float_info.epsilon

# Maximum number of QUADPACK subintervals before giving up.
SUBDIVISION_BUDGET = 500


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix stored as its two distinct diagonals."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        offdiag = np.asarray(self.offdiag, dtype=float)
        if diag.ndim != 1 or diag.size < 2:
            raise ValidationError("tridiagonal matrix needs N >= 2 diagonal entries")
        if offdiag.shape != (diag.size - 1,):
            raise ValidationError(
                f"off-diagonal must have length N-1={diag.size - 1}, got {offdiag.size}"
            )
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @property
    def size(self) -> int:
        return self.diag.size

    def norm(self) -> float:
        """Infinity norm (max absolute row sum)."""
        rows = np.abs(self.diag).copy()
        rows[:-1] += np.abs(self.offdiag)
        rows[1:] += np.abs(self.offdiag)
        return float(rows.max())

    def to_dense(self) -> np.ndarray:
        return (
            np.diag(self.diag)
            + np.diag(self.offdiag, 1)
            + np.diag(self.offdiag, -1)
        )


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 0.0,
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``[lo, hi]``.

    ``hi = inf`` is routed through :func:`integrate_semi_infinite`.
    ``abs_tol`` only matters for integrals whose exact value is zero,
    where a purely relative criterion can never be met.
    """
    if not 0.0 < rel_tol <= 1e-2:
        raise ValidationError(f"rel_tol must lie in (0, 1e-2], got {rel_tol}")
    if math.isinf(hi) and hi > 0:
        return integrate_semi_infinite(f, lo, rel_tol, abs_tol=abs_tol)
    if not lo < hi:
        raise ValidationError(f"integration requires lo < hi, got [{lo}, {hi}]")

    out = _integrate.quad(
        f, lo, hi,
        # QUADPACK refuses relative targets below 50 eps.
        epsabs=abs_tol, epsrel=max(rel_tol, 50 * EPS),
        limit=SUBDIVISION_BUDGET, full_output=1,
    )
    value, abserr, info = out[0], out[1], out[2]
    if len(out) > 3:
        raise QuadratureBudgetExceeded(
            f"quadrature-budget-exceeded on [{lo}, {hi}]: {out[3].splitlines()[0]}",
            estimate=value,
            abs_error=abserr,
        )
    return QuadratureResult(float(value), float(abserr), int(info["neval"]))


def integrate_semi_infinite(
    f: Callable[[float], float],
    lo: float,
    rel_tol: float = 1e-10,
    scale: float = 1.0,
    abs_tol: float = 0.0,
) -> QuadratureResult:
    """Integrate an exponentially decaying ``f`` over ``[lo, inf)``.

    Uses ``u = lo - scale*ln(1 - s)`` with ``s`` in ``[0, 1)``; ``scale``
    should roughly match the decay length of ``f`` so the mapped integrand
    stays bounded near ``s = 1``.
    """
    if scale <= 0:
        raise ValidationError(f"scale must be positive, got {scale}")

    def mapped(s):
        w = 1.0 - s
        return f(lo - scale * math.log(w)) * scale / w

    return integrate(mapped, 0.0, 1.0, rel_tol, abs_tol=abs_tol)


def _series_switch(order: int) -> float:
    return 0.5 * (order - 1)


def incomplete_gamma_kernel(order: int, t: float) -> float:
    """Return ``1 - exp(-t) * sum_{i<order} t**i / i!`` to full relative accuracy.

    This is the regularized lower incomplete gamma function P(order, t).
    Below the switch point the tail ``exp(-t) * sum_{i>=order} t**i / i!`` is
    summed instead; all its terms are positive so nothing cancels.
    """
    if order < 1:
        raise ValidationError(f"order must be >= 1, got {order}")
    if t < 0:
        raise ValidationError(f"kernel argument must be >= 0, got {t}")
    if t == 0.0:
        return 0.0
    if t < _series_switch(order):
        term = 1.0
        for i in range(1, order + 1):
            term *= t / i
        total = 0.0
        i = order
        while term > EPS * 1e-3 * total:
            total += term
            i += 1
            term *= t / i
        return math.exp(-t) * total
    term = 1.0
    head = 1.0
    for i in range(1, order):
        term *= t / i
        head += term
    return 1.0 - math.exp(-t) * head


def stable_kernel_k2(t: float) -> float:
    """``1 - exp(-t)(1 + t)`` without cancellation at small ``t``."""
    return incomplete_gamma_kernel(2, t)


def derivative(
    f: Callable[[float], float],
    x: float,
    order: int = 1,
    h: float | None = None,
) -> float:
    """Central-difference derivative with one Richardson step (h and h/2).

    Default steps scale with ``|x|`` (``eps**(1/3)`` for first, ``eps**(1/4)``
    for second derivatives), which suits positive variables like beta.
    """
    if order not in (1, 2):
        raise ValidationError(f"order must be 1 or 2, got {order}")
    if h is None:
        scale = abs(x) if x != 0 else 1.0
        h = scale * EPS ** (1 / 3 if order == 1 else 1 / 4)
    if h <= 0:
        raise ValidationError(f"step must be positive, got {h}")
    half = 0.5 * h
    if x + half == x or x - half == x:
        raise StepUnderflow(f"step-underflow: h={h} does not move x={x}")

    if order == 1:
        def stencil(step):
            return (f(x + step) - f(x - step)) / (2.0 * step)
    else:
        fx = f(x)

        def stencil(step):
            return (f(x + step) - 2.0 * fx + f(x - step)) / (step * step)

    coarse = stencil(h)
    fine = stencil(half)
    return (4.0 * fine - coarse) / 3.0


def eigen_smallest(m: TridiagonalMatrix, k: int) -> np.ndarray:
    """The ``k`` smallest eigenvalues of ``m`` in ascending order."""
    if not 1 <= k <= m.size:
        raise ValidationError(f"k must be in [1, {m.size}], got {k}")
    vals = eigvalsh_tridiagonal(
        m.diag, m.offdiag,
        select="i", select_range=(0, k - 1),
        lapack_driver="stebz",
    )
    return np.sort(vals)
