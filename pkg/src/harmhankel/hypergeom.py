"""The slice 2F1(1, 1/alpha; 1 + 1/alpha; r) and the starlikeness radius it drives.

On this slice the Gauss series collapses to sum_n r**n / (1 + n*alpha), and
the Euler integral to (1/alpha) * int_0^1 t**(1/alpha - 1) / (1 - r t) dt.
Both are implemented so each can check the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate, optimize

from .errors import DomainError

SERIES_CUTOFF = 0.9
SERIES_TOL = 1e-13
QUAD_TOL = 1e-12
BRACKET = (1e-9, 1.0 - 1e-9)


@dataclass(frozen=True)
class RadiusSolution:
    r1: float
    residual: float
    iterations: int


def _check(alpha: float, r: float) -> None:
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0, 1); the series diverges at r = 1 (got {r})")


def _series(alpha: float, r: float) -> float:
    total = 0.0
    term = 1.0  # r**n
    n = 0
    while True:
        total += term / (1.0 + n * alpha)
        n += 1
        term *= r
        # remaining tail <= r**n / ((1 + n*alpha) * (1 - r))
        if term / ((1.0 + n * alpha) * (1.0 - r)) < SERIES_TOL:
            return total


def f21_integral(alpha: float, r: float) -> float:
    """Euler-integral evaluation by adaptive quadrature."""
    _check(alpha, r)
    if r == 0.0:
        return 1.0
    e = 1.0 / alpha - 1.0
    val, _err = integrate.quad(
        lambda t: t**e / (1.0 - r * t), 0.0, 1.0, epsabs=QUAD_TOL, epsrel=1e-12, limit=200
    )
    return val / alpha


def f21_ratio(alpha: float, r: float) -> float:
    """2F1(1, 1/alpha; 1 + 1/alpha; r), by the series for r <= 0.9 and quadrature above."""
    _check(alpha, r)
    if r > SERIES_CUTOFF:
        return f21_integral(alpha, r)
    return _series(alpha, r)


def radius_function(alpha: float, m: float, r: float) -> float:
    return 2.0 * m * r * f21_ratio(alpha, r) - 1.0


def starlike_radius(alpha: float, m: float) -> RadiusSolution:
    """Root r1 of 2 M r 2F1(1, 1/alpha; 1 + 1/alpha; r) = 1 in (0, 1).

    The left side is a power series in r with positive coefficients, hence
    strictly increasing on [0, 1); it equals -1 at 0 and blows up at 1, so
    the smallest root is the only one and bracketing cannot miss it.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if not (m > 0.0 and math.isfinite(m)):
        raise DomainError(f"M must be positive, got {m}")
    lo, hi = BRACKET
    h = lambda r: radius_function(alpha, m, r)  # noqa: E731
    if h(lo) >= 0.0:
        # M so large that the root sits below the bracket; fall back to exact bisection near 0
        lo = 0.0
    r1, info = optimize.brentq(h, lo, hi, xtol=1e-16, rtol=1e-15, maxiter=200, full_output=True)
    return RadiusSolution(r1=r1, residual=h(r1), iterations=info.iterations)
