"""Harmonic maps f = h + conj(g) in the family D0_H(alpha, M).

A map belongs to the family when, throughout the unit disk,

    |(1-a) h'(z) + a z h''(z) - (1-a)| + |(1-a) g'(z) + a z g''(z)| <= M,

with g'(0) = 0.  Maps are finite polynomials: ``a[k]`` and ``b[k]`` hold the
coefficient of z**(k+2) in h and g; the linear term of h is fixed to 1.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import optimize

from .errors import DomainError

UNIT_TOL = 1e-12
MEMBER_RTOL = 1e-12
JACOBIAN_TOL = 1e-10
GROWTH_TOL = 1e-10
CIRCLES = (0.25, 0.5, 0.75, 0.95)
MIN_SAMPLES = 256


@dataclass(frozen=True)
class ClassParams:
    alpha: float
    m: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not (self.m > 0.0 and math.isfinite(self.m)):
            raise DomainError(f"M must be positive, got {self.m}")


def weight(n, alpha: float):
    """n + (n^2 - 2n) alpha: the factor the defining operator puts on the z^n coefficient."""
    return n + (n * n - 2 * n) * alpha


@dataclass(frozen=True, eq=False)
class HarmonicPolynomialMap:
    a: np.ndarray
    b: np.ndarray

    def __init__(self, a=(), b=()):
        a = np.asarray(a, dtype=complex).ravel()
        b = np.asarray(b, dtype=complex).ravel()
        n = max(len(a), len(b), 1)
        object.__setattr__(self, "a", np.pad(a, (0, n - len(a))))
        object.__setattr__(self, "b", np.pad(b, (0, n - len(b))))

    @property
    def degree(self) -> int:
        return len(self.a) + 1

    @property
    def n(self) -> np.ndarray:
        return np.arange(2, self.degree + 1)

    def h_coeffs(self) -> np.ndarray:
        return np.concatenate([[0.0, 1.0], self.a])

    def g_coeffs(self) -> np.ndarray:
        return np.concatenate([[0.0, 0.0], self.b])

    def h(self, z):
        return P.polyval(z, self.h_coeffs())

    def g(self, z):
        return P.polyval(z, self.g_coeffs())

    def h_prime(self, z):
        return P.polyval(z, P.polyder(self.h_coeffs()))

    def g_prime(self, z):
        return P.polyval(z, P.polyder(self.g_coeffs()))

    def __call__(self, z):
        return self.h(z) + np.conj(self.g(z))

    def to_json(self) -> dict:
        return {
            "a": [[float(c.real), float(c.imag)] for c in self.a],
            "b": [[float(c.real), float(c.imag)] for c in self.b],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HarmonicPolynomialMap":
        def parse(rows):
            out = []
            for row in rows:
                if len(row) != 2:
                    raise ValueError(f"coefficient must be a [re, im] pair, got {row!r}")
                out.append(complex(float(row[0]), float(row[1])))
            return out

        return cls(parse(data.get("a", [])), parse(data.get("b", [])))

    @classmethod
    def load(cls, path) -> "HarmonicPolynomialMap":
        return cls.from_json(json.loads(Path(path).read_text()))


def _operator_coeffs(coeffs: np.ndarray, alpha: float) -> np.ndarray:
    # coefficient of z^(n-1) is weight(n) * c_n
    n = np.arange(2, len(coeffs) + 2)
    return np.concatenate([[0.0], weight(n, alpha) * coeffs])


def d_operator(f: HarmonicPolynomialMap, params: ClassParams, z):
    """((1-a)h' + a z h'' - (1-a), (1-a)g' + a z g'') evaluated at z (scalar or array)."""
    first = P.polyval(z, _operator_coeffs(f.a, params.alpha))
    second = P.polyval(z, _operator_coeffs(f.b, params.alpha))
    return first, second


def _boundary_sum(f: HarmonicPolynomialMap, params: ClassParams, theta):
    first, second = d_operator(f, params, np.exp(1j * np.asarray(theta)))
    return np.abs(first) + np.abs(second)


class MembershipStatus(str, enum.Enum):
    MEMBER_UP_TO_SAMPLING = "MEMBER_UP_TO_SAMPLING"
    REFUTED = "REFUTED"


@dataclass(frozen=True)
class MembershipVerdict:
    status: MembershipStatus
    max_value: float
    witness_z: complex | None = None

    @property
    def witness_theta(self) -> float | None:
        return None if self.witness_z is None else float(np.angle(self.witness_z) % (2 * np.pi))

    def exceedance(self, m: float) -> float:
        return self.max_value - m


def check_membership(f: HarmonicPolynomialMap, params: ClassParams, samples: int = 4096) -> MembershipVerdict:
    """Boundary test of the defining inequality.

    |first| + |second| is subharmonic, so its supremum over the closed disk is
    reached on the unit circle.  The circle is sampled uniformly and the best
    sample polished by a bounded scalar search; a value above M is a genuine
    counterexample, anything else is only evidence.
    """
    if samples < MIN_SAMPLES:
        raise DomainError(f"samples must be at least {MIN_SAMPLES}, got {samples}")
    theta = 2.0 * np.pi * np.arange(samples) / samples
    s = _boundary_sum(f, params, theta)
    k = int(np.argmax(s))
    best_t, best = float(theta[k]), float(s[k])
    step = 2.0 * np.pi / samples
    res = optimize.minimize_scalar(
        lambda t: -float(_boundary_sum(f, params, t)),
        bounds=(best_t - step, best_t + step),
        method="bounded",
        options={"xatol": 1e-12},
    )
    if -res.fun > best:
        best_t, best = float(res.x), float(-res.fun)
    if best > params.m * (1.0 + MEMBER_RTOL):
        return MembershipVerdict(MembershipStatus.REFUTED, best, complex(np.exp(1j * best_t)))
    return MembershipVerdict(MembershipStatus.MEMBER_UP_TO_SAMPLING, best, None)


def coefficient_bound(n: int, params: ClassParams) -> float:
    if n < 2:
        raise DomainError(f"coefficient index must be >= 2, got {n}")
    return params.m / weight(n, params.alpha)


@dataclass(frozen=True)
class CoefficientRow:
    n: int
    abs_a: float
    abs_b: float
    bound: float
    ok: bool


@dataclass(frozen=True)
class CoefficientReport:
    rows: tuple
    passed: bool

    @property
    def failures(self) -> list:
        return [r.n for r in self.rows if not r.ok]


def check_coefficient_bounds(f: HarmonicPolynomialMap, params: ClassParams) -> CoefficientReport:
    rows = []
    for n, an, bn in zip(f.n, f.a, f.b):
        bound = coefficient_bound(int(n), params)
        ok = abs(an) <= bound + 1e-12 and abs(bn) <= bound + 1e-12
        rows.append(CoefficientRow(int(n), abs(an), abs(bn), bound, ok))
    return CoefficientReport(tuple(rows), all(r.ok for r in rows))


def sufficient_margin(f: HarmonicPolynomialMap, params: ClassParams) -> float:
    """sum_n weight(n) (|a_n| + |b_n|) - M; a non-positive value guarantees membership."""
    w = weight(f.n, params.alpha)
    return float(np.sum(w * (np.abs(f.a) + np.abs(f.b)))) - params.m


@dataclass(frozen=True)
class StarlikeVerdict:
    starlike: bool
    margin: float


def starlike_sufficient(f: HarmonicPolynomialMap) -> StarlikeVerdict:
    margin = float(np.sum(f.n * (np.abs(f.a) + np.abs(f.b)))) - 1.0
    return StarlikeVerdict(margin <= 0.0, margin)


def growth_envelope(m: float, r: float) -> tuple:
    """(r - M r^2/2, r + M r^2/2); the lower value is returned raw even when negative."""
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0, 1), got {r}")
    return r - m * r * r / 2.0, r + m * r * r / 2.0


@dataclass(frozen=True)
class SampledBoundReport:
    passed: bool
    max_ratio: float
    witness_z: complex | None = None
    details: dict = field(default_factory=dict)


def _circle_points(samples: int):
    theta = 2.0 * np.pi * np.arange(samples) / samples
    for r in CIRCLES:
        yield r, r * np.exp(1j * theta)


def growth_check(f: HarmonicPolynomialMap, params: ClassParams, samples: int = 1024) -> SampledBoundReport:
    """Sampled check of r - M r^2/2 <= |f(z)| <= r + M r^2/2 on the standard circles."""
    if samples < MIN_SAMPLES:
        raise DomainError(f"samples must be at least {MIN_SAMPLES}, got {samples}")
    passed, worst, witness = True, 0.0, None
    for r, z in _circle_points(samples):
        lower, upper = growth_envelope(params.m, r)
        v = np.abs(f(z))
        ratio = v / upper
        k = int(np.argmax(ratio))
        if ratio[k] > worst:
            worst, witness = float(ratio[k]), complex(z[k])
        bad = (v > upper + GROWTH_TOL) | (v < lower - GROWTH_TOL)
        if bad.any():
            passed = False
            witness = complex(z[int(np.argmax(bad))])
    return SampledBoundReport(passed, worst, witness)


def jacobian_check(f: HarmonicPolynomialMap, params: ClassParams, samples: int = 1024) -> SampledBoundReport:
    """Sampled check of |h'|^2 - |g'|^2 <= (1 + M|z|)^2.

    The bound is a necessary condition for membership; the check reports on
    any map and proves nothing about maps outside the family.
    """
    if samples < MIN_SAMPLES:
        raise DomainError(f"samples must be at least {MIN_SAMPLES}, got {samples}")
    passed, worst, witness = True, -np.inf, None
    for r, z in _circle_points(samples):
        jac = np.abs(f.h_prime(z)) ** 2 - np.abs(f.g_prime(z)) ** 2
        bound = (1.0 + params.m * r) ** 2
        ratio = jac / bound
        k = int(np.argmax(ratio))
        if ratio[k] > worst:
            worst, witness = float(ratio[k]), complex(z[k])
        if (jac > bound + JACOBIAN_TOL).any():
            passed = False
    return SampledBoundReport(passed, worst, witness)


def epsilon_slice(f: HarmonicPolynomialMap, eps: complex) -> np.ndarray:
    """Coefficients (n >= 2) of the analytic function h + eps*g."""
    if abs(abs(eps) - 1.0) > UNIT_TOL:
        raise DomainError(f"|eps| must equal 1, got {abs(eps)}")
    return f.a + eps * f.b


def slice_operator_sup(coeffs: np.ndarray, params: ClassParams, samples: int = 4096) -> float:
    """Sampled sup over |z| = 1 of |(1-a)F' + a z F'' - (1-a)| for F = z + sum coeffs z^n."""
    z = np.exp(2j * np.pi * np.arange(samples) / samples)
    return float(np.max(np.abs(P.polyval(z, _operator_coeffs(np.asarray(coeffs, dtype=complex), params.alpha)))))


def extremal_map(n: int, params: ClassParams, conjugated: bool = False) -> HarmonicPolynomialMap:
    """z + M z^n / weight(n), or its co-analytic twin z + M conj(z^n) / weight(n)."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    coeffs = np.zeros(n - 1, dtype=complex)
    coeffs[-1] = coefficient_bound(n, params)
    return HarmonicPolynomialMap(b=coeffs) if conjugated else HarmonicPolynomialMap(a=coeffs)


def random_sufficient_map(
    rng: np.random.Generator, params: ClassParams, degree: int = 6, fill: float = 1.0
) -> HarmonicPolynomialMap:
    """Random map with sufficient_margin == (fill - 1) * M, so fill <= 1 gives a member."""
    k = degree - 1
    a = rng.normal(size=k) + 1j * rng.normal(size=k)
    b = rng.normal(size=k) + 1j * rng.normal(size=k)
    mask = rng.random(size=(2, k)) < 0.3
    a[mask[0]] = 0.0
    b[mask[1]] = 0.0
    w = weight(np.arange(2, degree + 1), params.alpha)
    total = np.sum(w * (np.abs(a) + np.abs(b)))
    if total == 0.0:
        a[0] = 1.0
        total = w[0]
    scale = fill * params.m / total
    return HarmonicPolynomialMap(a * scale, b * scale)
