"""Logarithmic inverse coefficients and the second Hankel determinant on P(M).

Functions in P(M) satisfy z f''(z) = M (p(z) - 1) for a Caratheodory function
p = 1 + c1 z + c2 z^2 + ..., so a2 = M c1/2, a3 = M c2/6, a4 = M c3/12.
The coefficient maps are written with plain arithmetic and accept ints,
Fractions, floats or complex numbers alike; Fraction input stays exact.
"""

from __future__ import annotations

import cmath
import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple

import numpy as np
from scipy import optimize

from .errors import DegenerateInputError, DomainError

log = logging.getLogger(__name__)

TOL = 1e-12
M_MAX = 1.0 / math.log(4.0)
THRESHOLD = (6.0 + math.sqrt(114.0)) / 39.0
M1 = Fraction(4, 13)


def _abs2(z):
    return (z * z.conjugate()).real


# ---------------------------------------------------------------- data types


@dataclass(frozen=True)
class SchwarzTriple:
    p1: Any
    p2: Any = 0
    p3: Any = 0

    def __post_init__(self):
        if isinstance(self.p1, complex):
            if abs(self.p1.imag) > TOL:
                raise DomainError(f"p1 must be real, got {self.p1}")
            object.__setattr__(self, "p1", self.p1.real)
        if not -TOL <= self.p1 <= 1 + TOL:
            raise DomainError(f"p1 must lie in [0, 1], got {self.p1}")
        for name in ("p2", "p3"):
            if abs(getattr(self, name)) > 1 + TOL:
                raise DomainError(f"|{name}| must be at most 1, got {abs(getattr(self, name))}")

    def to_json(self) -> dict:
        return {
            "p1": float(self.p1),
            "p2": [float(complex(self.p2).real), float(complex(self.p2).imag)],
            "p3": [float(complex(self.p3).real), float(complex(self.p3).imag)],
        }


@dataclass(frozen=True)
class CoeffTriple:
    a2: Any
    a3: Any
    a4: Any

    def __iter__(self):
        return iter((self.a2, self.a3, self.a4))

    def rotate(self, theta: float) -> "CoeffTriple":
        w = cmath.exp(1j * theta)
        return CoeffTriple(w * self.a2, w**2 * self.a3, w**3 * self.a4)

    def to_json(self) -> dict:
        return {k: [float(complex(v).real), float(complex(v).imag)] for k, v in zip(("a2", "a3", "a4"), self)}


@dataclass(frozen=True)
class YParams:
    a: float
    b: float
    c: float


class Branch(str, enum.Enum):
    FIRST = "FIRST"
    SECOND = "SECOND"


@dataclass(frozen=True)
class BoundResult:
    m: float
    branch: Branch
    value: float
    extremal_description: str


# ------------------------------------------------------- coefficient functionals


def c_from_p(t: SchwarzTriple) -> tuple:
    p1, p2, p3 = t.p1, t.p2, t.p3
    q = 1 - p1 * p1
    c1 = 2 * p1
    c2 = 2 * p1 * p1 + 2 * q * p2
    c3 = 2 * p1**3 + 4 * q * p1 * p2 - 2 * q * p1 * p2 * p2 + 2 * q * (1 - _abs2(p2)) * p3
    return c1, c2, c3


def a_from_c(m, c) -> CoeffTriple:
    if not m > 0:
        raise DomainError(f"M must be positive, got {m}")
    c1, c2, c3 = c
    if isinstance(m, Fraction):
        return CoeffTriple(m * c1 / 2, m * c2 / 6, m * c3 / 12)
    return CoeffTriple(m * c1 / 2.0, m * c2 / 6.0, m * c3 / 12.0)


def inverse_coeffs(a: CoeffTriple) -> tuple:
    """(A2, A3, A4) of the inverse function f^{-1}(w) = w + A2 w^2 + ..."""
    a2, a3, a4 = a
    return -a2, 2 * a2 * a2 - a3, -5 * a2**3 + 5 * a2 * a3 - a4


def gamma_log(a: CoeffTriple) -> tuple:
    a2, a3, a4 = a
    half = Fraction(1, 2)
    third = Fraction(1, 3)
    return half * a2, half * (a3 - half * a2 * a2), half * (a4 - a2 * a3 + third * a2**3)


def gamma_inv(a: CoeffTriple) -> tuple:
    a2, a3, a4 = a
    return (
        -Fraction(1, 2) * a2,
        -Fraction(1, 2) * a3 + Fraction(3, 4) * a2 * a2,
        -Fraction(1, 2) * a4 + 2 * a2 * a3 - Fraction(5, 3) * a2**3,
    )


def h21_inv(a: CoeffTriple):
    """Gamma1*Gamma3 - Gamma2^2 in expanded form."""
    a2, a3, a4 = a
    return Fraction(1, 48) * (13 * a2**4 - 12 * a2 * a2 * a3 - 12 * a3 * a3 + 12 * a2 * a4)


def h21_from_schwarz(m, t: SchwarzTriple):
    """H21 of the logarithmic inverse coefficients written directly in (p1, p2, p3)."""
    p1, p2, p3 = t.p1, t.p2, t.p3
    q = 1 - p1 * p1
    m2 = m * m
    k = Fraction(1, 3)
    x = (
        (13 * m2 * m2 - 4 * m2 * m + 2 * k * m2) * p1**4
        - 2 * k * m2 * q * (2 + p1 * p1) * p2 * p2
        + (4 * k * m2 - 4 * m2 * m) * p1 * p1 * p2 * q
    )
    return Fraction(1, 48) * (x + 2 * m2 * p1 * p3 * q * (1 - _abs2(p2)))


def _reduced_parts(m, p1, p2):
    # the p3-free part X and the coefficient of p3 in 48*H21; numpy-friendly
    q = 1.0 - p1 * p1
    m2 = m * m
    x = (
        (13.0 * m2 * m2 - 4.0 * m2 * m + 2.0 * m2 / 3.0) * p1**4
        - (2.0 / 3.0) * m2 * q * (2.0 + p1 * p1) * p2 * p2
        + (4.0 * m2 / 3.0 - 4.0 * m2 * m) * p1 * p1 * p2 * q
    )
    w = 2.0 * m2 * p1 * q * (1.0 - np.abs(p2) ** 2)
    return x, w


def h21_reduced(m: float, p1, p2):
    """max over |p3| <= 1 of |H21|: (|X| + 2M^2 p1 (1-p1^2)(1-|p2|^2)) / 48."""
    x, w = _reduced_parts(m, p1, p2)
    return (np.abs(x) + w) / 48.0


def aligned_p3(m: float, p1: float, p2: complex) -> complex:
    """The unimodular p3 attaining h21_reduced (1 when the p3-free part vanishes)."""
    x, _ = _reduced_parts(m, p1, p2)
    return complex(x / abs(x)) if abs(x) > 0 else 1.0 + 0j


def abc_params(m: float, p1: float) -> YParams:
    if not 0.0 < p1 < 1.0:
        raise DomainError(f"p1 must lie strictly inside (0, 1), got {p1}")
    a = (39.0 * m * m - 12.0 * m + 2.0) * p1**3 / (6.0 * (1.0 - p1 * p1))
    b = (2.0 / 3.0 - 2.0 * m) * p1
    c = -(2.0 + p1 * p1) / (3.0 * p1)
    return YParams(a, b, c)


# ------------------------------------- closed-form disk maximum (y_closed)


def _y_candidates(y: YParams):
    A, B, C = y.a, y.b, y.c
    a, b, c = abs(A), abs(B), abs(C)
    out = []
    if A * C >= 0:
        if b >= 2 * (1 - c):
            out.append(("i-1", a + b + c))
        else:
            out.append(("i-2", 1 + a + B * B / (4 * (1 - c))))
        return out
    q = -4 * A * C * (1 / (C * C) - 1)
    if q <= B * B and b < 2 * (1 - c):
        out.append(("ii-1", 1 - a + B * B / (4 * (1 - c))))
    if B * B < min(4 * (1 + c) ** 2, q):
        out.append(("ii-2", 1 + a + B * B / (4 * (1 + c))))
    if out:
        return out
    # R(A, B, C); the first branch is |A| + |B| - |C|, as y_oracle confirms
    if c * (b + 4 * a) <= a * b:
        out.append(("R1", a + b - c))
    if a * b <= c * (b - 4 * a):
        out.append(("R2", -a + b + c))
    if not out:
        out.append(("R3", (a + c) * math.sqrt(1 - B * B / (4 * A * C))))
    return out


def y_closed_branch(y: YParams) -> tuple:
    """(value, branch name) of the piecewise closed-form disk maximum."""
    cands = _y_candidates(y)
    name, value = cands[0]
    for other, v in cands[1:]:
        if abs(v - value) > 1e-9:
            log.debug("y_closed branches %s and %s disagree at %s: %r vs %r", name, other, y, value, v)
    return value, name


def y_closed(y: YParams) -> float:
    return y_closed_branch(y)[0]


def _y_objective(y: YParams, z):
    return np.abs(y.a + y.b * z + y.c * z * z) + 1.0 - np.abs(z) ** 2


def y_oracle(y: YParams, resolution: int = 128) -> float:
    """Grid maximum of |A + Bz + Cz^2| + 1 - |z|^2 over the closed disk, locally polished.

    The best polar grid cell seeds a Nelder-Mead search in (rho, phi); rho is
    folded back into [0, 1], so every value returned is attained at a disk
    point and never exceeds the true maximum.
    """
    if resolution < 128:
        raise DomainError(f"resolution must be at least 128, got {resolution}")
    rho = np.linspace(0.0, 1.0, resolution + 1)
    phi = np.linspace(0.0, 2.0 * np.pi, 2 * resolution, endpoint=False)
    vals = _y_objective(y, rho[:, None] * np.exp(1j * phi[None, :]))
    i, j = np.unravel_index(np.argmax(vals), vals.shape)

    def neg(v):
        return -float(_y_objective(y, min(1.0, abs(v[0])) * cmath.exp(1j * v[1])))

    res = optimize.minimize(neg, [rho[i], phi[j]], method="Nelder-Mead", options={"xatol": 1e-9, "fatol": 1e-13})
    return max(float(vals[i, j]), -float(res.fun))


# ---------------------------------------------------------------- the bound

FIRST_EXTREMAL = "p(z) = (1 - z^2)/(1 + z^2)  (p1 = 0, p2 = -1)"
SECOND_EXTREMAL = "p(z) = (1 + z)/(1 - z)  (p1 = 1)"


def _check_m(m: float) -> None:
    if not (0.0 < m <= M_MAX):
        raise DomainError(f"M must lie in (0, 1/log 4] = (0, {M_MAX:.12g}], got {m}")


def first_branch(m: float) -> float:
    return m * m / 36.0


def second_branch(m: float) -> float:
    return m * m * (39.0 * m * m - 12.0 * m + 2.0) / 144.0


def sharp_bound(m: float) -> BoundResult:
    """The stated sharp bound on |H21|; ties at the threshold go to FIRST."""
    _check_m(m)
    if m <= THRESHOLD:
        return BoundResult(m, Branch.FIRST, first_branch(m), FIRST_EXTREMAL)
    return BoundResult(m, Branch.SECOND, second_branch(m), SECOND_EXTREMAL)


class MaximizeResult(NamedTuple):
    max_abs: float
    argmax: SchwarzTriple


@dataclass(frozen=True)
class GridConfig:
    p1: int = 512
    rho: int = 256
    phi: int = 512
    chunk: int = 32

    def __post_init__(self):
        if self.p1 < 2 or self.rho < 2 or self.phi < 4:
            raise DomainError(f"grid too small: {self}")


def _refine(m: float, p1: float, rho: float, phi: float, floor: float = 1e-6):
    """Compass search on (p1, rho, phi), halving the step down to the floor."""

    def f(v):
        u, r, t = v
        if not (0.0 <= u <= 1.0 and 0.0 <= r <= 1.0):
            return -np.inf
        return float(h21_reduced(m, u, r * cmath.exp(1j * t)))

    v = np.array([p1, rho, phi])
    best = f(v)
    step = np.array([1.0 / 512, 1.0 / 256, np.pi / 256])
    while step[0] >= floor:
        moved = False
        for k in range(3):
            for sgn in (1.0, -1.0):
                w = v.copy()
                w[k] = min(1.0, max(0.0, w[k] + sgn * step[k])) if k < 2 else w[k] + sgn * step[k]
                val = f(w)
                if val > best:
                    v, best, moved = w, val, True
        if not moved:
            step = step / 2.0
    return best, v


def maximize_h21(m: float, cfg: GridConfig | None = None) -> MaximizeResult:
    """Brute-force max of |H21| over p1 in [0,1], |p2| <= 1, with p3 aligned.

    The objective is invariant under p2 -> conj(p2) (all coefficients are
    real), so only phi in [0, pi] of the polar p2 grid is evaluated.
    """
    _check_m(m)
    cfg = cfg or GridConfig()
    p1 = np.linspace(0.0, 1.0, cfg.p1)
    rho = np.linspace(0.0, 1.0, cfg.rho)
    phi = 2.0 * np.pi * np.arange(cfg.phi // 2 + 1) / cfg.phi
    p2 = rho[:, None] * np.exp(1j * phi[None, :])
    best, arg = -1.0, (0.0, 0.0, 0.0)
    for s in range(0, cfg.p1, cfg.chunk):
        u = p1[s : s + cfg.chunk, None, None]
        vals = h21_reduced(m, u, p2[None, :, :])
        k = int(np.argmax(vals))
        if vals.flat[k] > best:
            i, j, l = np.unravel_index(k, vals.shape)
            best, arg = float(vals.flat[k]), (float(p1[s + i]), float(rho[j]), float(phi[l]))
    val, (u, r, t) = _refine(m, *arg)
    u, r, t = float(u), float(r), float(t)
    t = abs(math.remainder(t, 2.0 * math.pi))  # canonical phi in [0, pi]
    p2 = r * cmath.exp(1j * t)
    return MaximizeResult(float(val), SchwarzTriple(float(u), complex(p2), aligned_p3(m, float(u), complex(p2))))


def small_m_witness(m: Fraction = Fraction(1, 10), p1: Fraction = Fraction(1, 4)) -> tuple:
    """Exact |H21| at (p1, p2 = -1), set against M^2/36.

    With |p2| = 1 the p3 term drops out and everything is rational, so the
    comparison is exact.  For M below 1/6 the value exceeds M^2/36.
    """
    h = h21_from_schwarz(m, SchwarzTriple(p1, -1, 0))
    return abs(h), m * m / 36


# ------------------------------------------------------------ extremal p


def extremal_p_eval(t: SchwarzTriple, z: complex) -> complex:
    """The unique Caratheodory function fixed by Schwarz parameters on the boundary."""
    if abs(z) >= 1:
        raise DomainError(f"|z| must be < 1, got {abs(z)}")
    p1, p2, p3 = complex(t.p1), complex(t.p2), complex(t.p3)
    c1, c2 = p1.conjugate(), p2.conjugate()
    if abs(abs(p1) - 1) <= TOL:
        return (1 + p1 * z) / (1 - p1 * z)
    if abs(abs(p2) - 1) <= TOL:
        num = 1 + (p1 + c1 * p2) * z + p2 * z * z
        den = 1 - (p1 - c1 * p2) * z - p2 * z * z
        return num / den
    if abs(abs(p3) - 1) <= TOL:
        num = 1 + (c2 * p3 + c1 * p2 + p1) * z + (c1 * p3 + p1 * c2 * p3 + p2) * z**2 + p3 * z**3
        den = 1 + (c2 * p3 + c1 * p2 - p1) * z + (c1 * p3 - p1 * c2 * p3 - p2) * z**2 - p3 * z**3
        return num / den
    raise DegenerateInputError("parameters are not in a uniqueness regime (need |p1|, |p2| or |p3| = 1)")


# --------------------------------------------------------- proof constants


def omega1(m: float, t: float) -> float:
    return (117 * m**3 - 153 * m**2 + 48 * m - 8) * t * t + (-156 * m**2 + 54 * m - 10) * t + 4 * (1 - 3 * m)


def omega2(m: float, t: float) -> float:
    return (117 * m**3 + 3 * m**2) * t * t + 2 * (78 * m**2 - 21 * m + 3) * t + 4 * (1 - 3 * m)


def delta1(m: float) -> float:
    return 19 - 186 * m + 899 * m**2 - 2172 * m**3 + 2496 * m**4


def delta2(m: float) -> float:
    return 3 - 42 * m + 299 * m**2 - 1236 * m**3 + 2496 * m**4


def xi1(m: float, x: float) -> float:
    return (39 * m * m - 12 * m) * x * x - 2 * x + 4


def xi2(m: float, x: float) -> float:
    return (21 * m * m * x + 6 * (16 * m * m - 6 * m + 1)) / ((39 * m * m - 12 * m + 2) * (2 + x))


@dataclass(frozen=True)
class ProofConstants:
    m: float
    t1: float | None
    t2: float | None
    t3: float | None
    t4: float | None
    y0: float | None
    y1: float | None
    y3: float | None
    threshold: float
    M1: Fraction
    absent: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {}
        for k in ("m", "t1", "t2", "t3", "t4", "y0", "y1", "y3", "threshold"):
            out[k] = getattr(self, k)
        out["M1"] = str(self.M1)
        out["absent"] = dict(self.absent)
        return out


def proof_constants(m: float) -> ProofConstants:
    """Closed-form case constants, each reported only on the M-range where it is used."""
    if not (m > 0 and math.isfinite(m)):
        raise DomainError(f"M must be positive, got {m}")
    absent = {}
    vals = dict.fromkeys(("t1", "t2", "t3", "t4", "y0", "y1", "y3"))
    third = 1.0 / 3.0
    if m > M_MAX:
        for k in vals:
            absent[k] = "M above 1/log 4"
    else:
        if m == third:
            absent["t1"] = absent["t2"] = "M = 1/3 separates the two sub-cases using Omega1"
        else:
            d = 117 * m**3 - 153 * m**2 + 48 * m - 8
            s = math.sqrt(3 * delta1(m))
            vals["t1"] = (78 * m * m - 27 * m + 5 - s) / d
            vals["t2"] = (78 * m * m - 27 * m + 5 + s) / d
        if m >= third:
            s = math.sqrt(3 * delta2(m))
            d = 117 * m**3 + 3 * m * m
            vals["t3"] = (-78 * m * m + 21 * m - 3 - s) / d
            vals["t4"] = (-78 * m * m + 21 * m - 3 + s) / d
        else:
            absent["t3"] = absent["t4"] = "defined for 1/3 <= M <= 1/log 4"
        if m < 1.0 / 6.0:
            vals["y0"] = (1 - 6 * m) / (39 * m * m - 24 * m + 8)
        else:
            absent["y0"] = "defined for 0 < M < 1/6"
        if m > 0.5:
            vals["y1"] = (2 * m - 1) / (13 * m * m)
        else:
            absent["y1"] = "defined for 1/2 < M <= 1/log 4"
        if 4.0 / 13.0 < m < third:
            vals["y3"] = 1.0 / (39 * m * m - 12 * m)
        else:
            absent["y3"] = "defined for 4/13 < M < 1/3 (39M^2 - 12M vanishes at 4/13)"
    return ProofConstants(m=m, threshold=THRESHOLD, M1=M1, absent=absent, **vals)
