"""Exact sign certification for univariate and bivariate rational polynomials.

Every verdict is computed over :class:`fractions.Fraction`.  Univariate
claims go through Sturm chains of the square-free part; expressions of the
form ``p + q*sqrt(d)`` are reduced to the polynomial ``p**2 - q**2*d``; boxes
are handled by exact interval arithmetic with dyadic subdivision.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence, Union

from .errors import DegenerateInputError, RadicandError

log = logging.getLogger(__name__)

RationalLike = Union[int, Fraction, str]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


class Sign(str, enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    NONNEGATIVE = "NonNegative"
    NONPOSITIVE = "NonPositive"

    @property
    def strict(self) -> bool:
        return self in (Sign.POSITIVE, Sign.NEGATIVE)

    @property
    def direction(self) -> int:
        return 1 if self in (Sign.POSITIVE, Sign.NONNEGATIVE) else -1

    def flip(self) -> "Sign":
        return {
            Sign.POSITIVE: Sign.NEGATIVE,
            Sign.NEGATIVE: Sign.POSITIVE,
            Sign.NONNEGATIVE: Sign.NONPOSITIVE,
            Sign.NONPOSITIVE: Sign.NONNEGATIVE,
        }[self]

    def admits(self, s: int) -> bool:
        """Whether a value of sign ``s`` (-1, 0 or 1) is consistent with the claim."""
        if s == 0:
            return not self.strict
        return s == self.direction


class Verdict(str, enum.Enum):
    CERTIFIED = "CERTIFIED"
    REFUTED = "REFUTED"
    INCONCLUSIVE = "INCONCLUSIVE"


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalPoly:
    """Univariate polynomial with exact rational coefficients, ascending order."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def x(cls) -> "RationalPoly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c: RationalLike) -> "RationalPoly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable[RationalLike], lead: RationalLike = 1) -> "RationalPoly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-as_fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: RationalLike) -> int:
        return _sgn(self(as_fraction(x)))

    def derivative(self) -> "RationalPoly":
        return RationalPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __neg__(self) -> "RationalPoly":
        return RationalPoly([-c for c in self.coeffs])

    def __add__(self, other) -> "RationalPoly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPoly([u + v for u, v in zip(a, b)])

    __radd__ = __add__

    def __sub__(self, other) -> "RationalPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "RationalPoly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "RationalPoly":
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RationalPoly":
        out = RationalPoly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "RationalPoly"):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - other.degree, 1)
        lead = other.lead
        dd = other.degree
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if c:
                f = c / lead
                q[k - dd] = f
                for j, b in enumerate(other.coeffs):
                    rem[k - dd + j] -= f * b
        return RationalPoly(q), RationalPoly(rem[:dd] if dd > 0 else [])

    def __floordiv__(self, other: "RationalPoly") -> "RationalPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "RationalPoly") -> "RationalPoly":
        return divmod(self, other)[1]

    def scale(self, c: RationalLike) -> "RationalPoly":
        c = as_fraction(c)
        return RationalPoly([c * a for a in self.coeffs])

    def monic(self) -> "RationalPoly":
        return self.scale(1 / self.lead) if self.coeffs else self

    def primitive(self) -> "RationalPoly":
        """Positive multiple with coprime integer coefficients (signs preserved)."""
        if self.is_zero:
            return self
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return RationalPoly([Fraction(v // g) for v in ints])

    def gcd(self, other: "RationalPoly") -> "RationalPoly":
        a, b = self, other
        while not b.is_zero:
            a, b = b, (a % b).primitive()
        return a.monic()

    def squarefree(self) -> "RationalPoly":
        """p / gcd(p, p'), normalised to a primitive integer polynomial."""
        if self.is_zero:
            raise DegenerateInputError("degenerate input: zero polynomial")
        if self.degree <= 1:
            return self.primitive()
        g = self.gcd(self.derivative())
        return (self // g).primitive() if g.degree > 0 else self.primitive()

    def shift(self, a: RationalLike) -> "RationalPoly":
        """Return p(x + a)."""
        a = as_fraction(a)
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n):
            for k in range(n - 2, i - 1, -1):
                cs[k] += a * cs[k + 1]
        return RationalPoly(cs)

    def to_json(self) -> list:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "RationalPoly":
        return cls(Fraction(s) for s in data)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            mag = abs(c)
            coef = "" if (mag == 1 and k) else str(mag)
            body = coef + ("*" if coef and mono else "") + mono
            terms.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _as_poly(v) -> RationalPoly:
    if isinstance(v, RationalPoly):
        return v
    return RationalPoly([v])


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")
        if self.lo == self.hi and (self.lo_open or self.hi_open):
            raise ValueError("a degenerate interval must be closed at both ends")

    @classmethod
    def open(cls, lo, hi) -> "RationalInterval":
        return cls(lo, hi, True, True)

    @classmethod
    def closed(cls, lo, hi) -> "RationalInterval":
        return cls(lo, hi, False, False)

    @classmethod
    def left_open(cls, lo, hi) -> "RationalInterval":
        return cls(lo, hi, True, False)

    @classmethod
    def right_open(cls, lo, hi) -> "RationalInterval":
        return cls(lo, hi, False, True)

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: RationalLike) -> bool:
        x = as_fraction(x)
        left = x > self.lo if self.lo_open else x >= self.lo
        right = x < self.hi if self.hi_open else x <= self.hi
        return left and right

    def to_json(self) -> dict:
        return {
            "lo": f"{self.lo.numerator}/{self.lo.denominator}",
            "hi": f"{self.hi.numerator}/{self.hi.denominator}",
            "lo_open": self.lo_open,
            "hi_open": self.hi_open,
        }

    @classmethod
    def from_json(cls, d: dict) -> "RationalInterval":
        return cls(Fraction(d["lo"]), Fraction(d["hi"]), bool(d["lo_open"]), bool(d["hi_open"]))

    def __str__(self) -> str:
        return f"{'(' if self.lo_open else '['}{self.lo}, {self.hi}{')' if self.hi_open else ']'}"


# ---------------------------------------------------------------------------
# Sturm machinery
# ---------------------------------------------------------------------------


def sturm_chain(p: RationalPoly, normalize: bool = False) -> list:
    """Canonical Sturm chain p, p', -rem(p, p'), ...

    With ``normalize`` every member is replaced by its primitive integer
    multiple, which leaves all sign variations unchanged and keeps
    coefficient growth in check.
    """
    if p.is_zero:
        raise DegenerateInputError("degenerate input: zero polynomial")
    first = p.primitive() if normalize else p
    if p.degree == 0:
        return [first]
    chain = [first, p.derivative().primitive() if normalize else p.derivative()]
    while True:
        r = chain[-2] % chain[-1]
        if r.is_zero:
            break
        r = -r
        chain.append(r.primitive() if normalize else r)
    return chain


def sign_variations(chain: Sequence[RationalPoly], x: RationalLike) -> int:
    x = as_fraction(x)
    signs = [s for s in (_sgn(q(x)) for q in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _root_free_radius(sf: RationalPoly, a: Fraction) -> Fraction:
    """A dyadic delta > 0 such that sf has no root other than ``a`` within distance delta.

    Uses the Cauchy lower bound |y| > |c0| / (|c0| + max|ck|) on the roots of
    (sf / (x - a))(x + a).
    """
    r = sf // RationalPoly([-a, 1])
    s = r.shift(a)
    if s.degree <= 0:
        return Fraction(1)
    c0 = abs(s.coeffs[0])
    m = max(abs(c) for c in s.coeffs[1:])
    bound = c0 / (c0 + m)
    delta = Fraction(1)
    while delta * 2 > bound:
        delta /= 2
    return delta


class _Isolator:
    """Root isolation for one square-free polynomial."""

    def __init__(self, p: RationalPoly):
        self.sf = p.squarefree()
        self.chain = sturm_chain(self.sf, normalize=True)

    def count(self, a: Fraction, b: Fraction) -> int:
        # a, b must not be roots of sf
        return sign_variations(self.chain, a) - sign_variations(self.chain, b)

    def isolate(self, lo: Fraction, hi: Fraction) -> list:
        """Isolating intervals for the roots in (lo, hi); lo and hi must be non-roots.

        Returns (l, h) pairs with l < h holding exactly one root and non-root
        endpoints, or (x, x) for an exact rational root.
        """
        out: list = []
        stack = [(lo, hi)]
        while stack:
            a, b = stack.pop()
            n = self.count(a, b)
            if n == 0:
                continue
            if n == 1:
                out.append((a, b))
                continue
            mid = (a + b) / 2
            if self.sf(mid) == 0:
                d = min(_root_free_radius(self.sf, mid), (b - a) / 4)
                out.append((mid, mid))
                stack.append((a, mid - d))
                stack.append((mid + d, b))
            else:
                stack.append((a, mid))
                stack.append((mid, b))
        out.sort()
        return out

    def bisect_once(self, iv: tuple) -> tuple:
        a, b = iv
        if a == b:
            return iv
        mid = (a + b) / 2
        if self.sf(mid) == 0:
            return (mid, mid)
        return (a, mid) if self.count(a, mid) == 1 else (mid, b)

    def refine(self, iv: tuple, width: Fraction) -> tuple:
        while iv[1] - iv[0] > width:
            iv = self.bisect_once(iv)
        return iv


@dataclass
class _RootLayout:
    """Roots of a polynomial inside an interval together with interior sample points."""

    iso: _Isolator
    endpoint_roots: list
    interior: list
    samples: list
    adjustments: list

    @property
    def count(self) -> int:
        return len(self.endpoint_roots) + len(self.interior)


def _layout(p: RationalPoly, iv: RationalInterval) -> _RootLayout:
    iso = _Isolator(p)
    sf = iso.sf
    endpoint_roots: list = []
    adjustments: list = []
    if iv.degenerate:
        if sf(iv.lo) == 0:
            endpoint_roots.append(iv.lo)
        return _RootLayout(iso, endpoint_roots, [], [] if endpoint_roots else [iv.lo], adjustments)

    half = iv.width / 2
    left, right = iv.lo, iv.hi
    if sf(iv.lo) == 0:
        if not iv.lo_open:
            endpoint_roots.append(iv.lo)
        left = iv.lo + min(_root_free_radius(sf, iv.lo), half)
        adjustments.append(("lo", iv.lo, left))
    if sf(iv.hi) == 0:
        if not iv.hi_open:
            endpoint_roots.append(iv.hi)
        right = iv.hi - min(_root_free_radius(sf, iv.hi), half)
        adjustments.append(("hi", iv.hi, right))
    for side, old, new in adjustments:
        log.debug("endpoint %s=%s is a root; Sturm count taken at %s", side, old, new)

    if left == right:
        return _RootLayout(iso, endpoint_roots, [], [left], adjustments)

    roots = iso.isolate(left, right)
    # make every isolating interval sit strictly inside (left, right) without touching
    # its neighbours, so each gap between consecutive roots has a rational midpoint
    prev = left
    tight = []
    for r in roots:
        while r[0] == prev and r[0] != r[1]:
            r = iso.bisect_once(r)
        tight.append(r)
        prev = r[1]
    if tight:
        last = tight[-1]
        while last[1] == right and last[0] != last[1]:
            last = iso.bisect_once(last)
        tight[-1] = last
        # bisection of the last one cannot collide with an earlier interval
    bounds = [left] + [v for r in tight for v in r] + [right]
    samples = [(bounds[2 * k] + bounds[2 * k + 1]) / 2 for k in range(len(tight) + 1)]
    return _RootLayout(iso, endpoint_roots, tight, samples, adjustments)


def count_real_roots(p: RationalPoly, iv: RationalInterval) -> int:
    """Number of distinct real roots of ``p`` in ``iv`` (endpoints respected)."""
    if p.is_zero:
        raise DegenerateInputError("degenerate input: zero polynomial")
    return _layout(p, iv).count


def isolate_real_roots(p: RationalPoly, iv: RationalInterval, width: RationalLike | None = None) -> list:
    """Disjoint rational brackets, one per distinct root of ``p`` in ``iv``."""
    lay = _layout(p, iv)
    out = [(r, r) for r in lay.endpoint_roots if r == iv.lo]
    for r in lay.interior:
        out.append(lay.iso.refine(r, as_fraction(width)) if width is not None else r)
    out += [(r, r) for r in lay.endpoint_roots if r == iv.hi and r != iv.lo]
    return out


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    claim_id: str
    interval: object  # RationalInterval, or a pair of them for box claims
    expected: Sign
    root_count: int
    witness_point: object
    witness_sign: int
    verdict: Verdict
    note: str = ""

    def to_json(self) -> dict:
        if isinstance(self.interval, tuple):
            interval = [i.to_json() for i in self.interval]
        else:
            interval = self.interval.to_json()
        if isinstance(self.witness_point, tuple):
            point = [_frac_str(v) for v in self.witness_point]
        else:
            point = None if self.witness_point is None else _frac_str(self.witness_point)
        return {
            "claim_id": self.claim_id,
            "interval": interval,
            "expected": self.expected.value,
            "root_count": self.root_count,
            "witness": {"point": point, "sign": self.witness_sign},
            "verdict": self.verdict.value,
            "note": self.note,
        }


def _frac_str(v: Fraction) -> str:
    v = as_fraction(v)
    return f"{v.numerator}/{v.denominator}"


def certify_sign(p: RationalPoly, iv: RationalInterval, expected: Sign, claim_id: str = "") -> Certificate:
    """Certify that ``p`` has sign ``expected`` throughout ``iv``.

    Strict claims need zero roots in the interval; weak claims tolerate roots
    as long as no gap between consecutive roots carries the wrong sign (which
    rules out odd-multiplicity crossings).
    """
    if iv.degenerate:
        raise DegenerateInputError("degenerate interval")
    if p.is_zero:
        raise DegenerateInputError("degenerate input: zero polynomial")
    lay = _layout(p, iv)
    for x in lay.samples:
        s = p.sign_at(x)
        if not expected.admits(s):
            return Certificate(claim_id, iv, expected, lay.count, x, s, Verdict.REFUTED,
                               f"value of sign {s:+d} at interior point")
    witness = lay.samples[0]
    wsign = p.sign_at(witness)
    if not expected.strict or lay.count == 0:
        note = ""
        if lay.count:
            note = f"{lay.count} touching root(s) admitted by the weak claim"
        return Certificate(claim_id, iv, expected, lay.count, witness, wsign, Verdict.CERTIFIED, note)

    # strict claim with roots present
    if lay.endpoint_roots and not lay.interior:
        ends = ", ".join(str(r) for r in lay.endpoint_roots)
        return Certificate(claim_id, iv, expected, lay.count, lay.endpoint_roots[0], 0, Verdict.REFUTED,
                           f"fails only at closed endpoint(s) {ends}; the open interior is certified")
    r = lay.interior[0]
    if r[0] == r[1]:
        return Certificate(claim_id, iv, expected, lay.count, r[0], 0, Verdict.REFUTED, "exact rational root")
    r = lay.iso.refine(r, Fraction(1, 2**64))
    mid = (r[0] + r[1]) / 2
    return Certificate(claim_id, iv, expected, lay.count, mid, p.sign_at(mid), Verdict.REFUTED,
                       f"root isolated in [{r[0]}, {r[1]}]")


# ---------------------------------------------------------------------------
# p + q*sqrt(d)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SqrtExpr:
    p: RationalPoly
    q: RationalPoly
    d: RationalPoly

    def sign_at(self, x: RationalLike) -> int:
        """Exact sign of p(x) + q(x)*sqrt(d(x)) at a rational point with d(x) >= 0."""
        x = as_fraction(x)
        P, Q, D = self.p(x), self.q(x), self.d(x)
        if D < 0:
            raise RadicandError(f"radicand negative at {x}")
        sp, sq = _sgn(P), _sgn(Q)
        if sq == 0 or D == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        lhs, rhs = P * P, Q * Q * D
        if lhs == rhs:
            return 0
        return sp if lhs > rhs else sq

    def __call__(self, x: float) -> float:
        import math

        return float(self.p(x)) + float(self.q(x)) * math.sqrt(max(float(self.d(x)), 0.0))


def _sign_at_root(f: RationalPoly, lay: _RootLayout, r: tuple) -> int:
    """Sign of ``f`` at the unique root of the layout polynomial inside bracket ``r``."""
    if r[0] == r[1]:
        return f.sign_at(r[0])
    if f.is_zero:
        return 0
    g = f.gcd(lay.iso.sf)
    if g.degree >= 1 and count_real_roots(g, RationalInterval.open(r[0], r[1])) >= 1:
        return 0
    while count_real_roots(f, RationalInterval.closed(r[0], r[1])) > 0:
        r = lay.iso.bisect_once(r)
        if r[0] == r[1]:
            return f.sign_at(r[0])
    return f.sign_at(r[0])


def certify_sqrt_sign(e: SqrtExpr, iv: RationalInterval, expected: Sign, claim_id: str = "") -> Certificate:
    """Certify the sign of p + q*sqrt(d) on ``iv``.

    The expression is continuous wherever d >= 0 and can only vanish where
    p**2 - q**2*d does, so the roots of that polynomial split the interval
    into pieces of constant sign.  Each piece is decided by an exact sample;
    each root is classified as a genuine zero (p, q of opposite sign there)
    or a zero of the conjugate expression.
    """
    if iv.degenerate:
        raise DegenerateInputError("degenerate interval")
    rad = certify_sign(e.d, iv, Sign.NONNEGATIVE, claim_id)
    if rad.verdict is not Verdict.CERTIFIED:
        raise RadicandError(f"radicand sign unverified on {iv} (witness {rad.witness_point})")
    if e.q.is_zero:
        return certify_sign(e.p, iv, expected, claim_id)
    E = e.p * e.p - e.q * e.q * e.d
    if E.is_zero:
        raise DegenerateInputError("degenerate input: p^2 - q^2 d vanishes identically")
    lay = _layout(E, iv)
    for x in lay.samples:
        s = e.sign_at(x)
        if not expected.admits(s):
            return Certificate(claim_id, iv, expected, 0, x, s, Verdict.REFUTED,
                               f"value of sign {s:+d} at interior point")

    zeros = []
    for r in lay.endpoint_roots:
        if e.sign_at(r) == 0:
            zeros.append((r, r))
    for r in lay.interior:
        if r[0] == r[1]:
            if e.sign_at(r[0]) == 0:
                zeros.append(r)
            continue
        sp, sq = _sign_at_root(e.p, lay, r), _sign_at_root(e.q, lay, r)
        if sp == 0 or (sq != 0 and sp != sq):
            zeros.append(r)
    witness = lay.samples[0]
    wsign = e.sign_at(witness)
    if not expected.strict or not zeros:
        note = f"{len(zeros)} zero(s) admitted by the weak claim" if zeros else ""
        return Certificate(claim_id, iv, expected, len(zeros), witness, wsign, Verdict.CERTIFIED, note)
    z = zeros[0]
    if z[0] == z[1]:
        only_ends = all(zz[0] == zz[1] and zz[0] in (iv.lo, iv.hi) for zz in zeros)
        note = "fails only at closed endpoint(s)" if only_ends else "exact rational zero"
        return Certificate(claim_id, iv, expected, len(zeros), z[0], 0, Verdict.REFUTED, note)
    return Certificate(claim_id, iv, expected, len(zeros), (z[0] + z[1]) / 2, wsign, Verdict.REFUTED,
                       f"zero isolated in [{z[0]}, {z[1]}]")


# ---------------------------------------------------------------------------
# Bivariate polynomials on boxes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BivariatePoly:
    """f(x, y) = sum c[i, j] x**i y**j with exact rational coefficients."""

    terms: tuple  # sorted ((i, j), Fraction) pairs, zero terms dropped

    def __init__(self, terms):
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict = {}
        for (i, j), c in items:
            acc[(i, j)] = acc.get((i, j), Fraction(0)) + as_fraction(c)
        object.__setattr__(self, "terms", tuple(sorted((k, v) for k, v in acc.items() if v != 0)))

    @classmethod
    def from_y_polys(cls, polys: Sequence[RationalPoly]) -> "BivariatePoly":
        """Build sum_i polys[i](y) * x**i."""
        return cls({(i, j): c for i, p in enumerate(polys) for j, c in enumerate(p.coeffs)})

    def __call__(self, x, y):
        return sum(c * x**i * y**j for (i, j), c in self.terms)

    def __neg__(self) -> "BivariatePoly":
        return BivariatePoly({k: -c for k, c in self.terms})

    def partial_x(self) -> "BivariatePoly":
        return BivariatePoly({(i - 1, j): i * c for (i, j), c in self.terms if i})

    def partial_y(self) -> "BivariatePoly":
        return BivariatePoly({(i, j - 1): j * c for (i, j), c in self.terms if j})

    def at_x(self, x: RationalLike) -> RationalPoly:
        x = as_fraction(x)
        deg = max((j for (_, j), _ in self.terms), default=0)
        cs = [Fraction(0)] * (deg + 1)
        for (i, j), c in self.terms:
            cs[j] += c * x**i
        return RationalPoly(cs)

    def at_y(self, y: RationalLike) -> RationalPoly:
        y = as_fraction(y)
        deg = max((i for (i, _), _ in self.terms), default=0)
        cs = [Fraction(0)] * (deg + 1)
        for (i, j), c in self.terms:
            cs[i] += c * y**j
        return RationalPoly(cs)

    def interval_eval(self, xlo, xhi, ylo, yhi) -> tuple:
        """Natural interval extension over the box; returns an enclosing (lo, hi)."""
        xp = _ipowers(xlo, xhi, max((i for (i, _), _ in self.terms), default=0))
        yp = _ipowers(ylo, yhi, max((j for (_, j), _ in self.terms), default=0))
        lo = hi = Fraction(0)
        for (i, j), c in self.terms:
            a, b = _imul(xp[i], yp[j])
            if c > 0:
                lo += c * a
                hi += c * b
            else:
                lo += c * b
                hi += c * a
        return lo, hi


def _imul(u: tuple, v: tuple) -> tuple:
    prods = (u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1])
    return min(prods), max(prods)


def _ipowers(lo: Fraction, hi: Fraction, n: int) -> list:
    out = [(Fraction(1), Fraction(1))]
    for k in range(1, n + 1):
        a, b = lo**k, hi**k
        if k % 2 == 0 and lo < 0 < hi:
            out.append((Fraction(0), max(a, b)))
        else:
            out.append((min(a, b), max(a, b)))
    return out


@dataclass(frozen=True)
class BoxCell:
    xlo: Fraction
    xhi: Fraction
    ylo: Fraction
    yhi: Fraction

    @property
    def width(self) -> Fraction:
        return max(self.xhi - self.xlo, self.yhi - self.ylo)

    @property
    def center(self) -> tuple:
        return (self.xlo + self.xhi) / 2, (self.ylo + self.yhi) / 2

    def split(self) -> tuple:
        if self.xhi - self.xlo >= self.yhi - self.ylo:
            m = (self.xlo + self.xhi) / 2
            return BoxCell(self.xlo, m, self.ylo, self.yhi), BoxCell(m, self.xhi, self.ylo, self.yhi)
        m = (self.ylo + self.yhi) / 2
        return BoxCell(self.xlo, self.xhi, self.ylo, m), BoxCell(self.xlo, self.xhi, m, self.yhi)

    def points(self, k: int, rng) -> Iterator[tuple]:
        for _ in range(k):
            yield (self.xlo + (self.xhi - self.xlo) * Fraction(rng.random()),
                   self.ylo + (self.yhi - self.ylo) * Fraction(rng.random()))


DEFAULT_FLOOR = Fraction(1, 2**20)


def certify_box_sign(
    f: BivariatePoly,
    box: tuple,
    expected: Sign,
    claim_id: str = "",
    floor: Fraction = DEFAULT_FLOOR,
    max_cells: int = 200_000,
) -> Certificate:
    """Certify the sign of a bivariate polynomial on a closed box.

    Cells are accepted when their interval enclosure has the claimed sign.
    A cell whose enclosure straddles zero but on which one partial derivative
    has a definite sign is reduced to the edge where the extremum lives, and
    that edge polynomial is certified exactly with :func:`certify_sign`; this
    settles claims that touch zero along a box edge.  Otherwise cells are split
    dyadically down to ``floor``.
    """
    bx, by = box
    if bx.degenerate or by.degenerate:
        raise DegenerateInputError("degenerate box")
    d = expected.direction
    g = f if d > 0 else -f  # reduce every claim to a lower-bound question on g
    want = Sign.POSITIVE if expected.strict else Sign.NONNEGATIVE
    gx, gy = g.partial_x(), g.partial_y()

    def refuted(pt, note):
        s = _sgn(f(*pt))
        return Certificate(claim_id, box, expected, 0, pt, s, Verdict.REFUTED, note)

    stack = [BoxCell(bx.lo, bx.hi, by.lo, by.hi)]
    examined = 0
    reduced = 0
    while stack:
        cell = stack.pop()
        examined += 1
        if examined > max_cells:
            return Certificate(claim_id, box, expected, 0, cell.center, _sgn(f(*cell.center)),
                               Verdict.INCONCLUSIVE, f"cell budget {max_cells} exhausted")
        lo, hi = g.interval_eval(cell.xlo, cell.xhi, cell.ylo, cell.yhi)
        if lo > 0 or (lo == 0 and not expected.strict):
            continue
        if hi < 0 or (hi == 0 and expected.strict):
            return refuted(cell.center, "whole cell violates the claim")
        c = cell.center
        if not want.admits(_sgn(g(*c))):
            return refuted(c, "cell centre violates the claim")

        edge = _edge_reduction(gx, gy, cell)
        if edge is not None:
            axis, value = edge
            if axis == "x":
                poly, iv = g.at_x(value), RationalInterval.closed(cell.ylo, cell.yhi)
            else:
                poly, iv = g.at_y(value), RationalInterval.closed(cell.xlo, cell.xhi)
            if poly.is_zero:
                if not expected.strict:
                    reduced += 1
                    continue
                pt = (value, cell.ylo) if axis == "x" else (cell.xlo, value)
                return refuted(pt, "polynomial vanishes on a box edge")
            cert = certify_sign(poly, iv, want)
            if cert.verdict is Verdict.CERTIFIED:
                reduced += 1
                continue
            w = cert.witness_point
            pt = (value, w) if axis == "x" else (w, value)
            if not want.admits(_sgn(g(*pt))):
                return refuted(pt, "edge polynomial violates the claim")

        if cell.width <= floor:
            return Certificate(claim_id, box, expected, 0, c, _sgn(f(*c)), Verdict.INCONCLUSIVE,
                               f"undecided cell of width {cell.width} at the subdivision floor")
        a, b = cell.split()
        stack.append(b)
        stack.append(a)
    note = f"{examined} cells examined, {reduced} settled by edge reduction"
    return Certificate(claim_id, box, expected, 0, None, 0, Verdict.CERTIFIED, note)


def _edge_reduction(gx: BivariatePoly, gy: BivariatePoly, cell: BoxCell):
    """If g is monotone in one variable on the cell, name the edge holding its minimum."""
    # returns (fixed variable, its value)
    lo, hi = gx.interval_eval(cell.xlo, cell.xhi, cell.ylo, cell.yhi)
    if lo >= 0:
        return "x", cell.xlo
    if hi <= 0:
        return "x", cell.xhi
    lo, hi = gy.interval_eval(cell.xlo, cell.xhi, cell.ylo, cell.yhi)
    if lo >= 0:
        return "y", cell.ylo
    if hi <= 0:
        return "y", cell.yhi
    return None
