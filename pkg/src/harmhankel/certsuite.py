"""The claim ledger: every polynomial sign fact the H21 bound relies on, made checkable.

Each claim is a sign statement about a polynomial (POLY), a P + Q*sqrt(D)
expression (SQRT_EXPR), a bivariate polynomial on a box (BOX), or a root
localization (ROOT_FIND).  Intervals that end at 1/log 4 use the rational
superset ending at 7214/10000.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import hankel
from .errors import DomainError
from .polycert import (
    BivariatePoly,
    Certificate,
    RationalInterval,
    RationalPoly,
    Sign,
    SqrtExpr,
    Verdict,
    certify_box_sign,
    certify_sign,
    certify_sqrt_sign,
    count_real_roots,
    isolate_real_roots,
)

L = Fraction(7214, 10000)  # rational upper enclosure of 1/log 4
THIRD = Fraction(1, 3)
M3_REF = 0.423458
THRESHOLD_REF = 0.427617


def poly(*desc) -> RationalPoly:
    """Polynomial from coefficients listed highest degree first."""
    return RationalPoly(list(reversed(desc)))


# named proof polynomials, all in the variable M unless noted
PSI = poly(351, -576, 297, -72, 8)
PSI2 = poly(13689, -54054, 63423, -31176, 8934, -1392, 112)
PHI1 = poly(876096, -1908036, 1561005, -584694, 24093, 66768, -28496, 5376, -448)
PSI3 = poly(1404, -432, -12)
PSI4 = poly(13689, 18954, -5841, 1008, 30)
PHI2 = poly(-292032, 331812, -85719, 6354, 225)
PHI3 = poly(2135484, -4106700, 2755701, -823878, 42201, 45144, -14208, 1728, -64)
CONVEX = (
    poly(3822, -1176),
    poly(45318, -23772, 4662, -504),
    poly(189657, -129960, 38178, -6372, 549, -36),
    poly(369408, -312096, 117762, -25464, 3148, -216, 2),
    poly(319488, -337920, 162876, -45456, 7592, -720, 28),
)
PHI5 = poly(
    -735140367, 3004133184, -5375600802, 5646621132, -3923336331, 1908662292,
    -666386676, 166905792, -29086704, 3220992, -162816, -6144, 1024,
)
PHI6 = poly(
    -1779161054814, 3824833597416, -3931878351375, 2565044468649, -1185433827318,
    409947682644, -109189509687, 22694555717, -3684223958, 461874822, -43514160,
    2920752, -125280, 2592,
)
PHI7 = poly(
    20531017728, -39090726675, 35153704872, -19771596624, 7732426260, -2208185547,
    470004964, -74606178, 8663264, -701712, 35712, -864,
)
DELTA1 = poly(2496, -2172, 899, -186, 19)
DELTA2 = poly(2496, -1236, 299, -42, 3)
DEN1 = poly(117, -153, 48, -8)
NUM1 = poly(78, -27, 5)
DEN2 = poly(117, 3, 0, 0)
NUM2 = poly(78, -21, 3)
PSI_M6_1 = poly(-24336, 33345, -21801, 8415, -2023, 288, -20)
PSI_M6_2 = poly(312, -330, 159, -36, 4)
AMC = poly(39, -12, 2)
THRESHOLD_POLY = poly(39, -12, -2)
CASE4_V = poly(507, -156, -38, 12, -3)
# closed forms of xi1(t4), xi2(t4)
A1 = poly(48672, -34515, 12486, -2577, 312, -18)
B1 = poly(507, -273, 62, -6)
A2 = poly(3744, -1854, 345, -15)
B2 = poly(234, -72, 21, -3)


class ClaimKind(str, enum.Enum):
    POLY = "POLY"
    SQRT_EXPR = "SQRT_EXPR"
    BOX = "BOX"
    ROOT_FIND = "ROOT_FIND"


@dataclass(frozen=True)
class RootTarget:
    """A root-localization goal: bracket a root near ``value`` to within ``tol``."""

    value: float
    tol: float
    width: float


@dataclass(frozen=True)
class Claim:
    id: str
    kind: ClaimKind
    payload: object
    interval: object
    expected: object  # Sign, or RootTarget for ROOT_FIND
    statement: str
    note: str = ""


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    g_lo: float
    g_hi: float
    sign_changes: int = 1

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "g_lo": self.g_lo, "g_hi": self.g_hi, "sign_changes": self.sign_changes}


@dataclass(frozen=True)
class ClaimReport:
    claim_id: str
    kind: ClaimKind
    verdict: Verdict
    certificate: Certificate | None
    bracket: RootBracket | None
    elapsed: float
    statement: str = ""
    note: str = ""

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "claim_id": self.claim_id,
            "kind": self.kind.value,
            "statement": self.statement,
            "verdict": self.verdict.value,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.bracket is not None:
            out["bracket"] = self.bracket.to_json()
        out["note"] = self.note
        if timings:
            out["elapsed"] = self.elapsed
        return out


def _iv(lo, hi, lo_open, hi_open) -> RationalInterval:
    return RationalInterval(Fraction(lo), Fraction(hi), lo_open, hi_open)


def threshold_bracket(width: Fraction = Fraction(1, 10**9)) -> tuple:
    """Rational bracket of the unique root of 39M^2 - 12M - 2 in (0, 1)."""
    roots = isolate_real_roots(THRESHOLD_POLY, RationalInterval.open(0, 1), width=width)
    if len(roots) != 1:
        raise AssertionError(f"expected one root in (0,1), found {len(roots)}")
    return roots[0]


def _e4_poly() -> BivariatePoly:
    # x = p1^2, y = M: 21 M^2 x^2 - (213 M^2 - 72 M + 12) x + (192 M^2 - 72 M + 12)
    return BivariatePoly.from_y_polys([poly(192, -72, 12), poly(-213, 72, -12), poly(21, 0, 0)])


def builtin_claims() -> list:
    P, Q, B, R = ClaimKind.POLY, ClaimKind.SQRT_EXPR, ClaimKind.BOX, ClaimKind.ROOT_FIND
    pos, neg, nonneg, nonpos = Sign.POSITIVE, Sign.NEGATIVE, Sign.NONNEGATIVE, Sign.NONPOSITIVE
    thr_lo, thr_hi = threshold_bracket()
    fig12_hi = Fraction(423458, 10**6)
    reduced = "both rational-function bounds reduce, after clearing 3*p1^2 > 0, to p1^2 - 3*p1 + 2 > 0"
    out = [
        Claim("fig1", P, poly(1, -3, 2), _iv(0, 1, True, True), pos,
              "(2 - 3p1 + 2p1^2)/(3p1^2) > 1/3 on 0 < p1 < 1", reduced),
        Claim("fig2", P, poly(1, -3, 2), _iv(0, 1, True, True), pos,
              "(-2 + 3p1)/(3p1^2) < 1/3 on 0 < p1 < 1", reduced),
        Claim("sub32", P, poly(1, -5, 4), _iv(0, 1, True, True), pos,
              "t^2 - 5t + 4 > 0 for t = p1^2 in (0, 1), so -4AC(C^-2 - 1) < 0"),
        Claim("e4-box", B, _e4_poly(), (_iv(0, 1, False, False), _iv(Fraction(1, 100), L, False, False)), nonneg,
              "21M^2 t^2 - (213M^2 - 72M + 12) t + (192M^2 - 72M + 12) >= 0 for t = p1^2 in [0,1]",
              "zero along t = 1; the polynomial factors as (1 - t)(192M^2 - 72M + 12 - 21M^2 t)"),
        Claim("amc", P, AMC, _iv(0, L, True, False), pos, "39M^2 - 12M + 2 > 0, hence AC < 0"),
        Claim("sub331", P, poly(26, -7, 1), _iv(0, THIRD, True, False), pos, "26M^2 - 7M + 1 > 0 on (0, 1/3]"),
        Claim("delta1-upper", P, DELTA1, _iv(THIRD, L, True, False), pos,
              "19 - 186M + 899M^2 - 2172M^3 + 2496M^4 > 0 on (1/3, 1/log 4]"),
        Claim("den1-upper", P, DEN1, _iv(THIRD, L, True, False), neg, "117M^3 - 153M^2 + 48M - 8 < 0 on (1/3, 1/log 4]"),
        Claim("num1-upper", P, NUM1, _iv(THIRD, L, True, False), pos, "78M^2 - 27M + 5 > 0 on (1/3, 1/log 4]"),
        Claim("t1-neg", Q, SqrtExpr(NUM1, RationalPoly([-1]), DELTA1.scale(3)), _iv(THIRD, L, True, False), pos,
              "78M^2 - 27M + 5 - sqrt(3*Delta1) > 0 on (1/3, 1/log 4], i.e. t1 < 0"),
        Claim("fig3", P, PSI, _iv(THIRD, L, True, False), neg, "Psi(M) < 0 on (1/3, 1/log 4]"),
        Claim("delta1-lower", P, DELTA1, _iv(0, THIRD, True, True), pos, "Delta1 > 0 on (0, 1/3)"),
        Claim("den1-lower", P, DEN1, _iv(0, THIRD, True, True), neg, "117M^3 - 153M^2 + 48M - 8 < 0 on (0, 1/3)"),
        Claim("num1-lower", P, NUM1, _iv(0, THIRD, True, True), pos, "78M^2 - 27M + 5 > 0 on (0, 1/3)"),
        Claim("fig4-psi1", P, PSI, _iv(0, THIRD, True, True), pos, "Psi1(M) > 0 on (0, 1/3), i.e. t1 > 0"),
        Claim("fig4-psi2", P, PSI2, _iv(0, THIRD, True, True), pos, "Psi2(M) > 0 on (0, 1/3), i.e. t1 < 1"),
        Claim("phi1-concave", P, poly(39, -24, 8), _iv(0, THIRD, True, True), pos,
              "39M^2 - 24M + 8 > 0 on (0, 1/3), so Phi1'' < 0"),
        Claim("fig5", P, PHI1, _iv(0, Fraction(1, 6), True, True), neg,
              "phi1(M) < 0 on (0, 1/6), so y0 < t1"),
        Claim("delta2", P, DELTA2, _iv(THIRD, L, False, False), pos,
              "3 - 42M + 299M^2 - 1236M^3 + 2496M^4 > 0 on [1/3, 1/log 4]"),
        Claim("den2", P, DEN2, _iv(THIRD, L, False, False), pos, "117M^3 + 3M^2 > 0 on [1/3, 1/log 4]"),
        Claim("num2", P, NUM2, _iv(THIRD, L, False, False), pos, "78M^2 - 21M + 3 > 0 on [1/3, 1/log 4]"),
        Claim("fig6-psi3", P, PSI3, _iv(THIRD, L, True, False), pos, "Psi3(M) > 0 on (1/3, 1/log 4], i.e. t4 > 0"),
        Claim("fig6-psi4", P, PSI4, _iv(THIRD, L, True, False), pos, "Psi4(M) > 0 on (1/3, 1/log 4], i.e. t4 < 1"),
        Claim("fig7", P, PHI2, _iv(Fraction(1, 2), L, True, False), nonneg,
              "phi2(M) >= 0 on (1/2, 1/log 4], so y1 <= t4"),
        Claim("fig8", P, PHI3, _iv(Fraction(4, 13), THIRD, True, True), nonpos,
              "phi3(M) <= 0 on (4/13, 1/3), so y3 >= t1"),
        Claim("xi2-decreasing", P, poly(9, -6, 1), _iv(0, L, True, False), nonneg,
              "9M^2 - 6M + 1 >= 0, so xi2 is non-increasing"),
    ]
    for j, p in enumerate(CONVEX, start=1):
        out.append(Claim(f"fig9-psi{j}", P, p, _iv(THIRD, L, False, False), pos,
                         f"convexity coefficient Psi_{j}(M) > 0 on [1/3, 1/log 4]"))
    out += [
        Claim("m3", R, None, None, RootTarget(M3_REF, 5e-6, 1e-8),
              "xi1(t4) sqrt(xi2(t4)) = 39M^2 - 12M + 2 has its root near 0.423458 in [1/3, 1/log 4]"),
        Claim("threshold", R, THRESHOLD_POLY, RationalInterval.open(0, 1), RootTarget(THRESHOLD_REF, 5e-7, 1e-9),
              "39M^2 - 12M - 2 has exactly one root in (0, 1), near 0.427617",
              "the exact root (6 + sqrt 114)/39 = 0.4276173911 rounds to 0.427617 at 6 decimals"),
        Claim("case4-I", P, THRESHOLD_POLY, _iv(0, thr_lo, True, False), nonpos,
              "(M^2/144)(39M^2 - 12M + 2) <= M^2/36 up to the threshold",
              "right end is the lower end of the certified threshold bracket"),
        Claim("case4-II", P, THRESHOLD_POLY, _iv(thr_hi, L, False, False), nonneg,
              "M^2/36 <= (M^2/144)(39M^2 - 12M + 2) from the threshold on",
              "left end is the upper end of the certified threshold bracket"),
        Claim("case4-III", P, AMC - poly(16, -6, 1).scale(3), _iv(0, L, True, False), nonneg,
              "3(16M^2 - 6M + 1) <= 39M^2 - 12M + 2, i.e. the xi-bound below 1/3 is at most M^2/36",
              "the difference is -(3M - 1)^2, which vanishes only at M = 1/3"),
        Claim("case4-IV", Q, SqrtExpr(DEN1 * DEN1 - PSI_M6_1.scale(6), PSI_M6_2.scale(-6), DELTA1.scale(3)),
              _iv(0, THIRD, True, False), nonneg,
              "M^2 (psi1 + psi2 sqrt(3 Delta1)) / (6 (117M^3 - 153M^2 + 48M - 8)^2) <= M^2/36 on (0, 1/3]"),
        Claim("fig11", P, PHI5, _iv(0, THIRD, True, False), nonneg, "Phi5(M) >= 0 on (0, 1/3]"),
        Claim("case4-V", P, CASE4_V, _iv(Fraction(1, 2), L, True, False), nonneg,
              "507M^4 - 156M^3 - 38M^2 + 12M - 3 >= 0 on (1/2, 1/log 4]"),
        Claim("fig12", Q, SqrtExpr(PHI6, PHI7, DELTA2.scale(3)), _iv(THIRD, fig12_hi, False, False), nonneg,
              "Phi8(M) = Phi6 + Phi7 sqrt(3 Delta2) >= 0 on [1/3, 0.423458]"),
        Claim("fig12-ext", Q, SqrtExpr(PHI6, PHI7, DELTA2.scale(3)), _iv(fig12_hi, Fraction(4235, 10000), False, False),
              nonneg, "Phi8(M) >= 0 on [0.423458, 0.4235], covering the true M3 = 0.42345801...",
              "0.423458 is M3 rounded down; this piece closes the gap"),
    ]
    ids = [c.id for c in out]
    assert len(ids) == len(set(ids))
    return out


def _ledger() -> dict:
    return {c.id: c for c in builtin_claims()}


def _run_root(claim: Claim) -> tuple:
    target: RootTarget = claim.expected
    if claim.id == "m3":
        br = find_m3(width=target.width)
        ok = (
            br.g_lo * br.g_hi < 0
            and br.sign_changes == 1
            and br.width <= target.width
            and abs(br.mid - target.value) <= target.tol
            and 1 / 3 <= br.lo and br.hi <= hankel.THRESHOLD
        )
        note = f"bracket [{br.lo:.12g}, {br.hi:.12g}]"
        return (Verdict.CERTIFIED if ok else Verdict.REFUTED), None, br, note
    p: RationalPoly = claim.payload
    n = count_real_roots(p, claim.interval)
    lo, hi = isolate_real_roots(p, claim.interval, width=Fraction(1, 10**9))[0] if n else (None, None)
    if n != 1:
        return Verdict.REFUTED, None, None, f"expected one root, found {n}"
    br = RootBracket(float(lo), float(hi), float(p(lo)), float(p(hi)))
    ok = float(hi - lo) <= target.width and abs(br.mid - target.value) <= target.tol
    note = f"exact bracket [{lo}, {hi}]"
    return (Verdict.CERTIFIED if ok else Verdict.REFUTED), None, br, note


def run_claim(claim: Claim) -> ClaimReport:
    t0 = time.perf_counter()
    cert, bracket = None, None
    if claim.kind is ClaimKind.POLY:
        cert = certify_sign(claim.payload, claim.interval, claim.expected, claim.id)
    elif claim.kind is ClaimKind.SQRT_EXPR:
        cert = certify_sqrt_sign(claim.payload, claim.interval, claim.expected, claim.id)
    elif claim.kind is ClaimKind.BOX:
        cert = certify_box_sign(claim.payload, claim.interval, claim.expected, claim.id)
    if cert is not None:
        verdict, note = cert.verdict, cert.note
    else:
        verdict, cert, bracket, note = _run_root(claim)
    if claim.note:
        note = f"{claim.note}; {note}" if note else claim.note
    return ClaimReport(claim.id, claim.kind, verdict, cert, bracket, time.perf_counter() - t0, claim.statement, note)


def run_claims(selection=None) -> list:
    """Run the selected ledger claims (all of them for None or "ALL"), in ledger order."""
    ledger = _ledger()
    if selection is None or selection == "ALL":
        chosen = list(ledger)
    else:
        selection = [selection] if isinstance(selection, str) else list(selection)
        unknown = [s for s in selection if s not in ledger]
        if unknown:
            raise KeyError(f"unknown claim id(s) {unknown}; known ids: {', '.join(ledger)}")
        wanted = set(selection)
        chosen = [k for k in ledger if k in wanted]
    return [run_claim(ledger[k]) for k in chosen]


def summarize(reports: list) -> dict:
    counts = {v.value: 0 for v in Verdict}
    for r in reports:
        counts[r.verdict.value] += 1
    return {"total": len(reports), **counts, "all_certified": counts[Verdict.CERTIFIED.value] == len(reports)}


# ------------------------------------------------------------------- M3


def _poly_mp(p: RationalPoly, x):
    acc = mpmath.mpf(0)
    for c in reversed(p.coeffs):
        acc = acc * x + mpmath.mpf(c.numerator) / c.denominator
    return acc


def xi_at_t4_closed(m):
    """(xi1(t4), xi2(t4)) from their closed forms, in mpmath precision."""
    m = mpmath.mpf(m)
    s = mpmath.sqrt(3 * _poly_mp(DELTA2, m))
    x1 = 4 * (_poly_mp(A1, m) - _poly_mp(B1, m) * s) / (3 * m**3 * (1 + 39 * m) ** 2)
    x2 = 3 * m**2 * (_poly_mp(A2, m) + 7 * s) / (_poly_mp(AMC, m) * (_poly_mp(B2, m) + s))
    return x1, x2


def m3_function(m):
    x1, x2 = xi_at_t4_closed(m)
    if x2 < 0:
        raise DomainError(f"xi2(t4) is negative at M = {m}")
    return x1 * mpmath.sqrt(x2) - _poly_mp(AMC, mpmath.mpf(m))


def find_m3(width: float = 1e-8, scan: int = 1000) -> RootBracket:
    """Bisection for the crossing of xi1(t4) sqrt(xi2(t4)) with 39M^2 - 12M + 2."""
    with mpmath.workdps(40):
        lo, hi = mpmath.mpf(1) / 3 + mpmath.mpf("1e-6"), mpmath.mpf("0.7213")
        g_lo, g_hi = m3_function(lo), m3_function(hi)
        if g_lo * g_hi >= 0:
            raise ArithmeticError("no sign change of G on [1/3, 1/log 4]")
        grid = [lo + (hi - lo) * k / scan for k in range(scan + 1)]
        vals = [m3_function(x) for x in grid]
        changes = sum(1 for u, v in zip(vals, vals[1:]) if u * v < 0)
        while hi - lo > width / 4:
            mid = (lo + hi) / 2
            g = m3_function(mid)
            if g == 0:
                lo = hi = mid
                g_lo = g_hi = g
                break
            if (g < 0) == (g_lo < 0):
                lo, g_lo = mid, g
            else:
                hi, g_hi = mid, g
        return RootBracket(float(lo), float(hi), float(g_lo), float(g_hi), changes)


# ------------------------------------------------------------- Case 4 table


@dataclass(frozen=True)
class Case4Table:
    m: float
    values: dict  # name -> value, or None when the bound does not apply at this M
    maximum: float
    argmax: str
    comparisons: tuple  # (name, name, "<" | "=" | ">")

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "values": dict(self.values),
            "maximum": self.maximum,
            "argmax": self.argmax,
            "comparisons": [list(c) for c in self.comparisons],
        }


def case4_compare(m: float) -> Case4Table:
    """All candidate bounds produced by the case analysis at a given M."""
    if not 0 < m <= hankel.M_MAX:
        raise DomainError(f"M must lie in (0, 1/log 4], got {m}")
    first, second = hankel.first_branch(m), hankel.second_branch(m)
    amc = float(AMC(m))
    vals = {"ee2": first, "ee1": second, "Q2": None, "M6": None, "MI6": None, "Q3": None}
    if m < 1 / 3:
        vals["Q2"] = first * math.sqrt(3 * (16 * m * m - 6 * m + 1) / amc)
        s = math.sqrt(3 * float(DELTA1(m)))
        vals["M6"] = m * m * (float(PSI_M6_1(m)) + float(PSI_M6_2(m)) * s) / (6 * float(DEN1(m)) ** 2)
    else:
        vals["MI6"] = first if m <= 0.5 else (64 * m * m - 12 * m + 3) / 1872
        if m > 1 / 3:
            with mpmath.workdps(30):
                x1, x2 = xi_at_t4_closed(m)
                at_t4 = float(x1 * mpmath.sqrt(x2))
        else:
            at_t4 = 4.0  # t4 = 0 at M = 1/3, where xi1 = 4 and xi2 = 1
        vals["Q3"] = m * m / 144 * max(at_t4, amc)
    present = [(k, v) for k, v in vals.items() if v is not None]
    maximum = max(v for _, v in present)
    argmax = next(k for k, v in present if v >= maximum - 1e-15)  # first listed wins ties
    comps = []
    for i, (a, va) in enumerate(present):
        for b, vb in present[i + 1 :]:
            rel = "=" if abs(va - vb) <= 1e-12 else ("<" if va < vb else ">")
            comps.append((a, b, rel))
    return Case4Table(m, vals, maximum, argmax, tuple(comps))
