import random
from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from harmhankel.errors import DegenerateInputError, RadicandError
from harmhankel.polycert import (
    DEFAULT_FLOOR,
    BivariatePoly,
    BoxCell,
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
    sign_variations,
    sturm_chain,
)

L = F(7214, 10000)
THIRD = F(1, 3)
PSI = RationalPoly([8, -72, 297, -576, 351])


# ---------------------------------------------------------------- RationalPoly


def test_poly_trims_and_degree():
    p = RationalPoly([1, 2, 0, 0])
    assert p.degree == 1
    assert RationalPoly([]).degree == -1
    assert RationalPoly([0, 0]).is_zero


def test_poly_arithmetic():
    x = RationalPoly.x()
    p = (x - 1) * (x + 1)
    assert p == RationalPoly([-1, 0, 1])
    q, r = divmod(x**3 + 1, x + 1)
    assert r.is_zero and q == RationalPoly([1, -1, 1])
    assert p(F(1, 2)) == F(-3, 4)


def test_poly_gcd_squarefree():
    x = RationalPoly.x()
    p = (x - 1) ** 3 * (x + 2)
    assert p.squarefree().monic() == ((x - 1) * (x + 2)).monic()


def test_poly_json_roundtrip():
    p = RationalPoly([F(1, 3), -2, F(5, 7)])
    assert p.to_json() == ["1/3", "-2/1", "5/7"]
    assert RationalPoly.from_json(p.to_json()) == p


def test_interval_invariants():
    with pytest.raises(ValueError):
        RationalInterval(F(1), F(0), False, False)
    with pytest.raises(ValueError):
        RationalInterval(F(1), F(1), True, False)
    iv = RationalInterval.left_open(0, 1)
    assert not iv.contains(0) and iv.contains(1)
    assert RationalInterval.from_json(iv.to_json()) == iv


# ------------------------------------------------------------------ sturm


def test_sturm_chain_x2_minus_1():
    chain = sturm_chain(RationalPoly([-1, 0, 1]))
    assert chain == [RationalPoly([-1, 0, 1]), RationalPoly([0, 2]), RationalPoly([1])]
    assert sign_variations(chain, -2) - sign_variations(chain, 2) == 2


def test_sturm_chain_constant():
    assert sturm_chain(RationalPoly([5])) == [RationalPoly([5])]


def test_sturm_chain_threshold_quadratic():
    chain = sturm_chain(RationalPoly([-2, -12, 39]))
    assert sign_variations(chain, 0) - sign_variations(chain, 1) == 1


def test_sturm_chain_zero_raises():
    with pytest.raises(DegenerateInputError, match="degenerate input"):
        sturm_chain(RationalPoly([]))
    with pytest.raises(DegenerateInputError):
        count_real_roots(RationalPoly([0]), RationalInterval.open(0, 1))


# ------------------------------------------------------------- root counting


def test_count_examples():
    assert count_real_roots(RationalPoly([2, -3, 1]), RationalInterval.open(0, 1)) == 0
    assert count_real_roots(RationalPoly([-2, -12, 39]), RationalInterval.open(0, 1)) == 1
    assert count_real_roots(PSI, RationalInterval.open(THIRD, L)) == 0


def test_count_respects_endpoints():
    p = RationalPoly.from_roots([0, 1, 2])
    assert count_real_roots(p, RationalInterval.open(0, 2)) == 1
    assert count_real_roots(p, RationalInterval.closed(0, 2)) == 3
    assert count_real_roots(p, RationalInterval.left_open(0, 2)) == 2
    assert count_real_roots(p, RationalInterval.right_open(0, 2)) == 2


def test_count_multiple_roots_counted_once():
    p = RationalPoly.from_roots([F(1, 2), F(1, 2), F(1, 2), 3])
    assert count_real_roots(p, RationalInterval.closed(0, 5)) == 2


def test_count_against_sympy_on_proof_polynomials():
    x = sp.Symbol("x")
    cases = [
        (PSI, RationalInterval.closed(0, 1)),
        (RationalPoly([-2, -12, 39]), RationalInterval.closed(-1, 1)),
        (RationalPoly([1024, -6144, -162816]), RationalInterval.closed(-1, 1)),
    ]
    for p, iv in cases:
        expr = sum(sp.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(p.coeffs))
        expected = len({r for r in sp.Poly(expr, x).real_roots() if iv.lo <= r <= iv.hi})
        assert count_real_roots(p, iv) == expected


def test_count_random_rational_roots():
    rng = random.Random(20240611)
    for _ in range(1000):
        roots = [F(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(rng.randint(1, 6))]
        p = RationalPoly.from_roots(roots, lead=rng.choice([1, -2, F(3, 5)]))
        lo = F(rng.randint(-50, 20), rng.randint(1, 5))
        hi = lo + F(rng.randint(0, 60), rng.randint(1, 5))
        lo_open, hi_open = rng.random() < 0.5, rng.random() < 0.5
        if lo == hi:
            lo_open = hi_open = False
        iv = RationalInterval(lo, hi, lo_open, hi_open)
        expected = len({r for r in roots if iv.contains(r)})
        assert count_real_roots(p, iv) == expected, (roots, iv)


def test_isolate_brackets_threshold():
    (lo, hi), = isolate_real_roots(RationalPoly([-2, -12, 39]), RationalInterval.open(0, 1), width=F(1, 10**9))
    assert hi - lo <= F(1, 10**9)
    assert lo * lo * 39 - 12 * lo - 2 < 0 < hi * hi * 39 - 12 * hi - 2


# ------------------------------------------------------------- certify_sign


def test_certify_sign_examples():
    assert certify_sign(RationalPoly([2, -3, 1]), RationalInterval.open(0, 1), Sign.POSITIVE).verdict is Verdict.CERTIFIED
    c = certify_sign(PSI, RationalInterval.left_open(THIRD, L), Sign.NEGATIVE, "fig3")
    assert c.verdict is Verdict.CERTIFIED and c.root_count == 0 and c.witness_sign == -1
    assert certify_sign(RationalPoly([1, -7, 26]), RationalInterval.left_open(0, THIRD), Sign.POSITIVE).verdict \
        is Verdict.CERTIFIED


def test_certify_sign_refutes_with_witness():
    p = RationalPoly([-1, 0, 1])  # x^2 - 1
    c = certify_sign(p, RationalInterval.open(0, 2), Sign.POSITIVE)
    assert c.verdict is Verdict.REFUTED
    assert p.sign_at(c.witness_point) <= 0
    assert c.witness_sign == p.sign_at(c.witness_point)


def test_certify_sign_even_touch_only_for_weak_claims():
    p = RationalPoly.from_roots([F(1, 2), F(1, 2)])  # (x - 1/2)^2
    iv = RationalInterval.open(0, 1)
    assert certify_sign(p, iv, Sign.NONNEGATIVE).verdict is Verdict.CERTIFIED
    assert certify_sign(p, iv, Sign.POSITIVE).verdict is Verdict.REFUTED
    odd = RationalPoly.from_roots([F(1, 2)] * 3)
    assert certify_sign(odd, iv, Sign.NONNEGATIVE).verdict is Verdict.REFUTED


def test_certify_sign_reports_endpoint_only_failure():
    # x on [0, 1]: positive inside, zero only at the closed left end
    c = certify_sign(RationalPoly([0, 1]), RationalInterval.closed(0, 1), Sign.POSITIVE)
    assert c.verdict is Verdict.REFUTED
    assert "endpoint" in c.note and "interior is certified" in c.note


def test_certify_sign_degenerate_interval():
    with pytest.raises(DegenerateInputError):
        certify_sign(RationalPoly([1]), RationalInterval.closed(1, 1), Sign.POSITIVE)


def test_certificate_json_fields():
    c = certify_sign(PSI, RationalInterval.left_open(THIRD, L), Sign.NEGATIVE, "fig3").to_json()
    assert set(c) >= {"claim_id", "interval", "expected", "root_count", "witness", "verdict"}
    assert c["interval"]["hi"] == "3607/5000"


small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


@settings(max_examples=150, deadline=None)
@given(
    coeffs=st.lists(st.integers(-20, 20), min_size=1, max_size=7),
    lo=small_rationals,
    width=st.fractions(min_value=F(1, 10), max_value=6, max_denominator=12),
    sign=st.sampled_from(list(Sign)),
)
def test_certify_sign_negation_symmetry(coeffs, lo, width, sign):
    p = RationalPoly(coeffs)
    if p.is_zero:
        return
    iv = RationalInterval.open(lo, lo + width)
    a = certify_sign(p, iv, sign)
    b = certify_sign(-p, iv, sign.flip())
    assert a.verdict == b.verdict


@settings(max_examples=100, deadline=None)
@given(
    coeffs=st.lists(st.integers(-20, 20), min_size=1, max_size=6),
    lo=small_rationals,
    width=st.fractions(min_value=F(1, 10), max_value=6, max_denominator=12),
    sign=st.sampled_from(list(Sign)),
)
def test_sqrt_with_zero_q_matches_certify_sign(coeffs, lo, width, sign):
    p = RationalPoly(coeffs)
    if p.is_zero:
        return
    iv = RationalInterval.closed(lo, lo + width)
    e = SqrtExpr(p, RationalPoly([]), RationalPoly([1]))
    assert certify_sqrt_sign(e, iv, sign).verdict == certify_sign(p, iv, sign).verdict


# --------------------------------------------------------- certify_sqrt_sign


def test_sqrt_trivial():
    e = SqrtExpr(RationalPoly([]), RationalPoly([1]), RationalPoly([0, 1]))
    assert certify_sqrt_sign(e, RationalInterval.open(0, 1), Sign.POSITIVE).verdict is Verdict.CERTIFIED


def test_sqrt_t1_negative():
    d = RationalPoly([19, -186, 899, -2172, 2496]).scale(3)
    e = SqrtExpr(RationalPoly([5, -27, 78]), RationalPoly([-1]), d)
    assert certify_sqrt_sign(e, RationalInterval.left_open(THIRD, L), Sign.POSITIVE).verdict is Verdict.CERTIFIED


def test_sqrt_fig12():
    from harmhankel.certsuite import DELTA2, PHI6, PHI7

    e = SqrtExpr(PHI6, PHI7, DELTA2.scale(3))
    c = certify_sqrt_sign(e, RationalInterval.closed(THIRD, F(423458, 10**6)), Sign.NONNEGATIVE)
    assert c.verdict is Verdict.CERTIFIED
    assert e.sign_at(THIRD) == 0  # Phi8(1/3) = 0 exactly


def test_sqrt_refutes():
    # 1 - sqrt(x) on (0, 4): negative beyond x = 1
    e = SqrtExpr(RationalPoly([1]), RationalPoly([-1]), RationalPoly([0, 1]))
    c = certify_sqrt_sign(e, RationalInterval.open(0, 4), Sign.POSITIVE)
    assert c.verdict is Verdict.REFUTED
    assert e.sign_at(c.witness_point) <= 0


def test_sqrt_radicand_error():
    e = SqrtExpr(RationalPoly([1]), RationalPoly([1]), RationalPoly([-1, 1]))  # sqrt(x - 1)
    with pytest.raises(RadicandError, match="radicand sign unverified"):
        certify_sqrt_sign(e, RationalInterval.open(0, 2), Sign.POSITIVE)


def test_sqrt_exact_sign_agrees_with_float():
    rng = random.Random(7)
    e = SqrtExpr(RationalPoly([1, -3, 1]), RationalPoly([2, 1]), RationalPoly([1, 0, 1]))
    for _ in range(200):
        x = F(rng.randint(-300, 300), 97)
        v = e(float(x))
        if abs(v) > 1e-9:
            assert e.sign_at(x) == (1 if v > 0 else -1)


# --------------------------------------------------------------- boxes


def test_box_trivial():
    f = BivariatePoly({(1, 0): 1, (0, 1): 1})
    box = (RationalInterval.closed(0, 1), RationalInterval.closed(0, 1))
    assert certify_box_sign(f, box, Sign.NONNEGATIVE).verdict is Verdict.CERTIFIED


def test_box_e4():
    f = BivariatePoly.from_y_polys([RationalPoly([12, -72, 192]), RationalPoly([-12, 72, -213]), RationalPoly([0, 0, 21])])
    box = (RationalInterval.closed(0, 1), RationalInterval.closed(F(1, 100), L))
    assert certify_box_sign(f, box, Sign.NONNEGATIVE, "e4").verdict is Verdict.CERTIFIED


def test_box_refuted_with_witness():
    f = BivariatePoly({(1, 0): -1})
    box = (RationalInterval.closed(F(1, 2), 1), RationalInterval.closed(0, 1))
    c = certify_box_sign(f, box, Sign.NONNEGATIVE)
    assert c.verdict is Verdict.REFUTED
    assert f(*c.witness_point) < 0


def test_box_inconclusive_is_distinct():
    # x*y - 2^-40 dips below zero only in a corner far smaller than the floor
    f = BivariatePoly({(1, 1): 1, (0, 0): -F(1, 2**40)})
    box = (RationalInterval.closed(0, 1), RationalInterval.closed(0, 1))
    c = certify_box_sign(f, box, Sign.POSITIVE, floor=F(1, 2**8))
    assert c.verdict in (Verdict.INCONCLUSIVE, Verdict.REFUTED)
    if c.verdict is Verdict.REFUTED:
        assert f(*c.witness_point) <= 0


def test_box_interval_soundness():
    rng = random.Random(3)
    f = BivariatePoly({(2, 1): 3, (1, 0): -2, (0, 2): F(1, 3), (3, 3): -1, (0, 0): F(1, 7)})
    for _ in range(30):
        x0 = F(rng.randint(-8, 8), 4)
        y0 = F(rng.randint(-8, 8), 4)
        w = F(1, 2 ** rng.randint(0, 6))
        cell = BoxCell(x0, x0 + w, y0, y0 + w)
        lo, hi = f.interval_eval(cell.xlo, cell.xhi, cell.ylo, cell.yhi)
        for pt in cell.points(100, rng):
            assert lo <= f(*pt) <= hi


def test_default_floor():
    assert DEFAULT_FLOOR == F(1, 2**20)
