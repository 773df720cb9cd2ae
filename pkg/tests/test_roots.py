from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import sympy_Pm
from ymss.poly import PolyQ, RootInterval, divide_exact
from ymss.roots import (Ordering, analyze_case, appendix_checks, closed_form_roots,
                        compare_with_roots, count_N, ordering, split_Sm)
from ymss.series import case_Pm

ODD_D = list(range(11, 37, 2))


@pytest.mark.parametrize("d,tr,nm", [
    (11, F(38, 75), F(1, 225)),
    (13, F(77, 121), F(4, 121)),
    (15, F(6266, 8281), F(625, 8281)),
])
def test_quad_factor(d, tr, nm):
    assert closed_form_roots(d).quad_factor == PolyQ([nm, -tr, 1])


def test_closed_form_d11_values():
    r = closed_form_roots(11)
    assert str(r.alpha_plus) == "2/1 + 2/27*sqrt(189)"
    assert str(r.beta_minus) == "14/3 + -1/3*sqrt(189)"
    assert r.z_plus == r.c_plus ** 2 and r.z_minus == r.c_minus ** 2
    assert 0 < r.z_minus < r.z_plus < 1


def test_closed_form_perfect_square_radicand():
    # d = 29: D = 3*27*25 = 2025 = 45^2, both branches are rational
    r = closed_form_roots(29)
    assert r.z_plus.is_rational() and r.z_minus.is_rational()
    assert r.z_plus != r.z_minus
    assert r.quad_factor(r.z_plus.rational) == 0 and r.quad_factor(r.z_minus.rational) == 0


def test_closed_form_rejects_small_d():
    with pytest.raises(ValueError):
        closed_form_roots(9)


@pytest.mark.parametrize("d", ODD_D)
def test_quad_factor_divides_Pm(d):
    Pm, _ = case_Pm(d)
    Sm = split_Sm(Pm, closed_form_roots(d))
    assert Sm.degree() == (d - 5) // 2 - 2


@pytest.mark.parametrize("d", [11, 13, 19])
def test_closed_form_values_are_roots_numerically(d):
    r = closed_form_roots(d)
    Pm, _ = case_Pm(d)
    with mpmath.workprec(256):
        for z in (r.z_plus, r.z_minus):
            val = mpmath.polyval([mpmath.mpf(c.numerator) / c.denominator for c in Pm.coeffs[::-1]],
                                 z.to_mpf(256))
            assert abs(val) < mpmath.mpf(10) ** -40 * max(abs(float(c)) for c in Pm.coeffs)


def test_S3_S4_S5():
    assert split_Sm(case_Pm(11)[0], closed_form_roots(11)) == PolyQ([-1, 21])
    assert split_Sm(case_Pm(13)[0], closed_form_roots(13)) == PolyQ([-3, -44, 847])
    assert split_Sm(case_Pm(15)[0], closed_form_roots(15)) == PolyQ([-187, -1989, -11661, 265837])


@pytest.mark.parametrize("m", range(3, 10))
def test_appendix_checks_pass_through_m9(m):
    d = 2 * m + 5
    chk = appendix_checks(split_Sm(case_Pm(d)[0], closed_form_roots(d)))
    assert chk.ok
    assert chk.zstar.width <= F(1, 10 ** 30)


@pytest.mark.parametrize("m", range(10, 16))
def test_sign_pattern_breaks_from_m10(m):
    # the subleading coefficient of S_m turns positive at m = 10; the
    # endpoint signs and the uniqueness of the zero in (0, 1) survive
    d = 2 * m + 5
    Sm = split_Sm(case_Pm(d)[0], closed_form_roots(d))
    chk = appendix_checks(Sm)
    assert not chk.sign_ok
    assert Sm[Sm.degree() - 1] > 0
    assert chk.s0_negative and chk.s1_positive and chk.unique_zero


def test_sign_pattern_m10_against_sympy():
    Pm = PolyQ(sympy_Pm(10))
    Sm = divide_exact(Pm, closed_form_roots(25).quad_factor)
    lead, sub = Sm[Sm.degree()], Sm[Sm.degree() - 1]
    assert lead > 0 and sub > 0


@pytest.mark.parametrize("d,n", [(7, 1), (9, 2)] + [(d, 3) for d in ODD_D])
def test_count_N(d, n):
    assert count_N(d) == n


@pytest.mark.parametrize("m", range(1, 7))
def test_count_N_against_numeric_roots(m):
    # oracle: sympy-derived P_m, real roots by mpmath polyroots
    coeffs = sympy_Pm(m)
    with mpmath.workprec(200):
        roots = mpmath.polyroots(coeffs[::-1], maxsteps=200, extraprec=400)
    inside = [r for r in roots if abs(mpmath.im(r)) < 1e-30 and 0 < mpmath.re(r) < 1]
    assert count_N(2 * m + 5) == len(inside)


@pytest.mark.parametrize("d", ODD_D)
def test_ordering(d):
    rep = analyze_case(d)
    expected = Ordering.MINUS_STAR_PLUS if d <= 17 else Ordering.STAR_MINUS_PLUS
    assert rep.ordering is expected


@pytest.mark.parametrize("d", [11, 15, 17, 19, 25])
def test_ordering_against_high_precision_floats(d):
    r = closed_form_roots(d)
    Sm = split_Sm(case_Pm(d)[0], r)
    with mpmath.workprec(300):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in Sm.coeffs[::-1]]
        roots = mpmath.polyroots(coeffs, maxsteps=300, extraprec=600)
        (zs,) = [mpmath.re(z) for z in roots if abs(mpmath.im(z)) < 1e-40 and 0 < mpmath.re(z) < 1]
        zp, zm = r.z_plus.to_mpf(300), r.z_minus.to_mpf(300)
        expect = Ordering.MINUS_STAR_PLUS if zm < zs < zp else Ordering.STAR_MINUS_PLUS
    assert analyze_case(d).ordering is expect


@given(st.fractions(min_value=0, max_value=1, max_denominator=10 ** 6))
def test_compare_with_roots_matches_floats(q):
    r = closed_form_roots(19)
    with mpmath.workprec(200):
        zq = mpmath.mpf(q.numerator) / q.denominator
        zm, zp = r.z_minus.to_mpf(200), r.z_plus.to_mpf(200)
        expect = -1 if zq < zm else (1 if zq > zp else 0)
    assert compare_with_roots(q, r) == expect


def test_ordering_refines_a_wide_bracket():
    d = 19
    r = closed_form_roots(d)
    Sm = split_Sm(case_Pm(d)[0], r)
    assert ordering(d, RootInterval(F(0), F(1)), r, Sm) is Ordering.STAR_MINUS_PLUS


def test_case_report_flags_and_json():
    rep = analyze_case(13)
    assert rep.ok
    js = rep.to_json()
    assert js["N"] == 3
    assert js["ordering"] == "MINUS_STAR_PLUS"
    assert js["Sm_text"] == "847z^2 - 44z - 3"
    assert all(rep.flags().values())


def test_case_report_d25_fails_only_sign():
    rep = analyze_case(25)
    bad = [k for k, v in rep.flags().items() if not v]
    assert bad == ["sign_ok"]
