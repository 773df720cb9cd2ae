from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ymss.exact import QuadExt, RadicandMismatch, fmt_rat, parse_rat, quad_arith, rat, trace_norm

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=40)
D = 189


def quads(radicand=D):
    return st.builds(lambda p, q: QuadExt(p, q, radicand), fracs, fracs)


def test_rat_normalizes():
    assert rat(6, 4) == F(3, 2)
    assert rat(-1, -2) == F(1, 2)
    assert fmt_rat(rat(6, -4)) == "-3/2"
    assert fmt_rat(5) == "5/1"


def test_rat_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        rat(1, 0)


@pytest.mark.parametrize("text,value", [("3/4", F(3, 4)), ("-7/21", F(-1, 3)), ("5", F(5))])
def test_parse_rat(text, value):
    assert parse_rat(text) == value
    assert parse_rat(fmt_rat(value)) == value


def test_conjugate_product_is_norm():
    s = QuadExt.sqrt(D)
    assert (2 + s) * (2 - s) == -185
    assert s * s == 189
    assert (2 + s).norm() == -185


def test_trace_norm_example():
    assert trace_norm(QuadExt(3, 2, 5)) == (6, -11)
    assert trace_norm(F(1, 3)) == (F(2, 3), F(1, 9))


def test_zplus_d11_symmetric_functions():
    # z+ and z- for d = 11 are 19/75 +- (4/225) sqrt(189)
    z = QuadExt(F(19, 75), F(4, 225), D)
    assert trace_norm(z) == (F(38, 75), F(1, 225))


def test_perfect_square_collapses():
    q = QuadExt(1, 2, 9)
    assert q.is_rational() and q == 7
    assert QuadExt(3, 0, 5) == QuadExt(3, 0, 7)
    assert hash(QuadExt(3, 0, 5)) == hash(F(3))


def test_radicand_mismatch():
    with pytest.raises(RadicandMismatch):
        QuadExt(1, 1, 5) + QuadExt(1, 1, 7)
    with pytest.raises(ValueError):
        QuadExt(1, 1, -3)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QuadExt(1, 1, 5) / QuadExt(0, 0, 5)


def test_quad_arith_dispatch():
    a, b = QuadExt(1, 2, 5), QuadExt(F(1, 2), -1, 5)
    assert quad_arith(a, b, "add") == a + b
    assert quad_arith(a, b, "div") * b == a
    with pytest.raises(ValueError):
        quad_arith(a, b, "pow")


def test_str_format():
    assert str(QuadExt(F(19, 75), F(4, 225), D)) == "19/75 + 4/225*sqrt(189)"


@settings(max_examples=300)
@given(quads(), quads(), quads())
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@settings(max_examples=300)
@given(quads(), quads())
def test_conjugation_is_a_homomorphism(a, b):
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()
    assert (a * b).norm() == a.norm() * b.norm()
    t, n = trace_norm(a)
    assert a * a - t * a + n == 0  # minimal polynomial


@given(quads(), quads())
def test_division_inverts_multiplication(a, b):
    if b == 0:
        return
    assert (a * b) / b == a
    assert a / b * b == a


@given(quads(), quads())
def test_sign_and_order_match_high_precision(a, b):
    with mpmath.workprec(300):
        diff = a.to_mpf(300) - b.to_mpf(300)
        expect = (diff > 0) - (diff < 0)
    assert (a - b).sign() == expect
    assert (a < b) == (expect < 0)
    assert (a > b) == (expect > 0)


@given(quads(), st.integers(min_value=0, max_value=6))
def test_integer_powers(a, k):
    acc = QuadExt(1, 0, D)
    for _ in range(k):
        acc = acc * a
    assert a ** k == acc
