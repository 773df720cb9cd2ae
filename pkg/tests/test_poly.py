from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ymss.poly import (DivisionNotExact, PolyQ, RootInterval, divide_exact, isolate_all,
                       isolate_root, poly_arith, poly_gcd, primitive_normalize, sign_pattern,
                       squarefree_part, sturm_count, sturm_sequence)

small = st.fractions(min_value=-9, max_value=9, max_denominator=6)
polys = st.lists(small, min_size=1, max_size=7).map(PolyQ)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


def test_product_example():
    p = PolyQ([-1, 21]) * PolyQ([1, -114, 225])
    assert p == PolyQ([-1, 135, -2619, 4725])
    assert poly_arith(PolyQ([-1, 21]), PolyQ([1, -114, 225]), "mul") == p


def test_pretty_and_json_roundtrip():
    p = PolyQ([-1, 135, -2619, 4725])
    assert p.pretty() == "4725z^3 - 2619z^2 + 135z - 1"
    assert PolyQ.from_json(p.to_json()) == p
    assert PolyQ([F(1, 2)]).to_json() == ["1/2"]


def test_trailing_zeros_trimmed():
    assert PolyQ([1, 2, 0, 0]).degree() == 1
    assert PolyQ().is_zero() and PolyQ([0, 0]).is_zero()


def test_divide_exact():
    p = PolyQ([-1, 135, -2619, 4725])
    assert divide_exact(p, PolyQ([-1, 21])) == PolyQ([1, -114, 225])
    with pytest.raises(DivisionNotExact):
        divide_exact(PolyQ([1, 1]), PolyQ([2, 1]))
    with pytest.raises(ZeroDivisionError):
        divmod(p, PolyQ())


@pytest.mark.parametrize("coeffs,expected", [
    ([F(1, 2), F(-3, 4)], [-2, 3]),
    ([2, -4], [-1, 2]),
    ([-6, 0, -9], [2, 0, 3]),
    ([F(-1, 225), F(38, 75), -1], [1, -114, 225]),
])
def test_primitive_normalize_examples(coeffs, expected):
    assert primitive_normalize(PolyQ(coeffs)) == PolyQ(expected)


@given(nonzero_polys, small.filter(lambda x: x != 0))
def test_primitive_normalize_is_canonical(p, k):
    q = primitive_normalize(p)
    assert q == primitive_normalize(p * k)
    assert all(c.denominator == 1 for c in q.coeffs)
    assert q.lc() > 0


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - b == -(b - a)


@given(polys, nonzero_polys)
def test_divmod_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.degree() < b.degree()


@given(nonzero_polys, nonzero_polys)
def test_gcd_divides_both(a, b):
    g = poly_gcd(a, b)
    assert (a % g).is_zero() and (b % g).is_zero()


@given(small, small)
def test_evaluation_matches_float(p0, x):
    p = PolyQ([p0, 3, -1, F(1, 7)])
    assert p(x) == p0 + 3 * x - x ** 2 + x ** 3 / 7
    assert abs(p.eval_float(float(x)) - float(p(x))) < 1e-9


@pytest.mark.parametrize("coeffs,lo,hi,n", [
    ([-1, 0, 1], -1, 1, 0),   # roots sit on the endpoints
    ([-1, 0, 1], -2, 2, 2),
    ([0, 0, 1], -1, 1, 1),    # double root counted once
    ([1, 0, 1], -5, 5, 0),
    ([-1, 135, -2619, 4725], 0, 1, 3),
])
def test_sturm_count_examples(coeffs, lo, hi, n):
    assert sturm_count(PolyQ(coeffs), lo, hi) == n


def test_sturm_sequence_ends_in_constant():
    seq = sturm_sequence(PolyQ([-1, 135, -2619, 4725]))
    assert seq[-1].degree() == 0
    assert len(seq) == 4


roots_st = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=1,
                    max_size=6)


@given(roots_st, st.fractions(min_value=-4, max_value=0, max_denominator=3),
       st.fractions(min_value=0, max_value=4, max_denominator=3), small.filter(lambda x: x != 0))
def test_sturm_count_against_known_roots(roots, lo, hi, scale):
    # oracle: the distinct roots are known by construction
    if lo == hi:
        return
    p = PolyQ.from_roots(roots) * scale
    distinct = {r for r in roots if lo < r < hi}
    assert sturm_count(p, lo, hi) == len(distinct)


@given(roots_st)
def test_squarefree_part_has_simple_roots(roots):
    p = PolyQ.from_roots(roots)
    assert squarefree_part(p).degree() == len(set(roots))


def test_isolate_root_sqrt2():
    p = PolyQ([-2, 0, 1])
    iv = isolate_root(p, RootInterval(F(1), F(2)), F(1, 10 ** 30))
    assert iv.width <= F(1, 10 ** 30)
    assert p(iv.lo) * p(iv.hi) < 0
    assert iv.lo ** 2 < 2 < iv.hi ** 2


def test_isolate_root_rejects_bad_bracket():
    with pytest.raises(ValueError):
        isolate_root(PolyQ([-2, 0, 1]), RootInterval(F(-2), F(2)), F(1, 100))


def test_isolate_root_exact_rational_root():
    iv = isolate_root(PolyQ([-1, 21]), RootInterval(F(0), F(1)), F(1, 10 ** 30))
    assert iv.contains(F(1, 21))
    assert iv.width <= F(1, 10 ** 30)


def test_isolate_all_separates_roots():
    p = PolyQ([-1, 135, -2619, 4725])
    ivs = isolate_all(p, 0, 1, F(1, 10 ** 12))
    assert len(ivs) == 3
    assert all(a.hi <= b.lo for a, b in zip(ivs, ivs[1:]))
    assert any(iv.contains(F(1, 21)) for iv in ivs)


def test_sign_pattern_leading_first():
    assert sign_pattern(PolyQ([-1, -2, 3])) == ["+", "-", "-"]
    assert sign_pattern(PolyQ([-3, 0, 847])) == ["+", "0", "-"]


def test_parity_helpers():
    p = PolyQ([0, 1, 0, -1])
    assert p.is_odd() and not p.is_even()
    assert PolyQ([1, 0, -1]).even_to_z() == PolyQ([1, -1])
