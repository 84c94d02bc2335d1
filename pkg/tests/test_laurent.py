from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cycliccovers.laurent import (
    ONE,
    ZERO,
    BothZero,
    FieldMismatch,
    LaurentPolyZ,
    ZeroPolynomial,
    canonical_rep,
    cyclotomic_poly,
    euler_phi,
    gcd_over_field,
    is_cyclotomic_type,
    is_unit,
    laurent_from_json,
    laurent_gcd_z,
    laurent_over_field,
    laurent_to_json,
    mahler_measure,
    reduce_mod_p,
    strip_unit_roots_at_one,
)
from cycliccovers.fields import make_splitting_field


def poly(*coeffs: int, min_exp: int = 0) -> LaurentPolyZ:
    return LaurentPolyZ(tuple(coeffs), min_exp)


small_polys = st.builds(
    LaurentPolyZ,
    st.lists(st.integers(-9, 9), min_size=0, max_size=6).map(tuple),
    st.integers(-3, 3),
)


# -- construction and normalization ------------------------------------------


def test_zero_normalizes_to_empty():
    assert poly(0, 0, 0).is_zero()
    assert poly(0, 0, 0) == ZERO
    assert poly(0, 0, 0, min_exp=5) == ZERO


def test_leading_and_trailing_zeros_trimmed():
    p = poly(0, 1, 2, 0, min_exp=-1)
    assert p.coeffs == (1, 2)
    assert p.min_exp == 0
    assert p.degree_span == 1
    assert p.max_exp == 1


def test_constructors():
    assert LaurentPolyZ.const(7) == poly(7)
    assert LaurentPolyZ.one() == ONE
    assert LaurentPolyZ.t_power(-2) == poly(1, min_exp=-2)
    assert LaurentPolyZ.zero().is_zero()


def test_evaluation():
    p = poly(1, -3, 2, min_exp=-1)
    assert p.evaluate_at_one() == 0
    assert poly(2, 2).evaluate_at_one() == 4
    # t^-1 at 2 contributes 1/2
    assert poly(1, min_exp=-1).evaluate_int(2) == 0.5


# -- ring axioms (randomized) -------------------------------------------------


@settings(deadline=None, max_examples=60)
@given(small_polys, small_polys, small_polys)
def test_distributivity(f, g, h):
    assert f * (g + h) == f * g + f * h


@settings(deadline=None, max_examples=60)
@given(small_polys, small_polys)
def test_commutativity_and_negation(f, g):
    assert f * g == g * f
    assert f + g == g + f
    assert (f - g) + g == f


@settings(deadline=None, max_examples=60)
@given(small_polys)
def test_units(f):
    assert f * ONE == f
    assert f + ZERO == f
    assert f * ZERO == ZERO


def test_exact_div_roundtrip():
    f = poly(1, -1) * poly(1, 0, 0, -1) * poly(3)
    q = f.exact_div(poly(1, -1))
    assert q * poly(1, -1) == f
    assert poly(1, -1).divides(f)
    assert not poly(1, 1, 1).divides(poly(1, 1))


def test_exact_div_rejects_nondivisor():
    with pytest.raises(ValueError):
        poly(1, 1).exact_div(poly(1, 1, 1))


# -- canonical representative -------------------------------------------------


def test_canonical_rep_shape():
    p = poly(-2, 0, 2, min_exp=-5)
    c = canonical_rep(p)
    assert c.min_exp == 0
    assert c.coeffs[0] != 0
    assert c.coeffs[-1] > 0
    assert c == poly(2, 0, -2) * poly(-1) or c == poly(-2, 0, 2)


@settings(deadline=None, max_examples=60)
@given(small_polys, st.integers(-4, 4), st.sampled_from([1, -1]))
def test_canonical_rep_unit_invariant(f, k, sign):
    if f.is_zero():
        return
    shifted = f * LaurentPolyZ.t_power(k) * LaurentPolyZ.const(sign)
    assert canonical_rep(shifted) == canonical_rep(f)


def test_canonical_rep_idempotent():
    p = poly(4, 0, -4, min_exp=-2)
    assert canonical_rep(canonical_rep(p)) == canonical_rep(p)


def test_canonical_rep_rejects_zero():
    with pytest.raises(ZeroPolynomial):
        canonical_rep(ZERO)


def test_is_unit():
    assert is_unit(poly(1))
    assert is_unit(poly(-1, min_exp=3))
    assert not is_unit(poly(2))
    assert not is_unit(poly(1, 1))


# -- gcd over Z ---------------------------------------------------------------


def test_gcd_of_cyclotomic_products():
    f = poly(-1, 1) * poly(-1, 0, 0, 1)     # (t-1)(t^3-1)
    g = poly(-1, 1) * poly(-1, 0, 1)        # (t-1)(t^2-1)
    d = laurent_gcd_z(f, g)
    # common part (t-1)^2
    assert d == canonical_rep(poly(-1, 1) * poly(-1, 1))


def test_gcd_with_content():
    assert laurent_gcd_z(poly(4, 4), poly(6)) == poly(2)


def test_gcd_one_zero_argument():
    f = poly(3, 0, -3)
    assert laurent_gcd_z(f, ZERO) == canonical_rep(f)
    with pytest.raises(BothZero):
        laurent_gcd_z(ZERO, ZERO)


@settings(deadline=None, max_examples=40)
@given(small_polys, small_polys)
def test_gcd_divides_both(f, g):
    if f.is_zero() and g.is_zero():
        return
    d = laurent_gcd_z(f, g)
    for h in (f, g):
        if not h.is_zero():
            assert d.divides(h)


# -- cyclotomic machinery -----------------------------------------------------


def test_euler_phi_small_values():
    assert [euler_phi(k) for k in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


def test_cyclotomic_poly_values():
    assert cyclotomic_poly(1) == poly(-1, 1)
    assert cyclotomic_poly(2) == poly(1, 1)
    assert cyclotomic_poly(4) == poly(1, 0, 1)
    assert cyclotomic_poly(6) == poly(1, -1, 1)
    # product over divisors of 6 recovers t^6 - 1
    prod = ONE
    for k in (1, 2, 3, 6):
        prod = prod * cyclotomic_poly(k)
    assert prod == poly(-1, 0, 0, 0, 0, 0, 1)


def test_is_cyclotomic_type():
    assert is_cyclotomic_type(poly(-1, 1) * poly(-1, 0, 0, 1))
    assert is_cyclotomic_type(poly(2, 2))                  # 2(t+1): unit roots only
    assert is_cyclotomic_type(poly(5))                     # constants qualify
    assert is_cyclotomic_type(poly(1, 1))                  # degree 1, k = 2 case
    assert not is_cyclotomic_type(poly(1, -3, 1))
    assert not is_cyclotomic_type(poly(-2, 1))             # root 2


# -- Mahler measure -----------------------------------------------------------


def test_mahler_cyclotomic_exact():
    m = mahler_measure(poly(2, 2))
    assert m.exp_exact == 2
    assert m.log_value == math.log(2)
    m1 = mahler_measure(poly(-1, 1) * poly(-1, 0, 0, 0, 0, 0, 1))
    assert m1.exp_exact == 1
    assert m1.log_value == 0.0


def test_mahler_lehmer_style_quadratic():
    # roots (3 +- sqrt(5))/2, one outside the unit circle
    m = mahler_measure(poly(1, -3, 1))
    assert m.exp_exact is None
    assert abs(m.log_value - math.log((3 + math.sqrt(5)) / 2)) < 1e-9


def test_mahler_multiplicative_on_a_product():
    f = poly(1, -3, 1)
    g = poly(2, 2)
    mfg = mahler_measure(f * g)
    assert abs(mfg.log_value - (mahler_measure(f).log_value + mahler_measure(g).log_value)) < 1e-8


def test_mahler_shift_invariant():
    f = poly(1, -3, 1)
    assert abs(mahler_measure(f * LaurentPolyZ.t_power(-3)).log_value
               - mahler_measure(f).log_value) < 1e-12


def test_mahler_handles_repeated_factors():
    f = poly(1, -3, 1) * poly(1, -3, 1)
    assert abs(mahler_measure(f).log_value - 2 * math.log((3 + math.sqrt(5)) / 2)) < 1e-8


def test_mahler_rejects_zero():
    with pytest.raises(ZeroPolynomial):
        mahler_measure(ZERO)


# -- order of vanishing at t = 1 ----------------------------------------------


def test_strip_unit_roots_at_one():
    f = poly(-1, 1) * poly(-1, 1) * poly(2, 1)   # (t-1)^2 (t+2)
    stripped, mult = strip_unit_roots_at_one(f)
    assert mult == 2
    assert stripped.evaluate_at_one() == 3


def test_strip_no_root_at_one():
    stripped, mult = strip_unit_roots_at_one(poly(2, 2))
    assert mult == 0
    assert stripped.evaluate_at_one() == 4


# -- field reductions ----------------------------------------------------------


def test_reduce_mod_p_char2():
    k = make_splitting_field(2, 1)
    f2 = reduce_mod_p(poly(4, 6, -3), k)
    assert f2.coeffs == (k.one(),)                # only the odd coefficient survives
    assert f2.min_exp == 2


def test_reduce_mod_p_rejects_char0():
    q = make_splitting_field(0, 1)
    with pytest.raises(ValueError):
        reduce_mod_p(poly(1, 1), q)


def test_gcd_over_field_char2():
    k = make_splitting_field(2, 1)
    f = laurent_over_field(poly(1, 0, 1), k)      # (t+1)^2 mod 2
    g = laurent_over_field(poly(1, 1), k)
    assert gcd_over_field(f, g).degree_span == 1


def test_gcd_over_field_rational():
    q = make_splitting_field(0, 1)
    f = laurent_over_field(poly(-1, 0, 0, 1), q)
    g = laurent_over_field(poly(-1, 0, 1), q)
    d = gcd_over_field(f, g)
    assert d.degree_span == 1                     # common factor t - 1
    assert d.coeffs[-1] == q.one()                # monic


def test_gcd_over_field_rejects_mixed_fields():
    k2 = make_splitting_field(2, 1)
    k3 = make_splitting_field(3, 1)
    with pytest.raises(FieldMismatch):
        gcd_over_field(laurent_over_field(poly(1, 1), k2),
                       laurent_over_field(poly(1, 1), k3))


# -- serialization --------------------------------------------------------------


@settings(deadline=None, max_examples=40)
@given(small_polys)
def test_json_roundtrip(f):
    assert laurent_from_json(laurent_to_json(f)) == f


def test_json_shape():
    blob = laurent_to_json(poly(1, -1, min_exp=-2))
    assert blob == {"coeffs": [1, -1], "min_exp": -2}


# -- randomized consistency against direct evaluation ---------------------------


def test_arithmetic_matches_integer_evaluation():
    rng = random.Random(11)
    for _ in range(50):
        f = LaurentPolyZ(tuple(rng.randint(-5, 5) for _ in range(4)), rng.randint(-2, 2))
        g = LaurentPolyZ(tuple(rng.randint(-5, 5) for _ in range(3)), rng.randint(-2, 2))
        for x in (1, -1, 2):
            assert (f * g).evaluate_int(x) == f.evaluate_int(x) * g.evaluate_int(x)
            assert (f + g).evaluate_int(x) == f.evaluate_int(x) + g.evaluate_int(x)
