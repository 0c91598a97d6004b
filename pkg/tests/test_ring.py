from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from levelmat.errors import ParseError, RingMismatchError
from levelmat.ring import (
    ANY_DEGREE,
    MINUS_INFINITY,
    QQ,
    Field,
    Polynomial,
    PolyRing,
    is_homogeneous,
    parse_poly,
    partial_derivative,
    poly_op,
)
from oracles import from_sympy, to_sympy

R = PolyRing("x y z")
R7 = PolyRing("x y z", Field(7))
R5 = PolyRing("x y z", Field(5))
RP = PolyRing("x y z", Field(32003))

exponents = st.tuples(*[st.integers(0, 4)] * 3)
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)


@st.composite
def polys(draw, ring=R, homogeneous_degree=None):
    if homogeneous_degree is not None:
        exps = st.sampled_from(ring.monomials(homogeneous_degree))
    else:
        exps = exponents
    coeffs = rationals if not ring.field.p else st.integers(0, ring.field.p - 1)
    terms = draw(st.dictionaries(exps, coeffs, max_size=6))
    return Polynomial(ring, {e: ring.field(c) for e, c in terms.items()})


def test_parse_reads_terms_and_degree():
    f = parse_poly(R, "x^2*y - 2*z^3")
    assert len(f) == 2
    assert f.degree() == 3


def test_zero_has_minus_infinity_degree():
    assert parse_poly(R, "0").degree() == MINUS_INFINITY
    assert not parse_poly(R, " 0 ")


def test_square_expands():
    x, y, _ = R.gens()
    assert R.parse("(x+y)^2") == x * x + x * y + y * x + y * y


def test_rational_literals_are_normalized():
    assert R.parse("2/4*x") == R.parse("1/2*x")
    assert R7.parse("1/3*x") == R7.parse("5*x")


@pytest.mark.parametrize(
    "text, message",
    [("x+*y", "unexpected"), ("w+1", "unknown variable"), ("x^-1", "exponent"), ("x/0", "non-unit"), ("2x", "")],
)
def test_parse_errors_report_position(text, message):
    with pytest.raises(ParseError) as info:
        R.parse(text)
    assert message in str(info.value)
    assert info.value.position is not None


def test_division_by_characteristic_is_rejected():
    with pytest.raises(ParseError, match="non-unit"):
        R7.parse("x/7")


def test_invalid_rings_are_rejected():
    with pytest.raises(ValueError):
        PolyRing("x x")
    with pytest.raises(ValueError):
        PolyRing("1x")
    with pytest.raises(ValueError):
        Field(8)


def test_poly_op_examples():
    x, y, _ = R.gens()
    assert poly_op(x + y, x - y, "mul") == x * x - y * y
    f = R.parse("x*y+3")
    assert poly_op(f, R.zero, "add") == f
    with pytest.raises(RingMismatchError):
        poly_op(f, R7.parse("x"), "add")
    with pytest.raises(ValueError):
        poly_op(f, f, "div")


def test_frobenius_in_characteristic_five():
    x, y, _ = R5.gens()
    power = R5.one
    for _ in range(5):
        power = power * (x + y)
    assert power == x**5 + y**5


@pytest.mark.parametrize(
    "text, expected", [("x^2*y + z^3", 3), ("x + y^2", None), ("0", ANY_DEGREE), ("7", 0)]
)
def test_is_homogeneous(text, expected):
    assert is_homogeneous(R.parse(text)) == expected


def test_partial_derivative_examples():
    d = 2
    assert partial_derivative(R.parse(f"x^{d + 1}+y^{d}*z"), "x") == R.parse("3*x^2")
    assert partial_derivative(R.parse("5"), "x") == R.zero
    d = 3
    p = R.parse(f"2*y^{d - 1}+2*z^{d - 1}-{d + 1}*x^{d - 1}")
    f_x = partial_derivative(R.parse(f"(x^2-y^2)*z^{d - 1}-(x^{d - 1}-y^{d - 1})*x^2-y^{d + 1}"), "x")
    assert f_x == R.parse("x") * p
    with pytest.raises(ValueError):
        partial_derivative(R.parse("x"), "w")


def test_derivative_is_exact_mod_p():
    assert partial_derivative(R7.parse("x^7 + x^8"), "x") == R7.parse("x^7")


@given(polys(), polys(), polys())
def test_ring_axioms_over_rationals(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == R.zero


@given(polys(RP), polys(RP), polys(RP))
def test_ring_axioms_mod_p(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)


@given(polys(), polys())
def test_arithmetic_agrees_with_sympy(f, g):
    assert to_sympy(f * g - g) == sympy.expand(to_sympy(f) * to_sympy(g) - to_sympy(g))


@given(polys())
def test_parse_print_round_trip(f):
    assert R.parse(str(f)) == f


@given(polys(RP))
def test_parse_print_round_trip_mod_p(f):
    assert RP.parse(str(f)) == f


@given(polys())
def test_derivatives_agree_with_sympy(f):
    x = sympy.Symbol("x")
    assert partial_derivative(f, "x") == from_sympy(R, sympy.diff(to_sympy(f), x))


@given(st.integers(0, 5).flatmap(lambda e: st.tuples(st.just(e), polys(homogeneous_degree=e))))
def test_euler_relation(pair):
    e, f = pair
    x, y, z = R.gens()
    euler = x * f.diff("x") + y * f.diff("y") + z * f.diff("z")
    assert euler == f.scale(e)


def test_field_coercion():
    assert QQ(Fraction(4, 2)) == 2
    assert Field(7)(Fraction(1, 3)) == 5
    assert Field(7).format(6) == "-1"
