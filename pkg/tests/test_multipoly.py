from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from apolar.exactlin import ContractError
from apolar.multipoly import (
    Poly,
    PolySyntaxError,
    contract,
    contract_monomial,
    deglex_key,
    derivative,
    dual_coeff_vector,
    format_poly,
    frame,
    frame_size,
    from_dual_coeffs,
    leading_form,
    pairing,
    parse,
)


def polys(nvars, max_deg=4):
    monos = st.tuples(*[st.integers(0, max_deg)] * nvars).filter(lambda e: sum(e) <= max_deg)
    coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=6)
    return st.dictionaries(monos, coeffs, max_size=6).map(lambda t: Poly(nvars, t))


def test_frame_orders():
    assert frame(3, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    upto = frame(2, 2, "upto")
    assert upto[:3] == ((0, 0), (1, 0), (0, 1))
    assert len(upto) == frame_size(2, 2, "upto") == 6
    assert frame_size(13, 4) == 1820


def test_deglex_sorting():
    monos = [(0, 1), (2, 0), (1, 1), (0, 0), (1, 0)]
    assert sorted(monos, key=deglex_key) == [(2, 0), (1, 1), (1, 0), (0, 1), (0, 0)]


def test_parse_examples():
    p = parse("x1^3+t^2", 4, ["x", "y", "z", "t"])
    assert p.terms == {(3, 0, 0, 0): 1, (0, 0, 0, 2): 1}
    assert parse("-2/3 x1 x2 + 5", 2).terms == {(1, 1): Q(-2, 3), (0, 0): 5}
    assert parse("x1*x1*x2", 2) == parse("x1^2*x2", 2)
    assert parse("x1 - x1", 2).is_zero()
    assert parse("3 * x2^2  # comment", 2).terms == {(0, 2): 3}


def test_parse_longest_alias_wins():
    names = ["a1", "a10"] + [f"b{i}" for i in range(8)]
    p = parse("a10*a1", 10, names)
    assert p.terms == {(1, 1) + (0,) * 8: 1}


@pytest.mark.parametrize("text, col", [
    ("", 1),
    ("x1 +", 5),
    ("x1 ^ 0", 6),
    ("x3", 1),
    ("2/0 x1", 3),
    ("x1 x2 )", 7),
    ("x1 *", 5),
])
def test_parse_errors_report_column(text, col):
    with pytest.raises(PolySyntaxError) as err:
        parse(text, 2)
    assert err.value.pos + 1 == col
    assert f"column {col}" in str(err.value)


def test_format():
    assert format_poly(parse("x2^3 + x1^3", 2)) == "x1^3 + x2^3"
    assert format_poly(parse("-2/3*x1*x2 + 1", 2)) == "-2/3*x1*x2 + 1"
    assert format_poly(Poly.zero(3)) == "0"
    assert format_poly(parse("x^2 - y", 2, ["x", "y"]), ["x", "y"]) == "x^2 - y"


@given(polys(3))
def test_format_parse_roundtrip(p):
    assert parse(format_poly(p), 3) == p


def test_contraction_examples():
    f = parse("x1^3*x2", 2)
    assert contract_monomial((2, 0), f) == parse("6*x1*x2", 2)
    assert contract_monomial((0, 2), f).is_zero()
    assert pairing(parse("x1^3*x2", 2), f) == 6
    assert pairing(parse("x1", 2), f) == 0


def test_dual_coordinates():
    frm = frame(2, 2)
    p = parse("x1^2 + 3*x1*x2", 2)
    assert dual_coeff_vector(p, frm) == (2, 3, 0)
    assert from_dual_coeffs((2, 3, 0), frm, 2) == p
    with pytest.raises(ContractError):
        dual_coeff_vector(p, ((2, 0),))


@given(polys(2, 3), polys(2, 3), polys(2, 5))
def test_contraction_is_an_action(g, h, f):
    assert contract(g * h, f) == contract(g, contract(h, f))


@given(polys(3, 5))
def test_contraction_by_variable_is_derivative(f):
    for i in range(3):
        e = [0, 0, 0]
        e[i] = 1
        assert contract_monomial(tuple(e), f) == derivative(f, i + 1)


def test_poly_arithmetic_and_degree():
    x, y = Poly.var(1, 2), Poly.var(2, 2)
    p = (x + y) ** 2
    assert p == parse("x1^2 + 2*x1*x2 + x2^2", 2)
    assert p.degree == 2 and p.is_homogeneous()
    assert leading_form(p + x) == p
    assert (p + x).truncate(1) == x
    assert p.embed(4, shift=1) == parse("x2^2 + 2*x2*x3 + x3^2", 4)
    with pytest.raises(ContractError):
        Poly.zero(2).degree
    with pytest.raises(ContractError):
        x + Poly.var(1, 3)
