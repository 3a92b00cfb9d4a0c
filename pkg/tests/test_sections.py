"""Polynomial scalar ring, vector-field sections, and their bracket.

sympy acts as the independent oracle for all calculus claims: partial
derivatives, the chain rule behind the flow derivative, and the Jacobian
formula the bracket must reproduce.
"""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from weilgroid.catalog import get_map
from weilgroid.errors import (
    ConfigInvalid,
    DegreeOverflow,
    DimensionMismatch,
    SpaceMismatch,
    WrongModel,
)
from weilgroid.models import AlgebroidElement, formal_space, matrix_group, zero
from weilgroid.sections import (
    Poly,
    Section,
    circledcirc,
    eval_section,
    is_zero_section,
    leibniz_residual,
    lie_derivative,
    parse_poly,
    section_add,
    section_apply,
    section_bracket,
    section_from_vector,
    section_negate,
    sections_from_json,
    scale_section,
    var_base,
    zero_section,
)
from weilgroid.spaces import UNIT, Monomial, WeilElement, d_power

D1 = d_power(1)
M1, M2 = sympy.symbols("m1 m2")
SYMS = (M1, M2)


def _sym(p: Poly):
    """Poly -> sympy expression, trusting only the term dictionary."""
    expr = sympy.Integer(0)
    for exp, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(SYMS, exp):
            term *= s**k
        expr += term
    return expr


def _poly2(terms):
    return Poly(2, {e: Fraction(c) for e, c in terms.items()})


poly_strategy = st.dictionaries(
    st.tuples(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3)),
    st.integers(min_value=-9, max_value=9),
    max_size=5,
).map(_poly2)


@given(p=poly_strategy, q=poly_strategy)
def test_poly_ring_matches_sympy(p, q):
    assert sympy.expand(_sym(p + q) - (_sym(p) + _sym(q))) == 0
    assert sympy.expand(_sym(p * q) - _sym(p) * _sym(q)) == 0
    assert sympy.expand(_sym(p - q) - (_sym(p) - _sym(q))) == 0


@given(p=poly_strategy)
def test_partial_derivative_matches_sympy(p):
    assert sympy.expand(_sym(p.partial(1)) - sympy.diff(_sym(p), M1)) == 0
    assert sympy.expand(_sym(p.partial(2)) - sympy.diff(_sym(p), M2)) == 0


@given(p=poly_strategy, a=st.integers(-5, 5), b=st.integers(-5, 5))
def test_rational_evaluation_matches_sympy(p, a, b):
    got = p.eval_fraction([a, b])
    want = _sym(p).subs({M1: a, M2: b})
    assert sympy.Rational(got.numerator, got.denominator) == want


def test_weil_evaluation_truncates_the_taylor_series():
    # f(c + d) = f(c) + f'(c) d once d squares to zero
    f = parse_poly(1, "m1^3 - 2*m1")
    c = Fraction(5)
    point = WeilElement(D1, {UNIT: c, Monomial((1,)): Fraction(1)})
    out = f.eval_weil([point])
    s = sympy.Symbol("m1")
    expr = s**3 - 2 * s
    assert out.coefficient(UNIT) == sympy.Rational(str(expr.subs(s, 5)))
    assert out.coefficient(Monomial((1,))) == sympy.Rational(str(sympy.diff(expr, s).subs(s, 5)))


@given(p=poly_strategy)
def test_parse_inverts_printing(p):
    assert parse_poly(2, str(p)) == p


def test_parse_poly_accepts_caret_and_constant_division():
    assert parse_poly(2, "m1^2*m2 + 3") == Poly(
        2, {(2, 1): Fraction(1), (0, 0): Fraction(3)}
    )
    assert parse_poly(1, "m1/2") == Poly(1, {(1,): Fraction(1, 2)})


@pytest.mark.parametrize("bad", ["m1 +", "x1", "m3", "m1/m1", "1.5", "m1 ** m1"])
def test_parse_poly_rejects_bad_input(bad):
    with pytest.raises(ConfigInvalid):
        parse_poly(2, bad)


def test_section_wrapper_guards():
    with pytest.raises(WrongModel):
        zero_section(2, model=matrix_group(2))
    model = formal_space(1)
    drifting = AlgebroidElement(
        model, D1, [WeilElement(D1, {UNIT: Fraction(3)})], (Fraction(3),)
    )
    with pytest.raises(SpaceMismatch):
        Section(model, D1, drifting)  # base must be the coordinate functions
    with pytest.raises(DimensionMismatch):
        section_from_vector(2, [Poly.const(2, 1)])


def test_vector_round_trip_and_zero_section():
    v = (parse_poly(2, "m1*m2"), parse_poly(2, "m2^2 - 1"))
    X = section_from_vector(2, v)
    assert X.vector == v
    assert X.element.base == var_base(2)
    assert is_zero_section(zero_section(2))
    assert not is_zero_section(X)
    assert is_zero_section(section_add(X, section_negate(X)))


def test_eval_section_at_rational_and_weil_points():
    X = section_from_vector(1, [parse_poly(1, "m1^2")])
    at2 = eval_section(X, [2])
    assert at2.base == (Fraction(2),)
    assert at2.body[0].coefficient(Monomial((1,))) == 4
    # at the Weil point 3 + d the value transports with its first derivative
    t = WeilElement(D1, {UNIT: Fraction(3), Monomial((1,)): Fraction(1)})
    out = eval_section(X, [t])
    ch = out.body[0]
    assert ch.coefficient(UNIT) == 3
    assert ch.coefficient(Monomial((1,))) == 1
    assert ch.coefficient(Monomial((2,))) == 9  # m^2 at 3
    assert ch.coefficient(Monomial((1, 2))) == 6  # derivative of m^2 at 3


def test_composition_restricts_to_its_factors():
    X = section_from_vector(1, [parse_poly(1, "m1^2")])
    Y = section_from_vector(1, [parse_poly(1, "m1 + 2")])
    comp = circledcirc(Y, X)
    assert comp.space == d_power(2)
    assert section_apply(get_map("i1"), comp) == X
    assert section_apply(get_map("i2"), comp) == Y


def test_composition_degree_cap_is_a_hard_error():
    X = section_from_vector(1, [parse_poly(1, "m1^3")])
    with pytest.raises(DegreeOverflow):
        circledcirc(X, X, max_degree=3)
    circledcirc(X, X, max_degree=5)  # the honest degree fits


def _lie_oracle(vec, f):
    expr = sympy.Integer(0)
    for i, v in enumerate(vec):
        expr += _sym(v) * sympy.diff(_sym(f), SYMS[i])
    return sympy.expand(expr)


@given(
    v1=poly_strategy, v2=poly_strategy, f=poly_strategy
)
def test_flow_derivative_matches_the_chain_rule(v1, v2, f):
    X = section_from_vector(2, [v1, v2])
    assert sympy.expand(_sym(lie_derivative(X, f))) == _lie_oracle((v1, v2), f)


def _bracket_oracle(vx, vy):
    """(dw)v - (dv)w componentwise, straight from the sympy Jacobian."""
    out = []
    for i in range(len(vx)):
        expr = sympy.Integer(0)
        for j in range(len(vx)):
            expr += _sym(vx[j]) * sympy.diff(_sym(vy[i]), SYMS[j])
            expr -= _sym(vy[j]) * sympy.diff(_sym(vx[i]), SYMS[j])
        out.append(sympy.expand(expr))
    return out


def test_section_bracket_is_the_jacobian_commutator():
    vx = (parse_poly(2, "m1*m2"), parse_poly(2, "m2"))
    vy = (parse_poly(2, "m1^2"), parse_poly(2, "m1 - m2"))
    br = section_bracket(section_from_vector(2, vx), section_from_vector(2, vy))
    want = _bracket_oracle(vx, vy)
    for got, expected in zip(br.vector, want):
        assert sympy.expand(_sym(got)) == expected


def test_section_bracket_interface_example():
    X = section_from_vector(1, [parse_poly(1, "1")])
    Y = section_from_vector(1, [parse_poly(1, "m1")])
    assert [str(v) for v in section_bracket(X, Y).vector] == ["1"]
    assert [str(v) for v in section_bracket(Y, X).vector] == ["-1"]


def test_scale_section_and_leibniz_residual():
    f = parse_poly(2, "m1 + m2^2")
    X = section_from_vector(2, [parse_poly(2, "m2"), parse_poly(2, "1")])
    Y = section_from_vector(2, [parse_poly(2, "m1"), parse_poly(2, "m1*m2")])
    assert scale_section(f, Y).vector == tuple(f * w for w in Y.vector)
    assert is_zero_section(leibniz_residual(X, Y, f))


def test_sections_config_round_trip_and_errors():
    dim, fields, functions = sections_from_json(
        {"dim": 2, "fields": {"X": ["m2", "0"]}, "functions": {"f": "m1^2"}}
    )
    assert dim == 2
    assert fields["X"].vector == (parse_poly(2, "m2"), parse_poly(2, "0"))
    assert functions["f"] == parse_poly(2, "m1^2")
    with pytest.raises(ConfigInvalid):
        sections_from_json({"fields": {}})
    with pytest.raises(ConfigInvalid):
        sections_from_json({"dim": 1, "extra": True})
    with pytest.raises(ConfigInvalid):
        sections_from_json({"dim": 2, "fields": {"X": ["m1"]}})
    with pytest.raises(ConfigInvalid):
        sections_from_json({"dim": 1, "functions": {"f": 7}})
