"""Maps between infinitesimal spaces and their pullbacks on elements."""

from fractions import Fraction

import pytest

from weilgroid.errors import (
    DomainMismatch,
    NonNilpotentComponent,
    NonzeroConstant,
    PatternViolation,
)
from weilgroid.morphisms import (
    compose,
    identity,
    lift_element,
    make_morphism,
    oplus,
    oplus_inclusion,
    parse_lambda,
    parse_morphism,
    permutation,
    product,
    product_morphism,
    pullback,
    scale_slot_morphism,
)
from weilgroid.spaces import (
    D,
    UNIT,
    Monomial,
    WeilElement,
    basis,
    d_n,
    d_power,
    element_from_vector,
    oplus_space,
    parse_space,
    product_space,
)

D2 = d_power(2)
D3 = d_power(3)


def _apply(f, e):
    # pullback matrix acts on coefficient vectors of the codomain
    from weilgroid.linalg import mat_vec
    from weilgroid.spaces import element_to_vector

    vec = mat_vec(pullback(f).matrix, element_to_vector(e))
    return element_from_vector(f.domain, vec)


def test_identity_and_composition():
    f = parse_lambda(D2, D2, "(d1,d2) -> (d2,d1)")
    e = WeilElement(
        D2,
        {UNIT: Fraction(1), Monomial((1,)): Fraction(2), Monomial((1, 2)): Fraction(5)},
    )
    assert _apply(identity(D2), e) == e
    assert _apply(compose(f, f), e) == e  # the swap is an involution


def test_compose_requires_matching_middle():
    f = parse_lambda(D2, D, "(d1,d2) -> (d1,)")  # space map D^2 -> D
    g = parse_lambda(D3, D2, "(d1,d2,d3) -> (d1,d2)")  # space map D^3 -> D^2
    composed = compose(f, g)  # f after g: D^3 -> D
    assert composed.domain == D3
    assert composed.codomain == D
    with pytest.raises(DomainMismatch):
        compose(g, f)  # g after f needs f to land in D^3; it lands in D


def test_nonzero_constant_rejected():
    bad = WeilElement(D, {UNIT: Fraction(1)})
    with pytest.raises(NonzeroConstant):
        make_morphism(D, D, [bad])


def test_non_nilpotent_component_rejected():
    # d1 + d2 squares to 2 d1 d2, not zero, so it cannot be a D-component image
    cand = WeilElement.generator(D2, 1) + WeilElement.generator(D2, 2)
    with pytest.raises(NonNilpotentComponent):
        make_morphism(D2, D, [cand])


def test_pattern_violation_rejected():
    # the identity candidates D^2 -> D(2) leave d1*d2 alive, breaking the pattern
    g1 = WeilElement.generator(D2, 1)
    g2 = WeilElement.generator(D2, 2)
    with pytest.raises(PatternViolation):
        make_morphism(D2, d_n(2), [g1, g2])
    # the diagonal D -> D(2) is fine: the nilsquare kills the product
    g = WeilElement.generator(D, 1)
    make_morphism(D, d_n(2), [g, g])


def test_nilpotent_sum_is_fine_when_cross_term_dies():
    glued = oplus_space(D, D)  # d1*d2 = 0 there
    cand = WeilElement.generator(glued, 1) + WeilElement.generator(glued, 2)
    f = make_morphism(glued, D, [cand])
    e = WeilElement(D, {Monomial((1,)): Fraction(3)})
    out = _apply(f, e)
    assert out.coefficient(Monomial((1,))) == 3
    assert out.coefficient(Monomial((2,))) == 3


def test_permutation_pullback_relabels_supports():
    sigma = (2, 3, 1)
    p = permutation(sigma)
    e = WeilElement(
        D3,
        {
            Monomial((1,)): Fraction(4),
            Monomial((2, 3)): Fraction(7),
            Monomial((1, 2, 3)): Fraction(-1),
        },
    )
    out = _apply(p, e)
    # coefficient lands on the sigma-image of each support
    assert out.coefficient(Monomial((2,))) == 4
    assert out.coefficient(Monomial((1, 3))) == 7
    assert out.coefficient(Monomial((1, 2, 3))) == -1


def test_permutation_rejects_non_bijections():
    with pytest.raises(ValueError):
        permutation((1, 1, 2))


def test_product_projections_and_inclusions():
    pr = product(D, D2)
    assert pr.space == product_space(D, D2)
    e = WeilElement(D, {UNIT: Fraction(2), Monomial((1,)): Fraction(3)})
    lifted = _apply(pr.p1, e)  # cylinder over the first factor
    assert lifted.coefficient(UNIT) == 2
    assert lifted.coefficient(Monomial((1,))) == 3
    assert _apply(pr.i1, lifted) == e
    # the second inclusion sees only the constant part of a first-factor cylinder
    back = _apply(pr.i2, lifted)
    assert back == WeilElement.constant(D2, Fraction(2))


def test_oplus_inclusion_drops_cross_terms():
    inc = oplus_inclusion(D, D)
    e = WeilElement(
        product_space(D, D),
        {UNIT: Fraction(1), Monomial((1, 2)): Fraction(9), Monomial((2,)): Fraction(4)},
    )
    out = _apply(inc, e)
    assert out.coefficient(Monomial((2,))) == 4
    assert out.coefficient(UNIT) == 1
    assert all(mono != Monomial((1, 2)) for mono in out.coefficients)


def test_oplus_helper_matches_space_constructor():
    got = oplus(D2, D)
    assert got.space == oplus_space(D2, D)


def test_product_morphism_acts_blockwise():
    g = parse_lambda(D, D, "(d1) -> (2*d1,)")
    h = parse_lambda(D, D, "(d1) -> (3*d1,)")
    gh = product_morphism(g, h)
    e = WeilElement(
        product_space(D, D),
        {Monomial((1,)): Fraction(1), Monomial((2,)): Fraction(1), Monomial((1, 2)): Fraction(1)},
    )
    out = _apply(gh, e)
    assert out.coefficient(Monomial((1,))) == 2
    assert out.coefficient(Monomial((2,))) == 3
    assert out.coefficient(Monomial((1, 2))) == 6


def test_scale_slot_morphism_touches_one_generator():
    f = scale_slot_morphism(D2, 2, Fraction(5))
    e = WeilElement(
        D2,
        {Monomial((1,)): Fraction(1), Monomial((2,)): Fraction(1), Monomial((1, 2)): Fraction(1)},
    )
    out = _apply(f, e)
    assert out.coefficient(Monomial((1,))) == 1
    assert out.coefficient(Monomial((2,))) == 5
    assert out.coefficient(Monomial((1, 2))) == 5


def test_lift_element_shifts_generators():
    e = WeilElement(D, {UNIT: Fraction(1), Monomial((1,)): Fraction(6)})
    up = lift_element(e, D3, 2)
    assert up.coefficient(Monomial((3,))) == 6
    assert up.coefficient(UNIT) == 1


def test_parse_morphism_full_form():
    f = parse_morphism("D^2 -> D: (d1,d2) -> (d1*d2,)")
    assert f.domain == D2 and f.codomain == D
    e = WeilElement(D, {Monomial((1,)): Fraction(1)})
    assert _apply(f, e).coefficient(Monomial((1, 2))) == 1


def test_parse_lambda_supports_rational_coefficients():
    f = parse_lambda(D, D, "(d1) -> (d1/2,)")
    e = WeilElement(D, {Monomial((1,)): Fraction(4)})
    assert _apply(f, e).coefficient(Monomial((1,))) == 2


def test_parse_lambda_arity_errors():
    with pytest.raises(ValueError):
        parse_lambda(D2, D, "(d1) -> (d1,)")
    with pytest.raises(ValueError):
        parse_lambda(D, D, "(d1) -> (d1, d1)")


def test_pullback_against_hand_computation():
    # f: D -> D^2, f(d) = (d, d): pullback sends d1, d2 -> d and d1*d2 -> 0
    f = parse_lambda(D, D2, "(d1) -> (d1, d1)")
    e = WeilElement(
        D2,
        {Monomial((1,)): Fraction(2), Monomial((2,)): Fraction(3), Monomial((1, 2)): Fraction(11)},
    )
    out = _apply(f, e)
    assert out == WeilElement(D, {Monomial((1,)): Fraction(5)})
