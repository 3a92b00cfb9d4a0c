"""The three concrete instantiations: elements, families, and the action.

Matrix computations are cross-checked by hand-expanded products of the form
(I + d A)(I + e B), which close under the nilpotent generators.
"""

from fractions import Fraction

import pytest

from weilgroid.errors import (
    BaseIncompatible,
    DimensionMismatch,
    NotInKernel,
    SpaceMismatch,
    WrongModel,
)
from weilgroid.models import (
    AlgebroidElement,
    TangentFamily,
    ad_conjugation,
    anchor,
    apply,
    body_channels,
    compose_pointwise,
    const_family,
    element_from_channels,
    element_from_json,
    element_to_json,
    family_anchor,
    family_at_zero,
    family_from_json,
    family_pi,
    family_to_json,
    formal_space,
    inner,
    is_anchor_zero,
    is_inner_element,
    matrix_group,
    matrix_inverse,
    model_from_json,
    model_to_json,
    pair_groupoid,
    star,
    zero,
    zero_family,
)
from weilgroid.catalog import get_map
from weilgroid.morphisms import product
from weilgroid.spaces import UNIT, Monomial, WeilElement, d_power, product_space

D1 = d_power(1)
D2 = d_power(2)
DMONO = Monomial((1,))

FORMAL2 = formal_space(2)
PAIR1 = pair_groupoid(1)
MAT2 = matrix_group(2)


def _formal(space, *channels, base=None):
    body = [WeilElement(space, dict(ch)) for ch in channels]
    return AlgebroidElement(FORMAL2, space, body, base)


def _mat(space, entries):
    body = [[WeilElement(space, dict(e)) for e in row] for row in entries]
    return AlgebroidElement(MAT2, space, body)


def test_model_labels_and_inner():
    assert FORMAL2.label == "formal-space-2"
    assert PAIR1.label == "pair-groupoid-1"
    assert MAT2.label == "matrix-group-2"
    assert inner(MAT2) == MAT2  # already anchor-free
    assert inner(FORMAL2).inner_only
    assert model_from_json(model_to_json(PAIR1)) == PAIR1


def test_element_validation():
    aug = {UNIT: Fraction(1)}
    with pytest.raises(DimensionMismatch):
        AlgebroidElement(FORMAL2, D1, [WeilElement(D1, aug)])  # one channel, dim 2
    with pytest.raises(BaseIncompatible):
        AlgebroidElement(
            FORMAL2,
            D1,
            [WeilElement(D1, aug), WeilElement(D1, aug)],
            base=(Fraction(1), Fraction(2)),  # second channel augments to 1, not 2
        )
    with pytest.raises(BaseIncompatible):
        # off-diagonal entry with a constant term breaks the identity base
        _mat(D1, [[aug, aug], [{}, aug]])


def test_inner_model_rejects_moving_elements():
    moving = [
        WeilElement(D1, {UNIT: Fraction(0), DMONO: Fraction(1)}),
        WeilElement(D1, {UNIT: Fraction(0)}),
    ]
    with pytest.raises(NotInKernel):
        AlgebroidElement(inner(FORMAL2), D1, moving, (Fraction(0), Fraction(0)))
    still = zero(inner(FORMAL2), (Fraction(0), Fraction(0)), D1)
    assert is_inner_element(still)


def test_zero_elements_and_anchor():
    z = zero(FORMAL2, (Fraction(1), Fraction(2)), D2)
    assert z.base == (Fraction(1), Fraction(2))
    assert is_anchor_zero(z)
    a = anchor(z)
    assert a.model == formal_space(2)
    assert a.body == z.body
    # matrix anchor collapses to the unique point of the trivial base
    m = zero(MAT2, (), D1)
    am = anchor(m)
    assert am.model == formal_space(0)
    assert am.body == ()
    assert is_anchor_zero(_mat(D1, [[{UNIT: Fraction(1)}, {DMONO: Fraction(3)}], [{}, {UNIT: Fraction(1)}]]))


def test_apply_restricts_channels():
    x = _formal(
        D2,
        {UNIT: Fraction(0), Monomial((1, 2)): Fraction(5)},
        {UNIT: Fraction(3), DMONO: Fraction(1)},
        base=(Fraction(0), Fraction(3)),
    )
    out = apply(get_map("i1"), x)
    assert out.space == D1
    assert out.body[0] == WeilElement(D1, {UNIT: Fraction(0)})
    assert out.body[1] == WeilElement(D1, {UNIT: Fraction(3), DMONO: Fraction(1)})
    with pytest.raises(SpaceMismatch):
        apply(get_map("twist"), out)  # twist expects a square, out lives over D


def test_family_requires_identity_at_zero_on_matrices():
    joint = product_space(D1, D1)
    # body I + d2*E12 passes (identity when the value slot is zero)
    good = [
        [{UNIT: Fraction(1)}, {Monomial((2,)): Fraction(1)}],
        [{}, {UNIT: Fraction(1)}],
    ]
    TangentFamily(MAT2, D1, D1, [[WeilElement(joint, dict(e)) for e in row] for row in good])
    # body I + d1*E12 is not the identity on the index axis
    bad = [
        [{UNIT: Fraction(1)}, {DMONO: Fraction(1)}],
        [{}, {UNIT: Fraction(1)}],
    ]
    with pytest.raises(BaseIncompatible):
        TangentFamily(MAT2, D1, D1, [[WeilElement(joint, dict(e)) for e in row] for row in bad])


def test_family_views():
    joint = product_space(D1, D1)
    body = [
        WeilElement(
            joint,
            {
                UNIT: Fraction(1),
                Monomial((1,)): Fraction(2),
                Monomial((2,)): Fraction(3),
                Monomial((1, 2)): Fraction(4),
            },
        ),
        WeilElement(joint, {UNIT: Fraction(5)}),
    ]
    zeta = TangentFamily(FORMAL2, D1, D1, body, (Fraction(1), Fraction(5)))
    pi = family_pi(zeta)
    assert pi.space == D1
    assert pi.body[0] == WeilElement(D1, {UNIT: Fraction(1), DMONO: Fraction(2)})
    at0 = family_at_zero(zeta)
    assert at0.body[0] == WeilElement(D1, {UNIT: Fraction(1), DMONO: Fraction(3)})
    assert family_anchor(zeta).body == tuple(body)


def test_star_on_the_formal_space_is_reindexing():
    joint = product_space(D1, D1)
    body = [
        WeilElement(
            joint,
            {UNIT: Fraction(0), Monomial((1,)): Fraction(1), Monomial((1, 2)): Fraction(2)},
        ),
        WeilElement(joint, {UNIT: Fraction(4), Monomial((2,)): Fraction(6)}),
    ]
    zeta = TangentFamily(FORMAL2, D1, D1, body, (Fraction(0), Fraction(4)))
    x = _formal(
        D1,
        {UNIT: Fraction(0), DMONO: Fraction(1)},
        {UNIT: Fraction(4)},
        base=(Fraction(0), Fraction(4)),
    )
    out = star(zeta, x)
    assert out.space == joint
    assert out.body == tuple(body)  # the family body is exactly the joint element
    assert out.base == x.base


def test_star_preconditions():
    joint = product_space(D1, D1)
    body = [WeilElement(joint, {UNIT: Fraction(0), Monomial((1,)): Fraction(1)})]
    model = formal_space(1)
    zeta = TangentFamily(model, D1, D1, body, (Fraction(0),))
    wrong_space = AlgebroidElement(model, D2, [WeilElement(D2, {UNIT: Fraction(0)})], (Fraction(0),))
    with pytest.raises(SpaceMismatch):
        star(zeta, wrong_space)
    drifted = AlgebroidElement(
        model, D1, [WeilElement(D1, {UNIT: Fraction(0), DMONO: Fraction(9)})], (Fraction(0),)
    )
    with pytest.raises(BaseIncompatible):
        star(zeta, drifted)  # anchor path 9d does not match the family's d


def test_star_on_the_matrix_group_multiplies():
    joint = product_space(D1, D1)
    b, c, x = Fraction(3), Fraction(5), Fraction(7)
    # zeta(d1, d2) = I + d2*b*E12 + d1d2*c*E12, x(d1) = I + d1*x*E21
    zeta_body = [
        [
            {UNIT: Fraction(1)},
            {Monomial((2,)): b, Monomial((1, 2)): c},
        ],
        [{}, {UNIT: Fraction(1)}],
    ]
    zeta = TangentFamily(
        MAT2, D1, D1, [[WeilElement(joint, dict(e)) for e in row] for row in zeta_body]
    )
    xel = _mat(D1, [[{UNIT: Fraction(1)}, {}], [{DMONO: x}, {UNIT: Fraction(1)}]])
    out = star(zeta, xel)
    # (I + (d2 b + d1 d2 c) E12)(I + d1 x E21): E12*E21 = E11
    assert out.body[0][0] == WeilElement(
        joint, {UNIT: Fraction(1), Monomial((1, 2)): b * x}
    )
    assert out.body[1][0] == WeilElement(joint, {Monomial((1,)): x})
    assert out.body[0][1] == WeilElement(
        joint, {Monomial((2,)): b, Monomial((1, 2)): c}
    )


def test_zero_family_and_const_family():
    x = _formal(
        D1,
        {UNIT: Fraction(1), DMONO: Fraction(2)},
        {UNIT: Fraction(0)},
        base=(Fraction(1), Fraction(0)),
    )
    zf = zero_family(x, D1)
    # constant in the value direction: the index view is the anchor path, the
    # member at index zero is the still tangent at the base point
    assert family_pi(zf).body == anchor(x).body
    assert family_at_zero(zf) == zero(FORMAL2, x.base, D1)
    cf = const_family(x, D1)
    prod = product(D1, x.space)
    assert cf.element.body == apply(prod.p2, x).body


def test_pointwise_composition_and_inverse():
    # formal model: pointwise sum relative to the shared base point
    x = _formal(D1, {UNIT: Fraction(2), DMONO: Fraction(3)}, {UNIT: Fraction(1)}, base=(Fraction(2), Fraction(1)))
    y = _formal(D1, {UNIT: Fraction(2), DMONO: Fraction(4)}, {UNIT: Fraction(1)}, base=(Fraction(2), Fraction(1)))
    s = compose_pointwise(x, y)
    assert s.body[0] == WeilElement(D1, {UNIT: Fraction(2), DMONO: Fraction(7)})
    # matrix model: literal product, and the Neumann inverse undoes it
    m = _mat(D1, [[{UNIT: Fraction(1), DMONO: Fraction(2)}, {DMONO: Fraction(1)}], [{}, {UNIT: Fraction(1)}]])
    ident = zero(MAT2, (), D1)
    assert compose_pointwise(m, matrix_inverse(m)) == ident
    assert compose_pointwise(matrix_inverse(m), m) == ident
    with pytest.raises(WrongModel):
        matrix_inverse(x)


def test_conjugation_window_coefficients():
    # x(d1) = I + d1 A, y(d2) = I + d2 B: the square is I + d2 B + d1 d2 (AB - BA)
    a12 = Fraction(1)
    b21 = Fraction(1)
    x = _mat(D1, [[{UNIT: Fraction(1)}, {DMONO: a12}], [{}, {UNIT: Fraction(1)}]])
    y = _mat(D1, [[{UNIT: Fraction(1)}, {}], [{DMONO: b21}, {UNIT: Fraction(1)}]])
    out = ad_conjugation(x, y)
    # AB - BA for A = E12, B = E21 is E11 - E22
    assert out.body[0][0].coefficient(Monomial((1, 2))) == 1
    assert out.body[1][1].coefficient(Monomial((1, 2))) == -1
    assert out.body[1][0].coefficient(Monomial((2,))) == 1  # the plain d2 B term
    assert out.body[0][1].coefficient(Monomial((1,))) == 0  # no bare d1 term survives


def test_element_and_family_json_round_trip():
    x = _formal(
        D2,
        {UNIT: Fraction(1, 2), Monomial((1, 2)): Fraction(-3)},
        {UNIT: Fraction(0), Monomial((2,)): Fraction(7, 5)},
        base=(Fraction(1, 2), Fraction(0)),
    )
    assert element_from_json(element_to_json(x)) == x
    joint = product_space(D1, D1)
    zeta = TangentFamily(
        MAT2,
        D1,
        D1,
        [
            [WeilElement(joint, {UNIT: Fraction(1)}), WeilElement(joint, {Monomial((2,)): Fraction(2)})],
            [WeilElement(joint, {}), WeilElement(joint, {UNIT: Fraction(1)})],
        ],
    )
    assert family_from_json(family_to_json(zeta)) == zeta


def test_channels_round_trip():
    x = _mat(D1, [[{UNIT: Fraction(1)}, {DMONO: Fraction(4)}], [{}, {UNIT: Fraction(1)}]])
    chans = body_channels(x)
    assert len(chans) == 4
    assert element_from_channels(MAT2, D1, chans, None) == x
