"""Operations built from diagram solves: sums, strong differences, the
bracket, translations, and the derivative of a curve of tangents.

Expected coordinates were worked out by hand from the restriction maps and
are frozen here; the formal model makes every solve a small exact linear
system, so any drift in the diagram plumbing shows up as a changed number.
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weilgroid.catalog import DiagramSpec, get_diagram, get_map
from weilgroid.errors import (
    BadSlot,
    BaseIncompatible,
    DimensionMismatch,
    Incompatible,
    NotInKernel,
    SpaceMismatch,
    WrongModel,
)
from weilgroid.models import (
    AlgebroidElement,
    TangentFamily,
    apply,
    formal_space,
    matrix_group,
    zero,
)
from weilgroid.ops import (
    add,
    bracket,
    check_perceived_limit,
    circledast,
    euclid_derivative,
    negate,
    scalar,
    slot_scale,
    solve_limit,
    strong_diff,
    strong_diff_slot,
)
from weilgroid.spaces import UNIT, Monomial, WeilElement, d_power, product_space

D1 = d_power(1)
D2 = d_power(2)
D3 = d_power(3)
DMONO = Monomial((1,))

F1 = formal_space(1)
M2 = matrix_group(2)

IDENT = {UNIT: Fraction(1)}
NIL = {}


def _el(coeffs, base, space=D1):
    return AlgebroidElement(F1, space, [WeilElement(space, dict(coeffs))], base)


def _mat(entries, space=D1):
    body = [[WeilElement(space, dict(e)) for e in row] for row in entries]
    return AlgebroidElement(M2, space, body)


def _coeffs(channel):
    return {str(m): c for m, c in channel.coefficients.items()}


def test_add_scalar_negate_on_fiber_elements():
    b = Fraction(4)
    x = _el({UNIT: b, DMONO: Fraction(3)}, (b,))
    y = _el({UNIT: b, DMONO: Fraction(10)}, (b,))
    assert _coeffs(add(x, y).body[0]) == {"1": b, "d1": Fraction(13)}
    assert _coeffs(scalar(Fraction(2, 3), x).body[0]) == {"1": b, "d1": Fraction(2)}
    assert add(x, negate(x)) == zero(F1, (b,), D1)
    with pytest.raises(SpaceMismatch):
        scalar(2, _el({UNIT: b}, (b,), D2))  # only single-generator elements


def test_slot_scale_hits_only_the_chosen_slot():
    b = Fraction(1)
    x = _el(
        {UNIT: b, Monomial((1,)): Fraction(2), Monomial((2,)): Fraction(3), Monomial((1, 2)): Fraction(5)},
        (b,),
        D2,
    )
    out = slot_scale(Fraction(7), 1, x)
    assert _coeffs(out.body[0]) == {
        "1": b,
        "d1": Fraction(14),
        "d2": Fraction(3),
        "d1*d2": Fraction(35),
    }
    with pytest.raises(BadSlot):
        slot_scale(1, 3, x)


def test_strong_difference_extracts_the_top_coefficient():
    # squares agreeing away from d1*d2: the difference of tops is the answer
    b = Fraction(9)
    low = {UNIT: b, Monomial((1,)): Fraction(2), Monomial((2,)): Fraction(3)}
    x = _el({**low, Monomial((1, 2)): Fraction(7)}, (b,), D2)
    y = _el({**low, Monomial((1, 2)): Fraction(47)}, (b,), D2)
    out = strong_diff(y, x)
    assert out.space == D1
    assert _coeffs(out.body[0]) == {"1": b, "d1": Fraction(40)}
    assert out.base == (b,)


def test_strong_difference_preconditions():
    b = Fraction(0)
    x = _el({UNIT: b, Monomial((1,)): Fraction(1)}, (b,), D2)
    y = _el({UNIT: b, Monomial((1,)): Fraction(2)}, (b,), D2)
    with pytest.raises(Incompatible):
        strong_diff(y, x)  # disagree already at first order
    with pytest.raises(SpaceMismatch):
        strong_diff(_el({UNIT: b}, (b,)), _el({UNIT: b}, (b,)))


@given(
    p=st.integers(min_value=-30, max_value=30),
    q=st.integers(min_value=-30, max_value=30),
    lin1=st.integers(min_value=-30, max_value=30),
    lin2=st.integers(min_value=-30, max_value=30),
)
def test_strong_difference_formula_on_random_squares(p, q, lin1, lin2):
    low = {UNIT: Fraction(5), Monomial((1,)): Fraction(lin1), Monomial((2,)): Fraction(lin2)}
    x = _el({**low, Monomial((1, 2)): Fraction(p)}, (Fraction(5),), D2)
    y = _el({**low, Monomial((1, 2)): Fraction(q)}, (Fraction(5),), D2)
    out = strong_diff(y, x)
    assert out.body[0].coefficient(DMONO) == q - p


CUBE = {
    UNIT: Fraction(9),
    Monomial((1,)): Fraction(2),
    Monomial((2,)): Fraction(3),
    Monomial((3,)): Fraction(5),
    Monomial((1, 2)): Fraction(7),
    Monomial((1, 3)): Fraction(11),
    Monomial((2, 3)): Fraction(13),
    Monomial((1, 2, 3)): Fraction(17),
}
OPPOSITE_EDGE = {1: (2, 3), 2: (1, 3), 3: (1, 2)}


@pytest.mark.parametrize("slot,kept_line", [(1, Fraction(2)), (2, Fraction(3)), (3, Fraction(5))])
def test_slotwise_difference_keeps_line_and_extracts_edges(slot, kept_line):
    """Cubes may differ only on monomials containing both other slots.

    The result is a square: d1 carries the retained slot line of x, d2 the
    difference along the opposite edge, d1*d2 the difference of tops.
    """
    edge = Monomial(OPPOSITE_EDGE[slot])
    yco = dict(CUBE)
    yco[edge] = CUBE[edge] + Fraction(100)
    yco[Monomial((1, 2, 3))] = CUBE[Monomial((1, 2, 3))] + Fraction(1000)
    x = _el(CUBE, (Fraction(9),), D3)
    y = _el(yco, (Fraction(9),), D3)
    out = strong_diff_slot(slot, y, x)
    assert out.space == D2
    assert _coeffs(out.body[0]) == {
        "1": Fraction(9),
        "d1": kept_line,
        "d2": Fraction(100),
        "d1*d2": Fraction(1000),
    }


def test_slotwise_difference_preconditions():
    x = _el(CUBE, (Fraction(9),), D3)
    bumped = dict(CUBE)
    bumped[Monomial((2,))] = Fraction(99)  # visible under the slot-1 agreement map
    with pytest.raises(Incompatible):
        strong_diff_slot(1, _el(bumped, (Fraction(9),), D3), x)
    with pytest.raises(BadSlot):
        strong_diff_slot(4, x, x)
    sq = _el({UNIT: Fraction(9)}, (Fraction(9),), D2)
    with pytest.raises(SpaceMismatch):
        strong_diff_slot(1, sq, sq)


def test_bracket_of_elementary_matrix_tangents():
    # x = I + d*E12, y = I + d*E21; the commutator word gives I + d*(E22 - E11)
    x = _mat([[IDENT, {DMONO: Fraction(1)}], [NIL, IDENT]])
    y = _mat([[IDENT, NIL], [{DMONO: Fraction(1)}, IDENT]])
    out = bracket(x, y)
    assert _coeffs(out.body[0][0]) == {"1": Fraction(1), "d1": Fraction(-1)}
    assert _coeffs(out.body[1][1]) == {"1": Fraction(1), "d1": Fraction(1)}
    assert out.body[0][1].coefficients == {}
    assert out.body[1][0].coefficients == {}
    # swapping the arguments flips the sign
    rev = bracket(y, x)
    assert _coeffs(rev.body[0][0]) == {"1": Fraction(1), "d1": Fraction(1)}
    assert _coeffs(rev.body[1][1]) == {"1": Fraction(1), "d1": Fraction(-1)}


def test_bracket_preconditions():
    b = Fraction(0)
    still = zero(F1, (b,), D1)
    far = zero(F1, (Fraction(1),), D1)
    with pytest.raises(Incompatible):
        bracket(still, far)
    moving = _el({UNIT: b, DMONO: Fraction(1)}, (b,))
    with pytest.raises(NotInKernel):
        bracket(still, moving)  # the anchor sees the second argument
    with pytest.raises(SpaceMismatch):
        bracket(zero(F1, (b,), D2), zero(F1, (b,), D2))
    with pytest.raises(WrongModel):
        bracket(still, zero(formal_space(2), (b, b), D1))


def test_circledast_on_matrices_is_the_shifted_product():
    x = _mat([[IDENT, {DMONO: Fraction(1)}], [NIL, IDENT]])
    y = _mat([[IDENT, NIL], [{DMONO: Fraction(1)}, IDENT]])
    z = circledast(x, y)
    assert z.space == D2
    # y occupies the first slot, x the second; E12*E21 = E11 feeds the corner
    assert _coeffs(z.body[0][0]) == {"1": Fraction(1), "d1*d2": Fraction(1)}
    assert _coeffs(z.body[0][1]) == {"d2": Fraction(1)}
    assert _coeffs(z.body[1][0]) == {"d1": Fraction(1)}
    assert apply(get_map("i1"), z) == y
    assert apply(get_map("i2"), z) == x


def test_circledast_on_the_formal_space_needs_a_still_second_argument():
    b = Fraction(4)
    x = _el({UNIT: b, DMONO: Fraction(2)}, (b,))
    still = zero(F1, (b,), D1)
    z = circledast(x, still)
    assert apply(get_map("i1"), z) == still
    assert apply(get_map("i2"), z) == x
    moving = _el({UNIT: b, DMONO: Fraction(5)}, (b,))
    with pytest.raises(BaseIncompatible):
        circledast(x, moving)  # the anchor of y must match the constant base


def test_euclid_derivative_reads_the_mixed_coefficient():
    joint = product_space(D1, D1)
    beta, v, w = Fraction(4), Fraction(6), Fraction(10)
    # zeta(d1)(d2) = beta + (v + w*d1)*d2: an affine curve of tangents
    fam = TangentFamily(
        F1,
        D1,
        D1,
        [WeilElement(joint, {UNIT: beta, Monomial((2,)): v, Monomial((1, 2)): w})],
        (beta,),
    )
    out = euclid_derivative(fam)
    assert _coeffs(out.body[0]) == {"1": beta, "d1": w}
    assert out.base == (beta,)


def test_euclid_derivative_on_a_matrix_curve():
    joint = product_space(D1, D1)
    one = WeilElement(joint, IDENT)
    nil = WeilElement(joint, {})
    fam = TangentFamily(
        M2,
        D1,
        D1,
        [
            [one, WeilElement(joint, {Monomial((2,)): Fraction(3), Monomial((1, 2)): Fraction(5)})],
            [nil, one],
        ],
    )
    out = euclid_derivative(fam)
    assert _coeffs(out.body[0][1]) == {"d1": Fraction(5)}
    assert _coeffs(out.body[0][0]) == {"1": Fraction(1)}


def test_euclid_derivative_requires_a_curve_of_fiber_elements():
    joint = product_space(D2, D1)
    fam = TangentFamily(
        F1, D2, D1, [WeilElement(joint, {UNIT: Fraction(0)})], (Fraction(0),)
    )
    with pytest.raises(SpaceMismatch):
        euclid_derivative(fam)


def test_solve_limit_input_checks():
    diff = get_diagram("diff")
    b = Fraction(0)
    sq = _el({UNIT: b, Monomial((1, 2)): Fraction(1)}, (b,), D2)
    with pytest.raises(DimensionMismatch):
        solve_limit(F1, diff, [sq])
    with pytest.raises(WrongModel):
        solve_limit(F1, diff, [sq, zero(formal_space(2), (b, b), D2)])
    with pytest.raises(SpaceMismatch):
        solve_limit(F1, diff, [sq, zero(F1, (b,), D1)])
    with pytest.raises(Incompatible):
        solve_limit(F1, diff, [sq, zero(F1, (Fraction(1),), D2)])
    # values breaking the shared-edge relation are rejected by the solver
    other = _el({UNIT: b, Monomial((1,)): Fraction(3)}, (b,), D2)
    with pytest.raises(Incompatible):
        solve_limit(F1, diff, [sq, other])


def test_solve_limit_with_no_legs_gives_the_still_element():
    point = DiagramSpec(
        name="point",
        citation="degenerate case of the solver interface",
        apex=D1,
        legs=(),
        relations=(),
    )
    out = solve_limit(F1, point, [])
    assert out == zero(F1, (Fraction(0),), D1)
    assert solve_limit(M2, point, []) == zero(M2, (), D1)


def test_certificates_are_cached_and_positive():
    cert = check_perceived_limit(F1, get_diagram("kl"))
    assert cert is check_perceived_limit(F1, get_diagram("kl"))
    assert cert.is_perceived_limit
    assert cert.kernel_rank == 0
    assert cert.image_rank == cert.compat_rank == 2
