"""Every claim the harness can check, grouped into named suites.

A property couples a citation-bearing identifier with a checker.  Checkers
draw inputs from the shared generators in ``verify``, project them onto the
exact preconditions of the claim, run the identity, and raise
``PropertyFailure`` with replayable serialized inputs when it breaks.
Independent oracles (the commutator expansion, the Jacobian coordinate
bracket, the affine reconstruction of curves) live here rather than in the
library modules they cross-check.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from typing import Any, Callable

from .catalog import broken_diagram, get_diagram, get_map, standard_maps
from .errors import NotInKernel, NotPerceivedLimit
from .models import (
    FORMAL_SPACE,
    MATRIX_GROUP,
    PAIR_GROUPOID,
    AlgebroidElement,
    Model,
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
    matrix_inverse,
    model_from_json,
    model_to_json,
    star,
    star_family,
    zero,
    zero_family,
)
from .morphisms import (
    compose,
    identity,
    lift_element,
    make_morphism,
    permutation,
    product,
    product_morphism,
)
from .ops import (
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
from .sections import (
    Poly,
    Section,
    circledcirc,
    eval_section,
    is_zero_section,
    leibniz_residual,
    lie_derivative,
    scale_section,
    section_add,
    section_apply,
    section_bracket,
    section_negate,
    zero_section,
)
from .spaces import (
    UNIT,
    Monomial,
    WeilElement,
    basis,
    d_n,
    d_power,
    dimension,
    format_space,
    oplus_space,
    parse_space,
    product_space,
)
from .verify import (
    Property,
    PropertyFailure,
    _adjust_monomials,
    random_cube_pair,
    random_element,
    random_family,
    random_jacobi_sextuple,
    random_poly,
    random_rational,
    random_section,
    random_strong_diff_pair,
    random_weil,
    serialize_element,
    serialize_family,
)

ALL = (FORMAL_SPACE, PAIR_GROUPOID, MATRIX_GROUP)
BASED = (FORMAL_SPACE, PAIR_GROUPOID)
MAT = (MATRIX_GROUP,)

D1 = d_power(1)
D2 = d_power(2)
D3 = d_power(3)


def _ser(v: Any) -> Any:
    if isinstance(v, AlgebroidElement):
        return serialize_element(v)
    if isinstance(v, TangentFamily):
        return serialize_family(v)
    if isinstance(v, Section):
        return {
            "space": format_space(v.space),
            "body": [str(c) for c in v.element.body],
        }
    if isinstance(v, (WeilElement, Fraction, Poly, Monomial)):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_ser(u) for u in v]
    if isinstance(v, dict):
        return {str(k): _ser(u) for k, u in v.items()}
    return v


def _expect(cond: bool, **context: Any) -> None:
    if not cond:
        raise PropertyFailure({k: _ser(v) for k, v in context.items()})


def _scalar(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def _family_for(
    rng: random.Random, model: Model, x: AlgebroidElement, value_space, bound: int
) -> TangentFamily:
    """A random family whose base path makes star(family, x) well posed."""
    if model.kind == MATRIX_GROUP:
        return random_family(rng, model, x.space, value_space, bound)
    return random_family(rng, model, x.space, value_space, bound, base_path=anchor(x))


def _precompose(zeta: TangentFamily, g) -> TangentFamily:
    """Reindex a family along a map g into its index space."""
    m = product_morphism(g, identity(zeta.value_space))
    moved = apply(m, zeta.element)
    base = None if zeta.model.kind == MATRIX_GROUP else moved.base
    return TangentFamily(zeta.model, g.domain, zeta.value_space, moved.body, base)


def _fiber_triple(rng: random.Random, model: Model, bound: int):
    x = random_element(rng, model, D1, bound)
    base = None if model.kind == MATRIX_GROUP else x.base
    y = random_element(rng, model, D1, bound, base=base)
    z = random_element(rng, model, D1, bound, base=base)
    return x, y, z


# ---------------------------------------------------------------------------
# Weil algebra structure
# ---------------------------------------------------------------------------


_EXTRA_DIMS = (
    ("D^3{13,23}", 5),
    ("D^4{13,14,23,24,34}", 6),
    ("D^4{24,34}", 10),
    ("D^4{14,34}", 10),
    ("D^4{14,24}", 10),
)


def _check_weil_dims(model, rng, config) -> None:
    for m in range(7):
        got = dimension(d_power(m))
        _expect(got == 2**m, space=f"D^{m}", got=got, expected=2**m)
    for n in range(1, 7):
        got = dimension(d_n(n))
        _expect(got == n + 1, space=f"D({n})", got=got, expected=n + 1)
    for text, dim in _EXTRA_DIMS:
        got = dimension(parse_space(text))
        _expect(got == dim, space=text, got=got, expected=dim)


_RING_SPACES = (D1, D2, D3, d_n(2), d_n(3), parse_space("D^3{13,23}"))


def _check_weil_ring(model, rng, config) -> None:
    space = rng.choice(_RING_SPACES)
    bound = config.coeff_bound
    e1 = random_weil(rng, space, bound)
    e2 = random_weil(rng, space, bound)
    e3 = random_weil(rng, space, bound)
    _expect((e1 * e2) * e3 == e1 * (e2 * e3), space=str(space))
    _expect(e1 * e2 == e2 * e1, space=str(space))
    _expect(e1 * (e2 + e3) == e1 * e2 + e1 * e3, space=str(space))
    _expect(WeilElement.unit(space) * e1 == e1, space=str(space))
    a = _scalar(rng, bound)
    _expect(e1.scale(a) == WeilElement.constant(space, a) * e1, space=str(space))
    admissible = set(basis(space))
    n = space.num_generators
    for i in range(1, n + 1):
        gi = WeilElement.generator(space, i)
        _expect(gi * gi == WeilElement.zero(space), space=str(space), generator=i)
        for j in range(i + 1, n + 1):
            gj = WeilElement.generator(space, j)
            mono = Monomial((i, j))
            if mono in admissible:
                expected = WeilElement(space, {mono: Fraction(1)})
            else:
                expected = WeilElement.zero(space)
            _expect(gi * gj == expected, space=str(space), pair=[i, j])


def _check_oplus(model, rng, config) -> None:
    for a, b in ((D1, D1), (D2, D1), (d_n(2), D2)):
        na = a.num_generators
        prod = product_space(a, b)
        expected = {
            Monomial(sa.support + tuple(g + na for g in sb.support))
            for sa in basis(a)
            for sb in basis(b)
        }
        _expect(
            set(basis(prod)) == expected
            and dimension(prod) == dimension(a) * dimension(b),
            left=str(a),
            right=str(b),
        )
        summed = oplus_space(a, b)
        shared = {Monomial(sa.support) for sa in basis(a)} | {
            Monomial(tuple(g + na for g in sb.support)) for sb in basis(b)
        }
        _expect(
            set(basis(summed)) == shared
            and dimension(summed) == dimension(a) + dimension(b) - 1,
            left=str(a),
            right=str(b),
        )
    _expect(oplus_space(D2, D1) == get_diagram("diff").apex, apex="diff")
    _expect(
        oplus_space(oplus_space(D2, D1), D1) == get_diagram("triple").apex,
        apex="triple",
    )


# ---------------------------------------------------------------------------
# Diagram certification
# ---------------------------------------------------------------------------


_DIAGRAM_RANKS = {
    "sum": (3, 4),
    "kl": (2, 4),
    "diff": (5, 8),
    "triple": (6, 12),
    "diff1": (10, 16),
    "diff2": (10, 16),
    "diff3": (10, 16),
}


def _make_diagram_checker(name: str) -> Callable:
    def check(model, rng, config) -> None:
        diagram = get_diagram(name)
        cert = check_perceived_limit(model, diagram)
        rank, rows = _DIAGRAM_RANKS[name]
        _expect(
            cert.is_perceived_limit
            and cert.kernel_rank == 0
            and cert.image_rank == rank
            and cert.compat_rank == rank
            and len(cert.stacked) == rows,
            kernel=cert.kernel_rank,
            image=cert.image_rank,
            compat=cert.compat_rank,
        )
        z = random_element(rng, model, diagram.apex, config.coeff_bound)
        values = [apply(leg, z) for leg in diagram.legs]
        _expect(solve_limit(model, diagram, values) == z, apex=z)

    return check


def _check_broken_control(model, rng, config) -> None:
    diagram = broken_diagram()
    cert = check_perceived_limit(model, diagram)
    _expect(
        not cert.is_perceived_limit and cert.kernel_rank == 2,
        kernel=cert.kernel_rank,
        image=cert.image_rank,
    )
    base = () if model.kind == MATRIX_GROUP else (Fraction(0),) * model.dim
    values = [zero(model, base, leg.domain) for leg in diagram.legs]
    try:
        solve_limit(model, diagram, values)
    except NotPerceivedLimit:
        return
    raise PropertyFailure({"error": "under-determined diagram accepted by the solver"})


# ---------------------------------------------------------------------------
# Module structure on the fibers
# ---------------------------------------------------------------------------


def _check_add_assoc(model, rng, config) -> None:
    x, y, z = _fiber_triple(rng, model, config.coeff_bound)
    _expect(add(add(x, y), z) == add(x, add(y, z)), x=x, y=y, z=z)


def _check_add_comm(model, rng, config) -> None:
    x, y, _ = _fiber_triple(rng, model, config.coeff_bound)
    _expect(add(x, y) == add(y, x), x=x, y=y)


def _check_add_zero(model, rng, config) -> None:
    x, _, _ = _fiber_triple(rng, model, config.coeff_bound)
    _expect(add(x, zero(model, x.base, D1)) == x, x=x)


def _check_add_inverse(model, rng, config) -> None:
    x, _, _ = _fiber_triple(rng, model, config.coeff_bound)
    _expect(add(x, negate(x)) == zero(model, x.base, D1), x=x)


def _check_scalar_one(model, rng, config) -> None:
    x, _, _ = _fiber_triple(rng, model, config.coeff_bound)
    _expect(scalar(Fraction(1), x) == x, x=x)


def _check_scalar_compose(model, rng, config) -> None:
    x, _, _ = _fiber_triple(rng, model, config.coeff_bound)
    a, b = _scalar(rng, config.coeff_bound), _scalar(rng, config.coeff_bound)
    _expect(scalar(a, scalar(b, x)) == scalar(a * b, x), x=x, a=a, b=b)


def _check_scalar_add(model, rng, config) -> None:
    x, y, _ = _fiber_triple(rng, model, config.coeff_bound)
    a = _scalar(rng, config.coeff_bound)
    _expect(scalar(a, add(x, y)) == add(scalar(a, x), scalar(a, y)), x=x, y=y, a=a)


def _check_scalar_distrib(model, rng, config) -> None:
    x, _, _ = _fiber_triple(rng, model, config.coeff_bound)
    a, b = _scalar(rng, config.coeff_bound), _scalar(rng, config.coeff_bound)
    _expect(scalar(a + b, x) == add(scalar(a, x), scalar(b, x)), x=x, a=a, b=b)


# ---------------------------------------------------------------------------
# Strong differences
# ---------------------------------------------------------------------------


def _check_swap(model, rng, config) -> None:
    x, y = random_strong_diff_pair(rng, model, config.coeff_bound)
    tw = get_map("twist")
    _expect(strong_diff(apply(tw, y), apply(tw, x)) == strong_diff(y, x), x=x, y=y)


def _check_negation(model, rng, config) -> None:
    x, y = random_strong_diff_pair(rng, model, config.coeff_bound)
    _expect(strong_diff(x, y) == negate(strong_diff(y, x)), x=x, y=y)


def _check_slot_scaling(model, rng, config) -> None:
    x, y = random_strong_diff_pair(rng, model, config.coeff_bound)
    a = _scalar(rng, config.coeff_bound)
    b = _scalar(rng, config.coeff_bound)
    for i in (1, 2):
        _expect(slot_scale(Fraction(1), i, x) == x, x=x, slot=i)
        _expect(
            slot_scale(a, i, slot_scale(b, i, x)) == slot_scale(a * b, i, x),
            x=x,
            slot=i,
            a=a,
            b=b,
        )
        got = strong_diff(slot_scale(a, i, y), slot_scale(a, i, x))
        _expect(got == scalar(a, strong_diff(y, x)), x=x, y=y, slot=i, a=a)


def _check_lemma_quasicolimit(model, rng, config) -> None:
    diagram = get_diagram("triple")
    _expect(diagram.apex == oplus_space(oplus_space(D2, D1), D1), apex=str(diagram.apex))
    cert = check_perceived_limit(model, diagram)
    _expect(cert.is_perceived_limit, kernel=cert.kernel_rank)
    z = random_element(rng, model, diagram.apex, config.coeff_bound)
    values = [apply(leg, z) for leg in diagram.legs]
    _expect(solve_limit(model, diagram, values) == z, apex=z)


def _check_cocycle(model, rng, config) -> None:
    x = random_element(rng, model, D2, config.coeff_bound)
    y = _adjust_monomials(rng, model, x, (1, 2), config.coeff_bound)
    z = _adjust_monomials(rng, model, x, (1, 2), config.coeff_bound)
    total = add(add(strong_diff(y, x), strong_diff(z, y)), strong_diff(x, z))
    _expect(total == zero(model, x.base, D1), x=x, y=y, z=z, total=total)


_TN23_ROUTES = {
    1: ((2, "perm213"), (3, "perm321"), (1, "perm132")),
    2: ((1, "perm213"), (2, "perm321"), (3, "perm132")),
    3: ((3, "perm213"), (1, "perm321"), (2, "perm132")),
}


def _make_tn23_checker(slot: int) -> Callable:
    def check(model, rng, config) -> None:
        x, y = random_cube_pair(rng, model, slot, config.coeff_bound)
        want = strong_diff_slot(slot, y, x)
        for other_slot, name in _TN23_ROUTES[slot]:
            p = get_map(name)
            got = strong_diff_slot(other_slot, apply(p, y), apply(p, x))
            _expect(got == want, route=name, via_slot=other_slot, x=x, y=y)

    return check


def _check_general_jacobi(model, rng, config) -> None:
    s = random_jacobi_sextuple(rng, model, config.coeff_bound)
    e1 = strong_diff(
        strong_diff_slot(1, s["123"], s["132"]), strong_diff_slot(1, s["231"], s["321"])
    )
    e2 = strong_diff(
        strong_diff_slot(2, s["231"], s["213"]), strong_diff_slot(2, s["312"], s["132"])
    )
    e3 = strong_diff(
        strong_diff_slot(3, s["312"], s["321"]), strong_diff_slot(3, s["123"], s["213"])
    )
    total = add(add(e1, e2), e3)
    _expect(total == zero(model, e1.base, D1), sextuple=s, total=total)


# ---------------------------------------------------------------------------
# The star action and its axioms
# ---------------------------------------------------------------------------


def _check_star_c1(model, rng, config) -> None:
    x = random_element(rng, model, D1, config.coeff_bound)
    zeta = _family_for(rng, model, x, D1, config.coeff_bound)
    s = star(zeta, x)
    _expect(s.base == x.base, x=x, family=zeta)
    _expect(anchor(s) == family_anchor(zeta), x=x, family=zeta)


def _check_star_c2(model, rng, config) -> None:
    bound = config.coeff_bound
    x = random_element(rng, model, D1, bound)
    zeta = _family_for(rng, model, x, D1, bound)
    s = star(zeta, x)
    pr = product(zeta.index_space, zeta.value_space)
    _expect(apply(pr.i1, s) == x, x=x, family=zeta)
    _expect(apply(pr.i2, s) == family_at_zero(zeta), x=x, family=zeta)
    y = random_element(rng, model, D1, bound)
    _expect(
        star(zero_family(y, D1), y) == apply(product(y.space, D1).p1, y), y=y
    )
    z = random_element(rng, model, D1, bound)
    z0 = zero(model, z.base, D1)
    _expect(
        star(const_family(z, D1), z0) == apply(product(D1, z.space).p2, z), z=z
    )


def _check_star_c3(model, rng, config) -> None:
    bound = config.coeff_bound
    x = random_element(rng, model, D1, bound)
    zeta = _family_for(rng, model, x, D2, bound)
    i = rng.choice((1, 2))
    c0 = _scalar(rng, bound)
    c1 = _scalar(rng, bound)
    joint = zeta.joint
    d = WeilElement.generator(joint, 1)
    f = WeilElement.constant(joint, c0) + d.scale(c1)
    comps = []
    for j in joint.generators:
        g = WeilElement.generator(joint, j)
        comps.append(f * g if j == 1 + i else g)
    m = make_morphism(joint, joint, comps)
    lhs = apply(m, star(zeta, x))
    moved = apply(m, zeta.element)
    rezeta = TangentFamily(
        model,
        zeta.index_space,
        zeta.value_space,
        moved.body,
        None if model.kind == MATRIX_GROUP else moved.base,
    )
    _expect(lhs == star(rezeta, x), x=x, family=zeta, slot=i, c0=c0, c1=c1)


def _check_star_c4(model, rng, config) -> None:
    bound = config.coeff_bound
    x = random_element(rng, model, D1, bound)
    z1 = _family_for(rng, model, x, D1, bound)
    inner_star = star(z1, x)
    path = None if model.kind == MATRIX_GROUP else family_anchor(z1)
    z2 = random_family(rng, model, z1.joint, D1, bound, base_path=path)
    lhs = star(z2, inner_star)
    rhs = star(star_family(z2, z1), x)
    _expect(lhs == rhs, x=x, inner=z1, outer=z2)


def _check_family_bijection(model, rng, config) -> None:
    bound = config.coeff_bound
    if model.kind == MATRIX_GROUP:
        base = ()
        zeta = random_family(rng, model, D1, D1, bound)
    else:
        base = tuple(random_rational(rng, bound) for _ in range(model.dim))
        zeta = random_family(
            rng, model, D1, D1, bound, base_path=anchor(zero(model, base, D1))
        )
    z0 = zero(model, base, D1)
    pr = product(D1, D1)
    _expect(apply(pr.i1, zeta.element) == z0, family=zeta)
    _expect(star(zeta, z0) == zeta.element, family=zeta)
    rewrapped = TangentFamily(
        model, D1, D1, zeta.element.body, None if model.kind == MATRIX_GROUP else base
    )
    _expect(rewrapped == zeta, family=zeta)


def _check_zero_cylinder(model, rng, config) -> None:
    base = (
        ()
        if model.kind == MATRIX_GROUP
        else tuple(random_rational(rng, config.coeff_bound) for _ in range(model.dim))
    )
    z0 = zero(model, base, D1)
    flat = zero(model, base, D2)
    _expect(apply(product(D1, D1).p1, z0) == flat, base=list(base))
    _expect(star(zero_family(z0, D1), z0) == flat, base=list(base))


def _check_family_diff(model, rng, config) -> None:
    bound = config.coeff_bound
    x = random_element(rng, model, D1, bound)
    z1 = _family_for(rng, model, x, D2, bound)
    adjusted = _adjust_monomials(rng, model, z1.element, (2, 3), bound)
    z2 = TangentFamily(
        model,
        D1,
        D2,
        adjusted.body,
        None if model.kind == MATRIX_GROUP else adjusted.base,
    )
    sd = strong_diff_slot(1, z2.element, z1.element)
    diff_family = TangentFamily(
        model, D1, D1, sd.body, None if model.kind == MATRIX_GROUP else sd.base
    )
    lhs = star(diff_family, x)
    rhs = strong_diff_slot(1, star(z2, x), star(z1, x))
    _expect(lhs == rhs, x=x, first=z1, second=z2)


def _check_family_diff_precompose(model, rng, config) -> None:
    bound = config.coeff_bound
    apex = get_diagram("diff").apex
    psi1, psi2, delta = get_map("psi1"), get_map("psi2"), get_map("delta")
    zeta = random_family(rng, model, apex, D1, bound)
    if model.kind == MATRIX_GROUP:
        x, y = random_strong_diff_pair(rng, model, bound)
    else:
        path = family_pi(zeta)
        xs = apply(psi1, path)
        ys = apply(psi2, path)
        x = element_from_channels(model, D2, xs.body, xs.base)
        y = element_from_channels(model, D2, ys.body, ys.base)
    lhs = apply(get_map("twist"), star(_precompose(zeta, delta), strong_diff(y, x)))
    rhs = strong_diff_slot(
        3, star(_precompose(zeta, psi2), y), star(_precompose(zeta, psi1), x)
    )
    _expect(lhs == rhs, x=x, y=y, family=zeta)


def _check_anchor_natural(model, rng, config) -> None:
    maps = standard_maps()
    for space in (D1, D2, D3):
        x = random_element(rng, model, space, config.coeff_bound)
        for f in maps.values():
            if f.codomain != space:
                continue
            _expect(
                anchor(apply(f, x)) == apply(f, anchor(x)),
                map=f.name or "unnamed",
                x=x,
            )


def _check_anchor_hom(model, rng, config) -> None:
    x = random_element(rng, model, D1, config.coeff_bound)
    zeta = _family_for(rng, model, x, D1, config.coeff_bound)
    af = family_anchor(zeta)
    azeta = TangentFamily(af.model, zeta.index_space, zeta.value_space, af.body, af.base)
    _expect(anchor(star(zeta, x)) == star(azeta, anchor(x)), x=x, family=zeta)


def _check_kernel(model, rng, config) -> None:
    bound = config.coeff_bound
    if model.kind == MATRIX_GROUP:
        x = random_element(rng, model, D1, bound)
        y = random_element(rng, model, D1, bound)
        _expect(is_anchor_zero(add(x, y)), x=x, y=y)
        _expect(is_anchor_zero(scalar(_scalar(rng, bound), x)), x=x)
        _expect(is_anchor_zero(circledast(x, y)), x=x, y=y)
        _expect(is_anchor_zero(bracket(x, y)), x=x, y=y)
        p, q = random_strong_diff_pair(rng, model, bound)
        _expect(is_anchor_zero(strong_diff(q, p)), p=p, q=q)
        _expect(inner(model) == model)
        return
    base = tuple(random_rational(rng, bound) for _ in range(model.dim))
    x0 = zero(model, base, D1)
    sq = zero(model, base, D2)
    _expect(is_anchor_zero(add(x0, x0)), base=list(base))
    _expect(is_anchor_zero(scalar(_scalar(rng, bound), x0)), base=list(base))
    _expect(is_anchor_zero(apply(get_map("twist"), sq)), base=list(base))
    _expect(is_anchor_zero(strong_diff(sq, sq)), base=list(base))
    _expect(is_anchor_zero(circledast(x0, x0)), base=list(base))
    channels = [
        WeilElement(
            D1,
            {UNIT: b, Monomial((1,)): Fraction(1)} if i == 0 else {UNIT: b},
        )
        for i, b in enumerate(base)
    ]
    live = element_from_channels(model, D1, channels, base)
    _expect(not is_anchor_zero(live), live=live)
    try:
        AlgebroidElement(inner(model), D1, channels, base)
    except NotInKernel:
        pass
    else:
        raise PropertyFailure({"error": "inner model accepted a moving element"})
    zero(inner(model), base, D1)


# ---------------------------------------------------------------------------
# Euclidean property of the fibers
# ---------------------------------------------------------------------------


def _affine_curve(model: Model, x0: AlgebroidElement, y: AlgebroidElement):
    """The joint element of d |-> x0 + d*y, built by hand."""
    joint = product_space(D1, D1)
    d1 = WeilElement.generator(joint, 1)
    chans = []
    for cx, cy in zip(body_channels(x0), body_channels(y)):
        delta = cy - WeilElement.constant(D1, cy.augmentation)
        chans.append(lift_element(cx, joint, 1) + d1 * lift_element(delta, joint, 1))
    base = None if model.kind == MATRIX_GROUP else x0.base
    return element_from_channels(model, joint, chans, base)


def _check_euclidean(model, rng, config) -> None:
    bound = config.coeff_bound
    matrix = model.kind == MATRIX_GROUP
    base = () if matrix else tuple(random_rational(rng, bound) for _ in range(model.dim))
    kw = {} if matrix else {"base": base}
    x0 = random_element(rng, model, D1, bound, **kw)
    y = random_element(rng, model, D1, bound, **kw)
    el = _affine_curve(model, x0, y)
    phi = TangentFamily(model, D1, D1, el.body, None if matrix else base)
    _expect(family_at_zero(phi) == x0, x0=x0, y=y)
    _expect(euclid_derivative(phi) == y, x0=x0, y=y)
    if matrix:
        phi2 = random_family(rng, model, D1, D1, bound)
    else:
        phi2 = random_family(
            rng, model, D1, D1, bound, base_path=anchor(zero(model, base, D1))
        )
    rebuilt = _affine_curve(model, family_at_zero(phi2), euclid_derivative(phi2))
    _expect(rebuilt == phi2.element, curve=phi2)
    _expect(check_perceived_limit(model, get_diagram("diff")).kernel_rank == 0)


# ---------------------------------------------------------------------------
# The interchange product and the fiber bracket
# ---------------------------------------------------------------------------


def _check_interchange_assoc(model, rng, config) -> None:
    x, y, z = _fiber_triple(rng, model, config.coeff_bound)
    lhs = circledast(x, circledast(y, z))
    rhs = circledast(circledast(x, y), z)
    _expect(lhs == rhs, x=x, y=y, z=z)


def _check_interchange_diag1(model, rng, config) -> None:
    x, _, _ = _fiber_triple(rng, model, config.coeff_bound)
    sq = circledast(x, x)
    want = apply(get_map("plus"), x)
    _expect(apply(get_map("incl12"), sq) == want, x=x)
    _expect(apply(get_map("incl21"), sq) == want, x=x)


def _check_interchange_diag2(model, rng, config) -> None:
    x, y, _ = _fiber_triple(rng, model, config.coeff_bound)
    total = add(x, y)
    _expect(apply(get_map("diag"), circledast(y, x)) == total, x=x, y=y)
    _expect(apply(get_map("diag"), circledast(x, y)) == total, x=x, y=y)


def _check_commutator_window(model, rng, config) -> None:
    x, y, _ = _fiber_triple(rng, model, config.coeff_bound)
    word = circledast(circledast(circledast(y, x), y), x)
    window = apply(get_map("quadneg"), word)
    z0 = zero(model, x.base, D1)
    _expect(apply(get_map("i1"), window) == z0, x=x, y=y)
    _expect(apply(get_map("i2"), window) == z0, x=x, y=y)
    z = bracket(x, y)
    _expect(apply(get_map("mult"), z) == window, x=x, y=y, bracket=z)
    _expect(check_perceived_limit(model, get_diagram("kl")).kernel_rank == 0)


def _check_bracket_by_difference(model, rng, config) -> None:
    x, y, _ = _fiber_triple(rng, model, config.coeff_bound)
    tw = get_map("twist")
    yx = circledast(y, x)
    xy_t = apply(tw, circledast(x, y))
    incl = get_map("incl12")
    _expect(apply(incl, yx) == apply(incl, xy_t), x=x, y=y)
    _expect(bracket(x, y) == strong_diff(yx, xy_t), x=x, y=y)


def _check_antisymmetry(model, rng, config) -> None:
    x, y, _ = _fiber_triple(rng, model, config.coeff_bound)
    _expect(bracket(y, x) == negate(bracket(x, y)), x=x, y=y)
    _expect(bracket(x, x) == zero(model, x.base, D1), x=x)


def _check_translated_differences(model, rng, config) -> None:
    bound = config.coeff_bound
    y, z = random_strong_diff_pair(rng, model, bound)
    x = random_element(rng, model, D1, bound)
    lhs = strong_diff_slot(1, circledast(z, x), circledast(y, x))
    _expect(lhs == circledast(strong_diff(z, y), x), x=x, y=y, z=z)
    w = random_element(rng, model, D1, bound)
    x2, y2 = random_strong_diff_pair(rng, model, bound)
    lhs2 = apply(
        get_map("twist"),
        strong_diff_slot(3, circledast(w, y2), circledast(w, x2)),
    )
    _expect(lhs2 == circledast(w, strong_diff(y2, x2)), w=w, x=x2, y=y2)


def _permuted_cubes(x, y, z) -> dict[str, AlgebroidElement]:
    return {
        "123": circledast(z, circledast(y, x)),
        "132": apply(get_map("perm132"), circledast(y, circledast(z, x))),
        "213": apply(get_map("perm213"), circledast(z, circledast(x, y))),
        "231": apply(get_map("perm231"), circledast(x, circledast(z, y))),
        "312": apply(get_map("perm312"), circledast(y, circledast(x, z))),
        "321": apply(get_map("perm321"), circledast(x, circledast(y, z))),
    }


def _check_permuted_cubes(model, rng, config) -> None:
    x, y, z = _fiber_triple(rng, model, config.coeff_bound)
    u = _permuted_cubes(x, y, z)
    e1 = strong_diff(
        strong_diff_slot(1, u["123"], u["132"]), strong_diff_slot(1, u["231"], u["321"])
    )
    _expect(e1 == bracket(x, bracket(y, z)), x=x, y=y, z=z, expression=1)
    e2 = strong_diff(
        strong_diff_slot(2, u["231"], u["213"]), strong_diff_slot(2, u["312"], u["132"])
    )
    _expect(e2 == bracket(y, bracket(z, x)), x=x, y=y, z=z, expression=2)
    e3 = strong_diff(
        strong_diff_slot(3, u["312"], u["321"]), strong_diff_slot(3, u["123"], u["213"])
    )
    _expect(e3 == bracket(z, bracket(x, y)), x=x, y=y, z=z, expression=3)


def _check_fiber_jacobi(model, rng, config) -> None:
    x, y, z = _fiber_triple(rng, model, config.coeff_bound)
    total = add(
        add(bracket(x, bracket(y, z)), bracket(y, bracket(z, x))),
        bracket(z, bracket(x, y)),
    )
    _expect(total == zero(model, x.base, D1), x=x, y=y, z=z, total=total)


def _affine_matrix(model: Model, mat) -> AlgebroidElement:
    """The element I + d*mat over D, built entrywise by hand."""
    k = model.size
    dmono = Monomial((1,))
    rows = []
    for i in range(k):
        row = []
        for j in range(k):
            coeffs = {UNIT: Fraction(1 if i == j else 0), dmono: Fraction(mat[i][j])}
            row.append(WeilElement(D1, {m: c for m, c in coeffs.items() if c != 0}))
        rows.append(row)
    return AlgebroidElement(model, D1, rows)


def _check_bracket_oracle(model, rng, config) -> None:
    # independent route: integer matrices, commutator expanded with plain
    # rational arithmetic, compared entrywise against the solver bracket
    k = model.size
    bound = config.coeff_bound
    a = [[rng.randint(-bound, bound) for _ in range(k)] for _ in range(k)]
    b = [[rng.randint(-bound, bound) for _ in range(k)] for _ in range(k)]
    comm = [
        [
            sum((b[i][l] * a[l][j] - a[i][l] * b[l][j] for l in range(k)), 0)
            for j in range(k)
        ]
        for i in range(k)
    ]
    x, y = _affine_matrix(model, a), _affine_matrix(model, b)
    expected = _affine_matrix(model, comm)
    _expect(bracket(x, y) == expected, x=x, y=y, expected=expected)


def _check_ad_literal(model, rng, config) -> None:
    x = random_element(rng, model, D1, config.coeff_bound)
    y = random_element(rng, model, D1, config.coeff_bound)
    phi = TangentFamily(model, D1, D1, ad_conjugation(x, y).body)
    _expect(family_at_zero(phi) == y, x=x, y=y)
    got = euclid_derivative(phi)
    _expect(got == bracket(x, y), x=x, y=y, got=got, expected=bracket(x, y))


def _check_ad_reversed(model, rng, config) -> None:
    x = random_element(rng, model, D1, config.coeff_bound)
    y = random_element(rng, model, D1, config.coeff_bound)
    phi = TangentFamily(model, D1, D1, ad_conjugation(x, y).body)
    _expect(family_at_zero(phi) == y, x=x, y=y)
    got = euclid_derivative(phi)
    _expect(got == bracket(y, x), x=x, y=y, got=got, expected=bracket(y, x))


# ---------------------------------------------------------------------------
# Sections over the polynomial base
# ---------------------------------------------------------------------------


def _sections(rng, model, config, count: int = 3):
    dim = model.dim
    return tuple(
        random_section(rng, dim, config.max_degree, config.coeff_bound, model)
        for _ in range(count)
    )


def _check_sections_assoc(model, rng, config) -> None:
    x, y, z = _sections(rng, model, config)
    lhs = circledcirc(z, circledcirc(y, x))
    rhs = circledcirc(circledcirc(z, y), x)
    _expect(lhs == rhs, x=x, y=y, z=z)


def _check_sections_functor(model, rng, config) -> None:
    (x,) = _sections(rng, model, config, 1)
    _expect(section_apply(identity(D1), x) == x, x=x)
    f = get_map("mult")
    s1 = section_apply(f, x)
    for name in ("twist", "diag", "i1", "i2", "incl12"):
        g = get_map(name)
        _expect(
            section_apply(g, s1) == section_apply(compose(f, g), x), map=name, x=x
        )


def _check_sections_star_axioms(model, rng, config) -> None:
    x, y = _sections(rng, model, config, 2)
    yx = circledcirc(y, x)
    pr = product(x.space, y.space)
    _expect(section_apply(pr.i1, yx) == x, x=x, y=y)
    _expect(section_apply(pr.i2, yx) == y, x=x, y=y)
    z0 = zero_section(model.dim, model)
    pr2 = product(y.space, z0.space)
    _expect(section_apply(pr2.p1, y) == circledcirc(z0, y), y=y)
    pr3 = product(z0.space, y.space)
    _expect(section_apply(pr3.p2, y) == circledcirc(y, z0), y=y)


def _check_sections_lie(model, rng, config) -> None:
    x, y, z = _sections(rng, model, config)
    br = section_bracket(x, y)
    _expect(section_bracket(y, x) == section_negate(br), x=x, y=y)
    _expect(is_zero_section(section_bracket(x, x)), x=x)
    c = _scalar(rng, config.coeff_bound)
    _expect(
        section_bracket(scale_section(c, x), y) == scale_section(c, br), x=x, y=y, c=c
    )
    lhs = section_bracket(section_add(x, z), y)
    _expect(lhs == section_add(br, section_bracket(z, y)), x=x, y=y, z=z)
    jac = section_add(
        section_add(
            section_bracket(x, section_bracket(y, z)),
            section_bracket(y, section_bracket(z, x)),
        ),
        section_bracket(z, section_bracket(x, y)),
    )
    _expect(is_zero_section(jac), x=x, y=y, z=z)


def _check_sections_scale_inner(model, rng, config) -> None:
    x, y = _sections(rng, model, config, 2)
    f = random_poly(rng, model.dim, config.max_degree, config.coeff_bound)
    lhs = circledcirc(y, scale_section(f, x))
    rhs = Section(model, lhs.space, slot_scale(f, 1, circledcirc(y, x).element))
    _expect(lhs == rhs, x=x, y=y, f=f)


def _check_sections_scale_outer(model, rng, config) -> None:
    x, y = _sections(rng, model, config, 2)
    f = random_poly(rng, model.dim, config.max_degree, config.coeff_bound)
    yx = circledcirc(y, x).element
    lhs = strong_diff(circledcirc(scale_section(f, y), x).element, slot_scale(f, 2, yx))
    rhs = scale_section(lie_derivative(x, f), y).element
    _expect(lhs == rhs, x=x, y=y, f=f)


def _check_sections_leibniz(model, rng, config) -> None:
    x, y = _sections(rng, model, config, 2)
    f = random_poly(rng, model.dim, config.max_degree, config.coeff_bound)
    _expect(is_zero_section(leibniz_residual(x, y, f)), x=x, y=y, f=f)
    direct = section_bracket(x, scale_section(f, y))
    via = section_add(
        scale_section(f, section_bracket(x, y)),
        scale_section(lie_derivative(x, f), y),
    )
    _expect(direct == via, x=x, y=y, f=f)


def _check_section_bracket_oracle(model, rng, config) -> None:
    # independent route: the coordinate formula via exact partial derivatives
    dim = model.dim
    x, y = _sections(rng, model, config, 2)
    vx, vy = x.vector, y.vector
    expected = []
    for i in range(dim):
        acc = Poly.const(dim, 0)
        for j in range(dim):
            acc = acc + vx[j] * vy[i].partial(j + 1) - vy[j] * vx[i].partial(j + 1)
        expected.append(acc)
    got = list(section_bracket(x, y).vector)
    _expect(got == expected, x=x, y=y, got=[str(p) for p in got])


def _check_sections_anchor(model, rng, config) -> None:
    x, y = _sections(rng, model, config, 2)
    fm = formal_space(model.dim)
    br = section_bracket(x, y)
    ax = Section(fm, x.space, anchor(x.element))
    ay = Section(fm, y.space, anchor(y.element))
    _expect(
        Section(fm, br.space, anchor(br.element)) == section_bracket(ax, ay), x=x, y=y
    )


def _check_section_eval(model, rng, config) -> None:
    dim = model.dim
    (x,) = _sections(rng, model, config, 1)
    c = [random_rational(rng, config.coeff_bound) for _ in range(dim)]
    v = [random_rational(rng, config.coeff_bound) for _ in range(dim)]
    point = tuple(
        WeilElement(D1, {m: w for m, w in ((UNIT, cj), (Monomial((1,)), vj)) if w != 0})
        for cj, vj in zip(c, v)
    )
    res = eval_section(x, point)
    for chan, rchan in zip(x.element.body, res.body):
        for mono, coeff in chan.coefficients.items():
            p = coeff if isinstance(coeff, Poly) else Poly.const(dim, coeff)
            shifted = Monomial(tuple(g + 1 for g in mono.support))
            _expect(rchan.coefficient(shifted) == p.eval_fraction(c), at=mono, x=x)
            grad = sum(
                (vj * p.partial(j + 1).eval_fraction(c) for j, vj in enumerate(v)),
                Fraction(0),
            )
            mixed = Monomial((1,) + shifted.support)
            _expect(rchan.coefficient(mixed) == grad, at=mono, x=x)
    plain = eval_section(x, c)
    for chan, pchan in zip(x.element.body, plain.body):
        for mono, coeff in chan.coefficients.items():
            p = coeff if isinstance(coeff, Poly) else Poly.const(dim, coeff)
            _expect(pchan.coefficient(mono) == p.eval_fraction(c), at=mono, x=x)


# ---------------------------------------------------------------------------
# Model-level laws
# ---------------------------------------------------------------------------


def _check_functor(model, rng, config) -> None:
    bound = config.coeff_bound
    for space in (D1, D2, D3):
        x = random_element(rng, model, space, bound)
        _expect(apply(identity(space), x) == x, space=str(space), x=x)
    x = random_element(rng, model, D2, bound)
    for f_name, g_name in (("twist", "diag"), ("twist", "incl12")):
        f, g = get_map(f_name), get_map(g_name)
        _expect(
            apply(g, apply(f, x)) == apply(compose(f, g), x),
            outer=f_name,
            inner=g_name,
            x=x,
        )
    x3 = random_element(rng, model, D3, bound)
    names = list(_PERM_SIGMAS)
    p = get_map(rng.choice(names))
    q = get_map(rng.choice(names))
    _expect(apply(q, apply(p, x3)) == apply(compose(p, q), x3), x=x3)


_PERM_SIGMAS = {
    "perm132": (1, 3, 2),
    "perm213": (2, 1, 3),
    "perm231": (2, 3, 1),
    "perm312": (3, 1, 2),
    "perm321": (3, 2, 1),
}


def _check_perm_action(model, rng, config) -> None:
    x = random_element(rng, model, D3, config.coeff_bound)
    for name, sigma in _PERM_SIGMAS.items():
        p = get_map(name)
        _expect(
            list(p.components) == list(permutation(sigma).components), map=name
        )
        got = apply(p, x)
        expected_channels = []
        for chan in body_channels(x):
            out = {}
            for mono, c in chan.coefficients.items():
                image = Monomial(tuple(sorted(sigma[g - 1] for g in mono.support)))
                out[image] = c
            expected_channels.append(WeilElement(D3, out))
        expected = element_from_channels(model, D3, expected_channels, x.base)
        _expect(got == expected, map=name, x=x)


def _check_matrix_inverse(model, rng, config) -> None:
    for space in (D1, D2):
        x = random_element(rng, model, space, config.coeff_bound)
        inv = matrix_inverse(x)
        ident = zero(model, (), space)
        _expect(compose_pointwise(x, inv) == ident, x=x)
        _expect(compose_pointwise(inv, x) == ident, x=x)


def _check_roundtrip(model, rng, config) -> None:
    x = random_element(rng, model, D2, config.coeff_bound)
    back = element_from_json(json.loads(json.dumps(element_to_json(x))))
    _expect(back == x, x=x)
    zeta = random_family(rng, model, D1, D1, config.coeff_bound)
    zback = family_from_json(json.loads(json.dumps(family_to_json(zeta))))
    _expect(zback == zeta, family=zeta)
    _expect(model_from_json(model_to_json(model)) == model)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


def _build_registry() -> tuple[Property, ...]:
    entries: list[Property] = [
        Property(
            "prop-weil-dims",
            "section 2.3, Weil algebra dimensions",
            "weil-dims",
            (),
            _check_weil_dims,
            1,
        ),
        Property(
            "prop-weil-ring",
            "section 2.3, relations d_i^2 = 0 and pattern products",
            "weil-dims",
            (),
            _check_weil_ring,
        ),
        Property(
            "prop-oplus",
            "section 2.3, glued sums and products of simplicial spaces",
            "weil-dims",
            (),
            _check_oplus,
            1,
        ),
    ]
    for name in ("sum", "kl", "diff", "triple", "diff1", "diff2", "diff3"):
        entries.append(
            Property(
                f"prop-diag-{name}",
                get_diagram(name).citation,
                "diagrams",
                ALL,
                _make_diagram_checker(name),
                5,
            )
        )
    entries.append(
        Property(
            "prop-diag-broken-control",
            "synthetic misstated cocone; certification must refuse it",
            "diagrams",
            ALL,
            _check_broken_control,
            1,
        )
    )
    axioms = (
        ("add-assoc", _check_add_assoc),
        ("add-comm", _check_add_comm),
        ("add-zero", _check_add_zero),
        ("add-inverse", _check_add_inverse),
        ("scalar-one", _check_scalar_one),
        ("scalar-compose", _check_scalar_compose),
        ("scalar-add", _check_scalar_add),
        ("scalar-distrib", _check_scalar_distrib),
    )
    for slug, check in axioms:
        entries.append(
            Property(
                f"prop-tn2.1-{slug}",
                "section 3.2, Theorem n 2.1",
                "module-axioms",
                ALL,
                check,
            )
        )
    entries += [
        Property(
            "prop-tn2.2-swap",
            "section 3.2, Proposition n 2.2",
            "strong-diff",
            ALL,
            _check_swap,
        ),
        Property(
            "prop-negation",
            "section 3.2, negation rule for the strong difference",
            "strong-diff",
            ALL,
            _check_negation,
        ),
        Property(
            "prop-slot-scaling",
            "sections 3.1 and 3.2, slot scaling and its difference rule",
            "strong-diff",
            ALL,
            _check_slot_scaling,
        ),
        Property(
            "prop-lemma-quasicolimit",
            "section 3.2 Lemma",
            "strong-diff",
            ALL,
            _check_lemma_quasicolimit,
        ),
        Property(
            "prop-cocycle",
            "section 3.2, cocycle identity",
            "strong-diff",
            ALL,
            _check_cocycle,
        ),
        Property(
            "prop-tn2.3-1",
            "section 3.2, Proposition n 2.3 first display",
            "strong-diff",
            ALL,
            _make_tn23_checker(1),
        ),
        Property(
            "prop-tn2.3-2",
            "section 3.2, Proposition n 2.3 second display",
            "strong-diff",
            ALL,
            _make_tn23_checker(2),
        ),
        Property(
            "prop-tn2.3-3",
            "section 3.2, Proposition n 2.3 third display",
            "strong-diff",
            ALL,
            _make_tn23_checker(3),
        ),
        Property(
            "prop-tn2.4",
            "section 3.2, Theorem n 2.4",
            "jacobi-general",
            ALL,
            _check_general_jacobi,
        ),
        Property(
            "prop-d2.4-c1",
            "section 3.4, Definition 2.4 condition 1",
            "star-axioms",
            ALL,
            _check_star_c1,
        ),
        Property(
            "prop-d2.4-c2",
            "section 3.4, Definition 2.4 condition 2",
            "star-axioms",
            ALL,
            _check_star_c2,
        ),
        Property(
            "prop-d2.4-c3",
            "section 3.4, Definition 2.4 condition 3",
            "star-axioms",
            ALL,
            _check_star_c3,
        ),
        Property(
            "prop-d2.4-c4",
            "section 3.4, Definition 2.4 condition 4",
            "star-axioms",
            ALL,
            _check_star_c4,
        ),
        Property(
            "prop-t2.4.2",
            "section 3.4, families as elements over the product",
            "star-axioms",
            ALL,
            _check_family_bijection,
        ),
        Property(
            "prop-l2.1",
            "section 3.4, Lemma 2.1",
            "star-axioms",
            ALL,
            _check_zero_cylinder,
        ),
        Property(
            "prop-t2.6-1",
            "section 3.4, Proposition 2.6 first part",
            "star-axioms",
            ALL,
            _check_family_diff,
        ),
        Property(
            "prop-t2.6-2",
            "section 3.4, Proposition 2.6 second part",
            "star-axioms",
            ALL,
            _check_family_diff_precompose,
        ),
        Property(
            "prop-anchor-natural",
            "section 3.3, anchor is a natural transformation",
            "star-axioms",
            ALL,
            _check_anchor_natural,
        ),
        Property(
            "prop-anchor-hom",
            "section 3.5, anchor respects the star action",
            "star-axioms",
            ALL,
            _check_anchor_hom,
        ),
        Property(
            "prop-kernel",
            "section 3.5, anchor kernel is closed under the operations",
            "star-axioms",
            ALL,
            _check_kernel,
        ),
        Property(
            "prop-t2.4.3",
            "section 3.4, Theorem 2.4.3 Euclidean module property",
            "euclidean",
            ALL,
            _check_euclidean,
        ),
        Property(
            "prop-circledast-assoc",
            "section 4, associativity of the interchange product",
            "bracket-matrix",
            MAT,
            _check_interchange_assoc,
        ),
        Property(
            "prop-tr1",
            "section 4, Proposition 1",
            "bracket-matrix",
            MAT,
            _check_interchange_diag1,
        ),
        Property(
            "prop-tr2",
            "section 4, Proposition 2",
            "bracket-matrix",
            MAT,
            _check_interchange_diag2,
        ),
        Property(
            "prop-tr3",
            "section 4, Proposition 3",
            "bracket-matrix",
            MAT,
            _check_commutator_window,
        ),
        Property(
            "prop-tr4",
            "section 4, Proposition 4",
            "bracket-matrix",
            MAT,
            _check_bracket_by_difference,
        ),
        Property(
            "prop-tr5",
            "section 4, Proposition 5",
            "bracket-matrix",
            MAT,
            _check_antisymmetry,
        ),
        Property(
            "prop-star-diff",
            "section 4, strong differences of translated squares",
            "bracket-matrix",
            MAT,
            _check_translated_differences,
        ),
        Property(
            "prop-u123",
            "section 4, the six permuted cubes proposition",
            "bracket-matrix",
            MAT,
            _check_permuted_cubes,
        ),
        Property(
            "prop-jacobi-bracket",
            "section 4, Jacobi identity theorem",
            "bracket-matrix",
            MAT,
            _check_fiber_jacobi,
        ),
        Property(
            "prop-bracket-oracle",
            "section 4, commutator expansion cross-check (independent oracle)",
            "bracket-matrix",
            MAT,
            _check_bracket_oracle,
            20,
        ),
        Property(
            "prop-ad-conjugation-literal",
            "section 3.6, condition 2 as printed",
            "ad-conjugation",
            MAT,
            _check_ad_literal,
        ),
        Property(
            "prop-ad-conjugation-reversed",
            "section 3.6, condition 2 with the bracket arguments exchanged",
            "ad-conjugation",
            MAT,
            _check_ad_reversed,
        ),
        Property(
            "prop-lt1",
            "section 5, Proposition 1",
            "sections",
            BASED,
            _check_sections_assoc,
        ),
        Property(
            "prop-lt2",
            "section 5, Proposition 2",
            "sections",
            BASED,
            _check_sections_functor,
        ),
        Property(
            "prop-lt3",
            "section 5, Proposition 3",
            "sections",
            BASED,
            _check_sections_star_axioms,
        ),
        Property(
            "prop-lt4",
            "section 5, Theorem 4",
            "sections",
            BASED,
            _check_sections_lie,
            4,
        ),
        Property(
            "prop-lt5",
            "section 5, Proposition 5",
            "sections",
            BASED,
            _check_sections_scale_inner,
        ),
        Property(
            "prop-lt6",
            "section 5, Proposition 6",
            "sections",
            BASED,
            _check_sections_scale_outer,
        ),
        Property(
            "prop-lt7",
            "section 5, Proposition 7",
            "sections",
            BASED,
            _check_sections_leibniz,
            4,
        ),
        Property(
            "prop-section-bracket-oracle",
            "section 5, coordinate formula for the bracket (independent oracle)",
            "sections",
            BASED,
            _check_section_bracket_oracle,
            10,
        ),
        Property(
            "prop-lie-algebroid",
            "section 5, closing Lie algebroid theorem",
            "sections",
            BASED,
            _check_sections_anchor,
            4,
        ),
        Property(
            "prop-eval-taylor",
            "section 5, polynomial sections under Weil-point evaluation (derived)",
            "sections",
            BASED,
            _check_section_eval,
        ),
        Property(
            "prop-functor",
            "section 3.1, restriction is contravariant and unital",
            "models-laws",
            ALL,
            _check_functor,
        ),
        Property(
            "prop-perm-action",
            "section 3.1, permutation action on microcubes",
            "models-laws",
            ALL,
            _check_perm_action,
        ),
        Property(
            "prop-matrix-inverse",
            "matrix model, Neumann inverse (derived)",
            "models-laws",
            MAT,
            _check_matrix_inverse,
        ),
        Property(
            "prop-model-roundtrip",
            "serialization round trip (artifact)",
            "models-laws",
            ALL,
            _check_roundtrip,
        ),
    ]
    return tuple(entries)


REGISTRY: tuple[Property, ...] = _build_registry()

SUITES: tuple[str, ...] = tuple(sorted({p.suite for p in REGISTRY}))

# Every in-scope claim must be matched by at least one registered property id.
REQUIRED_COVERAGE: dict[str, tuple[str, ...]] = {
    "simplicial spaces and Weil algebras": ("prop-weil-dims", "prop-weil-ring"),
    "glued sum construction": ("prop-oplus",),
    "restriction functor": ("prop-functor",),
    "zero elements": ("prop-tn2.1-add-zero", "prop-l2.1"),
    "permutation action": ("prop-perm-action",),
    "slot scaling": ("prop-slot-scaling",),
    "quasi-colimit catalog": ("prop-diag-",),
    "module structure theorem": ("prop-tn2.1-",),
    "swap proposition": ("prop-tn2.2-swap",),
    "negation rule": ("prop-negation",),
    "triple quasi-colimit lemma": ("prop-lemma-quasicolimit",),
    "cocycle identity": ("prop-cocycle",),
    "nine slotwise identities": ("prop-tn2.3-",),
    "general Jacobi theorem": ("prop-tn2.4",),
    "anchor naturality": ("prop-anchor-natural",),
    "star axioms": ("prop-d2.4-c1", "prop-d2.4-c2", "prop-d2.4-c3", "prop-d2.4-c4"),
    "families as product elements": ("prop-t2.4.2",),
    "zero cylinder lemma": ("prop-l2.1",),
    "Euclidean module theorem": ("prop-t2.4.3",),
    "family difference proposition": ("prop-t2.6-1", "prop-t2.6-2"),
    "anchor homomorphism": ("prop-anchor-hom",),
    "kernel and inner subalgebroid": ("prop-kernel",),
    "conjugation condition": ("prop-ad-conjugation-",),
    "interchange product": ("prop-circledast-assoc",),
    "interchange propositions": ("prop-tr1", "prop-tr2", "prop-tr3", "prop-tr4", "prop-tr5"),
    "translated difference proposition": ("prop-star-diff",),
    "six permuted cubes": ("prop-u123",),
    "fiber Jacobi theorem": ("prop-jacobi-bracket",),
    "section propositions": (
        "prop-lt1",
        "prop-lt2",
        "prop-lt3",
        "prop-lt4",
        "prop-lt5",
        "prop-lt6",
        "prop-lt7",
    ),
    "closing Lie algebroid theorem": ("prop-lie-algebroid",),
}


def registry_gaps() -> list[str]:
    """Required claims with no matching registered property."""
    ids = [p.property_id for p in REGISTRY]
    missing = []
    for claim, prefixes in REQUIRED_COVERAGE.items():
        for prefix in prefixes:
            if not any(i == prefix or i.startswith(prefix) for i in ids):
                missing.append(f"{claim}: {prefix}")
    return missing
