"""Diagram-certified operations on algebroid elements.

Everything here reduces to one mechanism: a finite diagram of simplicial
spaces whose restriction maps, stacked into a single exact matrix, are
certified to be jointly injective and to reach every compatible family of
values.  Solving against that matrix yields the element at the apex, and
the classical operations (addition, strong differences, the bracket, the
derivative of a curve of tangents) are corner restrictions of such
solutions.

Certificates are computed once per (model, diagram) pair and cached;
concurrent callers never observe a partially built certificate.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .catalog import DiagramSpec, get_diagram, get_map
from .errors import (
    BadSlot,
    DimensionMismatch,
    Incompatible,
    NotInKernel,
    NotPerceivedLimit,
    SpaceMismatch,
    WrongModel,
)
from .linalg import Matrix, mat_vec, nullspace, rank, rref
from .models import (
    AlgebroidElement,
    Model,
    TangentFamily,
    apply,
    body_channels,
    const_family,
    element_from_channels,
    family_at_zero,
    is_anchor_zero,
    star,
    zero,
)
from .morphisms import pullback, scale_slot_morphism
from .spaces import WeilElement, basis, d_power, dimension, element_to_vector


@dataclass(frozen=True)
class _Factorization:
    """Model-independent linear data of a diagram, shared by all certificates."""

    stacked: Matrix
    rref_matrix: Matrix
    transform: Matrix
    pivots: tuple[int, ...]
    total_rows: int
    compat_rank: int
    compatible_basis: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class LimitCertificate:
    """Witness that a model perceives a diagram as a limit.

    ``kernel_rank`` counts apex directions invisible to the legs;
    ``image_rank`` is the dimension of the solvable families and
    ``compat_rank`` the dimension of the compatible ones.  The diagram is a
    perceived limit exactly when nothing is invisible and every compatible
    family is solvable.
    """

    model: Model
    diagram: DiagramSpec
    stacked: Matrix
    kernel_rank: int
    image_rank: int
    compat_rank: int
    compatible_basis: tuple[tuple[Fraction, ...], ...]

    @property
    def is_perceived_limit(self) -> bool:
        return self.kernel_rank == 0 and self.image_rank == self.compat_rank


_lock = threading.Lock()
_factorizations: dict[DiagramSpec, _Factorization] = {}
_certificates: dict[tuple[str, DiagramSpec], LimitCertificate] = {}


def _build_factorization(diagram: DiagramSpec) -> _Factorization:
    apex_dim = dimension(diagram.apex)
    blocks = [pullback(leg).matrix for leg in diagram.legs]
    stacked: Matrix = [row for block in blocks for row in block]
    total = len(stacked)
    r, t, pivots = rref(stacked) if stacked else ([], [], [])

    offsets: list[int] = []
    at = 0
    for leg in diagram.legs:
        offsets.append(at)
        at += dimension(leg.domain)

    constraints: Matrix = []
    for rel in diagram.relations:
        pu = pullback(rel.u).matrix
        pv = pullback(rel.v).matrix
        for ru, rv in zip(pu, pv):
            row = [Fraction(0)] * total
            for c, entry in enumerate(ru):
                row[offsets[rel.i] + c] += entry
            for c, entry in enumerate(rv):
                row[offsets[rel.j] + c] -= entry
            constraints.append(row)
    if constraints:
        compat_rank = total - rank(constraints)
        basis = tuple(tuple(v) for v in nullspace(constraints))
        # solvable families are automatically compatible; the catalog already
        # validated the relation identities, this guards the stacking itself
        for crow in constraints:
            for col in range(apex_dim):
                if sum(crow[t] * stacked[t][col] for t in range(total)) != 0:
                    raise AssertionError(f"diagram {diagram.name}: relations do not annihilate the legs")
    else:
        compat_rank = total
        basis = tuple(
            tuple(Fraction(1) if i == j else Fraction(0) for j in range(total))
            for i in range(total)
        )
    return _Factorization(stacked, r, t, tuple(pivots), total, compat_rank, basis)


def _factorization(diagram: DiagramSpec) -> _Factorization:
    with _lock:
        fac = _factorizations.get(diagram)
        if fac is None:
            fac = _build_factorization(diagram)
            _factorizations[diagram] = fac
        return fac


def check_perceived_limit(model: Model, diagram: DiagramSpec) -> LimitCertificate:
    """Certify existence and uniqueness of apex elements for all compatible values."""
    key = (model.label, diagram)
    with _lock:
        cert = _certificates.get(key)
    if cert is not None:
        return cert
    fac = _factorization(diagram)
    apex_dim = dimension(diagram.apex)
    cert = LimitCertificate(
        model=model,
        diagram=diagram,
        stacked=fac.stacked,
        kernel_rank=apex_dim - len(fac.pivots),
        image_rank=len(fac.pivots),
        compat_rank=fac.compat_rank,
        compatible_basis=fac.compatible_basis,
    )
    with _lock:
        _certificates.setdefault(key, cert)
        return _certificates[key]


def solve_limit(
    model: Model, diagram: DiagramSpec, values: Sequence[AlgebroidElement]
) -> AlgebroidElement:
    """The unique apex element restricting to the given values on every leg."""
    if len(values) != len(diagram.legs):
        raise DimensionMismatch(
            f"diagram {diagram.name} has {len(diagram.legs)} legs, got {len(values)} values"
        )
    for v in values:
        if v.model != model:
            raise WrongModel("all values must belong to the stated model")
    for v, leg in zip(values, diagram.legs):
        if v.space != leg.domain:
            raise SpaceMismatch(f"value over {v.space} fed to a leg over {leg.domain}")
    if not values:
        base = () if model.kind == "matrix-group" else (Fraction(0),) * model.dim
        return zero(model, base, diagram.apex)
    base = values[0].base
    if any(v.base != base for v in values[1:]):
        raise Incompatible("values sit at different base points")
    cert = check_perceived_limit(model, diagram)
    if not cert.is_perceived_limit:
        raise NotPerceivedLimit(f"diagram {diagram.name} is not a perceived limit in {model.label}")
    fac = _factorization(diagram)
    apex_dim = dimension(diagram.apex)
    n_pivots = len(fac.pivots)
    channels = []
    per_value = [body_channels(v) for v in values]
    for c in range(model.channels):
        rhs: list[Any] = []
        for chans in per_value:
            rhs.extend(element_to_vector(chans[c]))
        reduced = mat_vec(fac.transform, rhs)
        for row in range(n_pivots, len(reduced)):
            if reduced[row] != 0:
                raise Incompatible(
                    f"values violate the compatibility relations of diagram {diagram.name}"
                )
        coords: list[Any] = [Fraction(0)] * apex_dim
        for row, p in enumerate(fac.pivots):
            coords[p] = reduced[row]
        channels.append(
            WeilElement(
                diagram.apex,
                {mono: coords[i] for i, mono in enumerate(basis(diagram.apex))},
            )
        )
    return element_from_channels(model, diagram.apex, channels, base)


# ---------------------------------------------------------------------------
# Module structure on single-generator fibers
# ---------------------------------------------------------------------------


def add(x: AlgebroidElement, y: AlgebroidElement) -> AlgebroidElement:
    """Fiberwise sum: solve the two-leg sum diagram, then restrict to the diagonal."""
    z = solve_limit(x.model, get_diagram("sum"), [x, y])
    return apply(get_map("diag-sum"), z)


def scalar(a, x: AlgebroidElement) -> AlgebroidElement:
    if x.space.num_generators != 1:
        raise SpaceMismatch("scalar multiplication acts on single-generator elements")
    return apply(scale_slot_morphism(x.space, 1, Fraction(a)), x)


def negate(x: AlgebroidElement) -> AlgebroidElement:
    return scalar(Fraction(-1), x)


def slot_scale(a, i: int, x: AlgebroidElement) -> AlgebroidElement:
    """Scale the i-th infinitesimal slot by a; a may be any coefficient-ring value."""
    n = x.space.num_generators
    if not 1 <= i <= n:
        raise BadSlot(f"slot {i} outside 1..{n}")
    out = []
    for chan in body_channels(x):
        out.append(
            WeilElement(
                chan.space,
                {m: (c * a if i in m.support else c) for m, c in chan.coefficients.items()},
            )
        )
    return element_from_channels(x.model, x.space, out, x.base)


# ---------------------------------------------------------------------------
# Strong differences
# ---------------------------------------------------------------------------


def strong_diff(y: AlgebroidElement, x: AlgebroidElement) -> AlgebroidElement:
    """The difference of two squares agreeing off the top corner; lands in the fiber."""
    if x.space != d_power(2) or y.space != d_power(2):
        raise SpaceMismatch("strong difference is defined on elements over D^2")
    incl = get_map("incl12")
    if apply(incl, x) != apply(incl, y):
        raise Incompatible("arguments disagree away from the top corner")
    z = solve_limit(x.model, get_diagram("diff"), [x, y])
    return apply(get_map("delta"), z)


_SLOT_DIAGRAMS = {
    1: ("diff1", "cube23", "kappa1"),
    2: ("diff2", "cube13", "kappa2"),
    3: ("diff3", "cube12", "kappa3"),
}


def strong_diff_slot(i: int, y: AlgebroidElement, x: AlgebroidElement) -> AlgebroidElement:
    """Slotwise strong difference on cubes; the result forgets the chosen slot."""
    if i not in _SLOT_DIAGRAMS:
        raise BadSlot(f"slot {i} must be 1, 2 or 3")
    if x.space != d_power(3) or y.space != d_power(3):
        raise SpaceMismatch("slotwise strong difference is defined on elements over D^3")
    diagram_name, agreement, corner = _SLOT_DIAGRAMS[i]
    agree = get_map(agreement)
    if apply(agree, x) != apply(agree, y):
        raise Incompatible(f"arguments disagree under {agreement}")
    z = solve_limit(x.model, get_diagram(diagram_name), [x, y])
    return apply(get_map(corner), z)


# ---------------------------------------------------------------------------
# Interchange product and bracket
# ---------------------------------------------------------------------------


def circledast(x: AlgebroidElement, y: AlgebroidElement) -> AlgebroidElement:
    """Translate x along y: star of the constant family at x against y.

    The result lives over y's slot first, then x's.  Outside the matrix
    model this requires y to be killed by the anchor at x's base point.
    """
    if x.model != y.model:
        raise WrongModel("operands belong to different models")
    return star(const_family(x, y.space), y)


def bracket(x: AlgebroidElement, y: AlgebroidElement) -> AlgebroidElement:
    """Fiber bracket via the group-commutator word and the quotient solve."""
    if x.model != y.model:
        raise WrongModel("operands belong to different models")
    if x.space != d_power(1) or y.space != d_power(1):
        raise SpaceMismatch("bracket is defined on fiber elements over D")
    if x.base != y.base:
        raise Incompatible("bracket needs a common base point")
    if not (is_anchor_zero(x) and is_anchor_zero(y)):
        raise NotInKernel("bracket requires anchor-killed arguments")
    word = circledast(circledast(circledast(y, x), y), x)
    window = apply(get_map("quadneg"), word)
    return _bracket_from_window(window)


def _bracket_from_window(window: AlgebroidElement) -> AlgebroidElement:
    """Check the commutator window is second order, then divide by d1*d2."""
    z0 = zero(window.model, window.base, d_power(1))
    if apply(get_map("i1"), window) != z0 or apply(get_map("i2"), window) != z0:
        raise Incompatible("window restrictions do not vanish")
    return solve_limit(window.model, get_diagram("kl"), [window])


# ---------------------------------------------------------------------------
# Euclidean derivative
# ---------------------------------------------------------------------------


def euclid_derivative(phi: TangentFamily) -> AlgebroidElement:
    """The unique y with phi(d) = phi(0) + d*y, for a curve of fiber elements."""
    if phi.index_space != d_power(1) or phi.value_space != d_power(1):
        raise SpaceMismatch("derivative takes a D-indexed family of fiber elements")
    model = phi.model
    base = phi.base
    x0 = family_at_zero(phi)
    start = apply(phi._prod.p2, x0)
    moved = star(phi, zero(model, base, phi.index_space))
    return strong_diff(moved, start)
