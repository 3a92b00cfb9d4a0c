"""Concrete algebroid models with exact coordinate realizations.

Three families are provided.  ``formal-space N`` is the standard model on
formal N-space: an element over a space D is an N-tuple of Weil elements,
thought of as a D-shaped cluster of points near its base point, and the
anchor is the identity.  ``pair-groupoid N`` realizes the arrow groupoid
M x M over the same base in second-leg form: an element is the family of
arrows from the base point to a moving target, so its coordinates agree
with the standard model while composition (star) becomes honest arrow
composition guarded by a middle-leg match.  ``matrix-group k`` is a formal
group of k x k matrices over a one-point base: bodies are identity-based
matrices of Weil elements, the anchor is trivial, and conjugation is
available.

All operations are pure and exact; nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .errors import (
    BaseIncompatible,
    ConfigInvalid,
    DimensionMismatch,
    NotInKernel,
    SpaceMismatch,
    WrongModel,
)
from .morphisms import SimpMorphism, product, pullback
from .spaces import (
    UNIT,
    SimplicialSpace,
    WeilElement,
    element_from_vector,
    element_to_vector,
    format_space,
    parse_space,
    product_space,
    weil_from_json,
    weil_to_json,
)

FORMAL_SPACE = "formal-space"
PAIR_GROUPOID = "pair-groupoid"
MATRIX_GROUP = "matrix-group"


@dataclass(frozen=True)
class Model:
    """Immutable model descriptor; all structure is derived from it."""

    kind: str
    dim: int = 0
    size: int = 0
    inner_only: bool = False

    @property
    def label(self) -> str:
        core = f"{self.kind}-{self.size if self.kind == MATRIX_GROUP else self.dim}"
        return core + ("-inner" if self.inner_only else "")

    @property
    def base_dim(self) -> int:
        return 0 if self.kind == MATRIX_GROUP else self.dim

    @property
    def channels(self) -> int:
        """Number of independent Weil-element slots in a body."""
        return self.size * self.size if self.kind == MATRIX_GROUP else self.dim


def formal_space(dim: int) -> Model:
    if dim < 0:
        raise ConfigInvalid("formal-space dimension must be nonnegative")
    return Model(FORMAL_SPACE, dim=dim)


def pair_groupoid(dim: int) -> Model:
    if dim < 1:
        raise ConfigInvalid("pair-groupoid dimension must be positive")
    return Model(PAIR_GROUPOID, dim=dim)


def matrix_group(size: int) -> Model:
    if size < 1:
        raise ConfigInvalid("matrix-group size must be positive")
    return Model(MATRIX_GROUP, size=size)


def inner(model: Model) -> Model:
    """Restrict to the anchor kernel fiberwise.

    For the matrix group the anchor is trivial, so nothing changes; for the
    other models only degenerate (constant-body) elements remain.
    """
    if model.kind == MATRIX_GROUP:
        return model
    return replace(model, inner_only=True)


def model_from_json(data: Mapping[str, Any]) -> Model:
    if not isinstance(data, Mapping) or "kind" not in data:
        raise ConfigInvalid("model config must be an object with a 'kind' key")
    kind = data["kind"]
    if kind in (FORMAL_SPACE, PAIR_GROUPOID):
        extra = set(data) - {"kind", "dim"}
        if extra:
            raise ConfigInvalid(f"unexpected model keys {sorted(extra)}")
        dim = data.get("dim")
        if not isinstance(dim, int) or dim < 1:
            raise ConfigInvalid(f"{kind} requires an integer 'dim' >= 1")
        return Model(kind, dim=dim)
    if kind == MATRIX_GROUP:
        extra = set(data) - {"kind", "size"}
        if extra:
            raise ConfigInvalid(f"unexpected model keys {sorted(extra)}")
        size = data.get("size")
        if not isinstance(size, int) or size < 1:
            raise ConfigInvalid("matrix-group requires an integer 'size' >= 1")
        return Model(kind, size=size)
    raise ConfigInvalid(f"unknown model kind {kind!r}")


def model_to_json(model: Model) -> dict[str, Any]:
    if model.kind == MATRIX_GROUP:
        return {"kind": model.kind, "size": model.size}
    return {"kind": model.kind, "dim": model.dim}


def _is_constant(w: WeilElement) -> bool:
    return all(mono == UNIT for mono in w.coefficients)


class AlgebroidElement:
    """A model element over a simplicial space.

    The body is an N-tuple of Weil elements (formal space and pair
    groupoid) or a k x k matrix of them (matrix group).  The base point is
    the augmentation of the body; for the matrix group it is forced to be
    the identity matrix and recorded as the empty tuple.
    """

    __slots__ = ("model", "space", "base", "body")

    def __init__(
        self,
        model: Model,
        space: SimplicialSpace,
        body: Sequence[Any],
        base: Sequence[Any] | None = None,
    ):
        self.model = model
        self.space = space
        if model.kind == MATRIX_GROUP:
            k = model.size
            rows = tuple(tuple(row) for row in body)
            if len(rows) != k or any(len(row) != k for row in rows):
                raise DimensionMismatch(f"matrix body must be {k}x{k}")
            for row in rows:
                for entry in row:
                    if not isinstance(entry, WeilElement) or entry.space != space:
                        raise SpaceMismatch(f"matrix entries must live over {space}")
            for i in range(k):
                for j in range(k):
                    if rows[i][j].augmentation != (1 if i == j else 0):
                        raise BaseIncompatible("matrix body must sit at the identity")
            if base not in (None, ()):
                raise BaseIncompatible("matrix-group base points carry no coordinates")
            self.base = ()
            self.body = rows
        else:
            coords = tuple(body)
            if len(coords) != model.dim:
                raise DimensionMismatch(f"expected {model.dim} coordinates, got {len(coords)}")
            for entry in coords:
                if not isinstance(entry, WeilElement) or entry.space != space:
                    raise SpaceMismatch(f"coordinates must live over {space}")
            augs = tuple(entry.augmentation for entry in coords)
            if base is None:
                base = augs
            elif tuple(base) != augs:
                raise BaseIncompatible("body augmentations disagree with the declared base")
            if model.inner_only and not all(_is_constant(entry) for entry in coords):
                raise NotInKernel("inner model admits only degenerate elements")
            self.base = tuple(base)
            self.body = coords

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebroidElement):
            return NotImplemented
        return (
            self.model == other.model
            and self.space == other.space
            and self.body == other.body
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"AlgebroidElement({self.model.label}, {self.space}, {self._body_str()})"

    def _body_str(self) -> str:
        if self.model.kind == MATRIX_GROUP:
            return "[" + "; ".join(", ".join(str(e) for e in row) for row in self.body) + "]"
        return "(" + ", ".join(str(e) for e in self.body) + ")"

    __str__ = __repr__


def body_channels(x: AlgebroidElement) -> list[WeilElement]:
    """Flatten the body into independent Weil-element slots."""
    if x.model.kind == MATRIX_GROUP:
        return [entry for row in x.body for entry in row]
    return list(x.body)


def element_from_channels(
    model: Model,
    space: SimplicialSpace,
    channels: Sequence[WeilElement],
    base: Sequence[Any] | None = None,
) -> AlgebroidElement:
    if model.kind == MATRIX_GROUP:
        k = model.size
        if len(channels) != k * k:
            raise DimensionMismatch(f"expected {k * k} channels")
        rows = tuple(tuple(channels[i * k + j] for j in range(k)) for i in range(k))
        return AlgebroidElement(model, space, rows)
    return AlgebroidElement(model, space, tuple(channels), base)


def zero(model: Model, base: Sequence[Any] = (), space: SimplicialSpace | None = None) -> AlgebroidElement:
    """The degenerate element at a base point: constant body, identity matrix."""
    if space is None:
        raise ValueError("a target space is required")
    if model.kind == MATRIX_GROUP:
        body = _identity_body(space, model.size)
        return AlgebroidElement(model, space, body)
    base = tuple(base)
    if len(base) != model.dim:
        raise DimensionMismatch(f"base point needs {model.dim} coordinates")
    coords = tuple(WeilElement.constant(space, b) for b in base)
    return AlgebroidElement(model, space, coords, base)


def apply(f: SimpMorphism, x: AlgebroidElement) -> AlgebroidElement:
    """Restriction along f; contravariant, base-preserving."""
    if x.space != f.codomain:
        raise SpaceMismatch(f"element over {x.space} cannot restrict along a map into {f.codomain}")
    P = pullback(f)
    out = [
        element_from_vector(f.domain, P.apply_vec(element_to_vector(chan)))
        for chan in body_channels(x)
    ]
    return element_from_channels(x.model, f.domain, out, x.base)


def anchor(x: AlgebroidElement) -> AlgebroidElement:
    """Project to the tangent of the base, landing in the formal-space model."""
    if x.model.kind == MATRIX_GROUP:
        return AlgebroidElement(formal_space(0), x.space, (), ())
    return AlgebroidElement(formal_space(x.model.dim), x.space, x.body, x.base)


def is_anchor_zero(x: AlgebroidElement) -> bool:
    if x.model.kind == MATRIX_GROUP:
        return True
    return all(_is_constant(entry) for entry in x.body)


def is_inner_element(x: AlgebroidElement) -> bool:
    """Membership in the fiberwise anchor kernel."""
    return is_anchor_zero(x)


class TangentFamily:
    """A family of elements over a value space, parametrized by an index space.

    Stored as one element over the product of both spaces, index block
    first.  For the matrix group, setting the value block to zero must give
    the identity: each member of the family is a genuine group element near
    the identity.
    """

    __slots__ = ("index_space", "value_space", "element", "_prod")

    def __init__(
        self,
        model: Model,
        index_space: SimplicialSpace,
        value_space: SimplicialSpace,
        body: Sequence[Any],
        base: Sequence[Any] | None = None,
    ):
        self._prod = product(index_space, value_space)
        self.index_space = index_space
        self.value_space = value_space
        self.element = AlgebroidElement(model, self._prod.space, body, base)
        if model.kind == MATRIX_GROUP:
            at_value_zero = apply(self._prod.i1, self.element)
            if at_value_zero != zero(model, (), index_space):
                raise BaseIncompatible("family members must pass through the identity")

    @property
    def model(self) -> Model:
        return self.element.model

    @property
    def joint(self) -> SimplicialSpace:
        return self._prod.space

    @property
    def body(self):
        return self.element.body

    @property
    def base(self):
        return self.element.base

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TangentFamily):
            return NotImplemented
        return (
            self.index_space == other.index_space
            and self.value_space == other.value_space
            and self.element == other.element
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"TangentFamily({self.model.label}, index={self.index_space}, "
            f"value={self.value_space}, {self.element._body_str()})"
        )


def family_pi(zeta: TangentFamily) -> AlgebroidElement:
    """The base path: project each member to its base point."""
    restricted = apply(zeta._prod.i1, zeta.element)
    if zeta.model.kind == MATRIX_GROUP:
        return AlgebroidElement(formal_space(0), zeta.index_space, (), ())
    return AlgebroidElement(formal_space(zeta.model.dim), zeta.index_space, restricted.body)


def family_anchor(zeta: TangentFamily) -> AlgebroidElement:
    """Apply the anchor memberwise; an element of the standard model over the joint space."""
    if zeta.model.kind == MATRIX_GROUP:
        return AlgebroidElement(formal_space(0), zeta.joint, (), ())
    return AlgebroidElement(formal_space(zeta.model.dim), zeta.joint, zeta.element.body)


def family_at_zero(zeta: TangentFamily) -> AlgebroidElement:
    """Evaluate the family at index 0."""
    return apply(zeta._prod.i2, zeta.element)


def const_family(x: AlgebroidElement, index_space: SimplicialSpace) -> TangentFamily:
    """The family constantly equal to x."""
    prod = product(index_space, x.space)
    lifted = apply(prod.p2, x)
    return TangentFamily(x.model, index_space, x.space, lifted.body)


def zero_family(y: AlgebroidElement, value_space: SimplicialSpace) -> TangentFamily:
    """Degenerate members along the anchor path of y.

    At each index point the member is the zero element sitting at the
    corresponding point of y's anchor path.
    """
    model = y.model
    if model.kind == MATRIX_GROUP:
        joint = product_space(y.space, value_space)
        return TangentFamily(model, y.space, value_space, _identity_body(joint, model.size))
    prod = product(y.space, value_space)
    lifted = apply(prod.p1, anchor(y))
    return TangentFamily(model, y.space, value_space, lifted.body, y.base)


def star(zeta: TangentFamily, x: AlgebroidElement) -> AlgebroidElement:
    """Translate x along the family; the result lives over the joint space.

    Pair groupoid: arrow composition zeta(d1)(d2) after x(d1), legal only
    when sources match targets, which is exactly the base-path condition.
    Matrix group: the literal matrix product.
    """
    if zeta.model != x.model:
        raise WrongModel("family and element belong to different models")
    if x.space != zeta.index_space:
        raise SpaceMismatch(f"element over {x.space} does not match index space {zeta.index_space}")
    if x.model.kind == MATRIX_GROUP:
        lifted = apply(zeta._prod.p1, x)
        return AlgebroidElement(x.model, zeta.joint, _matmul(zeta.element.body, lifted.body))
    if anchor(x) != family_pi(zeta):
        raise BaseIncompatible("family base path disagrees with the element's anchor")
    return AlgebroidElement(x.model, zeta.joint, zeta.element.body, x.base)


def star_family(zeta2: TangentFamily, zeta1: TangentFamily) -> TangentFamily:
    """Translate a whole family along a second family indexed by its joint space."""
    if zeta2.model != zeta1.model:
        raise WrongModel("families belong to different models")
    if zeta2.index_space != zeta1.joint:
        raise SpaceMismatch("outer family must be indexed by the inner family's joint space")
    value = product_space(zeta1.value_space, zeta2.value_space)
    model = zeta1.model
    if model.kind == MATRIX_GROUP:
        lifted = apply(zeta2._prod.p1, zeta1.element)
        body = _matmul(zeta2.element.body, lifted.body)
        return TangentFamily(model, zeta1.index_space, value, body)
    if family_pi(zeta2) != family_anchor(zeta1):
        raise BaseIncompatible("outer family base path disagrees with the inner family")
    return TangentFamily(model, zeta1.index_space, value, zeta2.element.body, zeta1.base)


def compose_pointwise(a: AlgebroidElement, b: AlgebroidElement) -> AlgebroidElement:
    """Groupoid composition applied pointwise over a shared space.

    Formal space and pair groupoid compose translations, so this is
    addition relative to the common base; the matrix group multiplies.
    """
    if a.model != b.model:
        raise WrongModel("elements belong to different models")
    if a.space != b.space:
        raise SpaceMismatch("pointwise composition needs a shared space")
    if a.model.kind == MATRIX_GROUP:
        return AlgebroidElement(a.model, a.space, _matmul(a.body, b.body))
    if a.base != b.base:
        raise BaseIncompatible("pointwise composition needs a shared base point")
    coords = tuple(
        ca + cb - WeilElement.constant(a.space, m) for ca, cb, m in zip(a.body, b.body, a.base)
    )
    return AlgebroidElement(a.model, a.space, coords, a.base)


# ---------------------------------------------------------------------------
# Matrix-group arithmetic
# ---------------------------------------------------------------------------


def _identity_body(space: SimplicialSpace, k: int):
    one = WeilElement.unit(space)
    nil = WeilElement.zero(space)
    return tuple(tuple(one if i == j else nil for j in range(k)) for i in range(k))


def _matmul(a, b):
    k = len(a)
    out = []
    for i in range(k):
        row = []
        for j in range(k):
            acc = None
            for l in range(k):
                term = a[i][l] * b[l][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _mat_is_zero(a) -> bool:
    return all(entry.is_zero() for row in a for entry in row)


def matrix_inverse(x: AlgebroidElement) -> AlgebroidElement:
    """Invert an identity-plus-nilpotent matrix by its finite Neumann series."""
    if x.model.kind != MATRIX_GROUP:
        raise WrongModel("matrix inversion is a matrix-group operation")
    k = x.model.size
    ident = _identity_body(x.space, k)
    neg_nil = tuple(
        tuple(-(entry - ident[i][j]) for j, entry in enumerate(row))
        for i, row in enumerate(x.body)
    )
    total = ident
    term = ident
    for _ in range(x.space.num_generators + 1):
        term = _matmul(term, neg_nil)
        if _mat_is_zero(term):
            break
        total = tuple(
            tuple(total[i][j] + term[i][j] for j in range(k)) for i in range(k)
        )
    return AlgebroidElement(x.model, x.space, total)


def ad_conjugation(x: AlgebroidElement, y: AlgebroidElement) -> AlgebroidElement:
    """Conjugation x y x^{-1} as a joint-space element, x slot first."""
    if x.model.kind != MATRIX_GROUP or y.model.kind != MATRIX_GROUP:
        raise WrongModel("conjugation is only realized on the matrix group")
    if x.model != y.model:
        raise WrongModel("conjugation needs matching matrix sizes")
    prod = product(x.space, y.space)
    X = apply(prod.p1, x)
    Y = apply(prod.p2, y)
    Xinv = matrix_inverse(X)
    body = _matmul(_matmul(X.body, Y.body), Xinv.body)
    return AlgebroidElement(x.model, prod.space, body)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def element_to_json(x: AlgebroidElement) -> dict[str, Any]:
    out: dict[str, Any] = {
        "model": model_to_json(x.model),
        "space": format_space(x.space),
    }
    if x.model.kind == MATRIX_GROUP:
        out["body"] = [[weil_to_json(entry) for entry in row] for row in x.body]
    else:
        out["base"] = [str(b) for b in x.base]
        out["body"] = [weil_to_json(entry) for entry in x.body]
    return out


def element_from_json(data: Mapping[str, Any]) -> AlgebroidElement:
    model = model_from_json(data["model"])
    space = parse_space(data["space"])
    if model.kind == MATRIX_GROUP:
        body = [[weil_from_json(space, entry) for entry in row] for row in data["body"]]
        return AlgebroidElement(model, space, body)
    body = [weil_from_json(space, entry) for entry in data["body"]]
    base = tuple(Fraction(str(b)) for b in data["base"]) if "base" in data else None
    return AlgebroidElement(model, space, body, base)


def family_to_json(zeta: TangentFamily) -> dict[str, Any]:
    inner_json = element_to_json(zeta.element)
    return {
        "model": inner_json["model"],
        "index_space": format_space(zeta.index_space),
        "value_space": format_space(zeta.value_space),
        "body": inner_json["body"],
        **({"base": inner_json["base"]} if "base" in inner_json else {}),
    }


def family_from_json(data: Mapping[str, Any]) -> TangentFamily:
    model = model_from_json(data["model"])
    index_space = parse_space(data["index_space"])
    value_space = parse_space(data["value_space"])
    joint = product_space(index_space, value_space)
    if model.kind == MATRIX_GROUP:
        body = [[weil_from_json(joint, entry) for entry in row] for row in data["body"]]
        return TangentFamily(model, index_space, value_space, body)
    body = [weil_from_json(joint, entry) for entry in data["body"]]
    base = tuple(Fraction(str(b)) for b in data["base"]) if "base" in data else None
    return TangentFamily(model, index_space, value_space, body, base)
