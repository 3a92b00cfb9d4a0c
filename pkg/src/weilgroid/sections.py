"""Global sections over the formal base, with a symbolic base point.

A section assigns to every base point an element of the fiber; here the
assignment is polynomial, and instead of sampling base points we adjoin N
indeterminates m1..mN to the scalars and compute once.  Every operation
from the element layer runs unchanged over this extended coefficient ring,
so one exact computation certifies the identity at all base points
simultaneously.

Composition of sections (circledcirc) raises polynomial degree; the caps
are explicit and overflowing a configured cap raises, never truncates.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .catalog import get_map
from .errors import ConfigInvalid, DegreeOverflow, DimensionMismatch, SpaceMismatch, WrongModel
from .models import (
    MATRIX_GROUP,
    AlgebroidElement,
    Model,
    TangentFamily,
    apply,
    formal_space,
    star,
    zero,
)
from .morphisms import SimpMorphism, lift_element, product
from .ops import _bracket_from_window, add, slot_scale
from .spaces import UNIT, Monomial, SimplicialSpace, WeilElement, d_power


class Poly:
    """Exact multivariate polynomial in the base coordinates m1..mN.

    Terms map exponent tuples to rational coefficients.  Instances mix
    freely with Fraction and int in ring arithmetic, which is what lets
    Weil elements carry polynomial coefficients without special cases.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], Any]):
        acc: dict[tuple[int, ...], Fraction] = {}
        for exp, c in terms.items():
            exp = tuple(exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent tuple {exp} for {nvars} variables")
            c = c if isinstance(c, Fraction) else Fraction(c)
            acc[exp] = acc.get(exp, Fraction(0)) + c
        self.nvars = nvars
        self.terms = {e: c for e, c in acc.items() if c != 0}

    # ---- constructors --------------------------------------------------

    @classmethod
    def const(cls, nvars: int, c: Any) -> "Poly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        if not 1 <= i <= nvars:
            raise ValueError(f"variable index {i} outside 1..{nvars}")
        exp = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return cls(nvars, {exp: Fraction(1)})

    # ---- ring structure ------------------------------------------------

    def _coerce(self, other: Any) -> "Poly | None":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("mixed variable counts")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        return None

    def __add__(self, other: Any) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: Any) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative powers are not polynomial")
        out = Poly.const(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.terms == {(0,) * self.nvars: Fraction(other)}
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    # ---- calculus and evaluation ---------------------------------------

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def partial(self, i: int) -> "Poly":
        """d/dm_i, exact."""
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            k = e[i - 1]
            if k:
                de = tuple(v - 1 if j == i - 1 else v for j, v in enumerate(e))
                out[de] = out.get(de, Fraction(0)) + c * k
        return Poly(self.nvars, out)

    def eval_fraction(self, values: Sequence[Any]) -> Fraction:
        if len(values) != self.nvars:
            raise ValueError("one value per variable required")
        vals = [Fraction(v) for v in values]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                term *= v**k
            total += term
        return total

    def eval_weil(self, point: Sequence[WeilElement]) -> WeilElement:
        """Evaluate at a Weil point; nilpotents truncate the Taylor tail."""
        if len(point) != self.nvars:
            raise ValueError("one Weil element per variable required")
        space = point[0].space
        acc = WeilElement.zero(space)
        for e, c in self.terms.items():
            term = WeilElement.unit(space).scale(c)
            for p, k in zip(point, e):
                for _ in range(k):
                    term = term * p
            acc = acc + term
        return acc

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        def key(e):
            return (sum(e), tuple(-x for x in e))
        parts = []
        for e in sorted(self.terms, key=key):
            c = self.terms[e]
            factors = [
                f"m{i + 1}" + (f"^{k}" if k > 1 else "")
                for i, k in enumerate(e)
                if k
            ]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self})"


ScalarField = Poly


def parse_poly(nvars: int, text: str) -> Poly:
    """Parse ``m1^2*m2 + 3`` style polynomial strings; ^ means power."""
    try:
        node = ast.parse(text.replace("^", "**"), mode="eval").body
        return _poly_from_ast(node, nvars)
    except (SyntaxError, ValueError) as exc:
        raise ConfigInvalid(f"bad polynomial {text!r}: {exc}") from None


def _poly_from_ast(node: ast.expr, nvars: int) -> Poly:
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int):
            return Poly.const(nvars, node.value)
        raise ValueError(f"non-integer literal {node.value!r}")
    if isinstance(node, ast.Name):
        if node.id.startswith("m") and node.id[1:].isdigit():
            return Poly.variable(nvars, int(node.id[1:]))
        raise ValueError(f"unknown name {node.id!r}")
    if isinstance(node, ast.UnaryOp):
        inner = _poly_from_ast(node.operand, nvars)
        if isinstance(node.op, ast.USub):
            return -inner
        if isinstance(node.op, ast.UAdd):
            return inner
        raise ValueError("unsupported unary operator")
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ValueError("exponents must be integer literals")
            return _poly_from_ast(node.left, nvars) ** node.right.value
        lhs = _poly_from_ast(node.left, nvars)
        rhs = _poly_from_ast(node.right, nvars)
        if isinstance(node.op, ast.Add):
            return lhs + rhs
        if isinstance(node.op, ast.Sub):
            return lhs - rhs
        if isinstance(node.op, ast.Mult):
            return lhs * rhs
        if isinstance(node.op, ast.Div):
            if rhs.degree > 0 or not rhs.terms:
                raise ValueError("division only by nonzero constants")
            return lhs * (1 / rhs.terms[(0,) * nvars])
        raise ValueError("unsupported operator")
    raise ValueError(f"unsupported syntax {ast.dump(node)}")


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------


def _as_poly(nvars: int, c: Any) -> Poly:
    return c if isinstance(c, Poly) else Poly.const(nvars, c)


class Section:
    """An element-valued polynomial function of the base point.

    Wraps an element whose coefficients are polynomials in m1..mN and whose
    base is exactly the tuple of coordinate functions, so projecting to the
    base recovers the identity.
    """

    __slots__ = ("model", "space", "element")

    def __init__(self, model: Model, space: SimplicialSpace, element: AlgebroidElement):
        if model.kind == MATRIX_GROUP:
            raise WrongModel("sections are realized over the formal and pair bases")
        if element.model != model or element.space != space:
            raise SpaceMismatch("section wrapper disagrees with its element")
        n = model.dim
        for i, b in enumerate(element.base, start=1):
            if not (isinstance(b, Poly) and b == Poly.variable(n, i)):
                raise SpaceMismatch("a section must project to the identity on the base")
        self.model = model
        self.space = space
        self.element = element

    @property
    def vector(self) -> tuple[Poly, ...]:
        """The d-direction components; defined for single-generator sections."""
        if self.space.num_generators != 1:
            raise SpaceMismatch("vector part is defined over a single generator")
        n = self.model.dim
        return tuple(
            _as_poly(n, chan.coefficient(Monomial((1,)))) for chan in self.element.body
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Section):
            return NotImplemented
        return self.model == other.model and self.space == other.space and self.element == other.element

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Section({self.model.label}, {self.space}, {self.element._body_str()})"


def var_base(dim: int) -> tuple[Poly, ...]:
    return tuple(Poly.variable(dim, i) for i in range(1, dim + 1))


def section_from_vector(dim: int, vector: Sequence[Any], model: Model | None = None) -> Section:
    """The section m |-> m + d*v(m) from a vector of polynomials."""
    model = model or formal_space(dim)
    if len(vector) != dim:
        raise DimensionMismatch(f"expected {dim} vector components")
    space = d_power(1)
    body = []
    for i in range(1, dim + 1):
        v = _as_poly(dim, vector[i - 1])
        coeffs: dict[Monomial, Any] = {UNIT: Poly.variable(dim, i)}
        if v != 0:
            coeffs[Monomial((1,))] = v
        body.append(WeilElement(space, coeffs))
    return Section(model, space, AlgebroidElement(model, space, body))


def zero_section(dim: int, model: Model | None = None, space: SimplicialSpace | None = None) -> Section:
    model = model or formal_space(dim)
    space = space if space is not None else d_power(1)
    return Section(model, space, zero(model, var_base(dim), space))


def is_zero_section(X: Section) -> bool:
    n = X.model.dim
    return all(
        all(mono == UNIT or c == 0 for mono, c in chan.coefficients.items())
        for chan in X.element.body
    )


def section_apply(f: SimpMorphism, X: Section) -> Section:
    """Restriction along f, applied pointwise in the base."""
    return Section(X.model, f.domain, apply(f, X.element))


def coefficient_degree(element: AlgebroidElement) -> int:
    """Largest base-polynomial degree appearing in any coefficient."""
    deg = 0
    for chan in element.body:
        for c in chan.coefficients.values():
            if isinstance(c, Poly):
                deg = max(deg, c.degree)
    return deg


def _guard_degree(element: AlgebroidElement, max_degree: int | None, what: str) -> None:
    if max_degree is not None:
        deg = coefficient_degree(element)
        if deg > max_degree:
            raise DegreeOverflow(f"{what} reaches base degree {deg}, above the cap {max_degree}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def eval_section(X: Section, point: Sequence[Any]) -> AlgebroidElement:
    """Evaluate at a rational base point, or at a Weil point over some space.

    Rational points give an ordinary element over X's space; a Weil point
    over T gives the transported element over T x space, index block first.
    """
    n = X.model.dim
    if len(point) != n:
        raise DimensionMismatch(f"expected {n} point coordinates")
    if any(isinstance(p, WeilElement) for p in point):
        if not all(isinstance(p, WeilElement) for p in point):
            raise DimensionMismatch("mixed Weil and rational point coordinates")
        body = _eval_body_at(X.element, tuple(point))
        prod = product(point[0].space, X.space)
        return AlgebroidElement(X.model, prod.space, body)
    values = tuple(Fraction(p) for p in point)
    out = []
    for chan in X.element.body:
        coeffs = {
            mono: (c.eval_fraction(values) if isinstance(c, Poly) else c)
            for mono, c in chan.coefficients.items()
        }
        out.append(WeilElement(X.space, coeffs))
    return AlgebroidElement(X.model, X.space, out, values)


def _eval_body_at(element: AlgebroidElement, point: tuple[WeilElement, ...]) -> list[WeilElement]:
    T = point[0].space
    if any(p.space != T for p in point):
        raise SpaceMismatch("Weil point coordinates must share a space")
    joint = product(T, element.space).space
    off = T.num_generators
    out = []
    for chan in element.body:
        acc = WeilElement.zero(joint)
        for mono, c in chan.coefficients.items():
            cw = c.eval_weil(point) if isinstance(c, Poly) else WeilElement.constant(T, c)
            shifted = Monomial(tuple(g + off for g in mono.support))
            acc = acc + lift_element(cw, joint, 0) * WeilElement(joint, {shifted: Fraction(1)})
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# Composition, Lie derivative, bracket
# ---------------------------------------------------------------------------


def circledcirc(Y: Section, X: Section, max_degree: int | None = None) -> Section:
    """Transport Y along the anchor path of X, then translate: (Y . a(X)) * X.

    The result is a section over X's slots followed by Y's.
    """
    if Y.model != X.model:
        raise WrongModel("sections belong to different models")
    path = tuple(X.element.body)
    fam_body = _eval_body_at(Y.element, path)
    zeta = TangentFamily(X.model, X.space, Y.space, fam_body)
    result = star(zeta, X.element)
    _guard_degree(result, max_degree, "composition")
    return Section(X.model, result.space, result)


def lie_derivative(X: Section, f: Poly) -> Poly:
    """Derivative of f along X's flow direction.

    Computed twice, by polynomial chain rule and by Weil evaluation of f
    along the section; the two must agree exactly.
    """
    if X.space != d_power(1):
        raise SpaceMismatch("Lie derivative takes a single-generator section")
    n = X.model.dim
    if f.nvars != n:
        raise DimensionMismatch("scalar field has the wrong number of variables")
    v = X.vector
    gradient_route = Poly(n, {})
    for i in range(1, n + 1):
        gradient_route = gradient_route + f.partial(i) * v[i - 1]
    moved = f.eval_weil(X.element.body)
    weil_route = _as_poly(n, moved.coefficient(Monomial((1,))))
    if gradient_route != weil_route:
        raise AssertionError("chain rule and Weil evaluation disagree")
    return gradient_route


def section_bracket(X: Section, Y: Section, max_degree: int | None = None) -> Section:
    """The bracket of sections via the commutator word and the quotient solve."""
    if X.space != d_power(1) or Y.space != d_power(1):
        raise SpaceMismatch("bracket takes single-generator sections")
    w1 = circledcirc(Y, X, max_degree)
    w2 = circledcirc(w1, Y, max_degree)
    w3 = circledcirc(w2, X, max_degree)
    window = apply(get_map("quadneg"), w3.element)
    z = _bracket_from_window(window)
    _guard_degree(z, max_degree, "bracket")
    return Section(X.model, d_power(1), z)


def scale_section(f: Any, X: Section) -> Section:
    """Multiply the fiber direction by a scalar field, keeping the base point."""
    f = _as_poly(X.model.dim, f)
    return Section(X.model, X.space, slot_scale(f, 1, X.element))


def section_add(X: Section, Y: Section) -> Section:
    """Fiberwise sum at every base point at once, through the sum diagram."""
    return Section(X.model, X.space, add(X.element, Y.element))


def section_negate(X: Section) -> Section:
    return scale_section(Fraction(-1), X)


def leibniz_residual(X: Section, Y: Section, f: Poly, max_degree: int | None = None) -> Section:
    """[X, fY] - f[X,Y] - (X f)Y; the zero section when the product rule holds."""
    lhs = section_bracket(X, section_from_vector(X.model.dim, [f * w for w in Y.vector], X.model), max_degree)
    t1 = scale_section(f, section_bracket(X, Y, max_degree))
    t2 = scale_section(lie_derivative(X, f), Y)
    return section_add(lhs, section_negate(section_add(t1, t2)))


# ---------------------------------------------------------------------------
# Input format
# ---------------------------------------------------------------------------


def sections_from_json(data: Mapping[str, Any]) -> tuple[int, dict[str, Section], dict[str, Poly]]:
    """Load ``{"dim":1, "fields":{"X":["1"]}, "functions":{"f":"m1"}}``."""
    if not isinstance(data, Mapping):
        raise ConfigInvalid("sections config must be an object")
    dim = data.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ConfigInvalid("sections config needs an integer 'dim' >= 1")
    extra = set(data) - {"dim", "fields", "functions"}
    if extra:
        raise ConfigInvalid(f"unexpected sections keys {sorted(extra)}")
    fields: dict[str, Section] = {}
    for name, parts in data.get("fields", {}).items():
        if not isinstance(parts, list) or len(parts) != dim:
            raise ConfigInvalid(f"field {name!r} needs {dim} polynomial strings")
        fields[name] = section_from_vector(dim, [parse_poly(dim, p) for p in parts])
    functions: dict[str, Poly] = {}
    for name, text in data.get("functions", {}).items():
        if not isinstance(text, str):
            raise ConfigInvalid(f"function {name!r} must be a polynomial string")
        functions[name] = parse_poly(dim, text)
    return dim, fields, functions
