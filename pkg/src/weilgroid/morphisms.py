"""The category of simplicial infinitesimal spaces.

Morphisms are stored in coordinates: one nilpotent Weil element per codomain
generator.  Validity (nilsquare components, codomain relations, preservation
of the distinguished point) is decidable by reduction in the domain algebra,
and every morphism induces an exact linear pullback on Weil elements.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, NamedTuple, Sequence

from .errors import (
    DomainMismatch,
    MixedSpace,
    NonNilpotentComponent,
    NonzeroConstant,
    PatternViolation,
)
from .linalg import Matrix, mat_vec
from .spaces import (
    Monomial,
    SimplicialSpace,
    WeilElement,
    basis,
    element_to_vector,
    format_space,
    oplus_space,
    parse_space,
    product_space,
    substitute,
)


@dataclass(frozen=True, eq=False)
class SimpMorphism:
    domain: SimplicialSpace
    codomain: SimplicialSpace
    components: tuple[WeilElement, ...]
    name: str | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimpMorphism):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and self.components == other.components
        )

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return format_morphism(self)


def make_morphism(
    domain: SimplicialSpace,
    codomain: SimplicialSpace,
    components: Sequence[WeilElement],
    name: str | None = None,
) -> SimpMorphism:
    """Validate and build a morphism.

    Raises NonzeroConstant, NonNilpotentComponent or PatternViolation when the
    candidate components break one of the three morphism invariants.
    """
    comps = tuple(components)
    if len(comps) != codomain.num_generators:
        raise ValueError(
            f"need {codomain.num_generators} components for codomain {codomain}, got {len(comps)}"
        )
    for k, c in enumerate(comps, start=1):
        if c.space != domain:
            raise MixedSpace(f"component {k} lives over {c.space}, not {domain}")
        if not c.is_nilpotent():
            raise NonzeroConstant(f"component {k} has constant term {c.augmentation}")
        if not (c * c).is_zero():
            raise NonNilpotentComponent(f"component {k} squares to {c * c}")
    for pattern in codomain.patterns:
        prod = WeilElement.unit(domain)
        for i in sorted(pattern):
            prod = prod * comps[i - 1]
        if not prod.is_zero():
            idx = "".join(str(i) for i in sorted(pattern))
            raise PatternViolation(f"relation d{idx} maps to {prod}")
    return SimpMorphism(domain, codomain, comps, name)


def identity(space: SimplicialSpace) -> SimpMorphism:
    comps = tuple(WeilElement.generator(space, i) for i in space.generators)
    return SimpMorphism(space, space, comps, "id")


def compose(g: SimpMorphism, f: SimpMorphism) -> SimpMorphism:
    """g after f: substitute f's components into g's."""
    if f.codomain != g.domain:
        raise DomainMismatch(f"{f.codomain} is not {g.domain}")
    one = WeilElement.unit(f.domain)
    comps = tuple(substitute(c, f.components, one) for c in g.components)
    return make_morphism(f.domain, g.codomain, comps)


@dataclass(frozen=True, eq=False)
class PullbackMatrix:
    """Linear realization of restriction along a morphism.

    Rows run over the domain basis, columns over the codomain basis; the
    column at a monomial is the reduced product of the morphism's components
    over its support.
    """

    morphism: SimpMorphism
    matrix: Matrix

    def apply_vec(self, v: Sequence[Any]) -> list[Any]:
        return mat_vec(self.matrix, v)


def pullback(f: SimpMorphism) -> PullbackMatrix:
    dom_basis = basis(f.domain)
    out: list[list[Fraction]] = [[] for _ in dom_basis]
    for mono in basis(f.codomain):
        prod = WeilElement.unit(f.domain)
        for i in mono.support:
            prod = prod * f.components[i - 1]
        col = element_to_vector(prod)
        for row, entry in zip(out, col):
            row.append(entry)
    return PullbackMatrix(f, out)


class ProductSpace(NamedTuple):
    space: SimplicialSpace
    p1: SimpMorphism
    p2: SimpMorphism
    i1: SimpMorphism
    i2: SimpMorphism


def product(a: SimplicialSpace, b: SimplicialSpace) -> ProductSpace:
    """The direct product with its projections and 0-padding sections."""
    space = product_space(a, b)
    m, n = a.num_generators, b.num_generators
    gen = WeilElement.generator
    zero_a = WeilElement.zero(a)
    zero_b = WeilElement.zero(b)
    p1 = make_morphism(space, a, [gen(space, i) for i in range(1, m + 1)], "p1")
    p2 = make_morphism(space, b, [gen(space, m + j) for j in range(1, n + 1)], "p2")
    i1 = make_morphism(a, space, [gen(a, i) for i in range(1, m + 1)] + [zero_a] * n, "i1")
    i2 = make_morphism(b, space, [zero_b] * m + [gen(b, j) for j in range(1, n + 1)], "i2")
    return ProductSpace(space, p1, p2, i1, i2)


class OplusSpace(NamedTuple):
    space: SimplicialSpace
    j1: SimpMorphism
    j2: SimpMorphism


def oplus(a: SimplicialSpace, b: SimplicialSpace) -> OplusSpace:
    """The glued sum with its two canonical injections."""
    space = oplus_space(a, b)
    m, n = a.num_generators, b.num_generators
    gen = WeilElement.generator
    j1 = make_morphism(a, space, [gen(a, i) for i in range(1, m + 1)] + [WeilElement.zero(a)] * n, "j1")
    j2 = make_morphism(b, space, [WeilElement.zero(b)] * m + [gen(b, j) for j in range(1, n + 1)], "j2")
    return OplusSpace(space, j1, j2)


def oplus_inclusion(a: SimplicialSpace, b: SimplicialSpace) -> SimpMorphism:
    """The canonical inclusion of the sum into the product, identity on generators."""
    src = oplus_space(a, b)
    dst = product_space(a, b)
    comps = [WeilElement.generator(src, i) for i in src.generators]
    return make_morphism(src, dst, comps, "oplus-incl")


def permutation(sigma: Sequence[int]) -> SimpMorphism:
    """The morphism on D^n with components (d_sigma(1), ..., d_sigma(n))."""
    n = len(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{n}")
    space = SimplicialSpace(n)
    comps = tuple(WeilElement.generator(space, sigma[i]) for i in range(n))
    return SimpMorphism(space, space, comps, None)


def lift_element(e: WeilElement, target: SimplicialSpace, offset: int = 0) -> WeilElement:
    """Reindex an element into a larger space, shifting generators by ``offset``."""
    out = {}
    for mono, c in e.coefficients.items():
        out[Monomial(tuple(i + offset for i in mono.support))] = c
    return WeilElement(target, out)


def product_morphism(g: SimpMorphism, h: SimpMorphism) -> SimpMorphism:
    """g x h acting blockwise on the product of the domains."""
    dom = product_space(g.domain, h.domain)
    cod = product_space(g.codomain, h.codomain)
    off = g.domain.num_generators
    comps = [lift_element(c, dom, 0) for c in g.components]
    comps += [lift_element(c, dom, off) for c in h.components]
    return make_morphism(dom, cod, comps)


def scale_slot_morphism(space: SimplicialSpace, i: int, a: Fraction) -> SimpMorphism:
    """Identity on every generator except di, which is scaled by a."""
    comps = []
    for j in space.generators:
        g = WeilElement.generator(space, j)
        comps.append(g.scale(a) if j == i else g)
    return make_morphism(space, space, comps)


# ---------------------------------------------------------------------------
# Textual syntax
# ---------------------------------------------------------------------------


def parse_lambda(domain: SimplicialSpace, codomain: SimplicialSpace, text: str) -> SimpMorphism:
    """Parse ``(d1,d2) -> (d2, d1*d2)`` against declared spaces.

    Argument names bind positionally to the domain generators.  Expressions
    allow + - * and division by integer literals.
    """
    if "->" not in text:
        raise ValueError(f"missing '->' in morphism {text!r}")
    left, right = text.split("->", 1)
    args = _parse_arg_names(left)
    if len(args) != domain.num_generators:
        raise ValueError(
            f"{len(args)} arguments for a {domain.num_generators}-generator domain in {text!r}"
        )
    env = {name: WeilElement.generator(domain, i + 1) for i, name in enumerate(args)}
    exprs = _parse_expr_tuple(right, codomain.num_generators)
    comps = [_eval_expr(node, env, domain) for node in exprs]
    return make_morphism(domain, codomain, comps)


def _parse_arg_names(text: str) -> list[str]:
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    names = [p.strip() for p in s.split(",") if p.strip()]
    if len(set(names)) != len(names):
        raise ValueError(f"repeated argument name in {text!r}")
    return names


def _parse_expr_tuple(text: str, arity: int) -> list[ast.expr]:
    s = text.strip()
    if arity == 0:
        if s not in ("()", ""):
            raise ValueError(f"expected empty tuple, got {text!r}")
        return []
    try:
        node = ast.parse(s, mode="eval").body
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {text!r}: {exc}") from exc
    items = list(node.elts) if isinstance(node, ast.Tuple) else [node]
    if len(items) != arity:
        raise ValueError(f"expected {arity} components, got {len(items)} in {text!r}")
    return items


def _eval_expr(node: ast.expr, env: dict[str, WeilElement], domain: SimplicialSpace) -> WeilElement:
    if isinstance(node, ast.Constant):
        if not isinstance(node.value, int):
            raise ValueError(f"only integer literals allowed, got {node.value!r}")
        return WeilElement.constant(domain, Fraction(node.value))
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise ValueError(f"unknown variable {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp):
        val = _eval_expr(node.operand, env, domain)
        if isinstance(node.op, ast.USub):
            return -val
        if isinstance(node.op, ast.UAdd):
            return val
    if isinstance(node, ast.BinOp):
        lhs = _eval_expr(node.left, env, domain)
        rhs = _eval_expr(node.right, env, domain)
        if isinstance(node.op, ast.Add):
            return lhs + rhs
        if isinstance(node.op, ast.Sub):
            return lhs - rhs
        if isinstance(node.op, ast.Mult):
            return lhs * rhs
        if isinstance(node.op, ast.Div):
            c = rhs.augmentation
            if rhs != WeilElement.constant(domain, c) or c == 0:
                raise ValueError("division only by nonzero constants")
            return lhs.scale(Fraction(1) / Fraction(c))
    raise ValueError(f"unsupported syntax: {ast.dump(node)}")


def parse_morphism(spec: str) -> SimpMorphism:
    """Parse the full form ``DOMAIN -> CODOMAIN: (args) -> (exprs)``."""
    head, _, body = spec.partition(":")
    if not body:
        raise ValueError(f"missing ':' in morphism spec {spec!r}")
    if "->" not in head:
        raise ValueError(f"missing domain arrow in {spec!r}")
    dom_text, cod_text = head.split("->", 1)
    domain = parse_space(dom_text)
    codomain = parse_space(cod_text)
    return parse_lambda(domain, codomain, body)


def format_morphism(f: SimpMorphism) -> str:
    args = ", ".join(f"d{i}" for i in f.domain.generators)
    vals = ", ".join(str(c) for c in f.components)
    return f"{format_space(f.domain)} -> {format_space(f.codomain)}: ({args}) -> ({vals})"
