"""Exact arithmetic in the Weil algebra presented by a simplicial infinitesimal space.

A space has m nilsquare generators d1..dm together with a set of "patterns":
index sets whose generator products are declared zero.  The algebra of such a
space is spanned by the square-free monomials that contain no pattern, with
rational (or, more generally, any commutative-ring) coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Iterable, Mapping, Sequence

from .errors import MixedSpace


@dataclass(frozen=True)
class SimplicialSpace:
    """A presentation D^m{S}: m generators, patterns S stored as a minimal antichain."""

    num_generators: int
    patterns: frozenset[frozenset[int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.num_generators < 0:
            raise ValueError("generator count must be nonnegative")
        pats = {frozenset(p) for p in self.patterns}
        for p in pats:
            if len(p) < 2:
                raise ValueError("patterns need at least two indices")
            if not all(1 <= i <= self.num_generators for i in p):
                raise ValueError("pattern index out of range")
        # Keep only minimal patterns so equal presentations compare equal.
        minimal = {p for p in pats if not any(q < p for q in pats)}
        object.__setattr__(self, "patterns", frozenset(minimal))

    @property
    def generators(self) -> tuple[int, ...]:
        return tuple(range(1, self.num_generators + 1))

    def admits(self, support: Iterable[int]) -> bool:
        s = frozenset(support)
        return not any(p <= s for p in self.patterns)

    def __str__(self) -> str:
        return format_space(self)


POINT = SimplicialSpace(0)
D = SimplicialSpace(1)


def d_power(m: int) -> SimplicialSpace:
    """D^m: no relations beyond the nilsquare generators."""
    return SimplicialSpace(m)


def d_n(n: int) -> SimplicialSpace:
    """D(n): all products of two distinct generators vanish."""
    pairs = frozenset(frozenset(p) for p in combinations(range(1, n + 1), 2))
    return SimplicialSpace(n, pairs)


def oplus_space(a: SimplicialSpace, b: SimplicialSpace) -> SimplicialSpace:
    """Whitney-sum style gluing: block patterns plus every cross pair."""
    m, n = a.num_generators, b.num_generators
    pats = set(a.patterns)
    pats.update(frozenset(i + m for i in p) for p in b.patterns)
    pats.update(frozenset({i, m + j}) for i in range(1, m + 1) for j in range(1, n + 1))
    return SimplicialSpace(m + n, frozenset(pats))


def product_space(a: SimplicialSpace, b: SimplicialSpace) -> SimplicialSpace:
    """Direct product: block patterns only, no cross relations."""
    m = a.num_generators
    pats = set(a.patterns)
    pats.update(frozenset(i + m for i in p) for p in b.patterns)
    return SimplicialSpace(m + b.num_generators, frozenset(pats))


_SPACE_RE = re.compile(r"^D(?:\^(\d+))?(?:\((\d+)\))?\s*(\{.*\})?$")


def parse_space(text: str) -> SimplicialSpace:
    """Parse the textual syntax: ``1``, ``D``, ``D^3``, ``D(3)``, ``D^3{12,13}``.

    Pattern entries may be digit strings (``13``) or tuples (``(1,3)``).
    """
    s = text.strip().replace(" ", "")
    if s == "1":
        return POINT
    mobj = _SPACE_RE.match(s)
    if not mobj:
        raise ValueError(f"cannot parse space {text!r}")
    power, paren, braces = mobj.groups()
    if power and paren:
        raise ValueError(f"cannot parse space {text!r}")
    if paren:
        if braces:
            raise ValueError(f"cannot parse space {text!r}")
        return d_n(int(paren))
    m = int(power) if power else 1
    if not braces:
        return d_power(m)
    body = braces[1:-1]
    patterns: set[frozenset[int]] = set()
    for chunk in _split_pattern_list(body):
        if not chunk:
            continue
        if chunk.startswith("("):
            idxs = [int(t) for t in chunk[1:-1].split(",") if t]
        else:
            if not chunk.isdigit():
                raise ValueError(f"bad pattern {chunk!r} in {text!r}")
            idxs = [int(c) for c in chunk]
        patterns.add(frozenset(idxs))
    return SimplicialSpace(m, frozenset(patterns))


def _split_pattern_list(body: str) -> list[str]:
    # Split on commas that are not inside parentheses.
    parts, depth, cur = [], 0, ""
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


def format_space(space: SimplicialSpace) -> str:
    m = space.num_generators
    if m == 0:
        return "1"
    if not space.patterns:
        return "D" if m == 1 else f"D^{m}"
    all_pairs = {frozenset(p) for p in combinations(range(1, m + 1), 2)}
    if space.patterns == frozenset(all_pairs):
        return f"D({m})"
    pats = sorted(tuple(sorted(p)) for p in space.patterns)
    if m <= 9 and all(len(p) == 2 for p in pats):
        inner = ",".join(f"{i}{j}" for i, j in pats)
    else:
        inner = ",".join("(" + ",".join(str(i) for i in p) + ")" for p in pats)
    return f"D^{m}{{{inner}}}"


@dataclass(frozen=True)
class Monomial:
    """Square-free product of generators; the empty support is the unit."""

    support: tuple[int, ...]

    def __post_init__(self) -> None:
        s = tuple(sorted(set(self.support)))
        if s != tuple(self.support):
            object.__setattr__(self, "support", s)

    @property
    def degree(self) -> int:
        return len(self.support)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.support), self.support)

    def __str__(self) -> str:
        if not self.support:
            return "1"
        return "*".join(f"d{i}" for i in self.support)


UNIT = Monomial(())


@lru_cache(maxsize=None)
def basis(space: SimplicialSpace) -> tuple[Monomial, ...]:
    """All admissible monomials, graded then lexicographic.

    This ordering is the coordinate convention for every matrix downstream.
    """
    out: list[Monomial] = []
    gens = space.generators
    for size in range(space.num_generators + 1):
        for support in combinations(gens, size):
            if space.admits(support):
                out.append(Monomial(support))
    return tuple(out)


def dimension(space: SimplicialSpace) -> int:
    return len(basis(space))


@lru_cache(maxsize=None)
def _basis_index(space: SimplicialSpace) -> dict[Monomial, int]:
    return {mono: i for i, mono in enumerate(basis(space))}


def _is_zero(c: Any) -> bool:
    return c == 0


class WeilElement:
    """An element of the Weil algebra of a space.

    Coefficients are exact rationals by default, but any commutative ring
    whose values support +, -, *, scaling by Fraction and comparison with 0
    works (polynomial coefficients are used for symbolic base points).
    """

    __slots__ = ("space", "coefficients")

    def __init__(self, space: SimplicialSpace, coefficients: Mapping[Monomial, Any]):
        clean: dict[Monomial, Any] = {}
        for mono, c in coefficients.items():
            if not isinstance(mono, Monomial):
                mono = Monomial(tuple(mono))
            if not space.admits(mono.support):
                raise ValueError(f"monomial {mono} not admissible in {space}")
            if not _is_zero(c):
                clean[mono] = c
        self.space = space
        self.coefficients = clean

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, space: SimplicialSpace) -> "WeilElement":
        return cls(space, {})

    @classmethod
    def constant(cls, space: SimplicialSpace, c: Any) -> "WeilElement":
        return cls(space, {UNIT: c})

    @classmethod
    def unit(cls, space: SimplicialSpace) -> "WeilElement":
        return cls.constant(space, Fraction(1))

    @classmethod
    def generator(cls, space: SimplicialSpace, i: int) -> "WeilElement":
        if not 1 <= i <= space.num_generators:
            raise ValueError(f"no generator d{i} in {space}")
        return cls(space, {Monomial((i,)): Fraction(1)})

    # ---- ring structure -----------------------------------------------

    def _check(self, other: "WeilElement") -> None:
        if self.space != other.space:
            raise MixedSpace(f"{self.space} vs {other.space}")

    def __add__(self, other: "WeilElement") -> "WeilElement":
        self._check(other)
        out = dict(self.coefficients)
        for mono, c in other.coefficients.items():
            out[mono] = out[mono] + c if mono in out else c
        return WeilElement(self.space, out)

    def __sub__(self, other: "WeilElement") -> "WeilElement":
        self._check(other)
        out = dict(self.coefficients)
        for mono, c in other.coefficients.items():
            out[mono] = out[mono] - c if mono in out else -c
        return WeilElement(self.space, out)

    def __neg__(self) -> "WeilElement":
        return WeilElement(self.space, {m: -c for m, c in self.coefficients.items()})

    def __mul__(self, other: "WeilElement") -> "WeilElement":
        self._check(other)
        space = self.space
        out: dict[Monomial, Any] = {}
        for m1, c1 in self.coefficients.items():
            s1 = set(m1.support)
            for m2, c2 in other.coefficients.items():
                if s1 & set(m2.support):
                    continue  # a repeated generator squares to zero
                support = tuple(sorted(s1 | set(m2.support)))
                if not space.admits(support):
                    continue
                mono = Monomial(support)
                c = c1 * c2
                out[mono] = out[mono] + c if mono in out else c
        return WeilElement(space, out)

    def scale(self, a: Any) -> "WeilElement":
        if _is_zero(a):
            return WeilElement.zero(self.space)
        return WeilElement(self.space, {m: c * a for m, c in self.coefficients.items()})

    # ---- inspection ----------------------------------------------------

    def coefficient(self, mono: Monomial | Sequence[int]) -> Any:
        if not isinstance(mono, Monomial):
            mono = Monomial(tuple(mono))
        return self.coefficients.get(mono, Fraction(0))

    @property
    def augmentation(self) -> Any:
        return self.coefficients.get(UNIT, Fraction(0))

    def is_nilpotent(self) -> bool:
        return UNIT not in self.coefficients

    def is_zero(self) -> bool:
        return not self.coefficients

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeilElement):
            return NotImplemented
        return self.space == other.space and self.coefficients == other.coefficients

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"WeilElement({self.space}, {self})"

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for mono in sorted(self.coefficients, key=Monomial.sort_key):
            c = self.coefficients[mono]
            cs = str(c)
            if mono is UNIT or mono == UNIT:
                parts.append(cs)
            elif cs == "1":
                parts.append(str(mono))
            elif cs == "-1":
                parts.append(f"-{mono}")
            else:
                if "+" in cs or (cs.count("-") and not cs.startswith("-")) or " " in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def substitute(element: WeilElement, values: Sequence[Any], one: Any) -> Any:
    """Evaluate at generator assignments.

    ``values[i-1]`` replaces generator ``di``; entries may be Weil elements
    over another space, or any ring values.  ``one`` is the multiplicative
    unit of the target ring.
    """
    if len(values) != element.space.num_generators:
        raise ValueError("one value per generator required")
    total: Any = None
    for mono, c in element.coefficients.items():
        term = one
        for i in mono.support:
            term = term * values[i - 1]
        term = term.scale(c) if isinstance(term, WeilElement) else term * c
        total = term if total is None else total + term
    if total is None:
        total = one.scale(Fraction(0)) if isinstance(one, WeilElement) else one * 0
    return total


def element_to_vector(e: WeilElement) -> list[Any]:
    """Coefficient vector in the basis order of the element's space."""
    return [e.coefficients.get(mono, Fraction(0)) for mono in basis(e.space)]


def element_from_vector(space: SimplicialSpace, vec: Sequence[Any]) -> WeilElement:
    monos = basis(space)
    if len(vec) != len(monos):
        raise ValueError(f"expected {len(monos)} coordinates for {space}")
    return WeilElement(space, dict(zip(monos, vec)))


def parse_monomial(text: str) -> Monomial:
    """Inverse of ``str(Monomial)``: ``1``, ``d2``, ``d1*d3``."""
    text = text.strip()
    if text == "1":
        return UNIT
    support = []
    for piece in text.split("*"):
        piece = piece.strip()
        if not piece.startswith("d") or not piece[1:].isdigit():
            raise ValueError(f"bad monomial factor {piece!r}")
        support.append(int(piece[1:]))
    return Monomial(tuple(support))


def weil_to_json(e: WeilElement) -> dict[str, str]:
    monos = sorted(e.coefficients, key=Monomial.sort_key)
    return {str(mono): str(e.coefficients[mono]) for mono in monos}


def weil_from_json(space: SimplicialSpace, data: Mapping[str, Any]) -> WeilElement:
    coeffs = {parse_monomial(k): Fraction(str(v)) for k, v in data.items()}
    return WeilElement(space, coeffs)


def weil_arith(op: str, *operands: Any) -> WeilElement:
    """Named dispatch used by the CLI: add, negate, scale-by-rational, multiply."""
    if op == "add":
        x, y = operands
        return x + y
    if op == "negate":
        (x,) = operands
        return -x
    if op == "multiply":
        x, y = operands
        return x * y
    if op == "scale-by-rational":
        a, x = operands
        return x.scale(Fraction(a))
    raise ValueError(f"unknown operation {op!r}")
