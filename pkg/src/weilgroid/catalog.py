"""Frozen catalogs: the named-map fixture and the diagram list.

Both live as data files in ``weilgroid/data``.  Diagrams carry, besides legs,
a list of *relations*: pairs of restriction maps under which the legs agree.
The relations describe exactly which value families are compatible, which is
what turns the rank computation in ``ops.check_perceived_limit`` into a full
existence-and-uniqueness certificate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .errors import WeilgroidError
from .morphisms import SimpMorphism, compose, make_morphism, parse_lambda
from .spaces import SimplicialSpace, WeilElement, parse_space


@dataclass(frozen=True, eq=False)
class Relation:
    """leg[i] after u equals leg[j] after v; u and v share their domain."""

    i: int
    u: SimpMorphism
    j: int
    v: SimpMorphism


@dataclass(frozen=True, eq=False)
class DiagramSpec:
    name: str
    citation: str
    apex: SimplicialSpace
    legs: tuple[SimpMorphism, ...]
    relations: tuple[Relation, ...] = field(default_factory=tuple)


def _read_data(filename: str) -> str:
    return resources.files("weilgroid").joinpath("data").joinpath(filename).read_text()


@lru_cache(maxsize=None)
def standard_maps() -> dict[str, SimpMorphism]:
    """Load and validate the named-map fixture."""
    maps: dict[str, SimpMorphism] = {}
    for lineno, raw in enumerate(_read_data("maps.std").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            name, spaces_part, lam = (part.strip() for part in line.split(":", 2))
            dom_text, cod_text = spaces_part.split("->", 1)
            f = parse_lambda(parse_space(dom_text), parse_space(cod_text), lam)
        except (ValueError, WeilgroidError) as exc:
            raise WeilgroidError(f"maps.std line {lineno}: {exc}") from exc
        if name in maps:
            raise WeilgroidError(f"maps.std line {lineno}: duplicate name {name!r}")
        maps[name] = SimpMorphism(f.domain, f.codomain, f.components, name)
    return maps


def get_map(name: str) -> SimpMorphism:
    try:
        return standard_maps()[name]
    except KeyError:
        raise KeyError(f"no map named {name!r} in the catalog") from None


def _parse_leg(entry: dict, apex: SimplicialSpace) -> SimpMorphism:
    domain = parse_space(entry["domain"])
    return parse_lambda(domain, apex, entry["components"])


def _parse_relation_map(entry: dict, codomain: SimplicialSpace) -> SimpMorphism:
    domain = parse_space(entry["domain"])
    return parse_lambda(domain, codomain, entry["components"])


@lru_cache(maxsize=None)
def load_catalog() -> tuple[DiagramSpec, ...]:
    """Load the diagram catalog, checking every relation identity at load time."""
    out = []
    for entry in json.loads(_read_data("diagrams.json")):
        apex = parse_space(entry["apex"])
        legs = tuple(_parse_leg(leg, apex) for leg in entry["legs"])
        relations = []
        for rel in entry.get("relations", []):
            i, j = rel["i"], rel["j"]
            u = _parse_relation_map(rel["u"], legs[i].domain)
            v = _parse_relation_map(rel["v"], legs[j].domain)
            if u.domain != v.domain:
                raise WeilgroidError(f"diagram {entry['name']}: relation domains differ")
            if compose(legs[i], u) != compose(legs[j], v):
                raise WeilgroidError(
                    f"diagram {entry['name']}: legs {i} and {j} do not agree on the relation"
                )
            relations.append(Relation(i, u, j, v))
        out.append(DiagramSpec(entry["name"], entry["citation"], apex, legs, tuple(relations)))
    return tuple(out)


def get_diagram(name: str) -> DiagramSpec:
    for diagram in load_catalog():
        if diagram.name == name:
            return diagram
    raise KeyError(f"no diagram named {name!r} in the catalog")


def broken_diagram() -> DiagramSpec:
    """Deliberately underdetermined control fixture: one leg cannot pin the plane."""
    plane = parse_space("D^2")
    line = parse_space("D")
    leg = make_morphism(
        line,
        plane,
        [WeilElement.generator(line, 1), WeilElement.zero(line)],
    )
    return DiagramSpec("broken-underdetermined", "artifact control fixture", plane, (leg,), ())
