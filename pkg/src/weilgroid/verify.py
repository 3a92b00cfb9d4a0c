"""Seeded verification harness: suite execution and machine-readable reports.

Each property runs a fixed number of independent trials.  Trial randomness
comes from a sub-seed derived by hashing (seed, property, model, trial), so
results are reproducible bit for bit regardless of scheduling, and any
counterexample can be regenerated from the report alone.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

from .catalog import broken_diagram, load_catalog
from .errors import ConfigInvalid, WeilgroidError
from .models import (
    FORMAL_SPACE,
    MATRIX_GROUP,
    PAIR_GROUPOID,
    AlgebroidElement,
    Model,
    TangentFamily,
    body_channels,
    element_from_channels,
    element_to_json,
    family_to_json,
    formal_space,
    matrix_group,
    model_from_json,
    pair_groupoid,
)
from .morphisms import product
from .ops import check_perceived_limit
from .sections import Poly, Section, section_from_vector
from .spaces import Monomial, SimplicialSpace, WeilElement, basis, d_power

DEFAULT_MODELS = (
    formal_space(1),
    formal_space(2),
    pair_groupoid(1),
    matrix_group(2),
    matrix_group(3),
)


@dataclass(frozen=True)
class SuiteConfig:
    """Run parameters: which suites, on which models, with what randomness."""

    suites: tuple[str, ...]
    models: tuple[Model, ...]
    seed: int
    trials: int
    coeff_bound: int
    max_degree: int

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ConfigInvalid("seed must fit in 64 bits")
        if self.trials < 1:
            raise ConfigInvalid("trials must be >= 1")
        if self.coeff_bound < 1 or self.max_degree < 1:
            raise ConfigInvalid("bounds must be >= 1")

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "SuiteConfig":
        if not isinstance(data, Mapping):
            raise ConfigInvalid("config must be a JSON object")
        known = {"suites", "models", "seed", "trials", "coefficient_bound", "max_degree"}
        extra = set(data) - known
        if extra:
            raise ConfigInvalid(f"unknown config keys {sorted(extra)}")
        suites = data.get("suites", [])
        if suites in ("all", None):
            suites = []
        if not isinstance(suites, list) or not all(isinstance(s, str) for s in suites):
            raise ConfigInvalid("'suites' must be a list of names")
        models_raw = data.get("models")
        if models_raw is None:
            models = DEFAULT_MODELS
        else:
            if not isinstance(models_raw, list) or not models_raw:
                raise ConfigInvalid("'models' must be a nonempty list")
            models = tuple(model_from_json(m) for m in models_raw)
        def _int(key: str, default: int) -> int:
            v = data.get(key, default)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ConfigInvalid(f"'{key}' must be an integer")
            return v
        return cls(
            suites=tuple(suites),
            models=models,
            seed=_int("seed", 0),
            trials=_int("trials", 25),
            coeff_bound=_int("coefficient_bound", 4),
            max_degree=_int("max_degree", 3),
        )


@dataclass(frozen=True)
class PropertyRecord:
    property_id: str
    citation: str
    model: str
    trials: int
    failures: int
    counterexample: dict[str, Any] | None
    wall_time: float

    def to_json(self) -> dict[str, Any]:
        # wall time varies run to run and is deliberately left out
        return {
            "property": self.property_id,
            "citation": self.citation,
            "model": self.model,
            "trials": self.trials,
            "failures": self.failures,
            "counterexample": self.counterexample,
        }


@dataclass(frozen=True)
class VerificationReport:
    seed: int
    suites: tuple[str, ...]
    records: tuple[PropertyRecord, ...]

    @property
    def passed(self) -> bool:
        return all(r.failures == 0 for r in self.records)

    def to_json(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "seed": self.seed,
            "suites": list(self.suites),
            "records": [r.to_json() for r in self.records],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")) + "\n"

    def summary_lines(self) -> list[str]:
        lines = []
        for r in self.records:
            verdict = "pass" if r.failures == 0 else f"FAIL ({r.failures}/{r.trials})"
            lines.append(f"{r.property_id:36s} {r.model:18s} {verdict:12s} {r.wall_time:7.3f}s")
        total = sum(r.wall_time for r in self.records)
        bad = sum(1 for r in self.records if r.failures)
        lines.append(
            f"{len(self.records)} checks, {bad} failing, {total:.2f}s total"
        )
        return lines


def subseed(seed: int, property_id: str, model_key: str, trial: int) -> int:
    """Scheduling-independent per-trial seed."""
    tag = f"{seed}:{property_id}:{model_key}:{trial}".encode()
    return int.from_bytes(hashlib.blake2b(tag, digest_size=8).digest(), "big")


class PropertyFailure(Exception):
    """Raised by a checker when a trial refutes its property."""

    def __init__(self, counterexample: dict[str, Any]):
        super().__init__("property failed")
        self.counterexample = counterexample


@dataclass(frozen=True)
class Property:
    """One verifiable claim: a checker plus the models it applies to."""

    property_id: str
    citation: str
    suite: str
    kinds: tuple[str, ...]
    check: Callable[[Model, random.Random, SuiteConfig], None]
    trials: int | None = None  # fixed trial count overriding the config

    def applicable(self, model: Model) -> bool:
        return model.kind in self.kinds and not model.inner_only


def _thread_cap() -> int:
    raw = os.environ.get("WEILGROID_THREADS", "")
    if raw.strip():
        try:
            cap = int(raw)
        except ValueError:
            raise ConfigInvalid(f"WEILGROID_THREADS must be an integer, got {raw!r}")
        return max(1, cap)
    return min(4, os.cpu_count() or 1)


def _run_property(prop: Property, model: Model | None, config: SuiteConfig) -> PropertyRecord:
    model_key = model.label if model is not None else "-"
    trials = prop.trials if prop.trials is not None else config.trials
    failures = 0
    first: dict[str, Any] | None = None
    started = time.perf_counter()
    for trial in range(trials):
        rng = random.Random(subseed(config.seed, prop.property_id, model_key, trial))
        try:
            prop.check(model, rng, config)  # type: ignore[arg-type]
        except PropertyFailure as exc:
            failures += 1
            if first is None:
                first = dict(exc.counterexample)
                first["trial"] = trial
        except WeilgroidError as exc:
            failures += 1
            if first is None:
                first = {"trial": trial, "error": type(exc).__name__, "context": str(exc)}
    return PropertyRecord(
        property_id=prop.property_id,
        citation=prop.citation,
        model=model_key,
        trials=trials,
        failures=failures,
        counterexample=first,
        wall_time=time.perf_counter() - started,
    )


def run_suite(config: SuiteConfig) -> VerificationReport:
    from . import suites  # deferred: suites imports the generators below

    registry = suites.REGISTRY
    names = set(config.suites) if config.suites else {p.suite for p in registry}
    unknown = names - {p.suite for p in registry}
    if unknown:
        raise ConfigInvalid(f"unknown suites {sorted(unknown)}")
    tasks: list[tuple[Property, Model | None]] = []
    for prop in registry:
        if prop.suite not in names:
            continue
        if not prop.kinds:
            tasks.append((prop, None))
            continue
        for model in config.models:
            if prop.applicable(model):
                tasks.append((prop, model))
    workers = _thread_cap()
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda t: _run_property(t[0], t[1], config), tasks))
    else:
        records = [_run_property(p, m, config) for p, m in tasks]
    records.sort(key=lambda r: (r.property_id, r.model))
    return VerificationReport(config.seed, tuple(sorted(names)), tuple(records))


def certify_diagrams(config: SuiteConfig, include_broken: bool = False) -> VerificationReport:
    """Rank-certify every catalog diagram on every configured model."""
    records = []
    diagrams = list(load_catalog())
    if include_broken:
        diagrams.append(broken_diagram())
    for diagram in diagrams:
        for model in config.models:
            started = time.perf_counter()
            cert = check_perceived_limit(model, diagram)
            ok = cert.is_perceived_limit
            records.append(
                PropertyRecord(
                    property_id=f"prop-diag-{diagram.name}",
                    citation=diagram.citation,
                    model=model.label,
                    trials=1,
                    failures=0 if ok else 1,
                    counterexample=None
                    if ok
                    else {
                        "kernel_rank": cert.kernel_rank,
                        "image_rank": cert.image_rank,
                        "compat_rank": cert.compat_rank,
                    },
                    wall_time=time.perf_counter() - started,
                )
            )
    records.sort(key=lambda r: (r.property_id, r.model))
    return VerificationReport(config.seed, ("certify",), tuple(records))


# ---------------------------------------------------------------------------
# Random input generation (constraint projection keeps preconditions exact)
# ---------------------------------------------------------------------------


def random_rational(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound))


def random_weil(
    rng: random.Random,
    space: SimplicialSpace,
    bound: int,
    constant: Fraction | None = None,
) -> WeilElement:
    coeffs: dict[Monomial, Fraction] = {}
    for mono in basis(space):
        if mono.support == ():
            if constant is not None:
                coeffs[mono] = constant
                continue
        coeffs[mono] = random_rational(rng, bound)
    return WeilElement(space, coeffs)


def random_element(
    rng: random.Random,
    model: Model,
    space: SimplicialSpace,
    bound: int,
    base: tuple[Fraction, ...] | None = None,
) -> AlgebroidElement:
    if model.kind == MATRIX_GROUP:
        k = model.size
        body = [
            [
                random_weil(rng, space, bound, constant=Fraction(1 if i == j else 0))
                for j in range(k)
            ]
            for i in range(k)
        ]
        return AlgebroidElement(model, space, body)
    if base is None:
        base = tuple(random_rational(rng, bound) for _ in range(model.dim))
    body = [random_weil(rng, space, bound, constant=base[i]) for i in range(model.dim)]
    return AlgebroidElement(model, space, body, base)


def random_family(
    rng: random.Random,
    model: Model,
    index_space: SimplicialSpace,
    value_space: SimplicialSpace,
    bound: int,
    base_path: AlgebroidElement | None = None,
) -> TangentFamily:
    """A random family of tangents; the value-at-zero constraint is projected in."""
    prod = product(index_space, value_space)
    joint = prod.space
    nidx = index_space.num_generators
    if model.kind == MATRIX_GROUP:
        k = model.size
        body = []
        for i in range(k):
            row = []
            for j in range(k):
                e = random_weil(rng, joint, bound, constant=Fraction(1 if i == j else 0))
                coeffs = dict(e.coefficients)
                for mono in list(coeffs):
                    # index-only monomials must vanish so the family starts at I
                    if mono.support and all(g <= nidx for g in mono.support):
                        del coeffs[mono]
                row.append(WeilElement(joint, coeffs))
            body.append(row)
        return TangentFamily(model, index_space, value_space, body)
    if base_path is not None:
        channels = []
        for chan in base_path.body:
            coeffs = {
                Monomial(m.support): c for m, c in chan.coefficients.items()
            }
            e = random_weil(rng, joint, bound)
            merged = dict(e.coefficients)
            # overwrite the index-block coefficients with the prescribed path
            for mono in list(merged):
                if all(g <= nidx for g in mono.support):
                    del merged[mono]
            merged.update({m: c for m, c in coeffs.items()})
            channels.append(WeilElement(joint, merged))
        return TangentFamily(model, index_space, value_space, channels)
    body = [random_weil(rng, joint, bound) for _ in range(model.dim)]
    return TangentFamily(model, index_space, value_space, body)


def _adjust_monomials(
    rng: random.Random,
    model: Model,
    x: AlgebroidElement,
    fused: tuple[int, ...],
    bound: int,
) -> AlgebroidElement:
    """Copy x, re-randomizing exactly the coefficients killed by restricting
    the fused generators; the shared part is copied, so the agreement
    precondition holds by construction."""
    targets = [
        mono
        for mono in basis(x.space)
        if set(fused) <= set(mono.support)
    ]
    channels = []
    for chan in body_channels(x):
        coeffs = dict(chan.coefficients)
        for mono in targets:
            c = random_rational(rng, bound)
            if c:
                coeffs[mono] = c
            else:
                coeffs.pop(mono, None)
        channels.append(WeilElement(x.space, coeffs))
    return element_from_channels(model, x.space, channels, None if model.kind == MATRIX_GROUP else x.base)


def random_strong_diff_pair(
    rng: random.Random, model: Model, bound: int
) -> tuple[AlgebroidElement, AlgebroidElement]:
    """x, y over the square agreeing away from the top coefficient."""
    x = random_element(rng, model, d_power(2), bound)
    return x, _adjust_monomials(rng, model, x, (1, 2), bound)


_FUSED_BY_SLOT = {1: (2, 3), 2: (1, 3), 3: (1, 2)}


def random_cube_pair(
    rng: random.Random, model: Model, slot: int, bound: int
) -> tuple[AlgebroidElement, AlgebroidElement]:
    x = random_element(rng, model, d_power(3), bound)
    return x, _adjust_monomials(rng, model, x, _FUSED_BY_SLOT[slot], bound)


def random_jacobi_sextuple(
    rng: random.Random, model: Model, bound: int
) -> dict[str, AlgebroidElement]:
    """Six microcubes making all three general-Jacobi expressions well defined.

    The three pairwise strong differences need shared degree-1 data, and each
    quadratic coefficient is shared across a class of three labels; the cubic
    coefficients are free.  Derived by intersecting the agreement
    preconditions of the three fused-pair differences and the outer ones.
    """
    labels = ("123", "132", "213", "231", "312", "321")
    classes = {
        (1, 2): {"123": 0, "132": 0, "312": 0, "231": 1, "321": 1, "213": 1},
        (1, 3): {"123": 0, "132": 0, "213": 0, "231": 1, "321": 1, "312": 1},
        (2, 3): {"123": 0, "213": 0, "231": 0, "132": 1, "312": 1, "321": 1},
    }
    space = d_power(3)
    nchan = model.channels
    base = None
    if model.kind != MATRIX_GROUP:
        base = tuple(random_rational(rng, bound) for _ in range(model.dim))

    def chan_const(c: int) -> Fraction:
        if model.kind == MATRIX_GROUP:
            k = model.size
            return Fraction(1 if c // k == c % k else 0)
        return base[c]  # type: ignore[index]

    linear = {
        (i,): [random_rational(rng, bound) for _ in range(nchan)] for i in (1, 2, 3)
    }
    quad = {
        pair: [
            [random_rational(rng, bound) for _ in range(nchan)] for _ in (0, 1)
        ]
        for pair in classes
    }
    out: dict[str, AlgebroidElement] = {}
    for label in labels:
        channels = []
        for c in range(nchan):
            coeffs: dict[Monomial, Fraction] = {Monomial(()): chan_const(c)}
            for sup, vals in linear.items():
                coeffs[Monomial(sup)] = vals[c]
            for pair, split in classes.items():
                coeffs[Monomial(pair)] = quad[pair][split[label]][c]
            coeffs[Monomial((1, 2, 3))] = random_rational(rng, bound)
            coeffs = {m: v for m, v in coeffs.items() if v != 0}
            channels.append(WeilElement(space, coeffs))
        out[label] = element_from_channels(model, space, channels, base)
    return out


def random_poly(rng: random.Random, nvars: int, degree: int, bound: int) -> Poly:
    terms: dict[tuple[int, ...], Fraction] = {}

    def extend(prefix: tuple[int, ...], remaining: int, budget: int) -> None:
        if remaining == 0:
            terms[prefix] = random_rational(rng, bound)
            return
        for e in range(budget + 1):
            extend(prefix + (e,), remaining - 1, budget - e)

    extend((), nvars, degree)
    return Poly(nvars, terms)


def random_section(rng: random.Random, dim: int, degree: int, bound: int, model: Model | None = None) -> Section:
    return section_from_vector(
        dim, [random_poly(rng, dim, degree, bound) for _ in range(dim)], model
    )


def serialize_element(x: AlgebroidElement) -> dict[str, Any]:
    return element_to_json(x)


def serialize_family(z: TangentFamily) -> dict[str, Any]:
    return family_to_json(z)
