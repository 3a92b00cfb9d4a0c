"""Command line front end for the verification harness.

Four commands.  ``verify`` runs property suites and prints one line per
(property, model) record; ``certify`` rank-checks the diagram catalog;
``compute`` evaluates a single operation on serialized inputs, so any
counterexample from a report can be replayed verbatim; ``basis`` lists the
admissible monomials of a space.  Exit codes: 0 all checks passed, 1 a
property or certification failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any

from . import suites as _suites
from .catalog import get_map
from .errors import ConfigInvalid, WeilgroidError
from .models import (
    ad_conjugation,
    anchor,
    apply,
    element_from_json,
    element_to_json,
    family_from_json,
    star,
)
from .ops import (
    add,
    bracket,
    circledast,
    euclid_derivative,
    negate,
    scalar,
    slot_scale,
    strong_diff,
    strong_diff_slot,
)
from .sections import (
    leibniz_residual,
    lie_derivative,
    section_bracket,
    sections_from_json,
)
from .spaces import basis, parse_space, weil_arith, weil_from_json, weil_to_json
from .verify import SuiteConfig, certify_diagrams, run_suite


def _payload(text: str) -> Any:
    """Inline JSON, '@path' for a file, or '-' for stdin."""
    if text == "-":
        return json.load(sys.stdin)
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(text)


def _element(text: str):
    return element_from_json(_payload(text))


def _family(text: str):
    return family_from_json(_payload(text))


def _emit(data: Any) -> None:
    print(json.dumps(data, sort_keys=True, indent=2))


def _load_config(args: argparse.Namespace) -> SuiteConfig:
    data: dict[str, Any] = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ConfigInvalid("config file must hold a JSON object")
        data = loaded
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    if getattr(args, "suite", None):
        data["suites"] = list(args.suite)
    cfg = SuiteConfig.from_json(data)
    for name in cfg.suites:
        if name not in _suites.SUITES:
            known = ", ".join(_suites.SUITES)
            raise ConfigInvalid(f"unknown suite {name!r}; known suites: {known}")
    return cfg


def _write_report(report, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(report.dumps())


def _cmd_verify(args: argparse.Namespace) -> int:
    report = run_suite(_load_config(args))
    for line in report.summary_lines():
        print(line)
    _write_report(report, args.json)
    return 0 if report.passed else 1


def _cmd_certify(args: argparse.Namespace) -> int:
    report = certify_diagrams(_load_config(args), include_broken=args.include_broken)
    for line in report.summary_lines():
        print(line)
    _write_report(report, args.json)
    return 0 if report.passed else 1


def _cmd_basis(args: argparse.Namespace) -> int:
    for mono in basis(parse_space(args.space)):
        print(mono)
    return 0


def _cmd_compute(args: argparse.Namespace) -> int:
    return args.compute_func(args)


def _cc_basis(args) -> int:
    return _cmd_basis(args)


def _cc_weil(args) -> int:
    space = parse_space(args.space)
    if args.op == "scale-by-rational":
        operands: tuple[Any, ...] = (
            Fraction(args.operands[0]),
            weil_from_json(space, _payload(args.operands[1])),
        )
    else:
        operands = tuple(weil_from_json(space, _payload(t)) for t in args.operands)
    _emit(weil_to_json(weil_arith(args.op, *operands)))
    return 0


def _cc_apply(args) -> int:
    _emit(element_to_json(apply(get_map(args.map), _element(args.element))))
    return 0


def _cc_anchor(args) -> int:
    _emit(element_to_json(anchor(_element(args.element))))
    return 0


def _cc_add(args) -> int:
    _emit(element_to_json(add(_element(args.x), _element(args.y))))
    return 0


def _cc_negate(args) -> int:
    _emit(element_to_json(negate(_element(args.x))))
    return 0


def _cc_scalar(args) -> int:
    _emit(element_to_json(scalar(Fraction(args.a), _element(args.x))))
    return 0


def _cc_slot_scale(args) -> int:
    _emit(element_to_json(slot_scale(Fraction(args.a), args.slot, _element(args.x))))
    return 0


def _cc_strong_diff(args) -> int:
    _emit(element_to_json(strong_diff(_element(args.y), _element(args.x))))
    return 0


def _cc_strong_diff_slot(args) -> int:
    _emit(element_to_json(strong_diff_slot(args.slot, _element(args.y), _element(args.x))))
    return 0


def _cc_circledast(args) -> int:
    _emit(element_to_json(circledast(_element(args.x), _element(args.y))))
    return 0


def _cc_bracket(args) -> int:
    _emit(element_to_json(bracket(_element(args.x), _element(args.y))))
    return 0


def _cc_ad(args) -> int:
    _emit(element_to_json(ad_conjugation(_element(args.x), _element(args.y))))
    return 0


def _cc_star(args) -> int:
    _emit(element_to_json(star(_family(args.family), _element(args.x))))
    return 0


def _cc_euclid(args) -> int:
    _emit(element_to_json(euclid_derivative(_family(args.family))))
    return 0


def _named(table: dict, kind: str, name: str):
    if name not in table:
        raise ConfigInvalid(f"no {kind} named {name!r} in the payload")
    return table[name]


def _cc_section_bracket(args) -> int:
    _, fields, _ = sections_from_json(_payload(args.payload))
    result = section_bracket(_named(fields, "field", args.x), _named(fields, "field", args.y))
    for poly in result.vector:
        print(poly)
    return 0


def _cc_lie_derivative(args) -> int:
    _, fields, functions = sections_from_json(_payload(args.payload))
    out = lie_derivative(_named(fields, "field", args.x), _named(functions, "function", args.f))
    print(out)
    return 0


def _cc_leibniz_residual(args) -> int:
    _, fields, functions = sections_from_json(_payload(args.payload))
    result = leibniz_residual(
        _named(fields, "field", args.x),
        _named(fields, "field", args.y),
        _named(functions, "function", args.f),
    )
    for poly in result.vector:
        print(poly)
    return 0


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="JSON run configuration")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.add_argument("--json", metavar="PATH", help="also write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weilgroid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run property suites")
    _add_config_flags(p_verify)
    p_verify.add_argument(
        "--suite", action="append", metavar="NAME", help="restrict to a suite (repeatable)"
    )
    p_verify.set_defaults(func=_cmd_verify)

    p_certify = sub.add_parser("certify", help="rank-certify the diagram catalog")
    _add_config_flags(p_certify)
    p_certify.add_argument(
        "--include-broken",
        action="store_true",
        help="also run the deliberately broken control diagram",
    )
    p_certify.set_defaults(func=_cmd_certify)

    p_basis = sub.add_parser("basis", help="list the admissible monomials of a space")
    p_basis.add_argument("space", help='for example "D^2" or "D(3)"')
    p_basis.set_defaults(func=_cmd_basis)

    p_compute = sub.add_parser("compute", help="evaluate one operation on serialized inputs")
    csub = p_compute.add_subparsers(dest="operation", required=True)

    c = csub.add_parser("basis", help="list admissible monomials")
    c.add_argument("space")
    c.set_defaults(compute_func=_cc_basis)

    c = csub.add_parser("weil", help="arithmetic on Weil elements over one space")
    c.add_argument("op", choices=("add", "negate", "multiply", "scale-by-rational"))
    c.add_argument("space")
    c.add_argument("operands", nargs="+", metavar="JSON")
    c.set_defaults(compute_func=_cc_weil)

    c = csub.add_parser("apply", help="restrict an element along a named map")
    c.add_argument("map")
    c.add_argument("element", metavar="JSON")
    c.set_defaults(compute_func=_cc_apply)

    c = csub.add_parser("anchor", help="underlying base motion of an element")
    c.add_argument("element", metavar="JSON")
    c.set_defaults(compute_func=_cc_anchor)

    c = csub.add_parser("add", help="fiberwise sum")
    c.add_argument("x", metavar="JSON")
    c.add_argument("y", metavar="JSON")
    c.set_defaults(compute_func=_cc_add)

    c = csub.add_parser("negate", help="fiberwise negation")
    c.add_argument("x", metavar="JSON")
    c.set_defaults(compute_func=_cc_negate)

    c = csub.add_parser("scalar", help="scale a tangent by a rational")
    c.add_argument("a", metavar="RATIONAL")
    c.add_argument("x", metavar="JSON")
    c.set_defaults(compute_func=_cc_scalar)

    c = csub.add_parser("slot-scale", help="scale one slot of a microcube")
    c.add_argument("a", metavar="RATIONAL")
    c.add_argument("slot", type=int)
    c.add_argument("x", metavar="JSON")
    c.set_defaults(compute_func=_cc_slot_scale)

    c = csub.add_parser("strong-diff", help="strong difference y -. x of microsquares")
    c.add_argument("y", metavar="JSON")
    c.add_argument("x", metavar="JSON")
    c.set_defaults(compute_func=_cc_strong_diff)

    c = csub.add_parser("strong-diff-slot", help="slotwise strong difference of microcubes")
    c.add_argument("slot", type=int)
    c.add_argument("y", metavar="JSON")
    c.add_argument("x", metavar="JSON")
    c.set_defaults(compute_func=_cc_strong_diff_slot)

    c = csub.add_parser("circledast", help="interchange product of two tangents")
    c.add_argument("x", metavar="JSON")
    c.add_argument("y", metavar="JSON")
    c.set_defaults(compute_func=_cc_circledast)

    c = csub.add_parser("bracket", help="fiber bracket of two anchor-killed tangents")
    c.add_argument("x", metavar="JSON")
    c.add_argument("y", metavar="JSON")
    c.set_defaults(compute_func=_cc_bracket)

    c = csub.add_parser("ad", help="conjugation square x(d1) y(d2) x(d1)^-1")
    c.add_argument("x", metavar="JSON")
    c.add_argument("y", metavar="JSON")
    c.set_defaults(compute_func=_cc_ad)

    c = csub.add_parser("star", help="act on a tangent by a family")
    c.add_argument("family", metavar="JSON")
    c.add_argument("x", metavar="JSON")
    c.set_defaults(compute_func=_cc_star)

    c = csub.add_parser("euclid-derivative", help="unique velocity of a fiber curve")
    c.add_argument("family", metavar="JSON")
    c.set_defaults(compute_func=_cc_euclid)

    c = csub.add_parser("section-bracket", help="bracket of two named polynomial fields")
    c.add_argument("payload", metavar="JSON")
    c.add_argument("x")
    c.add_argument("y")
    c.set_defaults(compute_func=_cc_section_bracket)

    c = csub.add_parser("lie-derivative", help="derivative of a function along a field")
    c.add_argument("payload", metavar="JSON")
    c.add_argument("x")
    c.add_argument("f")
    c.set_defaults(compute_func=_cc_lie_derivative)

    c = csub.add_parser("leibniz-residual", help="defect of the Leibniz rule (zero when it holds)")
    c.add_argument("payload", metavar="JSON")
    c.add_argument("x")
    c.add_argument("y")
    c.add_argument("f")
    c.set_defaults(compute_func=_cc_leibniz_residual)

    p_compute.set_defaults(func=_cmd_compute)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WeilgroidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        # covers unreadable files, malformed JSON, and bad rationals
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
