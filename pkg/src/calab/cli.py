"""Command line interface.

calab <verb> [flags] [--config FILE] [--format json|csv] [--out PATH]

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.
The CALAB_CAP environment variable overrides the enumeration cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from fractions import Fraction

from .ca1d import commutes, compose, hitting_map
from .formats import (
    fraction_str,
    parse_poly_literal,
    parse_ring,
    parse_sequence_literal,
    poly_literal,
    resolve_map,
    sequence_literal,
    serialize_block_map,
)
from .lab import (
    ExperimentConfig,
    commutant_campaign,
    lacunary_orbit,
    orbit_coverage,
    parse_config_text,
    witness_suite,
)
from .linca import divisible_digits_witness, is_linear, linear_hitting_map, map_to_poly
from .mulca import evaluate, mul_map, prime_power_witness, represents_check
from .symcore import Alphabet, EventuallyPeriodicSeq

EXPERIMENT_FLAGS = [f.name for f in fields(ExperimentConfig) if f.name != "fmt"]


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=["json", "csv"], default=None,
                    help="report format (default json)")
    sp.add_argument("--out", default=None, help="write output to a file")


def _add_experiment_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", default=None, help="key=value config file")
    for name in EXPERIMENT_FLAGS:
        if name == "sabotage":
            sp.add_argument("--sabotage", action="store_const", const="true",
                            default=None, help="negative control: break the rule")
        else:
            sp.add_argument(_flag(name), default=None, dest=name)
    _add_common(sp)


def _experiment_config(args: argparse.Namespace, experiment: str) -> ExperimentConfig:
    mapping: dict[str, str] = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            mapping = parse_config_text(fh.read())
    for name in EXPERIMENT_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            mapping[name] = value
    mapping.setdefault("experiment", experiment)
    if args.format:
        mapping["fmt"] = args.format
    return ExperimentConfig.from_mapping(mapping)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(report, fmt: str, out: str | None) -> None:
    if fmt == "csv":
        _emit(report.to_csv(), out)
    else:
        _emit(json.dumps(report.to_dict(), indent=2) + "\n", out)


def _emit_json(payload: dict, args: argparse.Namespace) -> None:
    fmt = getattr(args, "format", None) or "json"
    if fmt == "csv":
        lines = ["key,value"]
        lines += [f"{k},{v}" for k, v in payload.items()]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(json.dumps(payload, indent=2) + "\n", args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="calab",
        description="Exact workbench for semigroups of cellular automata")
    sub = parser.add_subparsers(dest="verb", required=True)

    for verb in ("coverage", "commutant", "witness", "lacunary"):
        _add_experiment_flags(sub.add_parser(verb))

    sp = sub.add_parser("compose", help="compose two block maps (first after second)")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--a", required=True, help="map: file, CA1 literal, or short name")
    sp.add_argument("--b", required=True)
    _add_common(sp)

    sp = sub.add_parser("commute", help="check whether two block maps commute")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    _add_common(sp)

    sp = sub.add_parser("mu", help="emit the times-u block map")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--u", type=int, required=True)
    _add_common(sp)

    sp = sub.add_parser("eval", help="evaluate a sequence literal to num/den")
    sp.add_argument("literal", help='e.g. "s=10 pre= cyc=3"')
    _add_common(sp)

    sp = sub.add_parser("represents", help="check a map represents times-u")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--u", type=int, required=True)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--map", dest="map_spec", default=None,
                    help="map to check (default: the times-u rule itself)")
    _add_common(sp)

    sp = sub.add_parser("witness-pm", help="missing-digit orbit witness over p^m symbols")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--steps", type=int, default=50)
    sp.add_argument("--prefix-len", type=int, default=2000, dest="prefix_len")
    _add_common(sp)

    sp = sub.add_parser("witness-plambda", help="divisible-digits invariance witness")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sabotage", action="store_true")
    _add_common(sp)

    sp = sub.add_parser("poly2ca", help="block map of a shift polynomial")
    sp.add_argument("--poly", required=True, help='e.g. "ring=mod:6 coeffs=1,1"')
    _add_common(sp)

    sp = sub.add_parser("ca2poly", help="shift polynomial of a linear block map")
    sp.add_argument("--map", dest="map_spec", required=True)
    sp.add_argument("--ring", required=True, help="mod:<s> or gf:<p>^<m>")
    _add_common(sp)

    sp = sub.add_parser("linhit", help="linear rule hitting a target prefix")
    sp.add_argument("--source", required=True, help="sequence literal")
    sp.add_argument("--target", required=True, help="comma-separated symbols")
    sp.add_argument("--ring", required=True)
    _add_common(sp)

    sp = sub.add_parser("hit", help="rule sending a source to a target prefix")
    sp.add_argument("--source", required=True, help="sequence literal")
    sp.add_argument("--target", required=True, help="comma-separated symbols")
    _add_common(sp)

    return parser


def _run(args: argparse.Namespace) -> int:
    verb = args.verb

    if verb in ("coverage", "commutant", "witness", "lacunary"):
        config = _experiment_config(args, verb)
        runner = {"coverage": orbit_coverage, "commutant": commutant_campaign,
                  "witness": witness_suite, "lacunary": lacunary_orbit}[verb]
        report = runner(config)
        _emit_report(report, config.fmt, args.out)
        return 0 if report.passed else 1

    if verb == "compose":
        alphabet = Alphabet(args.s)
        a = resolve_map(args.a, alphabet)
        b = resolve_map(args.b, alphabet)
        _emit(serialize_block_map(compose(a, b)), args.out)
        return 0

    if verb == "commute":
        alphabet = Alphabet(args.s)
        res = commutes(resolve_map(args.a, alphabet), resolve_map(args.b, alphabet))
        _emit_json({"commutes": res.ok,
                    "witness": list(res.witness) if res.witness else None}, args)
        return 0 if res.ok else 1

    if verb == "mu":
        _emit(serialize_block_map(mul_map(Alphabet(args.s), args.u)), args.out)
        return 0

    if verb == "eval":
        seq = parse_sequence_literal(args.literal)
        if not isinstance(seq, EventuallyPeriodicSeq):
            raise ValueError("eval needs an eventually periodic literal")
        value = fraction_str(evaluate(seq))
        if args.format == "json":
            _emit_json({"value": value}, args)
        else:
            _emit(value + "\n", args.out)
        return 0

    if verb == "represents":
        alphabet = Alphabet(args.s)
        rule = (resolve_map(args.map_spec, alphabet) if args.map_spec
                else mul_map(alphabet, args.u))
        report = represents_check(rule, args.u, args.trials, args.seed)
        _emit_json(report.to_dict(), args)
        return 0 if report.passed else 1

    if verb == "witness-pm":
        report = prime_power_witness(args.p, args.m, args.steps, args.prefix_len)
        _emit_json(report.to_dict(), args)
        return 0 if report.passed else 1

    if verb == "witness-plambda":
        report = divisible_digits_witness(args.s, args.p, trials=args.trials,
                                          seed=args.seed, sabotage=args.sabotage)
        _emit_json(report.to_dict(), args)
        return 0 if report.passed else 1

    if verb == "poly2ca":
        from .linca import poly_to_map
        _emit(serialize_block_map(poly_to_map(parse_poly_literal(args.poly))), args.out)
        return 0

    if verb == "ca2poly":
        ring = parse_ring(args.ring)
        rule = resolve_map(args.map_spec, Alphabet(ring.size))
        poly = map_to_poly(rule, ring)
        if poly is None:
            _emit_json({"linear": False}, args)
            return 1
        _emit_json({"linear": True, "poly": poly_literal(poly)}, args)
        return 0

    if verb == "linhit":
        ring = parse_ring(args.ring)
        source = parse_sequence_literal(args.source)
        target = tuple(int(x) for x in args.target.split(","))
        rule = linear_hitting_map(source, target, ring)
        assert is_linear(rule, ring)
        _emit(serialize_block_map(rule), args.out)
        return 0

    if verb == "hit":
        source = parse_sequence_literal(args.source)
        target = tuple(int(x) for x in args.target.split(","))
        rule = hitting_map(source, target)
        _emit(serialize_block_map(rule), args.out)
        return 0

    raise ValueError(f"unknown verb {verb!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
