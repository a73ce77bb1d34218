"""Experiment harness: orbit coverage, commutant campaigns, witness suites.

Every experiment is driven by a plain key=value config, runs deterministically
(seeds included in the config), and renders to JSON or CSV with all fractions
exact, so identical configs produce byte-identical reports.
"""

from __future__ import annotations

import io
import csv as csv_module
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Union

from .ca1d import (
    BlockMap,
    apply,
    block_index,
    enumerate_commutant,
    index_block,
    product_rule_map,
)
from .ca2d import apply2, basis_biseq, biseq_equal, embed_one_sided, zero_biseq
from .caps import EnumerationCapError, current_cap
from .formats import (
    fraction_str,
    parse_sequence_literal,
    resolve_map,
    serialize_block_map,
)
from .linca import ModularRing, divisible_digits_witness, is_linear
from .mulca import (
    evaluate,
    mul_map,
    mul_prime,
    preimages,
    prime_factorization,
    prime_power_witness,
)
from .symcore import Alphabet, take
from .ca1d import apply_seq, maps_equal


def parse_config_text(text: str) -> dict[str, str]:
    """key=value lines; blank lines and '#' comments are skipped."""
    mapping: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        mapping[key.strip()] = value.strip()
    return mapping


@dataclass(frozen=True)
class ExperimentConfig:
    """Typed view of a key=value experiment description.

    Unset keys keep their defaults; serialization writes every field in
    declaration order so configs round-trip byte-identically.
    """

    experiment: str = ""
    s: int = 2
    generators: tuple[str, ...] = ()
    seed_sequence: str = ""
    word_length: int = 4
    window: int = 2
    steps: int = 20
    prefix_length: int = 0
    truncation: int = 4
    depth: int = 8
    trials: int = 100
    rng_seed: int = 0
    p: int = 2
    m: int = 2
    max_radius: int = 1
    sabotage: bool = False
    fmt: str = "json"

    @classmethod
    def from_mapping(cls, mapping: dict[str, str]) -> "ExperimentConfig":
        kwargs = {}
        valid = {f.name: f.type for f in fields(cls)}
        for key, raw in mapping.items():
            if key not in valid:
                raise ValueError(f"unknown config key {key!r}")
            if key == "generators":
                kwargs[key] = tuple(g for g in raw.split(",") if g)
            elif key == "sabotage":
                if raw not in ("true", "false"):
                    raise ValueError("sabotage must be true or false")
                kwargs[key] = raw == "true"
            elif key in ("experiment", "seed_sequence", "fmt"):
                kwargs[key] = raw
            else:
                kwargs[key] = int(raw)
        return cls(**kwargs)

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        return cls.from_mapping(parse_config_text(text))

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "generators":
                value = ",".join(value)
            elif f.name == "sabotage":
                value = "true" if value else "false"
            lines.append(f"{f.name}={value}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = list(value) if f.name == "generators" else value
        return out


# --- orbit coverage ---------------------------------------------------------------

@dataclass(frozen=True)
class DepthCoverage:
    depth: int
    windows_seen: int
    total_windows: int
    fraction: Fraction
    missing_sample: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "windows_seen": self.windows_seen,
            "total_windows": self.total_windows,
            "fraction": fraction_str(self.fraction),
            "missing_sample": [list(w) for w in self.missing_sample],
        }


@dataclass(frozen=True)
class CoverageReport:
    config: ExperimentConfig
    generator_names: tuple[str, ...]
    per_depth: tuple[DepthCoverage, ...]

    @property
    def final_fraction(self) -> Fraction:
        return self.per_depth[-1].fraction

    @property
    def passed(self) -> bool:
        return True

    def to_dict(self) -> dict:
        return {
            "report": "coverage",
            "config": self.config.to_dict(),
            "generators": list(self.generator_names),
            "per_depth": [d.to_dict() for d in self.per_depth],
            "final_fraction": fraction_str(self.final_fraction),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv_module.writer(buf)
        writer.writerow(["depth", "windows_seen", "total_windows", "fraction"])
        for d in self.per_depth:
            writer.writerow([d.depth, d.windows_seen, d.total_windows,
                             fraction_str(d.fraction)])
        return buf.getvalue()


MISSING_SAMPLE_LIMIT = 32


def orbit_coverage(config: ExperimentConfig) -> CoverageReport:
    """Window coverage of the semigroup orbit of a seed sequence.

    Applies every generator word of length <= word_length to a prefix of the
    seed (breadth first, generator-index lex order) and reports, per depth,
    how many of the s^window possible windows occur somewhere in the images,
    plus a lex-ordered sample of the missing ones.
    """
    alphabet = Alphabet(config.s)
    if not config.generators:
        raise ValueError("coverage needs at least one generator")
    gens = [(name, resolve_map(name, alphabet)) for name in config.generators]
    k = config.window
    depth_bound = config.word_length
    total = config.s ** k
    cap = current_cap()
    if total > cap:
        raise EnumerationCapError("window space too large", total, cap)
    word_count = sum(len(gens) ** d for d in range(depth_bound + 1))
    if word_count > cap:
        raise EnumerationCapError("orbit too large", word_count, cap)

    seed = parse_sequence_literal(config.seed_sequence)
    if seed.alphabet != alphabet:
        raise ValueError("seed sequence alphabet differs from config s")
    max_radius = max(bm.radius for _, bm in gens)
    plen = config.prefix_length or k + depth_bound * max_radius + 1024
    if plen < k + depth_bound * max_radius:
        raise ValueError("prefix too short for the requested depth and window")
    base = take(seed, plen)

    seen: set[int] = set()
    s = config.s
    window_mod = s ** (k - 1) if k > 1 else 1

    def scan(img: tuple[int, ...]) -> None:
        idx = block_index(img[:k], s)
        seen.add(idx)
        for a in img[k:]:
            idx = (idx % window_mod) * s + a
            seen.add(idx)

    rows = []
    level = [base]
    for depth in range(depth_bound + 1):
        if depth > 0:
            level = [apply(bm, img) for img in level for _, bm in gens]
        for img in level:
            scan(img)
        missing = []
        for idx in range(total):
            if idx not in seen:
                missing.append(index_block(idx, k, s))
                if len(missing) == MISSING_SAMPLE_LIMIT:
                    break
        rows.append(DepthCoverage(depth, len(seen), total,
                                  Fraction(len(seen), total), tuple(missing)))
    return CoverageReport(config, tuple(name for name, _ in gens), tuple(rows))


# --- commutant campaign ----------------------------------------------------------------

@dataclass(frozen=True)
class CommutantReport:
    config: ExperimentConfig
    generator_names: tuple[str, ...]
    candidate_count: int
    members: tuple[BlockMap, ...]
    labels: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return True

    def to_dict(self) -> dict:
        return {
            "report": "commutant",
            "config": self.config.to_dict(),
            "generators": list(self.generator_names),
            "candidate_count": self.candidate_count,
            "size": len(self.members),
            "members": [serialize_block_map(m) for m in self.members],
            "labels": list(self.labels),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv_module.writer(buf)
        writer.writerow(["radius", "table", "label"])
        for member, label in zip(self.members, self.labels):
            writer.writerow([member.radius, " ".join(map(str, member.table)), label])
        return buf.getvalue()


def _multiplication_catalog(alphabet: Alphabet, max_radius: int) -> list[BlockMap]:
    """Normalized rules for every valid multiplier buildable within the radius."""
    primes = sorted(prime_factorization(alphabet.size))
    multipliers = {0, 1, -1}
    frontier = [1]
    for _ in range(max_radius + 1):
        frontier = [u * p for u in frontier for p in primes]
        multipliers.update(frontier)
        multipliers.update(-u for u in frontier)
    catalog = []
    seen = set()
    for u in sorted(multipliers, key=abs):
        rule = mul_map(alphabet, u)
        key = (rule.radius, rule.table)
        if rule.radius <= max_radius and key not in seen:
            seen.add(key)
            catalog.append(rule)
    return catalog


def commutant_campaign(config: ExperimentConfig) -> CommutantReport:
    """Enumerate the bounded-radius commutant of the configured generators.

    Members are classified as linear (over Z/sZ), multiplication (equal to a
    times-u rule), or other.
    """
    alphabet = Alphabet(config.s)
    if not config.generators:
        raise ValueError("campaign needs at least one generator")
    gens = [(name, resolve_map(name, alphabet)) for name in config.generators]
    members = enumerate_commutant([bm for _, bm in gens], config.max_radius)
    ring = ModularRing(config.s)
    catalog = _multiplication_catalog(alphabet, config.max_radius)
    labels = []
    for member in members:
        if is_linear(member, ring):
            labels.append("linear")
        elif any(maps_equal(member, rule) for rule in catalog):
            labels.append("multiplication")
        else:
            labels.append("other")
    candidate_count = config.s ** (config.s ** (config.max_radius + 1))
    return CommutantReport(config, tuple(name for name, _ in gens),
                           candidate_count, tuple(members), tuple(labels))


# --- witness suite ------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessSuiteReport:
    config: ExperimentConfig
    parts: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return all(part["passed"] for part in self.parts)

    def to_dict(self) -> dict:
        return {
            "report": "witness-suite",
            "config": self.config.to_dict(),
            "passed": self.passed,
            "parts": list(self.parts),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv_module.writer(buf)
        writer.writerow(["part", "passed"])
        for part in self.parts:
            writer.writerow([part["check"], part["passed"]])
        return buf.getvalue()


def _sabotaged_prime_rule(p: int, m: int) -> BlockMap:
    """Times-p rule with the entry for the source's first window flipped."""
    from .symcore import champernowne, thue_morse
    s = p**m
    alphabet = Alphabet(s)
    rule = mul_prime(alphabet, p)
    source = thue_morse(alphabet) if p == 2 else champernowne(alphabet, base=2)
    idx = block_index(source.prefix_of(2), s)
    table = list(rule.table)
    table[idx] = (table[idx] + 1) % s
    return BlockMap(alphabet, 1, tuple(table))


def _fixed_set_check(sabotage: bool, span: int = 20) -> dict:
    """The product rule fixes each single-1 sequence and the zero sequence."""
    alphabet = Alphabet(2)
    rule, least_period = product_rule_map((0, 0), alphabet)
    if sabotage:
        table = list(rule.table)
        table[0] = 1 - table[0]
        rule = BlockMap(alphabet, 2, tuple(table))
    two_sided = embed_one_sided(rule)
    failures = []
    for i in range(-span, span + 1):
        point = basis_biseq(alphabet, i)
        if not biseq_equal(apply2(two_sided, point), point):
            failures.append({"position": i, "reason": "single-1 sequence moved"})
            break
    if not failures and not biseq_equal(apply2(two_sided, zero_biseq(alphabet)),
                                        zero_biseq(alphabet)):
        failures.append({"position": None, "reason": "zero sequence moved"})
    return {
        "check": "fixed-set",
        "rule_least_period": least_period,
        "span": span,
        "passed": not failures,
        "failures": failures,
    }


def witness_suite(config: ExperimentConfig) -> WitnessSuiteReport:
    """The three non-density witnesses, with an optional sabotage mode.

    Sabotage flips a single table entry in each witness's rule; every part
    must then fail, guarding the suite against vacuous passes.
    """
    rule = _sabotaged_prime_rule(config.p, config.m) if config.sabotage else None
    part1 = prime_power_witness(
        config.p, config.m, steps=config.steps,
        prefix_len=max(config.steps + 2, 200), rule=rule).to_dict()
    part2 = divisible_digits_witness(
        config.s, trials=config.trials, seed=config.rng_seed,
        sabotage=config.sabotage).to_dict()
    part3 = _fixed_set_check(config.sabotage)
    return WitnessSuiteReport(config, (part1, part2, part3))


# --- lacunary orbit ------------------------------------------------------------------------

@dataclass(frozen=True)
class LacunaryReport:
    config: ExperimentConfig
    value: Fraction
    limit_points: tuple[Fraction, ...]
    rows: tuple[tuple[int, Fraction, Fraction, Fraction], ...]

    @property
    def passed(self) -> bool:
        return True

    @property
    def max_distance(self) -> Fraction:
        return max(row[3] for row in self.rows)

    def to_dict(self) -> dict:
        return {
            "report": "lacunary",
            "config": self.config.to_dict(),
            "value": fraction_str(self.value),
            "limit_points": [fraction_str(t) for t in self.limit_points],
            "rows": [
                {"step": step, "value": fraction_str(v),
                 "nearest": fraction_str(nearest), "distance": fraction_str(d)}
                for step, v, nearest, d in self.rows
            ],
            "max_distance": fraction_str(self.max_distance),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv_module.writer(buf)
        writer.writerow(["step", "value", "nearest", "distance"])
        for step, v, nearest, d in self.rows:
            writer.writerow([step, fraction_str(v), fraction_str(nearest),
                             fraction_str(d)])
        return buf.getvalue()


def lacunary_orbit(config: ExperimentConfig) -> LacunaryReport:
    """Orbit of a truncated lacunary point under the times-p rule.

    The point sum(p^-i^2, i <= truncation) is rational, so its expansion and
    the whole orbit stay exact; each step reports the circle distance to the
    nearest of the limit points {0, p^-1, ..., p^-depth}.
    """
    p, m = config.p, config.m
    x = sum(Fraction(1, p ** (i * i)) for i in range(1, config.truncation + 1))
    alphabet = Alphabet(p**m)
    seq = preimages(x, alphabet)[0]
    limits = [Fraction(0)] + [Fraction(1, p**j) for j in range(1, config.depth + 1)]
    rule = mul_prime(alphabet, p)
    rows = []
    for step in range(config.steps + 1):
        v = evaluate(seq)
        best = min(limits, key=lambda t: min(abs(v - t), 1 - abs(v - t)))
        dist = min(abs(v - best), 1 - abs(v - best))
        rows.append((step, v, best, dist))
        seq = apply_seq(rule, seq)
    return LacunaryReport(config, x, tuple(limits), tuple(rows))
