"""Textual literals and bit-exact file formats.

Sequence literal      s=<s> pre=<ints,> cyc=<ints,>   (eventually periodic)
                      s=<s> gen=<name>                (lazy aperiodic)
Block-map file        CA1 s=<s> r=<r>     + one line of table symbols
Two-sided map file    CA2 s=<s> m=<m> a=<a> + table line
Bi-sequence literal   s=<s> left=<ints,> core=<ints,> right=<ints,> [at=<z>]
Polynomial literal    ring=mod:<s>|gf:<p>^<m> coeffs=<ints,>

Table symbols are space-separated integers in table-lex order (leftmost
window symbol most significant).
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Union

from .ca1d import BlockMap, product_rule_map, shift_map, identity_map
from .ca2d import BiSeq, TwoSidedBlockMap
from .linca import FiniteField, ModularRing, Ring, ShiftPolynomial, poly_to_map
from .mulca import mirror_map, mul_map, zero_map
from .symcore import (
    Alphabet,
    EventuallyPeriodicSeq,
    LazySequence,
    champernowne,
    substitution_sequence,
    thue_morse,
)


def _tokens(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for token in text.split():
        if "=" not in token:
            raise ValueError(f"expected key=value, got {token!r}")
        key, value = token.split("=", 1)
        out[key] = value
    return out


def _ints(csv: str) -> tuple[int, ...]:
    if csv == "":
        return ()
    return tuple(int(x) for x in csv.split(","))


def _csv(values) -> str:
    return ",".join(str(v) for v in values)


# --- sequences ----------------------------------------------------------------

def parse_sequence_literal(text: str) -> Union[EventuallyPeriodicSeq, LazySequence]:
    kv = _tokens(text)
    if "s" not in kv:
        raise ValueError("sequence literal needs s=<size>")
    alphabet = Alphabet(int(kv["s"]))
    if "gen" in kv:
        return _generator_by_name(alphabet, kv["gen"])
    if "cyc" not in kv:
        raise ValueError("sequence literal needs cyc= or gen=")
    return EventuallyPeriodicSeq(alphabet, _ints(kv.get("pre", "")), _ints(kv["cyc"]))


def _generator_by_name(alphabet: Alphabet, name: str) -> LazySequence:
    if name == "champernowne":
        return champernowne(alphabet)
    if name.startswith("champernowne-base-"):
        return champernowne(alphabet, base=int(name.rsplit("-", 1)[1]))
    if name == "thue-morse":
        return thue_morse(alphabet)
    if name.startswith("subst:"):
        rules = {}
        for rule in name[len("subst:"):].split(";"):
            lhs, rhs = rule.split("->")
            rules[int(lhs)] = tuple(int(ch) for ch in rhs)
        return substitution_sequence(alphabet, rules)
    raise ValueError(f"unknown generator {name!r}")


def sequence_literal(seq: Union[EventuallyPeriodicSeq, LazySequence]) -> str:
    if isinstance(seq, LazySequence):
        return f"s={seq.alphabet.size} gen={seq.name}"
    return f"s={seq.alphabet.size} pre={_csv(seq.prefix)} cyc={_csv(seq.cycle)}"


# --- block maps ----------------------------------------------------------------

def serialize_block_map(bm: BlockMap) -> str:
    table = " ".join(str(v) for v in bm.table)
    return f"CA1 s={bm.alphabet.size} r={bm.radius}\n{table}\n"


def parse_block_map(text: str) -> BlockMap:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) != 2 or not lines[0].startswith("CA1 "):
        raise ValueError("block-map file needs a CA1 header line and a table line")
    kv = _tokens(lines[0][4:])
    alphabet = Alphabet(int(kv["s"]))
    radius = int(kv["r"])
    table = tuple(int(v) for v in lines[1].split())
    return BlockMap(alphabet, radius, table)


def serialize_two_sided(tm: TwoSidedBlockMap) -> str:
    table = " ".join(str(v) for v in tm.table)
    return f"CA2 s={tm.alphabet.size} m={tm.memory} a={tm.anticipation}\n{table}\n"


def parse_two_sided(text: str) -> TwoSidedBlockMap:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) != 2 or not lines[0].startswith("CA2 "):
        raise ValueError("two-sided file needs a CA2 header line and a table line")
    kv = _tokens(lines[0][4:])
    return TwoSidedBlockMap(Alphabet(int(kv["s"])), int(kv["m"]), int(kv["a"]),
                            tuple(int(v) for v in lines[1].split()))


# --- bi-sequences -----------------------------------------------------------------

def parse_biseq_literal(text: str) -> BiSeq:
    kv = _tokens(text)
    alphabet = Alphabet(int(kv["s"]))
    return BiSeq(alphabet, _ints(kv["left"]), _ints(kv.get("core", "")),
                 _ints(kv["right"]), int(kv.get("at", "0")))


def biseq_literal(b: BiSeq) -> str:
    base = (f"s={b.alphabet.size} left={_csv(b.left)} "
            f"core={_csv(b.core)} right={_csv(b.right)}")
    if b.start:
        base += f" at={b.start}"
    return base


# --- polynomials --------------------------------------------------------------------

def parse_ring(text: str) -> Ring:
    if text.startswith("mod:"):
        return ModularRing(int(text[4:]))
    if text.startswith("gf:"):
        p, m = text[3:].split("^")
        return FiniteField(int(p), int(m))
    raise ValueError(f"unknown ring {text!r}; use mod:<s> or gf:<p>^<m>")


def parse_poly_literal(text: str) -> ShiftPolynomial:
    kv = _tokens(text)
    return ShiftPolynomial(parse_ring(kv["ring"]), _ints(kv["coeffs"]))


def poly_literal(poly: ShiftPolynomial) -> str:
    return f"ring={poly.ring.name} coeffs={_csv(poly.coeffs)}"


# --- named map builders ----------------------------------------------------------------

def resolve_map(spec: str, alphabet: Alphabet | None = None) -> BlockMap:
    """Build a block map from a short name, an inline CA1 literal, or a file.

    Short names: id, sigma, sigma^<k>, zero, mirror, mu:<u>, prod:<bits>,
    poly:<c0,c1,...> (coefficients over mod s).  Short names need the
    alphabet argument.
    """
    if spec.startswith("CA1"):
        return parse_block_map(spec)
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return parse_block_map(fh.read())
    if alphabet is None:
        raise ValueError(f"alphabet required to resolve {spec!r}")
    if spec == "id":
        return identity_map(alphabet)
    if spec == "sigma":
        return shift_map(alphabet)
    if spec.startswith("sigma^"):
        return shift_map(alphabet, int(spec[6:]))
    if spec == "zero":
        return zero_map(alphabet)
    if spec == "mirror":
        return mirror_map(alphabet)
    if spec.startswith("mu:"):
        return mul_map(alphabet, int(spec[3:]))
    if spec.startswith("prod:"):
        deltas = tuple(int(ch) for ch in spec[5:])
        return product_rule_map(deltas, alphabet)[0]
    if spec.startswith("poly:"):
        return poly_to_map(ShiftPolynomial(ModularRing(alphabet.size), _ints(spec[5:])))
    raise ValueError(f"cannot resolve map {spec!r}")


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"
