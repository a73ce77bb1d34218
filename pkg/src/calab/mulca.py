"""Multiplication cellular automata and the exact evaluation map onto the torus.

A digit sequence over s symbols names the point sum(a_n / s^(n+1)) of the
circle; the maps built here realize multiplication by integers u whose prime
factors divide s, digit by digit.  Everything is exact: torus points are
``fractions.Fraction`` values reduced into [0, 1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .ca1d import BlockMap, apply, apply_seq, compose, constant_map, identity_map, normalize
from .symcore import (
    Alphabet,
    EventuallyPeriodicSeq,
    LazySequence,
    Word,
    as_symbols,
    canonicalize,
    champernowne,
    thue_morse,
)


def prime_factorization(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError("need a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factorization(n) == {n: 1}


@dataclass(frozen=True)
class MulSpec:
    """Multiplier u = (-1)^e0 * p1^e1 * ... * pd^ed with every p_i dividing s."""

    alphabet: Alphabet
    u: int

    def __post_init__(self):
        s = self.alphabet.size
        for p in self.factors:
            if s % p != 0:
                raise ValueError(
                    f"prime factor {p} of {self.u} does not divide alphabet size {s}")

    @property
    def factors(self) -> dict[int, int]:
        return prime_factorization(abs(self.u)) if abs(self.u) > 1 else {}


def mul_prime(alphabet: Alphabet, p: int) -> BlockMap:
    """Radius-1 rule (p*a_k + floor(p*a_{k+1} / s)) mod s for a prime p | s."""
    s = alphabet.size
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if s % p != 0:
        raise ValueError(f"{p} does not divide alphabet size {s}")
    table = tuple((p * a + (p * b) // s) % s
                  for a in range(s) for b in range(s))
    return BlockMap(alphabet, 1, table)


def mirror_map(alphabet: Alphabet) -> BlockMap:
    """Digitwise complement a -> s-1-a; represents multiplication by -1.

    The complement swaps the upper and lower expansions of a point, which is
    exactly the behavior that realizes negation on the circle.
    """
    s = alphabet.size
    return BlockMap(alphabet, 0, tuple(s - 1 - a for a in range(s)))


def zero_map(alphabet: Alphabet) -> BlockMap:
    return constant_map(alphabet, 0)


def mul_map(alphabet: Alphabet, u: int) -> BlockMap:
    """Composite multiplication rule for any valid multiplier, normalized."""
    spec = MulSpec(alphabet, u)
    if u == 0:
        return zero_map(alphabet)
    out = identity_map(alphabet)
    for p, e in sorted(spec.factors.items()):
        step = mul_prime(alphabet, p)
        for _ in range(e):
            out = compose(out, step)
    if u < 0:
        out = compose(mirror_map(alphabet), out)
    return normalize(out)


def evaluate(seq: EventuallyPeriodicSeq) -> Fraction:
    """Exact value sum(a_n / s^(n+1)) reduced modulo 1 into [0, 1)."""
    s = seq.alphabet.size
    b, c = seq.b, seq.c
    prefix_value = 0
    for a in seq.prefix:
        prefix_value = prefix_value * s + a
    cycle_value = 0
    for a in seq.cycle:
        cycle_value = cycle_value * s + a
    value = Fraction(prefix_value * (s**c - 1) + cycle_value,
                     s**b * (s**c - 1))
    return value % 1


def preimages(x: Union[Fraction, int], alphabet: Alphabet,
              include_improper: bool = False) -> list[EventuallyPeriodicSeq]:
    """All base-s expansions of a rational point of [0, 1), canonical forms.

    Exactly two expansions exist (upper, ending in repeating 0, and lower,
    ending in repeating s-1) when x is nonzero and the primes of its reduced
    denominator all divide s; otherwise the expansion is unique.  The point 0
    reports only the all-zero expansion unless ``include_improper`` also asks
    for the all-(s-1) sequence, whose value wraps to 0.
    """
    x = Fraction(x)
    if not 0 <= x < 1:
        raise ValueError("expected a point of [0, 1)")
    s = alphabet.size
    num, den = x.numerator, x.denominator
    digits: list[int] = []
    seen: dict[int, int] = {}
    state = num
    while state not in seen:
        seen[state] = len(digits)
        t = state * s
        digits.append(t // den)
        state = t % den
    start = seen[state]
    upper = canonicalize(EventuallyPeriodicSeq(
        alphabet, tuple(digits[:start]), tuple(digits[start:])))
    if x == 0:
        if include_improper:
            return [upper, EventuallyPeriodicSeq(alphabet, (), (s - 1,))]
        return [upper]
    if upper.cycle == (0,):
        lower = canonicalize(EventuallyPeriodicSeq(
            alphabet, upper.prefix[:-1] + (upper.prefix[-1] - 1,), (s - 1,)))
        return [upper, lower]
    return [upper]


def random_eventually_periodic(alphabet: Alphabet, rng: random.Random,
                               max_prefix: int = 6, max_cycle: int = 6
                               ) -> EventuallyPeriodicSeq:
    """Seeded random sequence: prefix length 0..max_prefix, cycle 1..max_cycle."""
    s = alphabet.size
    b = rng.randint(0, max_prefix)
    c = rng.randint(1, max_cycle)
    return EventuallyPeriodicSeq(
        alphabet,
        tuple(rng.randrange(s) for _ in range(b)),
        tuple(rng.randrange(s) for _ in range(c)))


@dataclass(frozen=True)
class RepresentsReport:
    """Result of checking V(map(a)) = u * V(a) mod 1 on random sequences."""

    u: int
    trials: int
    failures: int
    first_counterexample: dict | None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "check": "represents",
            "u": self.u,
            "trials": self.trials,
            "failures": self.failures,
            "passed": self.passed,
            "first_counterexample": self.first_counterexample,
        }


def represents_check(bm: BlockMap, u: int, trials: int, seed: int) -> RepresentsReport:
    """Exact seeded verification that bm represents multiplication by u."""
    rng = random.Random(seed)
    failures = 0
    first = None
    for trial in range(trials):
        a = random_eventually_periodic(bm.alphabet, rng)
        expected = (u * evaluate(a)) % 1
        got = evaluate(apply_seq(bm, a))
        if got != expected:
            failures += 1
            if first is None:
                first = {
                    "trial": trial,
                    "prefix": list(a.prefix),
                    "cycle": list(a.cycle),
                    "expected": str(expected),
                    "got": str(got),
                }
    return RepresentsReport(u, trials, failures, first)


@dataclass(frozen=True)
class PrimePowerWitnessReport:
    """Orbit of the times-p rule over p^m symbols on a {0,1}-digit sequence.

    Confirms the missing digit p+1 across the whole orbit, and for m = 2 the
    alternation of digit sets {0,1} (even steps) and {0,p} (odd steps).
    """

    p: int
    m: int
    steps: int
    forbidden_digit: int
    alternation_checked: bool
    failures: list[dict]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "check": "prime-power-orbit",
            "p": self.p,
            "m": self.m,
            "steps": self.steps,
            "forbidden_digit": self.forbidden_digit,
            "alternation_checked": self.alternation_checked,
            "passed": self.passed,
            "failures": self.failures,
        }


def prime_power_witness(p: int, m: int, steps: int, prefix_len: int,
                        source: LazySequence | None = None,
                        rule: BlockMap | None = None) -> PrimePowerWitnessReport:
    """Iterate the times-p rule on a {0,1}-valued aperiodic prefix.

    Each application consumes one symbol of context, so the prefix must be
    longer than steps + 1.
    """
    if not is_prime(p) or m < 2:
        raise ValueError("need a prime p and power m >= 2")
    if prefix_len <= steps + 1:
        raise ValueError("prefix exhausted: need prefix_len > steps + 1")
    s = p**m
    alphabet = Alphabet(s)
    if source is None:
        source = thue_morse(alphabet) if p == 2 else champernowne(alphabet, base=2)
    rule = rule or mul_prime(alphabet, p)
    current = source.prefix_of(prefix_len)
    if not set(current) <= {0, 1}:
        raise ValueError("source must use only the digits 0 and 1")
    forbidden = p + 1
    failures: list[dict] = []
    for k in range(1, steps + 1):
        current = apply(rule, current)
        for i, digit in enumerate(current):
            if digit == forbidden:
                failures.append({"step": k, "position": i, "digit": digit,
                                 "reason": "forbidden digit"})
                break
        if m == 2:
            allowed = {0, 1} if k % 2 == 0 else {0, p}
            extra = set(current) - allowed
            if extra:
                digit = min(extra)
                failures.append({"step": k, "position": current.index(digit),
                                 "digit": digit, "reason": "digit set alternation"})
        if failures:
            break
    return PrimePowerWitnessReport(p, m, steps, forbidden, m == 2, failures)


def regroup_base(word: Union[Word, Sequence[int]], p: int, m: int) -> tuple[int, ...]:
    """Reinterpret base-p digits in groups of m as single base-p^m symbols.

    Block j of the input becomes sum(digit * p^(m-1-t)); the regrouped
    sequence names the same point of the circle in the larger base, and
    intertwines the base-p shift with the times-p rule over p^m symbols.
    """
    w = as_symbols(word)
    if p < 2 or m < 1:
        raise ValueError("need base p >= 2 and block size m >= 1")
    Alphabet(p).check(w)
    if len(w) % m != 0:
        raise ValueError(f"length {len(w)} not divisible by block size {m}")
    out = []
    for j in range(0, len(w), m):
        v = 0
        for t in range(m):
            v = v * p + w[j + t]
        out.append(v)
    return tuple(out)
