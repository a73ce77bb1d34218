"""Alphabets, finite words, and exact representations of one-sided sequences.

Two kinds of infinite sequences are supported exactly:

* eventually periodic sequences, stored as a finite prefix plus a repeating
  cycle, with a canonical (minimal) form;
* lazily generated aperiodic ("rich") sequences, stored as a deterministic
  index -> symbol rule so that every experiment is reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .caps import EnumerationCapError, current_cap


@dataclass(frozen=True)
class Alphabet:
    """Symbol set {0, 1, ..., size-1}."""

    size: int

    def __post_init__(self):
        if self.size < 2:
            raise ValueError(f"alphabet needs at least 2 symbols, got {self.size}")

    def check(self, symbols: Iterable[int]) -> tuple[int, ...]:
        out = tuple(symbols)
        for a in out:
            if not (0 <= a < self.size):
                raise ValueError(f"symbol {a} out of range for alphabet of size {self.size}")
        return out


@dataclass(frozen=True)
class Word:
    """Finite word over an alphabet."""

    alphabet: Alphabet
    symbols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", self.alphabet.check(self.symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def __iter__(self):
        return iter(self.symbols)


def as_symbols(w: Union[Word, Sequence[int]]) -> tuple[int, ...]:
    """Accept either a Word or a plain sequence of symbols."""
    if isinstance(w, Word):
        return w.symbols
    return tuple(w)


@dataclass(frozen=True)
class EventuallyPeriodicSeq:
    """Sequence equal to ``prefix`` followed by ``cycle`` repeated forever.

    symbol(n) = prefix[n] for n < b, else cycle[(n - b) % c], where
    b = len(prefix) and c = len(cycle) >= 1.  Construction does not force
    the canonical (minimal b, then minimal c) form; use canonicalize().
    """

    alphabet: Alphabet
    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", self.alphabet.check(self.prefix))
        object.__setattr__(self, "cycle", self.alphabet.check(self.cycle))
        if len(self.cycle) < 1:
            raise ValueError("cycle must be nonempty")

    @property
    def b(self) -> int:
        return len(self.prefix)

    @property
    def c(self) -> int:
        return len(self.cycle)

    def symbol(self, n: int) -> int:
        if n < 0:
            raise IndexError("one-sided sequence")
        if n < len(self.prefix):
            return self.prefix[n]
        return self.cycle[(n - len(self.prefix)) % len(self.cycle)]

    def prefix_of(self, n: int) -> tuple[int, ...]:
        """First n symbols."""
        b, c = len(self.prefix), len(self.cycle)
        if n <= b:
            return self.prefix[:n]
        reps = (n - b) // c + 1
        return (self.prefix + self.cycle * reps)[:n]

    def is_canonical(self) -> bool:
        return canonicalize(self) == self


def primitive_root(w: tuple[int, ...]) -> tuple[int, ...]:
    """Shortest word u with w = u repeated; w itself if already primitive."""
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w == w[:d] * (n // d):
            return w[:d]
    return w


def canonicalize(seq: EventuallyPeriodicSeq) -> EventuallyPeriodicSeq:
    """Equal sequence with minimal prefix length, then minimal cycle length.

    The prefix shrinks while its last symbol agrees with the symbol one cycle
    later (i.e. the cycle's last symbol); the cycle is reduced to its
    primitive root.  Idempotent.
    """
    cycle = primitive_root(seq.cycle)
    prefix = seq.prefix
    while prefix and prefix[-1] == cycle[-1]:
        cycle = (cycle[-1],) + cycle[:-1]
        prefix = prefix[:-1]
    # absorbing can only rotate the primitive root, never shorten it further
    return EventuallyPeriodicSeq(seq.alphabet, prefix, cycle)


def constant_seq(alphabet: Alphabet, symbol: int) -> EventuallyPeriodicSeq:
    return EventuallyPeriodicSeq(alphabet, (), (symbol,))


class LazySequence:
    """Deterministic aperiodic sequence given by a pure index -> symbol rule.

    Instances memoize generated symbols; the rule itself is a pure function
    of the index, so prefixes are reproducible across runs and processes.
    """

    def __init__(self, alphabet: Alphabet, name: str,
                 fill: Callable[[list[int], int], None]):
        self.alphabet = alphabet
        self.name = name
        self._fill = fill
        self._buf: list[int] = []

    def __repr__(self):
        return f"LazySequence({self.name!r}, s={self.alphabet.size})"

    def __eq__(self, other):
        return (isinstance(other, LazySequence)
                and self.alphabet == other.alphabet and self.name == other.name)

    def __hash__(self):
        return hash((self.alphabet, self.name))

    def symbol(self, n: int) -> int:
        if n >= len(self._buf):
            self._fill(self._buf, n + 1)
        return self._buf[n]

    def prefix_of(self, n: int) -> tuple[int, ...]:
        if n > len(self._buf):
            self._fill(self._buf, n)
        return tuple(self._buf[:n])


def champernowne(alphabet: Alphabet, base: int | None = None) -> LazySequence:
    """Concatenation of all words over the base in length-then-lex order.

    Every finite word over the base appears by construction, so the sequence
    is aperiodic and supplies arbitrarily long distinct windows.  When
    ``base`` is smaller than the alphabet size the sequence is digit
    restricted (only symbols < base occur).
    """
    b = alphabet.size if base is None else base
    if not (2 <= b <= alphabet.size):
        raise ValueError(f"base must be in 2..{alphabet.size}")

    def fill(buf: list[int], upto: int) -> None:
        length = 1
        # fast-forward over the word blocks already emitted
        emitted = 0
        while emitted + length * b**length <= len(buf):
            emitted += length * b**length
            length += 1
        # drop the partially emitted block and regenerate it
        del buf[emitted:]
        while len(buf) < upto:
            for word in itertools.product(range(b), repeat=length):
                buf.extend(word)
                if len(buf) >= upto:
                    break
            else:
                length += 1

    name = "champernowne" if b == alphabet.size else f"champernowne-base-{b}"
    return LazySequence(alphabet, name, fill)


def thue_morse(alphabet: Alphabet) -> LazySequence:
    """Parity-of-bit-count sequence over {0, 1}, embedded in the alphabet."""

    def fill(buf: list[int], upto: int) -> None:
        for n in range(len(buf), upto):
            buf.append(bin(n).count("1") & 1)

    return LazySequence(alphabet, "thue-morse", fill)


def substitution_sequence(alphabet: Alphabet, rules: dict[int, tuple[int, ...]],
                          name: str | None = None) -> LazySequence:
    """Fixed point of a substitution, starting from the first rule's symbol.

    The start symbol's image must begin with the symbol itself and have
    length >= 2, so iterating the substitution converges to a unique
    infinite fixed point.
    """
    if not rules:
        raise ValueError("empty substitution")
    axiom = next(iter(rules))
    image = rules[axiom]
    if len(image) < 2 or image[0] != axiom:
        raise ValueError("start symbol's image must begin with itself and expand")
    for sym, img in rules.items():
        alphabet.check((sym,))
        alphabet.check(img)
        if not img:
            raise ValueError("substitution images must be nonempty")

    def fill(buf: list[int], upto: int) -> None:
        if not buf:
            buf.append(axiom)
        while len(buf) < upto:
            step: list[int] = []
            for sym in buf:
                step.extend(rules[sym])
                if len(step) >= upto:
                    break
            buf[:] = step

    rule_txt = ";".join(
        f"{k}->{''.join(map(str, v))}" for k, v in rules.items())
    return LazySequence(alphabet, name or f"subst:{rule_txt}", fill)


SequenceSource = Union[EventuallyPeriodicSeq, LazySequence]


def take(source: Union[SequenceSource, Word, Sequence[int]], n: int) -> tuple[int, ...]:
    """First n symbols of any sequence-like source."""
    if isinstance(source, (EventuallyPeriodicSeq, LazySequence)):
        return source.prefix_of(n)
    out = as_symbols(source)
    if len(out) < n:
        raise ValueError(f"need {n} symbols, source has {len(out)}")
    return out[:n]


def detect_eventual_period(prefix: Union[Word, Sequence[int]]) -> tuple[int, int] | None:
    """Smallest (b, c) consistent with the prefix, or None.

    Scans pairs ordered by b + c then by c, requiring 3 * (b + c) <= L as a
    confidence margin, and checks that positions b .. L-1 are c-periodic.
    On a prefix of an eventually periodic sequence with 3 * (b + c) <= L this
    recovers exactly the canonical parameters.
    """
    w = as_symbols(prefix)
    L = len(w)
    if L == 0:
        raise ValueError("empty input")
    for total in range(1, L // 3 + 1):
        for c in range(1, total + 1):
            b = total - c
            if all(w[i] == w[i + c] for i in range(b, L - c)):
                return (b, c)
    return None


def word_variety_length(seq: EventuallyPeriodicSeq) -> int:
    """Minimal window length making the first b+c-1 windows pairwise distinct.

    Requires a canonical sequence.  The suffix streams starting at positions
    0 .. b+c-2 are pairwise distinct infinite sequences, so some finite
    window length separates them; any two such streams that agree on
    b + 2c positions would be identical.
    """
    if not seq.is_canonical():
        raise ValueError("sequence must be canonical")
    b, c = seq.b, seq.c
    n = b + c - 1
    if n == 0:
        return 1
    horizon = b + 2 * c + 1
    for k in range(1, horizon + 1):
        windows = {seq.prefix_of(i + k)[i:] for i in range(n)}
        if len(windows) == n:
            return k
    raise AssertionError("distinct windows must exist below the periodicity horizon")


def enumerate_eventually_periodic(b: int, c: int, alphabet: Alphabet,
                                  cap: int | None = None) -> list[EventuallyPeriodicSeq]:
    """All sequences with some length-b prefix / length-c cycle representation.

    Equivalently: all b', c'-eventually periodic sequences with b' <= b and
    c' dividing c.  Returned in canonical form, deduplicated, sorted
    lexicographically on (prefix, cycle) for deterministic output.
    """
    if b < 0 or c < 1:
        raise ValueError("need b >= 0 and c >= 1")
    s = alphabet.size
    count = s ** (b + c)
    limit = current_cap() if cap is None else cap
    if count > limit:
        raise EnumerationCapError("enumeration too large", count, limit)
    seen = set()
    out = []
    for symbols in itertools.product(range(s), repeat=b + c):
        canon = canonicalize(
            EventuallyPeriodicSeq(alphabet, symbols[:b], symbols[b:]))
        key = (canon.prefix, canon.cycle)
        if key not in seen:
            seen.add(key)
            out.append(canon)
    out.sort(key=lambda e: (e.prefix, e.cycle))
    return out
