"""Two-sided cellular automata with separate memory and anticipation.

A two-sided rule reads the window a_{k-memory} .. a_{k+anticipation} around
the output position; the symmetric-radius form is the special case
memory = anticipation.  One-sided maps embed with memory 0, and the inverse
shift appears as the memory-1 map returning its leftmost symbol.  Unlike the
one-sided case, equality of two-sided maps allows trimming ignored
coordinates at both window ends (absolute positions make the leading trim
meaningful).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .ca1d import BlockMap, index_block
from .symcore import Alphabet, primitive_root


@dataclass(frozen=True)
class TwoSidedBlockMap:
    """Local rule over the window [-memory, +anticipation] around each cell.

    table[index(a_{-m} .. a_{+a})] with the leftmost (most negative offset)
    symbol most significant.
    """

    alphabet: Alphabet
    memory: int
    anticipation: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", self.alphabet.check(self.table))
        if self.memory < 0 or self.anticipation < 0:
            raise ValueError("memory and anticipation must be >= 0")
        want = self.alphabet.size ** (self.memory + self.anticipation + 1)
        if len(self.table) != want:
            raise ValueError(f"table needs {want} entries, got {len(self.table)}")

    @property
    def width(self) -> int:
        return self.memory + self.anticipation + 1


@dataclass(frozen=True)
class BiSeq:
    """Bi-infinite sequence, eventually periodic in both directions.

    symbol(z) follows the left cycle for z < start (phase tied to the
    absolute index: left[z % len(left)]), the core word on
    [start, start + len(core)), and the right cycle afterwards (again with
    absolute phase right[z % len(right)]).  Construction does not force the
    canonical form; use canonical().
    """

    alphabet: Alphabet
    left: tuple[int, ...]
    core: tuple[int, ...]
    right: tuple[int, ...]
    start: int = 0

    def __post_init__(self):
        object.__setattr__(self, "left", self.alphabet.check(self.left))
        object.__setattr__(self, "core", self.alphabet.check(self.core))
        object.__setattr__(self, "right", self.alphabet.check(self.right))
        if not self.left or not self.right:
            raise ValueError("cycles must be nonempty")

    @property
    def end(self) -> int:
        return self.start + len(self.core)

    def symbol(self, z: int) -> int:
        if z < self.start:
            return self.left[z % len(self.left)]
        if z < self.end:
            return self.core[z - self.start]
        return self.right[z % len(self.right)]

    def window(self, lo: int, hi: int) -> tuple[int, ...]:
        return tuple(self.symbol(z) for z in range(lo, hi))

    def canonical(self) -> "BiSeq":
        left = primitive_root(self.left)
        right = primitive_root(self.right)
        core = self.core
        start = self.start
        while core and core[0] == left[start % len(left)]:
            core = core[1:]
            start += 1
        while core and core[-1] == right[(start + len(core) - 1) % len(right)]:
            core = core[:-1]
        if core:
            return BiSeq(self.alphabet, left, core, right, start)
        if left == right:
            return BiSeq(self.alphabet, left, (), right, 0)
        # empty core: move the boundary as far left as the patterns agree
        bound = len(left) * len(right)
        for _ in range(bound + 1):
            if left[(start - 1) % len(left)] != right[(start - 1) % len(right)]:
                break
            start -= 1
        return BiSeq(self.alphabet, left, (), right, start)


def biseq_equal(a: BiSeq, b: BiSeq) -> bool:
    ca, cb = a.canonical(), b.canonical()
    return (ca.alphabet, ca.left, ca.core, ca.right, ca.start) == \
        (cb.alphabet, cb.left, cb.core, cb.right, cb.start)


def zero_biseq(alphabet: Alphabet) -> BiSeq:
    return BiSeq(alphabet, (0,), (), (0,), 0)


def basis_biseq(alphabet: Alphabet, position: int) -> BiSeq:
    """All zeros except a single 1 at the given position."""
    return BiSeq(alphabet, (0,), (1,), (0,), position)


def embed_one_sided(bm: BlockMap) -> TwoSidedBlockMap:
    """One-sided rules are two-sided rules with memory 0."""
    return TwoSidedBlockMap(bm.alphabet, 0, bm.radius, bm.table)


def shift2(alphabet: Alphabet, power: int = 1) -> TwoSidedBlockMap:
    """Left shift iterated ``power`` times, as a two-sided rule."""
    if power < 0:
        return shift_inverse_power(alphabet, -power)
    s = alphabet.size
    return TwoSidedBlockMap(alphabet, 0, power,
                            tuple(i % s for i in range(s ** (power + 1))))


def shift_inverse(alphabet: Alphabet) -> TwoSidedBlockMap:
    return shift_inverse_power(alphabet, 1)


def shift_inverse_power(alphabet: Alphabet, power: int) -> TwoSidedBlockMap:
    """Right shift iterated ``power`` times: memory k, output a_{z-k}."""
    if power < 0:
        return shift2(alphabet, -power)
    s = alphabet.size
    width = s ** (power + 1)
    return TwoSidedBlockMap(alphabet, power, 0,
                            tuple(i // s**power for i in range(width)))


def compose2(outer: TwoSidedBlockMap, inner: TwoSidedBlockMap) -> TwoSidedBlockMap:
    """outer after inner; memory and anticipation add."""
    if outer.alphabet != inner.alphabet:
        raise ValueError("mixed alphabets")
    s = outer.alphabet.size
    memory = outer.memory + inner.memory
    anticipation = outer.anticipation + inner.anticipation
    total = memory + anticipation + 1
    inner_mod = s ** inner.width
    ot, it_ = outer.table, inner.table
    # the outer rule reads inner outputs at offsets -outer.memory .. +outer.anticipation;
    # the inner window for offset j spans slice positions j - inner.memory + memory ..
    shifts = [s ** (total - 1 - (j + inner.anticipation + memory))
              for j in range(-outer.memory, outer.anticipation + 1)]
    table = []
    for widx in range(s ** total):
        idx = 0
        for sh in shifts:
            idx = idx * s + it_[(widx // sh) % inner_mod]
        table.append(ot[idx])
    return TwoSidedBlockMap(outer.alphabet, memory, anticipation, tuple(table))


def normalize2(tm: TwoSidedBlockMap) -> TwoSidedBlockMap:
    """Minimal window: trim ignored coordinates at both ends.

    The window always keeps the output position itself, so memory and
    anticipation never go below zero.
    """
    s = tm.alphabet.size
    memory, anticipation, table = tm.memory, tm.anticipation, tm.table
    while anticipation > 0:
        groups = len(table) // s
        if any(table[g * s] != table[g * s + d]
               for g in range(groups) for d in range(1, s)):
            break
        table = tuple(table[g * s] for g in range(groups))
        anticipation -= 1
    while memory > 0:
        chunk = len(table) // s
        if any(table[i] != table[i + d * chunk]
               for d in range(1, s) for i in range(chunk)):
            break
        table = table[:chunk]
        memory -= 1
    return TwoSidedBlockMap(tm.alphabet, memory, anticipation, table)


def maps_equal2(a: TwoSidedBlockMap, b: TwoSidedBlockMap) -> bool:
    na, nb = normalize2(a), normalize2(b)
    return (na.memory, na.anticipation, na.table) == (nb.memory, nb.anticipation, nb.table)


def identity2(alphabet: Alphabet) -> TwoSidedBlockMap:
    return TwoSidedBlockMap(alphabet, 0, 0, tuple(range(alphabet.size)))


@dataclass(frozen=True)
class Commutation2:
    ok: bool
    witness: tuple[int, ...] | None

    def __bool__(self) -> bool:
        return self.ok


def commutes2(a: TwoSidedBlockMap, b: TwoSidedBlockMap) -> Commutation2:
    """Two-sided commutation; witness is the lex-smallest disagreeing window."""
    lhs = compose2(a, b)
    rhs = compose2(b, a)
    for idx, (x, y) in enumerate(zip(lhs.table, rhs.table)):
        if x != y:
            window = index_block(idx, lhs.width, a.alphabet.size)
            return Commutation2(False, window)
    return Commutation2(True, None)


def one_sided_part(tm: TwoSidedBlockMap) -> BlockMap | None:
    """The one-sided rule when the normalized memory is zero, else None."""
    n = normalize2(tm)
    if n.memory != 0:
        return None
    return BlockMap(n.alphabet, n.anticipation, n.table)


def shift_into_one_sided(tm: TwoSidedBlockMap) -> tuple[int, BlockMap]:
    """Compose with the k-th shift, k = normalized memory, to reach memory 0.

    Returns (k, one-sided rule): the rule of shift^k after tm, which acts on
    the one-sided shift space.
    """
    n = normalize2(tm)
    k = n.memory
    shifted = normalize2(compose2(shift2(n.alphabet, k), n))
    one_sided = one_sided_part(shifted)
    assert one_sided is not None
    return k, one_sided


def apply2(tm: TwoSidedBlockMap, seq: BiSeq) -> BiSeq:
    """Exact image of a bi-eventually-periodic sequence, canonical form.

    Output positions whose window lies fully inside one cycle region repeat
    with that cycle's length; only the zone around the core needs direct
    evaluation.
    """
    if tm.alphabet != seq.alphabet:
        raise ValueError("mixed alphabets")
    m, a = tm.memory, tm.anticipation
    table = tm.table
    s = tm.alphabet.size

    def image_at(z: int) -> int:
        idx = 0
        for t in range(z - m, z + a + 1):
            idx = idx * s + seq.symbol(t)
        return table[idx]

    lo = seq.start - a
    hi = seq.end + m
    left_len = len(seq.left)
    right_len = len(seq.right)
    left = [0] * left_len
    for z in range(lo - left_len, lo):
        left[z % left_len] = image_at(z)
    right = [0] * right_len
    for z in range(hi, hi + right_len):
        right[z % right_len] = image_at(z)
    core = tuple(image_at(z) for z in range(lo, hi))
    return BiSeq(seq.alphabet, tuple(left), core, tuple(right), lo).canonical()


def apply2_window(tm: TwoSidedBlockMap, symbol_at: Callable[[int], int],
                  lo: int, hi: int) -> tuple[int, ...]:
    """Image symbols on [lo, hi) of an arbitrary bi-infinite sequence."""
    s = tm.alphabet.size
    out = []
    for z in range(lo, hi):
        idx = 0
        for t in range(z - tm.memory, z + tm.anticipation + 1):
            idx = idx * s + symbol_at(t)
        out.append(tm.table[idx])
    return tuple(out)


def mul_inverse(alphabet: Alphabet, u: int) -> tuple[int, TwoSidedBlockMap]:
    """Two-sided inverse of the times-u rule: shift back k, multiply by s^k / u.

    k is minimal with u dividing s^k.  Returns (k, inverse rule, normalized);
    composing with the embedded times-u rule in either order yields the
    identity.
    """
    from .mulca import mul_map
    s = alphabet.size
    if u <= 0:
        raise ValueError("only positive multipliers are invertible this way")
    k = 1
    while s**k % u != 0:
        k += 1
        if k > 64:
            raise ValueError(f"{u} divides no power of {s}")
    v = s**k // u
    candidate = compose2(shift_inverse_power(alphabet, k),
                         embed_one_sided(mul_map(alphabet, v)))
    return k, normalize2(candidate)
