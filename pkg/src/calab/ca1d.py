"""One-sided cellular automata as exact lookup tables.

A transformation of the one-sided full shift is stored by its local rule: a
table over all blocks of length radius+1, indexed with the leftmost symbol
most significant.  That indexing convention is global; the block-map file
format and every frozen test value depend on it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence, Union

from .caps import EnumerationCapError, current_cap
from .symcore import (
    Alphabet,
    EventuallyPeriodicSeq,
    LazySequence,
    Word,
    as_symbols,
    canonicalize,
)


@dataclass(frozen=True)
class BlockMap:
    """Local rule of a one-sided cellular automaton transformation.

    table[index(a_0 .. a_r)] is the image symbol, where
    index(a_0 .. a_r) = sum a_j * s^(r-j).
    """

    alphabet: Alphabet
    radius: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", self.alphabet.check(self.table))
        if self.radius < 0:
            raise ValueError("radius must be >= 0")
        want = self.alphabet.size ** (self.radius + 1)
        if len(self.table) != want:
            raise ValueError(
                f"table has {len(self.table)} entries, radius {self.radius} needs {want}")

    def __call__(self, block: Sequence[int]) -> int:
        return self.table[block_index(block, self.alphabet.size)]


def block_index(block: Sequence[int], s: int) -> int:
    idx = 0
    for a in block:
        idx = idx * s + a
    return idx


def index_block(idx: int, length: int, s: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        out.append(idx % s)
        idx //= s
    return tuple(reversed(out))


@dataclass(frozen=True)
class SemigroupPresentation:
    """Named generators plus the longest generator word considered."""

    generators: tuple[tuple[str, BlockMap], ...]
    closure_bound: int

    def __post_init__(self):
        if not self.generators:
            raise ValueError("need at least one generator")
        alphabets = {bm.alphabet for _, bm in self.generators}
        if len(alphabets) != 1:
            raise ValueError("generators must share one alphabet")
        if self.closure_bound < 1:
            raise ValueError("closure bound must be positive")

    @property
    def alphabet(self) -> Alphabet:
        return self.generators[0][1].alphabet


def identity_map(alphabet: Alphabet) -> BlockMap:
    return BlockMap(alphabet, 0, tuple(range(alphabet.size)))


def constant_map(alphabet: Alphabet, symbol: int) -> BlockMap:
    return BlockMap(alphabet, 0, (symbol,) * alphabet.size)


def shift_map(alphabet: Alphabet, power: int = 1) -> BlockMap:
    """The left shift composed with itself ``power`` times (power 0 = identity)."""
    if power < 0:
        raise ValueError("one-sided shifts have no inverse")
    s = alphabet.size
    return BlockMap(alphabet, power, tuple(i % s for i in range(s ** (power + 1))))


def apply(bm: BlockMap, word: Union[Word, Sequence[int]]) -> tuple[int, ...]:
    """Slide the local rule over a finite word; output is radius shorter."""
    w = as_symbols(word)
    s = bm.alphabet.size
    r = bm.radius
    if len(w) < r + 1:
        raise ValueError(
            f"insufficient context: need {r + 1} symbols, got {len(w)}")
    table = bm.table
    window_mod = s ** r
    idx = block_index(w[:r + 1], s)
    out = [table[idx]]
    for a in w[r + 1:]:
        idx = (idx % window_mod) * s + a
        out.append(table[idx])
    return tuple(out)


def apply_seq(bm: BlockMap, seq: EventuallyPeriodicSeq) -> EventuallyPeriodicSeq:
    """Exact image of an eventually periodic sequence, in canonical form.

    The image of a (b, c) sequence has prefix length <= b and cycle length
    dividing c, so the image is read off the first b + c output symbols.
    """
    b, c = seq.b, seq.c
    out = apply(bm, seq.prefix_of(b + c + bm.radius))
    return canonicalize(
        EventuallyPeriodicSeq(bm.alphabet, out[:b], out[b:b + c]))


def compose(outer: BlockMap, inner: BlockMap) -> BlockMap:
    """outer after inner, at radius r_outer + r_inner."""
    if outer.alphabet != inner.alphabet:
        raise ValueError("mixed alphabets")
    s = outer.alphabet.size
    ro, ri = outer.radius, inner.radius
    radius = ro + ri
    ot, it_ = outer.table, inner.table
    inner_mod = s ** (ri + 1)
    shifts = [s ** (radius - j - ri) for j in range(ro + 1)]
    table = []
    for widx in range(s ** (radius + 1)):
        idx = 0
        for sh in shifts:
            idx = idx * s + it_[(widx // sh) % inner_mod]
        table.append(ot[idx])
    return BlockMap(outer.alphabet, radius, tuple(table))


def normalize(bm: BlockMap) -> BlockMap:
    """Minimal-radius map equal to bm as a transformation.

    Drops trailing coordinates the table does not depend on.  Leading
    coordinates are never dropped: for one-sided maps removing the leading
    coordinate changes the transformation by a shift.
    """
    s = bm.alphabet.size
    radius, table = bm.radius, bm.table
    while radius > 0:
        groups = len(table) // s
        if any(table[g * s] != table[g * s + d]
               for g in range(groups) for d in range(1, s)):
            break
        table = tuple(table[g * s] for g in range(groups))
        radius -= 1
    return BlockMap(bm.alphabet, radius, table)


def maps_equal(a: BlockMap, b: BlockMap) -> bool:
    if a.alphabet != b.alphabet:
        raise ValueError("mixed alphabets")
    na, nb = normalize(a), normalize(b)
    return na.radius == nb.radius and na.table == nb.table


@dataclass(frozen=True)
class Commutation:
    """Outcome of a commutation check; falsy when the maps do not commute."""

    ok: bool
    witness: tuple[int, ...] | None

    def __bool__(self) -> bool:
        return self.ok


def commutes(a: BlockMap, b: BlockMap) -> Commutation:
    """Check a∘b = b∘a; the witness is the lex-smallest disagreeing block."""
    lhs = compose(a, b)
    rhs = compose(b, a)
    for idx, (x, y) in enumerate(zip(lhs.table, rhs.table)):
        if x != y:
            block = index_block(idx, lhs.radius + 1, a.alphabet.size)
            return Commutation(False, block)
    return Commutation(True, None)


def is_shift_power(bm: BlockMap) -> int | None:
    """Power k when bm equals the k-th shift (0 = identity), else None."""
    n = normalize(bm)
    s = n.alphabet.size
    if n.table == tuple(i % s for i in range(len(n.table))):
        return n.radius
    return None


def _commutation_kernel(s: int, cand_radius: int, gen: BlockMap):
    """Precomputed index tables for checking candidates against one generator.

    For each composite block w (length cand_radius + r_gen + 1):
      lhs  = C[outer_idx[w]]                       (candidate after generator)
      rhs  = gen.table[combine(C[W_j[w]] for j)]   (generator after candidate)
    where C is the candidate table at radius cand_radius.
    """
    rg = gen.radius
    total = cand_radius + rg + 1
    blocks = s ** total
    gen_mod = s ** (rg + 1)
    cand_mod = s ** (cand_radius + 1)
    gtab = gen.table
    outer_idx = []
    for w in range(blocks):
        idx = 0
        for j in range(cand_radius + 1):
            idx = idx * s + gtab[(w // s ** (cand_radius - j)) % gen_mod]
        outer_idx.append(idx)
    windows = []
    for j in range(rg + 1):
        sh = s ** (rg - j)
        windows.append([(w // sh) % cand_mod for w in range(blocks)])
    return blocks, gtab, outer_idx, windows


def enumerate_commutant(gens: Sequence[BlockMap], max_radius: int,
                        cap: int | None = None) -> list[BlockMap]:
    """Every map of radius <= max_radius commuting with all generators.

    Candidates are enumerated as the s^(s^(max_radius+1)) tables at radius
    exactly max_radius, in table-lex order (padding reaches every smaller
    radius); results are normalized, deduplicated and sorted.  Generators
    that are shift powers are skipped: every cellular automaton
    transformation commutes with the shift.
    """
    if not gens:
        raise ValueError("need at least one generator")
    alphabets = {g.alphabet for g in gens}
    if len(alphabets) != 1:
        raise ValueError("generators must share one alphabet")
    alphabet = gens[0].alphabet
    s = alphabet.size
    table_len = s ** (max_radius + 1)
    count = s ** table_len
    limit = current_cap() if cap is None else cap
    if count > limit:
        raise EnumerationCapError("commutant enumeration too large", count, limit)

    effective = sorted(
        (normalize(g) for g in gens if is_shift_power(g) is None),
        key=lambda g: (g.radius, g.table))
    kernels = [_commutation_kernel(s, max_radius, g) for g in effective]

    survivors = []
    for cand in itertools.product(range(s), repeat=table_len):
        ok = True
        for blocks, gtab, outer_idx, windows in kernels:
            for w in range(blocks):
                idx = 0
                for wj in windows:
                    idx = idx * s + cand[wj[w]]
                if cand[outer_idx[w]] != gtab[idx]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            survivors.append(cand)

    seen = set()
    result = []
    for table in survivors:
        bm = normalize(BlockMap(alphabet, max_radius, table))
        key = (bm.radius, bm.table)
        if key not in seen:
            seen.add(key)
            result.append(bm)
    result.sort(key=lambda m: (m.radius, m.table))
    return result


def product_rule_map(deltas: Sequence[int],
                     alphabet: Alphabet | None = None) -> tuple[BlockMap, int]:
    """Binary rule a_0 + (a_1 + d_1)(a_2 + d_2)...(a_r + d_r) over GF(2).

    Returns the map together with its least period: the minimal m with
    d_i = d_{i+m} for all i <= r - m.
    """
    alphabet = alphabet or Alphabet(2)
    if alphabet.size != 2:
        raise ValueError("product rule maps are defined over two symbols")
    ds = alphabet.check(deltas)
    r = len(ds)
    if r < 2:
        raise ValueError("need radius >= 2")
    table = []
    for widx in range(2 ** (r + 1)):
        block = index_block(widx, r + 1, 2)
        prod = 1
        for i in range(1, r + 1):
            prod &= block[i] ^ ds[i - 1]
        table.append(block[0] ^ prod)
    period = next(m for m in range(1, r + 1)
                  if all(ds[i] == ds[i + m] for i in range(r - m)))
    return BlockMap(alphabet, r, tuple(table)), period


def hitting_map(source: Union[EventuallyPeriodicSeq, LazySequence, Word, Sequence[int]],
                target: Union[Word, Sequence[int]],
                alphabet: Alphabet | None = None) -> BlockMap:
    """Map sending the source's i-th window to target[i], everything else to 0.

    Applied to the source, the image starts with the target word.  The window
    length is the smallest making the first len(target) windows pairwise
    distinct; for an eventually periodic source such a length exists whenever
    len(target) <= b + c, for a finite rich prefix whenever the supplied
    symbols already contain enough variety.
    """
    t = as_symbols(target)
    n = len(t)
    if isinstance(source, EventuallyPeriodicSeq):
        alphabet = source.alphabet
        seq = canonicalize(source)
        if n == 0:
            return constant_map(alphabet, 0)
        k_hi = seq.b + 2 * seq.c + n + 2
        get = seq.prefix_of
        exhausted_msg = "insufficient word variety"
    elif isinstance(source, LazySequence):
        alphabet = source.alphabet
        if n == 0:
            return constant_map(alphabet, 0)
        k_hi = 8 * n + 64
        get = source.prefix_of
        exhausted_msg = "insufficient word variety"
    else:
        if isinstance(source, Word):
            alphabet = source.alphabet
        symbols = as_symbols(source)
        if alphabet is None:
            raise ValueError("alphabet required for a plain prefix source")
        if n == 0:
            return constant_map(alphabet, 0)
        k_hi = len(symbols) - (n - 1)
        get = lambda m: symbols[:m]
        exhausted_msg = "prefix too short"
    alphabet.check(t)
    s = alphabet.size
    for k in range(1, k_hi + 1):
        pre = get(n - 1 + k)
        windows = [pre[i:i + k] for i in range(n)]
        if len(set(windows)) == n:
            table = [0] * s ** k
            for i, w in enumerate(windows):
                table[block_index(w, s)] = t[i]
            return BlockMap(alphabet, k - 1, tuple(table))
    raise ValueError(exhausted_msg)
