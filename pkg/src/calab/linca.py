"""Linear cellular automata over Z/sZ and over finite fields GF(p^m).

A linear rule is determined by the coefficient list of its shift polynomial:
substituting the shift for the indeterminate recovers the transformation, and
composition of linear rules is polynomial multiplication.  Field symbols are
packed integers: the base-p digits of a symbol, most significant first, are
the coefficients (c_{m-1}, ..., c_0) of the represented polynomial, so
GF(4) = {0, 1, w, w+1} maps to symbols {0, 1, 2, 3}.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence, Union

from .ca1d import BlockMap, apply_seq, block_index
from .mulca import random_eventually_periodic
from .symcore import Alphabet, EventuallyPeriodicSeq, LazySequence, Word, take


# --- polynomial helpers over GF(p), coefficient lists in ascending degree ----

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    # mod is monic
    a = list(a)
    d = len(mod) - 1
    while len(a) > d:
        lead = a[-1]
        if lead:
            off = len(a) - 1 - d
            for i, c in enumerate(mod):
                a[off + i] = (a[off + i] - lead * c) % p
        a.pop()
    return _poly_trim(a)


def _is_irreducible(mod: Sequence[int], p: int) -> bool:
    d = len(mod) - 1
    if d < 1 or mod[-1] != 1:
        return False
    for deg in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            divisor = list(low) + [1]
            if not _poly_mod(mod, divisor, p):
                return False
    return True


def _packed_to_poly(symbol: int, p: int, m: int) -> list[int]:
    return _poly_trim([(symbol // p**i) % p for i in range(m)])


def _poly_to_packed(poly: Sequence[int], p: int) -> int:
    return sum(c * p**i for i, c in enumerate(poly))


def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """Smallest (by packed integer value) monic irreducible of degree m."""
    for packed in range(p**m, 2 * p**m):
        cand = [(packed // p**i) % p for i in range(m + 1)]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("irreducible polynomials exist for every degree")


# --- rings -------------------------------------------------------------------

@dataclass(frozen=True)
class ModularRing:
    """Integers mod s under the usual arithmetic."""

    s: int

    def __post_init__(self):
        if self.s < 2:
            raise ValueError("modulus must be >= 2")

    @property
    def size(self) -> int:
        return self.s

    @property
    def name(self) -> str:
        return f"mod:{self.s}"

    def add(self, a, b):
        return (a + b) % self.s

    def sub(self, a, b):
        return (a - b) % self.s

    def neg(self, a):
        return (-a) % self.s

    def mul(self, a, b):
        return (a * b) % self.s


class FiniteField:
    """GF(p^m) on packed-integer symbols, with table-driven arithmetic.

    The modulus must be monic irreducible of degree m over GF(p); it defaults
    to the smallest such polynomial in packed-integer order (x^2+x+1 for
    GF(4), x^3+x+1 for GF(8)).  For m = 1 the arithmetic coincides with
    ModularRing(p).
    """

    def __init__(self, p: int, m: int, modulus: Sequence[int] | None = None):
        from .mulca import is_prime
        if not is_prime(p) or m < 1:
            raise ValueError("need a prime p and degree m >= 1")
        self.p = p
        self.m = m
        mod = tuple(modulus) if modulus is not None else default_modulus(p, m)
        if len(mod) != m + 1 or not _is_irreducible(mod, p):
            raise ValueError(f"modulus {mod} is not monic irreducible of degree {m}")
        self.modulus = mod
        n = p**m
        self._add = [[self._add_slow(a, b) for b in range(n)] for a in range(n)]
        self._mul = [[self._mul_slow(a, b) for b in range(n)] for a in range(n)]
        self._inv: list[int | None] = [None] * n
        for a in range(1, n):
            self._inv[a] = next(b for b in range(1, n) if self._mul[a][b] == 1)

    def _add_slow(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        return sum((((a // p**i) + (b // p**i)) % p) * p**i for i in range(m))

    def _mul_slow(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        prod = _poly_mul(_packed_to_poly(a, p, m), _packed_to_poly(b, p, m), p)
        return _poly_to_packed(_poly_mod(prod, self.modulus, p), p)

    @property
    def size(self) -> int:
        return self.p**self.m

    @property
    def name(self) -> str:
        return f"gf:{self.p}^{self.m}"

    def add(self, a, b):
        return self._add[a][b]

    def neg(self, a):
        return next(b for b in range(self.size) if self._add[a][b] == 0) \
            if self.p != 2 else a

    def sub(self, a, b):
        return self._add[a][self.neg(b)]

    def mul(self, a, b):
        return self._mul[a][b]

    def inverse(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[a]

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and self.p == other.p
                and self.m == other.m and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"FiniteField({self.p}, {self.m}, modulus={self.modulus})"


Ring = Union[ModularRing, FiniteField]


def ring_inverse(ring: Ring, a: int) -> int:
    if isinstance(ring, FiniteField):
        return ring.inverse(a)
    # only valid for units; fields of prime order go through here too
    for b in range(ring.size):
        if ring.mul(a, b) == 1:
            return b
    raise ZeroDivisionError(f"{a} is not a unit mod {ring.size}")


# --- shift polynomials ----------------------------------------------------------

@dataclass(frozen=True)
class ShiftPolynomial:
    """Coefficients c_0..c_r of a linear rule, trailing zeros trimmed."""

    ring: Ring
    coeffs: tuple[int, ...]

    def __post_init__(self):
        trimmed = list(self.coeffs)
        _poly_trim(trimmed)
        object.__setattr__(self, "coeffs", tuple(trimmed))
        for c in self.coeffs:
            if not 0 <= c < self.ring.size:
                raise ValueError(f"coefficient {c} out of range")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else 0


def poly_to_map(poly: ShiftPolynomial) -> BlockMap:
    """Block map f(a_0..a_r) = sum c_i * a_i in the ring's arithmetic."""
    ring = poly.ring
    s = ring.size
    r = poly.degree
    coeffs = poly.coeffs or (0,)
    table = []
    for block in itertools.product(range(s), repeat=r + 1):
        acc = 0
        for c, a in zip(coeffs, block):
            acc = ring.add(acc, ring.mul(c, a))
        table.append(acc)
    return BlockMap(Alphabet(s), r, tuple(table))


def is_linear(bm: BlockMap, ring: Ring) -> bool:
    """Exhaustive check f(w) = sum w_i * f(e^i) over every block."""
    if bm.alphabet.size != ring.size:
        raise ValueError("alphabet size does not match ring size")
    s = ring.size
    r = bm.radius
    basis = [bm.table[block_index(tuple(1 if j == i else 0 for j in range(r + 1)), s)]
             for i in range(r + 1)]
    for idx, value in enumerate(bm.table):
        acc = 0
        rem = idx
        for i in range(r, -1, -1):
            digit = rem % s
            rem //= s
            if digit:
                acc = ring.add(acc, ring.mul(digit, basis[i]))
        if acc != value:
            return False
    return True


def map_to_poly(bm: BlockMap, ring: Ring) -> ShiftPolynomial | None:
    """Shift polynomial with c_i = f(e^i), or None for nonlinear maps."""
    if not is_linear(bm, ring):
        return None
    s = ring.size
    r = bm.radius
    coeffs = tuple(
        bm.table[block_index(tuple(1 if j == i else 0 for j in range(r + 1)), s)]
        for i in range(r + 1))
    return ShiftPolynomial(ring, coeffs)


def poly_product(p: ShiftPolynomial, q: ShiftPolynomial) -> ShiftPolynomial:
    """Product in the polynomial ring; matches composition of the block maps."""
    if p.ring != q.ring:
        raise ValueError("mixed rings")
    ring = p.ring
    if not p.coeffs or not q.coeffs:
        return ShiftPolynomial(ring, ())
    out = [0] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, x in enumerate(p.coeffs):
        for j, y in enumerate(q.coeffs):
            out[i + j] = ring.add(out[i + j], ring.mul(x, y))
    return ShiftPolynomial(ring, tuple(out))


def poly_sum(p: ShiftPolynomial, q: ShiftPolynomial) -> ShiftPolynomial:
    if p.ring != q.ring:
        raise ValueError("mixed rings")
    ring = p.ring
    n = max(len(p.coeffs), len(q.coeffs))
    a = p.coeffs + (0,) * (n - len(p.coeffs))
    b = q.coeffs + (0,) * (n - len(q.coeffs))
    return ShiftPolynomial(ring, tuple(ring.add(x, y) for x, y in zip(a, b)))


def pointwise_sum(a: BlockMap, b: BlockMap, ring: Ring) -> BlockMap:
    """Symbolwise ring addition of two rules, at the larger radius."""
    if a.alphabet != b.alphabet:
        raise ValueError("mixed alphabets")
    s = ring.size
    r = max(a.radius, b.radius)
    table = []
    for block in itertools.product(range(s), repeat=r + 1):
        va = a.table[block_index(block[:a.radius + 1], s)]
        vb = b.table[block_index(block[:b.radius + 1], s)]
        table.append(ring.add(va, vb))
    return BlockMap(a.alphabet, r, tuple(table))


# --- window independence and linear hitting ---------------------------------------

def _row_reduce(rows: list[list[int]], ring: FiniteField | ModularRing):
    """In-place reduced row echelon form over a field; returns pivot columns."""
    pivots = []
    rank = 0
    n_cols = len(rows[0]) if rows else 0
    for col in range(n_cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = ring_inverse(ring, rows[rank][col])
        rows[rank] = [ring.mul(inv, v) for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [ring.sub(v, ring.mul(f, w))
                           for v, w in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return pivots


def independent_window_length(source, n: int, k_max: int, ring: Ring) -> int | None:
    """Minimal k <= k_max with the first n length-k windows linearly independent.

    Gaussian elimination over the field; None when k_max is not enough.
    Guaranteed to exist for aperiodic sources (any n), for eventually
    periodic sources up to n = b, and for purely periodic sources up to
    n = c - 1.
    """
    if n <= 0:
        raise ValueError("need at least one window")
    if not isinstance(ring, FiniteField) and not _is_prime_size(ring):
        raise ValueError("window independence requires a field")
    symbols = take(source, n - 1 + k_max)
    for k in range(1, k_max + 1):
        rows = [list(symbols[i:i + k]) for i in range(n)]
        if len(_row_reduce(rows, ring)) == n:
            return k
    return None


def _is_prime_size(ring: Ring) -> bool:
    from .mulca import is_prime
    return isinstance(ring, ModularRing) and is_prime(ring.s)


def linear_hitting_map(source, target: Union[Word, Sequence[int]], ring: Ring,
                       k_max: int | None = None) -> BlockMap:
    """Linear rule whose image of the source starts with the target word.

    Solves windows * c = target for the coefficient vector, free variables
    set to zero, so the result is a linear functional on length-k windows.
    """
    from .symcore import as_symbols
    t = as_symbols(target)
    n = len(t)
    if n == 0:
        return poly_to_map(ShiftPolynomial(ring, ()))
    if k_max is None:
        k_max = 8 * n + 16
    k = independent_window_length(source, n, k_max, ring)
    if k is None:
        raise ValueError("windows dependent; target may be unreachable")
    symbols = take(source, n - 1 + k)
    aug = [list(symbols[i:i + k]) + [t[i]] for i in range(n)]
    pivots = _row_reduce(aug, ring)
    coeffs = [0] * k
    for row, col in enumerate(pivots):
        coeffs[col] = aug[row][k]
    return poly_to_map(ShiftPolynomial(ring, tuple(coeffs)))


# --- divisibility witness -----------------------------------------------------------

@dataclass(frozen=True)
class DivisibilityReport:
    """Linear rules over Z/sZ preserve the all-digits-divisible-by-p set."""

    s: int
    p: int
    trials: int
    failures: int
    first_counterexample: dict | None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "check": "divisible-digits",
            "s": self.s,
            "p": self.p,
            "trials": self.trials,
            "failures": self.failures,
            "passed": self.passed,
            "first_counterexample": self.first_counterexample,
        }


def divisible_digits_witness(s: int, p: int | None = None, trials: int = 100,
                             seed: int = 0, sabotage: bool = False) -> DivisibilityReport:
    """Random linear rules applied to random sequences of multiples of p.

    Every output digit must again be a multiple of p.  Sabotage mode flips
    one table entry (at the first window of each input) to show the check
    has teeth.
    """
    from .mulca import prime_factorization
    factors = prime_factorization(s) if s > 1 else {}
    if p is None:
        nontrivial = [q for q in sorted(factors) if q < s]
        if not nontrivial:
            raise ValueError("no nontrivial divisor")
        p = nontrivial[0]
    if s % p != 0 or not 1 < p < s:
        raise ValueError("no nontrivial divisor")
    alphabet = Alphabet(s)
    ring = ModularRing(s)
    rng = random.Random(seed)
    multiples = list(range(0, s, p))
    failures = 0
    first = None
    for trial in range(trials):
        degree = rng.randint(0, 3)
        poly = ShiftPolynomial(ring, tuple(rng.randrange(s) for _ in range(degree + 1)))
        rule = poly_to_map(poly)
        b = rng.randint(0, 4)
        c = rng.randint(1, 4)
        a = EventuallyPeriodicSeq(
            alphabet,
            tuple(rng.choice(multiples) for _ in range(b)),
            tuple(rng.choice(multiples) for _ in range(c)))
        if sabotage:
            idx = block_index(a.prefix_of(rule.radius + 1), s)
            table = list(rule.table)
            table[idx] = (table[idx] + 1) % s
            rule = BlockMap(alphabet, rule.radius, tuple(table))
        image = apply_seq(rule, a)
        bad = next((d for d in image.prefix + image.cycle if d % p != 0), None)
        if bad is not None:
            failures += 1
            if first is None:
                first = {
                    "trial": trial,
                    "poly": list(poly.coeffs),
                    "prefix": list(a.prefix),
                    "cycle": list(a.cycle),
                    "bad_digit": bad,
                }
    return DivisibilityReport(s, p, trials, failures, first)
