"""calab: exact workbench for semigroups of cellular-automata transformations."""

from .symcore import (
    Alphabet,
    EventuallyPeriodicSeq,
    LazySequence,
    Word,
    canonicalize,
    champernowne,
    constant_seq,
    detect_eventual_period,
    enumerate_eventually_periodic,
    substitution_sequence,
    thue_morse,
    word_variety_length,
)

__all__ = [
    "Alphabet",
    "EventuallyPeriodicSeq",
    "LazySequence",
    "Word",
    "canonicalize",
    "champernowne",
    "constant_seq",
    "detect_eventual_period",
    "enumerate_eventually_periodic",
    "substitution_sequence",
    "thue_morse",
    "word_variety_length",
]
