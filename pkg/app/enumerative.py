# app/enumerative.py
"""
Enumerative coding over a ClassTable.

Within a class, sequences are ranked lexicographically among the
permutations of their composition; the global rank adds the class offset.
Each position costs at most h big-integer multiply/divide steps, using
multinomial(comp - e_s) = multinomial(comp) * n_s / L.
"""
from typing import Iterable, Optional

from .entropy import Composition, Sequence, check_sequence, composition_of
from .errors import DomainError, InvalidLengthError
from .typeclass import ClassTable, multinomial


def rank_in_class(seq: Iterable[int], h: Optional[int] = None) -> int:
    seq = tuple(seq)
    if not seq:
        raise InvalidLengthError("empty sequence")
    h = max(seq) + 1 if h is None else h
    counts = list(composition_of(seq, max(h, 2)))
    remaining = len(seq)
    size = multinomial(counts)
    rank = 0
    for s in seq:
        for t in range(s):
            if counts[t]:
                rank += size * counts[t] // remaining
        size = size * counts[s] // remaining
        counts[s] -= 1
        remaining -= 1
    return rank


def unrank_in_class(comp: Composition, r: int) -> Sequence:
    counts = list(comp)
    remaining = sum(counts)
    if remaining < 1:
        raise DomainError("cannot unrank in an empty class")
    size = multinomial(counts)
    if not 0 <= r < size:
        raise DomainError(f"rank {r} outside class of size {size}")
    out = []
    for _ in range(remaining):
        for t, n in enumerate(counts):
            if not n:
                continue
            block = size * n // remaining
            if r < block:
                out.append(t)
                size = block
                counts[t] -= 1
                remaining -= 1
                break
            r -= block
    return tuple(out)


def global_rank(seq: Iterable[int], table: ClassTable) -> int:
    seq = check_sequence(seq, table.h)
    if len(seq) != table.L:
        raise InvalidLengthError(f"sequence length {len(seq)} != {table.L}")
    index = table.class_index_of(composition_of(seq, table.h))
    return table.cumulative[index] + rank_in_class(seq, table.h)


def global_unrank(r: int, table: ClassTable) -> Sequence:
    index = table.locate(r)
    return unrank_in_class(table.records[index].comp, r - table.cumulative[index])
