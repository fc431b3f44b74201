# app/typeclass.py
"""
Type classes of length-L sequences over h symbols.

A ClassTable lists every composition of (h, L) in canonical order together
with its exact size and cumulative offset, which makes the h**L sequences of
length L addressable without ever materialising them.

Canonical order: ascending L*H0, decided by comparing sum(n_i * log2 n_i)
(descending) at 40 significant digits, where the sum is always evaluated over
the sorted count multiset so that classes with equal multisets tie exactly.
Ties are broken by the lexicographically smallest member, ascending.
"""
import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

import mpmath

from .config import CLASS_BUDGET
from .entropy import Composition, Sequence, check_alphabet, h0
from .errors import BudgetExceededError, DomainError
from .logger_config import logger

ENTROPY_DPS = 40


def class_count(h: int, length: int) -> int:
    return math.comb(length + h - 1, h - 1)


def _compositions(parts: int, total: int) -> Iterator[Composition]:
    if parts == 1:
        yield (total,)
        return
    for value in range(total, -1, -1):
        for rest in _compositions(parts - 1, total - value):
            yield (value,) + rest


def enumerate_compositions(h: int, length: int, budget: Optional[int] = None) -> List[Composition]:
    """All count vectors of h nonnegative integers summing to length."""
    check_alphabet(h)
    if length < 1:
        raise DomainError(f"sequence length must be >= 1, got {length}")
    budget = CLASS_BUDGET if budget is None else budget
    required = class_count(h, length)
    if required > budget:
        raise BudgetExceededError(f"class count for h={h}, L={length}", required, budget)
    return list(_compositions(h, length))


def multinomial(comp: Composition) -> int:
    """Exact class size L! / prod(n_i!)."""
    size = math.factorial(sum(comp))
    for n in comp:
        size //= math.factorial(n)
    return size


@lru_cache(maxsize=None)
def _n_log2_n(n: int) -> mpmath.mpf:
    with mpmath.workdps(ENTROPY_DPS):
        return n * mpmath.log(n, 2)


@lru_cache(maxsize=None)
def _multiset_weight(multiset: Tuple[int, ...]) -> mpmath.mpf:
    # sum of n*log2(n) over a descending count multiset
    with mpmath.workdps(ENTROPY_DPS):
        total = mpmath.mpf(0)
        for n in multiset:
            if n > 1:
                total += _n_log2_n(n)
        return total


def canonical_key(comp: Composition) -> Tuple[mpmath.mpf, Tuple[int, ...]]:
    """Sort key realising the canonical class order.

    Larger sum(n log2 n) means lower entropy, so it is negated. The smallest
    member 0^n0 1^n1 ... compares lexicographically like the negated counts.
    """
    weight = _multiset_weight(tuple(sorted(comp, reverse=True)))
    return (-weight, tuple(-n for n in comp))


@dataclass(frozen=True)
class ClassRecord:
    comp: Composition
    size: int
    h0_value: float

    @property
    def smallest_member(self) -> Sequence:
        return tuple(s for s, n in enumerate(self.comp) for _ in range(n))

    @property
    def length(self) -> int:
        return sum(self.comp)


@dataclass(frozen=True)
class ClassTable:
    h: int
    L: int
    records: Tuple[ClassRecord, ...]
    cumulative: Tuple[int, ...]
    _index: Dict[Composition, int] = field(repr=False, compare=False)

    @property
    def total(self) -> int:
        return self.cumulative[-1] + self.records[-1].size

    def __len__(self) -> int:
        return len(self.records)

    def class_index_of(self, comp: Composition) -> int:
        try:
            return self._index[tuple(comp)]
        except KeyError:
            raise DomainError(f"{comp} is not a composition of h={self.h}, L={self.L}") from None

    def locate(self, rank: int) -> int:
        """Index of the class whose offset range contains a global rank."""
        if not 0 <= rank < self.total:
            raise DomainError(f"rank {rank} outside [0, {self.h}^{self.L})")
        return bisect_right(self.cumulative, rank) - 1


def build_class_table(h: int, length: int, budget: Optional[int] = None) -> ClassTable:
    comps = enumerate_compositions(h, length, budget)
    comps.sort(key=canonical_key)
    records = []
    cumulative = []
    offset = 0
    for comp in comps:
        size = multinomial(comp)
        records.append(ClassRecord(comp=comp, size=size, h0_value=h0(comp)))
        cumulative.append(offset)
        offset += size
    index = {rec.comp: i for i, rec in enumerate(records)}
    logger.info(f"Built class table h={h} L={length}: {len(records)} classes")
    return ClassTable(h=h, L=length, records=tuple(records), cumulative=tuple(cumulative), _index=index)


@lru_cache(maxsize=64)
def get_class_table(h: int, length: int, budget: Optional[int] = None) -> ClassTable:
    """Memoised build_class_table; tables are immutable and shared."""
    return build_class_table(h, length, budget)


class Cutoff(NamedTuple):
    class_index: int
    remainder: int


def cutoff(table: ClassTable, shaped_size: int) -> Cutoff:
    """Split point of the shaped set.

    The shaped set is every sequence of classes before class_index plus the
    `remainder` lexicographically smallest members of class class_index.
    """
    if shaped_size < 0 or shaped_size > table.total:
        raise DomainError(f"shaped size {shaped_size} outside [0, {table.total}]")
    if shaped_size == table.total:
        return Cutoff(len(table.records), 0)
    index = bisect_right(table.cumulative, shaped_size) - 1
    return Cutoff(index, shaped_size - table.cumulative[index])


def dump_table(table: ClassTable) -> str:
    rows = [
        {
            "counts": list(rec.comp),
            "size": str(rec.size),
            "h0": rec.h0_value,
            "cumulative": str(offset),
        }
        for rec, offset in zip(table.records, table.cumulative)
    ]
    return json.dumps(rows, indent=2)
