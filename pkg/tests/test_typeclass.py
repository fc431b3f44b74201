import json
import math

import pytest

from app.entropy import composition_of, h0
from app.enumerative import global_unrank, rank_in_class
from app.errors import BudgetExceededError, DomainError
from app.typeclass import (
    build_class_table,
    canonical_key,
    cutoff,
    dump_table,
    enumerate_compositions,
    get_class_table,
    multinomial,
)

from .helpers import all_sequences, letters


def test_enumerate_compositions_examples():
    assert set(enumerate_compositions(2, 2)) == {(2, 0), (1, 1), (0, 2)}
    assert set(enumerate_compositions(3, 1)) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert len(enumerate_compositions(2, 5)) == 6


def test_enumerate_compositions_budget():
    with pytest.raises(BudgetExceededError) as err:
        enumerate_compositions(3, 10, budget=10)
    assert err.value.required == 66


def test_enumerate_compositions_rejects_empty_length():
    with pytest.raises(DomainError):
        enumerate_compositions(2, 0)


@pytest.mark.parametrize("comp, size", [((0, 0, 5), 1), ((2, 1, 0), 3), ((1, 1, 1), 6)])
def test_multinomial(comp, size):
    assert multinomial(comp) == size


@pytest.mark.parametrize("h", [2, 3, 4])
def test_class_mass_and_count(h):
    for length in range(1, 13):
        comps = enumerate_compositions(h, length)
        assert len(comps) == len(set(comps)) == math.comb(length + h - 1, h - 1)
        assert all(sum(c) == length for c in comps)
        assert sum(multinomial(c) for c in comps) == h ** length


def test_table_h2_l2():
    table = build_class_table(2, 2)
    assert [r.comp for r in table.records] == [(2, 0), (0, 2), (1, 1)]
    assert [letters(r.smallest_member) for r in table.records] == ["aa", "bb", "ab"]
    assert table.cumulative == (0, 1, 2)
    assert table.total == 4


def test_table_h3_l2_pure_classes_first():
    table = build_class_table(3, 2)
    assert [letters(r.smallest_member) for r in table.records] == ["aa", "bb", "cc", "ab", "ac", "bc"]
    assert [r.size for r in table.records] == [1, 1, 1, 2, 2, 2]


def test_table_h2_l3():
    table = build_class_table(2, 3)
    assert [r.comp for r in table.records] == [(3, 0), (0, 3), (2, 1), (1, 2)]
    assert [r.size for r in table.records] == [1, 1, 3, 3]


def test_record_fields_are_consistent():
    table = build_class_table(3, 5)
    for rec in table.records:
        assert rec.size >= 1
        assert (rec.size == 1) == (sum(1 for n in rec.comp if n) == 1)
        assert composition_of(rec.smallest_member, 3) == rec.comp
        assert list(rec.smallest_member) == sorted(rec.smallest_member)
        assert rec.h0_value == h0(rec.comp)


@pytest.mark.parametrize("h", [2, 3, 4])
def test_canonical_order_is_strict_and_total(h):
    for length in range(1, 11):
        table = build_class_table(h, length)
        keys = [canonical_key(r.comp) for r in table.records]
        assert all(a < b for a, b in zip(keys, keys[1:]))
        assert all(a < b for a, b in zip(table.cumulative, table.cumulative[1:]))
        assert len(table) == math.comb(length + h - 1, h - 1)


def test_permuted_counts_tie_on_entropy_key():
    assert canonical_key((3, 1, 0))[0] == canonical_key((0, 1, 3))[0]
    assert canonical_key((3, 1, 0)) < canonical_key((0, 1, 3))


def test_sequence_order_follows_entropy():
    for length in range(1, 7):
        table = build_class_table(3, length)
        ordered = sorted(
            all_sequences(3, length),
            key=lambda s: (table.class_index_of(composition_of(s, 3)), s),
        )
        values = [h0(composition_of(s, 3)) for s in ordered]
        assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))


def test_cutoff_pure_classes_exactly():
    table = build_class_table(3, 2)
    assert cutoff(table, 3) == (3, 0)


def test_cutoff_splits_class():
    table = build_class_table(2, 3)
    cut = cutoff(table, 4)
    assert cut == (2, 2)
    members = {letters(r.smallest_member) for r in table.records[: cut.class_index]}
    assert members == {"aaa", "bbb"}


def test_cutoff_at_total_mass():
    table = build_class_table(2, 1)
    assert cutoff(table, 2) == (len(table), 0)


def test_cutoff_rejects_oversized_set():
    with pytest.raises(DomainError):
        cutoff(build_class_table(2, 3), 9)


def _shaped_members(table, shaped_size):
    return {global_unrank(r, table) for r in range(shaped_size)}


def test_cutoff_is_monotone():
    table = build_class_table(2, 4)
    previous = set()
    for size in range(table.total + 1):
        cut = cutoff(table, size)
        current = {
            s for s in all_sequences(2, 4)
            if table.class_index_of(composition_of(s, 2)) < cut.class_index
            or (
                table.class_index_of(composition_of(s, 2)) == cut.class_index
                and rank_in_class(s, 2) < cut.remainder
            )
        }
        assert len(current) == size
        assert current == _shaped_members(table, size)
        assert previous <= current
        previous = current


def test_dump_table_json():
    rows = json.loads(dump_table(build_class_table(2, 3)))
    assert rows[2] == {"counts": [2, 1], "size": "3", "h0": pytest.approx(0.918296, abs=1e-6), "cumulative": "2"}
    assert [r["cumulative"] for r in rows] == ["0", "1", "2", "5"]


def test_class_index_of_unknown_composition():
    with pytest.raises(DomainError):
        build_class_table(2, 3).class_index_of((1, 1))


def test_get_class_table_is_memoised():
    assert get_class_table(3, 4) is get_class_table(3, 4)
