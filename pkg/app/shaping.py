# app/shaping.py
"""
The shaping transform f_m: X^N -> Y^(N+K) and its inverse.

Y^(N+K) is the set of the h**N lowest-entropy sequences of length N+K under
the canonical order. The i-th sequence of X^N (canonical order) is paired
with the i-th sequence of Y^(N+K), so the transform is two table lookups:
a global rank at length N and a global unrank at length N+K. Anything of
length N+K outside Y is not a codeword.
"""
from dataclasses import dataclass
from typing import Iterable, Optional

import mpmath

from .entropy import Sequence, check_sequence, composition_of, format_sequence
from .enumerative import global_rank, global_unrank, rank_in_class
from .errors import InvalidLengthError, NotACodewordError
from .logger_config import logger
from .schemas import DeltaReport, ShapingParams
from .typeclass import ClassTable, Cutoff, cutoff, get_class_table


@dataclass(frozen=True)
class ShapingContext:
    params: ShapingParams
    table_N: ClassTable
    table_N2: ClassTable
    cut: Cutoff
    class_budget: Optional[int] = None

    @property
    def h(self) -> int:
        return self.params.h


def build_context(params: ShapingParams, class_budget: Optional[int] = None) -> ShapingContext:
    table_n = get_class_table(params.h, params.N, class_budget)
    table_n2 = table_n if params.K == 0 else get_class_table(params.h, params.N2, class_budget)
    cut = cutoff(table_n2, params.shaped_size)
    logger.info(
        f"Shaping context h={params.h} N={params.N} K={params.K}: "
        f"cutoff class {cut.class_index}/{len(table_n2)}, remainder {cut.remainder}"
    )
    return ShapingContext(
        params=params, table_N=table_n, table_N2=table_n2, cut=cut, class_budget=class_budget
    )


def _checked(seq: Iterable[int], h: int, length: int) -> Sequence:
    seq = check_sequence(seq, h)
    if len(seq) != length:
        raise InvalidLengthError(f"expected length {length}, got {len(seq)}")
    return seq


def shape(x: Iterable[int], ctx: ShapingContext) -> Sequence:
    x = _checked(x, ctx.h, ctx.params.N)
    return global_unrank(global_rank(x, ctx.table_N), ctx.table_N2)


def unshape(y: Iterable[int], ctx: ShapingContext) -> Sequence:
    y = _checked(y, ctx.h, ctx.params.N2)
    rank = global_rank(y, ctx.table_N2)
    if rank >= ctx.params.shaped_size:
        raise NotACodewordError(format_sequence(y), rank, ctx.params.shaped_size)
    return global_unrank(rank, ctx.table_N)


def is_member(y: Iterable[int], ctx: ShapingContext) -> bool:
    y = _checked(y, ctx.h, ctx.params.N2)
    index = ctx.table_N2.class_index_of(composition_of(y, ctx.h))
    if index != ctx.cut.class_index:
        return index < ctx.cut.class_index
    return rank_in_class(y, ctx.h) < ctx.cut.remainder


def shaped_set_stats(params: ShapingParams, class_budget: Optional[int] = None) -> DeltaReport:
    """Exact class-weighted averages of N*H0 over X^N and (N+K)*H0 over Y."""
    ctx = build_context(params, class_budget)
    total = params.shaped_size
    with mpmath.workdps(30):
        sum_x = mpmath.fsum(
            mpmath.mpf(rec.size) * params.N * rec.h0_value for rec in ctx.table_N.records
        )
        terms_y = [
            mpmath.mpf(rec.size) * params.N2 * rec.h0_value
            for rec in ctx.table_N2.records[: ctx.cut.class_index]
        ]
        if ctx.cut.remainder:
            split = ctx.table_N2.records[ctx.cut.class_index]
            terms_y.append(mpmath.mpf(ctx.cut.remainder) * params.N2 * split.h0_value)
        avg_x = float(sum_x / total)
        avg_y = float(mpmath.fsum(terms_y) / total)
    return DeltaReport(
        h=params.h, N=params.N, K=params.K,
        avg_NH0_X=avg_x, avg_N2H0_Y=avg_y, delta=avg_x - avg_y,
    )
