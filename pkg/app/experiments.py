# app/experiments.py
"""
Experiment harnesses: channel detection study (simulated and exact), the
mod-h parity baseline, the Huffman comparison and the delta sweep.

The source is uniform over X^N throughout.
"""
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence as Seq, Tuple

from pydantic import ValidationError

from .channel import corrupt, uniform_below
from .config import ENUM_BUDGET
from .entropy import Sequence, composition_of, format_sequence, sequence_information
from .enumerative import global_unrank
from .errors import BudgetExceededError, DomainError
from .huffman import huffman_lengths
from .logger_config import logger
from .schemas import ChannelSpec, DeltaReport, DetectionReport, HuffmanSummary, ShapingParams
from .shaping import ShapingContext, build_context, is_member, shape, shaped_set_stats


def _run_map(fn: Callable, items: List, workers: int) -> List:
    """Ordered map, in a process pool when workers > 1."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def _chunks(total: int, parts: int) -> List[Tuple[int, int]]:
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    bounds = []
    start = 0
    for i in range(parts):
        stop = start + step + (1 if i < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


def _check_budget(what: str, required: int, budget: Optional[int]) -> None:
    budget = ENUM_BUDGET if budget is None else budget
    if required > budget:
        raise BudgetExceededError(what, required, budget)


# --- Detection: Monte Carlo ---

def _detection_trials(ctx: ShapingContext, spec: ChannelSpec, seed: int, start: int, stop: int) -> DetectionReport:
    clean = detected = undetected = 0
    h = ctx.h
    for trial in range(start, stop):
        x = global_unrank(uniform_below(ctx.params.shaped_size, seed, trial), ctx.table_N)
        y = shape(x, ctx)
        received = corrupt(y, h, spec, seed, trial)
        if received == y:
            clean += 1
        elif is_member(received, ctx):
            undetected += 1
        else:
            detected += 1
    return DetectionReport(trials=stop - start, clean=clean, detected=detected, undetected=undetected)


def _detection_chunk(job: tuple) -> DetectionReport:
    params, class_budget, spec, seed, start, stop = job
    return _detection_trials(build_context(params, class_budget), spec, seed, start, stop)


def simulate_detection(
    ctx: ShapingContext, spec: ChannelSpec, trials: int, seed: int, workers: int = 1
) -> DetectionReport:
    if trials < 0:
        raise DomainError(f"trials must be >= 0, got {trials}")
    logger.info(f"Simulating detection: {ctx.params} p={spec.p} trials={trials} seed={seed} workers={workers}")
    if trials == 0:
        return DetectionReport()
    if workers <= 1:
        report = _detection_trials(ctx, spec, seed, 0, trials)
    else:
        jobs = [
            (ctx.params, ctx.class_budget, spec, seed, start, stop)
            for start, stop in _chunks(trials, workers)
        ]
        report = sum(_run_map(_detection_chunk, jobs, workers), DetectionReport())
    logger.info(f"Detection done: clean={report.clean} detected={report.detected} undetected={report.undetected}")
    return report


# --- Detection: exact enumeration ---

def _error_patterns(length: int, h: int, weight: int) -> Iterable[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    for positions in itertools.combinations(range(length), weight):
        for offsets in itertools.product(range(1, h), repeat=weight):
            yield positions, offsets


def _apply(seq: Sequence, h: int, positions: Seq[int], offsets: Seq[int]) -> Sequence:
    out = list(seq)
    for pos, off in zip(positions, offsets):
        out[pos] = (out[pos] + off) % h
    return tuple(out)


def _pattern_work(codewords: int, length: int, h: int, weight: int) -> int:
    return codewords * math.comb(length, weight) * (h - 1) ** weight


def exact_detection(ctx: ShapingContext, weight: int, enum_budget: Optional[int] = None) -> float:
    """Fraction of (codeword, weight-w error pattern) pairs that leave the shaped set."""
    h, length = ctx.h, ctx.params.N2
    if not 0 <= weight <= length:
        raise DomainError(f"error weight must be in 0..{length}, got {weight}")
    if weight == 0:
        return 0.0
    _check_budget("exact detection work", _pattern_work(ctx.params.shaped_size, length, h, weight), enum_budget)
    detected = total = 0
    # codewords are exactly the first h**N global ranks at length N+K
    for r in range(ctx.params.shaped_size):
        y = global_unrank(r, ctx.table_N2)
        for positions, offsets in _error_patterns(length, h, weight):
            total += 1
            if not is_member(_apply(y, h, positions, offsets), ctx):
                detected += 1
    return detected / total


def parity_baseline_detection(h: int, N: int, weight: int, enum_budget: Optional[int] = None) -> float:
    """Same study for the code x || (sum(x) mod h) of length N+1."""
    length = N + 1
    if not 0 <= weight <= length:
        raise DomainError(f"error weight must be in 0..{length}, got {weight}")
    if weight == 0:
        return 0.0
    _check_budget("parity baseline work", _pattern_work(h ** N, length, h, weight), enum_budget)
    detected = total = 0
    for x in itertools.product(range(h), repeat=N):
        codeword = x + (sum(x) % h,)
        for positions, offsets in _error_patterns(length, h, weight):
            received = _apply(codeword, h, positions, offsets)
            total += 1
            if sum(received[:N]) % h != received[N]:
                detected += 1
    return detected / total


# --- Huffman comparison ---

def header_bits(h: int, length: int) -> int:
    """Bits to transmit the h symbol counts of a length-L sequence."""
    return h * math.ceil(math.log2(length + 1))


@dataclass(frozen=True)
class HuffmanRow:
    x: Sequence
    y: Sequence
    bits_plain: int
    bits_shaped: int
    info_plain: float
    info_shaped: float


def huffman_row(x: Sequence, ctx: ShapingContext) -> HuffmanRow:
    h = ctx.h
    y = shape(x, ctx)
    comp_x = composition_of(x, h)
    comp_y = composition_of(y, h)
    return HuffmanRow(
        x=x,
        y=y,
        bits_plain=len(huffman_lengths(comp_x).encode(x)),
        bits_shaped=len(huffman_lengths(comp_y).encode(y)),
        info_plain=sequence_information(comp_x),
        info_shaped=sequence_information(comp_y),
    )


def summarize(rows: List[HuffmanRow], ctx: ShapingContext, mode: str) -> HuffmanSummary:
    p = ctx.params
    count = len(rows)
    if not count:
        raise DomainError("no sequences to summarize")
    # both sides are charged the header of the longer, shaped length
    hdr_plain = hdr_shaped = header_bits(p.h, p.N2)
    mean_plain = sum(r.bits_plain for r in rows) / count
    mean_shaped = sum(r.bits_shaped for r in rows) / count
    return HuffmanSummary(
        h=p.h, N=p.N, K=p.K, mode=mode, count=count,
        mean_bits_plain=mean_plain,
        mean_bits_shaped=mean_shaped,
        mean_bits_plain_hdr=mean_plain + hdr_plain,
        mean_bits_shaped_hdr=mean_shaped + hdr_shaped,
        mean_NH0_plain=math.fsum(r.info_plain for r in rows) / count,
        mean_N2H0_shaped=math.fsum(r.info_shaped for r in rows) / count,
        frac_improved=sum(1 for r in rows if r.info_shaped < r.info_plain - 1e-12) / count,
        mean_gain_bits=math.fsum(r.info_plain - r.info_shaped for r in rows) / count,
    )


def huffman_compare(
    ctx: ShapingContext,
    sample: Optional[int] = None,
    seed: int = 0,
    enum_budget: Optional[int] = None,
) -> Tuple[List[HuffmanSummary], HuffmanSummary]:
    """Per-sequence rows and the mean row; exhaustive over X^N when sample is None."""
    p = ctx.params
    if sample is None:
        _check_budget("exhaustive huffman sequences", p.shaped_size, enum_budget)
        sources = itertools.product(range(p.h), repeat=p.N)
        mode = "exhaustive"
    else:
        if sample < 1:
            raise DomainError(f"sample must be >= 1, got {sample}")
        sources = (global_unrank(uniform_below(p.shaped_size, seed, i), ctx.table_N) for i in range(sample))
        mode = "sample"
    rows = [huffman_row(tuple(x), ctx) for x in sources]
    per_sequence = [summarize([r], ctx, f"seq:{format_sequence(r.x)}") for r in rows]
    summary = summarize(rows, ctx, mode)
    logger.info(f"Huffman comparison {mode}: {summary.count} sequences, plain {summary.mean_bits_plain:.3f} bits, shaped {summary.mean_bits_shaped:.3f} bits")
    return per_sequence, summary


def shaping_gain_fraction(
    ctx: ShapingContext,
    sample: Optional[int] = None,
    seed: int = 0,
    enum_budget: Optional[int] = None,
) -> Tuple[float, float]:
    """(fraction of sources whose shaped image has lower L*H0, mean gain in bits)."""
    _, summary = huffman_compare(ctx, sample, seed, enum_budget)
    return summary.frac_improved, summary.mean_gain_bits


# --- Delta sweep ---

def _delta_row(job: tuple) -> DeltaReport:
    h, N, K, class_budget = job
    try:
        return shaped_set_stats(ShapingParams(h=h, N=N, K=K), class_budget)
    except BudgetExceededError as e:
        logger.warning(f"Sweep row h={h} N={N} K={K} skipped: {e}")
        return DeltaReport(h=h, N=N, K=K, error="budget")
    except ValidationError:
        logger.warning(f"Sweep row h={h} N={N} K={K} has invalid parameters")
        return DeltaReport(h=h, N=N, K=K, error="invalid")


def sweep_delta(
    h_grid: Seq[int], n_grid: Seq[int], k_grid: Seq[int],
    class_budget: Optional[int] = None, workers: int = 1,
) -> List[DeltaReport]:
    """One DeltaReport per (h, N, K) in grid order; budget overruns become marked rows."""
    jobs = [(h, n, k, class_budget) for h in h_grid for n in n_grid for k in k_grid]
    logger.info(f"Delta sweep over {len(jobs)} grid points with {workers} worker(s)")
    return _run_map(_delta_row, jobs, workers)
