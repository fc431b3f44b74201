# app/channel.py
"""
Deterministic randomness and the symmetric substitution channel.

Every random draw is a splitmix64 output addressed by (seed, trial, lane,
index), so results never depend on how trials are scheduled across workers.
"""
from typing import Iterable

from .entropy import Sequence, check_sequence
from .schemas import ChannelSpec

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

LANE_SOURCE = 0
LANE_CHANNEL = 1


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_state(seed: int, trial: int, lane: int) -> int:
    state = mix64((seed + GOLDEN_GAMMA) & MASK64)
    state = mix64(((state ^ (trial & MASK64)) + GOLDEN_GAMMA) & MASK64)
    return mix64(((state ^ lane) + GOLDEN_GAMMA) & MASK64)


def draw(state: int, index: int) -> int:
    """index-th output (0-based) of the splitmix64 stream started at state."""
    return mix64((state + (index + 1) * GOLDEN_GAMMA) & MASK64)


def unit_float(word: int) -> float:
    return (word >> 11) * (1.0 / (1 << 53))


def uniform_below(bound: int, seed: int, trial: int) -> int:
    """Uniform integer in [0, bound) by rejection over 64-bit words."""
    if bound <= 1:
        return 0
    state = stream_state(seed, trial, LANE_SOURCE)
    bits = (bound - 1).bit_length()
    words = (bits + 63) // 64
    index = 0
    while True:
        value = 0
        for _ in range(words):
            value = (value << 64) | draw(state, index)
            index += 1
        value >>= words * 64 - bits
        if value < bound:
            return value


def corrupt(seq: Iterable[int], h: int, spec: ChannelSpec, seed: int, trial: int) -> Sequence:
    seq = check_sequence(seq, h)
    if spec.p == 0.0:
        return seq
    state = stream_state(seed, trial, LANE_CHANNEL)
    out = []
    for pos, s in enumerate(seq):
        if unit_float(draw(state, 2 * pos)) < spec.p:
            offset = (draw(state, 2 * pos + 1) * (h - 1)) >> 64
            s = (s + 1 + offset) % h
        out.append(s)
    return tuple(out)
