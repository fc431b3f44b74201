# app/entropy.py
"""
Sequences, compositions and zero-order empirical entropy.

Symbols are the integers 0..h-1. In text they are written with the digit
set 0-9a-z, one character per symbol and no separators.
"""
import math
from typing import Iterable, Tuple

from .config import DIGITS, MAX_ALPHABET
from .errors import DomainError, InvalidLengthError, InvalidSymbolError

Sequence = Tuple[int, ...]
Composition = Tuple[int, ...]

_DIGIT_VALUE = {ch: i for i, ch in enumerate(DIGITS)}


def check_alphabet(h: int) -> int:
    if not isinstance(h, int) or not 2 <= h <= MAX_ALPHABET:
        raise InvalidSymbolError(f"alphabet size must be in 2..{MAX_ALPHABET}, got {h!r}")
    return h


def check_sequence(seq: Iterable[int], h: int) -> Sequence:
    """Return seq as a tuple after checking every symbol is below h."""
    seq = tuple(seq)
    if not seq:
        raise InvalidLengthError("empty sequence")
    for pos, s in enumerate(seq):
        if not 0 <= s < h:
            raise InvalidSymbolError(f"symbol {s} at position {pos} is not < {h}", position=pos)
    return seq


def parse_sequence(text: str, h: int) -> Sequence:
    check_alphabet(h)
    text = text.strip()
    if not text:
        raise InvalidLengthError("empty sequence")
    symbols = []
    for pos, ch in enumerate(text):
        value = _DIGIT_VALUE.get(ch)
        if value is None or value >= h:
            raise InvalidSymbolError(f"character {ch!r} at position {pos} is not a symbol of an alphabet of size {h}", position=pos)
        symbols.append(value)
    return tuple(symbols)


def format_sequence(seq: Sequence) -> str:
    return "".join(DIGITS[s] for s in seq)


def composition_of(seq: Iterable[int], h: int) -> Composition:
    seq = check_sequence(seq, check_alphabet(h))
    counts = [0] * h
    for s in seq:
        counts[s] += 1
    return tuple(counts)


def h0(comp: Composition) -> float:
    """Zero-order empirical entropy in bits/symbol; empty counts contribute 0."""
    length = sum(comp)
    if length <= 0:
        raise DomainError("H0 is undefined for an empty composition")
    total = 0.0
    # fixed summation order keeps the value identical for permuted counts
    for n in sorted(comp):
        if n:
            p = n / length
            total -= p * math.log2(p)
    return max(total, 0.0)


def sequence_information(comp: Composition) -> float:
    """L * H0, the coding limit of any sequence with this composition (bits)."""
    return sum(comp) * h0(comp)


def coding_limit(seq: Iterable[int], h: int) -> float:
    return sequence_information(composition_of(seq, h))
