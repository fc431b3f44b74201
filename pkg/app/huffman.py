# app/huffman.py
"""Per-sequence zero-order Huffman codes with canonical codeword assignment."""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Tuple

from bitarray import bitarray
from bitarray.util import huffman_code, int2ba

from .entropy import Composition, Sequence
from .errors import DomainError


@dataclass(frozen=True)
class PrefixCode:
    lengths: Tuple[int, ...]  # 0 = symbol has no codeword

    @cached_property
    def codewords(self) -> Dict[int, bitarray]:
        # canonical: codewords increase along (length, symbol)
        order = sorted((n, s) for s, n in enumerate(self.lengths) if n)
        codes = {}
        code = 0
        prev = order[0][0]
        for length, symbol in order:
            code <<= length - prev
            codes[symbol] = int2ba(code, length=length, endian="big")
            code += 1
            prev = length
        return codes

    def kraft_sum(self) -> Fraction:
        return sum((Fraction(1, 2 ** n) for n in self.lengths if n), Fraction(0))

    def encoded_bits(self, comp: Composition) -> int:
        return sum(n * length for n, length in zip(comp, self.lengths))

    def encode(self, seq: Iterable[int]) -> bitarray:
        bits = bitarray(endian="big")
        bits.encode(self.codewords, seq)
        return bits

    def decode(self, bits: bitarray) -> Sequence:
        return tuple(bits.decode(self.codewords))


def huffman_lengths(comp: Composition) -> PrefixCode:
    freq = {s: n for s, n in enumerate(comp) if n}
    if not freq:
        raise DomainError("cannot build a code for an empty composition")
    lengths = [0] * len(comp)
    if len(freq) == 1:
        # a zero-length codeword would make the bitstream unparseable
        (symbol,) = freq
        lengths[symbol] = 1
    else:
        for symbol, code in huffman_code(freq).items():
            lengths[symbol] = len(code)
    return PrefixCode(lengths=tuple(lengths))
