import itertools

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def seq(text: str) -> tuple:
    """Letter notation used in the examples: 'aab' -> (0, 0, 1)."""
    return tuple(LETTERS.index(ch) for ch in text)


def letters(symbols) -> str:
    return "".join(LETTERS[s] for s in symbols)


def all_sequences(h: int, length: int):
    return itertools.product(range(h), repeat=length)
