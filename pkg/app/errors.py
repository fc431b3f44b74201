# app/errors.py
from typing import Optional


class ShapingError(Exception):
    """Base class for every error raised by the shaping library."""


class InvalidSymbolError(ShapingError):
    def __init__(self, message: str, position: Optional[int] = None):
        super().__init__(message)
        self.position = position


class InvalidLengthError(ShapingError):
    pass


class DomainError(ShapingError, ValueError):
    pass


class BudgetExceededError(ShapingError):
    def __init__(self, what: str, required: int, budget: int):
        super().__init__(f"{what}: {required} exceeds budget {budget}")
        self.required = required
        self.budget = budget


class NotACodewordError(ShapingError):
    """Raised by unshape when the received sequence is outside the shaped set."""

    def __init__(self, sequence_text: str, rank: int, shaped_size: int):
        super().__init__(
            f"{sequence_text!r} is not a codeword (global rank {rank} >= {shaped_size})"
        )
        self.rank = rank
        self.shaped_size = shaped_size
