# app/schemas.py
from datetime import datetime
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .config import CLASS_BUDGET, ENUM_BUDGET, MAX_ALPHABET, WORKERS


class ShapingParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    h: int = Field(ge=2, le=MAX_ALPHABET)
    N: int = Field(ge=1)
    K: int = Field(ge=0)

    @property
    def N2(self) -> int:
        return self.N + self.K

    @property
    def shaped_size(self) -> int:
        return self.h ** self.N


class ChannelSpec(BaseModel):
    """Symmetric substitution channel: each symbol is replaced with probability p."""
    model_config = ConfigDict(frozen=True)

    p: float = Field(ge=0.0, le=1.0)


class DeltaReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    h: int
    N: int
    K: int
    avg_NH0_X: Optional[float] = None
    avg_N2H0_Y: Optional[float] = None
    delta: Optional[float] = None
    error: Optional[str] = None

    @property
    def sign(self) -> str:
        if self.error:
            return f"error:{self.error}"
        if self.delta > 0:
            return "+"
        if self.delta < 0:
            return "-"
        return "0"

    def csv_row(self) -> List[str]:
        values = [self.avg_NH0_X, self.avg_N2H0_Y, self.delta]
        cells = ["" if v is None else f"{v:.9f}" for v in values]
        return [str(self.h), str(self.N), str(self.K), *cells, self.sign]


class DetectionReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    trials: int = 0
    clean: int = 0
    detected: int = 0
    undetected: int = 0

    @property
    def corrupted(self) -> int:
        return self.detected + self.undetected

    @property
    def detected_rate(self) -> float:
        return self.detected / self.corrupted if self.corrupted else 0.0

    @property
    def undetected_rate(self) -> float:
        return self.undetected / self.corrupted if self.corrupted else 0.0

    def __add__(self, other: "DetectionReport") -> "DetectionReport":
        return DetectionReport(
            trials=self.trials + other.trials,
            clean=self.clean + other.clean,
            detected=self.detected + other.detected,
            undetected=self.undetected + other.undetected,
        )


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: Literal["shape", "unshape", "check", "sweep-delta", "detect", "huffman", "table", "runs"]
    h: int = Field(default=2, ge=2, le=MAX_ALPHABET)
    N: int = Field(default=1, ge=1)
    K: int = Field(default=1, ge=0)
    L: Optional[int] = Field(default=None, ge=1)
    in_path: Optional[str] = None
    out_path: Optional[str] = None
    fmt: Literal["csv", "json"] = "csv"
    p: float = Field(default=0.0, ge=0.0, le=1.0)
    trials: int = Field(default=10_000, ge=0)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    weight: Optional[int] = Field(default=None, ge=0)
    exact: bool = False
    sample: Optional[int] = Field(default=None, ge=1)
    per_sequence: bool = True
    h_grid: List[int] = []
    N_grid: List[int] = []
    K_grid: List[int] = []
    workers: int = Field(default=WORKERS, ge=1)
    class_budget: int = Field(default=CLASS_BUDGET, ge=1)
    enum_budget: int = Field(default=ENUM_BUDGET, ge=1)
    db_url: Optional[str] = None

    @field_validator("h_grid", "N_grid", "K_grid")
    @classmethod
    def _grid_values_nonnegative(cls, values: List[int]) -> List[int]:
        if any(v < 0 for v in values):
            raise ValueError("grid values must be nonnegative")
        return values

    @property
    def params(self) -> ShapingParams:
        return ShapingParams(h=self.h, N=self.N, K=self.K)


class ExperimentRunSchema(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    id: int
    command: str
    parameters: str
    exit_code: int
    rows: int
    output_sha256: str
    started_at: datetime
    finished_at: Optional[datetime] = None


class HuffmanSummary(BaseModel):
    """Mean (or single-sequence) Huffman comparison row."""
    model_config = ConfigDict(frozen=True)

    h: int
    N: int
    K: int
    mode: str
    count: int
    mean_bits_plain: float
    mean_bits_shaped: float
    mean_bits_plain_hdr: float
    mean_bits_shaped_hdr: float
    mean_NH0_plain: float
    mean_N2H0_shaped: float
    frac_improved: float
    mean_gain_bits: float

    def csv_row(self) -> List[str]:
        numbers = [
            self.mean_bits_plain, self.mean_bits_shaped,
            self.mean_bits_plain_hdr, self.mean_bits_shaped_hdr,
            self.mean_NH0_plain, self.mean_N2H0_shaped,
            self.frac_improved, self.mean_gain_bits,
        ]
        return [str(self.h), str(self.N), str(self.K), self.mode, *(f"{v:.9f}" for v in numbers)]
