"""Analysis settings shared by the library entry points and the CLI."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields

from .errors import ConfigError


@dataclass(frozen=True)
class AnalysisConfig:
    detrend_order: int = 2
    q_min: float = -5.0
    q_max: float = 5.0
    q_step: float = 0.25
    n_min: int = 10
    n_max_divisor: float = 4
    n_scales: int = 30
    fit_min: int | None = None  # None: smallest grid scale
    fit_max: int | None = None  # None: largest grid scale
    dual_pass: bool = True
    stride5: bool = False
    seed: int = 42
    repetitions: int = 100
    transposition_factor: int = 1000
    window: int = 730
    step: int = 5
    column: str = "Close"

    def __post_init__(self):
        if self.detrend_order < 1:
            raise ConfigError("detrend_order must be >= 1")
        if self.q_step <= 0 or self.q_max <= self.q_min:
            raise ConfigError("q grid needs q_max > q_min and q_step > 0")
        if self.n_min < self.detrend_order + 2:
            raise ConfigError(
                f"n_min={self.n_min} too small for detrend order {self.detrend_order}"
            )
        if self.n_max_divisor < 4:
            raise ConfigError("n_max_divisor must be >= 4 (max scale at most N/4)")
        if self.n_scales < 5:
            raise ConfigError("n_scales must be >= 5")
        if self.repetitions < 1 or self.transposition_factor < 1:
            raise ConfigError("repetitions and transposition_factor must be positive")
        if self.window < 1 or not 1 <= self.step <= self.window:
            raise ConfigError("need window >= 1 and 1 <= step <= window")
        if self.column not in ("Close", "Adj Close"):
            raise ConfigError(f"column must be 'Close' or 'Adj Close', got {self.column!r}")

    @property
    def min_length(self) -> int:
        """Shortest series the scale grid can handle."""
        return int(self.n_min * self.n_max_divisor)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)
