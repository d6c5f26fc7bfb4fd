from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_TOL = 1e-10
ENV_VAR = "HRLAB_TOL"


@dataclass(frozen=True)
class ToleranceConfig:
    """Absolute/relative tolerance pair.

    Matrix comparisons pass when ``diff <= abs_tol + rel_tol * scale`` where
    ``scale`` is the largest norm among the operands.
    """

    abs_tol: float = DEFAULT_TOL
    rel_tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        if not (self.abs_tol >= 0 and self.rel_tol >= 0):
            raise ValueError("tolerances must be nonnegative")

    def bound(self, *scales: float) -> float:
        scale = max((abs(s) for s in scales), default=0.0)
        return self.abs_tol + self.rel_tol * scale

    def close(self, diff: float, *scales: float) -> bool:
        return diff <= self.bound(*scales)

    @classmethod
    def from_env(cls) -> "ToleranceConfig":
        raw = os.environ.get(ENV_VAR)
        if raw is None or raw.strip() == "":
            return cls()
        value = float(raw)
        return cls(value, value)


def default_tol() -> ToleranceConfig:
    return ToleranceConfig.from_env()
