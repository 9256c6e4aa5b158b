"""Global numeric tolerance and run configuration."""
from __future__ import annotations

from dataclasses import dataclass

_TOL = 1e-9


def get_tol() -> float:
    return _TOL


def set_tol(tol: float) -> None:
    global _TOL
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    _TOL = float(tol)


def resolve_tol(tol: float | None) -> float:
    return _TOL if tol is None else float(tol)


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = 1e-9
    seed: int = 0
    trials: int = 100
    jobs: int = 1

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
