"""Global configuration: tolerances, solver limits, and the RNG seed."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class Tolerances:
    psd_tol: float = 1e-9       # relative lower bound on eigenvalues for "PSD"
    rank_tol: float = 1e-8      # relative threshold below which eigenvalues count as zero
    residual_tol: float = 1e-8  # relative residual allowed in float-mode certificates

    def __post_init__(self):
        for name in ("psd_tol", "rank_tol", "residual_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class SolverOptions:
    max_iter: int = 200
    gap_tol: float = 1e-9       # stop when the scaled duality measure drops below this
    step_tol: float = 1e-12     # stop (stalled) when the line-search step shrinks below this
    feas_tol: float = 1e-7      # phase-1 margin separating feasible from infeasible

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        for name in ("gap_tol", "step_tol", "feas_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Config:
    seed: int = 0
    tolerances: Tolerances = field(default_factory=Tolerances)
    solver: SolverOptions = field(default_factory=SolverOptions)
    out_dir: str = "."

    @staticmethod
    def from_dict(data: dict) -> "Config":
        tol = Tolerances(**data.get("tolerances", {}))
        sol = SolverOptions(**data.get("solver", {}))
        return Config(seed=int(data.get("seed", 0)), tolerances=tol, solver=sol,
                      out_dir=data.get("out_dir", "."))

    @staticmethod
    def from_json(path: str) -> "Config":
        with open(path) as fh:
            return Config.from_dict(json.load(fh))

    def with_seed(self, seed: int) -> "Config":
        return replace(self, seed=seed)


DEFAULT = Config()
