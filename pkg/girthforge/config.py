"""Resource budgets and the parsed CLI run configuration."""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional

from .errors import BadParameters, StorageError

BUDGET_ENV = "GIRTHFORGE_BUDGET_EDGES"


@dataclass(frozen=True)
class Budgets:
    power_edges: int = 10**8
    cycle_search_vertices: int = 10**5
    six_path_nodes: int = 10**7
    duality_nodes: int = 10**8
    bfs_batch: int = 256
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)

    def __post_init__(self) -> None:
        for name in ("power_edges", "cycle_search_vertices", "six_path_nodes",
                     "duality_nodes", "bfs_batch", "threads"):
            if getattr(self, name) <= 0:
                raise BadParameters(f"budget {name} must be positive")

    @classmethod
    def from_env(cls, **overrides: Any) -> "Budgets":
        raw = os.environ.get(BUDGET_ENV)
        if raw is not None and "power_edges" not in overrides:
            try:
                overrides["power_edges"] = int(raw)
            except ValueError:
                raise BadParameters(f"{BUDGET_ENV}={raw!r} is not an integer") from None
        return cls(**overrides)

    def with_threads(self, threads: Optional[int]) -> "Budgets":
        if threads is None:
            return self
        return replace(self, threads=threads)


def resolve(budgets: Optional[Budgets]) -> Budgets:
    return budgets if budgets is not None else Budgets.from_env()


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[Path] = None
    output: Optional[Path] = None
    params: Dict[str, Any] = field(default_factory=dict)
    toggles: Dict[str, bool] = field(default_factory=dict)
    budgets: Budgets = field(default_factory=Budgets.from_env)

    def validate(self) -> "RunConfig":
        if self.input is not None and not self.input.is_file():
            raise StorageError(f"input file not found: {self.input}")
        if self.output is not None:
            parent = self.output.parent
            if str(parent) and not parent.exists():
                raise StorageError(f"output directory does not exist: {parent}")
        return self
