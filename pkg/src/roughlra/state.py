"""Search state, instrumentation counters and the reduction report."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .granulation import GranuleView, Partition, PositiveRegion

CLASSIC = "classic"
NEIGHBORHOOD = "neighborhood"
MODES = (CLASSIC, NEIGHBORHOOD)
VARIANTS = ("plain", "fspa", "farnemf", "lra")


class ConfigError(ValueError):
    pass


@dataclass
class Instrumentation:
    """Deterministic work counters for one reduction run.

    ``samples_touched`` counts sample rows whose block or granule was
    (re)computed; ``granule_evals`` counts blocks (classic) or granules
    (neighborhood) produced; ``pair_evals`` counts pairwise distance tests.
    Only ``wall_time`` depends on the machine.
    """

    granule_evals: int = 0
    candidate_evals: int = 0
    samples_touched: int = 0
    pair_evals: int = 0
    iterations: int = 0
    wall_time: float = 0.0

    def deterministic(self) -> dict[str, int]:
        d = asdict(self)
        d.pop("wall_time")
        return d


@dataclass
class ReductState:
    selected: list[int]
    universe_remaining: np.ndarray
    candidates: list[int]
    redundant: list[int]
    pos_accum: PositiveRegion
    gamma_trace: list[int] = field(default_factory=list)
    counters: Instrumentation = field(default_factory=Instrumentation)
    # Partition (classic) or GranuleView (neighborhood) of the evaluation universe under `selected`
    structure: Partition | GranuleView | None = None
    # lra only: live candidate -> active region (sample ids, subset of universe_remaining)
    active: dict[int, np.ndarray] = field(default_factory=dict)
    # attribute -> number of selected attributes when it was declared redundant
    redundant_at: dict[int, int] = field(default_factory=dict)
    terminal: bool = False

    def check(self, n_attributes: int, n_samples: int) -> None:
        s, c, r = set(self.selected), set(self.candidates), set(self.redundant)
        if s & c or s & r or c & r or (s | c | r) != set(range(n_attributes)):
            raise AssertionError("selected/candidates/redundant must partition the attributes")
        rest = np.setdiff1d(np.arange(n_samples), self.pos_accum.members)
        if not np.array_equal(rest, self.universe_remaining):
            raise AssertionError("universe_remaining must equal U minus the accumulated positive region")
        if any(b < a for a, b in zip(self.gamma_trace, self.gamma_trace[1:])):
            raise AssertionError("gamma trace must be non-decreasing")
        for a, region in self.active.items():
            if not np.all(np.isin(region, self.universe_remaining)):
                raise AssertionError(f"active region of {a} escapes the remaining universe")


@dataclass
class ReductionReport:
    algorithm: str
    mode: str
    reduct: list[int]
    reduct_names: list[str]
    final_pos_size: int
    n_samples: int
    gamma_trace: list[int]
    redundant: list[int]
    counters: Instrumentation
    config: dict[str, Any]

    @property
    def dependency(self) -> float:
        return self.final_pos_size / self.n_samples

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["dependency"] = self.dependency
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ReductionReport":
        d = dict(d)
        d.pop("dependency", None)
        d["counters"] = Instrumentation(**d["counters"])
        return cls(**d)
