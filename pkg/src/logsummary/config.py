"""Central defaults for every pipeline knob."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from .errors import ConfigError
from .ranking import RankConfig


@dataclass
class PipelineConfig:
    logs: Optional[str] = None
    templates: Optional[str] = None
    embeddings: Optional[str] = None
    triples: Optional[str] = None
    domain_triples: Optional[str] = None
    gold: Optional[str] = None
    output: Optional[str] = None

    merge_threshold: float = 0.6
    damping: float = 0.85
    tolerance: float = 1e-6
    max_iterations: int = 100
    k: int = 5
    overlap_threshold: float = 0.5
    runs: int = 30
    threads: int = 1

    def validate(self) -> "PipelineConfig":
        if not 0.0 < self.merge_threshold <= 1.0:
            raise ConfigError("merge threshold must lie in (0, 1]")
        if not 0.0 < self.overlap_threshold <= 1.0:
            raise ConfigError("overlap threshold must lie in (0, 1]")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        self.rank_config()
        return self

    def rank_config(self) -> RankConfig:
        return RankConfig(damping=self.damping, tolerance=self.tolerance,
                          max_iterations=self.max_iterations, k=self.k)

    def to_dict(self) -> dict:
        return asdict(self)
