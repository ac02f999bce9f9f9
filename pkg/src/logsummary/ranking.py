"""Similarity graphs over triples and weighted TextRank."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .embedding import EmbeddingTable, TripleVector, mean_vector, text_words, triple_vector
from .errors import ConfigError, DimensionError
from .triples import Triple


@dataclass(frozen=True)
class RankConfig:
    damping: float = 0.85
    tolerance: float = 1e-6
    max_iterations: int = 100
    k: int = 5

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ConfigError("damping must lie strictly between 0 and 1")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be at least 1")
        if self.k < 1:
            raise ConfigError("k must be at least 1")


def cosine_similarity(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def similarity_matrix(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Pairwise cosine clamped to [0, 1], exactly symmetric, zero diagonal."""
    n = len(vectors)
    if n == 0:
        return np.zeros((0, 0))
    mat = np.vstack([np.asarray(v, dtype=float) for v in vectors])
    norms = np.linalg.norm(mat, axis=1)
    unit = np.divide(mat, norms[:, None], out=np.zeros_like(mat), where=norms[:, None] > 0)
    sims = np.clip(unit @ unit.T, 0.0, 1.0)
    upper = np.triu(sims, 1)
    return upper + upper.T


@dataclass
class WeightedGraph:
    """Vertices are distinct items; ``weights[j, i]`` is the weight of edge j -> i."""

    labels: list
    weights: np.ndarray
    multiplicity: list[int]
    first_index: list[int]

    def __len__(self):
        return len(self.labels)

    def in_edges(self, i: int) -> list[int]:
        return [int(j) for j in np.nonzero(self.weights[:, i] > 0)[0]]

    def out_edges(self, i: int) -> list[int]:
        return [int(k) for k in np.nonzero(self.weights[i] > 0)[0]]

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.weights > 0))


def _graph(keys: Sequence[Hashable], labels: Sequence, vectors: Sequence[np.ndarray]) -> WeightedGraph:
    index: dict = {}
    uniq_labels, uniq_vecs, mult, first = [], [], [], []
    dim = None
    for pos, (key, label, vec) in enumerate(zip(keys, labels, vectors)):
        if dim is None:
            dim = len(vec)
        elif len(vec) != dim:
            raise DimensionError("all vectors must share one dimension")
        slot = index.get(key)
        if slot is None:
            index[key] = len(uniq_labels)
            uniq_labels.append(label)
            uniq_vecs.append(vec)
            mult.append(1)
            first.append(pos)
        else:
            mult[slot] += 1
    return WeightedGraph(uniq_labels, similarity_matrix(uniq_vecs), mult, first)


def build_graph(vectors: Sequence[TripleVector]) -> WeightedGraph:
    """Deduplicate triples by element text, then link by clamped cosine."""
    return _graph([tv.triple.key for tv in vectors], [tv.triple for tv in vectors],
                  [tv.vector for tv in vectors])


@dataclass
class TextRankResult:
    scores: np.ndarray
    converged: bool
    iterations: int

    def as_dict(self) -> dict[int, float]:
        return {i: float(s) for i, s in enumerate(self.scores)}


def transition_matrix(weights: np.ndarray) -> np.ndarray:
    """Row j holds w_ji / sum_k w_jk (zero rows for vertices without out-edges)."""
    out = weights.sum(axis=1)
    return np.divide(weights, out[:, None], out=np.zeros_like(weights), where=out[:, None] > 0)


def weighted_textrank(graph: WeightedGraph, config: RankConfig = RankConfig()) -> TextRankResult:
    """Iterate WS(i) = (1-d) + d * sum_j w_ji / out(j) * WS(j) from all ones.

    Updates are synchronous.  Stops once the largest score change drops
    below ``config.tolerance``; otherwise returns the last iterate with
    ``converged=False``.
    """
    n = len(graph)
    if n == 0:
        return TextRankResult(np.zeros(0), True, 0)
    d = config.damping
    incoming = transition_matrix(graph.weights).T.copy()
    scores = np.ones(n)
    for it in range(1, config.max_iterations + 1):
        new = (1.0 - d) + d * (incoming @ scores)
        delta = float(np.max(np.abs(new - scores)))
        scores = new
        if delta < config.tolerance:
            return TextRankResult(scores, True, it)
    return TextRankResult(scores, False, config.max_iterations)


@dataclass(frozen=True)
class SummaryEntry:
    item: object
    score: float
    multiplicity: int

    @property
    def triple(self) -> Triple:
        return self.item


@dataclass
class RankedSummary:
    entries: list[SummaryEntry]
    converged: bool = True
    iterations: int = 0

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def triples(self) -> list[Triple]:
        return [e.item for e in self.entries]

    def to_records(self) -> list[dict]:
        return [{"rank": r, "score": e.score, "multiplicity": e.multiplicity,
                 "elements": [{"role": role, "text": text} for role, text in e.item.elements()]}
                for r, e in enumerate(self.entries, 1)]

    def render(self) -> str:
        return "".join(e.item.render() + "\n" for e in self.entries)

    def plain_text(self) -> str:
        """Element words only, one triple per line."""
        return "\n".join(e.item.words() for e in self.entries)


def _ranked(graph: WeightedGraph, config: RankConfig, limit: int) -> RankedSummary:
    result = weighted_textrank(graph, config)
    order = sorted(range(len(graph)), key=lambda i: (-result.scores[i], graph.first_index[i]))
    entries = [SummaryEntry(graph.labels[i], float(result.scores[i]), graph.multiplicity[i])
               for i in order[:limit]]
    return RankedSummary(entries, result.converged, result.iterations)


def rank_triples(triples: Sequence[Triple], table: EmbeddingTable,
                 config: RankConfig = RankConfig()) -> RankedSummary:
    """Average word vectors, build the similarity graph, run TextRank, keep the top k.

    Ties in score go to the triple that occurred first in ``triples``.
    """
    if not triples:
        return RankedSummary([], True, 0)
    memo: dict = {}
    vectors = []
    for t in triples:
        tv = memo.get(t.key)
        if tv is None:
            tv = memo[t.key] = triple_vector(table, t)
        vectors.append(TripleVector(t, tv.vector, tv.word_count))
    graph = build_graph(vectors)
    return _ranked(graph, config, min(config.k, len(graph)))


def sentence_textrank(logs: Sequence[str], table: EmbeddingTable,
                      config: RankConfig = RankConfig(), limit=None) -> list[tuple[str, float, int]]:
    """Baseline: the same ranking with whole log lines as vertices.

    Returns ``(log, score, multiplicity)`` for every distinct log (or the
    first ``limit``), best first.
    """
    if not logs:
        return []
    vecs = [mean_vector(table, text_words(log)) for log in logs]
    graph = _graph(list(logs), list(logs), vecs)
    summary = _ranked(graph, config, len(graph) if limit is None else min(limit, len(graph)))
    return [(e.item, e.score, e.multiplicity) for e in summary.entries]
