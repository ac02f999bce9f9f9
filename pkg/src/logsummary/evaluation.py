"""Summary and extraction metrics, gold-file handling and the throughput benchmark."""

from __future__ import annotations

import copy
import json
import statistics
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from .embedding import EmbeddingTable, text_words
from .errors import ConfigError, DegenerateInput, EmptyLog, ParseError
from .extraction import LogIE
from .ranking import RankConfig, rank_triples
from .templates import TemplateStore
from .triples import Triple

# published reference points, reported for context only
REFERENCE_POINTS = {
    "rouge": {"rouge1_f1_mean": 0.741},
    "ratio": {"compression_ratio_mean": 0.031},
    "triples": {"f1_bgl": 0.89, "f1_hdfs": 0.626, "f1_hpc": 0.751, "f1_proxifier": 0.839},
    "bench": {"cached_logs_per_s": 8550.66, "uncached_openie_logs_per_s": 39.05},
}


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float
    overlap_count: int
    candidate_count: int
    reference_count: int


def rouge1(candidate: str, reference: str) -> RougeScore:
    """Unigram ROUGE with precision over the candidate, recall over the reference.

    Both raw counts are kept so the opposite orientation can be formed.
    """
    cand = text_words(candidate)
    ref = text_words(reference)
    if not cand and not ref:
        return RougeScore(1.0, 1.0, 1.0, 0, 0, 0)
    c, r = Counter(cand), Counter(ref)
    overlap = sum((c & r).values())
    p = overlap / len(cand) if cand else 0.0
    rec = overlap / len(ref) if ref else 0.0
    return RougeScore(p, rec, _f1(p, rec), overlap, len(cand), len(ref))


def compression_ratio(summary: str, original_logs: str) -> float:
    """Character size of the summary over character size of the original logs."""
    if not original_logs:
        raise DegenerateInput("original logs are empty")
    return len(summary) / len(original_logs)


@dataclass(frozen=True)
class TripleMatchScore:
    precision: float
    recall: float
    f1: float
    matched_pairs: tuple[tuple[int, int], ...] = ()  # (predicted index, gold index)
    predicted_count: int = 0
    gold_count: int = 0


def _element_words(t: Triple) -> list[list[str]]:
    return [text_words(text) for text in t.key]


def triple_overlap(predicted: Triple, gold: Triple, threshold: float = 0.5) -> Optional[float]:
    """Mean per-role overlap if every non-empty gold element is covered, else None.

    Coverage of a role is |gold ∩ predicted| / |gold| over token multisets.
    """
    scores = []
    for p_words, g_words in zip(_element_words(predicted), _element_words(gold)):
        if not g_words:
            continue
        hit = sum((Counter(p_words) & Counter(g_words)).values()) / len(g_words)
        if hit < threshold:
            return None
        scores.append(hit)
    return sum(scores) / len(scores) if scores else None


def score_triples(predicted: Sequence[Triple], gold: Sequence[Triple],
                  threshold: float = 0.5) -> TripleMatchScore:
    """Greedy one-to-one token-overlap matching.

    Every prediction is tested against every gold triple; pairs are taken
    in descending overlap with ties resolved by element text, so the
    result does not depend on the order of either list.
    """
    if not predicted and not gold:
        return TripleMatchScore(1.0, 1.0, 1.0)
    cands = []
    for i, p in enumerate(predicted):
        for j, g in enumerate(gold):
            s = triple_overlap(p, g, threshold)
            if s is not None:
                cands.append((-s, _sort_key(g), _sort_key(p), j, i))
    cands.sort()
    used_p, used_g, pairs = set(), set(), []
    for _, _, _, j, i in cands:
        if i in used_p or j in used_g:
            continue
        used_p.add(i)
        used_g.add(j)
        pairs.append((i, j))
    p = len(pairs) / len(predicted) if predicted else 0.0
    r = len(pairs) / len(gold) if gold else 0.0
    return TripleMatchScore(p, r, _f1(p, r), tuple(sorted(pairs)), len(predicted), len(gold))


def _sort_key(t: Triple) -> tuple:
    return tuple(x or "" for x in t.key)


# gold and prediction files

@dataclass
class GoldGroup:
    group_id: str
    logs: list[str]
    gold_triples: list[Triple]
    summary: Optional[str] = None

    def reference_text(self) -> str:
        if self.summary is not None:
            return self.summary
        return "\n".join(t.words() for t in self.gold_triples)


@dataclass
class Prediction:
    group_id: str
    triples: list[Triple] = field(default_factory=list)
    summary: Optional[str] = None

    def summary_text(self) -> str:
        if self.summary is not None:
            return self.summary
        return "\n".join(t.words() for t in self.triples)


def _triple_list(items, what, lineno, path) -> list[Triple]:
    if not isinstance(items, list):
        raise ParseError(f"'{what}' must be a list", lineno, path)
    try:
        return [Triple.from_list(x) for x in items]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad entry in '{what}': {exc}", lineno, path) from None


def _records(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", lineno, path) from None
            if not isinstance(rec, dict) or "group_id" not in rec:
                raise ParseError("record must be an object with 'group_id'", lineno, path)
            yield lineno, rec


def read_gold(path) -> list[GoldGroup]:
    groups = []
    for lineno, rec in _records(path):
        logs = rec.get("logs", [])
        if not isinstance(logs, list) or not all(isinstance(x, str) for x in logs):
            raise ParseError("'logs' must be a list of strings", lineno, path)
        groups.append(GoldGroup(str(rec["group_id"]), logs,
                                _triple_list(rec.get("gold_triples", []), "gold_triples", lineno, path),
                                rec.get("summary")))
    return groups


def read_predictions(path) -> list[Prediction]:
    preds = []
    for lineno, rec in _records(path):
        preds.append(Prediction(str(rec["group_id"]),
                                _triple_list(rec.get("triples", []), "triples", lineno, path),
                                rec.get("summary")))
    return preds


def write_predictions(preds: Sequence[Prediction], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in preds:
            rec = {"group_id": p.group_id, "triples": [list(t.key) for t in p.triples]}
            if p.summary is not None:
                rec["summary"] = p.summary
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def write_gold(groups: Sequence[GoldGroup], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for g in groups:
            rec = {"group_id": g.group_id, "logs": g.logs,
                   "gold_triples": [list(t.key) for t in g.gold_triples]}
            if g.summary is not None:
                rec["summary"] = g.summary
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def predict_groups(groups: Sequence[GoldGroup], table: EmbeddingTable,
                   config: RankConfig = RankConfig(), ie: Optional[LogIE] = None) -> list[Prediction]:
    """Summarize each group's logs into a prediction.

    One extractor (and template store) is shared across groups so templates
    seen in earlier groups are reused.  Blank log lines are skipped.
    """
    ie = ie or LogIE()
    preds = []
    for g in groups:
        triples = []
        for i, log in enumerate(g.logs):
            try:
                triples.extend(ie.process_log(log, i))
            except EmptyLog:
                continue
        summary = rank_triples(triples, table, config)
        preds.append(Prediction(g.group_id, summary.triples(), summary.plain_text()))
    return preds


def evaluate(metric: str, predictions: Sequence[Prediction], gold: Sequence[GoldGroup],
             overlap_threshold: float = 0.5) -> dict:
    """Per-group scores plus corpus means for ``rouge``, ``triples`` or ``ratio``.

    Groups are paired by ``group_id``; a gold group without a prediction
    scores as an empty prediction.
    """
    by_id = {p.group_id: p for p in predictions}
    rows = []
    for g in gold:
        p = by_id.get(g.group_id, Prediction(g.group_id))
        if metric == "rouge":
            s = rouge1(p.summary_text(), g.reference_text())
            row = {"precision": s.precision, "recall": s.recall, "f1": s.f1,
                   "overlap_count": s.overlap_count, "candidate_count": s.candidate_count,
                   "reference_count": s.reference_count}
        elif metric == "triples":
            s = score_triples(p.triples, g.gold_triples, overlap_threshold)
            row = {"precision": s.precision, "recall": s.recall, "f1": s.f1,
                   "matched": len(s.matched_pairs), "predicted_count": s.predicted_count,
                   "gold_count": s.gold_count}
        elif metric == "ratio":
            row = {"compression_ratio": compression_ratio(p.summary_text(), "\n".join(g.logs))}
        else:
            raise ConfigError(f"unknown metric {metric!r}")
        rows.append({"group_id": g.group_id, **row})
    score_keys = {"rouge": ("precision", "recall", "f1"), "triples": ("precision", "recall", "f1"),
                  "ratio": ("compression_ratio",)}[metric]
    means = {k: (statistics.fmean(r[k] for r in rows) if rows else 0.0) for k in score_keys}
    return {"metric": metric, "groups": rows, "mean": means,
            "reference_points": REFERENCE_POINTS.get(metric, {})}


def report_lines(report: dict) -> list[str]:
    lines = [json.dumps({"type": "header", "metric": report["metric"],
                         "reference_points": report["reference_points"]})]
    lines += [json.dumps({"type": "group", **row}, ensure_ascii=False) for row in report["groups"]]
    lines.append(json.dumps({"type": "mean", "groups": len(report["groups"]), **report["mean"]}))
    return lines


# throughput

@dataclass(frozen=True)
class BenchReport:
    n_logs: int
    runs: int
    cold_mean: float
    cold_std: float
    cached_mean: float
    cached_std: float
    identical_output: bool

    @property
    def speedup(self) -> float:
        return self.cached_mean / self.cold_mean

    def to_dict(self) -> dict:
        return {**asdict(self), "speedup": self.speedup,
                "reference_points": REFERENCE_POINTS["bench"]}


MIN_BENCH_LOGS = 1000
MIN_BENCH_RUNS = 3


def _timed(ie: LogIE, logs: Sequence[str]):
    t0 = time.perf_counter()
    out = [ie.process_log(log, i) for i, log in enumerate(logs)]
    return len(logs) / (time.perf_counter() - t0), out


def benchmark_throughput(logs: Sequence[str], runs: int = 30, store: Optional[TemplateStore] = None,
                         extractor=None) -> BenchReport:
    """Logs per second with and without the template-level triple cache.

    The uncached path splits and extracts every log as if it had never been
    seen; the cached path replays from a pre-warmed cache.  Both start each
    run from a copy of the same template store, learned from ``logs`` when
    none is given.
    """
    if len(logs) < MIN_BENCH_LOGS:
        raise ConfigError(f"benchmark needs at least {MIN_BENCH_LOGS} logs, got {len(logs)}")
    if runs < MIN_BENCH_RUNS:
        raise ConfigError(f"benchmark needs at least {MIN_BENCH_RUNS} runs, got {runs}")
    if store is None:
        store = TemplateStore()
        for log in logs:
            store.learn_log(log)

    cold, cold_out = [], None
    for _ in range(runs):
        rate, cold_out = _timed(LogIE(copy.deepcopy(store), extractor=extractor, use_cache=False), logs)
        cold.append(rate)

    warm = LogIE(copy.deepcopy(store), extractor=extractor)
    for log in logs:
        warm.process_log(log)
    cached, cached_out = [], None
    for _ in range(runs):
        rate, cached_out = _timed(warm, logs)
        cached.append(rate)

    return BenchReport(len(logs), runs, statistics.fmean(cold), statistics.stdev(cold),
                       statistics.fmean(cached), statistics.stdev(cached),
                       cold_out == cached_out)
