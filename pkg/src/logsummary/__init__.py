"""Turn service logs into ranked relational-triple summaries."""

from .embedding import EmbeddingTable, load_embeddings, triple_vector
from .errors import (
    ConfigError,
    DegenerateInput,
    DimensionError,
    EmptyInput,
    EmptyLog,
    LogSummaryError,
    ParseError,
)
from .evaluation import benchmark_throughput, compression_ratio, rouge1, score_triples
from .extraction import LogIE, TripleCache, extract_for_template, extract_rule_triples, process_log
from .openie import HeuristicOpenIE, extract_openie_triples
from .ranking import RankConfig, RankedSummary, build_graph, rank_triples, sentence_textrank, weighted_textrank
from .templates import Template, TemplateStore, load_templates, save_templates, split_template, tokenize
from .triples import Triple

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DegenerateInput", "DimensionError", "EmbeddingTable", "EmptyInput", "EmptyLog",
    "HeuristicOpenIE", "LogIE", "LogSummaryError", "ParseError", "RankConfig", "RankedSummary",
    "Template", "TemplateStore", "Triple", "TripleCache", "benchmark_throughput", "build_graph",
    "compression_ratio", "extract_for_template", "extract_openie_triples", "extract_rule_triples",
    "load_embeddings", "load_templates", "process_log", "rank_triples", "rouge1", "save_templates",
    "score_triples", "sentence_textrank", "split_template", "tokenize", "triple_vector",
    "weighted_textrank",
]
