"""Word vectors and averaged triple vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .errors import EmptyLog, ParseError
from .templates import DELIMITERS, tokenize
from .triples import Triple

_MASK64 = (1 << 64) - 1
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h = ((h ^ b) * FNV_PRIME) & _MASK64
    return h


def splitmix64(state: int) -> tuple[int, int]:
    """One step of SplitMix64: returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


@lru_cache(maxsize=65536)
def _oov_tuple(word: str, dimension: int) -> tuple[float, ...]:
    state = fnv1a_64(word.encode("utf-8"))
    comps = []
    for _ in range(dimension):
        state, out = splitmix64(state)
        comps.append((out >> 11) * 2.0 ** -53 * 2.0 - 1.0)
    norm = math.sqrt(sum(c * c for c in comps))
    if norm == 0.0:
        return (1.0,) + (0.0,) * (dimension - 1)
    return tuple(c / norm for c in comps)


def oov_vector(word: str, dimension: int) -> np.ndarray:
    """Deterministic unit vector for a word missing from the table.

    FNV-1a (64 bit) of the UTF-8 bytes seeds a SplitMix64 stream; each
    output's top 53 bits become a uniform component in [-1, 1) and the
    result is scaled to unit length.
    """
    return np.array(_oov_tuple(word, dimension))


@dataclass(frozen=True, eq=False)
class EmbeddingTable:
    dimension: int
    vectors: dict

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")

    def __len__(self):
        return len(self.vectors)

    def __contains__(self, word):
        return word.lower() in self.vectors

    def vector_for_word(self, word: str) -> np.ndarray:
        w = word.lower()
        vec = self.vectors.get(w)
        if vec is None:
            return oov_vector(w, self.dimension)
        return vec

    def scaled(self, factor: float) -> "EmbeddingTable":
        return EmbeddingTable(self.dimension, {w: v * factor for w, v in self.vectors.items()})


def parse_embeddings(lines: Iterable[str], path=None) -> EmbeddingTable:
    it = iter(lines)
    header = next(it, None)
    if header is None or not header.strip():
        raise ParseError("missing 'vocab_size dimension' header", 1, path)
    parts = header.split()
    try:
        if len(parts) != 2:
            raise ValueError
        _, dim = int(parts[0]), int(parts[1])
        if dim < 1:
            raise ValueError
    except ValueError:
        raise ParseError("header must be two integers 'vocab_size dimension'", 1, path) from None

    vectors = {}
    for lineno, line in enumerate(it, 2):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != dim + 1:
            raise ParseError(f"expected word plus {dim} components, got {len(fields) - 1}",
                             lineno, path)
        try:
            vec = np.array([float(x) for x in fields[1:]])
        except ValueError:
            raise ParseError("non-numeric vector component", lineno, path) from None
        if not np.all(np.isfinite(vec)):
            raise ParseError("non-finite vector component", lineno, path)
        vec.setflags(write=False)
        vectors[fields[0].lower()] = vec
    return EmbeddingTable(dim, vectors)


def load_embeddings(path) -> EmbeddingTable:
    with open(path, encoding="utf-8") as fh:
        return parse_embeddings(fh, path=path)


def vector_for_word(table: EmbeddingTable, word: str) -> np.ndarray:
    return table.vector_for_word(word)


def text_words(text: Optional[str]) -> list[str]:
    """Lower-cased non-delimiter tokens of ``text``."""
    if not text:
        return []
    try:
        toks = tokenize(text)
    except EmptyLog:
        return []
    return [t.lower() for t in toks if t not in DELIMITERS and t != "."]


@dataclass(frozen=True, eq=False)
class TripleVector:
    triple: object
    vector: np.ndarray
    word_count: int


def mean_vector(table: EmbeddingTable, words: list[str]) -> np.ndarray:
    if not words:
        return np.zeros(table.dimension)
    total = np.zeros(table.dimension)
    for w in words:
        total += table.vector_for_word(w)
    return total / len(words)


def triple_vector(table: EmbeddingTable, triple: Triple) -> TripleVector:
    """Uniform mean of the word vectors of every word in the triple."""
    words = []
    for _, text in triple.elements():
        words += text_words(text)
    return TripleVector(triple, mean_vector(table, words), len(words))
