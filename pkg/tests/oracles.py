"""Independent reference implementations used to freeze expected values.

Nothing here imports from ``logsummary``; each oracle re-derives its answer
by a different route than the production code (character state machine,
dense linear solve, brute-force pair enumeration, exhaustive matching).
"""

import math
from collections import Counter

import numpy as np

ALWAYS_SPLIT = set("()[]=,;")


def reference_tokenize(text):
    """Character-level state machine for the tokenizer rules."""
    chunks = []
    cur = []
    for ch in text:
        if ch.isspace():
            if cur:
                chunks.append("".join(cur))
                cur = []
        elif ch in ALWAYS_SPLIT:
            if cur:
                chunks.append("".join(cur))
                cur = []
            chunks.append(ch)
        else:
            cur.append(ch)
    if cur:
        chunks.append("".join(cur))

    out = []
    for chunk in chunks:
        tail = []
        # peel trailing ':' always, trailing '.' unless it is part of '..'
        while len(chunk) > 1:
            if chunk[-1] == ":":
                tail.append(":")
                chunk = chunk[:-1]
            elif chunk[-1] == "." and chunk[-2] != ".":
                tail.append(".")
                chunk = chunk[:-1]
            else:
                break
        out.append(chunk)
        out.extend(reversed(tail))
    return out


def dense_textrank(weights, d):
    """Solve WS = (1-d) + d * P^T WS exactly with a linear solve.

    ``weights`` is a symmetric non-negative matrix with zero diagonal.
    """
    w = np.asarray(weights, dtype=float)
    n = w.shape[0]
    p = np.zeros_like(w)
    for j in range(n):
        s = w[j].sum()
        if s > 0:
            p[j] = w[j] / s
    a = np.eye(n) - d * p.T
    return np.linalg.solve(a, np.full(n, 1.0 - d))


def fixed_point_residual(weights, scores, d):
    """Max |WS(V_i) - rhs_i| evaluated with explicit In/Out loops."""
    n = len(scores)
    worst = 0.0
    for i in range(n):
        acc = 0.0
        for j in range(n):
            if j == i or weights[j][i] <= 0:
                continue
            out_sum = sum(weights[j][k] for k in range(n) if k != j and weights[j][k] > 0)
            acc += weights[j][i] / out_sum * scores[j]
        rhs = (1.0 - d) + d * acc
        worst = max(worst, abs(rhs - scores[i]))
    return worst


def pairwise_clamped_cosine(vectors):
    n = len(vectors)
    out = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            u, v = vectors[i], vectors[j]
            dot = sum(a * b for a, b in zip(u, v))
            nu = math.sqrt(sum(a * a for a in u))
            nv = math.sqrt(sum(b * b for b in v))
            c = 0.0 if nu == 0 or nv == 0 else dot / (nu * nv)
            out[i][j] = min(1.0, max(0.0, c))
    return out


def brute_mean(vectors):
    n = len(vectors)
    dim = len(vectors[0])
    return [sum(v[k] for v in vectors) / n for k in range(dim)]


def rouge1_counts(candidate_words, reference_words):
    """Plain multiset intersection count, as in common ROUGE-1 scripts."""
    c = Counter(candidate_words)
    r = Counter(reference_words)
    overlap = sum(min(c[w], r[w]) for w in c)
    p = overlap / len(candidate_words) if candidate_words else 0.0
    rec = overlap / len(reference_words) if reference_words else 0.0
    f = 2 * p * rec / (p + rec) if p + rec else 0.0
    return overlap, p, rec, f


def fnv1a64(data):
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) % (1 << 64)
    return h


def splitmix64_stream(seed, n):
    out = []
    state = seed
    mask = (1 << 64) - 1
    for _ in range(n):
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        out.append(z ^ (z >> 31))
    return out
