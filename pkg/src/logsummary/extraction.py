"""Template-level triple extraction, caching and per-log replay."""

from __future__ import annotations

import re
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .openie import default_extractor
from .templates import (
    WILDCARD,
    MatchResult,
    Template,
    TemplateSplit,
    TemplateStore,
    is_flag,
    split_template,
    tokenize,
)
from .triples import RE, Triple

Extractor = Callable[..., list]

CLAUSE_BREAKS = frozenset(["(", ")", "[", "]", ",", ";"])
PAIR_SEPARATORS = frozenset(["=", ":"])
_PLACEHOLDER = re.compile(r"^VAR(\d+)$")


def placeholder(ordinal: int) -> str:
    return f"VAR{ordinal}"


def _rule_clauses(tokens: Sequence[str]) -> list[list[str]]:
    clauses, cur = [], []
    for tok in tokens:
        if tok in CLAUSE_BREAKS:
            if cur:
                clauses.append(cur)
            cur = []
        else:
            cur.append(tok)
    if cur:
        clauses.append(cur)
    return clauses


def _key_text(key: list[str]) -> Optional[str]:
    if not key:
        return None
    if is_flag(key[0]):
        key = [key[0].lstrip("-")] + key[1:]
    return " ".join(key)


def extract_rule_triples(structured_tokens: Sequence[str],
                         template_id: Optional[int] = None) -> list[Triple]:
    """Entity-value triples from a structured subpart.

    ``K = V`` and ``K : V`` give ``(K, is, V)``; ``--flag V`` gives
    ``(flag, is, V)`` and a bare ``--flag`` gives ``(flag, is, set)``.
    Keys may span several tokens back to the previous delimiter.  When more
    pairs follow in the same clause, a value is a single token.
    """
    out: list[Triple] = []

    def emit(key, value):
        k = _key_text(key)
        if k and value:
            out.append(Triple(relation="is", arg1=k, arg2=" ".join(value),
                              source=RE, origin_template=template_id))

    for clause in _rule_clauses(structured_tokens):
        n = len(clause)
        seps = [i for i, t in enumerate(clause) if t in PAIR_SEPARATORS]
        key_start = 0
        i = 0
        while i < n:
            tok = clause[i]
            if tok in PAIR_SEPARATORS:
                key = clause[key_start:i]
                later = [s for s in seps if s > i]
                if later:
                    value = clause[i + 1:min(i + 2, later[0])]
                    nxt = i + 1 + len(value)
                else:
                    stop = i + 1
                    while stop < n and not is_flag(clause[stop]):
                        stop += 1
                    value = clause[i + 1:stop]
                    nxt = stop
                emit(key, value)
                key_start = i = nxt
                continue
            if i == key_start and is_flag(tok) and not (i + 1 < n and clause[i + 1] in PAIR_SEPARATORS):
                nxt_tok = clause[i + 1] if i + 1 < n else None
                takes_value = (nxt_tok is not None and not is_flag(nxt_tok)
                               and not (i + 2 < n and clause[i + 2] in PAIR_SEPARATORS))
                if takes_value:
                    emit([tok], [nxt_tok])
                    i += 2
                else:
                    emit([tok], ["set"])
                    i += 1
                key_start = i
                continue
            i += 1
    return out


def template_tokens_with_placeholders(template: Template) -> list[str]:
    out, k = [], 0
    for tok in template.tokens:
        if tok == WILDCARD:
            k += 1
            out.append(placeholder(k))
        else:
            out.append(tok)
    return out


def extract_for_template(template: Template, split: Optional[TemplateSplit] = None,
                         extractor: Optional[Extractor] = None) -> list[Triple]:
    """Rule triples over structured parts, then semantic triples over free text."""
    if split is None:
        split = split_template(template)
    if split.template_id != template.id:
        raise ValueError("split does not belong to this template")
    extractor = extractor or default_extractor
    toks = template_tokens_with_placeholders(template)
    rule: list[Triple] = []
    semantic: list[Triple] = []
    for a, b in split.structured_parts:
        rule += extract_rule_triples(toks[a:b], template.id)
    for a, b in split.free_text_parts:
        semantic += extractor(toks[a:b], template.id)
    return rule + semantic


# substitution

def _compile_element(text: Optional[str]):
    if text is None:
        return None
    parts = []
    dynamic = False
    for tok in text.split(" "):
        m = _PLACEHOLDER.match(tok)
        if m:
            parts.append(int(m.group(1)))
            dynamic = True
        else:
            parts.append(tok)
    return tuple(parts) if dynamic else text


def _fill(compiled, values: Sequence[str]):
    if compiled is None or isinstance(compiled, str):
        return compiled
    n = len(values)
    return " ".join(values[p - 1] if isinstance(p, int) and p <= n
                    else (placeholder(p) if isinstance(p, int) else p)
                    for p in compiled)


@dataclass
class CacheEntry:
    template: Template
    triples: list[Triple]
    plan: list[tuple] = field(default_factory=list)

    def __post_init__(self):
        self.plan = [(t, _compile_element(t.arg1), _compile_element(t.relation),
                      _compile_element(t.arg2)) for t in self.triples]

    def replay(self, match: MatchResult, log_index: Optional[int]) -> list[Triple]:
        values = match.values()
        return [Triple(relation=_fill(rel, values), arg1=_fill(a1, values),
                       arg2=_fill(a2, values), source=t.source,
                       origin_template=t.origin_template, origin_log=log_index)
                for t, a1, rel, a2 in self.plan]


def substitute(triples: Sequence[Triple], match: MatchResult,
               log_index: Optional[int] = None) -> list[Triple]:
    """Replace every ``VARX`` placeholder with the matched variable value."""
    values = match.values()
    return [Triple(relation=_fill(_compile_element(t.relation), values),
                   arg1=_fill(_compile_element(t.arg1), values),
                   arg2=_fill(_compile_element(t.arg2), values),
                   source=t.source, origin_template=t.origin_template, origin_log=log_index)
            for t in triples]


class TripleCache:
    """Template id -> template-level triples.

    An entry is tied to the exact template it was extracted from; when the
    store later generalizes that template the stale entry is ignored and
    replaced on the next miss.
    """

    def __init__(self):
        self._entries: dict[int, CacheEntry] = {}

    def __len__(self):
        return len(self._entries)

    def __contains__(self, template_id):
        return template_id in self._entries

    def lookup(self, template: Template) -> Optional[CacheEntry]:
        entry = self._entries.get(template.id)
        if entry is None:
            return None
        if entry.template is template or entry.template == template:
            return entry
        return None

    def put(self, template: Template, triples: list[Triple]) -> CacheEntry:
        entry = CacheEntry(template, list(triples))
        self._entries[template.id] = entry
        return entry

    def triples_for(self, template_id: int) -> list[Triple]:
        return list(self._entries[template_id].triples)


class _RWLock:
    """Many readers or one writer."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writer = False

    @contextmanager
    def read(self):
        with self._cond:
            while self._writer:
                self._cond.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                if not self._readers:
                    self._cond.notify_all()

    @contextmanager
    def write(self):
        with self._cond:
            while self._writer or self._readers:
                self._cond.wait()
            self._writer = True
        try:
            yield
        finally:
            with self._cond:
                self._writer = False
                self._cond.notify_all()


@dataclass
class CacheStats:
    hits: int = 0
    misses: int = 0
    extractions: int = 0

    @property
    def lookups(self) -> int:
        return self.hits + self.misses

    @property
    def hit_ratio(self) -> float:
        return self.hits / self.lookups if self.lookups else 0.0


class LogIE:
    """Match, extract on miss, replay on hit.

    With ``use_cache=False`` every log goes through template splitting and
    extraction, which is the uncached baseline used for benchmarking.
    ``threadsafe=True`` lets several threads call ``process_log``: cache
    hits run under a shared lock, misses take it exclusively.
    """

    def __init__(self, store: Optional[TemplateStore] = None, cache: Optional[TripleCache] = None,
                 extractor: Optional[Extractor] = None, use_cache: bool = True,
                 threadsafe: bool = False):
        self.store = store if store is not None else TemplateStore()
        self.cache = cache if cache is not None else TripleCache()
        self.extractor = extractor or default_extractor
        self.use_cache = use_cache
        self.stats = CacheStats()
        self._lock = _RWLock() if threadsafe else None
        self._stats_lock = threading.Lock() if threadsafe else None

    def _extract(self, template: Template) -> list[Triple]:
        self.stats.extractions += 1
        return extract_for_template(template, split_template(template), self.extractor)

    def _hit(self, tokens) -> Optional[list]:
        match = self.store.match(tokens)
        if match is None:
            return None
        entry = self.cache.lookup(self.store.templates[match.template_id])
        if entry is None:
            return None
        return [entry, match]

    def _miss(self, tokens, log_index):
        match = self.store.match(tokens)
        if match is None:
            self.store.learn(tokens)
            match = self.store.match(tokens)
        template = self.store.templates[match.template_id]
        entry = self.cache.lookup(template)
        if entry is None:
            entry = self.cache.put(template, self._extract(template))
        return entry.replay(match, log_index)

    def process_log(self, raw_log: str, log_index: Optional[int] = None) -> list[Triple]:
        tokens = tokenize(raw_log)
        if not self.use_cache:
            match = self.store.match(tokens)
            if match is None:
                self.store.learn(tokens)
                match = self.store.match(tokens)
            self.stats.misses += 1
            template = self.store.templates[match.template_id]
            return CacheEntry(template, self._extract(template)).replay(match, log_index)

        if self._lock is None:
            found = self._hit(tokens)
            if found is not None:
                self.stats.hits += 1
                return found[0].replay(found[1], log_index)
            self.stats.misses += 1
            return self._miss(tokens, log_index)

        with self._lock.read():
            found = self._hit(tokens)
            if found is not None:
                result = found[0].replay(found[1], log_index)
        if found is not None:
            with self._stats_lock:
                self.stats.hits += 1
            return result
        with self._lock.write():
            self.stats.misses += 1
            return self._miss(tokens, log_index)

    def process_logs(self, logs, start: int = 0) -> list[list[Triple]]:
        return [self.process_log(log, i) for i, log in enumerate(logs, start)]


def process_log(store: TemplateStore, cache: TripleCache, raw_log: str,
                log_index: Optional[int] = None, extractor: Optional[Extractor] = None) -> list[Triple]:
    """Functional form of :meth:`LogIE.process_log` over an explicit store and cache."""
    return LogIE(store, cache, extractor).process_log(raw_log, log_index)
