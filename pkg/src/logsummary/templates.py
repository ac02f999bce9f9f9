"""Tokenization, template matching and online template learning.

Templates are stored in a token trie whose edges are keyed by token text,
plus one distinguished wildcard edge per node, so a lookup costs a walk of
the token sequence rather than a scan over every template.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .errors import EmptyLog, ParseError

WILDCARD = "*"
DELIMITERS = frozenset(["(", ")", "[", "]", "=", ":", ",", ";"])
OPENERS = {"(": ")", "[": "]"}
CLOSERS = frozenset(OPENERS.values())
PAIR_SEPARATORS = frozenset(["=", ":"])

_ALWAYS_SPLIT = re.compile(r"([()\[\]=,;])")
_FLAG = re.compile(r"^--?[A-Za-z][\w.\-]*$")


def tokenize(raw_log: str) -> list[str]:
    """Split a raw log line into tokens.

    ``( ) [ ] = , ;`` always stand alone.  A colon or period at the end of a
    whitespace chunk is detached, which separates ``key: value`` and a
    sentence-final period while leaving ``10.0.0.1:8080`` and ``12:00:01``
    intact.  A run of periods such as ``...`` is kept whole.

    Raises EmptyLog when nothing remains.
    """
    tokens = []
    for chunk in _ALWAYS_SPLIT.sub(r" \1 ", raw_log).split():
        last = chunk[-1]
        if len(chunk) > 1 and (last == ":" or last == "."):
            tail = []
            while len(chunk) > 1:
                if chunk[-1] == ":":
                    tail.append(":")
                elif chunk[-1] == "." and chunk[-2] != ".":
                    tail.append(".")
                else:
                    break
                chunk = chunk[:-1]
            tokens.append(chunk)
            tokens.extend(reversed(tail))
        else:
            tokens.append(chunk)
    if not tokens:
        raise EmptyLog(f"log produced no tokens: {raw_log!r}")
    return tokens


def is_flag(token: str) -> bool:
    """True for CLI-style option tokens such as ``-v`` or ``--retries``."""
    return _FLAG.match(token) is not None


@dataclass(frozen=True)
class Template:
    id: int
    tokens: tuple[str, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("template needs at least one token")

    @property
    def wildcard_mask(self) -> tuple[bool, ...]:
        return tuple(t == WILDCARD for t in self.tokens)

    @property
    def wildcard_count(self) -> int:
        return sum(self.wildcard_mask)

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class MatchResult:
    template_id: int
    # (ordinal, raw token) with ordinals starting at 1
    variable_values: tuple[tuple[int, str], ...] = ()

    def values(self) -> tuple[str, ...]:
        return tuple(v for _, v in self.variable_values)


@dataclass(frozen=True)
class TemplateSplit:
    template_id: int
    free_text_parts: tuple[tuple[int, int], ...]
    structured_parts: tuple[tuple[int, int], ...]

    def parts(self) -> list[tuple[str, int, int]]:
        """All ranges in token order, tagged ``"free"`` or ``"structured"``."""
        tagged = [("free", a, b) for a, b in self.free_text_parts]
        tagged += [("structured", a, b) for a, b in self.structured_parts]
        return sorted(tagged, key=lambda p: p[1])


class _Node:
    __slots__ = ("children", "wild", "ids")

    def __init__(self):
        self.children: dict[str, _Node] = {}
        self.wild: Optional[_Node] = None
        self.ids: list[int] = []


@dataclass
class TemplateStore:
    """Known templates plus the trie used to match logs against them.

    Matching is read-only and may run concurrently; ``learn`` mutates and
    must be serialized by the caller.
    """

    merge_threshold: float = 0.6
    templates: dict[int, Template] = field(default_factory=dict)
    next_id: int = 0

    def __post_init__(self):
        if not 0.0 < self.merge_threshold <= 1.0:
            raise ValueError("merge_threshold must lie in (0, 1]")
        self._root = _Node()
        self._by_length: dict[int, list[int]] = {}
        existing = sorted(self.templates.values(), key=lambda t: t.id)
        self.templates = {}
        for t in existing:
            self._insert(t)
            self.next_id = max(self.next_id, t.id + 1)

    def __len__(self):
        return len(self.templates)

    def __iter__(self) -> Iterator[Template]:
        return iter(sorted(self.templates.values(), key=lambda t: t.id))

    def __eq__(self, other):
        if not isinstance(other, TemplateStore):
            return NotImplemented
        return self.templates == other.templates and self.next_id == other.next_id

    def __getitem__(self, template_id: int) -> Template:
        return self.templates[template_id]

    def __getstate__(self):
        return {"merge_threshold": self.merge_threshold,
                "templates": list(self.templates.values()),
                "next_id": self.next_id}

    def __setstate__(self, state):
        self.merge_threshold = state["merge_threshold"]
        self.templates = {t.id: t for t in state["templates"]}
        self.next_id = state["next_id"]
        self.__post_init__()

    # trie maintenance

    def _insert(self, template: Template):
        node = self._root
        for tok in template.tokens:
            if tok == WILDCARD:
                if node.wild is None:
                    node.wild = _Node()
                node = node.wild
            else:
                nxt = node.children.get(tok)
                if nxt is None:
                    nxt = node.children[tok] = _Node()
                node = nxt
        node.ids.append(template.id)
        node.ids.sort()
        self.templates[template.id] = template
        ids = self._by_length.setdefault(len(template.tokens), [])
        if template.id not in ids:
            ids.append(template.id)
            ids.sort()

    def _detach(self, template: Template):
        node = self._root
        for tok in template.tokens:
            node = node.wild if tok == WILDCARD else node.children[tok]
        node.ids.remove(template.id)

    # public API

    def match(self, tokens: Sequence[str]) -> Optional[MatchResult]:
        """Most specific template matching ``tokens``, or None.

        Wildcards absorb exactly one token.  Among several matches the one
        with the fewest wildcards wins, then the lowest id.
        """
        n = len(tokens)
        best: Optional[tuple[int, int]] = None
        stack = [(self._root, 0, 0)]
        while stack:
            node, i, w = stack.pop()
            # follow constant edges greedily, deferring wildcard branches
            while i < n:
                if best is not None and w > best[0]:
                    node = None
                    break
                wild = node.wild
                child = node.children.get(tokens[i])
                if child is None:
                    if wild is None:
                        node = None
                        break
                    node = wild
                    w += 1
                else:
                    if wild is not None:
                        stack.append((wild, i + 1, w + 1))
                    node = child
                i += 1
            if node is not None and node.ids:
                cand = (w, node.ids[0])
                if best is None or cand < best:
                    best = cand
        if best is None:
            return None
        template = self.templates[best[1]]
        values = []
        k = 0
        for pos, tok in enumerate(template.tokens):
            if tok == WILDCARD:
                k += 1
                values.append((k, tokens[pos]))
        return MatchResult(template.id, tuple(values))

    def learn(self, tokens: Sequence[str]) -> Template:
        """Fold ``tokens`` into the store and return the covering template.

        The same-length template with the most agreeing constant positions
        is generalized in place when its agreement ratio reaches
        ``merge_threshold``; otherwise the tokens become a new template.
        """
        tokens = tuple(tokens)
        if not tokens:
            raise EmptyLog("cannot learn an empty token sequence")
        hit = self.match(tokens)
        if hit is not None:
            return self.templates[hit.template_id]

        best_id, best_agree = None, -1
        for tid in self._by_length.get(len(tokens), ()):
            cand = self.templates[tid].tokens
            agree = sum(1 for a, b in zip(cand, tokens) if a == b and a != WILDCARD)
            if agree > best_agree:
                best_id, best_agree = tid, agree

        if best_id is not None and best_agree / len(tokens) >= self.merge_threshold:
            old = self.templates[best_id]
            merged = tuple(a if a == b else WILDCARD for a, b in zip(old.tokens, tokens))
            new = Template(old.id, merged)
            self._detach(old)
            self._insert(new)
            return new

        new = Template(self.next_id, tokens)
        self.next_id += 1
        self._insert(new)
        return new

    def learn_log(self, raw_log: str) -> Template:
        return self.learn(tokenize(raw_log))


def match_log(store: TemplateStore, tokens: Sequence[str]) -> Optional[MatchResult]:
    return store.match(tokens)


def learn_template(store: TemplateStore, tokens: Sequence[str]) -> Template:
    return store.learn(tokens)


# splitting into free text and structured subparts

def _close_of(tokens: Sequence[str], start: int) -> Optional[int]:
    stack = []
    for i in range(start, len(tokens)):
        tok = tokens[i]
        if tok in OPENERS:
            stack.append(OPENERS[tok])
        elif tok in CLOSERS:
            if not stack or stack[-1] != tok:
                return None
            stack.pop()
            if not stack:
                return i
    return None


def _is_word(tok: str) -> bool:
    return tok not in DELIMITERS


def split_template(template: Template) -> TemplateSplit:
    """Partition template positions into free text and structured ranges.

    Structured ranges are, in order of precedence: balanced ``( … )`` or
    ``[ … ]`` spans; runs of ``key = value`` / ``key : value`` triples,
    optionally separated by ``,`` or ``;``; runs of CLI flags, each with at
    most one value token.  A colon pair only qualifies when its value ends
    the template or is followed by a delimiter or another pair, so prose
    such as ``ciod: failed to read`` stays free text.
    """
    toks = template.tokens
    n = len(toks)
    taken = [False] * n
    structured: list[tuple[int, int]] = []

    i = 0
    while i < n:
        if toks[i] in OPENERS:
            end = _close_of(toks, i)
            if end is not None:
                structured.append((i, end + 1))
                for k in range(i, end + 1):
                    taken[k] = True
                i = end + 1
                continue
        i += 1

    def pair_at(p: int) -> bool:
        if not (0 < p < n - 1) or toks[p] not in PAIR_SEPARATORS:
            return False
        if taken[p - 1] or taken[p] or taken[p + 1]:
            return False
        if not (_is_word(toks[p - 1]) and _is_word(toks[p + 1])):
            return False
        if toks[p] == ":":
            after = p + 2
            if after < n and _is_word(toks[after]) and not (
                after + 1 < n and toks[after + 1] in PAIR_SEPARATORS
            ):
                return False
        return True

    i = 1
    while i < n - 1:
        if not pair_at(i):
            i += 1
            continue
        start, end = i - 1, i + 2
        while True:
            nxt = end + 1
            if nxt < n - 1 and pair_at(nxt):
                end = nxt + 2
                continue
            if nxt + 1 < n - 1 and toks[end] in (",", ";") and not taken[end] and pair_at(nxt + 1):
                end = nxt + 3
                continue
            break
        structured.append((start, end))
        for k in range(start, end):
            taken[k] = True
        i = end + 1

    i = 0
    while i < n:
        if taken[i] or not is_flag(toks[i]):
            i += 1
            continue
        start = i
        while i < n and not taken[i] and is_flag(toks[i]):
            i += 1
            if i < n and not taken[i] and _is_word(toks[i]) and not is_flag(toks[i]):
                i += 1
        structured.append((start, i))
        for k in range(start, i):
            taken[k] = True

    free: list[tuple[int, int]] = []
    i = 0
    while i < n:
        if taken[i]:
            i += 1
            continue
        start = i
        while i < n and not taken[i]:
            i += 1
        free.append((start, i))

    return TemplateSplit(template.id, tuple(free), tuple(sorted(structured)))


# persistence

def dump_templates(store: TemplateStore) -> str:
    lines = [json.dumps({"id": t.id, "tokens": list(t.tokens)}, ensure_ascii=False)
             for t in store]
    return "".join(line + "\n" for line in lines)


def save_templates(store: TemplateStore, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_templates(store))


def parse_templates(lines: Iterable[str], merge_threshold: float = 0.6,
                    path=None) -> TemplateStore:
    templates: dict[int, Template] = {}
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", lineno, path) from None
        if not isinstance(rec, dict):
            raise ParseError("record must be an object", lineno, path)
        tid, tokens = rec.get("id"), rec.get("tokens")
        if not isinstance(tid, int) or isinstance(tid, bool) or tid < 0:
            raise ParseError("'id' must be a non-negative integer", lineno, path)
        if (not isinstance(tokens, list) or not tokens
                or not all(isinstance(t, str) and t and not any(c.isspace() for c in t)
                           for t in tokens)):
            raise ParseError("'tokens' must be a non-empty list of whitespace-free strings",
                             lineno, path)
        if tid in templates:
            raise ParseError(f"duplicate template id {tid}", lineno, path)
        templates[tid] = Template(tid, tuple(tokens))
    return TemplateStore(merge_threshold=merge_threshold, templates=templates)


def load_templates(path, merge_threshold: float = 0.6) -> TemplateStore:
    with open(path, encoding="utf-8") as fh:
        return parse_templates(fh, merge_threshold, path=path)
