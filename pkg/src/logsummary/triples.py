"""The relational triple record and its JSON-lines file format."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .errors import ParseError

RE = "RE"
OPENIE = "OpenIE"
ROLES = ("arg1", "relation", "arg2")


@dataclass(frozen=True)
class Triple:
    """``(arg1?, relation, arg2?)`` with provenance.

    Element texts are tokens joined by single spaces.  Template-level
    triples carry ``VAR1``, ``VAR2``, ... where the template has wildcards
    and have no ``origin_log``.
    """

    relation: str
    arg1: Optional[str] = None
    arg2: Optional[str] = None
    source: str = OPENIE
    origin_template: Optional[int] = None
    origin_log: Optional[int] = None

    def __post_init__(self):
        if not self.relation:
            raise ValueError("a triple needs a relation")
        if self.source not in (RE, OPENIE):
            raise ValueError(f"unknown triple source {self.source!r}")

    @property
    def key(self) -> tuple[Optional[str], str, Optional[str]]:
        return (self.arg1, self.relation, self.arg2)

    def elements(self) -> list[tuple[str, str]]:
        return [(role, text) for role, text in zip(ROLES, self.key) if text]

    def words(self) -> str:
        return " ".join(text for _, text in self.elements())

    def render(self) -> str:
        return "( " + " | ".join(text for _, text in self.elements()) + " )"

    def at_log(self, log_index: Optional[int]) -> "Triple":
        return replace(self, origin_log=log_index)

    def to_record(self) -> dict:
        return {
            "origin_log": self.origin_log,
            "template_id": self.origin_template,
            "source": self.source,
            "elements": [{"role": r, "text": t} for r, t in self.elements()],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Triple":
        parts = {}
        for el in rec["elements"]:
            role = el["role"]
            if role not in ROLES or role in parts:
                raise ValueError(f"bad or repeated role {role!r}")
            if not isinstance(el["text"], str):
                raise ValueError("element text must be a string")
            parts[role] = el["text"]
        return cls(relation=parts.get("relation", ""), arg1=parts.get("arg1"),
                   arg2=parts.get("arg2"), source=rec.get("source", OPENIE),
                   origin_template=rec.get("template_id"), origin_log=rec.get("origin_log"))

    @classmethod
    def from_list(cls, items, source: str = OPENIE) -> "Triple":
        """Build from ``[arg1, relation, arg2]`` with ``None`` for absent args."""
        if len(items) != 3:
            raise ValueError("expected [arg1, relation, arg2]")
        a1, rel, a2 = items
        return cls(relation=rel, arg1=a1 or None, arg2=a2 or None, source=source)


def dump_triples(triples: Iterable[Triple]) -> str:
    return "".join(json.dumps(t.to_record(), ensure_ascii=False) + "\n" for t in triples)


def write_triples(triples: Iterable[Triple], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_triples(triples))


def parse_triples(lines: Iterable[str], path=None) -> list[Triple]:
    out = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            out.append(Triple.from_record(json.loads(line)))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", lineno, path) from None
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed triple record: {exc}", lineno, path) from None
    return out


def read_triples(path) -> list[Triple]:
    with open(path, encoding="utf-8") as fh:
        return parse_triples(fh, path=path)
