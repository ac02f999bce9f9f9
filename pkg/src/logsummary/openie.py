"""Lexicon-driven open information extraction over free-text log fragments.

This is the default semantic extractor.  Anything with the same call
signature (token sequence in, list of Triple out) can replace it.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Optional, Sequence

from .triples import OPENIE, Triple

LINKING_VERBS = frozenset(["is", "are", "was", "were", "be", "been", "being"])

# bare form counts as a verb
VERB_STEMS = frozenset("""
    abort accept add allocate allow authenticate become begin bind cancel
    change close come complete connect correct crash create decrease delete
    deny detect disable disconnect discover drop enable establish exceed
    expire fail find finish flap forward generate get go have hang increase
    initialize install kill launch lose migrate mount open overflow receive
    reboot recover reduce refuse register reject remove replicate respond
    resume retry run schedule send serve shut skip stop succeed take
    terminate transition transmit trigger unmount unregister update upgrade
    verify wait write
""".split())

# ambiguous with common log nouns: only inflected forms count as verbs
INFLECTED_ONLY = frozenset("""
    block cause clear end exit load log process read report request reset
    result return save set start use
""".split())

MODALS = frozenset(["will", "would", "can", "cannot", "could", "may", "might",
                    "must", "shall", "should", "does", "did", "do"])
NEGATIONS = frozenset(["not", "never", "no"])
_PRE_VERB = MODALS | NEGATIONS
# adjunct and contrast markers start a new clause
SUBORDINATORS = frozenset(["because", "but", "while", "whereas", "although",
                           "though", "unless", "then"])

IRREGULAR = {
    "lost": "lose", "went": "go", "gone": "go", "sent": "send", "began": "begin",
    "begun": "begin", "took": "take", "taken": "take", "got": "get", "gotten": "get",
    "ran": "run", "came": "come", "found": "find", "hung": "hang", "bound": "bind",
    "wrote": "write", "written": "write", "became": "become", "has": "have",
    "had": "have", "shutdown": "shut",
}

PREPOSITIONS = frozenset("""
    to from on in at by for with of into onto over under via after before
    during within without through across against about per up out off
""".split())

CONJUNCTIONS = frozenset(["and", "or"])
SOFT_SEPARATORS = frozenset([",", ":"])
HARD_SEPARATORS = frozenset([".", ";", "(", ")", "[", "]", "="])

_PLACEHOLDER = re.compile(r"^VAR\d+$")

_SOFT, _CONJ, _HARD = 1, 2, 3


def _stem_candidates(w: str) -> list[str]:
    cands = []
    if w.endswith("ing") and len(w) > 4:
        s = w[:-3]
        cands += [s, s + "e"]
        if len(s) > 2 and s[-1] == s[-2]:
            cands.append(s[:-1])
    if w.endswith("ed") and len(w) > 3:
        s = w[:-2]
        cands += [s, w[:-1]]
        if s.endswith("i"):
            cands.append(s[:-1] + "y")
        if len(s) > 2 and s[-1] == s[-2]:
            cands.append(s[:-1])
    if w.endswith("s") and len(w) > 2:
        cands.append(w[:-1])
        if w.endswith("es"):
            cands.append(w[:-2])
        if w.endswith("ies"):
            cands.append(w[:-3] + "y")
    return cands


@lru_cache(maxsize=65536)
def is_verb(token: str) -> bool:
    """Linking verb, lexicon stem, irregular form, or an inflection of a stem."""
    if _PLACEHOLDER.match(token):
        return False
    w = token.lower()
    if w in LINKING_VERBS or w in VERB_STEMS or w in IRREGULAR:
        return True
    return any(c in VERB_STEMS or c in INFLECTED_ONLY for c in _stem_candidates(w))


def _is_preposition(token: str) -> bool:
    return token.lower() in PREPOSITIONS


def find_predicate_head(clause: Sequence[str]) -> Optional[int]:
    """First linking verb, else first other verb, else None."""
    for i, tok in enumerate(clause):
        if tok.lower() in LINKING_VERBS:
            return i
    for i, tok in enumerate(clause):
        if is_verb(tok):
            return i
    return None


def _predicate_end(clause: Sequence[str], head: int) -> int:
    n = len(clause)
    end = head + 1
    while end < n - 1 and clause[end].lower() in NEGATIONS:
        end += 1
    # light verb + bare noun + preposition, e.g. "changed state to"
    if (end + 2 < n and not _is_preposition(clause[end])
            and not _PLACEHOLDER.match(clause[end]) and not is_verb(clause[end])
            and _is_preposition(clause[end + 1])):
        end += 2
    while end < n - 1 and _is_preposition(clause[end]):
        end += 1
    return end


def _subject(span: Sequence[str]) -> list[str]:
    # a verb inside the pre-predicate span starts a reduced clause
    # ("bandwidth lost totally"): keep only what precedes it
    for i in range(1, len(span)):
        if is_verb(span[i]):
            return list(span[:i])
    return list(span)


def _segments(tokens: Sequence[str]) -> list[tuple[list[str], int]]:
    """Split into (segment, strength of the separator before it)."""
    segs: list[tuple[list[str], int]] = []
    cur: list[str] = []
    pending = _HARD
    for tok in tokens:
        low = tok.lower()
        if tok in SOFT_SEPARATORS:
            strength = _SOFT
        elif low in CONJUNCTIONS or low in SUBORDINATORS:
            strength = _CONJ
        elif tok in HARD_SEPARATORS:
            strength = _HARD
        else:
            cur.append(tok)
            continue
        if cur:
            segs.append((cur, pending))
            cur = []
            pending = strength
        else:
            pending = max(pending, strength)
    if cur:
        segs.append((cur, pending))
    return segs


def _join(tokens) -> Optional[str]:
    return " ".join(tokens) if tokens else None


class HeuristicOpenIE:
    """Clause splitting plus verb-lexicon predicate detection.

    Commas and colons separate clauses; a verbless clause before a comma
    either supplies the subject of a following subjectless clause or, when
    the next clause is verbless too, forms an apposition ``(A, is, B)``.
    Clauses joined by ``and``/``or`` (or opened by a subordinator such as
    ``because``) without their own subject reuse the previous subject.
    """

    def __call__(self, tokens: Sequence[str], template_id: Optional[int] = None) -> list[Triple]:
        out: list[Triple] = []

        def emit(a1, rel, a2):
            a1, a2 = _join(a1), _join(a2)
            if a1 is None and a2 is None:
                return
            out.append(Triple(relation=" ".join(rel), arg1=a1, arg2=a2,
                              source=OPENIE, origin_template=template_id))

        prev_verbless: Optional[list[str]] = None
        prev_subject: Optional[list[str]] = None
        for seg, joiner in _segments(tokens):
            head = find_predicate_head(seg)
            if head is None:
                if prev_verbless is not None and joiner == _SOFT:
                    emit(prev_verbless, ["is"], seg)
                    prev_verbless = None
                else:
                    prev_verbless = seg
                prev_subject = None
                continue

            end = _predicate_end(seg, head)
            start = head
            while start > 0 and seg[start - 1].lower() in _PRE_VERB:
                start -= 1
            arg1 = _subject(seg[:start])
            arg2 = seg[end:]
            if not arg1:
                if joiner == _SOFT and prev_verbless is not None:
                    arg1 = prev_verbless
                elif joiner == _CONJ and prev_subject:
                    arg1 = prev_subject
            emit(arg1, seg[start:end], arg2)
            prev_verbless = None
            prev_subject = arg1 or None
        return out


default_extractor = HeuristicOpenIE()


def extract_openie_triples(free_text_tokens: Sequence[str], template_id: Optional[int] = None,
                           extractor=None) -> list[Triple]:
    return (extractor or default_extractor)(free_text_tokens, template_id)
