"""Superlative candidate detection over raw text.

Deterministic lexicon + morphology rules stand in for a statistical POS
tagger: "-est" tokens are checked against a gradable-word lexicon after
suffix stripping, "most"/"least" are flagged as adverbial triggers, and a
small editable list covers lexicalized superlatives ("the main reason").
Known non-superlative patterns ("at least", "at most", partitive
"most of the ...") are marked, never deleted, so that human review can
override the filter.

All offsets are character offsets into the original document; every
candidate's surface text equals the document substring at its offsets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Optional

from .frames import _load_wordlist

IRREGULAR_SUPERLATIVES = frozenset(
    ["best", "worst", "least", "most", "eldest", "furthest", "farthest", "innermost", "outermost", "utmost"]
)

# Determiners triggering the partitive reading of "most of ...";
# "all" is excluded so the idiomatic superlative "most of all" survives.
DETERMINERS = frozenset(
    "the a an this that these those my your his her its our their some any each every".split()
)

_TOKEN_RE = re.compile(r"[A-Za-z]+(?:'[A-Za-z]+)?")
_TERMINAL_RE = re.compile(r"[.?!]+[\"'”’)\]]*")


@lru_cache(maxsize=None)
def gradable_words() -> frozenset[str]:
    return _load_wordlist("gradable_words.txt")


@lru_cache(maxsize=None)
def lexical_superlatives() -> frozenset[str]:
    return _load_wordlist("lexical_superlatives.txt")


@lru_cache(maxsize=None)
def abbreviations() -> frozenset[str]:
    return _load_wordlist("abbreviations.txt")


@lru_cache(maxsize=None)
def idioms() -> frozenset[str]:
    return _load_wordlist("idioms.txt")


@dataclass(frozen=True)
class Sentence:
    """A sentence span; text is the exact document substring."""

    start: int
    end: int
    text: str


@dataclass(frozen=True)
class Candidate:
    """One flagged superlative trigger token."""

    doc_id: str
    sentence_index: int
    start: int
    end: int
    surface: str
    kind: str  # adjectival | adverbial | lexical
    filtered: bool = False
    reason: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "sentence_index": self.sentence_index,
            "start": self.start,
            "end": self.end,
            "surface": self.surface,
            "kind": self.kind,
            "filtered": self.filtered,
            "reason": self.reason,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Candidate":
        return cls(
            doc_id=data["doc_id"],
            sentence_index=int(data["sentence_index"]),
            start=int(data["start"]),
            end=int(data["end"]),
            surface=data["surface"],
            kind=data["kind"],
            filtered=bool(data.get("filtered", False)),
            reason=data.get("reason"),
        )


def segment(text: str) -> list[Sentence]:
    """Split a document into offset-faithful sentence spans.

    Boundaries: terminal punctuation (. ? !) followed by whitespace and an
    upper-case letter, digit or opening quote, unless the preceding token is
    a known abbreviation; newlines always end a sentence. Spans never
    overlap and exclude surrounding whitespace.
    """
    sentences: list[Sentence] = []
    n = len(text)
    start = 0

    def emit(lo: int, hi: int) -> None:
        while lo < hi and text[lo].isspace():
            lo += 1
        while hi > lo and text[hi - 1].isspace():
            hi -= 1
        if hi > lo:
            sentences.append(Sentence(lo, hi, text[lo:hi]))

    i = 0
    while i < n:
        ch = text[i]
        if ch == "\n":
            emit(start, i)
            start = i + 1
            i += 1
            continue
        m = _TERMINAL_RE.match(text, i)
        if m is None:
            i += 1
            continue
        boundary = m.end()
        if boundary >= n:
            emit(start, boundary)
            start = boundary
            break
        follows_space = text[boundary].isspace()
        nxt = boundary
        while nxt < n and text[nxt].isspace() and text[nxt] != "\n":
            nxt += 1
        opens_next = nxt < n and (
            text[nxt].isupper() or text[nxt].isdigit() or text[nxt] in "\"'“‘("
        )
        word_before = _last_word(text, i)
        if (
            "." in m.group(0)
            and word_before is not None
            and word_before.lower() in abbreviations()
        ):
            i = boundary
            continue
        if follows_space and opens_next:
            emit(start, boundary)
            start = boundary
            i = boundary
            continue
        i = boundary
    emit(start, n)
    return sentences


def _last_word(text: str, end: int) -> Optional[str]:
    i = end
    while i > 0 and (text[i - 1].isalpha() or text[i - 1] == "."):
        i -= 1
    word = text[i:end].strip(".")
    return word or None


def _tokens(text: str) -> list[tuple[int, int, str]]:
    return [(m.start(), m.end(), m.group(0)) for m in _TOKEN_RE.finditer(text)]


def _est_stem_in_lexicon(token: str, lexicon: frozenset[str]) -> bool:
    if len(token) < 5 or not token.endswith("est"):
        return False
    stems = {token[:-3], token[:-2]}
    base = token[:-3]
    if len(base) >= 2 and base[-1] == base[-2]:
        stems.add(base[:-1])
    if token.endswith("iest"):
        stems.add(token[:-4] + "y")
    return any(stem in lexicon for stem in stems)


def detect_candidates(
    sentence: str,
    *,
    doc_id: str = "",
    sentence_index: int = 0,
    offset: int = 0,
    lexicon: Optional[frozenset[str]] = None,
    lexical: Optional[frozenset[str]] = None,
) -> list[Candidate]:
    """Flag superlative trigger tokens in one sentence.

    ``offset`` shifts spans to document coordinates when the sentence was
    cut from a larger text. Identical input always yields identical output.
    """
    lexicon = gradable_words() if lexicon is None else lexicon
    lexical = lexical_superlatives() if lexical is None else lexical
    out: list[Candidate] = []
    for start, end, token in _tokens(sentence):
        lower = token.lower()
        kind = None
        if lower in ("most", "least"):
            kind = "adverbial"
        elif lower in IRREGULAR_SUPERLATIVES or _est_stem_in_lexicon(lower, lexicon):
            kind = "adjectival"
        elif lower in lexical:
            kind = "lexical"
        if kind is not None:
            out.append(
                Candidate(
                    doc_id=doc_id,
                    sentence_index=sentence_index,
                    start=offset + start,
                    end=offset + end,
                    surface=token,
                    kind=kind,
                )
            )
    return out


def filter_non_superlative(
    candidates: Iterable[Candidate], sentence: str, *, offset: int = 0
) -> list[Candidate]:
    """Mark known non-superlative patterns; nothing is ever removed.

    Flags: "at least"/"at most" (proportional quantifiers), partitive
    "most of" followed by a determiner, and listed idioms ("at best",
    "at worst"). Review tooling may override the flag.
    """
    toks = _tokens(sentence)
    spans = {(offset + s, offset + e): i for i, (s, e, _t) in enumerate(toks)}
    out: list[Candidate] = []
    for cand in candidates:
        idx = spans.get((cand.start, cand.end))
        if idx is None:
            out.append(cand)
            continue
        lower = cand.surface.lower()
        prev_tok = toks[idx - 1][2].lower() if idx > 0 else None
        nxt_tok = toks[idx + 1][2].lower() if idx + 1 < len(toks) else None
        nxt2_tok = toks[idx + 2][2].lower() if idx + 2 < len(toks) else None
        reason = None
        if prev_tok == "at" and lower in ("least", "most"):
            reason = "proportional-quantifier"
        elif prev_tok is not None and f"{prev_tok} {lower}" in idioms():
            reason = "idiom"
        elif lower == "most" and nxt_tok == "of" and nxt2_tok in DETERMINERS:
            reason = "partitive-quantifier"
        if reason is not None:
            out.append(replace(cand, filtered=True, reason=reason))
        else:
            out.append(cand)
    return out


def detect_document(doc_id: str, text: str) -> list[Candidate]:
    """Segment, detect and filter-mark candidates over a whole document."""
    out: list[Candidate] = []
    for index, sent in enumerate(segment(text)):
        cands = detect_candidates(
            sent.text, doc_id=doc_id, sentence_index=index, offset=sent.start
        )
        out.extend(filter_non_superlative(cands, sent.text, offset=sent.start))
    return out


@dataclass(frozen=True)
class ContextWindow:
    """A contiguous slice of sentences around a candidate."""

    start: int
    end: int
    text: str
    first_sentence: int
    last_sentence: int


def context_window(
    text: str, candidate: Candidate, before: int, after: int
) -> ContextWindow:
    """The candidate's sentence plus up to ``before``/``after`` neighbours.

    The window is the document slice from the first to the last included
    sentence, so offsets stay valid. Raises ValueError when the candidate's
    sentence index does not exist in the document.
    """
    sentences = segment(text)
    idx = candidate.sentence_index
    if not 0 <= idx < len(sentences):
        raise ValueError(
            f"sentence index {idx} out of range for document with {len(sentences)} sentences"
        )
    lo = max(0, idx - before)
    hi = min(len(sentences) - 1, idx + after)
    start = sentences[lo].start
    end = sentences[hi].end
    return ContextWindow(start, end, text[start:end], lo, hi)
