"""Annotated-corpus loading, statistics, splitting and discourse-restriction
rates.

The interchange format is JSONL, one instance per line:

    {"id": ..., "domain": ..., "doc_text": ..., "sentence_span": [s, e],
     "trigger_span": [s, e], "is_superlative": bool,
     "frame": {...} | null, "semantic_type": "..."?}

``frame.target`` and ``frame.cs`` are frame-notation strings (see
docs/frame_grammar.ebnf); ``semantic_type`` is an optional stored label.
The full schema is documented in docs/corpus_schema.md.
"""

from __future__ import annotations

import json
import random
import re
import string
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, TextIO, Union

from . import frames
from .frames import (
    EventExpression,
    FrameSyntaxError,
    SemanticType,
    SuperlativeFrame,
)

DOMAINS = ("Wikipedia", "Reviews", "Dialogue", "Literature", "Wikinews")

SCHEMA_VERSION = 1

_PUNCT_TABLE = str.maketrans({ch: " " for ch in string.punctuation})


@dataclass(frozen=True)
class AnnotatedInstance:
    """A superlative occurrence in its document, with or without a frame."""

    instance_id: str
    domain: str
    doc_text: str
    sentence_span: tuple[int, int]
    trigger_span: tuple[int, int]
    is_superlative: bool
    frame: Optional[SuperlativeFrame] = None
    semantic_type: Optional[SemanticType] = None

    @property
    def sentence(self) -> str:
        return self.doc_text[self.sentence_span[0]:self.sentence_span[1]]

    @property
    def context(self) -> str:
        return self.doc_text

    @property
    def trigger(self) -> str:
        return self.doc_text[self.trigger_span[0]:self.trigger_span[1]]

    @property
    def is_eventive(self) -> bool:
        return self.frame is not None and isinstance(self.frame.cs, EventExpression)

    @property
    def is_implicit(self) -> bool:
        return self.frame is not None and self.frame.implicit


@dataclass
class LoadReport:
    """Loader findings; ``errors`` keep an instance out of the corpus."""

    errors: list[tuple[int, str]] = field(default_factory=list)
    warnings: list[tuple[int, str]] = field(default_factory=list)

    def ok(self) -> bool:
        return not self.errors

    def to_text(self) -> str:
        lines = [f"line {line}: error: {msg}" for line, msg in self.errors]
        lines += [f"line {line}: warning: {msg}" for line, msg in self.warnings]
        return "\n".join(lines)


@dataclass
class Corpus:
    instances: list[AnnotatedInstance] = field(default_factory=list)
    report: LoadReport = field(default_factory=LoadReport)

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self):
        return iter(self.instances)

    @property
    def superlatives(self) -> list[AnnotatedInstance]:
        return [inst for inst in self.instances if inst.is_superlative]


def instance_to_json(inst: AnnotatedInstance) -> dict:
    data = {
        "id": inst.instance_id,
        "domain": inst.domain,
        "doc_text": inst.doc_text,
        "sentence_span": list(inst.sentence_span),
        "trigger_span": list(inst.trigger_span),
        "is_superlative": inst.is_superlative,
        "frame": frames.frame_to_json(inst.frame) if inst.frame is not None else None,
    }
    if inst.semantic_type is not None:
        data["semantic_type"] = inst.semantic_type.value
    return data


def instance_from_json(data: dict, roles: Optional[Iterable[str]] = None) -> AnnotatedInstance:
    sentence_span = tuple(data["sentence_span"])
    trigger_span = tuple(data["trigger_span"])
    doc_text = data["doc_text"]
    frame = None
    if data.get("frame") is not None:
        trigger = doc_text[trigger_span[0]:trigger_span[1]]
        frame = frames.frame_from_json(data["frame"], roles, trigger=trigger)
    semantic_type = None
    if data.get("semantic_type") is not None:
        semantic_type = SemanticType(data["semantic_type"])
    return AnnotatedInstance(
        instance_id=str(data["id"]),
        domain=data["domain"],
        doc_text=doc_text,
        sentence_span=sentence_span,  # type: ignore[arg-type]
        trigger_span=trigger_span,  # type: ignore[arg-type]
        is_superlative=bool(data["is_superlative"]),
        frame=frame,
        semantic_type=semantic_type,
    )


def _check_instance(inst: AnnotatedInstance, line_no: int, report: LoadReport, strict: bool) -> bool:
    """Schema-level checks; returns False when the line must be dropped."""
    ok = True
    if inst.domain not in DOMAINS:
        report.errors.append((line_no, f"unknown domain: {inst.domain}"))
        ok = False
    s0, s1 = inst.sentence_span
    t0, t1 = inst.trigger_span
    if not (0 <= s0 <= s1 <= len(inst.doc_text)):
        report.errors.append((line_no, "sentence_span out of document bounds"))
        ok = False
    elif not (s0 <= t0 <= t1 <= s1):
        report.errors.append((line_no, "trigger_span outside sentence_span"))
        ok = False
    if inst.is_superlative and inst.frame is None:
        report.errors.append((line_no, "is_superlative=true requires a frame"))
        ok = False
    if not inst.is_superlative and inst.frame is not None:
        report.errors.append((line_no, "is_superlative=false forbids a frame"))
        ok = False
    if inst.frame is not None:
        for violation in frames.validate_frame(inst.frame, strict=strict):
            target = report.errors if violation.severity == "error" else report.warnings
            target.append((line_no, str(violation)))
            if violation.severity == "error":
                ok = False
    return ok


def load_corpus(
    source: Union[str, TextIO],
    roles: Optional[Iterable[str]] = None,
    strict: bool = False,
) -> Corpus:
    """Load corpus JSONL; malformed lines are collected, not fatal.

    Every frame is validated; validation errors (and, in strict mode,
    inventory/anchor problems) exclude the instance and land in
    ``report.errors`` with their line number.
    """
    corpus = Corpus()
    if isinstance(source, str):
        fh: TextIO = open(source, encoding="utf-8")
        close = True
    else:
        fh, close = source, False
    try:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as err:
                corpus.report.errors.append((line_no, f"malformed JSON: {err.msg}"))
                continue
            try:
                inst = instance_from_json(data, roles)
            except (KeyError, TypeError, ValueError) as err:
                if isinstance(err, FrameSyntaxError):
                    corpus.report.errors.append((line_no, f"frame notation: {err}"))
                else:
                    corpus.report.errors.append((line_no, f"schema violation: {err}"))
                continue
            if _check_instance(inst, line_no, corpus.report, strict):
                corpus.instances.append(inst)
    finally:
        if close:
            fh.close()
    return corpus


def export_corpus(instances: Iterable[AnnotatedInstance], path: str) -> None:
    """Write instances as corpus JSONL (stable field order)."""
    with open(path, "w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write(json.dumps(instance_to_json(inst), ensure_ascii=False) + "\n")


@dataclass(frozen=True)
class DomainCounts:
    superlatives: int = 0
    non_superlatives: int = 0
    eventive: int = 0
    implicit: int = 0

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.superlatives, self.non_superlatives, self.eventive, self.implicit)


@dataclass
class CorpusStats:
    """Exact per-domain and total counts plus slot distributions."""

    per_domain: dict[str, DomainCounts]
    totals: DomainCounts
    type_counts: dict[str, Counter]
    role_counts: Counter
    property_counts: Counter
    predicate_counts: Counter

    def to_json(self) -> dict:
        return {
            "per_domain": {d: list(c.as_tuple()) for d, c in self.per_domain.items()},
            "totals": list(self.totals.as_tuple()),
            "type_counts": {
                d: {t.value: c[t] for t in SemanticType if c[t]} for d, c in self.type_counts.items()
            },
            "role_counts": dict(sorted(self.role_counts.items(), key=lambda kv: (-kv[1], kv[0]))),
            "property_counts": dict(
                sorted(self.property_counts.items(), key=lambda kv: (-kv[1], kv[0]))
            ),
            "predicate_counts": dict(
                sorted(self.predicate_counts.items(), key=lambda kv: (-kv[1], kv[0]))
            ),
        }


def compute_stats(instances: Sequence[AnnotatedInstance]) -> CorpusStats:
    """Tabulate counts: superlatives, non-superlatives, eventive and
    implicit per domain, plus type/role/property/predicate distributions."""
    counters: dict[str, dict[str, int]] = {
        d: {"sup": 0, "nonsup": 0, "event": 0, "implicit": 0} for d in DOMAINS
    }
    type_counts: dict[str, Counter] = {d: Counter() for d in DOMAINS}
    role_counts: Counter = Counter()
    property_counts: Counter = Counter()
    predicate_counts: Counter = Counter()
    for inst in instances:
        bucket = counters.setdefault(
            inst.domain, {"sup": 0, "nonsup": 0, "event": 0, "implicit": 0}
        )
        if not inst.is_superlative:
            bucket["nonsup"] += 1
            continue
        bucket["sup"] += 1
        frame = inst.frame
        if inst.is_eventive:
            bucket["event"] += 1
            predicate_counts[frame.cs.predicate] += 1
        if frame.implicit:
            bucket["implicit"] += 1
        type_counts.setdefault(inst.domain, Counter())[frames.classify_semantic_type(frame)] += 1
        property_counts[frame.property.lower()] += 1
        for expr in (frame.target, frame.cs):
            pairs = expr.args if isinstance(expr, EventExpression) else expr.restrictions
            for role, _value in pairs:
                role_counts[role] += 1
    per_domain = {
        d: DomainCounts(c["sup"], c["nonsup"], c["event"], c["implicit"])
        for d, c in counters.items()
    }
    totals = DomainCounts(
        sum(c.superlatives for c in per_domain.values()),
        sum(c.non_superlatives for c in per_domain.values()),
        sum(c.eventive for c in per_domain.values()),
        sum(c.implicit for c in per_domain.values()),
    )
    return CorpusStats(per_domain, totals, type_counts, role_counts, property_counts, predicate_counts)


def split_corpus(
    instances: Sequence[AnnotatedInstance],
    seed: int = 13,
    fractions: tuple[float, float, float] = (0.8, 0.1, 0.1),
    superlatives_only: bool = False,
) -> dict[str, list[AnnotatedInstance]]:
    """Deterministic stratified train/dev/test split.

    Within each domain, floor(n * dev_fraction) instances go to dev and
    floor(n * test_fraction) to test; the remainder is train. The split is
    an exact partition and depends only on the seed and the instance ids.
    """
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions must sum to 1, got {fractions}")
    pool = [inst for inst in instances if inst.is_superlative] if superlatives_only else list(instances)
    by_domain: dict[str, list[AnnotatedInstance]] = {}
    for inst in pool:
        by_domain.setdefault(inst.domain, []).append(inst)
    splits: dict[str, list[AnnotatedInstance]] = {"train": [], "dev": [], "test": []}
    rng = random.Random(seed)
    for domain in sorted(by_domain):
        members = sorted(by_domain[domain], key=lambda i: i.instance_id)
        rng.shuffle(members)
        n = len(members)
        n_dev = int(n * fractions[1])
        n_test = int(n * fractions[2])
        splits["dev"].extend(members[:n_dev])
        splits["test"].extend(members[n_dev:n_dev + n_test])
        splits["train"].extend(members[n_dev + n_test:])
    return splits


def normalize_for_match(text: str) -> str:
    """Case-fold, strip punctuation, collapse whitespace (matching rule)."""
    return " ".join(text.casefold().translate(_PUNCT_TABLE).split())


def _context_only(value: str, sentence: str, context: str) -> bool:
    needle = normalize_for_match(value)
    if not needle:
        return False
    return needle in normalize_for_match(context) and needle not in normalize_for_match(sentence)


def implicit_arg_rate(instances: Sequence[AnnotatedInstance]) -> Optional[float]:
    """Fraction of eventive instances with >= 1 argument found in the
    context but not in the superlative's own sentence.

    The match is normalized-substring containment, a documented lower
    bound. Returns None when the corpus has no eventive instances.
    """
    eventive = [inst for inst in instances if inst.is_eventive]
    if not eventive:
        return None
    hits = 0
    for inst in eventive:
        if any(
            _context_only(value, inst.sentence, inst.context)
            for _role, value in inst.frame.cs.args
        ):
            hits += 1
    return hits / len(eventive)


_RELATION_SPLIT_RE = re.compile(r"\t")


def load_relations(path: str) -> list[tuple[str, str, str]]:
    """Read a TSV relation file with rows (np_a, preposition, np_b)."""
    rows: list[tuple[str, str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = _RELATION_SPLIT_RE.split(line)
            if len(parts) != 3:
                raise ValueError(f"line {line_no}: expected 3 tab-separated fields, got {len(parts)}")
            rows.append((parts[0], parts[1], parts[2]))
    return rows


def np_relation_overlap(
    instances: Sequence[AnnotatedInstance],
    relations: Sequence[tuple[str, str, str]],
) -> float:
    """Fraction of implicit instances whose CS restriction text matches the
    object NP of a relation anchored at the superlative NP.

    A relation anchors when the trigger occurs in np_a (normalized
    substring); a restriction matches np_b under containment in either
    direction. Returns 0.0 when there are no implicit instances.
    """
    implicit = [inst for inst in instances if inst.is_implicit]
    if not implicit:
        return 0.0
    hits = 0
    for inst in implicit:
        trigger = normalize_for_match(inst.trigger)
        cs = inst.frame.cs
        pairs = cs.args if isinstance(cs, EventExpression) else cs.restrictions
        values = [normalize_for_match(v) for _r, v in pairs if normalize_for_match(v)]
        matched = False
        for np_a, _prep, np_b in relations:
            if trigger and trigger not in normalize_for_match(np_a):
                continue
            obj = normalize_for_match(np_b)
            if any(v in obj or obj in v for v in values):
                matched = True
                break
        if matched:
            hits += 1
    return hits / len(implicit)
