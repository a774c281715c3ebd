"""Ambiguity analyses over externally produced model outputs.

Consumes three JSONL record kinds (schemas in docs/corpus_schema.md):

* beam files        {"instance_id", "hypotheses": [str, ...]}
* log-prob files    {"instance_id", "condition", "completion",
                     "token_logprobs": [float, ...], "gold": bool}
* challenge sets    {"id", "sentence", "contexts": [{"id", "context",
                     "reading", "cs"}, ...]}

Token log probabilities always come from an external scoring backend;
nothing here runs a model.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import frames, metrics
from .frames import FrameSyntaxError, SemanticType

READINGS = ("absolute", "relative")

_ROLE_PATTERN = frames._ROLE_MARKER_RE


@dataclass(frozen=True)
class BeamPrediction:
    """Ranked comparison-set hypotheses for one instance."""

    instance_id: str
    hypotheses: tuple[str, ...]

    def __post_init__(self):
        if not self.hypotheses:
            raise ValueError("beam must contain at least one hypothesis")


@dataclass(frozen=True)
class LogProbRecord:
    """Per-token log probabilities of one completion under one condition."""

    instance_id: str
    condition: str
    completion: str
    token_logprobs: tuple[float, ...]
    gold: bool = False

    def __post_init__(self):
        if not self.token_logprobs:
            raise ValueError("token_logprobs must be non-empty")
        bad = [v for v in self.token_logprobs if v > 0]
        if bad:
            raise ValueError(f"log probabilities cannot be positive: {bad[:3]}")


@dataclass(frozen=True)
class ChallengeVariant:
    variant_id: str
    context: str
    reading: str  # absolute | relative
    gold_cs: str


@dataclass(frozen=True)
class ChallengeItem:
    """An ambiguous sentence with reading-strengthening context variants."""

    item_id: str
    sentence: str
    variants: tuple[ChallengeVariant, ...]

    def __post_init__(self):
        if not self.variants:
            raise ValueError("challenge item needs at least one context variant")


def load_beams(path: str) -> list[BeamPrediction]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                data = json.loads(line)
                out.append(BeamPrediction(str(data["instance_id"]), tuple(data["hypotheses"])))
    return out


def load_logprob_records(path: str) -> list[LogProbRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                data = json.loads(line)
                out.append(
                    LogProbRecord(
                        instance_id=str(data["instance_id"]),
                        condition=data["condition"],
                        completion=data["completion"],
                        token_logprobs=tuple(float(x) for x in data["token_logprobs"]),
                        gold=bool(data.get("gold", False)),
                    )
                )
    return out


def load_challenge_items(path: str) -> list[ChallengeItem]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            data = json.loads(line)
            variants = tuple(
                ChallengeVariant(str(v["id"]), v["context"], v["reading"], v["cs"])
                for v in data["contexts"]
            )
            out.append(ChallengeItem(str(data["id"]), data["sentence"], variants))
    return out


def classify_cs_string(
    cs: str, light_verbs: Optional[Iterable[str]] = None
) -> SemanticType:
    """Total classifier for raw CS strings, parseable or not.

    Unparseable strings fall back on a surface cue: anything with a
    ``ROLE=`` pattern counts as a restricted nominal, anything else as an
    unrestricted (property) comparison.
    """
    try:
        expr = frames.parse_frame_notation(cs)
    except FrameSyntaxError:
        if _ROLE_PATTERN.search(cs or ""):
            return SemanticType.RELATIVE_NOMINAL
        return SemanticType.PROPERTY
    return frames.classify_set_expr(expr, light_verbs)


def type_distribution(
    hypotheses: Sequence[str], light_verbs: Optional[Iterable[str]] = None
) -> Counter:
    return Counter(classify_cs_string(h, light_verbs) for h in hypotheses)


def beam_entropy(
    beam: BeamPrediction | Sequence[str],
    light_verbs: Optional[Iterable[str]] = None,
    base: str = "nats",
) -> float:
    """Shannon entropy of interpretation-type frequencies in the beam.

    Probabilities are hypothesis-type counts over the beam size; the log is
    natural by default ("bits" switches to log2) and 0 log 0 contributes 0.
    """
    hypotheses = beam.hypotheses if isinstance(beam, BeamPrediction) else tuple(beam)
    if not hypotheses:
        raise ValueError("beam must contain at least one hypothesis")
    if base not in ("nats", "bits"):
        raise ValueError(f"unknown entropy base: {base}")
    log = math.log if base == "nats" else math.log2
    counts = type_distribution(hypotheses, light_verbs)
    n = len(hypotheses)
    entropy = 0.0
    for count in counts.values():
        p = count / n
        entropy -= p * log(p)
    return entropy


def avg_conditional_logprob(record: LogProbRecord | Sequence[float]) -> float:
    """Arithmetic mean of the per-token log probabilities."""
    values = record.token_logprobs if isinstance(record, LogProbRecord) else tuple(record)
    if not values:
        raise ValueError("token_logprobs must be non-empty")
    return sum(values) / len(values)


@dataclass(frozen=True)
class PreferenceDecision:
    instance_id: str
    condition: str
    winner: str
    gold: str
    correct: bool
    gap: float
    tie: bool


@dataclass(frozen=True)
class PreferenceRow:
    condition: str
    n: int
    preference_rate: float
    mean_top2_gap: float
    ties: int


@dataclass
class PreferenceReport:
    rows: list[PreferenceRow] = field(default_factory=list)
    decisions: list[PreferenceDecision] = field(default_factory=list)

    def row(self, condition: str) -> PreferenceRow:
        for row in self.rows:
            if row.condition == condition:
                return row
        raise KeyError(condition)

    def to_json(self) -> dict:
        return {
            "rows": [
                {
                    "condition": r.condition,
                    "n": r.n,
                    "preference_rate": r.preference_rate,
                    "mean_top2_gap": r.mean_top2_gap,
                    "ties": r.ties,
                }
                for r in self.rows
            ],
            "decisions": [
                {
                    "instance_id": d.instance_id,
                    "condition": d.condition,
                    "winner": d.winner,
                    "gold": d.gold,
                    "correct": d.correct,
                    "gap": d.gap,
                    "tie": d.tie,
                }
                for d in self.decisions
            ],
        }

    def to_text(self) -> str:
        lines = [f"{'condition':<14} {'n':>4} {'pref':>6} {'gap':>7} {'ties':>5}"]
        for r in self.rows:
            lines.append(
                f"{r.condition:<14} {r.n:>4} {r.preference_rate:>6.3f} {r.mean_top2_gap:>7.3f} {r.ties:>5}"
            )
        return "\n".join(lines)


def preference_report(records: Sequence[LogProbRecord]) -> PreferenceReport:
    """Per condition: how often the gold completion has the highest mean
    log probability, and the mean absolute gap between the top two
    completions.

    Ties (equal means at the top) count as incorrect and are flagged.
    Each (instance, condition) group needs at least two completions with
    exactly one marked gold.
    """
    groups: dict[tuple[str, str], list[LogProbRecord]] = {}
    for record in records:
        groups.setdefault((record.instance_id, record.condition), []).append(record)
    report = PreferenceReport()
    per_condition: dict[str, list[PreferenceDecision]] = {}
    for (instance_id, condition), members in sorted(groups.items()):
        if len(members) < 2:
            raise ValueError(
                f"({instance_id}, {condition}) has {len(members)} completions; need at least 2"
            )
        gold_members = [m for m in members if m.gold]
        if len(gold_members) != 1:
            raise ValueError(
                f"({instance_id}, {condition}) must mark exactly one gold completion"
            )
        scored = sorted(
            ((avg_conditional_logprob(m), m) for m in members),
            key=lambda pair: pair[0],
            reverse=True,
        )
        top_score, top = scored[0]
        runner_score = scored[1][0]
        tie = math.isclose(top_score, runner_score, rel_tol=0.0, abs_tol=1e-12)
        correct = (not tie) and top.gold
        decision = PreferenceDecision(
            instance_id=instance_id,
            condition=condition,
            winner=top.completion,
            gold=gold_members[0].completion,
            correct=correct,
            gap=abs(top_score - runner_score),
            tie=tie,
        )
        report.decisions.append(decision)
        per_condition.setdefault(condition, []).append(decision)
    for condition in sorted(per_condition):
        decisions = per_condition[condition]
        report.rows.append(
            PreferenceRow(
                condition=condition,
                n=len(decisions),
                preference_rate=sum(d.correct for d in decisions) / len(decisions),
                mean_top2_gap=sum(d.gap for d in decisions) / len(decisions),
                ties=sum(d.tie for d in decisions),
            )
        )
    return report


@dataclass(frozen=True)
class ChallengeRow:
    reading: str
    n: int
    top_1: float
    top_5: float
    type_match: float


@dataclass
class ChallengeReport:
    rows: list[ChallengeRow] = field(default_factory=list)

    def row(self, reading: str) -> ChallengeRow:
        for row in self.rows:
            if row.reading == reading:
                return row
        raise KeyError(reading)

    def to_json(self) -> dict:
        return {
            "rows": [
                {
                    "reading": r.reading,
                    "n": r.n,
                    "top_1": r.top_1,
                    "top_5": r.top_5,
                    "type_match": r.type_match,
                }
                for r in self.rows
            ]
        }

    def to_text(self) -> str:
        lines = [f"{'reading':<10} {'n':>4} {'top_1':>7} {'top_5':>7} {'type':>7}"]
        for r in self.rows:
            lines.append(
                f"{r.reading:<10} {r.n:>4} {r.top_1:>7.3f} {r.top_5:>7.3f} {r.type_match:>7.3f}"
            )
        return "\n".join(lines)


def reading_of(semantic_type: SemanticType) -> str:
    """Absolute readings are unrestricted property comparisons; every
    restricted type counts as relative."""
    return "absolute" if semantic_type == SemanticType.PROPERTY else "relative"


def challenge_report(
    items: Sequence[ChallengeItem],
    beams: Sequence[BeamPrediction],
    light_verbs: Optional[Iterable[str]] = None,
) -> ChallengeReport:
    """Accuracy per gold reading over the ambiguity challenge set.

    top_1: the first hypothesis matches the gold CS (structural match);
    top_5: any hypothesis in the beam matches; type_match: the reading
    (absolute/relative) of the first hypothesis equals the gold reading.
    Every (item, context variant) must have exactly one beam.
    """
    beams_by_id = {b.instance_id: b for b in beams}
    if len(beams_by_id) != len(beams):
        raise ValueError("duplicate beam instance ids")
    stats: dict[str, list[tuple[bool, bool, bool]]] = {r: [] for r in READINGS}
    for item in items:
        for variant in item.variants:
            beam = beams_by_id.get(variant.variant_id)
            if beam is None:
                raise ValueError(f"no beam for challenge variant {variant.variant_id}")
            if variant.reading not in READINGS:
                raise ValueError(f"unknown gold reading: {variant.reading}")
            hits = [
                bool(metrics.exact_match(variant.gold_cs, hyp, policy="frame"))
                for hyp in beam.hypotheses
            ]
            top1 = hits[0]
            top5 = any(hits)
            predicted_reading = reading_of(classify_cs_string(beam.hypotheses[0], light_verbs))
            stats[variant.reading].append((top1, top5, predicted_reading == variant.reading))
    report = ChallengeReport()
    for reading in READINGS:
        outcomes = stats[reading]
        if not outcomes:
            continue
        n = len(outcomes)
        report.rows.append(
            ChallengeRow(
                reading=reading,
                n=n,
                top_1=sum(o[0] for o in outcomes) / n,
                top_5=sum(o[1] for o in outcomes) / n,
                type_match=sum(o[2] for o in outcomes) / n,
            )
        )
    return report
