"""Scoring: exact match, token IOU, unigram-overlap F1, role-argument
IOU accuracy, Cohen's kappa, annotator-agreement and prediction reports.

Normalization is fixed so scores are reproducible bit-exactly: strings are
case-folded, whitespace is collapsed and leading/trailing ASCII punctuation
is stripped; metric tokens are whitespace-split with per-token punctuation
stripping. Frame-notation slots (target, CS) compare parsed structures
with order-insensitive arguments.
"""

from __future__ import annotations

import string
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import frames
from .corpus import AnnotatedInstance
from .frames import EventExpression, FrameSyntaxError, SetExpr

_PUNCT = string.punctuation

SLOTS = ("target", "cs", "anchor", "property", "orientation", "implicit", "full")

# Row labels of the agreement report, byte-for-byte.
IAA_ROWS = (
    "event vs. none",
    "exact target",
    "exact CS",
    "exact anchor",
    "exact property",
    "exact orientation",
    "exact implicit",
    "event predicate",
    "CS (no event)",
    "role arg. iou>=0.5",
)


def normalize_text(text: Optional[str]) -> str:
    """Case-fold, collapse whitespace, strip punctuation at both ends."""
    if text is None:
        return ""
    collapsed = " ".join(text.casefold().split())
    return collapsed.strip(_PUNCT + " ")


def tokens(text: Optional[str]) -> list[str]:
    """Metric tokens: whitespace split, per-token punctuation stripped."""
    if text is None:
        return []
    out = []
    for raw in text.casefold().split():
        tok = raw.strip(_PUNCT)
        if tok:
            out.append(tok)
    return out


def _normalized_pairs(pairs: Iterable[tuple[str, str]]) -> Counter:
    return Counter((role, normalize_text(value)) for role, value in pairs)


def set_expr_match(a: SetExpr, b: SetExpr) -> bool:
    """Structural equality with normalized values and unordered arguments."""
    if isinstance(a, EventExpression) and isinstance(b, EventExpression):
        return a.predicate == b.predicate and _normalized_pairs(a.args) == _normalized_pairs(b.args)
    if isinstance(a, frames.NominalExpression) and isinstance(b, frames.NominalExpression):
        return normalize_text(a.head) == normalize_text(b.head) and _normalized_pairs(
            a.restrictions
        ) == _normalized_pairs(b.restrictions)
    return False


def exact_match(gold: str, pred: str, policy: str = "text") -> int:
    """1 iff the strings match under the policy, else 0.

    ``text`` compares normalized strings. ``frame`` parses both sides as
    frame notation and compares structures order-insensitively, falling
    back to the text policy when either side does not parse.
    """
    if policy == "frame":
        try:
            return int(set_expr_match(frames.parse_frame_notation(gold), frames.parse_frame_notation(pred)))
        except FrameSyntaxError:
            pass
    elif policy != "text":
        raise ValueError(f"unknown normalization policy: {policy}")
    return int(normalize_text(gold) == normalize_text(pred))


def token_iou(gold: str, pred: str) -> float:
    """Intersection over union of unigram token sets; 1.0 if both empty."""
    g, p = set(tokens(gold)), set(tokens(pred))
    if not g and not p:
        return 1.0
    return len(g & p) / len(g | p)


def rouge1(gold: str, pred: str, variant: str = "f1") -> float:
    """Unigram overlap with clipped counts; F1 by default, optional recall.

    Both-empty inputs score 1.0; an empty side against a non-empty one
    scores 0.0.
    """
    g, p = Counter(tokens(gold)), Counter(tokens(pred))
    if not g and not p:
        return 1.0
    overlap = sum(min(count, g[tok]) for tok, count in p.items())
    recall = overlap / sum(g.values()) if g else 0.0
    if variant == "recall":
        return recall
    if variant != "f1":
        raise ValueError(f"unknown rouge variant: {variant}")
    precision = overlap / sum(p.values()) if p else 0.0
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def role_arg_iou_accuracy(
    gold: EventExpression, pred: EventExpression, threshold: float = 0.5
) -> float:
    """Fraction of gold arguments matched by a same-role prediction with
    token IOU >= threshold; duplicate roles pair greedily by highest IOU."""
    if not gold.args:
        return 1.0
    pred_by_role: dict[str, list[str]] = {}
    for role, value in pred.args:
        pred_by_role.setdefault(role, []).append(value)
    gold_by_role: dict[str, list[str]] = {}
    for role, value in gold.args:
        gold_by_role.setdefault(role, []).append(value)
    correct = 0
    for role, gold_values in gold_by_role.items():
        cands = list(pred_by_role.get(role, []))
        remaining = list(gold_values)
        while remaining and cands:
            best = max(
                ((token_iou(g, p), gi, pi) for gi, g in enumerate(remaining) for pi, p in enumerate(cands)),
                key=lambda t: t[0],
            )
            iou, gi, pi = best
            if iou >= threshold:
                correct += 1
            del remaining[gi]
            del cands[pi]
    return correct / len(gold.args)


def cohens_kappa(labels_a: Sequence, labels_b: Sequence) -> float:
    """Cohen's kappa from the two label sequences.

    Expected agreement comes from the marginal label frequencies; a
    degenerate pair of constant, identical labelings scores 1.0 rather
    than dividing by zero.
    """
    if len(labels_a) != len(labels_b):
        raise ValueError(f"label lists differ in length: {len(labels_a)} vs {len(labels_b)}")
    if not labels_a:
        raise ValueError("label lists must be non-empty")
    n = len(labels_a)
    observed = sum(a == b for a, b in zip(labels_a, labels_b)) / n
    freq_a = Counter(labels_a)
    freq_b = Counter(labels_b)
    expected = sum(freq_a[label] * freq_b.get(label, 0) for label in freq_a) / (n * n)
    if expected == 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)


@dataclass(frozen=True)
class PredictionRecord:
    """One model output for one instance and slot."""

    instance_id: str
    slot: str
    prediction: str

    def to_json(self) -> dict:
        return {"instance_id": self.instance_id, "slot": self.slot, "prediction": self.prediction}

    @classmethod
    def from_json(cls, data: dict) -> "PredictionRecord":
        return cls(data["instance_id"], data["slot"], data["prediction"])


@dataclass(frozen=True)
class ScoreRow:
    slot: str
    support: int
    em: float
    iou: float
    rouge1: float


@dataclass
class ScoreReport:
    rows: list[ScoreRow] = field(default_factory=list)

    def row(self, slot: str) -> ScoreRow:
        for row in self.rows:
            if row.slot == slot:
                return row
        raise KeyError(slot)

    def to_json(self) -> dict:
        return {
            "rows": [
                {
                    "slot": r.slot,
                    "support": r.support,
                    "em": r.em,
                    "iou": r.iou,
                    "rouge1": r.rouge1,
                }
                for r in self.rows
            ]
        }

    def to_text(self) -> str:
        lines = [f"{'slot':<16} {'n':>5} {'EM':>7} {'IOU':>7} {'R1':>7}"]
        for r in self.rows:
            lines.append(
                f"{r.slot:<16} {r.support:>5} {r.em:>7.3f} {r.iou:>7.3f} {r.rouge1:>7.3f}"
            )
        return "\n".join(lines)


def slot_gold_text(frame: frames.SuperlativeFrame, slot: str) -> str:
    """The reference string a model is scored against for one slot."""
    if slot == "target":
        return frames.serialize_frame(frame.target)
    if slot == "cs":
        return frames.serialize_frame(frame.cs)
    if slot == "anchor":
        return frame.anchor.label()
    if slot == "property":
        return frame.property
    if slot == "orientation":
        return frame.orientation.value
    if slot == "implicit":
        return "true" if frame.implicit else "false"
    if slot == "full":
        return linearize_frame(frame)
    raise ValueError(f"unknown slot: {slot}")


def linearize_frame(frame: frames.SuperlativeFrame) -> str:
    """Single-string rendering of all slots, for the ``full`` setting."""
    parts = [
        f"TARGET: {frames.serialize_frame(frame.target)}",
        f"CS: {frames.serialize_frame(frame.cs)}",
        f"ANCHOR: {frame.anchor.label()}",
        f"PROPERTY: {frame.property}",
        f"ORIENTATION: {frame.orientation.value}",
        f"RANK: {frame.rank}",
        f"IMPLICIT: {'true' if frame.implicit else 'false'}",
    ]
    if frame.amount:
        parts.append(f"AMOUNT: {frame.amount}")
    return " ".join(parts)


def _slot_policy(slot: str) -> str:
    return "frame" if slot in ("target", "cs") else "text"


def score_predictions(
    gold: Sequence[AnnotatedInstance], predictions: Sequence[PredictionRecord]
) -> ScoreReport:
    """Score a predictions file against gold frames, per slot.

    Rows appear for every slot present in the predictions; within a slot,
    gold instances without a prediction score 0 and stay in the support
    (missing outputs are not skipped). The eventive-only subset is
    reported for target and CS. Unknown ids, unknown slots and duplicate
    (instance, slot) records raise ValueError.
    """
    gold_by_id = {inst.instance_id: inst for inst in gold if inst.frame is not None}
    by_slot: dict[str, dict[str, str]] = {}
    for pred in predictions:
        if pred.slot not in SLOTS:
            raise ValueError(f"unknown slot: {pred.slot}")
        if pred.instance_id not in gold_by_id:
            raise ValueError(f"unknown instance id: {pred.instance_id}")
        slot_map = by_slot.setdefault(pred.slot, {})
        if pred.instance_id in slot_map:
            raise ValueError(f"duplicate prediction for ({pred.instance_id}, {pred.slot})")
        slot_map[pred.instance_id] = pred.prediction

    ordered_ids = sorted(gold_by_id)
    report = ScoreReport()
    for slot in SLOTS:
        if slot not in by_slot:
            continue
        slot_map = by_slot[slot]
        policy = _slot_policy(slot)

        def averages(ids: list[str]) -> tuple[int, float, float, float]:
            ems, ious, rouges = [], [], []
            for instance_id in ids:
                gold_text = slot_gold_text(gold_by_id[instance_id].frame, slot)
                pred_text = slot_map.get(instance_id, "")
                ems.append(exact_match(gold_text, pred_text, policy))
                ious.append(token_iou(gold_text, pred_text))
                rouges.append(rouge1(gold_text, pred_text))
            n = len(ids)
            if n == 0:
                return 0, 0.0, 0.0, 0.0
            return n, sum(ems) / n, sum(ious) / n, sum(rouges) / n

        report.rows.append(ScoreRow(slot, *averages(ordered_ids)))
        if slot in ("target", "cs"):
            eventive_ids = [
                i for i in ordered_ids if isinstance(gold_by_id[i].frame.cs, EventExpression)
            ]
            report.rows.append(ScoreRow(f"{slot} (event)", *averages(eventive_ids)))
    return report


@dataclass(frozen=True)
class IaaRow:
    name: str
    support: int
    accuracy: Optional[float]
    kappa: Optional[float] = None


@dataclass
class IaaReport:
    rows: list[IaaRow] = field(default_factory=list)

    def row(self, name: str) -> IaaRow:
        for row in self.rows:
            if row.name == name:
                return row
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "rows": [
                {
                    "name": r.name,
                    "support": r.support,
                    "accuracy": r.accuracy,
                    "kappa": r.kappa,
                }
                for r in self.rows
            ]
        }

    def to_text(self) -> str:
        lines = [f"{'category':<22} {'n':>4} {'acc':>6}  {'kappa':>6}"]
        for r in self.rows:
            acc = f"{r.accuracy:.2f}" if r.accuracy is not None else "-"
            kappa = f"({r.kappa:.2f})" if r.kappa is not None else ""
            lines.append(f"{r.name:<22} {r.support:>4} {acc:>6}  {kappa:>6}")
        return "\n".join(lines)


def _accuracy(flags: list[bool]) -> Optional[float]:
    return sum(flags) / len(flags) if flags else None


def iaa_report(
    annotations_a: Sequence[AnnotatedInstance],
    annotations_b: Sequence[AnnotatedInstance],
) -> IaaReport:
    """Agreement table between two annotators over the same instance ids.

    Frame rows are computed over instances both annotators marked as
    superlative; the predicate, nominal-CS and role-argument rows restrict
    further to pairs where both (or neither) chose an event. The
    role-argument row averages both scoring directions.
    """
    a_by_id = {inst.instance_id: inst for inst in annotations_a}
    b_by_id = {inst.instance_id: inst for inst in annotations_b}
    if set(a_by_id) != set(b_by_id):
        raise ValueError("annotation sets cover different instance ids")
    pairs = [
        (a_by_id[i].frame, b_by_id[i].frame)
        for i in sorted(a_by_id)
        if a_by_id[i].frame is not None and b_by_id[i].frame is not None
    ]

    report = IaaReport()
    event_labels_a = [isinstance(fa.cs, EventExpression) for fa, _ in pairs]
    event_labels_b = [isinstance(fb.cs, EventExpression) for _, fb in pairs]
    matches = [la == lb for la, lb in zip(event_labels_a, event_labels_b)]
    report.rows.append(
        IaaRow(
            "event vs. none",
            len(pairs),
            _accuracy(matches),
            cohens_kappa(event_labels_a, event_labels_b) if pairs else None,
        )
    )
    report.rows.append(
        IaaRow(
            "exact target",
            len(pairs),
            _accuracy([set_expr_match(fa.target, fb.target) for fa, fb in pairs]),
        )
    )
    report.rows.append(
        IaaRow(
            "exact CS",
            len(pairs),
            _accuracy([set_expr_match(fa.cs, fb.cs) for fa, fb in pairs]),
        )
    )
    report.rows.append(
        IaaRow(
            "exact anchor",
            len(pairs),
            _accuracy([fa.anchor == fb.anchor for fa, fb in pairs]),
        )
    )
    report.rows.append(
        IaaRow(
            "exact property",
            len(pairs),
            _accuracy(
                [normalize_text(fa.property) == normalize_text(fb.property) for fa, fb in pairs]
            ),
        )
    )
    orient_a = [fa.orientation for fa, _ in pairs]
    orient_b = [fb.orientation for _, fb in pairs]
    report.rows.append(
        IaaRow(
            "exact orientation",
            len(pairs),
            _accuracy([a == b for a, b in zip(orient_a, orient_b)]),
            cohens_kappa(orient_a, orient_b) if pairs else None,
        )
    )
    implicit_a = [fa.implicit for fa, _ in pairs]
    implicit_b = [fb.implicit for _, fb in pairs]
    report.rows.append(
        IaaRow(
            "exact implicit",
            len(pairs),
            _accuracy([a == b for a, b in zip(implicit_a, implicit_b)]),
            cohens_kappa(implicit_a, implicit_b) if pairs else None,
        )
    )
    both_event = [
        (fa, fb)
        for fa, fb in pairs
        if isinstance(fa.cs, EventExpression) and isinstance(fb.cs, EventExpression)
    ]
    report.rows.append(
        IaaRow(
            "event predicate",
            len(both_event),
            _accuracy([fa.cs.predicate == fb.cs.predicate for fa, fb in both_event]),
        )
    )
    both_nominal = [
        (fa, fb)
        for fa, fb in pairs
        if not isinstance(fa.cs, EventExpression) and not isinstance(fb.cs, EventExpression)
    ]
    report.rows.append(
        IaaRow(
            "CS (no event)",
            len(both_nominal),
            _accuracy([set_expr_match(fa.cs, fb.cs) for fa, fb in both_nominal]),
        )
    )
    role_scores = [
        (role_arg_iou_accuracy(fa.cs, fb.cs) + role_arg_iou_accuracy(fb.cs, fa.cs)) / 2
        for fa, fb in both_event
    ]
    report.rows.append(
        IaaRow(
            "role arg. iou>=0.5",
            len(both_event),
            sum(role_scores) / len(role_scores) if role_scores else None,
        )
    )
    return report


def disagreement_fields(a: AnnotatedInstance, b: AnnotatedInstance) -> list[str]:
    """Names of the annotation aspects two annotators disagree on;
    empty when the annotations agree. Feeds consolidation review lists."""
    if a.is_superlative != b.is_superlative:
        return ["superlative vs. none"]
    if a.frame is None or b.frame is None:
        return []
    fa, fb = a.frame, b.frame
    out = []
    if isinstance(fa.cs, EventExpression) != isinstance(fb.cs, EventExpression):
        out.append("event vs. none")
    elif (
        isinstance(fa.cs, EventExpression)
        and isinstance(fb.cs, EventExpression)
        and fa.cs.predicate != fb.cs.predicate
    ):
        out.append("event predicate")
    if not set_expr_match(fa.target, fb.target):
        out.append("target")
    if not set_expr_match(fa.cs, fb.cs):
        out.append("cs")
    if fa.anchor != fb.anchor:
        out.append("anchor")
    if normalize_text(fa.property) != normalize_text(fb.property):
        out.append("property")
    if fa.orientation != fb.orientation:
        out.append("orientation")
    if fa.implicit != fb.implicit:
        out.append("implicit")
    if fa.rank != fb.rank:
        out.append("rank")
    return out


def disagreement_list(
    annotations_a: Sequence[AnnotatedInstance],
    annotations_b: Sequence[AnnotatedInstance],
) -> list[dict]:
    """Per-instance disagreements between two annotators, for human
    consolidation; instances in full agreement are omitted."""
    a_by_id = {inst.instance_id: inst for inst in annotations_a}
    b_by_id = {inst.instance_id: inst for inst in annotations_b}
    if set(a_by_id) != set(b_by_id):
        raise ValueError("annotation sets cover different instance ids")
    out = []
    for instance_id in sorted(a_by_id):
        fields = disagreement_fields(a_by_id[instance_id], b_by_id[instance_id])
        if fields:
            out.append({"instance_id": instance_id, "fields": fields})
    return out
