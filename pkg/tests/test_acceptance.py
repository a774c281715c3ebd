"""Acceptance suite: one test per release criterion, at pinned tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line
per criterion.
"""

import io
import json
import math
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

import oracles
from supframes import analysis, detector, metrics, service
from supframes.corpus import compute_stats, implicit_arg_rate, load_corpus, split_corpus
from supframes.frames import (
    EventExpression,
    FrameSyntaxError,
    classify_semantic_type,
    parse_frame_notation,
    serialize_frame,
    validate_frame,
)

ROOT = Path(__file__).resolve().parent.parent
GOLD = ROOT / "data" / "gold" / "corpus.jsonl"
FIXTURES = ROOT / "data" / "fixtures"

TABLE1 = {
    "Wikipedia": (814, 476, 274, 242),
    "Reviews": (1098, 286, 363, 555),
    "Dialogue": (522, 219, 222, 293),
    "Literature": (376, 186, 111, 92),
    "Wikinews": (336, 152, 109, 146),
}


@pytest.fixture(scope="module")
def gold_corpus():
    corpus = load_corpus(str(GOLD), strict=True)
    assert corpus.report.ok(), corpus.report.to_text()[:2000]
    return corpus


def ok(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


def test_corpus_statistics_reproduce_published_table(gold_corpus):
    start = time.monotonic()
    corpus = load_corpus(str(GOLD), strict=True)
    stats = compute_stats(corpus.instances)
    elapsed = time.monotonic() - start
    assert stats.totals.as_tuple() == (3146, 1319, 1079, 1328)
    for domain, expected in TABLE1.items():
        assert stats.per_domain[domain].as_tuple() == expected, domain
    assert elapsed < 10.0, f"stats pipeline took {elapsed:.1f}s"
    ok(f"corpus statistics: totals and all five domain rows exact ({elapsed:.2f}s)")


def test_derived_ratios_match_prose(gold_corpus):
    stats = compute_stats(gold_corpus.instances)
    sup = stats.totals.superlatives
    implicit_pct = round(100 * stats.totals.implicit / sup)
    event_pct = round(100 * stats.totals.eventive / sup)
    assert implicit_pct == 42
    assert event_pct in (34, 35)
    ok(f"derived ratios: implicit {implicit_pct}%, eventive {event_pct}%")


def test_splits_exact_disjoint_deterministic(gold_corpus):
    splits = split_corpus(gold_corpus.instances, seed=13, superlatives_only=True)
    again = split_corpus(gold_corpus.instances, seed=13, superlatives_only=True)
    for part in splits:
        assert [i.instance_id for i in splits[part]] == [i.instance_id for i in again[part]]
    all_ids = [i.instance_id for part in splits.values() for i in part]
    assert len(all_ids) == len(set(all_ids)) == sum(
        1 for i in gold_corpus.instances if i.is_superlative
    )
    wiki = {
        part: sum(1 for i in members if i.domain == "Wikipedia")
        for part, members in splits.items()
    }
    assert wiki == {"train": 652, "dev": 81, "test": 81}
    full = split_corpus(gold_corpus.instances, seed=13)
    total = sum(len(v) for v in full.values())
    assert total == len(gold_corpus.instances)
    ok("splits: exact seed-deterministic partition, Wikipedia superlatives 652/81/81")


def test_frame_grammar_full_corpus(gold_corpus):
    start = time.monotonic()
    checked = 0
    rejected = 0
    for inst in gold_corpus.instances:
        if inst.frame is None:
            continue
        for expr in (inst.frame.target, inst.frame.cs):
            text = serialize_frame(expr)
            parsed = parse_frame_notation(text)
            assert parsed == expr, text
            assert serialize_frame(parsed) == text
            checked += 1
            for idx, ch in enumerate(text):
                if ch in "(),=":
                    mutated = text[:idx] + text[idx + 1:]
                    with pytest.raises(FrameSyntaxError):
                        parse_frame_notation(mutated)
                    rejected += 1
        assert validate_frame(inst.frame, strict=True) == []
    elapsed = time.monotonic() - start
    assert elapsed < 30.0, f"grammar sweep took {elapsed:.1f}s"
    ok(
        f"frame grammar: {checked} strings parsed and round-tripped, "
        f"{rejected} structural mutants rejected ({elapsed:.2f}s)"
    )


def test_metric_oracle_equivalence():
    rows = [json.loads(line) for line in open(FIXTURES / "metric_pairs.jsonl", encoding="utf-8")]
    assert len(rows) == 50
    for row in rows:
        gold, pred = row["gold"], row["pred"]
        assert abs(metrics.exact_match(gold, pred) - oracles.naive_exact_match(gold, pred)) <= 1e-12
        assert abs(metrics.token_iou(gold, pred) - oracles.naive_token_iou(gold, pred)) <= 1e-12
        assert abs(metrics.rouge1(gold, pred) - oracles.naive_rouge1(gold, pred)) <= 1e-12
        gold_event = EventExpression(
            row["event_gold"]["predicate"], tuple((r, v) for r, v in row["event_gold"]["args"])
        )
        pred_event = EventExpression(
            row["event_pred"]["predicate"], tuple((r, v) for r, v in row["event_pred"]["args"])
        )
        expected = oracles.naive_role_arg_accuracy(
            [tuple(a) for a in row["event_gold"]["args"]],
            [tuple(a) for a in row["event_pred"]["args"]],
        )
        assert abs(metrics.role_arg_iou_accuracy(gold_event, pred_event) - expected) <= 1e-12
    labels_a = [row["label_a"] for row in rows]
    labels_b = [row["label_b"] for row in rows]
    assert abs(metrics.cohens_kappa(labels_a, labels_b) - oracles.naive_kappa(labels_a, labels_b)) <= 1e-12
    assert metrics.cohens_kappa(["x", "x", "y"], ["x", "x", "y"]) == 1.0
    assert metrics.cohens_kappa(["x", "y", "x", "y"], ["x", "x", "y", "y"]) == 0.0
    assert metrics.cohens_kappa(["x", "x", "y", "y"], ["y", "y", "x", "x"]) == -1.0
    ok("metric oracle equivalence: EM/IOU/ROUGE-1/role-arg/kappa exact to 1e-12 on 50 pairs")


def test_detector_recall_and_quantifier_filtering():
    rows = [json.loads(line) for line in open(FIXTURES / "detector_sentences.jsonl", encoding="utf-8")]
    assert len(rows) >= 200
    marked = 0
    found = 0
    filter_expected = 0
    filter_hit = 0
    for row in rows:
        cands = detector.detect_candidates(row["text"])
        cands = detector.filter_non_superlative(cands, row["text"])
        spans = {(c.start, c.end) for c in cands}
        for trig in row["triggers"]:
            marked += 1
            if (trig["start"], trig["end"]) in spans:
                found += 1
        flagged = {(c.start, c.end): c.reason for c in cands if c.filtered}
        for need in row["must_filter"]:
            filter_expected += 1
            if flagged.get((need["start"], need["end"])) == need["reason"]:
                filter_hit += 1
    recall = found / marked
    assert recall >= 0.98, f"recall {recall:.3f}"
    assert filter_hit == filter_expected, "proportional-quantifier candidates must all be flagged"
    ok(
        f"detector: recall {recall:.3f} on {marked} marked triggers over {len(rows)} sentences, "
        f"{filter_hit}/{filter_expected} quantifier/idiom patterns flagged"
    )


EVENTIVE_CS = "PUT(e, AGENT=Tom & John & Mary, PATIENT=plants, DESTINATION=table)"
SUBJECT_CS = "BE_ANGRY(e, AGENT=whole party, PATIENT=Mary, FOR=forgetting the cake)"
NOMINAL_CS = "plants OF=the table"


def test_entropy_bounds_and_pinned_values():
    uniform = ["plants", NOMINAL_CS, EVENTIVE_CS, SUBJECT_CS]
    assert analysis.beam_entropy(uniform) == pytest.approx(math.log(4), abs=1e-9)
    assert analysis.beam_entropy(["plants"] * 5) == 0.0
    two_two_one = ["plants", "flowers", EVENTIVE_CS, EVENTIVE_CS.replace("PUT", "MOVE"), SUBJECT_CS]
    assert analysis.beam_entropy(two_two_one) == pytest.approx(1.0549, abs=1e-3)
    beams = analysis.load_beams(str(FIXTURES / "challenge_beams.jsonl"))
    for beam in beams:
        value = analysis.beam_entropy(beam)
        assert -1e-12 <= value <= math.log(4) + 1e-12
    ok("entropy: bounds hold on every beam; ln4 / 0 / 1.0549 pinned values exact")


def test_logprob_preference_flip_and_gap_widening():
    records = analysis.load_logprob_records(str(FIXTURES / "logprob_records.jsonl"))
    report = analysis.preference_report(records)
    assert report.row("context-1").preference_rate == 1.0
    assert report.row("context-2").preference_rate == 1.0
    winners = {
        condition: {d.winner for d in report.decisions if d.condition == condition}
        for condition in ("context-1", "context-2")
    }
    assert winners["context-1"] == {"Mary & Tom"}
    assert winners["context-2"] == {SUBJECT_CS}
    gap_no_context = report.row("no-context").mean_top2_gap
    assert report.row("context-1").mean_top2_gap > gap_no_context
    assert report.row("context-2").mean_top2_gap > gap_no_context
    ok(
        "log-prob preference: winner flips between the two contexts and the "
        f"top-2 gap widens with context ({gap_no_context:.3f} -> "
        f"{report.row('context-1').mean_top2_gap:.3f}/{report.row('context-2').mean_top2_gap:.3f})"
    )


def test_semantic_type_classifier_agrees_with_stored_labels(gold_corpus):
    labelled = [inst for inst in gold_corpus.instances if inst.semantic_type is not None]
    assert labelled, "gold corpus must carry stored type labels"
    for inst in labelled:
        assert classify_semantic_type(inst.frame) == inst.semantic_type, inst.instance_id
    by_domain = compute_stats(gold_corpus.instances).type_counts
    assert sum(sum(c.values()) for c in by_domain.values()) == len(labelled)
    ok(f"semantic-type classifier: 100% agreement with {len(labelled)} stored labels")


def test_end_to_end_detect_annotate_export_load_stats():
    docs = [json.loads(line) for line in open(FIXTURES / "e2e_docs.jsonl", encoding="utf-8")]
    assert len(docs) == 20
    with open(FIXTURES / "e2e_annotations.json", encoding="utf-8") as fh:
        bodies = json.load(fh)
    candidates = [c for d in docs for c in detector.detect_document(str(d["id"]), d["text"])]
    instances = service.instances_from_candidates(docs, candidates)
    assert {i.instance_id for i in instances} == set(bodies)
    app = service.create_app(instances, docs, service.AnnotationStore())
    client = TestClient(app)
    for instance_id, body in bodies.items():
        payload = {
            "revision": 0,
            "is_superlative": body["is_superlative"],
            "frame": body.get("frame"),
        }
        response = client.post(
            f"/instance/{instance_id}/frame", json=payload, headers={"X-Annotator": "scripted"}
        )
        assert response.status_code == 200, (instance_id, response.json())
    export_text = client.get("/export").text
    corpus = load_corpus(io.StringIO(export_text))
    assert corpus.report.ok(), corpus.report.to_text()
    assert len(corpus) == 20
    stats = compute_stats(corpus.instances)
    assert stats.totals.superlatives == 10
    assert stats.totals.non_superlatives == 10
    # export -> import -> export round-trip is the identity
    reinstances, seeds = service.instances_from_corpus(corpus.instances)
    app2 = service.create_app(reinstances, store=service.AnnotationStore(), seed_annotations=seeds)
    export2 = TestClient(app2).get("/export", params={"annotator": "gold"}).text
    corpus2 = load_corpus(io.StringIO(export2))
    assert corpus2.instances == corpus.instances
    ok("end-to-end: detect -> annotate via API -> export -> load -> stats, round-trip identity")
