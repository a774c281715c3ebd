import io
import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from supframes import detector, service
from supframes.corpus import load_corpus

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"

DOCS = [
    {"id": "d1", "domain": "Wikipedia", "text": "Varna handles sea trade. Varna is the largest Bulgarian port."},
    {"id": "d2", "domain": "Reviews", "text": "The manual says to charge it for at least two hours."},
]

VALID_FRAME = {
    "target": "Varna",
    "cs": "ports OF=Bulgaria",
    "anchor": {"index": 0, "role": None},
    "property": "size",
    "orientation": "positive",
    "rank": 1,
    "implicit": False,
    "amount": None,
}


def make_client(store=None, strict=False):
    candidates = [c for d in DOCS for c in detector.detect_document(d["id"], d["text"])]
    instances = service.instances_from_candidates(DOCS, candidates)
    app = service.create_app(instances, DOCS, store or service.AnnotationStore(), strict=strict)
    return TestClient(app), instances


def submit(client, instance_id, frame=VALID_FRAME, revision=0, is_superlative=True, override=False, annotator="a1"):
    return client.post(
        f"/instance/{instance_id}/frame",
        json={
            "revision": revision,
            "is_superlative": is_superlative,
            "frame": frame if is_superlative else None,
            "override": override,
        },
        headers={"X-Annotator": annotator},
    )


class TestReads:
    def test_unknown_instance_404(self):
        client, _ = make_client()
        assert client.get("/instance/nope").status_code == 404

    def test_unknown_doc_404(self):
        client, _ = make_client()
        assert client.get("/candidates", params={"doc": "nope"}).status_code == 404

    def test_documents(self):
        client, _ = make_client()
        docs = client.get("/documents").json()
        assert [d["id"] for d in docs] == ["d1", "d2"]

    def test_candidates_match_detector_output(self):
        client, instances = make_client()
        records = client.get("/candidates").json()
        assert [r["id"] for r in records] == [i.instance_id for i in instances]
        at_least = [r for r in records if r["doc_id"] == "d2"][0]
        assert at_least["filtered"] is True
        assert at_least["reason"] == "proportional-quantifier"

    def test_instance_context_window(self):
        client, instances = make_client()
        payload = client.get(f"/instance/{instances[0].instance_id}").json()
        assert payload["context"]["text"] == DOCS[0]["text"]
        assert payload["trigger"] == "largest"


class TestWrites:
    def test_valid_frame_stored(self):
        client, instances = make_client()
        response = submit(client, instances[0].instance_id)
        assert response.status_code == 200
        assert response.json() == {"revision": 1, "status": "annotated"}
        payload = client.get(f"/instance/{instances[0].instance_id}", headers={"X-Annotator": "a1"}).json()
        assert payload["annotation"]["status"] == "annotated"
        assert payload["annotation"]["frame"]["cs"] == "ports OF=Bulgaria"

    def test_rank_zero_rejected(self):
        client, instances = make_client()
        bad = dict(VALID_FRAME, rank=0)
        response = submit(client, instances[0].instance_id, frame=bad)
        assert response.status_code == 422
        messages = [v["message"] for v in response.json()["violations"]]
        assert "rank must be ≥ 1" in messages

    def test_unparseable_cs_rejected(self):
        client, instances = make_client()
        bad = dict(VALID_FRAME, cs="PAY(AGENT=people")
        response = submit(client, instances[0].instance_id, frame=bad)
        assert response.status_code == 422

    def test_stale_revision_conflict(self):
        client, instances = make_client()
        assert submit(client, instances[0].instance_id).status_code == 200
        response = submit(client, instances[0].instance_id, revision=0)
        assert response.status_code == 409
        assert response.json()["current_revision"] == 1

    def test_concurrent_conflicting_writes_one_wins(self):
        client, instances = make_client()
        first = submit(client, instances[0].instance_id, revision=0)
        second = submit(client, instances[0].instance_id, revision=0, annotator="a1")
        assert {first.status_code, second.status_code} == {200, 409}

    def test_warning_override_flow(self):
        client, instances = make_client()
        warned = dict(VALID_FRAME, anchor={"index": 5, "role": "OF"})
        response = submit(client, instances[0].instance_id, frame=warned)
        assert response.status_code == 422
        assert response.json()["override_allowed"] is True
        response = submit(client, instances[0].instance_id, frame=warned, override=True)
        assert response.status_code == 200

    def test_error_never_overridable(self):
        client, instances = make_client()
        bad = dict(VALID_FRAME, rank=0)
        response = submit(client, instances[0].instance_id, frame=bad, override=True)
        assert response.status_code == 422
        assert response.json()["override_allowed"] is False

    def test_non_superlative_marker(self):
        client, instances = make_client()
        filtered = [i for i in instances if i.filtered][0]
        response = submit(client, filtered.instance_id, frame=None, is_superlative=False)
        assert response.status_code == 200
        assert response.json()["status"] == "marked-non-superlative"

    def test_skip(self):
        client, instances = make_client()
        response = client.post(f"/instance/{instances[0].instance_id}/skip", headers={"X-Annotator": "a1"})
        assert response.status_code == 200
        progress = client.get("/progress").json()
        assert progress["a1"]["skipped"] == 1


class TestIaa:
    def annotate_both(self, client, instances):
        for annotator in ("a1", "a2"):
            for inst in instances:
                if inst.filtered:
                    submit(client, inst.instance_id, frame=None, is_superlative=False, annotator=annotator)
                else:
                    submit(client, inst.instance_id, annotator=annotator)

    def test_self_agreement(self):
        client, instances = make_client()
        self.annotate_both(client, instances)
        report = client.get("/iaa", params={"annotator_a": "a1", "annotator_b": "a2"}).json()
        for row in report["rows"]:
            if row["accuracy"] is not None:
                assert row["accuracy"] == 1.0

    def test_disjoint_annotators_400(self):
        client, instances = make_client()
        submit(client, instances[0].instance_id, annotator="a1")
        response = client.get("/iaa", params={"annotator_a": "a1", "annotator_b": "a2"})
        assert response.status_code == 400

    def test_sample_deterministic(self):
        client, instances = make_client()
        self.annotate_both(client, instances)
        params = {"annotator_a": "a1", "annotator_b": "a2", "sample": 1, "seed": 3}
        first = client.get("/iaa", params=params).json()
        second = client.get("/iaa", params=params).json()
        assert first == second
        assert first["n_overlap"] == 1


class TestExport:
    def test_fresh_store_empty(self):
        client, _ = make_client()
        response = client.get("/export")
        assert response.text == ""

    def test_export_loadable_and_round_trips(self):
        client, instances = make_client()
        submit(client, instances[0].instance_id)
        filtered = [i for i in instances if i.filtered][0]
        submit(client, filtered.instance_id, frame=None, is_superlative=False)
        body = client.get("/export").text
        assert len(body.strip().splitlines()) == 2
        corpus = load_corpus(io.StringIO(body))
        assert corpus.report.ok()
        assert corpus.instances[0].frame is not None
        assert corpus.instances[0].semantic_type is not None
        # re-loading the re-export is identical
        corpus2 = load_corpus(io.StringIO(body))
        assert corpus2.instances == corpus.instances

    def test_latest_write_wins_without_annotator_param(self):
        client, instances = make_client()
        submit(client, instances[0].instance_id, annotator="a1")
        other = dict(VALID_FRAME, property="capacity")
        submit(client, instances[0].instance_id, annotator="a2", frame=other)
        body = client.get("/export").text
        assert json.loads(body.splitlines()[0])["frame"]["property"] == "capacity"
        body_a1 = client.get("/export", params={"annotator": "a1"}).text
        assert json.loads(body_a1.splitlines()[0])["frame"]["property"] == "size"


class TestJournal:
    def test_replay_restores_state(self, tmp_path):
        journal = tmp_path / "journal.jsonl"
        store = service.AnnotationStore(str(journal))
        client, instances = make_client(store=store)
        submit(client, instances[0].instance_id)
        # new store replays the journal
        restored = service.AnnotationStore(str(journal))
        state = restored.get(instances[0].instance_id, "a1")
        assert state.status == "annotated"
        assert state.revision == 1
        assert state.frame["property"] == "size"

    def test_compaction_keeps_latest(self, tmp_path):
        journal = tmp_path / "journal.jsonl"
        store = service.AnnotationStore(str(journal))
        client, instances = make_client(store=store)
        submit(client, instances[0].instance_id)
        updated = dict(VALID_FRAME, property="capacity")
        submit(client, instances[0].instance_id, frame=updated, revision=1)
        assert store.journal_lines == 2
        store.compact()
        assert store.journal_lines == 1
        restored = service.AnnotationStore(str(journal))
        assert restored.get(instances[0].instance_id, "a1").frame["property"] == "capacity"
        assert restored.get(instances[0].instance_id, "a1").revision == 2


class TestAssignments:
    def test_assigned_annotator_sees_only_their_instances(self):
        candidates = [c for d in DOCS for c in detector.detect_document(d["id"], d["text"])]
        instances = service.instances_from_candidates(DOCS, candidates)
        assignments = {"a1": [instances[0].instance_id]}
        app = service.create_app(instances, DOCS, service.AnnotationStore(), assignments=assignments)
        client = TestClient(app)
        mine = client.get("/candidates", headers={"X-Annotator": "a1"}).json()
        assert [r["id"] for r in mine] == [instances[0].instance_id]
        # annotators without an assignment entry see everything
        others = client.get("/candidates", headers={"X-Annotator": "a2"}).json()
        assert len(others) == len(instances)


class TestDisagreements:
    def test_details_lists_disagreeing_fields(self):
        client, instances = make_client()
        target = instances[0].instance_id
        submit(client, target, annotator="a1")
        other = dict(VALID_FRAME, orientation="negative", property="capacity")
        submit(client, target, annotator="a2", frame=other)
        report = client.get(
            "/iaa",
            params={"annotator_a": "a1", "annotator_b": "a2", "details": "true"},
        ).json()
        assert report["disagreements"] == [
            {"instance_id": target, "fields": ["property", "orientation"]}
        ]

    def test_details_empty_on_agreement(self):
        client, instances = make_client()
        target = instances[0].instance_id
        submit(client, target, annotator="a1")
        submit(client, target, annotator="a2")
        report = client.get(
            "/iaa",
            params={"annotator_a": "a1", "annotator_b": "a2", "details": "true"},
        ).json()
        assert report["disagreements"] == []

    def test_sup_vs_nonsup_disagreement(self):
        client, instances = make_client()
        target = instances[0].instance_id
        submit(client, target, annotator="a1")
        submit(client, target, annotator="a2", frame=None, is_superlative=False)
        report = client.get(
            "/iaa",
            params={"annotator_a": "a1", "annotator_b": "a2", "details": "true"},
        ).json()
        assert report["disagreements"][0]["fields"] == ["superlative vs. none"]


class TestCorpusServing:
    def test_gold_seed_annotator(self):
        gold = load_corpus(str(FIXTURES / "iaa_a.jsonl"))
        instances, seeds = service.instances_from_corpus(gold.instances)
        app = service.create_app(instances, store=service.AnnotationStore(), seed_annotations=seeds)
        client = TestClient(app)
        payload = client.get(f"/instance/{instances[0].instance_id}", headers={"X-Annotator": "gold"}).json()
        assert payload["annotation"]["status"] == "annotated"
        # a fresh annotator can now be compared against gold
        frame = payload["annotation"]["frame"]
        response = client.post(
            f"/instance/{instances[0].instance_id}/frame",
            json={"revision": 0, "is_superlative": True, "frame": frame},
            headers={"X-Annotator": "human"},
        )
        assert response.status_code == 200
        report = client.get("/iaa", params={"annotator_a": "gold", "annotator_b": "human"}).json()
        assert report["n_overlap"] == 1
