"""HTTP backend for the human annotation workflow.

Serves documents and detector candidates with their discourse context,
accepts frame submissions with live validation, tracks per-annotator
progress with optimistic revision checks, computes on-demand agreement
between annotators, and exports the store as corpus JSONL.

State is an append-only JSONL journal (one line per accepted write) that
is replayed on startup and compacted on demand; writes are serialized
per process, reads see plain snapshots. Annotators identify themselves
with the ``X-Annotator`` header; there is no further authentication.
"""

from __future__ import annotations

import json
import random
import threading
from dataclasses import dataclass
from typing import Optional

from fastapi import FastAPI, Header, Query
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import detector, frames, metrics
from .corpus import AnnotatedInstance, DOMAINS, instance_to_json

STATUS_UNSEEN = "unseen"
STATUS_SKIPPED = "skipped"
STATUS_NON_SUPERLATIVE = "marked-non-superlative"
STATUS_ANNOTATED = "annotated"

GOLD_ANNOTATOR = "gold"


@dataclass(frozen=True)
class ServiceInstance:
    """One annotatable unit: a detector candidate or a corpus instance."""

    instance_id: str
    doc_id: str
    domain: str
    doc_text: str
    sentence_span: tuple[int, int]
    trigger_span: tuple[int, int]
    sentence_index: Optional[int] = None
    kind: Optional[str] = None
    filtered: bool = False
    reason: Optional[str] = None

    @property
    def trigger(self) -> str:
        return self.doc_text[self.trigger_span[0]:self.trigger_span[1]]


@dataclass
class AnnotationState:
    status: str = STATUS_UNSEEN
    revision: int = 0
    is_superlative: Optional[bool] = None
    frame: Optional[dict] = None


class AnnotationStore:
    """Journal-backed annotation state, serialized writes per process."""

    def __init__(self, journal_path: Optional[str] = None):
        self._lock = threading.Lock()
        self._states: dict[tuple[str, str], AnnotationState] = {}
        self._write_order: list[tuple[str, str]] = []
        self._journal_path = journal_path
        self._journal_lines = 0
        if journal_path is not None:
            self._replay()

    def _replay(self) -> None:
        try:
            fh = open(self._journal_path, encoding="utf-8")
        except FileNotFoundError:
            return
        with fh:
            for line in fh:
                if not line.strip():
                    continue
                entry = json.loads(line)
                self._journal_lines += 1
                self._apply(entry)

    def _apply(self, entry: dict) -> None:
        key = (entry["instance_id"], entry["annotator"])
        state = AnnotationState(
            status=entry["status"],
            revision=entry["revision"],
            is_superlative=entry.get("is_superlative"),
            frame=entry.get("frame"),
        )
        self._states[key] = state
        if key in self._write_order:
            self._write_order.remove(key)
        self._write_order.append(key)

    def _append_journal(self, entry: dict) -> None:
        if self._journal_path is None:
            return
        with open(self._journal_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
        self._journal_lines += 1

    def get(self, instance_id: str, annotator: str) -> AnnotationState:
        return self._states.get((instance_id, annotator), AnnotationState())

    def write(
        self,
        instance_id: str,
        annotator: str,
        expected_revision: int,
        status: str,
        is_superlative: Optional[bool],
        frame: Optional[dict],
    ) -> tuple[bool, int]:
        """Apply one write; returns (accepted, current_revision)."""
        with self._lock:
            current = self._states.get((instance_id, annotator), AnnotationState())
            if expected_revision != current.revision:
                return False, current.revision
            entry = {
                "instance_id": instance_id,
                "annotator": annotator,
                "revision": current.revision + 1,
                "status": status,
                "is_superlative": is_superlative,
                "frame": frame,
            }
            self._apply(entry)
            self._append_journal(entry)
            return True, current.revision + 1

    def annotators(self) -> list[str]:
        return sorted({annotator for _id, annotator in self._states})

    def ids_for(self, annotator: str, statuses: tuple[str, ...]) -> set[str]:
        return {
            instance_id
            for (instance_id, who), state in self._states.items()
            if who == annotator and state.status in statuses
        }

    def latest_for_instance(self, instance_id: str) -> Optional[AnnotationState]:
        for key in reversed(self._write_order):
            if key[0] == instance_id:
                return self._states[key]
        return None

    def progress(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for (_id, annotator), state in self._states.items():
            bucket = out.setdefault(
                annotator,
                {STATUS_SKIPPED: 0, STATUS_NON_SUPERLATIVE: 0, STATUS_ANNOTATED: 0},
            )
            bucket[state.status] = bucket.get(state.status, 0) + 1
        return out

    def compact(self) -> None:
        """Rewrite the journal keeping only the latest state per key."""
        if self._journal_path is None:
            return
        with self._lock:
            with open(self._journal_path, "w", encoding="utf-8") as fh:
                for key in self._write_order:
                    state = self._states[key]
                    entry = {
                        "instance_id": key[0],
                        "annotator": key[1],
                        "revision": state.revision,
                        "status": state.status,
                        "is_superlative": state.is_superlative,
                        "frame": state.frame,
                    }
                    fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
            self._journal_lines = len(self._write_order)

    @property
    def journal_lines(self) -> int:
        return self._journal_lines


def instances_from_candidates(
    docs: list[dict], candidates: list[detector.Candidate]
) -> list[ServiceInstance]:
    """Pair detector output with its documents; ids are
    ``{doc_id}:{sentence_index}:{start}``."""
    doc_map = {str(d["id"]): d for d in docs}
    out = []
    sentence_cache: dict[str, list[detector.Sentence]] = {}
    for cand in candidates:
        doc = doc_map[cand.doc_id]
        text = doc["text"]
        sentences = sentence_cache.setdefault(cand.doc_id, detector.segment(text))
        sent = sentences[cand.sentence_index]
        out.append(
            ServiceInstance(
                instance_id=f"{cand.doc_id}:{cand.sentence_index}:{cand.start}",
                doc_id=cand.doc_id,
                domain=doc.get("domain", "Wikipedia"),
                doc_text=text,
                sentence_span=(sent.start, sent.end),
                trigger_span=(cand.start, cand.end),
                sentence_index=cand.sentence_index,
                kind=cand.kind,
                filtered=cand.filtered,
                reason=cand.reason,
            )
        )
    return out


def instances_from_corpus(
    instances: list[AnnotatedInstance],
) -> tuple[list[ServiceInstance], list[tuple[str, dict]]]:
    """Wrap corpus instances for serving; existing frames come back as
    seed annotations for the ``gold`` annotator."""
    service_instances = []
    seeds: list[tuple[str, dict]] = []
    for inst in instances:
        service_instances.append(
            ServiceInstance(
                instance_id=inst.instance_id,
                doc_id=inst.instance_id,
                domain=inst.domain,
                doc_text=inst.doc_text,
                sentence_span=inst.sentence_span,
                trigger_span=inst.trigger_span,
            )
        )
        if inst.is_superlative and inst.frame is not None:
            seeds.append((inst.instance_id, frames.frame_to_json(inst.frame)))
        else:
            seeds.append((inst.instance_id, None))
    return service_instances, seeds


def build_annotated_instance(
    inst: ServiceInstance,
    state: AnnotationState,
    roles: Optional[frozenset[str]] = None,
) -> AnnotatedInstance:
    frame = None
    if state.frame is not None:
        frame = frames.frame_from_json(state.frame, roles, trigger=inst.trigger)
    return AnnotatedInstance(
        instance_id=inst.instance_id,
        domain=inst.domain if inst.domain in DOMAINS else "Wikipedia",
        doc_text=inst.doc_text,
        sentence_span=inst.sentence_span,
        trigger_span=inst.trigger_span,
        is_superlative=bool(state.is_superlative),
        frame=frame,
        semantic_type=frames.classify_semantic_type(frame) if frame is not None else None,
    )


def export_store(
    instances: list[ServiceInstance],
    store: AnnotationStore,
    roles: Optional[frozenset[str]] = None,
    annotator: Optional[str] = None,
) -> list[str]:
    """Corpus JSONL lines for the store's current state.

    With an annotator, exactly that annotator's annotations are exported;
    otherwise the most recently written annotation per instance wins.
    Skipped and unseen instances are omitted.
    """
    lines = []
    for inst in instances:
        if annotator is not None:
            state = store.get(inst.instance_id, annotator)
        else:
            state = store.latest_for_instance(inst.instance_id)
        if state is None or state.status not in (STATUS_ANNOTATED, STATUS_NON_SUPERLATIVE):
            continue
        lines.append(
            json.dumps(
                instance_to_json(build_annotated_instance(inst, state, roles)),
                ensure_ascii=False,
            )
        )
    return lines


class FrameSubmission(BaseModel):
    revision: int
    is_superlative: bool
    frame: Optional[dict] = None
    override: bool = False


def _violations_json(violations: list[frames.Violation]) -> list[dict]:
    return [
        {"severity": v.severity, "field": v.field, "message": v.message} for v in violations
    ]


def create_app(
    instances: list[ServiceInstance],
    docs: Optional[list[dict]] = None,
    store: Optional[AnnotationStore] = None,
    *,
    window_before: int = 2,
    window_after: int = 2,
    strict: bool = False,
    roles: Optional[frozenset[str]] = None,
    seed_annotations: Optional[list[tuple[str, Optional[dict]]]] = None,
    assignments: Optional[dict[str, list[str]]] = None,
) -> FastAPI:
    store = store if store is not None else AnnotationStore()
    by_id = {inst.instance_id: inst for inst in instances}
    doc_list = docs or []
    doc_map = {str(d["id"]): d for d in doc_list}
    app = FastAPI(title="supframes annotation service")
    app.state.store = store

    if seed_annotations:
        for instance_id, frame_json in seed_annotations:
            state = store.get(instance_id, GOLD_ANNOTATOR)
            if state.revision == 0:
                if frame_json is not None:
                    store.write(instance_id, GOLD_ANNOTATOR, 0, STATUS_ANNOTATED, True, frame_json)
                else:
                    store.write(instance_id, GOLD_ANNOTATOR, 0, STATUS_NON_SUPERLATIVE, False, None)

    def context_payload(inst: ServiceInstance) -> dict:
        if inst.sentence_index is not None:
            cand = detector.Candidate(
                doc_id=inst.doc_id,
                sentence_index=inst.sentence_index,
                start=inst.trigger_span[0],
                end=inst.trigger_span[1],
                surface=inst.trigger,
                kind=inst.kind or "adjectival",
            )
            window = detector.context_window(inst.doc_text, cand, window_before, window_after)
            return {"start": window.start, "end": window.end, "text": window.text}
        return {"start": 0, "end": len(inst.doc_text), "text": inst.doc_text}

    def instance_payload(inst: ServiceInstance, annotator: str) -> dict:
        state = store.get(inst.instance_id, annotator)
        return {
            "id": inst.instance_id,
            "doc_id": inst.doc_id,
            "domain": inst.domain,
            "doc_text": inst.doc_text,
            "sentence_span": list(inst.sentence_span),
            "trigger_span": list(inst.trigger_span),
            "trigger": inst.trigger,
            "kind": inst.kind,
            "filtered": inst.filtered,
            "reason": inst.reason,
            "context": context_payload(inst),
            "annotation": {
                "status": state.status,
                "revision": state.revision,
                "is_superlative": state.is_superlative,
                "frame": state.frame,
            },
        }

    @app.get("/documents")
    def get_documents():
        if doc_list:
            return [
                {"id": str(d["id"]), "text": d["text"], "domain": d.get("domain", "Wikipedia")}
                for d in doc_list
            ]
        seen = {}
        for inst in instances:
            seen.setdefault(inst.doc_id, {"id": inst.doc_id, "text": inst.doc_text, "domain": inst.domain})
        return list(seen.values())

    @app.get("/candidates")
    def get_candidates(doc: Optional[str] = None, annotator: str = Header("anonymous", alias="X-Annotator")):
        if doc is not None and doc not in doc_map and all(i.doc_id != doc for i in instances):
            return JSONResponse({"error": f"unknown document: {doc}"}, status_code=404)
        selected = [i for i in instances if doc is None or i.doc_id == doc]
        if assignments is not None and annotator in assignments:
            assigned = set(assignments[annotator])
            selected = [i for i in selected if i.instance_id in assigned]
        return [instance_payload(inst, annotator) for inst in selected]

    @app.get("/instance/{instance_id}")
    def get_instance(instance_id: str, annotator: str = Header("anonymous", alias="X-Annotator")):
        inst = by_id.get(instance_id)
        if inst is None:
            return JSONResponse({"error": f"unknown instance: {instance_id}"}, status_code=404)
        return instance_payload(inst, annotator)

    @app.post("/instance/{instance_id}/frame")
    def post_frame(
        instance_id: str,
        submission: FrameSubmission,
        annotator: str = Header("anonymous", alias="X-Annotator"),
    ):
        inst = by_id.get(instance_id)
        if inst is None:
            return JSONResponse({"error": f"unknown instance: {instance_id}"}, status_code=404)
        frame_json = None
        if submission.is_superlative:
            if submission.frame is None:
                return JSONResponse(
                    {"violations": [{"severity": "error", "field": "frame", "message": "frame required when is_superlative"}]},
                    status_code=422,
                )
            try:
                frame = frames.frame_from_json(submission.frame, roles, trigger=inst.trigger)
            except frames.FrameSyntaxError as err:
                return JSONResponse(
                    {"violations": [{"severity": "error", "field": "frame", "message": str(err)}]},
                    status_code=422,
                )
            except (KeyError, TypeError, ValueError) as err:
                return JSONResponse(
                    {"violations": [{"severity": "error", "field": "frame", "message": f"bad frame payload: {err}"}]},
                    status_code=422,
                )
            violations = frames.validate_frame(frame, strict=strict, roles=roles)
            errors = [v for v in violations if v.severity == "error"]
            warnings = [v for v in violations if v.severity == "warning"]
            if errors or (warnings and not submission.override):
                return JSONResponse(
                    {"violations": _violations_json(violations), "override_allowed": not errors},
                    status_code=422,
                )
            frame_json = frames.frame_to_json(frame)
        status = STATUS_ANNOTATED if submission.is_superlative else STATUS_NON_SUPERLATIVE
        accepted, revision = store.write(
            instance_id,
            annotator,
            submission.revision,
            status,
            submission.is_superlative,
            frame_json,
        )
        if not accepted:
            return JSONResponse(
                {"error": "revision conflict", "current_revision": revision}, status_code=409
            )
        return {"revision": revision, "status": status}

    @app.post("/instance/{instance_id}/skip")
    def post_skip(
        instance_id: str,
        annotator: str = Header("anonymous", alias="X-Annotator"),
    ):
        inst = by_id.get(instance_id)
        if inst is None:
            return JSONResponse({"error": f"unknown instance: {instance_id}"}, status_code=404)
        state = store.get(instance_id, annotator)
        accepted, revision = store.write(
            instance_id, annotator, state.revision, STATUS_SKIPPED, None, None
        )
        return {"revision": revision, "status": STATUS_SKIPPED}

    @app.get("/progress")
    def get_progress():
        return store.progress()

    def _annotated_instance(inst: ServiceInstance, state: AnnotationState) -> AnnotatedInstance:
        return build_annotated_instance(inst, state, roles)

    @app.get("/iaa")
    def get_iaa(
        annotator_a: str = Query(...),
        annotator_b: str = Query(...),
        sample: Optional[int] = Query(None),
        seed: int = Query(13),
        details: bool = Query(False),
    ):
        done = (STATUS_ANNOTATED, STATUS_NON_SUPERLATIVE)
        overlap = sorted(store.ids_for(annotator_a, done) & store.ids_for(annotator_b, done))
        overlap = [i for i in overlap if i in by_id]
        if not overlap:
            return JSONResponse(
                {"error": f"no overlapping annotations for {annotator_a} and {annotator_b}"},
                status_code=400,
            )
        if sample is not None and sample < len(overlap):
            overlap = sorted(random.Random(seed).sample(overlap, sample))
        side_a = [_annotated_instance(by_id[i], store.get(i, annotator_a)) for i in overlap]
        side_b = [_annotated_instance(by_id[i], store.get(i, annotator_b)) for i in overlap]
        report = metrics.iaa_report(side_a, side_b)
        payload = {"n_overlap": len(overlap), **report.to_json()}
        if details:
            payload["disagreements"] = metrics.disagreement_list(side_a, side_b)
        return payload

    @app.get("/export")
    def get_export(annotator: Optional[str] = None):
        lines = export_store(instances, store, roles, annotator)
        body = "\n".join(lines)
        if body:
            body += "\n"
        return PlainTextResponse(body, media_type="application/jsonl")

    return app
