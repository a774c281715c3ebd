"""Command-line entry point; every pipeline stage is a subcommand.

All subcommands read and write the documented JSONL formats and are
deterministic for identical inputs and configuration. Exit codes:
0 success, 1 validation/data failures, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Optional

from . import analysis, detector, frames, metrics, service
from .config import Config, load_config
from .corpus import (
    Corpus,
    compute_stats,
    export_corpus,
    load_corpus,
    split_corpus,
)


def _read_jsonl(path: str) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append(json.loads(line))
    return rows


def _write_json(path: Optional[str], payload: dict) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1, ensure_ascii=False, sort_keys=False)
            fh.write("\n")


def _load_corpus_or_fail(path: str, config: Config, strict: bool = False) -> Corpus:
    corpus = load_corpus(path, roles=config.roles(), strict=strict)
    if corpus.report.errors:
        print(corpus.report.to_text(), file=sys.stderr)
        raise SystemExit(1)
    return corpus


def cmd_detect(args: argparse.Namespace, config: Config) -> int:
    if args.text:
        with open(args.text, encoding="utf-8") as fh:
            docs = [{"id": args.doc_id, "text": fh.read()}]
    else:
        docs = _read_jsonl(getattr(args, "in"))
    with open(args.out, "w", encoding="utf-8") as fh:
        for doc in docs:
            for cand in detector.detect_document(str(doc["id"]), doc["text"]):
                fh.write(json.dumps(cand.to_json(), ensure_ascii=False) + "\n")
    return 0


def cmd_validate(args: argparse.Namespace, config: Config) -> int:
    corpus = load_corpus(getattr(args, "in"), roles=config.roles(), strict=args.strict)
    report = corpus.report
    if report.errors or report.warnings:
        print(report.to_text())
    print(f"{len(corpus)} instances loaded, {len(report.errors)} errors, {len(report.warnings)} warnings")
    return 1 if report.errors else 0


def _table1_text(stats) -> str:
    lines = [f"{'Domain':<12} {'Sup.':>6} {'¬Sup.':>6} {'Events':>7} {'Implicit':>9}"]
    for domain in ("Wikipedia", "Reviews", "Dialogue", "Literature", "Wikinews"):
        counts = stats.per_domain[domain].as_tuple()
        lines.append(f"{domain:<12} {counts[0]:>6} {counts[1]:>6} {counts[2]:>7} {counts[3]:>9}")
    totals = stats.totals.as_tuple()
    lines.append(f"{'total':<12} {totals[0]:>6} {totals[1]:>6} {totals[2]:>7} {totals[3]:>9}")
    return "\n".join(lines)


def _fig2_text(stats) -> str:
    types = list(frames.SemanticType)
    header = f"{'Domain':<12}" + "".join(f" {t.value:>18}" for t in types)
    lines = [header]
    for domain in ("Wikipedia", "Reviews", "Dialogue", "Literature", "Wikinews"):
        counter = stats.type_counts.get(domain, {})
        lines.append(f"{domain:<12}" + "".join(f" {counter.get(t, 0):>18}" for t in types))
    return "\n".join(lines)


def _counter_text(counter, label: str, top: int = 15) -> str:
    lines = [f"{label:<24} {'count':>7}"]
    ranked = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))[:top]
    for key, count in ranked:
        lines.append(f"{key:<24} {count:>7}")
    return "\n".join(lines)


def cmd_stats(args: argparse.Namespace, config: Config) -> int:
    corpus = _load_corpus_or_fail(getattr(args, "in"), config)
    stats = compute_stats(corpus.instances)
    sections = {
        "table1": lambda: _table1_text(stats),
        "fig2": lambda: _fig2_text(stats),
        "fig3": lambda: _counter_text(stats.role_counts, "role"),
        "fig4": lambda: _counter_text(stats.property_counts, "property"),
    }
    selected = list(sections) if args.table == "all" else [args.table]
    for name in selected:
        print(sections[name]())
        print()
    _write_json(args.json, stats.to_json())
    return 0


def cmd_split(args: argparse.Namespace, config: Config) -> int:
    corpus = _load_corpus_or_fail(getattr(args, "in"), config)
    if args.fractions is None:
        fractions = config.split_fractions
    else:
        fractions = tuple(float(x) for x in args.fractions.split(","))
    if len(fractions) != 3:
        print("--fractions needs three comma-separated numbers", file=sys.stderr)
        return 2
    try:
        splits = split_corpus(
            corpus.instances,
            seed=config.split_seed if args.seed is None else args.seed,
            fractions=fractions,  # type: ignore[arg-type]
            superlatives_only=args.superlatives_only,
        )
    except ValueError as err:
        print(str(err), file=sys.stderr)
        return 2
    os.makedirs(args.out_dir, exist_ok=True)
    for part, members in splits.items():
        path = os.path.join(args.out_dir, f"{part}.jsonl")
        export_corpus(members, path)
        print(f"{part}: {len(members)} instances -> {path}")
    return 0


def cmd_score(args: argparse.Namespace, config: Config) -> int:
    corpus = _load_corpus_or_fail(args.gold, config)
    records = [metrics.PredictionRecord.from_json(row) for row in _read_jsonl(args.pred)]
    try:
        report = metrics.score_predictions(corpus.instances, records)
    except ValueError as err:
        print(str(err), file=sys.stderr)
        return 1
    print(report.to_text())
    _write_json(args.json, report.to_json())
    return 0


def cmd_iaa(args: argparse.Namespace, config: Config) -> int:
    corpus_a = _load_corpus_or_fail(args.a, config)
    corpus_b = _load_corpus_or_fail(args.b, config)
    instances_a = corpus_a.instances
    instances_b = corpus_b.instances
    if args.sample is not None:
        ids = sorted({i.instance_id for i in instances_a} & {i.instance_id for i in instances_b})
        if args.sample < len(ids):
            chosen = set(random.Random(args.seed).sample(ids, args.sample))
            instances_a = [i for i in instances_a if i.instance_id in chosen]
            instances_b = [i for i in instances_b if i.instance_id in chosen]
    try:
        report = metrics.iaa_report(instances_a, instances_b)
    except ValueError as err:
        print(str(err), file=sys.stderr)
        return 1
    print(report.to_text())
    _write_json(args.json, report.to_json())
    return 0


def cmd_entropy(args: argparse.Namespace, config: Config) -> int:
    beams = analysis.load_beams(args.beams)
    light_verbs = config.light_verb_set()
    base = config.entropy_base if args.base is None else args.base
    rows = []
    for beam in beams:
        value = analysis.beam_entropy(beam, light_verbs, base=base)
        counts = analysis.type_distribution(beam.hypotheses, light_verbs)
        rows.append(
            {
                "instance_id": beam.instance_id,
                "entropy": value,
                "types": {t.value: counts[t] for t in frames.SemanticType if counts[t]},
            }
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    mean = sum(r["entropy"] for r in rows) / len(rows) if rows else 0.0
    print(f"{len(rows)} beams, mean entropy {mean:.4f} ({base})")
    _write_json(args.json, {"n": len(rows), "mean_entropy": mean, "rows": rows})
    return 0


def cmd_prefs(args: argparse.Namespace, config: Config) -> int:
    records = analysis.load_logprob_records(args.records)
    try:
        report = analysis.preference_report(records)
    except ValueError as err:
        print(str(err), file=sys.stderr)
        return 1
    print(report.to_text())
    _write_json(args.json, report.to_json())
    return 0


def cmd_challenge(args: argparse.Namespace, config: Config) -> int:
    items = analysis.load_challenge_items(args.items)
    beams = analysis.load_beams(args.beams)
    try:
        report = analysis.challenge_report(items, beams, config.light_verb_set())
    except ValueError as err:
        print(str(err), file=sys.stderr)
        return 1
    print(report.to_text())
    _write_json(args.json, report.to_json())
    return 0


def _build_service_state(args: argparse.Namespace, config: Config):
    store = service.AnnotationStore(args.store)
    seeds = None
    docs = None
    if args.corpus:
        corpus = _load_corpus_or_fail(args.corpus, config)
        instances, seeds = service.instances_from_corpus(corpus.instances)
    else:
        if not args.docs or not args.candidates:
            print("serve/export needs either --corpus or both --docs and --candidates", file=sys.stderr)
            raise SystemExit(2)
        docs = _read_jsonl(args.docs)
        candidates = [detector.Candidate.from_json(row) for row in _read_jsonl(args.candidates)]
        instances = service.instances_from_candidates(docs, candidates)
    return instances, docs, store, seeds


def cmd_serve(args: argparse.Namespace, config: Config) -> int:
    instances, docs, store, seeds = _build_service_state(args, config)
    assignments = None
    if args.assignments:
        with open(args.assignments, encoding="utf-8") as fh:
            assignments = json.load(fh)
    app = service.create_app(
        instances,
        docs,
        store,
        window_before=config.window_before,
        window_after=config.window_after,
        strict=args.strict,
        roles=config.roles(),
        seed_annotations=seeds,
        assignments=assignments,
    )
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_export(args: argparse.Namespace, config: Config) -> int:
    instances, _docs, store, seeds = _build_service_state(args, config)
    if seeds:
        for instance_id, frame_json in seeds:
            if store.get(instance_id, service.GOLD_ANNOTATOR).revision == 0:
                if frame_json is not None:
                    store.write(instance_id, service.GOLD_ANNOTATOR, 0, service.STATUS_ANNOTATED, True, frame_json)
                else:
                    store.write(instance_id, service.GOLD_ANNOTATOR, 0, service.STATUS_NON_SUPERLATIVE, False, None)
    lines = service.export_store(instances, store, config.roles(), args.annotator)
    with open(args.out, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
    print(f"exported {len(lines)} instances -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="supframes", description=__doc__)
    parser.add_argument("--config", help="key=value config file", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="find superlative candidates in documents")
    p.add_argument("--in", dest="in", help="documents JSONL ({id, text[, domain]})")
    p.add_argument("--text", help="plain-text file treated as one document")
    p.add_argument("--doc-id", default="doc", help="document id used with --text")
    p.add_argument("--out", required=True, help="candidates JSONL output")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("validate", help="validate a corpus file")
    p.add_argument("--in", dest="in", required=True)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="corpus statistics tables")
    p.add_argument("--in", dest="in", required=True)
    p.add_argument("--table", choices=["table1", "fig2", "fig3", "fig4", "all"], default="table1")
    p.add_argument("--json", help="write full stats JSON here")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("split", help="deterministic stratified splits")
    p.add_argument("--in", dest="in", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=None, help="default: config split_seed (13)")
    p.add_argument("--fractions", default=None, help="default: config split_fractions (0.8,0.1,0.1)")
    p.add_argument("--superlatives-only", action="store_true")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("score", help="score model predictions against gold")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--json", help="write report JSON here")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("iaa", help="inter-annotator agreement between two corpus files")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--sample", type=int, default=None)
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--json", help="write report JSON here")
    p.set_defaults(func=cmd_iaa)

    p = sub.add_parser("entropy", help="interpretation-type entropy of beam files")
    p.add_argument("--beams", required=True)
    p.add_argument("--base", choices=["nats", "bits"], default=None, help="default: config entropy_base (nats)")
    p.add_argument("--out", help="per-instance JSONL output")
    p.add_argument("--json", help="write summary JSON here")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("prefs", help="log-probability preference report")
    p.add_argument("--records", required=True)
    p.add_argument("--json", help="write report JSON here")
    p.set_defaults(func=cmd_prefs)

    p = sub.add_parser("challenge", help="ambiguity challenge-set report")
    p.add_argument("--items", required=True)
    p.add_argument("--beams", required=True)
    p.add_argument("--json", help="write report JSON here")
    p.set_defaults(func=cmd_challenge)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--corpus", help="serve a corpus file for (re-)annotation")
    p.add_argument("--docs", help="documents JSONL (with --candidates)")
    p.add_argument("--candidates", help="detector output JSONL (with --docs)")
    p.add_argument("--store", default=None, help="append-only journal path")
    p.add_argument("--assignments", default=None, help="JSON file {annotator: [instance ids]}")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8808)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="export an annotation store as corpus JSONL")
    p.add_argument("--corpus", help="instances source: corpus file")
    p.add_argument("--docs", help="instances source: documents JSONL")
    p.add_argument("--candidates", help="instances source: detector output JSONL")
    p.add_argument("--store", default=None, help="journal path")
    p.add_argument("--annotator", default=None, help="export this annotator only")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
    except (ValueError, FileNotFoundError, KeyError) as err:
        print(str(err), file=sys.stderr)
        return 2
    if getattr(args, "in", None) is None and args.command == "detect" and not args.text:
        print("detect needs --in or --text", file=sys.stderr)
        return 2
    try:
        return args.func(args, config)
    except FileNotFoundError as err:
        print(str(err), file=sys.stderr)
        return 2
    except ValueError as err:
        print(str(err), file=sys.stderr)
        return 1
    except SystemExit as err:
        return int(err.code) if err.code is not None else 0


if __name__ == "__main__":
    sys.exit(main())
