import io
import json

import pytest
from hypothesis import given
import hypothesis.strategies as st

from supframes.corpus import (
    AnnotatedInstance,
    compute_stats,
    export_corpus,
    implicit_arg_rate,
    instance_from_json,
    instance_to_json,
    load_corpus,
    load_relations,
    normalize_for_match,
    np_relation_overlap,
    split_corpus,
)
from supframes.frames import (
    Anchor,
    EventExpression,
    NominalExpression,
    Orientation,
    SuperlativeFrame,
)


def make_instance(
    instance_id="x1",
    domain="Wikipedia",
    doc_text="Extra context here. The largest port is Varna.",
    sentence="The largest port is Varna.",
    trigger="largest",
    cs=None,
    implicit=False,
    is_superlative=True,
):
    s0 = doc_text.index(sentence)
    t0 = doc_text.index(trigger, s0)
    frame = None
    if is_superlative:
        frame = SuperlativeFrame(
            target=NominalExpression("Varna"),
            cs=cs if cs is not None else NominalExpression("ports"),
            anchor=Anchor(0) if not isinstance(cs, EventExpression) else Anchor(1, cs.args[0][0]),
            property="size",
            orientation=Orientation.POSITIVE,
            implicit=implicit,
            trigger=trigger,
        )
    return AnnotatedInstance(
        instance_id=instance_id,
        domain=domain,
        doc_text=doc_text,
        sentence_span=(s0, s0 + len(sentence)),
        trigger_span=(t0, t0 + len(trigger)),
        is_superlative=is_superlative,
        frame=frame,
    )


class TestLoad:
    def test_empty_file(self):
        corpus = load_corpus(io.StringIO(""))
        assert corpus.instances == []
        assert corpus.report.ok()

    def test_malformed_json_line(self):
        corpus = load_corpus(io.StringIO('{"id": 1\nnot json\n'))
        lines = [line for line, _ in corpus.report.errors]
        assert lines == [1, 2]

    def test_superlative_without_frame(self):
        record = instance_to_json(make_instance())
        record["frame"] = None
        corpus = load_corpus(io.StringIO(json.dumps(record) + "\n"))
        assert corpus.instances == []
        assert any("requires a frame" in msg for _line, msg in corpus.report.errors)

    def test_valid_line(self):
        record = instance_to_json(make_instance())
        corpus = load_corpus(io.StringIO(json.dumps(record) + "\n"))
        assert corpus.report.ok()
        assert len(corpus) == 1
        assert corpus.instances[0].frame.trigger == "largest"

    def test_unknown_domain(self):
        record = instance_to_json(make_instance(domain="Blog"))
        corpus = load_corpus(io.StringIO(json.dumps(record) + "\n"))
        assert any("unknown domain" in msg for _line, msg in corpus.report.errors)

    def test_bad_span(self):
        record = instance_to_json(make_instance())
        record["trigger_span"] = [0, 5]
        record["sentence_span"] = [10, 20]
        corpus = load_corpus(io.StringIO(json.dumps(record) + "\n"))
        assert any("trigger_span" in msg for _line, msg in corpus.report.errors)

    def test_export_load_identity(self, tmp_path):
        instances = [
            make_instance("a"),
            make_instance("b", is_superlative=False),
            make_instance(
                "c",
                cs=EventExpression("CATCH", (("AGENT", "Tom"), ("THEME", "fish"))),
                implicit=True,
            ),
        ]
        path = tmp_path / "c.jsonl"
        export_corpus(instances, str(path))
        loaded = load_corpus(str(path))
        assert loaded.report.ok()
        assert loaded.instances == instances
        # second round trip is byte-identical
        path2 = tmp_path / "c2.jsonl"
        export_corpus(loaded.instances, str(path2))
        assert path.read_text() == path2.read_text()


class TestStats:
    def test_single_instance(self):
        stats = compute_stats([make_instance()])
        assert stats.per_domain["Wikipedia"].as_tuple() == (1, 0, 0, 0)
        assert stats.per_domain["Reviews"].as_tuple() == (0, 0, 0, 0)
        assert stats.totals.as_tuple() == (1, 0, 0, 0)

    def test_counts(self):
        instances = [
            make_instance("a"),
            make_instance("b", is_superlative=False),
            make_instance(
                "c",
                domain="Reviews",
                cs=EventExpression("CATCH", (("AGENT", "Tom"),)),
                implicit=True,
            ),
        ]
        stats = compute_stats(instances)
        assert stats.per_domain["Wikipedia"].as_tuple() == (1, 1, 0, 0)
        assert stats.per_domain["Reviews"].as_tuple() == (1, 0, 1, 1)
        assert stats.totals.as_tuple() == (2, 1, 1, 1)
        assert stats.predicate_counts == {"CATCH": 1}

    def test_totals_equal_domain_sums(self):
        instances = [make_instance(str(i), domain=d) for i, d in enumerate(
            ["Wikipedia", "Reviews", "Reviews", "Dialogue", "Literature", "Wikinews"]
        )]
        stats = compute_stats(instances)
        for pos in range(4):
            assert stats.totals.as_tuple()[pos] == sum(
                c.as_tuple()[pos] for c in stats.per_domain.values()
            )


class TestSplit:
    def test_ten_instances(self):
        instances = [make_instance(f"i{i}") for i in range(10)]
        splits = split_corpus(instances, seed=7)
        assert (len(splits["train"]), len(splits["dev"]), len(splits["test"])) == (8, 1, 1)

    def test_floor_rule(self):
        instances = [make_instance(f"i{i}") for i in range(23)]
        splits = split_corpus(instances, seed=7)
        assert (len(splits["train"]), len(splits["dev"]), len(splits["test"])) == (19, 2, 2)

    def test_deterministic(self):
        instances = [make_instance(f"i{i}") for i in range(30)]
        a = split_corpus(instances, seed=3)
        b = split_corpus(instances, seed=3)
        assert {k: [i.instance_id for i in v] for k, v in a.items()} == {
            k: [i.instance_id for i in v] for k, v in b.items()
        }

    def test_seed_changes_split(self):
        instances = [make_instance(f"i{i}") for i in range(30)]
        a = split_corpus(instances, seed=3)
        b = split_corpus(instances, seed=4)
        assert [i.instance_id for i in a["dev"]] != [i.instance_id for i in b["dev"]]

    def test_bad_fractions(self):
        with pytest.raises(ValueError):
            split_corpus([make_instance()], fractions=(0.5, 0.2, 0.2))

    @given(st.lists(st.sampled_from(["Wikipedia", "Reviews", "Dialogue"]), min_size=1, max_size=40), st.integers(0, 999))
    def test_exact_partition(self, domains, seed):
        instances = [make_instance(f"i{i}", domain=d) for i, d in enumerate(domains)]
        splits = split_corpus(instances, seed=seed)
        ids = [i.instance_id for part in splits.values() for i in part]
        assert sorted(ids) == sorted(i.instance_id for i in instances)
        assert len(set(ids)) == len(ids)
        by_domain = {}
        for inst in instances:
            by_domain[inst.domain] = by_domain.get(inst.domain, 0) + 1
        for part, fraction in (("dev", 0.1), ("test", 0.1)):
            for domain, n in by_domain.items():
                got = sum(1 for i in splits[part] if i.domain == domain)
                assert got == int(n * fraction)

    def test_superlatives_only(self):
        instances = [make_instance(f"i{i}") for i in range(10)]
        instances += [make_instance(f"n{i}", is_superlative=False) for i in range(5)]
        splits = split_corpus(instances, superlatives_only=True)
        total = sum(len(v) for v in splits.values())
        assert total == 10


EVENTIVE_DOC = (
    "Researchers favour observational studies. "
    "Most commonly, psychologists use paper-and-pencil surveys."
)


def eventive_instance(instance_id, args, implicit=True):
    sentence = "Most commonly, psychologists use paper-and-pencil surveys."
    return make_instance(
        instance_id,
        doc_text=EVENTIVE_DOC,
        sentence=sentence,
        trigger="Most",
        cs=EventExpression("USE", tuple(args)),
        implicit=implicit,
    )


class TestImplicitArgRate:
    def test_context_only_argument_counted(self):
        inst = eventive_instance(
            "a",
            [("AGENT", "psychologists"), ("THEME", "surveys"), ("EVENTUALITY", "observational studies")],
        )
        assert implicit_arg_rate([inst]) == 1.0

    def test_no_eventive_instances(self):
        assert implicit_arg_rate([make_instance()]) is None

    def test_two_of_three(self):
        instances = [
            eventive_instance("a", [("EVENTUALITY", "observational studies")]),
            eventive_instance("b", [("EVENTUALITY", "observational studies")]),
            eventive_instance("c", [("AGENT", "psychologists")]),
        ]
        assert implicit_arg_rate(instances) == pytest.approx(2 / 3)

    def test_monotone_numerator(self):
        base = [eventive_instance("a", [("AGENT", "psychologists")])]
        with_hit = base + [eventive_instance("b", [("EVENTUALITY", "observational studies")])]
        assert implicit_arg_rate(with_hit) >= 0.0
        assert implicit_arg_rate(with_hit) * 2 >= implicit_arg_rate(base) * 1


class TestNormalization:
    def test_basic(self):
        assert normalize_for_match("  The Ancient, World! ") == "the ancient world"

    def test_substring_rule_is_plain(self):
        assert "port" in normalize_for_match("an important city")


WIKI_DOC = (
    "English is one of many Wikipedia editions. "
    "The largest single language is English, which has 2.3 million articles."
)


class TestNpRelationOverlap:
    def wiki_instance(self, instance_id="w1", restriction="Wikipedia"):
        sentence = "The largest single language is English, which has 2.3 million articles."
        return make_instance(
            instance_id,
            domain="Wikinews",
            doc_text=WIKI_DOC,
            sentence=sentence,
            trigger="largest",
            cs=NominalExpression("single languages", (("OF", restriction),)),
            implicit=True,
        )

    def test_match(self):
        relations = [("largest single language", "of", "Wikipedia editions")]
        assert np_relation_overlap([self.wiki_instance()], relations) == 1.0

    def test_empty_relation_file(self):
        assert np_relation_overlap([self.wiki_instance()], []) == 0.0

    def test_one_of_four(self):
        instances = [self.wiki_instance("w1")] + [
            self.wiki_instance(f"w{i}", restriction="the archipelago") for i in (2, 3, 4)
        ]
        relations = [("largest single language", "of", "Wikipedia editions")]
        assert np_relation_overlap(instances, relations) == 0.25

    def test_load_relations(self, tmp_path):
        path = tmp_path / "rel.tsv"
        path.write_text("a\tof\tb\n# comment\nc\tin\td\n")
        assert load_relations(str(path)) == [("a", "of", "b"), ("c", "in", "d")]

    def test_malformed_relation_row(self, tmp_path):
        path = tmp_path / "rel.tsv"
        path.write_text("only two\tfields\n")
        with pytest.raises(ValueError):
            load_relations(str(path))


class TestJsonRoundTrip:
    def test_instance_json_round_trip(self):
        inst = make_instance(
            cs=EventExpression("CATCH", (("AGENT", "Tom"), ("THEME", "fish"))),
            implicit=True,
        )
        assert instance_from_json(instance_to_json(inst)) == inst
