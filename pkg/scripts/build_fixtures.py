#!/usr/bin/env python3
"""Regenerate the committed test fixtures under data/fixtures/.

Everything is seeded, so reruns are byte-identical. The gold corpus has
its own builder (build_gold_corpus.py).
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from supframes import detector

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "data" / "fixtures"

WORDS = (
    "the a an big small red blue fish lake port city card people tourists "
    "students plants table mountain river language book review party cake "
    "quality size price value winter summer popular famous quiet loud old "
    "new ancient modern northern southern coastal rural best game season "
    "team player match recipe dinner road trip hotel room view garden"
).split()

ROLE_CHOICES = ["AGENT", "THEME", "PATIENT", "ASSET", "LOCATION", "TIME", "DESTINATION", "EVENTUALITY", "FOR", "OF"]
PREDICATES = ["PAY", "USE", "BUY", "PLAY", "CREATE", "OWN", "FIND", "CATCH", "VISIT", "BE_HUNGRY", "HAVE"]


def dump_jsonl(path: Path, rows: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    print(f"wrote {path.relative_to(ROOT)} ({len(rows)} lines)")


def phrase(rng: random.Random, lo: int = 1, hi: int = 4) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(lo, hi)))


def perturb(rng: random.Random, text: str) -> str:
    toks = text.split()
    action = rng.randint(0, 5)
    if action == 0 or not toks:
        return text  # identical
    if action == 1:
        toks = toks[:-1]  # drop
    elif action == 2:
        toks.insert(rng.randrange(len(toks) + 1), rng.choice(WORDS))
    elif action == 3:
        toks[rng.randrange(len(toks))] = rng.choice(WORDS)
    elif action == 4:
        toks = [t.upper() if rng.random() < 0.5 else t for t in toks]
        toks[-1] = toks[-1] + rng.choice([".", ",", "!"])
    else:
        toks = [rng.choice(WORDS) for _ in toks]  # likely disjoint
    return " ".join(toks)


def build_metric_pairs() -> None:
    rng = random.Random(20240501)
    rows = []
    specials = [
        ("identical words here", "identical words here"),
        ("gold has words", ""),
        ("", ""),
        ("completely different", "utterly distinct tokens"),
        ("the the the fish", "the fish fish"),
        ("Punct, here!", "punct here"),
    ]
    for gold, pred in specials:
        rows.append({"gold": gold, "pred": pred})
    while len(rows) < 50:
        gold = phrase(rng, 1, 6)
        rows.append({"gold": gold, "pred": perturb(rng, gold)})
    for i, row in enumerate(rows):
        n_args = rng.randint(0, 4)
        roles = [rng.choice(ROLE_CHOICES) for _ in range(n_args)]
        gold_args = [[r, phrase(rng, 1, 3)] for r in roles]
        pred_args = []
        for role, value in gold_args:
            draw = rng.random()
            if draw < 0.4:
                pred_args.append([role, value])
            elif draw < 0.7:
                pred_args.append([role, perturb(rng, value)])
            elif draw < 0.85:
                pred_args.append([rng.choice(ROLE_CHOICES), value])
            # else: dropped
        if rng.random() < 0.3:
            pred_args.append([rng.choice(ROLE_CHOICES), phrase(rng, 1, 2)])
        row["event_gold"] = {"predicate": rng.choice(PREDICATES), "args": gold_args}
        row["event_pred"] = {"predicate": rng.choice(PREDICATES), "args": pred_args}
        row["label_a"] = rng.choice(["x", "y", "z"])
        row["label_b"] = rng.choice(["x", "y", "z"]) if rng.random() < 0.5 else row["label_a"]
    dump_jsonl(FIXTURES / "metric_pairs.jsonl", rows)


def _iaa_instance(instance_id: str, domain: str, doc_text: str, sentence: str, trigger: str, frame: dict) -> dict:
    s0 = doc_text.index(sentence)
    t0 = doc_text.index(trigger, s0)
    return {
        "id": instance_id,
        "domain": domain,
        "doc_text": doc_text,
        "sentence_span": [s0, s0 + len(sentence)],
        "trigger_span": [t0, t0 + len(trigger)],
        "is_superlative": True,
        "frame": frame,
    }


def build_iaa_files() -> None:
    base = []
    eventive_specs = [
        ("largest", "CATCH(e, AGENT=Tom and his friends, THEME=fish, LOCATION=at the lake)", 2, "THEME", "size"),
        ("best", "PLAY(e, AGENT=the band members, THEME=solos)", 2, "THEME", "quality"),
        ("most", "PAY(e, AGENT=people, ASSET=Visa cards, LOCATION=in Romania)", 2, "ASSET", "popularity"),
        ("cheapest", "BUY(e, AGENT=tourists, THEME=rooms, TIME=in winter)", 2, "THEME", "price"),
    ]
    for i, (trig, cs, idx, role, prop) in enumerate(eventive_specs, start=1):
        sentence = f"They picked the {trig} one."
        doc = f"Some context first. {sentence}"
        base.append(
            _iaa_instance(
                f"iaa{i:02d}",
                "Wikipedia",
                doc,
                sentence,
                trig,
                {
                    "target": "the one",
                    "cs": cs,
                    "anchor": {"index": idx, "role": role},
                    "property": prop,
                    "orientation": "positive",
                    "rank": 1,
                    "implicit": True,
                    "amount": None,
                },
            )
        )
    nominal_specs = [
        ("tallest", "men OF=Europe", "height", "positive"),
        ("smallest", "fish", "size", "negative"),
        ("oldest", "buildings OF=the town", "age", "positive"),
        ("worst", "reviews", "quality", "negative"),
        ("biggest", "ports OF=Bulgaria", "size", "positive"),
        ("least", "rooms", "price", "negative"),
    ]
    for i, (trig, cs, prop, orient) in enumerate(nominal_specs, start=5):
        sentence = f"It was the {trig} around."
        doc = f"Background sentence. {sentence}"
        base.append(
            _iaa_instance(
                f"iaa{i:02d}",
                "Reviews",
                doc,
                sentence,
                trig,
                {
                    "target": "it",
                    "cs": cs,
                    "anchor": {"index": 0, "role": None},
                    "property": prop,
                    "orientation": orient,
                    "rank": 1,
                    "implicit": False,
                    "amount": None,
                },
            )
        )
    rows_a = base
    rows_b = json.loads(json.dumps(base))
    # single disagreement: annotator B flips one orientation (iaa05 positive -> negative)
    rows_b[4]["frame"]["orientation"] = "negative"
    dump_jsonl(FIXTURES / "iaa_a.jsonl", rows_a)
    dump_jsonl(FIXTURES / "iaa_b.jsonl", rows_b)


ADJ_TRIGGERS = [
    "tallest", "largest", "smallest", "biggest", "funniest", "wisest", "simplest",
    "cheapest", "oldest", "youngest", "fastest", "slowest", "strongest", "weakest",
    "brightest", "darkest", "happiest", "angriest", "hungriest", "latest",
    "cleanest", "dirtiest", "easiest", "hardest", "safest", "richest", "poorest",
    "deepest", "widest", "narrowest", "heaviest", "lightest", "quietest",
    "loudest", "sweetest", "coldest", "warmest", "driest", "busiest", "closest",
]
IRREGULAR_TRIGGERS = ["best", "worst", "eldest", "furthest", "farthest"]
MOST_LEAST_ADJ = [
    "most expensive", "most popular", "most famous", "least expensive",
    "most beautiful", "most comfortable", "least comfortable", "most common",
    "most important", "least likely", "most interesting", "most valuable",
]
ADVERBIAL = ["Most commonly", "Most frequently", "Most recently", "Most often"]
LEXICAL_TRIGGERS = ["main", "top", "favorite", "primary", "principal", "foremost", "utmost"]

NOUNS = ["fish", "port", "city", "building", "river", "road", "bridge", "team",
         "player", "song", "book", "recipe", "hotel", "room", "garden", "market"]

NO_TRIGGER = [
    "The fish swam in the lake.",
    "We walked through the forest.",
    "Interest rates rose again.",
    "The test was honest and fair.",
    "A guest arrived from the west.",
    "They continued without rest.",
]


def build_detector_sentences() -> None:
    rng = random.Random(20240502)
    rows = []

    def add(text: str, triggers: list[str], must_filter: list[tuple[str, str]] | None = None):
        spans = []
        cursor = 0
        for trig in triggers:
            start = text.index(trig, cursor)
            spans.append({"start": start, "end": start + len(trig), "surface": trig})
            cursor = start + len(trig)
        filters = []
        for trig, reason in must_filter or []:
            start = text.index(trig)
            filters.append({"start": start, "end": start + len(trig), "surface": trig, "reason": reason})
        rows.append({"text": text, "triggers": spans, "must_filter": filters})

    for trig in ADJ_TRIGGERS:
        noun = rng.choice(NOUNS)
        add(f"It was the {trig} {noun} in the region.", [trig])
        add(f"Everyone agreed that their {noun} was the {trig}.", [trig])
    for trig in IRREGULAR_TRIGGERS:
        add(f"This is the {trig} {rng.choice(NOUNS)} we have seen.", [trig])
        add(f"Of all of them, hers was {trig}.", [trig])
    for pair in MOST_LEAST_ADJ:
        head = pair.split()[0]
        add(f"She chose the {pair} {rng.choice(NOUNS)}.", [head])
    for adv in ADVERBIAL:
        head = adv.split()[0]
        add(f"{adv}, psychologists use paper-and-pencil surveys.", [head])
    for trig in LEXICAL_TRIGGERS:
        add(f"The {trig} reason was never written down.", [trig])
    add("Creole is the second most-spoken language.", ["most"])
    add("He caught the largest fish and the smallest crab.", ["largest", "smallest"])
    add("The human is broadest at the shoulders.", ["broadest"])
    # proportional quantifiers: flagged but still detected
    for n in ["5", "ten", "40", "a dozen", "three", "six"]:
        add(f"There were at least {n} people there.", ["least"], [("least", "proportional-quantifier")])
        add(f"Bring at most {n} cards with you.", ["most"], [("most", "proportional-quantifier")])
    add("Most of the students left early.", ["Most"], [("Most", "partitive-quantifier")])
    add("Most of their luggage was lost.", ["Most"], [("Most", "partitive-quantifier")])
    add("It works at best occasionally.", ["best"], [("best", "idiom")])
    add("At worst, the delay doubles.", ["worst"], [("worst", "idiom")])
    for text in NO_TRIGGER:
        rows.append({"text": text, "triggers": [], "must_filter": []})
    while len(rows) < 220:
        trig = rng.choice(ADJ_TRIGGERS + IRREGULAR_TRIGGERS)
        noun = rng.choice(NOUNS)
        text = f"The {trig} {noun} stood by the {rng.choice(NOUNS)}."
        start = text.index(trig)
        rows.append(
            {
                "text": text,
                "triggers": [{"start": start, "end": start + len(trig), "surface": trig}],
                "must_filter": [],
            }
        )
    dump_jsonl(FIXTURES / "detector_sentences.jsonl", rows)


CHALLENGE_TEMPLATES = [
    ("John put the tallest plant on the table.", "tallest", "plants",
     "Tom, John and Mary all brought plants which they put on the table.",
     "PUT(e, AGENT=Tom & John & Mary, PATIENT=plants, DESTINATION=table)",
     "Plants vary wildly in height around the world."),
    ("She gave me the most expensive present.", "most", "presents",
     "My friends gave me presents on my birthday.",
     "GIVE(e, AGENT=my friends, THEME=presents, TIME=on my birthday)",
     "Some presents cost more than a car."),
    ("Paul picked the ripest apple.", "ripest", "apples",
     "The children picked apples in the orchard all morning.",
     "PICK(e, AGENT=the children, THEME=apples, LOCATION=in the orchard)",
     "Apples ripen at very different speeds."),
    ("Mia sang the longest song.", "longest", "songs",
     "Each contestant sang songs at the festival.",
     "SING(e, AGENT=the contestants, THEME=songs, LOCATION=at the festival)",
     "Songs can last anywhere from seconds to hours."),
    ("Ben bought the cheapest ticket.", "cheapest", "tickets",
     "The classmates bought tickets for the night train.",
     "BUY(e, AGENT=the classmates, THEME=tickets, FOR=the night train)",
     "Tickets are priced differently across the world."),
    ("Ana cooked the spiciest dish.", "spiciest", "dishes",
     "The neighbours cooked dishes for the street fair.",
     "COOK(e, AGENT=the neighbours, THEME=dishes, FOR=the street fair)",
     "Dishes range from mild to burning hot."),
    ("Leo drew the funniest poster.", "funniest", "posters",
     "The pupils drew posters for the school contest.",
     "DRAW(e, AGENT=the pupils, THEME=posters, FOR=the school contest)",
     "Posters can be witty or plain."),
    ("Sara planted the rarest flower.", "rarest", "flowers",
     "The club members planted flowers along the path.",
     "PLANT(e, AGENT=the club members, THEME=flowers, LOCATION=along the path)",
     "Flowers differ greatly in rarity."),
    ("Tom carried the heaviest box.", "heaviest", "boxes",
     "The movers carried boxes up the stairs.",
     "CARRY(e, AGENT=the movers, THEME=boxes, DESTINATION=up the stairs)",
     "Boxes come in every weight."),
    ("Nina wrote the shortest story.", "shortest", "stories",
     "The students wrote stories during the workshop.",
     "WRITE(e, AGENT=the students, THEME=stories, TIME=during the workshop)",
     "Stories can be a single line long."),
    ("Omar folded the smallest crane.", "smallest", "cranes",
     "The visitors folded paper cranes at the museum.",
     "FOLD(e, AGENT=the visitors, THEME=paper cranes, LOCATION=at the museum)",
     "Cranes can be folded at any size."),
    ("Ruth climbed the steepest hill.", "steepest", "hills",
     "The hikers climbed hills behind the village.",
     "CLIMB(e, AGENT=the hikers, THEME=hills, LOCATION=behind the village)",
     "Hills vary in steepness everywhere."),
    ("Igor fixed the oldest clock.", "oldest", "clocks",
     "The apprentices fixed clocks in the workshop.",
     "FIX(e, AGENT=the apprentices, THEME=clocks, LOCATION=in the workshop)",
     "Clocks can be centuries old."),
    ("Mara tasted the sweetest grape.", "sweetest", "grapes",
     "The pickers tasted grapes from the vineyard.",
     "TASTE(e, AGENT=the pickers, THEME=grapes, SOURCE=from the vineyard)",
     "Grapes differ in sweetness by variety."),
    ("Finn threw the farthest stone.", "farthest", "stones",
     "The kids threw stones across the pond.",
     "THROW(e, AGENT=the kids, THEME=stones, TRAJECTORY=across the pond)",
     "Stones can be thrown surprisingly far."),
    ("Lena chose the brightest lamp.", "brightest", "lamps",
     "The designers chose lamps for the new office.",
     "CHOOSE(e, AGENT=the designers, THEME=lamps, FOR=the new office)",
     "Lamps range from dim to dazzling."),
    ("Karl read the thickest novel.", "thickest", "novels",
     "The members read novels for the book club.",
     "READ(e, AGENT=the members, THEME=novels, FOR=the book club)",
     "Novels can be thousands of pages."),
    ("Ada solved the hardest puzzle.", "hardest", "puzzles",
     "The players solved puzzles at the tournament.",
     "SOLVE(e, AGENT=the players, THEME=puzzles, LOCATION=at the tournament)",
     "Puzzles span every difficulty."),
    ("Noor painted the widest mural.", "widest", "murals",
     "The artists painted murals on the station wall.",
     "PAINT(e, AGENT=the artists, THEME=murals, LOCATION=on the station wall)",
     "Murals can cover entire buildings."),
    ("Elio grew the largest pumpkin.", "largest", "pumpkins",
     "The farmers grew pumpkins for the county fair.",
     "GROW(e, AGENT=the farmers, THEME=pumpkins, FOR=the county fair)",
     "Pumpkins can weigh over a ton."),
]


def build_challenge_set() -> None:
    rows = []
    for i, (sentence, trigger, noun, rel_ctx, rel_cs, abs_ctx) in enumerate(
        CHALLENGE_TEMPLATES, start=1
    ):
        item_id = f"ch{i:02d}"
        rows.append(
            {
                "id": item_id,
                "sentence": sentence,
                "trigger": trigger,
                "contexts": [
                    {"id": f"{item_id}:abs", "context": abs_ctx, "reading": "absolute", "cs": noun},
                    {"id": f"{item_id}:rel", "context": rel_ctx, "reading": "relative", "cs": rel_cs},
                ],
            }
        )
    dump_jsonl(FIXTURES / "challenge_set.jsonl", rows)

    # Companion beam file: a plausible model that always solves absolute
    # contexts and misses some relative ones below rank 1.
    rng = random.Random(20240503)
    beams = []
    for row in rows:
        noun = row["contexts"][0]["cs"]
        rel_cs = row["contexts"][1]["cs"]
        distractors = [
            f"{noun} OF=the area",
            f"HAVE(e, AGENT=people, THEME={noun})",
            rng.choice(NOUNS),
            f"{noun} LOCATION=nearby",
        ]
        beams.append({"instance_id": row["contexts"][0]["id"], "hypotheses": [noun] + distractors})
        draw = rng.random()
        if draw < 0.6:
            hyps = [rel_cs] + distractors
        elif draw < 0.85:
            hyps = distractors[:2] + [rel_cs] + distractors[2:]
        else:
            hyps = [noun] + distractors
        beams.append({"instance_id": row["contexts"][1]["id"], "hypotheses": hyps[:5]})
    dump_jsonl(FIXTURES / "challenge_beams.jsonl", beams)


def build_logprob_records() -> None:
    rng = random.Random(20240504)
    rows = []
    completion_a = "Mary & Tom"
    completion_b = "BE_ANGRY(e, AGENT=whole party, PATIENT=Mary, FOR=forgetting the cake)"

    def record(instance_id: str, condition: str, completion: str, mean: float, gold: bool) -> dict:
        length = rng.randint(3, 7)
        jitter = [rng.uniform(-0.3, 0.3) for _ in range(length)]
        jitter = [j - sum(jitter) / length for j in jitter]
        logprobs = [round(mean + j, 6) for j in jitter]
        return {
            "instance_id": instance_id,
            "condition": condition,
            "completion": completion,
            "token_logprobs": logprobs,
            "gold": gold,
        }

    for i in range(1, 11):
        instance_id = f"amb{i:02d}"
        base = -2.0 - rng.uniform(0, 0.5)
        small = rng.uniform(0.01, 0.08)
        rows.append(record(instance_id, "no-context", completion_a, base + small / 2, True))
        rows.append(record(instance_id, "no-context", completion_b, base - small / 2, False))
        gap_1 = rng.uniform(0.9, 1.4)
        rows.append(record(instance_id, "context-1", completion_a, base, True))
        rows.append(record(instance_id, "context-1", completion_b, base - gap_1, False))
        gap_2 = rng.uniform(0.9, 1.6)
        rows.append(record(instance_id, "context-2", completion_a, base - gap_2, False))
        rows.append(record(instance_id, "context-2", completion_b, base, True))
    dump_jsonl(FIXTURES / "logprob_records.jsonl", rows)


E2E_DOCS = [
    ("Wikipedia", "Varna handles much of the country's sea trade. Varna is the largest Bulgarian port.",
     "largest", "ports OF=Bulgaria", "Varna", "size", "positive", 0, None, True, 1),
    ("Wikipedia", "The tower was finished in 1889. It remains the tallest structure in the city.",
     "tallest", "structures OF=the city", "the tower", "height", "positive", 0, None, False, 1),
    ("Reviews", "I tried every pizza place in town. This was the cheapest meal I found.",
     "cheapest", "FIND(e, AGENT=I, THEME=meals, LOCATION=in town)", "this meal", "price", "negative", 2, "THEME", True, 1),
    ("Reviews", "We compared dozens of kettles. This kettle is the fastest.",
     "fastest", "kettles", "this kettle", "speed", "positive", 0, None, False, 1),
    ("Dialogue", "A: Which route should we take?\nB: The second shortest one, please.",
     "shortest", "routes", "the second one", "length", "negative", 0, None, False, 2),
    ("Dialogue", "A: The garden looks great.\nB: Our roses grew best in spring.",
     "best", "GROW(e, THEME=our roses, TIME=in spring)", "our roses in spring", "quality", "positive", 1, "THEME", True, 1),
    ("Literature", "The old race of the mountains soared above. They were the greatest of all birds.",
     "greatest", "birds", "the old race of the mountains", "greatness", "positive", 0, None, True, 1),
    ("Literature", "Bilbo loved his pantry. It held the finest cheese in the Shire.",
     "finest", "cheeses OF=the Shire", "the cheese", "quality", "positive", 0, None, False, 1),
    ("Wikinews", "After Spanish, Creole is the second most spoken language.",
     "most", "languages OF=Cuba", "Creole", "frequency", "positive", 0, None, True, 2),
    ("Wikinews", "The summit gathered leaders from many countries. The oldest delegate spoke first.",
     "oldest", "delegates OF=the summit", "the first speaker", "age", "positive", 0, None, True, 1),
]

E2E_NON_SUP = [
    ("Reviews", "The manual says to charge it for at least two hours.", "least"),
    ("Reviews", "You should order at most three sizes up.", "most"),
    ("Dialogue", "A: How long?\nB: At least ten minutes.", "least"),
    ("Dialogue", "A: Can I bring guests?\nB: At most two, please.", "most"),
    ("Wikipedia", "Most of the delegates left before the vote.", "Most"),
    ("Wikinews", "Most of the villages lost power overnight.", "Most"),
    ("Literature", "At best, the map was a rough guess.", "best"),
    ("Wikipedia", "At worst, the repairs take a month.", "worst"),
    ("Wikinews", "Officials counted at least forty ships.", "least"),
    ("Literature", "He slept for at most an hour.", "most"),
]


def build_e2e_docs() -> None:
    docs = []
    annotations = {}
    doc_no = 0
    for domain, text, trigger, cs, target, prop, orientation, anchor_index, anchor_role, implicit, rank in E2E_DOCS:
        doc_no += 1
        doc_id = f"e2e{doc_no:02d}"
        docs.append({"id": doc_id, "domain": domain, "text": text})
        cands = [c for c in detector.detect_document(doc_id, text) if c.surface.lower() == trigger.lower()]
        assert len(cands) == 1, (doc_id, trigger, [c.surface for c in detector.detect_document(doc_id, text)])
        cand = cands[0]
        key = f"{doc_id}:{cand.sentence_index}:{cand.start}"
        annotations[key] = {
            "is_superlative": True,
            "frame": {
                "target": target,
                "cs": cs,
                "anchor": {"index": anchor_index, "role": anchor_role},
                "property": prop,
                "orientation": orientation,
                "rank": rank,
                "implicit": implicit,
                "amount": None,
            },
        }
    for domain, text, trigger in E2E_NON_SUP:
        doc_no += 1
        doc_id = f"e2e{doc_no:02d}"
        docs.append({"id": doc_id, "domain": domain, "text": text})
        cands = [c for c in detector.detect_document(doc_id, text) if c.surface == trigger]
        assert len(cands) == 1, (doc_id, trigger)
        cand = cands[0]
        key = f"{doc_id}:{cand.sentence_index}:{cand.start}"
        annotations[key] = {"is_superlative": False}
    dump_jsonl(FIXTURES / "e2e_docs.jsonl", docs)
    with open(FIXTURES / "e2e_annotations.json", "w", encoding="utf-8") as fh:
        json.dump(annotations, fh, indent=1, ensure_ascii=False)
        fh.write("\n")
    print(f"wrote data/fixtures/e2e_annotations.json ({len(annotations)} entries)")


def build_np_relations() -> None:
    rows = [
        "largest single language\tof\tWikipedia editions",
        "tallest structure\tin\tthe city of Paris",
        "oldest delegate\tof\tthe summit in Geneva",
        "most spoken language\tof\tCuba",
    ]
    path = FIXTURES / "np_relations.tsv"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    print(f"wrote {path.relative_to(ROOT)} ({len(rows)} rows)")


def main() -> None:
    build_metric_pairs()
    build_iaa_files()
    build_detector_sentences()
    build_challenge_set()
    build_logprob_records()
    build_e2e_docs()
    build_np_relations()


if __name__ == "__main__":
    main()
