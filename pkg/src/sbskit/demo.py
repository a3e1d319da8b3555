"""Seeded generator for the bundled synthetic job-posting corpus.

Postings are assembled from template sentences, a long tail of invented
filler words and construct keywords from the bundled lexicon. Teamwork
keywords are salted most heavily and always next to rare words, so that
construct should come out on top. Two marker words are planted at fixed
document counts for threshold checks: ``kaizen`` in exactly 2 postings
(1% of 200) and ``heijunka`` in exactly 1.

    python -m sbskit.demo out.jsonl
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
from importlib import resources

from .constructs import load_default_lexicon
from .corpus import TABLE1_KEYWORDS, Area
from .textprep import stem

N_DOCS = 200
SEED = 20231
N_FILLER = 2300
TEAMWORK = "Teamwork/Citizenship"
MARKER_TWO = "kaizen"
MARKER_ONE = "heijunka"

_DOMAIN = """
inventory warehouse supplier procurement forecasting quality lean kpi erp sap
vendor freight shipment sourcing demand capacity throughput budget compliance
audit reporting analytics dashboard excel forecast replenishment fulfillment
carrier customs import export packaging assembly equipment machinery tooling
engineering lab chemistry pharmaceutical automotive aerospace
retail grocery ecommerce customer client stakeholder contract negotiation
pricing cost savings margin revenue headcount shift overtime weekend travel
certification degree bachelor master diploma experience years background
salary bonus pension insurance healthcare vacation leave wellbeing benefits
diversity inclusion equal opportunity employer gender disability veteran
office site plant facility region country global international remote hybrid
forklift pallet dock yard fleet truck rail ocean air port terminal hub
software system database platform tool application cloud digital data
metrics analysis review process standard procedure policy regulation iso
hazard incident ppe inspection calibration repair spare parts
""".split()

_ROLES = """
manager coordinator specialist analyst engineer supervisor planner buyer
technician director officer associate consultant administrator
""".split()

_TEMPLATES = [
    "Our {d} group needs a {role} with {kw} who can work with {f} and {f}.",
    "You will support {f} {d} through {kw} and daily {f} routines.",
    "The ideal {role} shows {kw} in {f} {d} projects.",
    "We value {kw} because {f} {d} depends on {f}.",
    "Candidates bring {kw}, {f} exposure and {d} insight.",
    "This {role} drives {kw} across {f} and {d} {f}.",
    "Experience with {d} {f} and {kw} is preferred.",
    "Expect {kw} at every {f} {d} review.",
]

_FILLER_SENTENCES = [
    "The {role} reports to the {d} {role}.",
    "We offer {d} {d} and {f} {f}.",
    "Daily work covers {d}, {f} and {f} {d}.",
    "Familiarity with {f} {d} tools helps.",
    "The {d} site handles {f} {f} {d}.",
]

_SYLLABLES = [a + b for a in "bdfgklmnprstvz" for b in "aeiou"]


def _pseudo_words(rng: random.Random, n: int, banned_stems: set[str], banned_prefixes: tuple[str, ...]) -> list[str]:
    words: list[str] = []
    seen: set[str] = set()
    while len(words) < n:
        w = "".join(rng.choice(_SYLLABLES) for _ in range(rng.choice((2, 3, 3, 4))))
        s = stem(w)
        if s in seen or s in banned_stems or w.startswith(banned_prefixes):
            continue
        seen.add(s)
        words.append(w)
    return words


def _surface_terms(lexicon) -> dict[str, list[str]]:
    """Plain words and phrases to salt per construct; wildcards get a sample expansion."""
    expansions = {"grow": ["growth", "growing"], "troubleshoot": ["troubleshooting", "troubleshoot"]}
    out = {}
    for name, terms in lexicon.constructs.items():
        surfaces = []
        for t in terms:
            if t.wildcard:
                surfaces.extend(expansions.get(t.key, [t.key]))
            else:
                surfaces.append(t.raw)
        out[name] = surfaces
    return out


def generate(n_docs: int = N_DOCS, seed: int = SEED) -> list[dict]:
    rng = random.Random(seed)
    lexicon = load_default_lexicon()
    salts = _surface_terms(lexicon)
    keys = {t.key for ts in lexicon.constructs.values() for t in ts}
    table1 = {stem(w.casefold()) for kws in TABLE1_KEYWORDS.values() for kw in kws for w in kw.split()}
    banned = keys | table1 | {stem(MARKER_ONE), stem(MARKER_TWO)}
    prefixes = tuple(t.key for ts in lexicon.constructs.values() for t in ts if t.wildcard)

    domain = [w for w in _DOMAIN if stem(w) not in banned and not w.startswith(prefixes)]
    roles = [w for w in _ROLES if stem(w) not in banned]
    assert all(w.isalpha() for w in domain + roles)
    filler = _pseudo_words(rng, N_FILLER, banned | {stem(w) for w in domain + roles}, prefixes)
    # Zipf-like draw over the filler tail
    weights = [1.0 / (rank + 20) for rank in range(len(filler))]
    cum = list(itertools.accumulate(weights))

    def f():
        return rng.choices(filler, cum_weights=cum)[0]

    def fill(template: str, kw: str = "") -> str:
        out = template
        while "{f}" in out:
            out = out.replace("{f}", f(), 1)
        while "{d}" in out:
            out = out.replace("{d}", rng.choice(domain), 1)
        while "{role}" in out:
            out = out.replace("{role}", rng.choice(roles), 1)
        return out.replace("{kw}", kw)

    others = [c for c in lexicon.names if c != TEAMWORK]
    regions = ["europe"] * 80 + ["north_america"] * 70 + ["rest_of_world"] * 50
    sizes = ["small"] * 80 + ["medium"] * 50 + ["big"] * 70
    seniority = ["minimum"] * 70 + ["medium"] * 80 + ["high"] * 50
    for seq in (regions, sizes, seniority):
        rng.shuffle(seq)
    two = set(rng.sample(range(n_docs), 2))
    one = rng.choice(sorted(set(range(n_docs)) - two))

    docs = []
    for i in range(n_docs):
        area = Area.OPERATIONS if i % 2 == 0 else Area.SUPPLY_CHAIN
        area_kw = rng.choice(TABLE1_KEYWORDS[area])
        sentences = [f"{fill('{role}')} wanted for {area_kw}.".capitalize()]
        # construct picks: teamwork six times, then a rotating sample of the rest
        picks = [TEAMWORK] * 6
        picks += [others[(i + k * 9) % len(others)] for k in range(3)]
        picks += rng.sample(others, 5)
        rng.shuffle(picks)
        for construct in picks:
            kw = rng.choice(salts[construct])
            sentences.append(fill(rng.choice(_TEMPLATES), kw).capitalize())
            if rng.random() < 0.6:
                sentences.append(fill(rng.choice(_FILLER_SENTENCES)).capitalize())
        sentences.append(f"This {area_kw.lower()} role sits in our {rng.choice(domain)} unit.")
        if i in two:
            sentences.append(f"We run {MARKER_TWO} events monthly.")
        if i == one:
            sentences.append(f"We apply {MARKER_ONE} levelling.")
        docs.append(
            {
                "id": f"demo-{i:03d}",
                "text": " ".join(sentences),
                "area": area.value,
                "region": regions[i],
                "org_size": sizes[i],
                "seniority": seniority[i],
            }
        )
    return docs


def to_jsonl(docs: list[dict]) -> str:
    return "".join(json.dumps(d, ensure_ascii=False, sort_keys=True) + "\n" for d in docs)


def bundled_corpus_path():
    return resources.files("sbskit.data").joinpath("demo_corpus.jsonl")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Write the synthetic demo corpus as JSONL.")
    parser.add_argument("out", help="output .jsonl path")
    parser.add_argument("--docs", type=int, default=N_DOCS)
    parser.add_argument("--seed", type=int, default=SEED)
    args = parser.parse_args(argv)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(to_jsonl(generate(args.docs, args.seed)))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
