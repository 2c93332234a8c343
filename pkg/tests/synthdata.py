"""Deterministic synthetic seed corpora for tests and demos.

Sentences are template-filled so that every adequacy phenomenon applies to
most seeds: each carries a gendered name, a matching pronoun, a non-date
number (plus sometimes a year that must survive number perturbation), pool
verbs/nouns/adjectives, and a negatable auxiliary. Two paraphrase styles
are rendered per fill: "low" stays close to the reference surface
(backtranslation-like), "high" reorders clauses (word-swap-like) while
preserving meaning.
"""

import random

from advmetrics.suite import SeedRecord

FEMALE = ["Melissa", "Nicole", "Laura", "Victoria", "Hannah", "Sofia",
          "Rachel", "Emma", "Julia", "Teresa"]
MALE = ["James", "Peter", "Oliver", "Daniel", "Marcus", "Samuel",
        "Henry", "Walter", "Simon", "Adrian"]
NOUNS = ["house", "bridge", "museum", "garden", "factory", "library",
         "harbor", "theater", "station", "market"]
PLURAL_NOUNS = ["villages", "gardens", "bridges", "tickets", "machines",
                "paintings", "documents", "markets"]
ADJECTIVES = ["old", "quiet", "modern", "famous", "narrow", "expensive",
              "popular", "ancient", "crowded", "peaceful"]
VERBS_WILL = ["pay", "offer", "spend", "demand", "receive"]


def _number(rng):
    if rng.random() < 0.4:
        return f"{rng.randint(2, 99)}.{rng.randint(0, 9)}"
    value = rng.randint(3, 980)
    return str(value)


def _fill(rng):
    female = rng.random() < 0.5
    return {
        "name": rng.choice(FEMALE if female else MALE),
        "pron": "she" if female else "he",
        "poss": "her" if female else "his",
        "verb": rng.choice(VERBS_WILL),
        "number": _number(rng),
        "year": str(rng.randint(1990, 2020)),
        "adj": rng.choice(ADJECTIVES),
        "adj2": rng.choice(ADJECTIVES),
        "noun": rng.choice(NOUNS),
        "nounpl": rng.choice(PLURAL_NOUNS),
    }


TEMPLATES = [
    {
        "ref": "{name} says {pron} will {verb} {number} dollars for the {adj} {noun}.",
        "low": "{name} says that {pron} will {verb} {number} dollars for the {adj} {noun}.",
        "high": "The {adj} {noun} will cost {name} {number} dollars, {pron} says.",
    },
    {
        "ref": "In {year}, {name} reported that {pron} visited {number} {nounpl}.",
        "low": "In {year}, {name} reported {pron} visited {number} {nounpl}.",
        "high": "{name} said in {year} that {number} {nounpl} were part of {poss} tour.",
    },
    {
        "ref": "The {noun} is {adj}, but {name} wants {number} more {nounpl}.",
        "low": "The {noun} is {adj}, but {name} wants {number} additional {nounpl}.",
        "high": "{name} wants {number} more {nounpl}, although the {noun} is {adj}.",
    },
    {
        "ref": "{name} believes the {adj} {noun} will remain {adj2}.",
        "low": "{name} believes that the {adj} {noun} will remain {adj2}.",
        "high": "The {adj} {noun} will stay {adj2}, {name} believes.",
    },
]


def make_seeds(count, seed=0, para_style="low", ref_free=False):
    """Build ``count`` deterministic SeedRecords.

    ``para_style`` picks which rendering lands in the ``para`` field; with
    ``ref_free`` the seeds also carry a pseudo-source and a pivot text that
    stays close to the reference (a literal-translation stand-in).
    """
    rng = random.Random(seed)
    seeds = []
    for i in range(count):
        template = TEMPLATES[i % len(TEMPLATES)]
        fill = _fill(rng)
        ref = template["ref"].format(**fill)
        para = template[para_style].format(**fill)
        src = pivot = None
        if ref_free:
            src = "[quelltext] " + template["high"].format(**fill)
            pivot = template["low"].format(**fill)
        seeds.append(SeedRecord(
            id=f"seed{i:04d}",
            ref=ref,
            para=para,
            src=src,
            pivot_r=pivot,
        ))
    return seeds
