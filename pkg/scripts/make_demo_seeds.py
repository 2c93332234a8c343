"""Generate a synthetic seeds file for demos and smoke runs.

Each seed carries a reference with a gendered name, a pronoun, a non-date
number, and a negatable verb group, so every perturbation template has
material to work with, plus a pre-supplied paraphrase. Ref-free mode adds
a pseudo-source and a literal pivot text.

Usage: python scripts/make_demo_seeds.py --count 50 --out seeds.jsonl
"""

import argparse
import random

from advmetrics.suite import SeedRecord, save_seeds

FEMALE = ["Melissa", "Nicole", "Laura", "Victoria", "Hannah"]
MALE = ["James", "Peter", "Oliver", "Daniel", "Marcus"]
NOUNS = ["house", "bridge", "museum", "garden", "factory", "library"]
PLURALS = ["villages", "gardens", "bridges", "tickets", "machines"]
ADJECTIVES = ["old", "quiet", "modern", "famous", "narrow", "expensive"]
VERBS = ["pay", "offer", "spend", "demand", "receive"]

TEMPLATES = [
    ("{name} says {pron} will {verb} {number} dollars for the {adj} {noun}.",
     "The {adj} {noun} will cost {name} {number} dollars, {pron} says."),
    ("In {year}, {name} reported that {pron} visited {number} {plural}.",
     "{name} said in {year} that {number} {plural} were part of the tour."),
    ("The {noun} is {adj}, but {name} wants {number} more {plural}.",
     "{name} wants {number} more {plural}, although the {noun} is {adj}."),
    ("{name} believes the {adj} {noun} will remain {adj2}.",
     "The {adj} {noun} will stay {adj2}, {name} believes."),
]


def build_seeds(count, seed, ref_free):
    rng = random.Random(seed)
    seeds = []
    for i in range(count):
        ref_tpl, para_tpl = TEMPLATES[i % len(TEMPLATES)]
        female = rng.random() < 0.5
        fill = {
            "name": rng.choice(FEMALE if female else MALE),
            "pron": "she" if female else "he",
            "verb": rng.choice(VERBS),
            "number": (f"{rng.randint(2, 99)}.{rng.randint(0, 9)}"
                       if rng.random() < 0.4 else str(rng.randint(3, 980))),
            "year": str(rng.randint(1990, 2020)),
            "adj": rng.choice(ADJECTIVES),
            "adj2": rng.choice(ADJECTIVES),
            "noun": rng.choice(NOUNS),
            "plural": rng.choice(PLURALS),
        }
        ref = ref_tpl.format(**fill)
        para = para_tpl.format(**fill)
        src = pivot = None
        if ref_free:
            src = "[quelle] " + para
            pivot = ref.replace(" says ", " states ").replace(" believes ",
                                                              " thinks ")
        seeds.append(SeedRecord(id=f"demo{i:04d}", ref=ref, para=para,
                                src=src, pivot_r=pivot))
    return seeds


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True)
    parser.add_argument("--ref-free", action="store_true")
    args = parser.parse_args()
    seeds = build_seeds(args.count, args.seed, args.ref_free)
    count = save_seeds(args.out, seeds)
    print(f"wrote {count} seeds to {args.out}")


if __name__ == "__main__":
    main()
