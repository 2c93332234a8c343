"""Paraphrase-hardness study on synthetic data.

Builds two suites from identical seeds, one with clause-reordered
(surface-distant) paraphrases and one with near-copy paraphrases, scores
both with the builtin lexical metrics, and prints accuracy next to the
mean paraphrase edit distance, plus the failure/success distance gap.
Surface-distant paraphrases should be strictly harder for lexical metrics.

Usage: python scripts/hardness_analysis.py --count 200
"""

import argparse

from make_demo_seeds import build_seeds
from advmetrics.evalstats import edit_distance_analysis, preference_accuracy
from advmetrics.perturb import Lexicon, Phenomenon
from advmetrics.scorer_io import Mode, builtin_scorer, requests_for_suite, scalar_batches
from advmetrics.suite import SeedRecord, build_ref_based, suite_stats


def near_copy_paraphrases(seeds):
    out = []
    for seed in seeds:
        para = seed.ref.replace(" says ", " says that ") \
                       .replace(" believes ", " believes that ") \
                       .replace(" more ", " additional ")
        if para == seed.ref:
            para = seed.ref.replace("The ", "That ", 1)
        out.append(SeedRecord(id=seed.id, ref=seed.ref, para=para))
    return out


def evaluate(suite, scorer):
    pairs = requests_for_suite(suite, Mode.SCALAR)
    responses = builtin_scorer(scorer, pairs)
    para, adv = scalar_batches(responses, scorer)
    accuracy = preference_accuracy(para, adv)
    analysis = edit_distance_analysis(suite, para, adv)
    return accuracy, analysis


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--seed", type=int, default=11)
    args = parser.parse_args()

    lexicon = Lexicon.default()
    phenomena = [Phenomenon.NEGATION, Phenomenon.PRONOUN, Phenomenon.NAME,
                 Phenomenon.SVD]
    distant_seeds = build_seeds(args.count, args.seed, ref_free=False)
    near_seeds = near_copy_paraphrases(distant_seeds)

    suites = {
        "distant-para": build_ref_based(distant_seeds, phenomena, lexicon,
                                        seed=args.seed, para_mode="original"),
        "near-para": build_ref_based(near_seeds, phenomena, lexicon,
                                     seed=args.seed, para_mode="backtranslation"),
    }

    header = (f"{'suite':>14}  {'metric':>18}  {'accuracy':>8}  "
              f"{'para dist':>9}  {'fail-success gap':>16}")
    print(header)
    print("-" * len(header))
    for name, suite in suites.items():
        stats = suite_stats(suite)
        for scorer in ("sentbleu", "rougeL", "neg_edit_distance"):
            accuracy, analysis = evaluate(suite, scorer)
            gap = analysis.gap
            print(f"{name:>14}  {scorer:>18}  {accuracy.accuracy:8.3f}  "
                  f"{stats.mean_para_distance:9.3f}  "
                  f"{'-' if gap is None else f'{gap:16.3f}'}")


if __name__ == "__main__":
    main()
