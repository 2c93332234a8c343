"""Suite construction tests: instance invariants, file round-trips, stats."""

import hashlib

import pytest

import synthdata
from advmetrics.errors import MissingField, MissingParaphrase, WrongArity
from advmetrics.perturb import Lexicon, Phenomenon
from advmetrics.suite import (
    ParaSource,
    SeedRecord,
    Setting,
    build_ref_based,
    build_ref_free,
    load_seeds,
    load_suite,
    parse_phenomena_arg,
    save_seeds,
    save_suite,
    select_summeval_reference,
    suite_stats,
    verbalize_numbers,
)
from advmetrics.textops import levenshtein_normalized, rouge_l_f1

LEX = Lexicon.default()
PHENOMENA = [Phenomenon.NEGATION, Phenomenon.NUMBER, Phenomenon.PRONOUN,
             Phenomenon.NAME]


def test_parse_phenomena_arg():
    parsed = parse_phenomena_arg("number,negation,number+negation")
    assert parsed == [(Phenomenon.NUMBER,), (Phenomenon.NEGATION,),
                      (Phenomenon.NUMBER, Phenomenon.NEGATION)]


def test_seed_record_validation():
    with pytest.raises(ValueError):
        SeedRecord(id="a:b", ref="text")
    with pytest.raises(ValueError):
        SeedRecord(id="a", ref="  ")


def test_build_ref_based_shape():
    seeds = synthdata.make_seeds(20, seed=1)
    suite = build_ref_based(seeds, PHENOMENA, LEX, seed=7, para_mode="original")
    suite.validate()
    assert suite.setting is Setting.REF_BASED
    assert len(suite.instances) + sum(suite.skipped.values()) == 20 * len(PHENOMENA)
    for inst in suite.instances:
        assert inst.anchor == inst.perturb_source  # adv derives from ref
        assert inst.cand_adv != inst.cand_para
        assert inst.cand_adv != inst.anchor
        if inst.phenomena == (Phenomenon.NUMBER,):
            assert inst.para_source is ParaSource.NUMBERWORDS
        else:
            assert inst.para_source is ParaSource.ORIGINAL


def test_number_error_para_is_verbalized():
    seeds = [SeedRecord(id="s1", ref="It kills 1.3 million people each year.",
                        para="unused paraphrase")]
    suite = build_ref_based(seeds, [Phenomenon.NUMBER], LEX, seed=3,
                            para_mode="original")
    inst, = suite.instances
    assert inst.cand_para == "It kills one point three million people each year."
    assert "1.3" not in inst.cand_adv
    assert inst.cand_adv.endswith("million people each year.")


def test_number_para_keeps_dates_numeric():
    seeds = [SeedRecord(id="s1", ref="In 2012 it kills 1.3 million people.",
                        para=None)]
    suite = build_ref_based(seeds, [Phenomenon.NUMBER], LEX, seed=3,
                            para_mode="original")
    inst, = suite.instances
    assert "2012" in inst.cand_para
    assert "one point three" in inst.cand_para
    assert "2012" in inst.cand_adv


def test_inapplicable_combinations_are_tallied():
    seeds = [SeedRecord(id="s1", ref="The museum is quiet today.",
                        para="The museum is calm today.")]
    suite = build_ref_based(seeds, [Phenomenon.PRONOUN, Phenomenon.NEGATION],
                            LEX, seed=0, para_mode="original")
    assert suite.skipped == {"pronoun": 1}
    assert [i.phenomenon_label for i in suite.instances] == ["negation"]


def test_missing_paraphrase_raises():
    seeds = [SeedRecord(id="s1", ref="He pays 5 dollars.")]
    with pytest.raises(MissingParaphrase):
        build_ref_based(seeds, [Phenomenon.NEGATION], LEX, para_mode="original")


def test_composite_phenomenon_instances():
    seeds = synthdata.make_seeds(8, seed=2)
    suite = build_ref_based(
        seeds, [(Phenomenon.NUMBER, Phenomenon.NEGATION)], LEX, seed=5,
        para_mode="original")
    assert suite.instances, "composite attack should apply to these seeds"
    for inst in suite.instances:
        assert inst.phenomenon_label == "number+negation"
        assert inst.para_source is ParaSource.NUMBERWORDS
        assert inst.id.endswith(":number+negation")
        assert len(inst.perturbation.stages) == 2


def test_build_ref_free_shape():
    seeds = synthdata.make_seeds(12, seed=3, ref_free=True)
    suite = build_ref_free(seeds, PHENOMENA, LEX, seed=9)
    suite.validate()
    assert suite.setting is Setting.REF_FREE
    for inst in suite.instances:
        seed = next(s for s in seeds if s.id == inst.seed_id)
        assert inst.anchor == seed.src
        assert inst.cand_para == seed.ref          # the good candidate
        assert inst.perturb_source == seed.pivot_r  # adv derives from pivot
        assert inst.cand_adv != seed.ref


def test_build_ref_free_requires_fields():
    seeds = [SeedRecord(id="s1", ref="Some reference.")]
    with pytest.raises(MissingField):
        build_ref_free(seeds, [Phenomenon.NEGATION], LEX)


def test_rebuild_is_byte_identical(tmp_path):
    seeds = synthdata.make_seeds(15, seed=4)
    first = tmp_path / "a.jsonl"
    second = tmp_path / "b.jsonl"
    save_suite(first, build_ref_based(seeds, PHENOMENA, LEX, seed=11,
                                      para_mode="original"))
    save_suite(second, build_ref_based(seeds, PHENOMENA, LEX, seed=11,
                                       para_mode="original"))
    assert hashlib.sha256(first.read_bytes()).hexdigest() == \
        hashlib.sha256(second.read_bytes()).hexdigest()


def test_suite_file_roundtrip(tmp_path):
    seeds = synthdata.make_seeds(10, seed=5)
    suite = build_ref_based(seeds, PHENOMENA, LEX, seed=13,
                            para_mode="backtranslation")
    path = tmp_path / "suite.jsonl"
    save_suite(path, suite)
    loaded = load_suite(path)
    assert loaded.name == suite.name
    assert loaded.setting == suite.setting
    assert loaded.skipped == suite.skipped
    assert loaded.config.para_mode is ParaSource.BACKTRANSLATION
    assert len(loaded.instances) == len(suite.instances)
    for a, b in zip(loaded.instances, suite.instances):
        assert a == b
        assert a.perturbation.replay() == a.cand_adv


def test_seeds_file_roundtrip(tmp_path):
    seeds = synthdata.make_seeds(6, seed=6, ref_free=True)
    path = tmp_path / "seeds.jsonl"
    count = save_seeds(path, seeds)
    assert count == 6
    header = path.read_text().splitlines()[0]
    assert '"format":"menli-suite"' in header and '"version":1' in header
    assert load_seeds(path) == seeds


def test_verbalize_numbers_helper():
    out = verbalize_numbers("Costs rose 5.3% in 2019, then 12 more.", LEX)
    assert out == "Costs rose five point three% in 2019, then twelve more."


def test_verbalize_numbers_currency_moves_after_scale():
    out = verbalize_numbers(
        "Bilateral trade has increased to more than $100 billion a year.", LEX)
    assert out == ("Bilateral trade has increased to more than "
                   "one hundred billion dollars a year.")
    out = verbalize_numbers("It sold for $25 last week.", LEX)
    assert out == "It sold for twenty-five dollars last week."


# -------------------------------------------------- reference selection

def test_select_summeval_reference_dominance():
    core = "the storm closed the harbor and flooded the market"
    # each sibling extends the core with tokens unique to it, so the bare
    # core has the highest mean overlap with the rest
    extras = ["at dawn", "by night", "near shore", "last week", "again today",
              "very badly", "without warning", "despite efforts", "for hours",
              "before sunrise"]
    refs = [f"{core} {extra}" for extra in extras]
    refs.insert(4, core)
    pivot, remaining = select_summeval_reference(refs)
    assert pivot == core
    assert len(remaining) == 10 and core not in remaining


def test_select_summeval_reference_tiebreak():
    refs = [f"word{i} token{i} item{i}" for i in range(11)]  # pairwise disjoint
    pivot, remaining = select_summeval_reference(refs)
    assert pivot == refs[0]
    assert remaining == refs[1:]


def test_select_summeval_reference_arity():
    with pytest.raises(WrongArity):
        select_summeval_reference(["only", "two"])


def test_select_summeval_reference_matches_bruteforce():
    import random as _random
    rng = _random.Random(12)
    vocab = ["storm", "harbor", "market", "flood", "night", "crew",
             "bridge", "road", "rain", "wall"]
    for _ in range(3):
        refs = [" ".join(rng.choice(vocab) for _ in range(rng.randint(4, 9)))
                for _ in range(11)]
        pivot, _ = select_summeval_reference(refs)
        means = []
        for i, candidate in enumerate(refs):
            others = [r for j, r in enumerate(refs) if j != i]
            means.append(sum(rouge_l_f1(candidate, o) for o in others) / 10)
        best = max(range(11), key=lambda i: (means[i], -i))
        assert pivot == refs[best]


# ------------------------------------------------------------- statistics

def test_suite_stats_empty():
    from advmetrics.suite import TestSuite
    stats = suite_stats(TestSuite("empty", Setting.REF_BASED, []))
    assert stats.counts == {}
    assert stats.mean_para_distance is None


def test_suite_stats_para_equals_anchor():
    seeds = [SeedRecord(id=f"s{i}", ref=f"The {noun} is quiet today.",
                        para=f"The {noun} is quiet today.")
             for i, noun in enumerate(["museum", "harbor", "garden"])]
    suite = build_ref_based(seeds, [Phenomenon.NEGATION], LEX,
                            para_mode="original")
    stats = suite_stats(suite)
    assert stats.mean_para_distance == 0.0
    assert stats.mean_adv_distance > 0.0


def test_suite_stats_para_mode_distances_ordered():
    # word-swap paraphrases sit farther from the reference than the
    # verbalized-number paraphrases built from the same seeds
    seeds_high = synthdata.make_seeds(50, seed=8, para_style="high")
    high = build_ref_based(seeds_high, [Phenomenon.NEGATION], LEX, seed=1,
                           para_mode="original")
    number = build_ref_based(seeds_high, [Phenomenon.NUMBER], LEX, seed=1,
                             para_mode="original")
    stats_high = suite_stats(high)
    stats_number = suite_stats(number)
    assert stats_high.mean_para_distance > stats_number.mean_para_distance


def test_ref_free_stats_use_pivot():
    seeds = synthdata.make_seeds(10, seed=9, ref_free=True)
    suite = build_ref_free(seeds, [Phenomenon.NEGATION], LEX, seed=2)
    stats = suite_stats(suite)
    expected = []
    for inst in suite.instances:
        expected.append(levenshtein_normalized(inst.perturb_source,
                                               inst.cand_para))
    assert stats.mean_para_distance == pytest.approx(sum(expected) / len(expected))
