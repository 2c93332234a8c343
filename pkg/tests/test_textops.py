"""Text-utility tests, each checked against an independent oracle."""

import itertools
import json
import math
import random
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from advmetrics import textops
from advmetrics.errors import EmptyInput, Unsupported
from advmetrics.textops import (
    TokenKind,
    levenshtein,
    levenshtein_normalized,
    number_to_words,
    random_number_same_format,
    rouge_l_f1,
    sentence_bleu,
    tokenize,
)

FIXTURE = Path(__file__).parent / "data" / "tokenize_fixture.json"


# ---------------------------------------------------------------- oracles

@lru_cache(maxsize=None)
def lev_recursive(a: str, b: str) -> int:
    """Memoized textbook recursion, independent of the DP implementation."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    cost = 0 if a[-1] == b[-1] else 1
    return min(lev_recursive(a[:-1], b) + 1,
               lev_recursive(a, b[:-1]) + 1,
               lev_recursive(a[:-1], b[:-1]) + cost)


def bleu_oracle(cand_tokens, ref_tokens):
    """Naive n-gram counting straight from the stated formula."""
    def ngrams(tokens, n):
        return [tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]

    logs = []
    for n in range(1, 5):
        cgrams = ngrams(cand_tokens, n)
        matched = 0
        remaining = list(ngrams(ref_tokens, n))
        for g in cgrams:
            if g in remaining:
                remaining.remove(g)
                matched += 1
        if n == 1:
            if matched == 0:
                return 0.0
            logs.append(math.log(matched / len(cgrams)))
        else:
            logs.append(math.log((matched + 1) / (len(cgrams) + 1)))
    score = math.exp(sum(logs) / 4)
    c, r = len(cand_tokens), len(ref_tokens)
    return score * (math.exp(1 - r / c) if c < r else 1.0)


def lcs_oracle(a, b):
    """LCS by exhaustive subsequence enumeration (small inputs only)."""
    best = 0
    for k in range(len(a), 0, -1):
        for combo in itertools.combinations(range(len(a)), k):
            sub = [a[i] for i in combo]
            it = iter(b)
            if all(x in it for x in sub):
                return k
    return best


def verbalize_oracle(n: int) -> str:
    """Second verbalizer for 0..9999, structured digit-by-digit."""
    ones = "zero one two three four five six seven eight nine".split()
    teens = ("ten eleven twelve thirteen fourteen fifteen sixteen "
             "seventeen eighteen nineteen").split()
    tens = "- - twenty thirty forty fifty sixty seventy eighty ninety".split()

    def two_digit(v):
        if v < 10:
            return ones[v]
        if v < 20:
            return teens[v - 10]
        return tens[v // 10] + ("-" + ones[v % 10] if v % 10 else "")

    def three_digit(v):
        if v < 100:
            return two_digit(v)
        out = ones[v // 100] + " hundred"
        if v % 100:
            out += " " + two_digit(v % 100)
        return out

    if n == 0:
        return "zero"
    parts = []
    if n >= 1000:
        parts.append(three_digit(n // 1000) + " thousand")
        n %= 1000
    if n:
        parts.append(three_digit(n))
    return " ".join(parts)


_WORD_VALUES = {}
for _i, _w in enumerate("zero one two three four five six seven eight nine".split()):
    _WORD_VALUES[_w] = _i
for _i, _w in enumerate(("ten eleven twelve thirteen fourteen fifteen sixteen "
                         "seventeen eighteen nineteen").split()):
    _WORD_VALUES[_w] = 10 + _i
for _i, _w in enumerate("twenty thirty forty fifty sixty seventy eighty ninety".split()):
    _WORD_VALUES[_w] = 20 + 10 * _i
_SCALE_VALUES = {"hundred": 100, "thousand": 10 ** 3,
                 "million": 10 ** 6, "billion": 10 ** 9}


def words_to_int(text: str) -> int:
    """Parser used to round-trip the verbalizer (integers only)."""
    total, group = 0, 0
    for raw in text.split():
        for word in raw.split("-"):
            if word in _WORD_VALUES:
                group += _WORD_VALUES[word]
            elif word == "hundred":
                group *= 100
            elif word in _SCALE_VALUES:
                total += group * _SCALE_VALUES[word]
                group = 0
            else:
                raise ValueError(f"unknown number word {word!r}")
    return total + group


# ------------------------------------------------------------- tokenizer

def test_tokenize_simple_sentence():
    toks = tokenize("I love dogs.").tokens
    assert [t.surface for t in toks] == ["I", "love", "dogs", "."]
    assert [t.kind for t in toks] == [TokenKind.WORD] * 3 + [TokenKind.PUNCTUATION]


def test_tokenize_currency_and_percent():
    toks = tokenize("$100 billion").tokens
    assert [t.surface for t in toks] == ["$", "100", "billion"]
    assert toks[1].kind is TokenKind.NUMBER

    toks = tokenize("5.3%").tokens
    assert [t.surface for t in toks] == ["5.3", "%"]
    assert toks[0].kind is TokenKind.NUMBER


def test_tokenize_fixture_matches_hand_tokenization():
    for case in json.loads(FIXTURE.read_text()):
        sent = tokenize(case["text"])
        assert [t.surface for t in sent.tokens] == case["surfaces"], case["text"]
        assert [t.kind.value for t in sent.tokens] == case["kinds"], case["text"]


def test_tokenize_rejects_whitespace_only():
    with pytest.raises(EmptyInput):
        tokenize("   \t ")


def test_tokenize_external_tags_override():
    sent = tokenize("The drone hums.", tags=[None, "noun", "verb", None])
    assert sent.tokens[1].pos is textops.Pos.NOUN
    assert sent.tokens[2].pos is textops.Pos.VERB


@given(st.text(alphabet=st.characters(codec="ascii", exclude_characters="\x00"),
               min_size=1).filter(lambda s: s.strip()))
def test_tokenize_is_lossless(text):
    sent = tokenize(text)
    assert sent.detokenize() == text
    spans = [t.char_span for t in sent.tokens]
    assert all(0 <= a < b <= len(text) for a, b in spans)
    assert all(spans[i][1] <= spans[i + 1][0] for i in range(len(spans) - 1))


def test_rebuild_replacement_and_deletion():
    sent = tokenize("I love big dogs.")
    assert sent.rebuild({2: "small"}) == "I love small dogs."
    assert sent.rebuild({2: None}) == "I love dogs."
    assert sent.rebuild({0: None}) == "love big dogs."
    assert sent.rebuild({0: None, 1: None}) == "big dogs."


# ------------------------------------------------------------ levenshtein

def test_levenshtein_known_values():
    assert levenshtein_normalized("abc", "abc") == 0.0
    assert levenshtein_normalized("kitten", "sitting") == pytest.approx(3 / 7)
    assert levenshtein_normalized("", "ab") == 1.0
    assert levenshtein_normalized("", "") == 0.0


@given(st.text(max_size=12), st.text(max_size=12))
def test_levenshtein_matches_recursive_oracle(a, b):
    assert levenshtein(a, b) == lev_recursive(a, b)


@given(st.text(max_size=30), st.text(max_size=30))
def test_levenshtein_symmetry_and_identity(a, b):
    assert levenshtein_normalized(a, b) == levenshtein_normalized(b, a)
    assert (levenshtein_normalized(a, b) == 0) == (a == b)


@given(st.text(max_size=15), st.text(max_size=15), st.text(max_size=15))
def test_levenshtein_triangle_inequality(a, b, c):
    # the raw (denormalized) distance is a metric
    assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


# ------------------------------------------------------------------ BLEU

def test_bleu_perfect_and_disjoint():
    assert sentence_bleu("the cat sat down", "the cat sat down") == pytest.approx(1.0)
    assert sentence_bleu("alpha beta", "gamma delta") == 0.0


def test_bleu_brevity_penalty_case():
    got = sentence_bleu("the cat sat", "the cat sat down")
    assert got == pytest.approx(bleu_oracle("the cat sat".split(),
                                            "the cat sat down".split()))
    assert got == pytest.approx(math.exp(1 - 4 / 3))


def test_bleu_empty_side_raises():
    with pytest.raises(EmptyInput):
        sentence_bleu("", "the cat")


VOCAB = ["tree", "river", "stone", "wind", "fox"]


def test_bleu_rouge_match_oracles_exhaustive_small():
    # Exhaustive over all sentence pairs of <= 3 tokens from a 5-word
    # vocabulary; longer pairs (up to 8 tokens) are covered by the seeded
    # sample below -- full exhaustion over length 8 is ~10^13 pairs.
    sentences = []
    for n in (1, 2, 3):
        sentences.extend(itertools.product(VOCAB, repeat=n))
    for cand, ref in itertools.product(sentences, repeat=2):
        c, r = " ".join(cand), " ".join(ref)
        assert sentence_bleu(c, r) == pytest.approx(bleu_oracle(list(cand), list(ref)))
        lcs = lcs_oracle(list(cand), list(ref))
        if lcs == 0:
            assert rouge_l_f1(c, r) == 0.0
        else:
            p, q = lcs / len(cand), lcs / len(ref)
            assert rouge_l_f1(c, r) == pytest.approx(2 * p * q / (p + q))


def test_bleu_rouge_match_oracles_sampled_long():
    rng = random.Random(20240817)
    for _ in range(300):
        cand = [rng.choice(VOCAB) for _ in range(rng.randint(1, 8))]
        ref = [rng.choice(VOCAB) for _ in range(rng.randint(1, 8))]
        c, r = " ".join(cand), " ".join(ref)
        assert sentence_bleu(c, r) == pytest.approx(bleu_oracle(cand, ref))
        lcs = lcs_oracle(cand, ref)
        expected = 0.0
        if lcs:
            p, q = lcs / len(cand), lcs / len(ref)
            expected = 2 * p * q / (p + q)
        assert rouge_l_f1(c, r) == pytest.approx(expected)


@given(st.lists(st.sampled_from(VOCAB), min_size=1, max_size=10))
def test_bleu_rouge_identity_is_one(words):
    text = " ".join(words)
    assert sentence_bleu(text, text) == pytest.approx(1.0)
    assert rouge_l_f1(text, text) == pytest.approx(1.0)


def test_rouge_l_known_value():
    assert rouge_l_f1("a b c d", "a c d e") == pytest.approx(0.75)
    assert rouge_l_f1("alpha beta", "gamma delta") == 0.0


# --------------------------------------------------------------- numbers

def test_number_to_words_known_values():
    assert number_to_words("100") == "one hundred"
    assert number_to_words("0") == "zero"
    assert number_to_words("5.3") == "five point three"
    assert number_to_words("814") == "eight hundred fourteen"
    assert number_to_words("1,300") == "one thousand three hundred"
    assert number_to_words("2500000000") == "two billion five hundred million"
    assert number_to_words("-42") == "minus forty-two"
    assert number_to_words("5.30") == "five point three zero"


def test_number_to_words_matches_second_verbalizer():
    for n in range(0, 10000):
        assert number_to_words(str(n)) == verbalize_oracle(n), n
    rng = random.Random(99)
    for _ in range(50):
        int_part = rng.randrange(0, 10000)
        frac = "".join(str(rng.randrange(10)) for _ in range(rng.randint(1, 4)))
        lit = f"{int_part}.{frac}"
        expected = verbalize_oracle(int_part) + " point " + " ".join(
            "zero one two three four five six seven eight nine".split()[int(d)]
            for d in frac)
        assert number_to_words(lit) == expected


def test_number_to_words_unsupported():
    with pytest.raises(Unsupported):
        number_to_words("1000000000000")  # 10^12
    with pytest.raises(Unsupported):
        number_to_words("12a")


def test_number_words_injective_roundtrip():
    rng = random.Random(4)
    values = list(range(0, 20001)) + [rng.randrange(0, 10 ** 6) for _ in range(5000)]
    values += [10 ** 6, 999999, 123456]
    for n in values:
        assert words_to_int(number_to_words(str(n))) == n


def test_random_number_format_class_preserved():
    rng = random.Random(11)
    for _ in range(10 ** 4):
        kind = rng.randrange(3)
        if kind == 0:
            original = str(rng.randrange(0, 10 ** 6))
        elif kind == 1:
            original = f"{rng.randrange(0, 1000)}.{rng.randrange(0, 100):02d}"
        else:
            original = f"{rng.randrange(1000, 10 ** 6):,}"
        out = random_number_same_format(original, rng)
        assert out != original
        assert float(out.replace(",", "")) != float(original.replace(",", ""))
        assert len(out.split(".")[0].replace(",", "").lstrip("+-")) == \
            len(original.split(".")[0].replace(",", "").lstrip("+-"))
        assert ("." in out) == ("." in original)
        if "." in original:
            assert len(out.split(".")[1]) == len(original.split(".")[1])
        assert ("," in out) == ("," in original)


def test_random_number_deterministic_under_seed():
    a = random_number_same_format("1.50", random.Random(123))
    b = random_number_same_format("1.50", random.Random(123))
    assert a == b
    assert len(a.split(".")[1]) == 2


def test_random_number_rejects_malformed():
    with pytest.raises(Unsupported):
        random_number_same_format("12,34", random.Random(0))
