"""Deterministic low-level text utilities.

Everything downstream (perturbation templates, suite construction, builtin
scorers, hardness analysis) is built on the primitives here: a lossless
whitespace+punctuation tokenizer with lexicon-based POS lookup, character
Levenshtein, sentence BLEU, ROUGE-L F1, and numeric literal handling
(verbalization and same-format resampling).
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence

from .errors import EmptyInput, Unsupported


class TokenKind(str, Enum):
    WORD = "word"
    NUMBER = "number"
    PUNCTUATION = "punctuation"


class Pos(str, Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adjective"
    PRONOUN = "pronoun"
    OTHER = "other"


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind
    pos: Optional[Pos]
    char_span: tuple[int, int]


@dataclass
class TokenizedSentence:
    """A sentence plus its tokens; detokenization is lossless.

    Tokens carry spans into ``source``, so the original text (including all
    inter-token whitespace) can always be rebuilt, and token-level edits can
    be rendered back to a string without guessing at spacing.
    """

    source: str
    tokens: list[Token] = field(default_factory=list)

    def detokenize(self) -> str:
        return self.source

    def word_indices(self) -> list[int]:
        """Indices of non-punctuation tokens (words and numbers)."""
        return [i for i, t in enumerate(self.tokens)
                if t.kind is not TokenKind.PUNCTUATION]

    def rebuild(self, replacements: Mapping[int, Optional[str]]) -> str:
        """Rebuild the source with token ``i`` replaced by ``replacements[i]``.

        A ``None`` replacement deletes the token together with one adjacent
        run of whitespace (the preceding one when it exists), so dropped
        words do not leave double spaces behind.
        """
        out: list[str] = []
        cursor = 0
        pending_gap_skip = False
        for i, tok in enumerate(self.tokens):
            start, end = tok.char_span
            gap = self.source[cursor:start]
            if pending_gap_skip and gap:
                gap = ""
            pending_gap_skip = False
            if i in replacements and replacements[i] is None:
                if not gap:
                    pending_gap_skip = True  # no gap before: swallow the next one
                cursor = end
                continue
            out.append(gap)
            out.append(replacements[i] if i in replacements else tok.surface)
            cursor = end
        tail = self.source[cursor:]
        if pending_gap_skip and tail:
            # everything up to here was deleted; drop the leading tail space
            tail = tail.lstrip(" ")
        out.append(tail)
        return "".join(out)


# Numeric grammar: optional sign, digits with optional comma thousands
# separators, optional single decimal point. Currency sigils are separate
# tokens.
_NUMBER_CORE = r"\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?"
NUMBER_RE = re.compile(rf"[+-]?(?:{_NUMBER_CORE})$")
_LETTER = r"[^\W\d_]"  # any Unicode letter
_WORD_PART = rf"{_LETTER}+(?:['’-]{_LETTER}+)*"
_TOKEN_RE = re.compile(rf"(?P<num>{_NUMBER_CORE})|(?P<word>{_WORD_PART})|(?P<punct>\S)")


def is_numeric_literal(text: str) -> bool:
    return bool(NUMBER_RE.match(text))


def tokenize(text: str,
             tags: Optional[Sequence[Optional[str]]] = None,
             pos_lookup: Optional[Mapping[str, Pos]] = None) -> TokenizedSentence:
    """Tokenize ``text`` into word / number / punctuation tokens.

    POS for word tokens comes from ``tags`` (a sequence aligned with the
    produced tokens) when given, else from ``pos_lookup`` (or the built-in
    lexicon) with light inflection stripping, else ``other``. Numbers and
    punctuation never carry a POS.

    Raises EmptyInput when ``text`` is whitespace-only.
    """
    if not text or not text.strip():
        raise EmptyInput("cannot tokenize empty or whitespace-only text")
    if pos_lookup is None:
        from ._data import default_pos_lookup
        pos_lookup = default_pos_lookup()
    tokens: list[Token] = []
    for m in _TOKEN_RE.finditer(text):
        surface = m.group()
        if m.lastgroup == "num":
            kind = TokenKind.NUMBER
        elif m.lastgroup == "word":
            kind = TokenKind.WORD
        else:
            kind = TokenKind.PUNCTUATION
        pos = None
        if kind is TokenKind.WORD:
            pos = lookup_pos(surface, pos_lookup)
        tokens.append(Token(surface, kind, pos, m.span()))
    if tags is not None:
        if len(tags) != len(tokens):
            raise ValueError(
                f"external tags length {len(tags)} != token count {len(tokens)}")
        tokens = [
            Token(t.surface, t.kind,
                  Pos(tags[i]) if tags[i] and t.kind is TokenKind.WORD else t.pos,
                  t.char_span)
            for i, t in enumerate(tokens)
        ]
    return TokenizedSentence(source=text, tokens=tokens)


def lookup_pos(word: str, pos_lookup: Mapping[str, Pos]) -> Pos:
    """Lexicon POS lookup with plural/3rd-person/past stripping."""
    w = word.lower()
    hit = pos_lookup.get(w)
    if hit is not None:
        return hit
    for candidate in _inflection_stems(w):
        hit = pos_lookup.get(candidate)
        if hit in (Pos.NOUN, Pos.VERB):
            return hit
    return Pos.OTHER


def _inflection_stems(w: str) -> list[str]:
    """Candidate stems for a possibly inflected English word."""
    stems = []
    if w.endswith("ies") and len(w) > 4:
        stems.append(w[:-3] + "y")
    if w.endswith("es") and len(w) > 3:
        stems.append(w[:-2])
    if w.endswith("s") and len(w) > 2:
        stems.append(w[:-1])
    if w.endswith("ed") and len(w) > 3:
        stems.append(w[:-2])
        stems.append(w[:-1])  # e.g. "loved" -> "love"
    if w.endswith("ing") and len(w) > 4:
        stems.append(w[:-3])
        stems.append(w[:-3] + "e")
    return stems


def levenshtein(a: str, b: str) -> int:
    """Character-level edit distance (insert/delete/substitute, unit costs)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost))
        prev = cur
    return prev[-1]


def levenshtein_normalized(a: str, b: str) -> float:
    """Levenshtein distance divided by max(len(a), len(b)); 0.0 for two empties."""
    if not a and not b:
        return 0.0
    return levenshtein(a, b) / max(len(a), len(b))


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def sentence_bleu(candidate: str, reference: str) -> float:
    """Sentence BLEU over all tokens, n = 1..4.

    Modified n-gram precision with add-one smoothing on numerator and
    denominator for n >= 2 (n = 1 unsmoothed, so disjoint unigrams give 0),
    geometric mean, and brevity penalty exp(1 - |ref|/|cand|) when the
    candidate is shorter than the reference. Case-sensitive.
    """
    cand = [t.surface for t in tokenize(candidate).tokens]
    ref = [t.surface for t in tokenize(reference).tokens]
    log_sum = 0.0
    for n in range(1, 5):
        cand_counts = _ngram_counts(cand, n)
        ref_counts = _ngram_counts(ref, n)
        matched = sum(min(c, ref_counts[g]) for g, c in cand_counts.items())
        total = sum(cand_counts.values())
        if n == 1:
            if matched == 0:
                return 0.0
            p = matched / total
        else:
            p = (matched + 1) / (total + 1)
        log_sum += math.log(p)
    bleu = math.exp(log_sum / 4)
    c, r = len(cand), len(ref)
    if c < r:
        bleu *= math.exp(1 - r / c)
    return bleu


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l_f1(candidate: str, reference: str) -> float:
    """ROUGE-L F1 (beta = 1) over non-punctuation tokens, case-sensitive."""
    cand_sent = tokenize(candidate)
    ref_sent = tokenize(reference)
    cand = [cand_sent.tokens[i].surface for i in cand_sent.word_indices()]
    ref = [ref_sent.tokens[i].surface for i in ref_sent.word_indices()]
    if not cand or not ref:
        raise EmptyInput("ROUGE-L needs at least one word token per side")
    lcs = _lcs_length(cand, ref)
    if lcs == 0:
        return 0.0
    precision = lcs / len(cand)
    recall = lcs / len(ref)
    return 2 * precision * recall / (precision + recall)


_ONES = ["zero", "one", "two", "three", "four", "five", "six", "seven",
         "eight", "nine", "ten", "eleven", "twelve", "thirteen", "fourteen",
         "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"]
_TENS = ["", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
         "eighty", "ninety"]
_SCALES = [(10 ** 9, "billion"), (10 ** 6, "million"), (10 ** 3, "thousand")]


def _under_thousand_words(n: int) -> str:
    parts = []
    if n >= 100:
        parts.append(_ONES[n // 100] + " hundred")
        n %= 100
    if n >= 20:
        word = _TENS[n // 10]
        if n % 10:
            word += "-" + _ONES[n % 10]
        parts.append(word)
    elif n > 0:
        parts.append(_ONES[n])
    return " ".join(parts)


@dataclass(frozen=True)
class _NumericLiteral:
    sign: str            # "", "+", "-"
    int_digits: str      # no separators
    frac_digits: str     # "" when integer
    grouped: bool        # thousands separators present in the source


def _parse_literal(text: str) -> _NumericLiteral:
    if not is_numeric_literal(text):
        raise Unsupported(f"not a numeric literal: {text!r}")
    sign = ""
    body = text
    if body and body[0] in "+-":
        sign, body = body[0], body[1:]
    grouped = "," in body
    if "." in body:
        int_part, frac = body.split(".")
    else:
        int_part, frac = body, ""
    return _NumericLiteral(sign, int_part.replace(",", ""), frac, grouped)


def number_to_words(n: str) -> str:
    """Verbalize a numeric literal as deterministic English words.

    Integers are spelled out up to the billions scale; decimals become the
    integer part plus "point" plus digit names ("5.30" -> "five point three
    zero"). Raises Unsupported for magnitudes >= 10^12 or malformed input.
    """
    lit = _parse_literal(n)
    value = int(lit.int_digits)
    if value >= 10 ** 12:
        raise Unsupported(f"magnitude out of range: {n!r}")
    if value == 0:
        words = "zero"
    else:
        parts = []
        remainder = value
        for scale, name in _SCALES:
            if remainder >= scale:
                parts.append(_under_thousand_words(remainder // scale) + " " + name)
                remainder %= scale
        if remainder:
            parts.append(_under_thousand_words(remainder))
        words = " ".join(parts)
    if lit.frac_digits:
        words += " point " + " ".join(_ONES[int(d)] for d in lit.frac_digits)
    if lit.sign == "-":
        words = "minus " + words
    return words


def _group_thousands(digits: str) -> str:
    out = []
    for i, d in enumerate(reversed(digits)):
        if i and i % 3 == 0:
            out.append(",")
        out.append(d)
    return "".join(reversed(out))


def random_number_same_format(n: str, rng) -> str:
    """Resample a numeric literal within its format class.

    The result keeps the sign, the integer-part digit count, the decimal
    place count, and the thousands-separator style of the input, and always
    differs from the input in value. ``rng`` is a ``random.Random``.
    """
    lit = _parse_literal(n)
    width = len(lit.int_digits)
    for _ in range(1000):
        if width == 1:
            int_digits = str(rng.randrange(0, 10))
        else:
            int_digits = str(rng.randrange(1, 10)) + "".join(
                str(rng.randrange(0, 10)) for _ in range(width - 1))
        frac = "".join(str(rng.randrange(0, 10)) for _ in lit.frac_digits)
        if (int(int_digits), frac) == (int(lit.int_digits), lit.frac_digits):
            continue
        body = _group_thousands(int_digits) if lit.grouped else int_digits
        if frac:
            body += "." + frac
        return lit.sign + body
    raise Unsupported(f"could not resample {n!r} within its format class")
