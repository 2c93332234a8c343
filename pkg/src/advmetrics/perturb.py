"""Adversarial perturbation templates.

Twelve templates produce a near-copy of an anchor sentence with one key
error: nine adequacy phenomena (addition, omission, POS mismatches,
negation, number/pronoun/name errors) and three fluency phenomena (word
jumbling, typos, subject-verb disagreement). Templates can be composed
sequentially. All randomness flows through an explicit ``random.Random``;
the lexicon is read-only data loaded from plain-text files.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence

from . import textops
from ._data import data_path, read_tsv, read_word_list
from .errors import NotApplicable
from .textops import Pos, TokenKind, TokenizedSentence


class Phenomenon(str, Enum):
    ADDITION = "addition"
    OMISSION = "omission"
    MISMATCH_NOUN = "mismatch_noun"
    MISMATCH_VERB = "mismatch_verb"
    MISMATCH_ADJ = "mismatch_adj"
    NEGATION = "negation"
    NUMBER = "number"
    PRONOUN = "pronoun"
    NAME = "name"
    JUMBLING = "jumbling"
    SPELLING = "spelling"
    SVD = "svd"

    @property
    def is_fluency(self) -> bool:
        return self in _FLUENCY

    @property
    def is_adequacy(self) -> bool:
        return not self.is_fluency


_FLUENCY = {Phenomenon.JUMBLING, Phenomenon.SPELLING, Phenomenon.SVD}

ADEQUACY_PHENOMENA = tuple(p for p in Phenomenon if p.is_adequacy)
FLUENCY_PHENOMENA = tuple(p for p in Phenomenon if p.is_fluency)


def parse_phenomenon(name: str) -> Phenomenon:
    """Resolve a user-facing phenomenon name, accepting common aliases."""
    key = name.strip().lower().replace("-", "_")
    aliases = {
        "number_error": Phenomenon.NUMBER,
        "pronoun_error": Phenomenon.PRONOUN,
        "name_error": Phenomenon.NAME,
        "typo": Phenomenon.SPELLING,
        "spelling_error": Phenomenon.SPELLING,
        "jumble": Phenomenon.JUMBLING,
        "subject_verb_disagreement": Phenomenon.SVD,
    }
    if key in aliases:
        return aliases[key]
    try:
        return Phenomenon(key)
    except ValueError:
        valid = ", ".join(p.value for p in Phenomenon)
        raise ValueError(f"unknown phenomenon {name!r}; valid names: {valid}")


class NegationRule(NamedTuple):
    aux: str
    contracted: str
    uncontracted: str


class Edit(NamedTuple):
    """One span replacement; ``(start, end)`` index into the stage input."""
    start: int
    end: int
    replacement: str


@dataclass(frozen=True)
class PerturbationStage:
    phenomenon: Phenomenon
    edits: tuple[Edit, ...]


@dataclass
class PerturbationResult:
    original: str
    perturbed: str
    phenomena: tuple[Phenomenon, ...]
    stages: tuple[PerturbationStage, ...]
    rng_seed: Optional[int] = None

    @property
    def phenomenon_label(self) -> str:
        return "+".join(p.value for p in self.phenomena)

    @property
    def edits(self) -> tuple[Edit, ...]:
        return tuple(e for stage in self.stages for e in stage.edits)

    @property
    def edit_count(self) -> int:
        return len(self.edits)

    def replay(self) -> str:
        """Re-apply the stage edits to the original text."""
        text = self.original
        for stage in self.stages:
            text = apply_edits(text, stage.edits)
        return text


def apply_edits(text: str, edits: Iterable[Edit]) -> str:
    """Apply non-overlapping span replacements to ``text``."""
    out = []
    cursor = 0
    for start, end, replacement in sorted(edits):
        if start < cursor:
            raise ValueError("overlapping edits")
        out.append(text[cursor:start])
        out.append(replacement)
        cursor = end
    out.append(text[cursor:])
    return "".join(out)


@dataclass(frozen=True)
class Lexicon:
    """Word pools and replacement rules backing the templates."""

    nouns: tuple[str, ...]
    verbs: tuple[str, ...]
    adjectives: tuple[str, ...]
    pronoun_map: dict[str, tuple[str, ...]]
    # slot preserved by each (source, target) replacement pair
    pronoun_slots: dict[tuple[str, str], str]
    names_female: tuple[str, ...]
    names_male: tuple[str, ...]
    negation_rules: tuple[NegationRule, ...]
    function_words: frozenset[str]

    def __post_init__(self):
        for source, targets in self.pronoun_map.items():
            if source in targets:
                raise ValueError(f"pronoun map sends {source!r} to itself")
        name_set = {n.lower() for n in self.names_female + self.names_male}
        noun_set = {n.lower() for n in self.nouns}
        overlap = name_set & noun_set
        if overlap:
            raise ValueError(f"name lists overlap the noun pool: {sorted(overlap)}")

    @classmethod
    def load(cls, directory) -> "Lexicon":
        """Load from plain-text files (one word per line / tab-separated rules)."""
        d = Path(directory)
        pronoun_map: dict[str, tuple[str, ...]] = {}
        pronoun_slots: dict[tuple[str, str], str] = {}
        for row in read_tsv(d / "pronoun_map.tsv"):
            source, target = row[0].lower(), row[1].lower()
            slot = row[2] if len(row) > 2 else "unspecified"
            pronoun_map[source] = pronoun_map.get(source, ()) + (target,)
            pronoun_slots[(source, target)] = slot
        rules = tuple(
            NegationRule(r[0].lower(), r[1], r[2] if len(r) > 2 else f"{r[0]} not")
            for r in read_tsv(d / "negation_rules.tsv"))
        return cls(
            nouns=read_word_list(d / "nouns.txt"),
            verbs=read_word_list(d / "verbs.txt"),
            adjectives=read_word_list(d / "adjectives.txt"),
            pronoun_map=pronoun_map,
            pronoun_slots=pronoun_slots,
            names_female=read_word_list(d / "names_female.txt"),
            names_male=read_word_list(d / "names_male.txt"),
            negation_rules=rules,
            function_words=frozenset(read_word_list(d / "function_words.txt")),
        )

    @classmethod
    def default(cls) -> "Lexicon":
        return _default_lexicon()

    def pos_lookup(self) -> dict[str, Pos]:
        """word -> POS map for ``textops.tokenize``; pronouns win."""
        table: dict[str, Pos] = {}
        for noun in self.nouns:
            table[noun.lower()] = Pos.NOUN
        for verb in self.verbs:
            table[verb.lower()] = Pos.VERB
        for adj in self.adjectives:
            table[adj.lower()] = Pos.ADJECTIVE
        for word in self.function_words:
            table[word.lower()] = Pos.OTHER
        for source, targets in self.pronoun_map.items():
            table[source] = Pos.PRONOUN
            for t in targets:
                table[t] = Pos.PRONOUN
        return table

    def tokenize(self, text: str) -> TokenizedSentence:
        return textops.tokenize(text, pos_lookup=self.pos_lookup())

    def pool(self, pos: Pos) -> tuple[str, ...]:
        return {Pos.NOUN: self.nouns, Pos.VERB: self.verbs,
                Pos.ADJECTIVE: self.adjectives}[pos]


@lru_cache(maxsize=1)
def _default_lexicon() -> Lexicon:
    return Lexicon.load(data_path("nouns.txt").parent)


def match_case(template: str, word: str) -> str:
    """Copy simple casing (Title / UPPER) from ``template`` onto ``word``."""
    if template.isupper() and len(template) > 1:
        return word.upper()
    if template[:1].isupper():
        return word[:1].upper() + word[1:]
    return word


def third_person(lemma: str) -> str:
    """Regular 3rd-person-singular present form."""
    if lemma.endswith(("s", "x", "z", "ch", "sh", "o")):
        return lemma + "es"
    if lemma.endswith("y") and len(lemma) > 1 and lemma[-2] not in "aeiou":
        return lemma[:-1] + "ies"
    return lemma + "s"


def regular_past(lemma: str) -> str:
    if lemma.endswith("e"):
        return lemma + "d"
    if lemma.endswith("y") and len(lemma) > 1 and lemma[-2] not in "aeiou":
        return lemma[:-1] + "ied"
    return lemma + "ed"


def _verb_form(surface: str, pool: Sequence[str]) -> Optional[tuple[str, str]]:
    """(lemma, form) for a pool verb surface; form in {plain, third, past}."""
    w = surface.lower()
    pool_set = set(pool)
    if w in pool_set:
        return w, "plain"
    for lemma in textops._inflection_stems(w):
        if lemma in pool_set:
            if third_person(lemma) == w:
                return lemma, "third"
            if regular_past(lemma) == w:
                return lemma, "past"
    return None


def _single_edit(s: TokenizedSentence, index: int, replacement: str) -> tuple[Edit, ...]:
    start, end = s.tokens[index].char_span
    return (Edit(start, end, replacement),)


def _deletion_edits(s: TokenizedSentence, indices: Iterable[int]) -> tuple[Edit, ...]:
    """Span edits removing tokens plus one adjacent whitespace run each."""
    chosen = sorted(set(indices))
    edits = []
    i = 0
    while i < len(chosen):
        j = i
        while j + 1 < len(chosen) and chosen[j + 1] == chosen[j] + 1:
            j += 1
        first, last = chosen[i], chosen[j]
        if first > 0:
            start = s.tokens[first - 1].char_span[1]
            end = s.tokens[last].char_span[1]
        else:
            start = s.tokens[first].char_span[0]
            end = (s.tokens[last + 1].char_span[0]
                   if last + 1 < len(s.tokens) else len(s.source))
        edits.append(Edit(start, end, ""))
        i = j + 1
    return tuple(edits)


def _result(s: TokenizedSentence, phenomenon: Phenomenon,
            edits: tuple[Edit, ...]) -> PerturbationResult:
    perturbed = apply_edits(s.source, edits)
    if perturbed == s.source:
        raise NotApplicable(phenomenon.value, "perturbation left the text unchanged")
    return PerturbationResult(
        original=s.source,
        perturbed=perturbed,
        phenomena=(phenomenon,),
        stages=(PerturbationStage(phenomenon, edits),),
    )


def _indices_with_pos(s: TokenizedSentence, pos: Pos) -> list[int]:
    return [i for i, t in enumerate(s.tokens)
            if t.kind is TokenKind.WORD and t.pos is pos]


def _choice_not_equal(rng: random.Random, pool: Sequence[str],
                      avoid: str) -> Optional[str]:
    candidates = [w for w in pool if w.lower() != avoid.lower()]
    if not candidates:
        return None
    return rng.choice(candidates)


def perturb_addition(s: TokenizedSentence, lex: Lexicon,
                     rng: random.Random) -> PerturbationResult:
    """Append "and <random noun>" after a randomly chosen noun."""
    nouns = _indices_with_pos(s, Pos.NOUN)
    if not nouns:
        raise NotApplicable(Phenomenon.ADDITION.value, "no noun in sentence")
    host = rng.choice(nouns)
    added = _choice_not_equal(rng, lex.nouns, s.tokens[host].surface)
    if added is None:
        raise NotApplicable(Phenomenon.ADDITION.value, "noun pool exhausted")
    end = s.tokens[host].char_span[1]
    return _result(s, Phenomenon.ADDITION, (Edit(end, end, f" and {added}"),))


def perturb_omission(s: TokenizedSentence,
                     rng: random.Random) -> PerturbationResult:
    """Drop 1%-20% of the words (at least one); punctuation is untouched."""
    words = s.word_indices()
    if len(words) < 5:
        raise NotApplicable(Phenomenon.OMISSION.value,
                            "needs >= 5 words so one drop stays within 20%")
    rate = rng.uniform(0.01, 0.20)
    k = max(1, round(rate * len(words)))
    dropped = rng.sample(words, k)
    return _result(s, Phenomenon.OMISSION, _deletion_edits(s, dropped))


_MISMATCH_BY_POS = {
    Pos.NOUN: Phenomenon.MISMATCH_NOUN,
    Pos.VERB: Phenomenon.MISMATCH_VERB,
    Pos.ADJECTIVE: Phenomenon.MISMATCH_ADJ,
}


def perturb_mismatch(s: TokenizedSentence, pos: Pos, lex: Lexicon,
                     rng: random.Random) -> PerturbationResult:
    """Swap one word of the requested POS for another from the same pool."""
    phenomenon = _MISMATCH_BY_POS[pos]
    candidates = _indices_with_pos(s, pos)
    if not candidates:
        raise NotApplicable(phenomenon.value, f"no {pos.value} in sentence")
    index = rng.choice(candidates)
    surface = s.tokens[index].surface
    replacement = _choice_not_equal(rng, lex.pool(pos), surface)
    if replacement is None:
        raise NotApplicable(phenomenon.value, f"{pos.value} pool exhausted")
    return _result(s, phenomenon,
                   _single_edit(s, index, match_case(surface, replacement)))


def _negation_tables(lex: Lexicon):
    aux_of_contracted = {}
    contracted_of_aux = {}
    uncontracted_of_aux = {}
    for rule in lex.negation_rules:
        contracted_of_aux[rule.aux] = rule.contracted
        uncontracted_of_aux[rule.aux] = rule.uncontracted
        if rule.contracted.lower() != f"{rule.aux} not":
            aux_of_contracted[rule.contracted.lower()] = rule.aux
        if " " not in rule.uncontracted and rule.uncontracted.lower() != rule.aux:
            aux_of_contracted[rule.uncontracted.lower()] = rule.aux  # e.g. cannot
    return aux_of_contracted, contracted_of_aux, uncontracted_of_aux


def _next_word_index(s: TokenizedSentence, index: int) -> Optional[int]:
    for j in range(index + 1, len(s.tokens)):
        if s.tokens[j].kind is not TokenKind.PUNCTUATION:
            return j
    return None


def _prev_word_index(s: TokenizedSentence, index: int) -> Optional[int]:
    for j in range(index - 1, -1, -1):
        if s.tokens[j].kind is not TokenKind.PUNCTUATION:
            return j
    return None


def perturb_negation(s: TokenizedSentence, lex: Lexicon,
                     contracted: bool = True) -> PerturbationResult:
    """Flip the polarity of the first rule-covered verb group.

    An existing negation marker is removed; otherwise one is inserted,
    preferring contracted forms ("will" -> "won't") and falling back to
    do-support for pool verbs ("likes" -> "doesn't like"). Deterministic:
    no randomness is involved.
    """
    aux_of_contracted, contracted_of_aux, uncontracted_of_aux = _negation_tables(lex)
    # 1) remove an existing negation
    for i, tok in enumerate(s.tokens):
        if tok.kind is TokenKind.PUNCTUATION:
            continue
        low = tok.surface.lower()
        if low in aux_of_contracted:
            aux = aux_of_contracted[low]
            if low in ("don't", "doesn't", "didn't"):
                nxt = _next_word_index(s, i)
                if nxt is not None:
                    form = _verb_form(s.tokens[nxt].surface, lex.verbs)
                    if form and form[1] == "plain":
                        lemma = form[0]
                        inflected = {"don't": lemma,
                                     "doesn't": third_person(lemma),
                                     "didn't": regular_past(lemma)}[low]
                        start = tok.char_span[0]
                        end = s.tokens[nxt].char_span[1]
                        word = match_case(tok.surface, inflected)
                        return _result(s, Phenomenon.NEGATION,
                                       (Edit(start, end, word),))
            return _result(s, Phenomenon.NEGATION,
                           _single_edit(s, i, match_case(tok.surface, aux)))
        if low == "not":
            prev = _prev_word_index(s, i)
            if prev is not None and s.tokens[prev].surface.lower() in contracted_of_aux:
                prev_low = s.tokens[prev].surface.lower()
                if prev_low in ("do", "does", "did"):
                    nxt = _next_word_index(s, i)
                    if nxt is not None:
                        form = _verb_form(s.tokens[nxt].surface, lex.verbs)
                        if form and form[1] == "plain":
                            lemma = form[0]
                            inflected = {"do": lemma, "does": third_person(lemma),
                                         "did": regular_past(lemma)}[prev_low]
                            start = s.tokens[prev].char_span[0]
                            end = s.tokens[nxt].char_span[1]
                            word = match_case(s.tokens[prev].surface, inflected)
                            return _result(s, Phenomenon.NEGATION,
                                           (Edit(start, end, word),))
                return _result(s, Phenomenon.NEGATION,
                               _deletion_edits(s, [i]))
    # 2) insert at the first auxiliary
    for i, tok in enumerate(s.tokens):
        low = tok.surface.lower()
        if tok.kind is TokenKind.WORD and low in contracted_of_aux:
            if low == "may" and tok.surface == "May" and tok.char_span[0] != 0:
                continue  # mid-sentence "May" is the month, not the modal
            negated = contracted_of_aux[low] if contracted else uncontracted_of_aux[low]
            return _result(s, Phenomenon.NEGATION,
                           _single_edit(s, i, match_case(tok.surface, negated)))
    # 3) do-support on the first pool verb
    for i, tok in enumerate(s.tokens):
        if tok.kind is not TokenKind.WORD:
            continue
        form = _verb_form(tok.surface, lex.verbs)
        if form is None:
            continue
        lemma, kind = form
        do_word = {"plain": "do", "third": "does", "past": "did"}[kind]
        marker = (contracted_of_aux[do_word] if contracted
                  else uncontracted_of_aux[do_word])
        replacement = match_case(tok.surface, f"{marker} {lemma}")
        return _result(s, Phenomenon.NEGATION, _single_edit(s, i, replacement))
    raise NotApplicable(Phenomenon.NEGATION.value,
                        "no negation rule matches the sentence")


_MONTHS = {"january", "february", "march", "april", "may", "june", "july",
           "august", "september", "october", "november", "december",
           "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept",
           "oct", "nov", "dec"}
_ORDINAL_SUFFIXES = {"st", "nd", "rd", "th"}


def _is_date_like(s: TokenizedSentence, index: int) -> bool:
    """Year-shaped integers and numbers attached to month/ordinal context."""
    surface = s.tokens[index].surface
    if "." not in surface and "," not in surface and len(surface) == 4:
        if 1000 <= int(surface) <= 2100:
            return True
    nxt = index + 1 if index + 1 < len(s.tokens) else None
    if nxt is not None and s.tokens[nxt].surface.lower() in _ORDINAL_SUFFIXES:
        span = s.tokens[index].char_span, s.tokens[nxt].char_span
        if span[0][1] == span[1][0]:  # "3rd" with no gap
            return True
    for neighbor in (_prev_word_index(s, index), _next_word_index(s, index)):
        if neighbor is not None and s.tokens[neighbor].surface.lower() in _MONTHS:
            return True
    return False


def eligible_number_indices(s: TokenizedSentence) -> list[int]:
    return [i for i, t in enumerate(s.tokens)
            if t.kind is TokenKind.NUMBER and not _is_date_like(s, i)]


def perturb_number(s: TokenizedSentence,
                   rng: random.Random) -> PerturbationResult:
    """Replace every non-date number with a random one of the same format."""
    eligible = eligible_number_indices(s)
    if not eligible:
        raise NotApplicable(Phenomenon.NUMBER.value, "no non-date number")
    edits = []
    for i in eligible:
        surface = s.tokens[i].surface
        start, end = s.tokens[i].char_span
        edits.append(Edit(start, end,
                          textops.random_number_same_format(surface, rng)))
    return _result(s, Phenomenon.NUMBER, tuple(edits))


def perturb_pronoun(s: TokenizedSentence, lex: Lexicon,
                    rng: random.Random) -> PerturbationResult:
    """Replace every covered pronoun with a slot-preserving alternative."""
    edits = []
    for i, tok in enumerate(s.tokens):
        if tok.kind is not TokenKind.WORD:
            continue
        targets = lex.pronoun_map.get(tok.surface.lower())
        if not targets:
            continue
        target = targets[0] if len(targets) == 1 else rng.choice(targets)
        start, end = tok.char_span
        edits.append(Edit(start, end, match_case(tok.surface, target)))
    if not edits:
        raise NotApplicable(Phenomenon.PRONOUN.value, "no covered pronoun")
    return _result(s, Phenomenon.PRONOUN, tuple(edits))


def perturb_name(s: TokenizedSentence, lex: Lexicon,
                 rng: random.Random) -> PerturbationResult:
    """Replace exactly one name occurrence with one of the same gender."""
    female = set(lex.names_female)
    male = set(lex.names_male)
    occurrences = [i for i, t in enumerate(s.tokens)
                   if t.kind is TokenKind.WORD
                   and (t.surface in female or t.surface in male)]
    if not occurrences:
        raise NotApplicable(Phenomenon.NAME.value, "no known name in sentence")
    index = rng.choice(occurrences)
    surface = s.tokens[index].surface
    pool = lex.names_female if surface in female else lex.names_male
    replacement = _choice_not_equal(rng, pool, surface)
    if replacement is None:
        raise NotApplicable(Phenomenon.NAME.value, "name pool exhausted")
    return _result(s, Phenomenon.NAME, _single_edit(s, index, replacement))


def perturb_jumble(s: TokenizedSentence,
                   rng: random.Random) -> PerturbationResult:
    """Shuffle the words into a random non-identity order.

    Punctuation tokens keep their slots, so terminal punctuation stays
    terminal.
    """
    words = s.word_indices()
    if len(words) < 3:
        raise NotApplicable(Phenomenon.JUMBLING.value, "needs >= 3 words")
    surfaces = [s.tokens[i].surface for i in words]
    if len(set(surfaces)) == 1:
        raise NotApplicable(Phenomenon.JUMBLING.value,
                            "all words identical; shuffling cannot change text")
    for _ in range(1000):
        shuffled = surfaces[:]
        rng.shuffle(shuffled)
        if shuffled != surfaces:
            edits = tuple(Edit(*s.tokens[i].char_span, new)
                          for i, new in zip(words, shuffled)
                          if new != s.tokens[i].surface)
            return _result(s, Phenomenon.JUMBLING, edits)
    raise NotApplicable(Phenomenon.JUMBLING.value, "could not find a new order")


def perturb_typo(s: TokenizedSentence,
                 rng: random.Random) -> PerturbationResult:
    """Introduce one typo (adjacent transposition or character deletion)."""
    eligible = [i for i, t in enumerate(s.tokens)
                if t.kind is TokenKind.WORD and len(t.surface) >= 4]
    if not eligible:
        raise NotApplicable(Phenomenon.SPELLING.value, "no word of length >= 4")
    index = rng.choice(eligible)
    word = s.tokens[index].surface
    typo = word
    for _ in range(100):
        if rng.random() < 0.5:
            pos = rng.randrange(len(word) - 1)
            typo = word[:pos] + word[pos + 1] + word[pos] + word[pos + 2:]
        else:
            pos = rng.randrange(len(word))
            typo = word[:pos] + word[pos + 1:]
        if typo != word:
            break
    else:
        typo = word[:-1]  # deletion always changes the word
    return _result(s, Phenomenon.SPELLING, _single_edit(s, index, typo))


_SVD_BASE_FLIPS = {"is": "are", "are": "is", "was": "were", "were": "was",
                   "has": "have", "have": "has", "does": "do", "do": "does"}


def perturb_svd(s: TokenizedSentence, lex: Lexicon) -> PerturbationResult:
    """Flip the agreement morphology of the first covered verb form.

    The flip table is an involution, so applying the template twice
    restores the original sentence.
    """
    for i, tok in enumerate(s.tokens):
        if tok.kind is not TokenKind.WORD:
            continue
        low = tok.surface.lower()
        if low in _SVD_BASE_FLIPS:
            flipped = match_case(tok.surface, _SVD_BASE_FLIPS[low])
            return _result(s, Phenomenon.SVD, _single_edit(s, i, flipped))
        form = _verb_form(tok.surface, lex.verbs)
        if form is not None and form[1] in ("plain", "third"):
            lemma, kind = form
            flipped = lemma if kind == "third" else third_person(lemma)
            return _result(s, Phenomenon.SVD,
                           _single_edit(s, i, match_case(tok.surface, flipped)))
    raise NotApplicable(Phenomenon.SVD.value, "no rule-covered verb form")


def apply_phenomenon(s: TokenizedSentence, phenomenon: Phenomenon,
                     lex: Lexicon, rng: random.Random) -> PerturbationResult:
    """Dispatch a single template by phenomenon."""
    if phenomenon is Phenomenon.ADDITION:
        return perturb_addition(s, lex, rng)
    if phenomenon is Phenomenon.OMISSION:
        return perturb_omission(s, rng)
    if phenomenon is Phenomenon.MISMATCH_NOUN:
        return perturb_mismatch(s, Pos.NOUN, lex, rng)
    if phenomenon is Phenomenon.MISMATCH_VERB:
        return perturb_mismatch(s, Pos.VERB, lex, rng)
    if phenomenon is Phenomenon.MISMATCH_ADJ:
        return perturb_mismatch(s, Pos.ADJECTIVE, lex, rng)
    if phenomenon is Phenomenon.NEGATION:
        return perturb_negation(s, lex)
    if phenomenon is Phenomenon.NUMBER:
        return perturb_number(s, rng)
    if phenomenon is Phenomenon.PRONOUN:
        return perturb_pronoun(s, lex, rng)
    if phenomenon is Phenomenon.NAME:
        return perturb_name(s, lex, rng)
    if phenomenon is Phenomenon.JUMBLING:
        return perturb_jumble(s, rng)
    if phenomenon is Phenomenon.SPELLING:
        return perturb_typo(s, rng)
    if phenomenon is Phenomenon.SVD:
        return perturb_svd(s, lex)
    raise ValueError(f"unhandled phenomenon: {phenomenon}")


def compose(s: TokenizedSentence, kinds: Sequence[Phenomenon], lex: Lexicon,
            rng: random.Random) -> PerturbationResult:
    """Apply several templates left to right, each to the previous output."""
    if not kinds:
        raise ValueError("compose needs at least one phenomenon")
    current = s
    stages: list[PerturbationStage] = []
    for kind in kinds:
        step = apply_phenomenon(current, kind, lex, rng)
        stages.extend(step.stages)
        current = lex.tokenize(step.perturbed)
    return PerturbationResult(
        original=s.source,
        perturbed=current.source,
        phenomena=tuple(kinds),
        stages=tuple(stages),
    )
