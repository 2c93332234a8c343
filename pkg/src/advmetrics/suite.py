"""Preference test-suite construction from seed corpora.

Each suite instance pairs an anchor text with a meaning-preserving
paraphrase candidate and an adversarially perturbed near-copy. Reference-
based suites perturb the reference itself; reference-free suites perturb a
pre-supplied pivot translation (or top-ranked reference) while the human
reference serves as the good candidate. A good metric should prefer the
paraphrase side of every instance.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from . import textops
from .errors import (
    EmptyInput,
    MissingField,
    MissingParaphrase,
    NotApplicable,
    Unsupported,
    WrongArity,
)
from .jsonl import SUITE_FORMAT, read_records, write_records
from .perturb import (
    Edit,
    Lexicon,
    PerturbationResult,
    PerturbationStage,
    Phenomenon,
    apply_phenomenon,
    compose,
    eligible_number_indices,
    parse_phenomenon,
)

PhenomenonSpec = Union[Phenomenon, Sequence[Phenomenon]]


class Setting(str, Enum):
    REF_BASED = "ref-based"
    REF_FREE = "ref-free"


class ParaSource(str, Enum):
    ORIGINAL = "original"
    BACKTRANSLATION = "backtranslation"
    NUMBERWORDS = "numberwords"


@dataclass(frozen=True)
class SeedRecord:
    """One seed: a reference plus optional source-side and paraphrase fields."""

    id: str
    ref: str
    src: Optional[str] = None
    para: Optional[str] = None
    pivot_r: Optional[str] = None
    lang_pair: Optional[tuple[str, str]] = None

    def __post_init__(self):
        if not self.id or ":" in self.id:
            raise ValueError(f"seed id must be non-empty without ':': {self.id!r}")
        if not self.ref or not self.ref.strip():
            raise ValueError(f"seed {self.id}: ref must be non-empty")

    def to_json(self) -> dict:
        record = {"id": self.id, "ref": self.ref}
        if self.src is not None:
            record["src"] = self.src
        if self.para is not None:
            record["para"] = self.para
        if self.pivot_r is not None:
            record["pivot_r"] = self.pivot_r
        if self.lang_pair is not None:
            record["lang_pair"] = list(self.lang_pair)
        return record

    @classmethod
    def from_json(cls, record: dict) -> "SeedRecord":
        lang_pair = record.get("lang_pair")
        return cls(
            id=record["id"],
            ref=record["ref"],
            src=record.get("src"),
            para=record.get("para"),
            pivot_r=record.get("pivot_r"),
            lang_pair=tuple(lang_pair) if lang_pair else None,
        )


@dataclass(frozen=True)
class AdversarialInstance:
    id: str
    seed_id: str
    phenomena: tuple[Phenomenon, ...]
    setting: Setting
    anchor: str
    cand_para: str
    cand_adv: str
    para_source: ParaSource
    perturbation: PerturbationResult

    @property
    def phenomenon_label(self) -> str:
        return "+".join(p.value for p in self.phenomena)

    @property
    def perturb_source(self) -> str:
        """Text the adversarial candidate was derived from (ref or pivot)."""
        return self.perturbation.original

    def validate(self):
        if self.cand_adv == self.cand_para:
            raise ValueError(f"{self.id}: cand_adv equals cand_para")
        if self.cand_adv == self.anchor:
            raise ValueError(f"{self.id}: cand_adv equals the anchor")
        if self.perturbation.perturbed != self.cand_adv:
            raise ValueError(f"{self.id}: perturbation record is inconsistent")

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "seed_id": self.seed_id,
            "phenomenon": self.phenomenon_label,
            "setting": self.setting.value,
            "anchor": self.anchor,
            "cand_para": self.cand_para,
            "cand_adv": self.cand_adv,
            "para_source": self.para_source.value,
            "perturbation": {
                "source": self.perturbation.original,
                "rng_seed": self.perturbation.rng_seed,
                "stages": [
                    {"phenomenon": stage.phenomenon.value,
                     "edits": [[e.start, e.end, e.replacement]
                               for e in stage.edits]}
                    for stage in self.perturbation.stages
                ],
            },
        }

    @classmethod
    def from_json(cls, record: dict) -> "AdversarialInstance":
        meta = record["perturbation"]
        stages = tuple(
            PerturbationStage(
                Phenomenon(stage["phenomenon"]),
                tuple(Edit(*edit) for edit in stage["edits"]))
            for stage in meta["stages"])
        phenomena = tuple(Phenomenon(p) for p in record["phenomenon"].split("+"))
        perturbation = PerturbationResult(
            original=meta["source"],
            perturbed=record["cand_adv"],
            phenomena=phenomena,
            stages=stages,
            rng_seed=meta.get("rng_seed"),
        )
        return cls(
            id=record["id"],
            seed_id=record["seed_id"],
            phenomena=phenomena,
            setting=Setting(record["setting"]),
            anchor=record["anchor"],
            cand_para=record["cand_para"],
            cand_adv=record["cand_adv"],
            para_source=ParaSource(record["para_source"]),
            perturbation=perturbation,
        )


@dataclass
class GenerationConfig:
    seed: Union[int, str]
    phenomena: tuple[str, ...]
    setting: Setting
    para_mode: ParaSource
    task: str = "mt"  # "mt" or "summarization"

    def to_json(self) -> dict:
        return {"seed": self.seed, "phenomena": list(self.phenomena),
                "setting": self.setting.value, "para_mode": self.para_mode.value,
                "task": self.task}


@dataclass
class TestSuite:
    name: str
    setting: Setting
    instances: list[AdversarialInstance]
    skipped: dict[str, int] = field(default_factory=dict)
    config: Optional[GenerationConfig] = None

    @property
    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for inst in self.instances:
            out[inst.phenomenon_label] = out.get(inst.phenomenon_label, 0) + 1
        return out

    def instance_ids(self) -> list[str]:
        return [inst.id for inst in self.instances]

    def validate(self):
        seen = set()
        for inst in self.instances:
            if inst.id in seen:
                raise ValueError(f"duplicate instance id {inst.id}")
            seen.add(inst.id)
            inst.validate()


def normalize_phenomena(items: Iterable[PhenomenonSpec]) -> list[tuple[Phenomenon, ...]]:
    out = []
    for item in items:
        if isinstance(item, Phenomenon):
            out.append((item,))
        else:
            out.append(tuple(item))
    return out


def parse_phenomena_arg(arg: str) -> list[tuple[Phenomenon, ...]]:
    """Parse "number,negation,number+negation" into phenomenon tuples."""
    out = []
    for chunk in arg.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        out.append(tuple(parse_phenomenon(part) for part in chunk.split("+")))
    return out


def derive_seed(global_seed: Union[int, str], *parts: str) -> int:
    """Stable per-instance rng seed from the global seed and instance key."""
    key = ":".join([str(global_seed), *parts])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


_CURRENCY_WORDS = {"$": "dollars", "€": "euros", "£": "pounds",
                   "¥": "yen"}
_SCALE_WORDS = {"thousand", "million", "billion"}


def verbalize_numbers(text: str, lex: Lexicon) -> str:
    """Spell out every non-date number in ``text`` as English words.

    Currency sigils verbalize too, landing after any scale word:
    "$100 billion" becomes "one hundred billion dollars".
    """
    sentence = lex.tokenize(text)
    eligible = eligible_number_indices(sentence)
    if not eligible:
        raise NotApplicable(Phenomenon.NUMBER.value, "no non-date number")
    replacements: dict[int, Optional[str]] = {}
    for i in eligible:
        words = textops.number_to_words(sentence.tokens[i].surface)
        currency = None
        if i > 0 and sentence.tokens[i - 1].surface in _CURRENCY_WORDS \
                and sentence.tokens[i - 1].char_span[1] == sentence.tokens[i].char_span[0]:
            currency = _CURRENCY_WORDS[sentence.tokens[i - 1].surface]
            replacements[i - 1] = ""  # sigil and number are adjacent
        scale_index = None
        if i + 1 < len(sentence.tokens) \
                and sentence.tokens[i + 1].surface.lower() in _SCALE_WORDS:
            scale_index = i + 1
        if currency is None:
            replacements[i] = words
        elif scale_index is not None:
            replacements[i] = words
            replacements[scale_index] = \
                f"{sentence.tokens[scale_index].surface} {currency}"
        else:
            replacements[i] = f"{words} {currency}"
    return sentence.rebuild(replacements)


def _perturb(source: str, kinds: tuple[Phenomenon, ...], lex: Lexicon,
             rng_seed: int) -> PerturbationResult:
    sentence = lex.tokenize(source)
    rng = random.Random(rng_seed)
    if len(kinds) == 1:
        result = apply_phenomenon(sentence, kinds[0], lex, rng)
    else:
        result = compose(sentence, kinds, lex, rng)
    result.rng_seed = rng_seed
    return result


def _make_para(seed_record: SeedRecord, kinds: tuple[Phenomenon, ...],
               lex: Lexicon, para_mode: ParaSource) -> tuple[str, ParaSource]:
    """Paraphrase side of one instance.

    Number-error instances (including composites touching numbers) always
    verbalize the reference's numbers; everything else takes the seed's
    pre-supplied paraphrase, whose provenance is ``para_mode``.
    """
    if Phenomenon.NUMBER in kinds:
        return verbalize_numbers(seed_record.ref, lex), ParaSource.NUMBERWORDS
    if seed_record.para is None:
        raise MissingParaphrase(
            f"seed {seed_record.id} lacks the paraphrase required for "
            f"{'+'.join(k.value for k in kinds)} in {para_mode.value} mode")
    return seed_record.para, para_mode


def build_ref_based(seeds: Sequence[SeedRecord],
                    phenomena: Iterable[PhenomenonSpec],
                    lex: Lexicon,
                    seed: Union[int, str] = 0,
                    para_mode: Union[str, ParaSource] = ParaSource.ORIGINAL,
                    name: str = "ref-based-suite",
                    task: str = "mt") -> TestSuite:
    """Perturb each reference into cand_adv; the paraphrase is the good side."""
    para_mode = ParaSource(para_mode)
    if para_mode is ParaSource.NUMBERWORDS:
        raise ValueError("para_mode names the seed paraphrase provenance; "
                         "number instances verbalize automatically")
    kinds_list = normalize_phenomena(phenomena)
    instances: list[AdversarialInstance] = []
    skipped: dict[str, int] = {}
    for record in seeds:
        for kinds in kinds_list:
            label = "+".join(k.value for k in kinds)
            rng_seed = derive_seed(seed, record.id, label)
            try:
                cand_para, source = _make_para(record, kinds, lex, para_mode)
                perturbation = _perturb(record.ref, kinds, lex, rng_seed)
            except (NotApplicable, Unsupported, EmptyInput):
                skipped[label] = skipped.get(label, 0) + 1
                continue
            instance = AdversarialInstance(
                id=f"{record.id}:{label}",
                seed_id=record.id,
                phenomena=kinds,
                setting=Setting.REF_BASED,
                anchor=record.ref,
                cand_para=cand_para,
                cand_adv=perturbation.perturbed,
                para_source=source,
                perturbation=perturbation,
            )
            try:
                instance.validate()
            except ValueError:
                skipped[label] = skipped.get(label, 0) + 1
                continue
            instances.append(instance)
    config = GenerationConfig(
        seed=seed,
        phenomena=tuple("+".join(k.value for k in kinds) for kinds in kinds_list),
        setting=Setting.REF_BASED,
        para_mode=para_mode,
        task=task)
    return TestSuite(name=name, setting=Setting.REF_BASED,
                     instances=instances, skipped=skipped, config=config)


def build_ref_free(seeds: Sequence[SeedRecord],
                   phenomena: Iterable[PhenomenonSpec],
                   lex: Lexicon,
                   seed: Union[int, str] = 0,
                   name: str = "ref-free-suite",
                   task: str = "mt") -> TestSuite:
    """Perturb the pivot translation; the human reference is the good side."""
    kinds_list = normalize_phenomena(phenomena)
    instances: list[AdversarialInstance] = []
    skipped: dict[str, int] = {}
    for record in seeds:
        if record.src is None or record.pivot_r is None:
            raise MissingField(
                f"seed {record.id}: ref-free construction needs src and pivot_r")
        for kinds in kinds_list:
            label = "+".join(k.value for k in kinds)
            rng_seed = derive_seed(seed, record.id, label)
            try:
                perturbation = _perturb(record.pivot_r, kinds, lex, rng_seed)
            except (NotApplicable, Unsupported, EmptyInput):
                skipped[label] = skipped.get(label, 0) + 1
                continue
            instance = AdversarialInstance(
                id=f"{record.id}:{label}",
                seed_id=record.id,
                phenomena=kinds,
                setting=Setting.REF_FREE,
                anchor=record.src,
                cand_para=record.ref,
                cand_adv=perturbation.perturbed,
                para_source=ParaSource.ORIGINAL,
                perturbation=perturbation,
            )
            try:
                instance.validate()
            except ValueError:
                skipped[label] = skipped.get(label, 0) + 1
                continue
            instances.append(instance)
    config = GenerationConfig(
        seed=seed,
        phenomena=tuple("+".join(k.value for k in kinds) for kinds in kinds_list),
        setting=Setting.REF_FREE,
        para_mode=ParaSource.ORIGINAL,
        task=task)
    return TestSuite(name=name, setting=Setting.REF_FREE,
                     instances=instances, skipped=skipped, config=config)


def select_summeval_reference(refs: Sequence[str]) -> tuple[str, list[str]]:
    """Pick the pivot among 11 references by mean ROUGE-L F1 vs the rest.

    Returns (pivot, remaining 10 in original order); ties break toward the
    lowest index.
    """
    if len(refs) != 11:
        raise WrongArity(f"expected exactly 11 references, got {len(refs)}")
    best_index = 0
    best_score = -1.0
    for i, candidate in enumerate(refs):
        others = [r for j, r in enumerate(refs) if j != i]
        mean = sum(textops.rouge_l_f1(candidate, other)
                   for other in others) / len(others)
        if mean > best_score:
            best_index, best_score = i, mean
    remaining = [r for j, r in enumerate(refs) if j != best_index]
    return refs[best_index], remaining


@dataclass(frozen=True)
class SuiteStats:
    counts: dict[str, int]
    skipped: dict[str, int]
    mean_para_distance: Optional[float]
    mean_adv_distance: Optional[float]
    per_phenomenon_para_distance: dict[str, float]
    per_phenomenon_adv_distance: dict[str, float]


def suite_stats(suite: TestSuite) -> SuiteStats:
    """Per-phenomenon counts and mean normalized edit distances.

    Distances are measured against the perturbation source: the anchor in
    ref-based suites, the pivot text in ref-free ones (where the paraphrase
    slot holds the human reference).
    """
    para_distances: dict[str, list[float]] = {}
    adv_distances: dict[str, list[float]] = {}
    for inst in suite.instances:
        src = inst.perturb_source
        para_distances.setdefault(inst.phenomenon_label, []).append(
            textops.levenshtein_normalized(src, inst.cand_para))
        adv_distances.setdefault(inst.phenomenon_label, []).append(
            textops.levenshtein_normalized(src, inst.cand_adv))
    all_para = [d for ds in para_distances.values() for d in ds]
    all_adv = [d for ds in adv_distances.values() for d in ds]
    return SuiteStats(
        counts=suite.counts,
        skipped=dict(suite.skipped),
        mean_para_distance=sum(all_para) / len(all_para) if all_para else None,
        mean_adv_distance=sum(all_adv) / len(all_adv) if all_adv else None,
        per_phenomenon_para_distance={
            k: sum(v) / len(v) for k, v in para_distances.items()},
        per_phenomenon_adv_distance={
            k: sum(v) / len(v) for k, v in adv_distances.items()},
    )


# ------------------------------------------------------------------ files

def save_seeds(path, seeds: Sequence[SeedRecord]) -> int:
    return write_records(path, SUITE_FORMAT,
                         (s.to_json() for s in seeds),
                         header_extra={"kind": "seeds"})


def load_seeds(path) -> list[SeedRecord]:
    _, records = read_records(path, SUITE_FORMAT)
    return [SeedRecord.from_json(r) for r in records]


def save_suite(path, suite: TestSuite) -> int:
    header = {
        "kind": "instances",
        "name": suite.name,
        "setting": suite.setting.value,
        "counts": suite.counts,
        "skipped": suite.skipped,
    }
    if suite.config is not None:
        header["config"] = suite.config.to_json()
    return write_records(path, SUITE_FORMAT,
                         (inst.to_json() for inst in suite.instances),
                         header_extra=header)


def load_suite(path) -> TestSuite:
    header, records = read_records(path, SUITE_FORMAT)
    instances = [AdversarialInstance.from_json(r) for r in records]
    config = None
    if "config" in header:
        c = header["config"]
        config = GenerationConfig(
            seed=c["seed"], phenomena=tuple(c["phenomena"]),
            setting=Setting(c["setting"]), para_mode=ParaSource(c["para_mode"]),
            task=c.get("task", "mt"))
    suite = TestSuite(
        name=header.get("name", "suite"),
        setting=Setting(header.get("setting", "ref-based")),
        instances=instances,
        skipped=dict(header.get("skipped", {})),
        config=config)
    if "counts" in header and header["counts"] != suite.counts:
        raise ValueError(
            f"{path}: header counts {header['counts']} disagree with the "
            f"instance list {suite.counts}")
    suite.validate()
    return suite
