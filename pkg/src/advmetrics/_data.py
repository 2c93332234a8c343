"""Loading of the packaged lexicon data files."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping

from .textops import Pos


def data_path(name: str) -> Path:
    return Path(str(resources.files("advmetrics").joinpath("data").joinpath(name)))


def read_word_list(path) -> tuple[str, ...]:
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return tuple(words)


def read_tsv(path) -> list[tuple[str, ...]]:
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.rstrip("\n")
        if line.strip() and not line.startswith("#"):
            rows.append(tuple(line.split("\t")))
    return rows


@lru_cache(maxsize=1)
def default_pos_lookup() -> Mapping[str, Pos]:
    """word -> POS map built from the packaged pools.

    Function words win over the open-class pools so auxiliaries like "can"
    or "will" are never offered as mismatch targets; pronouns come from the
    packaged pronoun map (sources and targets).
    """
    table: dict[str, Pos] = {}
    for noun in read_word_list(data_path("nouns.txt")):
        table[noun.lower()] = Pos.NOUN
    for verb in read_word_list(data_path("verbs.txt")):
        table[verb.lower()] = Pos.VERB
    for adj in read_word_list(data_path("adjectives.txt")):
        table[adj.lower()] = Pos.ADJECTIVE
    for word in read_word_list(data_path("function_words.txt")):
        table[word.lower()] = Pos.OTHER
    for row in read_tsv(data_path("pronoun_map.tsv")):
        table[row[0].lower()] = Pos.PRONOUN
        table[row[1].lower()] = Pos.PRONOUN
    return table
