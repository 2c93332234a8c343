"""Evaluation statistics: preference accuracy, correlations, strategy selection.

Adversarial suites are scored by preference accuracy (strictly preferring
the paraphrase over the adversarial candidate; ties count as incorrect and
are reported). Standard judgment datasets are scored by Pearson at the
segment level, Pearson over per-system means at the system level, Kendall
tau-b where ranks carry ties, and Spearman for rank-level analyses.
Pooling strategies are selected by winning frequency, optionally leaving
the evaluated dataset out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import (
    AllTied,
    ConstantVector,
    EmptyInput,
    EmptyJoin,
    IdMismatch,
    IncompleteGrid,
    LengthMismatch,
    TooFewDatasets,
    TooFewSystems,
)
from .nli import PoolingStrategy, all_strategies


def _entries(batch) -> Mapping[str, float]:
    """Accept either a ScoreBatch or a plain id -> score mapping."""
    return getattr(batch, "entries", batch)


# ------------------------------------------------------------ correlations

def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation; constant vectors are an error."""
    if len(x) != len(y):
        raise LengthMismatch(f"{len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise LengthMismatch(f"need at least 2 pairs, got {n}")
    mean_x = sum(x) / n
    mean_y = sum(y) / n
    dx = [a - mean_x for a in x]
    dy = [b - mean_y for b in y]
    var_x = sum(a * a for a in dx)
    var_y = sum(b * b for b in dy)
    if var_x == 0 or var_y == 0:
        raise ConstantVector("correlation is undefined for a constant vector")
    return sum(a * b for a, b in zip(dx, dy)) / math.sqrt(var_x * var_y)


def fractional_ranks(x: Sequence[float]) -> list[float]:
    """Average ranks (1-based); tied values share the mean of their ranks."""
    order = sorted(range(len(x)), key=lambda i: x[i])
    ranks = [0.0] * len(x)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and x[order[j + 1]] == x[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of fractional ranks."""
    if len(x) != len(y):
        raise LengthMismatch(f"{len(x)} vs {len(y)}")
    return pearson(fractional_ranks(x), fractional_ranks(y))


def kendall(x: Sequence[float], y: Sequence[float]) -> float:
    """Kendall tau-b: (C - D) / sqrt((C + D + Tx)(C + D + Ty)).

    Tx / Ty count pairs tied only in x / only in y; pairs tied in both
    drop out of both factors. A constant vector makes the statistic
    undefined (AllTied).
    """
    if len(x) != len(y):
        raise LengthMismatch(f"{len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise LengthMismatch(f"need at least 2 pairs, got {n}")
    if len(set(x)) == 1 or len(set(y)) == 1:
        raise AllTied("rank correlation is undefined for an all-tied vector")
    concordant = discordant = ties_x_only = ties_y_only = 0
    for i in range(n):
        for j in range(i + 1, n):
            sx = (x[i] > x[j]) - (x[i] < x[j])
            sy = (y[i] > y[j]) - (y[i] < y[j])
            if sx == 0 and sy == 0:
                continue
            if sx == 0:
                ties_x_only += 1
            elif sy == 0:
                ties_y_only += 1
            elif sx == sy:
                concordant += 1
            else:
                discordant += 1
    denom = math.sqrt((concordant + discordant + ties_x_only)
                      * (concordant + discordant + ties_y_only))
    return (concordant - discordant) / denom


# ------------------------------------------------------- preference accuracy

@dataclass(frozen=True)
class PhenomenonAccuracy:
    correct: int
    total: int
    ties: int

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0


@dataclass(frozen=True)
class PreferenceAccuracy:
    accuracy: float
    correct: int
    total: int
    ties: int
    per_phenomenon: dict[str, PhenomenonAccuracy]


def phenomenon_of_instance_id(instance_id: str) -> str:
    """Instance ids are "<seed>:<phenomenon>"; candidate suffixes are ignored."""
    base = instance_id.split("#", 1)[0]
    _, sep, label = base.rpartition(":")
    return label if sep else "unknown"


def preference_accuracy(para_scores, adv_scores,
                        phenomena: Optional[Mapping[str, str]] = None,
                        ) -> PreferenceAccuracy:
    """Fraction of instances whose paraphrase outscores the adversarial text.

    The inequality is strict: ties and inversions both count as incorrect
    (tie counts are reported so half-credit variants stay recomputable).
    """
    para = _entries(para_scores)
    adv = _entries(adv_scores)
    if set(para) != set(adv):
        raise IdMismatch(
            f"{len(set(para) ^ set(adv))} ids differ between the two batches")
    per: dict[str, list[int]] = {}
    correct = ties = 0
    for instance_id in para:
        label = (phenomena or {}).get(instance_id) \
            or phenomenon_of_instance_id(instance_id)
        bucket = per.setdefault(label, [0, 0, 0])  # correct, total, ties
        bucket[1] += 1
        if para[instance_id] > adv[instance_id]:
            bucket[0] += 1
            correct += 1
        elif para[instance_id] == adv[instance_id]:
            bucket[2] += 1
            ties += 1
    total = len(para)
    return PreferenceAccuracy(
        accuracy=correct / total if total else 0.0,
        correct=correct,
        total=total,
        ties=ties,
        per_phenomenon={label: PhenomenonAccuracy(c, t, tie)
                        for label, (c, t, tie) in sorted(per.items())},
    )


# --------------------------------------------------------- human judgments

@dataclass(frozen=True)
class HumanJudgmentRecord:
    segment_id: str
    system_id: str
    score: float
    dataset: str = ""
    criterion: str = ""
    level: str = "segment"
    reference_set_id: str = ""  # which reference set scored this segment

    @property
    def key(self) -> str:
        return f"{self.segment_id}|{self.system_id}"

    def to_json(self) -> dict:
        record = {"segment_id": self.segment_id, "system_id": self.system_id,
                  "score": self.score, "dataset": self.dataset,
                  "criterion": self.criterion, "level": self.level}
        if self.reference_set_id:
            record["reference_set_id"] = self.reference_set_id
        return record

    @classmethod
    def from_json(cls, record: dict) -> "HumanJudgmentRecord":
        return cls(segment_id=str(record["segment_id"]),
                   system_id=str(record["system_id"]),
                   score=float(record["score"]),
                   dataset=record.get("dataset", ""),
                   criterion=record.get("criterion", ""),
                   level=record.get("level", "segment"),
                   reference_set_id=record.get("reference_set_id", ""))


def validate_judgments(records: Sequence[HumanJudgmentRecord]):
    seen = set()
    for r in records:
        key = (r.dataset, r.criterion, r.segment_id, r.system_id)
        if key in seen:
            raise ValueError(f"duplicate judgment for {key}")
        seen.add(key)


@dataclass(frozen=True)
class SegmentLevelResult:
    value: float
    pairs: int
    dropped_scores: int
    dropped_judgments: int


def segment_level(metric_scores, judgments: Sequence[HumanJudgmentRecord],
                  correlation=pearson) -> SegmentLevelResult:
    """Correlate per-segment metric scores with per-segment human scores.

    Scores are keyed "<segment_id>|<system_id>"; unmatched entries on either
    side are dropped and counted.
    """
    scores = _entries(metric_scores)
    joined = [(scores[r.key], r.score) for r in judgments if r.key in scores]
    if not joined:
        raise EmptyJoin("no (segment, system) key matches between inputs")
    matched_keys = {r.key for r in judgments if r.key in scores}
    value = correlation([m for m, _ in joined], [h for _, h in joined])
    return SegmentLevelResult(
        value=value,
        pairs=len(joined),
        dropped_scores=len(set(scores) - matched_keys),
        dropped_judgments=len(judgments) - len(joined),
    )


@dataclass(frozen=True)
class SystemLevelResult:
    value: float
    systems: int
    degenerate: bool  # exactly two systems force r = +/-1


def system_level(metric_scores, judgments: Sequence[HumanJudgmentRecord],
                 correlation=pearson) -> SystemLevelResult:
    """Correlate per-system mean metric scores with per-system mean judgments."""
    scores = _entries(metric_scores)
    by_system: dict[str, list[tuple[float, float]]] = {}
    for r in judgments:
        if r.key in scores:
            by_system.setdefault(r.system_id, []).append((scores[r.key], r.score))
    if not by_system:
        raise EmptyJoin("no (segment, system) key matches between inputs")
    if len(by_system) < 2:
        raise TooFewSystems(f"need >= 2 systems, got {len(by_system)}")
    systems = sorted(by_system)
    metric_means = [sum(m for m, _ in by_system[s]) / len(by_system[s])
                    for s in systems]
    human_means = [sum(h for _, h in by_system[s]) / len(by_system[s])
                   for s in systems]
    return SystemLevelResult(
        value=correlation(metric_means, human_means),
        systems=len(systems),
        degenerate=len(systems) == 2,
    )


def multi_ref_aggregate(scores_per_reference: Mapping[str, Sequence[float]],
                        mode: str) -> dict[str, float]:
    """Collapse per-reference score lists to one score per instance."""
    if mode not in ("mean", "max"):
        raise ValueError(f"mode must be 'mean' or 'max', got {mode!r}")
    out = {}
    for instance_id, values in scores_per_reference.items():
        if not values:
            raise EmptyInput(f"instance {instance_id} has no reference scores")
        out[instance_id] = (max(values) if mode == "max"
                            else sum(values) / len(values))
    return out


# ------------------------------------------------------- strategy selection

ResultsGrid = Mapping[tuple[PoolingStrategy, str, str], float]


@dataclass
class WinCounts:
    adversarial: int = 0
    standard: int = 0

    @property
    def total(self) -> int:
        return self.adversarial + self.standard

    @property
    def label(self) -> str:
        return f"{self.adversarial}+{self.standard}"


def winning_frequency(results: ResultsGrid,
                      dataset_kinds: Mapping[str, str],
                      strategies: Optional[Sequence[PoolingStrategy]] = None,
                      ) -> dict[PoolingStrategy, WinCounts]:
    """Count, per strategy, the (dataset, metric) cells it wins.

    Every cell must contain all candidate strategies (the full 15 unless a
    restricted set is given, e.g. forward-only for ref-free summarization);
    the argmax strategy of each cell earns one win (ties credit every tied
    strategy), bucketed by the dataset kind ("adversarial" or "standard").
    """
    strategies = tuple(strategies) if strategies is not None else all_strategies()
    cells: dict[tuple[str, str], dict[PoolingStrategy, float]] = {}
    for (strategy, dataset, metric), value in results.items():
        cells.setdefault((dataset, metric), {})[strategy] = value
    for (dataset, metric), row in sorted(cells.items()):
        missing = [s.label for s in strategies if s not in row]
        if missing:
            raise IncompleteGrid(
                f"cell ({dataset}, {metric}) lacks strategies: {missing}")
    table = {s: WinCounts() for s in strategies}
    for (dataset, metric), row in sorted(cells.items()):
        kind = dataset_kinds.get(dataset)
        if kind not in ("adversarial", "standard"):
            raise ValueError(f"dataset {dataset!r} has unknown kind {kind!r}")
        best = max(row.values())
        for strategy in strategies:
            if row[strategy] == best:
                if kind == "adversarial":
                    table[strategy].adversarial += 1
                else:
                    table[strategy].standard += 1
    return table


def select_strategy(results: ResultsGrid,
                    dataset_kinds: Mapping[str, str],
                    strategies: Optional[Sequence[PoolingStrategy]] = None,
                    ) -> PoolingStrategy:
    """Strategy with the most total wins; ties break in canonical order."""
    strategies = tuple(strategies) if strategies is not None else all_strategies()
    table = winning_frequency(results, dataset_kinds, strategies)
    best = max(range(len(strategies)),
               key=lambda i: (table[strategies[i]].total, -i))
    return strategies[best]


def leave_one_out_strategy(results: ResultsGrid,
                           dataset_kinds: Mapping[str, str],
                           held_out_dataset: str,
                           strategies: Optional[Sequence[PoolingStrategy]] = None,
                           ) -> PoolingStrategy:
    """Select by winning frequency on all datasets except the held-out one."""
    datasets = {dataset for (_, dataset, _) in results}
    if len(datasets) < 2:
        raise TooFewDatasets("leave-one-out needs at least 2 datasets")
    filtered = {key: v for key, v in results.items()
                if key[1] != held_out_dataset}
    kinds = {d: k for d, k in dataset_kinds.items() if d != held_out_dataset}
    return select_strategy(filtered, kinds, strategies)


@dataclass(frozen=True)
class LeaveOneOutEntry:
    dataset: str
    strategy: PoolingStrategy
    performance: float
    global_strategy: PoolingStrategy
    global_performance: float

    @property
    def delta(self) -> float:
        return self.performance - self.global_performance


def leave_one_out_report(results: ResultsGrid,
                         dataset_kinds: Mapping[str, str],
                         metric: str,
                         strategies: Optional[Sequence[PoolingStrategy]] = None,
                         ) -> list[LeaveOneOutEntry]:
    """Per-dataset held-out selection with the performance delta vs global."""
    global_strategy = select_strategy(results, dataset_kinds, strategies)
    entries = []
    for dataset in sorted({d for (_, d, _) in results}):
        strategy = leave_one_out_strategy(results, dataset_kinds, dataset,
                                          strategies)
        entries.append(LeaveOneOutEntry(
            dataset=dataset,
            strategy=strategy,
            performance=results[(strategy, dataset, metric)],
            global_strategy=global_strategy,
            global_performance=results[(global_strategy, dataset, metric)],
        ))
    return entries


# --------------------------------------------------------- hardness analysis

@dataclass(frozen=True)
class EditDistanceAnalysis:
    mean_distance_failures: Optional[float]
    mean_distance_successes: Optional[float]
    failures: int
    successes: int

    @property
    def gap(self) -> Optional[float]:
        if self.mean_distance_failures is None or \
                self.mean_distance_successes is None:
            return None
        return self.mean_distance_failures - self.mean_distance_successes


def edit_distance_analysis(suite, para_scores, adv_scores) -> EditDistanceAnalysis:
    """Split instances by preference correctness; compare paraphrase distances.

    Distance is the normalized edit distance between the perturbation source
    (anchor, or the pivot text in ref-free suites) and the paraphrase
    candidate; a larger mean among failures indicates that surface-dissimilar
    paraphrases are the harder test cases.
    """
    from .textops import levenshtein_normalized

    para = _entries(para_scores)
    adv = _entries(adv_scores)
    failures: list[float] = []
    successes: list[float] = []
    for inst in suite.instances:
        if inst.id not in para or inst.id not in adv:
            continue
        distance = levenshtein_normalized(inst.perturb_source, inst.cand_para)
        if para[inst.id] > adv[inst.id]:
            successes.append(distance)
        else:
            failures.append(distance)
    return EditDistanceAnalysis(
        mean_distance_failures=(sum(failures) / len(failures)
                                if failures else None),
        mean_distance_successes=(sum(successes) / len(successes)
                                 if successes else None),
        failures=len(failures),
        successes=len(successes),
    )


def overall_performance(adversarial_accuracies: Sequence[float],
                        standard_correlations: Sequence[float]) -> float:
    """Arithmetic mean of per-dataset accuracies and correlations together."""
    if not adversarial_accuracies or not standard_correlations:
        raise EmptyInput("both accuracy and correlation lists must be non-empty")
    values = list(adversarial_accuracies) + list(standard_correlations)
    return sum(values) / len(values)
