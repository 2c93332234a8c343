"""Batch min-max normalization and weighted metric combination.

Metrics live on wildly different scales (some are negative log-likelihoods),
so scores are rescaled to [0, 1] per batch before a weighted average
``C = w * N + (1 - w) * M`` blends an inference-based metric N with a
baseline metric M. Stored (min, max) pairs can be re-applied to held-out
batches, clamping instead of extrapolating.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Mapping, Optional, Sequence

from .errors import (
    DegenerateRange,
    EmptyBatch,
    EmptyIntersection,
    NotNormalized,
)


@dataclass(frozen=True)
class ScoreBatch:
    """Per-instance scores for one metric; optionally min-max normalized."""

    metric_id: str
    entries: Mapping[str, float]
    minmax: Optional[tuple[float, float]] = None  # set once normalized

    @property
    def is_normalized(self) -> bool:
        return self.minmax is not None

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class CombinedBatch:
    nli_metric_id: str
    base_metric_id: str
    w_nli: float
    entries: Mapping[str, float]
    dropped_ids: tuple[str, ...] = ()

    @property
    def metric_id(self) -> str:
        return f"{self.w_nli:g}*{self.nli_metric_id}+{1 - self.w_nli:g}*{self.base_metric_id}"


def min_max_normalize(batch: ScoreBatch) -> ScoreBatch:
    """Rescale a batch to [0, 1]; a constant batch maps everywhere to 0.5."""
    if not batch.entries:
        raise EmptyBatch(f"batch {batch.metric_id!r} is empty")
    lo = min(batch.entries.values())
    hi = max(batch.entries.values())
    if hi == lo:
        entries = {k: 0.5 for k in batch.entries}
    else:
        entries = {k: (v - lo) / (hi - lo) for k, v in batch.entries.items()}
    return replace(batch, entries=entries, minmax=(lo, hi))


def apply_stored_minmax(batch: ScoreBatch, lo: float, hi: float) -> ScoreBatch:
    """Normalize held-out data with a previously stored range, clamping to [0, 1]."""
    if hi <= lo:
        raise DegenerateRange(f"stored range [{lo}, {hi}] is not usable")
    entries = {k: min(1.0, max(0.0, (v - lo) / (hi - lo)))
               for k, v in batch.entries.items()}
    return replace(batch, entries=entries, minmax=(lo, hi))


def combine(n: ScoreBatch, m: ScoreBatch, w_nli: float) -> CombinedBatch:
    """Weighted average over the id intersection of two normalized batches."""
    if not (0.0 <= w_nli <= 1.0):
        raise ValueError(f"w_nli must lie in [0, 1], got {w_nli}")
    if not n.is_normalized or not m.is_normalized:
        raise NotNormalized("combine() expects min-max normalized batches")
    shared = n.entries.keys() & m.entries.keys()
    if not shared:
        raise EmptyIntersection(
            f"{n.metric_id!r} and {m.metric_id!r} share no instance ids")
    dropped = tuple(sorted((n.entries.keys() | m.entries.keys()) - shared))
    entries = {k: w_nli * n.entries[k] + (1 - w_nli) * m.entries[k]
               for k in sorted(shared)}
    return CombinedBatch(
        nli_metric_id=n.metric_id,
        base_metric_id=m.metric_id,
        w_nli=w_nli,
        entries=entries,
        dropped_ids=dropped,
    )


DEFAULT_WEIGHT_GRID = tuple(round(0.1 * i, 1) for i in range(11))


@dataclass(frozen=True)
class SweepPoint:
    w_nli: float
    accuracy: float
    correlation: float


def sweep(n: ScoreBatch, m: ScoreBatch,
          evaluator: Callable[[CombinedBatch], tuple[float, float]],
          weights: Sequence[float] = DEFAULT_WEIGHT_GRID) -> list[SweepPoint]:
    """Evaluate the combination across a weight grid.

    ``evaluator`` maps a combined batch to (adversarial accuracy, standard
    correlation); one point per weight is returned, errors propagate.
    """
    points = []
    for w in weights:
        accuracy, correlation = evaluator(combine(n, m, w))
        points.append(SweepPoint(w, accuracy, correlation))
    return points
