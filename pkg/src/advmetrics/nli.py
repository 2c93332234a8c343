"""Metric scores from entailment-classifier probability triples.

An inference classifier over an ordered text pair yields probabilities
(e, c, n) for entailment / contradiction / neutral. Five scalar formulas
crossed with three pair directions (forward, backward, and their
bidirectional average) give fifteen pooling strategies; reference-free
summarization restricts to the forward direction because a summary need
not entail its source document.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional

from .errors import CoverageGap, InvalidTriple, MissingDirection

SIMPLEX_TOLERANCE = 1e-4


@dataclass(frozen=True)
class NliTriple:
    """Probability triple; renormalized on construction within tolerance."""

    e: float
    c: float
    n: float

    def __post_init__(self):
        if min(self.e, self.c, self.n) < -SIMPLEX_TOLERANCE:
            raise InvalidTriple(f"negative probability in {(self.e, self.c, self.n)}")
        total = self.e + self.c + self.n
        if abs(total - 1.0) > SIMPLEX_TOLERANCE:
            raise InvalidTriple(
                f"probabilities sum to {total:.6f}, expected 1 within "
                f"{SIMPLEX_TOLERANCE}")
        if total != 1.0:
            object.__setattr__(self, "e", max(self.e, 0.0) / total)
            object.__setattr__(self, "c", max(self.c, 0.0) / total)
            object.__setattr__(self, "n", max(self.n, 0.0) / total)

    def averaged_with(self, other: "NliTriple") -> "NliTriple":
        return NliTriple((self.e + other.e) / 2,
                         (self.c + other.c) / 2,
                         (self.n + other.n) / 2)


class Direction(str, Enum):
    FORWARD = "forward"     # ref/src -> cand (anchor as premise)
    BACKWARD = "backward"   # ref/src <- cand (candidate as premise)
    BI = "bi"               # average of both triples, then the formula


class Formula(str, Enum):
    E = "e"
    NEG_C = "-c"
    E_MINUS_N = "e-n"
    E_MINUS_C = "e-c"
    E_MINUS_N2C = "e-n-2c"

    def apply(self, t: NliTriple) -> float:
        if self is Formula.E:
            return t.e
        if self is Formula.NEG_C:
            return -t.c
        if self is Formula.E_MINUS_N:
            return t.e - t.n
        if self is Formula.E_MINUS_C:
            return t.e - t.c
        return t.e - t.n - 2 * t.c

    @property
    def value_range(self) -> tuple[float, float]:
        return {
            Formula.E: (0.0, 1.0),
            Formula.NEG_C: (-1.0, 0.0),
            Formula.E_MINUS_N: (-1.0, 1.0),
            Formula.E_MINUS_C: (-1.0, 1.0),
            Formula.E_MINUS_N2C: (-2.0, 1.0),
        }[self]


def apply_formula(t: NliTriple, f: Formula) -> float:
    return f.apply(t)


@dataclass(frozen=True, order=True)
class PoolingStrategy:
    direction: Direction
    formula: Formula

    @property
    def label(self) -> str:
        return f"{self.direction.value}:{self.formula.value}"

    @classmethod
    def parse(cls, label: str) -> "PoolingStrategy":
        direction, _, formula = label.partition(":")
        return cls(Direction(direction), Formula(formula))


def all_strategies() -> tuple[PoolingStrategy, ...]:
    """The 15 (direction, formula) combinations, in canonical order."""
    return tuple(PoolingStrategy(d, f) for d in Direction for f in Formula)


def ref_free_summarization_strategies() -> tuple[PoolingStrategy, ...]:
    """Forward-only strategies: a summary need not entail its source."""
    return tuple(s for s in all_strategies()
                 if s.direction is Direction.FORWARD)


def pool(fwd: Optional[NliTriple], bwd: Optional[NliTriple],
         strategy: PoolingStrategy) -> float:
    """Pool one instance's triples into a scalar score."""
    if strategy.direction is Direction.FORWARD:
        if fwd is None:
            raise MissingDirection("forward triple required")
        return strategy.formula.apply(fwd)
    if strategy.direction is Direction.BACKWARD:
        if bwd is None:
            raise MissingDirection("backward triple required")
        return strategy.formula.apply(bwd)
    if fwd is None or bwd is None:
        raise MissingDirection("bidirectional pooling needs both triples")
    return strategy.formula.apply(fwd.averaged_with(bwd))


@dataclass(frozen=True)
class InstanceTriples:
    """Per-candidate (forward, backward) triples for one suite instance."""

    para_fwd: Optional[NliTriple]
    para_bwd: Optional[NliTriple]
    adv_fwd: Optional[NliTriple]
    adv_bwd: Optional[NliTriple]


def score_suite(triples: Mapping[str, InstanceTriples],
                strategy: PoolingStrategy,
                expected_ids: Optional[Iterable[str]] = None,
                ) -> tuple[dict[str, float], dict[str, float]]:
    """Pool triples for every instance; returns (para scores, adv scores).

    When ``expected_ids`` is given, coverage must be exact; missing or
    unexpected ids raise CoverageGap.
    """
    if expected_ids is not None:
        expected = set(expected_ids)
        got = set(triples)
        if expected != got:
            raise CoverageGap(missing=expected - got, extra=got - expected)
    para: dict[str, float] = {}
    adv: dict[str, float] = {}
    for instance_id in sorted(triples):
        t = triples[instance_id]
        para[instance_id] = pool(t.para_fwd, t.para_bwd, strategy)
        adv[instance_id] = pool(t.adv_fwd, t.adv_bwd, strategy)
    return para, adv
