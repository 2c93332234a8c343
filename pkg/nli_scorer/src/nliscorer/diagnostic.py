"""Behavioral safety gate against label-order misconfiguration.

Ten unambiguous pairs (five entailments, five contradictions) ship with
the package. A correctly configured model classifies at least nine; a
scorer that fails the gate refuses to serve, because a silently permuted
label order would invert every score downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .model import CrossEncoderNli

PASS_THRESHOLD = 9


class DiagnosticFailure(Exception):
    """The model missed too many diagnostic pairs; refusing to serve."""


@dataclass(frozen=True)
class DiagnosticResult:
    correct: int
    total: int
    failures: tuple[str, ...]  # "premise -> hypothesis (expected X, got Y)"

    @property
    def passed(self) -> bool:
        return self.correct >= PASS_THRESHOLD


def diagnostic_pairs() -> list[dict]:
    data = resources.files("nliscorer").joinpath("data").joinpath(
        "diagnostic_pairs.json")
    return json.loads(data.read_text(encoding="utf-8"))


def run_diagnostic(model: CrossEncoderNli) -> DiagnosticResult:
    pairs = diagnostic_pairs()
    scores = model.score_pairs([(p["premise"], p["hypothesis"]) for p in pairs])
    correct = 0
    failures = []
    for pair, score in zip(pairs, scores):
        triple = score.triple
        predicted = max(("entailment", "contradiction", "neutral"),
                        key={"entailment": triple.e,
                             "contradiction": triple.c,
                             "neutral": triple.n}.get)
        if predicted == pair["expected"]:
            correct += 1
        else:
            failures.append(f"{pair['premise']} -> {pair['hypothesis']} "
                            f"(expected {pair['expected']}, got {predicted})")
    return DiagnosticResult(correct, len(pairs), tuple(failures))


def enforce_gate(model: CrossEncoderNli) -> DiagnosticResult:
    result = run_diagnostic(model)
    if not result.passed:
        detail = "; ".join(result.failures[:3])
        raise DiagnosticFailure(
            f"diagnostic set: {result.correct}/{result.total} correct "
            f"(need {PASS_THRESHOLD}); check the configured label_order. "
            f"First misses: {detail}")
    return result
