"""Scorer configuration: checkpoint, label order, lengths, device."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

LABELS = ("entailment", "contradiction", "neutral")

DEFAULT_CHECKPOINT = "cross-encoder/nli-MiniLM2-L6-H768"
# output-index order of the default checkpoint
DEFAULT_LABEL_ORDER = ("contradiction", "entailment", "neutral")


@dataclass
class ModelConfig:
    """Declarative scorer configuration.

    ``label_order`` names the class behind each output logit index. It is
    explicit configuration: checkpoints disagree on output ordering and a
    silently wrong order inverts the metric, so it is never guessed from
    model behavior. The behavioral diagnostic gate catches mistakes.
    """

    checkpoint: str = DEFAULT_CHECKPOINT
    label_order: tuple[str, ...] = DEFAULT_LABEL_ORDER
    max_seq_length: int = 256
    batch_size: int = 16
    device: str = "cpu"
    enforce_diagnostic: bool = True  # disable only for toy checkpoints in tests

    def __post_init__(self):
        self.label_order = tuple(self.label_order)
        if sorted(self.label_order) != sorted(LABELS):
            raise ValueError(
                f"label_order must be a permutation of {LABELS}, "
                f"got {self.label_order}")
        if self.max_seq_length < 32:
            raise ValueError("max_seq_length must be at least 32")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")

    @classmethod
    def load(cls, path=None) -> "ModelConfig":
        """Read a JSON config file; NLISCORER_CHECKPOINT overrides the model."""
        values: dict = {}
        if path is not None:
            values = json.loads(Path(path).read_text(encoding="utf-8"))
        unknown = set(values) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        env_checkpoint = os.environ.get("NLISCORER_CHECKPOINT")
        if env_checkpoint and "checkpoint" not in values:
            values["checkpoint"] = env_checkpoint
        return cls(**values)
