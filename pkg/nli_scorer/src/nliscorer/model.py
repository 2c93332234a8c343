"""Cross-encoder inference: ordered text pairs to probability triples."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer

from .config import LABELS, ModelConfig
from .protocol import Triple


class ModelLoadError(Exception):
    """Checkpoint or tokenizer could not be loaded."""


@dataclass(frozen=True)
class PairScore:
    triple: Triple
    truncated: bool


class CrossEncoderNli:
    """A pretrained pair classifier producing (e, c, n) distributions.

    Inference runs in eval mode with gradients disabled, so repeated runs
    over the same batches yield identical triples. Inputs longer than the
    configured maximum are head-truncated and flagged.
    """

    def __init__(self, config: ModelConfig):
        self.config = config
        try:
            self.tokenizer = AutoTokenizer.from_pretrained(config.checkpoint)
            self.model = AutoModelForSequenceClassification.from_pretrained(
                config.checkpoint)
        except Exception as exc:
            raise ModelLoadError(
                f"cannot load checkpoint {config.checkpoint!r}: {exc}") from exc
        if self.model.config.num_labels != 3:
            raise ModelLoadError(
                f"checkpoint {config.checkpoint!r} has "
                f"{self.model.config.num_labels} labels, expected 3")
        self._check_label_order()
        self.model.to(config.device)
        self.model.eval()
        # column order that turns logits into (entailment, contradiction,
        # neutral), derived from the configured output-label order
        self._permutation = [config.label_order.index(label) for label in LABELS]

    def _check_label_order(self):
        """Cross-check the configured order against the checkpoint metadata.

        Only informative id2label maps (ones naming all three classes) are
        compared; placeholder LABEL_0 style maps are ignored. The order
        itself always comes from configuration.
        """
        id2label = getattr(self.model.config, "id2label", None) or {}
        names = [str(id2label.get(i, "")).lower() for i in range(3)]
        if sorted(names) != sorted(LABELS):
            return
        if tuple(names) != self.config.label_order:
            raise ModelLoadError(
                f"configured label_order {self.config.label_order} contradicts "
                f"the checkpoint's declared order {tuple(names)}")

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[PairScore]:
        """(premise, hypothesis) pairs to triples, batched and deterministic."""
        out: list[PairScore] = []
        for start in range(0, len(pairs), self.config.batch_size):
            batch = pairs[start:start + self.config.batch_size]
            premises = [p for p, _ in batch]
            hypotheses = [h for _, h in batch]
            unclipped = self.tokenizer(premises, hypotheses, padding=False,
                                       truncation=False)["input_ids"]
            truncated = [len(ids) > self.config.max_seq_length
                         for ids in unclipped]
            encoded = self.tokenizer(
                premises, hypotheses, padding=True, truncation=True,
                max_length=self.config.max_seq_length, return_tensors="pt",
            ).to(self.config.device)
            with torch.no_grad():
                logits = self.model(**encoded).logits
            probabilities = torch.softmax(logits, dim=-1)[:, self._permutation]
            for row, was_truncated in zip(probabilities.tolist(), truncated):
                e, c, n = row
                out.append(PairScore(Triple(e, c, n), was_truncated))
        return out
