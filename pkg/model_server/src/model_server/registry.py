"""Checkpoint loading and batched pair scoring.

One model is registered per task tag. Reloading a tag swaps the registered
model atomically: requests already holding the old model finish on it, new
requests see the replacement.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from pathlib import Path

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer

logger = logging.getLogger(__name__)


class CheckpointError(RuntimeError):
    """A checkpoint could not be loaded or does not fit the scoring head."""


class UnknownTaskError(KeyError):
    """No model is registered under the requested task tag."""


@dataclass
class ServedModel:
    """A loaded pair classifier bound to one task tag."""

    task: str
    checkpoint: str
    max_length: int
    device: str
    tokenizer: object
    model: object

    def score_pairs(self, pairs: list[tuple[str, str]]) -> list[float]:
        """Positive-class probabilities, order-aligned with ``pairs``.

        side_b is truncated first; only pathologically long claims fall back
        to joint truncation.
        """
        if not pairs:
            return []
        sides_a = [a for a, _ in pairs]
        sides_b = [b for _, b in pairs]
        try:
            encoded = self.tokenizer(
                sides_a, sides_b, truncation="only_second",
                max_length=self.max_length, padding=True, return_tensors="pt",
            )
        except Exception:
            encoded = self.tokenizer(
                sides_a, sides_b, truncation="longest_first",
                max_length=self.max_length, padding=True, return_tensors="pt",
            )
        encoded = {key: value.to(self.device) for key, value in encoded.items()}
        with torch.no_grad():
            logits = self.model(**encoded).logits
        probs = torch.softmax(logits.double(), dim=-1)[:, 1]
        return [min(max(float(p), 0.0), 1.0) for p in probs]


class ModelRegistry:
    """Thread-safe task-tag -> model map with atomic replacement."""

    def __init__(self, device: str = "cpu", precision: str = "float64",
                 max_length: int = 256):
        self.device = device
        self.precision = precision
        self.max_length = max_length
        self._models: dict[str, ServedModel] = {}
        self._lock = threading.Lock()

    def load_checkpoint(self, task: str, checkpoint: str) -> ServedModel:
        path = Path(checkpoint)
        if not path.exists():
            raise CheckpointError(f"checkpoint path {checkpoint} does not exist")
        try:
            tokenizer = AutoTokenizer.from_pretrained(path)
            model = AutoModelForSequenceClassification.from_pretrained(path)
        except Exception as exc:
            raise CheckpointError(f"cannot load checkpoint {checkpoint}: {exc}") from exc
        labels = getattr(model.config, "num_labels", None)
        if labels != 2:
            raise CheckpointError(
                f"checkpoint {checkpoint} has {labels} output labels, expected 2 "
                "(binary pair classifier)"
            )
        model.eval()
        model.to(self.device)
        if self.precision == "float64":
            model.double()
        served = ServedModel(
            task=task,
            checkpoint=str(checkpoint),
            max_length=self.max_length,
            device=self.device,
            tokenizer=tokenizer,
            model=model,
        )
        with self._lock:
            replacing = task in self._models
            self._models[task] = served
        logger.info("%s model %s under tag '%s'",
                    "replaced" if replacing else "loaded", checkpoint, task)
        return served

    def get(self, task: str) -> ServedModel:
        with self._lock:
            try:
                return self._models[task]
            except KeyError:
                raise UnknownTaskError(task) from None

    def tags(self) -> list[str]:
        with self._lock:
            return sorted(self._models)

    def describe(self) -> str:
        """Summary string for the health endpoint: every loaded tag."""
        with self._lock:
            return ",".join(
                f"{tag}:{Path(served.checkpoint).name}"
                for tag, served in sorted(self._models.items())
            )

    def score(self, task: str, pairs: list[tuple[str, str]]) -> list[float]:
        return self.get(task).score_pairs(pairs)
