"""Stage 2: per-sentence evidence selection inside retrieved abstracts.

``binary`` mode keeps sentences the classifier accepts at the fixed 0.5
decision point; ``threshold`` mode keeps sentences whose score strictly
exceeds a configurable T, mirroring the top-k + threshold baseline system.
Training pairs are generated from *retrieved* abstracts, not oracle ones, so
the selector learns under pipeline conditions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .classifier import ClassifierBackend, TextPair, score
from .data import Claim, ClaimSet, Corpus, Document
from .errors import ConfigError, FingerprintError, IntegrityError, ParseError

RATIONALE_MODES = ("binary", "threshold")


@dataclass(frozen=True)
class RationaleConfig:
    mode: str = "binary"
    threshold: float = 0.5
    max_sentences: int | None = None

    def __post_init__(self):
        if self.mode not in RATIONALE_MODES:
            raise ConfigError(f"unknown rationale mode {self.mode!r}")
        if not 0.0 < self.threshold < 1.0:
            raise ConfigError(f"threshold must lie in (0, 1), got {self.threshold}")
        if self.max_sentences is not None and self.max_sentences < 1:
            raise ConfigError("max_sentences must be >= 1 when set")


@dataclass(frozen=True)
class RationaleExample:
    """A <claim, sentence> training pair from a retrieved abstract."""

    claim_id: int
    doc_id: int
    sentence_index: int
    claim: str
    sentence: str
    label: int


def make_rationale_training_set(
    claims: ClaimSet,
    retrieved: Mapping[int, Sequence[int]],
    corpus: Corpus,
    negative_subsample: float | None = None,
    seed: int = 13,
) -> list[RationaleExample]:
    """One example per (claim, retrieved doc, sentence).

    A sentence is positive iff its index belongs to some gold rationale of
    that (claim, doc). ``negative_subsample`` keeps each negative with the
    given probability (seeded); the default keeps every negative.
    """
    if negative_subsample is not None and not 0.0 < negative_subsample <= 1.0:
        raise ConfigError("negative_subsample must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    examples = []
    for claim in claims:
        for doc_id in retrieved.get(claim.claim_id, ()):
            if doc_id not in corpus:
                raise IntegrityError(
                    f"retrieved doc {doc_id} for claim {claim.claim_id} not in corpus"
                )
            doc = corpus[doc_id]
            gold = claim.gold_sentences_for(doc_id)
            for i, sentence in enumerate(doc.sentences):
                label = 1 if i in gold else 0
                if (
                    label == 0
                    and negative_subsample is not None
                    and rng.random() >= negative_subsample
                ):
                    continue
                examples.append(
                    RationaleExample(
                        claim_id=claim.claim_id,
                        doc_id=doc_id,
                        sentence_index=i,
                        claim=claim.text,
                        sentence=sentence,
                        label=label,
                    )
                )
    return examples


def select_rationales(
    claim: Claim,
    doc: Document,
    backend: ClassifierBackend,
    config: RationaleConfig | None = None,
) -> list[int]:
    """Indices of the selected sentences, strictly ascending.

    Selection keeps sentences scoring strictly above the decision point
    (0.5 in binary mode, T in threshold mode); when ``max_sentences`` is set
    the highest-scoring survivors are kept (ties to the lower index) before
    re-sorting ascending. An empty selection means the document is dropped
    from the prediction downstream.
    """
    config = config or RationaleConfig()
    if not doc.sentences:
        raise ConfigError(f"doc {doc.doc_id} has no sentences to select from")
    pairs = [
        TextPair(side_a=claim.text, side_b=sentence, task=backend.task)
        for sentence in doc.sentences
    ]
    probs = score(backend, pairs)
    cut = 0.5 if config.mode == "binary" else config.threshold
    selected = [i for i, p in enumerate(probs) if p > cut]
    if config.max_sentences is not None and len(selected) > config.max_sentences:
        selected = sorted(
            sorted(selected, key=lambda i: (-probs[i], i))[: config.max_sentences]
        )
    return selected


_ARTIFACT_KIND = "rationale"
_ARTIFACT_VERSION = 1


def write_rationale_map(
    selections: Mapping[int, Mapping[int, Sequence[int]]],
    path,
    fingerprint: str | None = None,
    partial: bool = False,
) -> None:
    """Persist per-claim selected sentences:
    ``{"id": ..., "evidence_sentences": {doc_id: [...]}}`` records preceded by
    one metadata line carrying the config fingerprint."""
    with open(path, "w", encoding="utf-8") as handle:
        meta = {
            "_meta": {
                "artifact": _ARTIFACT_KIND,
                "version": _ARTIFACT_VERSION,
                "fingerprint": fingerprint,
                "partial": partial,
            }
        }
        handle.write(json.dumps(meta, separators=(",", ":")) + "\n")
        for claim_id in sorted(selections):
            sentences = {
                str(doc_id): sorted(set(selections[claim_id][doc_id]))
                for doc_id in sorted(selections[claim_id])
            }
            record = {"id": claim_id, "evidence_sentences": sentences}
            handle.write(json.dumps(record, separators=(",", ":")) + "\n")


def load_rationale_map(
    path, expected_fingerprint: str | None = None
) -> dict[int, dict[int, list[int]]]:
    out: dict[int, dict[int, list[int]]] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
            if "_meta" in record:
                meta = record["_meta"]
                if meta.get("artifact") != _ARTIFACT_KIND:
                    raise ParseError(f"{path}: artifact kind {meta.get('artifact')!r} "
                                     f"is not {_ARTIFACT_KIND!r}")
                if (
                    expected_fingerprint is not None
                    and meta.get("fingerprint") != expected_fingerprint
                ):
                    raise FingerprintError(
                        f"{path}: artifact fingerprint {meta.get('fingerprint')} does not "
                        f"match expected {expected_fingerprint}"
                    )
                continue
            if "id" not in record or "evidence_sentences" not in record:
                raise ParseError(f"{path}:{lineno}: expected 'id' and 'evidence_sentences'")
            out[int(record["id"])] = {
                int(doc_id): [int(i) for i in indices]
                for doc_id, indices in record["evidence_sentences"].items()
            }
    return out
