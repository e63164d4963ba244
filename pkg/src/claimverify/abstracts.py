"""Stage 1: candidate pooling and abstract retrieval.

Every mode first restricts the corpus to the claim's top-``pool_size``
TF-IDF candidates; retrieval then either keeps the candidates a binary
classifier accepts (``classify``), keeps the first ``baseline_k``
(``topk_baseline``), or re-sorts the pool by a scorer and keeps the first
``rerank_k`` (``rerank``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .classifier import ClassifierBackend, TextPair, score
from .data import Claim, ClaimSet, Corpus
from .errors import ConfigError, FingerprintError, ParseError
from .tfidf import TfidfIndex, top_k

RETRIEVAL_MODES = ("classify", "topk_baseline", "rerank")


@dataclass(frozen=True)
class RetrievalConfig:
    pool_size: int = 30
    mode: str = "classify"
    baseline_k: int = 3
    rerank_k: int = 3
    max_accepted: int | None = None

    def __post_init__(self):
        if self.mode not in RETRIEVAL_MODES:
            raise ConfigError(f"unknown retrieval mode {self.mode!r}")
        if self.pool_size < 1:
            raise ConfigError("pool_size must be >= 1")
        if not (1 <= self.baseline_k <= self.pool_size):
            raise ConfigError("baseline_k must satisfy 1 <= baseline_k <= pool_size")
        if not (1 <= self.rerank_k <= self.pool_size):
            raise ConfigError("rerank_k must satisfy 1 <= rerank_k <= pool_size")
        if self.max_accepted is not None and self.max_accepted < 1:
            raise ConfigError("max_accepted must be >= 1 when set")


@dataclass(frozen=True)
class AbstractExample:
    """A <claim, title> training pair; positive iff the doc is gold evidence."""

    claim_id: int
    doc_id: int
    claim: str
    title: str
    label: int


def candidate_pool(index: TfidfIndex, claim: Claim, pool_size: int) -> list[tuple[int, float]]:
    """The claim's TF-IDF candidate pool as ranked (doc_id, score) pairs."""
    return top_k(index, claim.text, pool_size)


def make_abstract_training_set(
    claims: ClaimSet, corpus: Corpus, index: TfidfIndex, pool_size: int = 30
) -> list[AbstractExample]:
    """One example per (claim, pooled document); no negative sampling.

    Claims whose gold documents fall outside the pool contribute only
    negatives, which still teach the classifier to reject.
    """
    examples = []
    for claim in claims:
        gold_docs = set(claim.evidence)
        for doc_id, _ in candidate_pool(index, claim, pool_size):
            examples.append(
                AbstractExample(
                    claim_id=claim.claim_id,
                    doc_id=doc_id,
                    claim=claim.text,
                    title=corpus[doc_id].title,
                    label=1 if doc_id in gold_docs else 0,
                )
            )
    return examples


def retrieve_abstracts(
    claim: Claim,
    index: TfidfIndex,
    corpus: Corpus,
    backend: ClassifierBackend | None,
    config: RetrievalConfig | None = None,
) -> list[int]:
    """Documents retrieved for one claim, in deterministic rank order.

    The result is always a subset of the candidate pool. classify mode is
    order-invariant over the pool and uncapped by default; an all-negative
    classifier yields an empty retrieval, which surfaces as NEI downstream.
    topk_baseline needs no backend.
    """
    config = config or RetrievalConfig()
    pool = candidate_pool(index, claim, config.pool_size)
    if config.mode == "topk_baseline":
        return [doc_id for doc_id, _ in pool[: config.baseline_k]]

    if backend is None:
        raise ConfigError(f"retrieval mode {config.mode!r} requires a classifier backend")
    if not pool:
        return []
    pairs = [
        TextPair(side_a=claim.text, side_b=corpus[doc_id].title, task=backend.task)
        for doc_id, _ in pool
    ]
    probs = score(backend, pairs)
    if config.mode == "rerank":
        # stable sort: equal scores keep their TF-IDF pool order
        order = sorted(range(len(pool)), key=lambda i: -probs[i])
        return [pool[i][0] for i in order[: config.rerank_k]]

    accepted = [(pool[i][0], p) for i, p in enumerate(probs) if p > 0.5]
    if config.max_accepted is not None and len(accepted) > config.max_accepted:
        order = sorted(range(len(accepted)), key=lambda i: -accepted[i][1])
        keep_ids = {accepted[i][0] for i in order[: config.max_accepted]}
        accepted = [(doc_id, p) for doc_id, p in accepted if doc_id in keep_ids]
    return [doc_id for doc_id, _ in accepted]


_ARTIFACT_KIND = "retrieval"
_ARTIFACT_VERSION = 1


def write_retrieval_map(
    retrieved: Mapping[int, Sequence[int]],
    path,
    fingerprint: str | None = None,
    partial: bool = False,
) -> None:
    """Persist per-claim retrieved doc ids: ``{"id": ..., "doc_ids": [...]}``
    records preceded by one metadata line carrying the config fingerprint."""
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
        for claim_id in sorted(retrieved):
            record = {"id": claim_id, "doc_ids": sorted(set(retrieved[claim_id]))}
            handle.write(json.dumps(record, separators=(",", ":")) + "\n")


def load_retrieval_map(path, expected_fingerprint: str | None = None) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
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
            if "id" not in record or "doc_ids" not in record:
                raise ParseError(f"{path}:{lineno}: expected 'id' and 'doc_ids'")
            out[int(record["id"])] = [int(d) for d in record["doc_ids"]]
    return out
