"""Stage 3: verdict prediction from selected rationale sentences.

The two-step cascade first decides whether the evidence says enough at all
(ENOUGH_INFO vs NOT_ENOUGH_INFO); only on a positive verdict does it consult
the support detector, whose negative class maps to CONTRADICT. Class-merged
training sets implement exactly that factorization:

* neutral detector: SUPPORT and CONTRADICT instances merged into the
  positive ENOUGH_INFO class, synthesized NEI instances negative;
* support detector: SUPPORT positive, with NEI and CONTRADICT merged into
  the negative NOT_SUPPORT class.

The three-way variant trains one classifier over all three labels and is
kept as the baseline comparison.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .classifier import CLASS_ORDER, ClassifierBackend, TextPair, score
from .data import Claim, ClaimSet, Corpus, Document, Label
from .errors import ConfigError, ContractError, IntegrityError

logger = logging.getLogger(__name__)

CASCADE_SCHEMES = ("two_step", "three_way")
NEI_SOURCES = ("cited", "retrieved")


@dataclass(frozen=True)
class LabelInput:
    """A claim plus its selected rationale sentences joined in document order."""

    claim: str
    evidence: str


@dataclass(frozen=True)
class CascadeConfig:
    scheme: str = "two_step"
    neutral_threshold: float = 0.5
    support_threshold: float = 0.5
    nei_negatives_per_doc: int = 2
    nei_source: str = "cited"
    seed: int = 13

    def __post_init__(self):
        if self.scheme not in CASCADE_SCHEMES:
            raise ConfigError(f"unknown cascade scheme {self.scheme!r}")
        for name, value in (
            ("neutral_threshold", self.neutral_threshold),
            ("support_threshold", self.support_threshold),
        ):
            if not 0.0 < value < 1.0:
                raise ConfigError(f"{name} must lie in (0, 1), got {value}")
        if self.nei_negatives_per_doc < 0:
            raise ConfigError("nei_negatives_per_doc must be >= 0")
        if self.nei_source not in NEI_SOURCES:
            raise ConfigError(f"unknown nei_source {self.nei_source!r}")


def build_label_input(
    claim: Claim,
    doc: Document,
    sentence_indices: Sequence[int],
    allow_empty: bool = False,
) -> LabelInput:
    """Join the selected sentences in ascending index order, space-separated.

    An empty selection is only legal while synthesizing explicit NEI
    examples, and must be requested via ``allow_empty``.
    """
    indices = sorted(set(sentence_indices))
    if not indices and not allow_empty:
        raise ContractError("empty sentence selection outside NEI-example construction")
    bad = [i for i in indices if i < 0 or i >= len(doc.sentences)]
    if bad:
        raise IntegrityError(f"sentence indices {bad} out of range for doc {doc.doc_id}")
    return LabelInput(claim=claim.text, evidence=" ".join(doc.sentences[i] for i in indices))


@dataclass(frozen=True)
class LabelInstance:
    """One labeled (claim, doc) training instance with its three-way label."""

    claim_id: int
    doc_id: int
    input: LabelInput
    label: Label


@dataclass
class LabelTrainingSets:
    """The class-merged training views over one shared instance list.

    The merges preserve exact set identities: neutral positives are the
    SUPPORT and CONTRADICT instances, support negatives are the NEI and
    CONTRADICT instances.
    """

    instances: list[LabelInstance]

    @property
    def neutral(self) -> list[tuple[LabelInput, int]]:
        return [
            (inst.input, 0 if inst.label is Label.NOT_ENOUGH_INFO else 1)
            for inst in self.instances
        ]

    @property
    def support(self) -> list[tuple[LabelInput, int]]:
        return [
            (inst.input, 1 if inst.label is Label.SUPPORT else 0)
            for inst in self.instances
        ]

    @property
    def threeway(self) -> list[tuple[LabelInput, Label]]:
        return [(inst.input, inst.label) for inst in self.instances]


def make_label_training_sets(
    claims: ClaimSet,
    corpus: Corpus,
    config: CascadeConfig | None = None,
    retrieved: Mapping[int, Sequence[int]] | None = None,
) -> LabelTrainingSets:
    """Build the merged training sets from gold evidence.

    SUPPORT/CONTRADICT instances pair each claim with the union of its gold
    rationale sentences per evidence doc. NEI instances are synthesized by
    sampling ``nei_negatives_per_doc`` non-rationale sentences (seeded, hence
    reproducible) from each source document: the claim's cited docs by
    default, or its retrieved docs when ``nei_source`` is "retrieved".
    """
    config = config or CascadeConfig()
    if config.nei_source == "retrieved" and retrieved is None:
        raise ConfigError("nei_source 'retrieved' requires a retrieved map")
    rng = np.random.default_rng(config.seed)
    instances: list[LabelInstance] = []
    for claim in claims:
        for doc_id in claim.evidence_docs():
            doc = corpus[doc_id]
            gold = claim.gold_sentences_for(doc_id)
            instances.append(
                LabelInstance(
                    claim_id=claim.claim_id,
                    doc_id=doc_id,
                    input=build_label_input(claim, doc, sorted(gold)),
                    label=claim.gold_label_for(doc_id),
                )
            )
        if config.nei_negatives_per_doc == 0:
            continue
        if config.nei_source == "cited":
            source_docs = [d for d in claim.cited_doc_ids if d in corpus]
        else:
            source_docs = list(retrieved.get(claim.claim_id, ()))
        if not source_docs:
            logger.info("claim %d has no source docs; no NEI instances", claim.claim_id)
            continue
        for doc_id in sorted(set(source_docs)):
            doc = corpus[doc_id]
            gold = claim.gold_sentences_for(doc_id)
            candidates = [i for i in range(len(doc.sentences)) if i not in gold]
            if not candidates:
                continue
            take = min(config.nei_negatives_per_doc, len(candidates))
            chosen = rng.choice(len(candidates), size=take, replace=False)
            for j in sorted(int(c) for c in chosen):
                instances.append(
                    LabelInstance(
                        claim_id=claim.claim_id,
                        doc_id=doc_id,
                        input=LabelInput(claim=claim.text, evidence=doc.sentences[candidates[j]]),
                        label=Label.NOT_ENOUGH_INFO,
                    )
                )
    return LabelTrainingSets(instances=instances)


def predict_label_two_step(
    neutral_backend: ClassifierBackend,
    support_backend: ClassifierBackend,
    label_input: LabelInput,
    config: CascadeConfig | None = None,
) -> Label:
    """Cascaded verdict for one (claim, evidence) input.

    A neutral score at or below the threshold short-circuits to
    NOT_ENOUGH_INFO without consulting the support detector; otherwise the
    support verdict decides SUPPORT, with its negative class mapped to
    CONTRADICT.
    """
    config = config or CascadeConfig()
    neutral_pair = TextPair(side_a=label_input.claim, side_b=label_input.evidence, task="neutral")
    if score(neutral_backend, [neutral_pair])[0] <= config.neutral_threshold:
        return Label.NOT_ENOUGH_INFO
    support_pair = TextPair(side_a=label_input.claim, side_b=label_input.evidence, task="support")
    if score(support_backend, [support_pair])[0] > config.support_threshold:
        return Label.SUPPORT
    return Label.CONTRADICT


def predict_label_three_way(backend, label_input: LabelInput) -> Label:
    """Argmax over per-class scores; ties resolve NEI, then SUPPORT."""
    pair = TextPair(side_a=label_input.claim, side_b=label_input.evidence, task="threeway")
    scores = backend.score_classes([pair])[0]
    if len(scores) != len(CLASS_ORDER):
        raise ContractError("three-way backend must return one score per class")
    by_label = dict(zip(CLASS_ORDER, scores))
    best = max(by_label.values())
    for label in (Label.NOT_ENOUGH_INFO, Label.SUPPORT, Label.CONTRADICT):
        if by_label[label] == best:
            return label
    raise AssertionError("unreachable")
