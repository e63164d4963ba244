"""Micro-averaged evaluation of retrieval, sentence, abstract, and label
predictions against gold evidence.

Credit rules, pinned once here:

* a predicted sentence counts as a true positive iff it belongs to a gold
  rationale whose sentences are *all* predicted for that (claim, doc) — and,
  in selection+label mode, the predicted document label matches gold;
* a predicted (doc, label) counts at abstract level iff the doc is gold
  evidence and the label matches — and, in label+rationale mode, some gold
  rationale fits inside the first ``rationale_cap`` predicted sentences;
* precision, recall, and F1 define 0/0 as 0, so empty predictions are
  well-formed;
* the claim universe is either every gold claim (``all_claims``) or only the
  claims that have gold evidence (``evidence_claims_only``); the two
  conventions yield different precision at identical recall.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Set

import numpy as np

from .data import Claim, ClaimSet, Label, Prediction
from .errors import ConfigError, IntegrityError

DENOMINATOR_MODES = ("all_claims", "evidence_claims_only")

SENTENCE_MODES = ("selection_only", "selection_label")
ABSTRACT_MODES = ("label_only", "label_rationale")

#: Row/column order of confusion matrices.
LABEL_ORDER = (Label.CONTRADICT, Label.NOT_ENOUGH_INFO, Label.SUPPORT)


@dataclass(frozen=True)
class EvalConfig:
    rationale_cap: int = 3
    denominator: str = "all_claims"

    def __post_init__(self):
        if self.rationale_cap < 1:
            raise ConfigError("rationale_cap must be >= 1")
        if self.denominator not in DENOMINATOR_MODES:
            raise ConfigError(f"unknown denominator mode {self.denominator!r}")


@dataclass(frozen=True)
class PRF:
    """Micro precision/recall/F1 with their raw counts."""

    tp: int
    fp: int
    fn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2.0 * p * r / (p + r) if p + r else 0.0

    def to_dict(self) -> dict:
        return {
            "tp": self.tp, "fp": self.fp, "fn": self.fn,
            "precision": self.precision, "recall": self.recall, "f1": self.f1,
        }


@dataclass(frozen=True)
class ConfusionMatrix:
    """3x3 counts; rows are true labels, columns predictions, order (C, N, S)."""

    counts: np.ndarray

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ConfusionMatrix":
        counts = np.asarray(rows, dtype=np.int64)
        if counts.shape != (3, 3) or (counts < 0).any():
            raise ValueError("confusion matrix must be 3x3 and non-negative")
        return cls(counts=counts)

    @classmethod
    def from_pairs(
        cls, gold: Sequence[Label], predicted: Sequence[Label]
    ) -> "ConfusionMatrix":
        if len(gold) != len(predicted):
            raise IntegrityError(
                f"gold and predicted label lists differ in length "
                f"({len(gold)} vs {len(predicted)})"
            )
        position = {label: i for i, label in enumerate(LABEL_ORDER)}
        counts = np.zeros((3, 3), dtype=np.int64)
        for g, p in zip(gold, predicted):
            counts[position[g], position[p]] += 1
        return cls(counts=counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def per_class_prf(self) -> dict[Label, PRF]:
        out = {}
        for i, label in enumerate(LABEL_ORDER):
            tp = int(self.counts[i, i])
            fp = int(self.counts[:, i].sum()) - tp
            fn = int(self.counts[i, :].sum()) - tp
            out[label] = PRF(tp=tp, fp=fp, fn=fn)
        return out

    def to_dict(self) -> dict:
        return {
            "order": [label.value for label in LABEL_ORDER],
            "rows": self.counts.tolist(),
        }


@dataclass(frozen=True)
class LabelMetrics:
    accuracy: float
    macro_f1: float
    weighted_f1: float
    confusion: ConfusionMatrix

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "weighted_f1": self.weighted_f1,
            "confusion": self.confusion.to_dict(),
        }


def _universe(claims: ClaimSet, config: EvalConfig) -> list[Claim]:
    if config.denominator == "evidence_claims_only":
        return [c for c in claims if c.has_evidence]
    return list(claims)


def _prediction_map(claims: ClaimSet, predictions: Sequence[Prediction]) -> dict[int, Prediction]:
    out = {}
    for pred in predictions:
        if pred.claim_id not in claims:
            raise IntegrityError(f"prediction for unknown claim {pred.claim_id}")
        out[pred.claim_id] = pred
    return out


def retrieval_metrics(
    gold_docs: Mapping[int, Set[int]],
    retrieved_docs: Mapping[int, Iterable[int]],
    config: EvalConfig | None = None,
) -> PRF:
    """Document-retrieval PRF over (claim, doc) pairs.

    ``retrieved_docs`` keys must be a subset of ``gold_docs`` keys; claims
    without an entry count as empty retrievals.
    """
    config = config or EvalConfig()
    unknown = set(retrieved_docs) - set(gold_docs)
    if unknown:
        raise IntegrityError(f"retrieved map names unknown claims {sorted(unknown)}")
    tp = fp = fn = 0
    for claim_id, gold in gold_docs.items():
        gold = set(gold)
        if config.denominator == "evidence_claims_only" and not gold:
            continue
        retrieved = set(retrieved_docs.get(claim_id, ()))
        tp += len(retrieved & gold)
        fp += len(retrieved - gold)
        fn += len(gold - retrieved)
    return PRF(tp=tp, fp=fp, fn=fn)


def gold_docs_by_claim(claims: ClaimSet) -> dict[int, set[int]]:
    return {claim.claim_id: set(claim.evidence) for claim in claims}


def sentence_metrics(
    claims: ClaimSet,
    predictions: Sequence[Prediction],
    mode: str = "selection_only",
    config: EvalConfig | None = None,
) -> PRF:
    """Sentence-level PRF; see the module docstring for the credit rule."""
    if mode not in SENTENCE_MODES:
        raise ConfigError(f"unknown sentence mode {mode!r}")
    config = config or EvalConfig()
    pred_map = _prediction_map(claims, predictions)
    tp = fp = fn = 0
    for claim in _universe(claims, config):
        pred_evidence = pred_map[claim.claim_id].evidence if claim.claim_id in pred_map else {}
        for doc_id in set(claim.evidence) | set(pred_evidence):
            entry = pred_evidence.get(doc_id)
            predicted = set(entry.sentences) if entry else set()
            rationales = claim.evidence.get(doc_id, ())
            gold_union: set[int] = set()
            for rationale in rationales:
                gold_union |= rationale.sentence_indices
            label_ok = mode == "selection_only" or (
                entry is not None and entry.label == claim.gold_label_for(doc_id)
            )
            covered: set[int] = set()
            if predicted and label_ok:
                for rationale in rationales:
                    if rationale.sentence_indices <= predicted:
                        covered |= rationale.sentence_indices
            tp += len(covered)
            fp += len(predicted) - len(covered)
            fn += len(gold_union) - len(covered)
    return PRF(tp=tp, fp=fp, fn=fn)


def abstract_metrics(
    claims: ClaimSet,
    predictions: Sequence[Prediction],
    mode: str = "label_only",
    config: EvalConfig | None = None,
) -> PRF:
    """Abstract-level PRF; see the module docstring for the credit rule."""
    if mode not in ABSTRACT_MODES:
        raise ConfigError(f"unknown abstract mode {mode!r}")
    config = config or EvalConfig()
    pred_map = _prediction_map(claims, predictions)
    tp = fp = fn = 0
    for claim in _universe(claims, config):
        pred_evidence = pred_map[claim.claim_id].evidence if claim.claim_id in pred_map else {}
        matched: set[int] = set()
        for doc_id, entry in pred_evidence.items():
            hit = doc_id in claim.evidence and entry.label == claim.gold_label_for(doc_id)
            if hit and mode == "label_rationale":
                head = set(entry.sentences[: config.rationale_cap])
                hit = any(
                    rationale.sentence_indices <= head
                    for rationale in claim.evidence[doc_id]
                )
            if hit:
                tp += 1
                matched.add(doc_id)
            else:
                fp += 1
        fn += len(set(claim.evidence) - matched)
    return PRF(tp=tp, fp=fp, fn=fn)


def aggregates_from_confusion(confusion: ConfusionMatrix) -> LabelMetrics:
    """Accuracy, macro-F1 and support-weighted F1 from a confusion matrix."""
    total = confusion.total
    if total == 0:
        raise ValueError("empty confusion matrix")
    accuracy = float(np.trace(confusion.counts)) / total
    per_class = confusion.per_class_prf()
    f1s = [per_class[label].f1 for label in LABEL_ORDER]
    supports = [int(confusion.counts[i, :].sum()) for i in range(3)]
    macro = sum(f1s) / len(f1s)
    weighted = sum(f * s for f, s in zip(f1s, supports)) / total
    return LabelMetrics(
        accuracy=accuracy, macro_f1=macro, weighted_f1=weighted, confusion=confusion
    )


def label_metrics(gold: Sequence[Label], predicted: Sequence[Label]) -> LabelMetrics:
    """Label-prediction aggregates from aligned gold/predicted label lists."""
    return aggregates_from_confusion(ConfusionMatrix.from_pairs(gold, predicted))


_REPORT_FAMILIES = (
    ("retrieval", "Retrieval"),
    ("abstract_label_only", "Abstract Label Only"),
    ("abstract_label_rationale", "Abstract Label+Rationale"),
    ("sentence_selection_only", "Sentence Selection Only"),
    ("sentence_selection_label", "Sentence Selection+Label"),
)


@dataclass
class MetricReport:
    """Every pipeline metric family for one (gold, predictions) pair."""

    config: EvalConfig
    retrieval: PRF
    abstract_label_only: PRF
    abstract_label_rationale: PRF
    sentence_selection_only: PRF
    sentence_selection_label: PRF
    label: LabelMetrics | None = None
    fingerprint: str | None = None

    def to_dict(self) -> dict:
        out = {
            "config": {
                "rationale_cap": self.config.rationale_cap,
                "denominator": self.config.denominator,
            },
            "fingerprint": self.fingerprint,
            "metrics": {
                name: getattr(self, name).to_dict() for name, _ in _REPORT_FAMILIES
            },
        }
        if self.label is not None:
            out["metrics"]["label"] = self.label.to_dict()
        return out

    def format_table(self) -> str:
        """Plain-text table, percentages to two decimals."""
        lines = [f"{'Family':<28}{'P':>8}{'R':>8}{'F1':>8}{'tp':>6}{'fp':>6}{'fn':>6}"]
        for name, title in _REPORT_FAMILIES:
            prf: PRF = getattr(self, name)
            lines.append(
                f"{title:<28}"
                f"{100 * prf.precision:>8.2f}{100 * prf.recall:>8.2f}{100 * prf.f1:>8.2f}"
                f"{prf.tp:>6}{prf.fp:>6}{prf.fn:>6}"
            )
        if self.label is not None:
            lines.append("")
            lines.append(
                f"{'Label Prediction':<28}"
                f"accuracy {100 * self.label.accuracy:.2f}  "
                f"macro-F1 {100 * self.label.macro_f1:.2f}  "
                f"weighted-F1 {100 * self.label.weighted_f1:.2f}"
            )
            lines.append(f"{'':<28}confusion rows (true C,N,S):")
            for row in self.label.confusion.counts.tolist():
                lines.append(f"{'':<28}{row}")
        return "\n".join(lines)


def evaluate_run(
    claims: ClaimSet,
    predictions: Sequence[Prediction],
    config: EvalConfig | None = None,
    label_pairs: tuple[Sequence[Label], Sequence[Label]] | None = None,
    fingerprint: str | None = None,
) -> MetricReport:
    """Compute every metric family for a finished run.

    Retrieval metrics are taken over the predicted evidence documents.
    ``label_pairs`` optionally supplies aligned (gold, predicted) label lists
    for the label-prediction family (e.g. from an oracle-evidence run).
    """
    config = config or EvalConfig()
    pred_map = _prediction_map(claims, predictions)
    retrieved = {
        claim.claim_id: set(pred_map[claim.claim_id].evidence)
        if claim.claim_id in pred_map
        else set()
        for claim in claims
    }
    return MetricReport(
        config=config,
        retrieval=retrieval_metrics(gold_docs_by_claim(claims), retrieved, config),
        abstract_label_only=abstract_metrics(claims, predictions, "label_only", config),
        abstract_label_rationale=abstract_metrics(claims, predictions, "label_rationale", config),
        sentence_selection_only=sentence_metrics(claims, predictions, "selection_only", config),
        sentence_selection_label=sentence_metrics(claims, predictions, "selection_label", config),
        label=label_metrics(*label_pairs) if label_pairs is not None else None,
        fingerprint=fingerprint,
    )


def save_report(report: MetricReport, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report.to_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")
