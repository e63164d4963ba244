"""Dataset model and line-delimited JSON IO for corpora, claims, and predictions.

File layouts (one JSON object per line):

* corpus:      ``{"doc_id": int, "title": str, "abstract": [str, ...]}``
* claims:      ``{"id": int, "claim": str, "evidence": {doc_id: [{"sentences": [int], "label": str}]},
                 "cited_doc_ids": [int]}``
* predictions: ``{"id": int, "evidence": {doc_id: {"sentences": [int], "label": str}}}``

Unknown extra fields are ignored. Loaded objects are immutable and safe to
share across threads.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ContractError, IntegrityError, ParseError

logger = logging.getLogger(__name__)


class Label(str, Enum):
    SUPPORT = "SUPPORT"
    CONTRADICT = "CONTRADICT"
    NOT_ENOUGH_INFO = "NOT_ENOUGH_INFO"


#: Labels that may appear on gold or predicted evidence. Gold NEI is encoded
#: by the *absence* of evidence, never by an explicit entry.
EVIDENCE_LABELS = (Label.SUPPORT, Label.CONTRADICT)


@dataclass(frozen=True)
class Document:
    """A corpus abstract: title plus pre-segmented sentences (0-indexed)."""

    doc_id: int
    title: str
    sentences: tuple[str, ...]

    @property
    def degenerate(self) -> bool:
        return not self.sentences

    def text(self) -> str:
        """Title and abstract joined into one retrieval string."""
        return " ".join((self.title, *self.sentences)).strip()


@dataclass(frozen=True)
class GoldRationale:
    """One annotated rationale: a sentence set that jointly justifies a label."""

    sentence_indices: frozenset[int]
    label: Label


@dataclass(frozen=True)
class Claim:
    claim_id: int
    text: str
    cited_doc_ids: tuple[int, ...]
    evidence: Mapping[int, tuple[GoldRationale, ...]] = field(default_factory=dict)

    @property
    def has_evidence(self) -> bool:
        return bool(self.evidence)

    def evidence_docs(self) -> tuple[int, ...]:
        return tuple(sorted(self.evidence))

    def gold_label_for(self, doc_id: int) -> Label | None:
        """The (shared) label of this claim's rationales in ``doc_id``, if any."""
        rationales = self.evidence.get(doc_id)
        return rationales[0].label if rationales else None

    def gold_sentences_for(self, doc_id: int) -> frozenset[int]:
        """Union of all rationale sentence indices in ``doc_id``."""
        out: frozenset[int] = frozenset()
        for rationale in self.evidence.get(doc_id, ()):
            out |= rationale.sentence_indices
        return out


@dataclass(frozen=True)
class PredictedEvidence:
    """A system verdict on one document: selected sentences plus label."""

    sentences: tuple[int, ...]
    label: Label


@dataclass(frozen=True)
class Prediction:
    claim_id: int
    evidence: Mapping[int, PredictedEvidence] = field(default_factory=dict)


class Corpus:
    """All documents of a run, indexable by doc_id, in file order."""

    def __init__(self, documents: Iterable[Document]):
        self._docs: dict[int, Document] = {}
        for doc in documents:
            if doc.doc_id in self._docs:
                raise IntegrityError(f"duplicate doc_id {doc.doc_id}")
            self._docs[doc.doc_id] = doc

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self._docs.values())

    def __contains__(self, doc_id: int) -> bool:
        return doc_id in self._docs

    def __getitem__(self, doc_id: int) -> Document:
        try:
            return self._docs[doc_id]
        except KeyError:
            raise IntegrityError(f"unknown doc_id {doc_id}") from None

    def doc_ids(self) -> list[int]:
        return list(self._docs)


class ClaimSet:
    """All claims of a split, in file order, indexable by claim_id."""

    def __init__(self, claims: Iterable[Claim]):
        self._claims: dict[int, Claim] = {}
        for claim in claims:
            if claim.claim_id in self._claims:
                raise IntegrityError(f"duplicate claim id {claim.claim_id}")
            self._claims[claim.claim_id] = claim

    def __len__(self) -> int:
        return len(self._claims)

    def __iter__(self) -> Iterator[Claim]:
        return iter(self._claims.values())

    def __contains__(self, claim_id: int) -> bool:
        return claim_id in self._claims

    def __getitem__(self, claim_id: int) -> Claim:
        try:
            return self._claims[claim_id]
        except KeyError:
            raise IntegrityError(f"unknown claim id {claim_id}") from None

    def claim_ids(self) -> list[int]:
        return list(self._claims)


def _iter_records(path) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise ParseError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, record


def _require(record: dict, key: str, where: str):
    if key not in record:
        raise ParseError(f"{where}: missing field '{key}'")
    return record[key]


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: expected an integer, got {value!r}")
    return value


def load_corpus(path, allow_degenerate: bool = False) -> Corpus:
    """Load a corpus file.

    Raises ParseError (with line number) on malformed records, IntegrityError
    on duplicate doc_ids or, unless ``allow_degenerate``, on documents with an
    empty abstract.
    """
    docs: list[Document] = []
    seen: dict[int, int] = {}
    for lineno, record in _iter_records(path):
        where = f"{path}:{lineno}"
        doc_id = _as_int(_require(record, "doc_id", where), where)
        title = _require(record, "title", where)
        abstract = _require(record, "abstract", where)
        if not isinstance(title, str):
            raise ParseError(f"{where}: 'title' must be a string")
        if not isinstance(abstract, list) or not all(isinstance(s, str) for s in abstract):
            raise ParseError(f"{where}: 'abstract' must be a list of strings")
        if doc_id in seen:
            raise IntegrityError(
                f"{where}: duplicate doc_id {doc_id} (first seen on line {seen[doc_id]})"
            )
        if not abstract and not allow_degenerate:
            raise IntegrityError(f"{where}: document {doc_id} has an empty abstract")
        seen[doc_id] = lineno
        docs.append(Document(doc_id=doc_id, title=title, sentences=tuple(abstract)))
    return Corpus(docs)


def _parse_rationales(raw, doc_id: int, where: str) -> tuple[GoldRationale, ...]:
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{where}: evidence for doc {doc_id} must be a non-empty list")
    rationales = []
    labels = set()
    for entry in raw:
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: evidence entry for doc {doc_id} must be an object")
        sentences = _require(entry, "sentences", where)
        label_raw = _require(entry, "label", where)
        if not isinstance(sentences, list) or not sentences:
            raise IntegrityError(f"{where}: rationale for doc {doc_id} has no sentences")
        indices = frozenset(_as_int(i, where) for i in sentences)
        if any(i < 0 for i in indices):
            raise IntegrityError(f"{where}: negative sentence index for doc {doc_id}")
        try:
            label = Label(label_raw)
        except ValueError:
            raise ParseError(f"{where}: unknown label {label_raw!r}") from None
        if label not in EVIDENCE_LABELS:
            raise IntegrityError(
                f"{where}: label {label.value} is not allowed on evidence entries"
            )
        labels.add(label)
        rationales.append(GoldRationale(sentence_indices=indices, label=label))
    if len(labels) > 1:
        raise IntegrityError(f"{where}: conflicting evidence labels for doc {doc_id}")
    return tuple(rationales)


def load_claims(path, corpus: Corpus | None = None) -> ClaimSet:
    """Load a claims file, optionally validating references against ``corpus``.

    Claims without evidence entries are retained: absence of evidence encodes
    a gold NOT_ENOUGH_INFO verdict.
    """
    claims: list[Claim] = []
    for lineno, record in _iter_records(path):
        where = f"{path}:{lineno}"
        claim_id = _as_int(_require(record, "id", where), where)
        text = _require(record, "claim", where)
        if not isinstance(text, str) or not text.strip():
            raise IntegrityError(f"{where}: claim text must be non-empty")

        raw_evidence = record.get("evidence", {})
        if not isinstance(raw_evidence, dict):
            raise ParseError(f"{where}: 'evidence' must be an object")
        evidence: dict[int, tuple[GoldRationale, ...]] = {}
        for doc_key, rationales_raw in raw_evidence.items():
            try:
                doc_id = int(doc_key)
            except (TypeError, ValueError):
                raise ParseError(f"{where}: evidence key {doc_key!r} is not a doc_id") from None
            evidence[doc_id] = _parse_rationales(rationales_raw, doc_id, where)

        if "cited_doc_ids" in record:
            raw_cited = record["cited_doc_ids"]
            if not isinstance(raw_cited, list):
                raise ParseError(f"{where}: 'cited_doc_ids' must be a list")
            cited = tuple(_as_int(d, where) for d in raw_cited)
        else:
            # Dataset variants may omit the citation list; fall back to the
            # evidence keys rather than guessing silently.
            cited = tuple(sorted(evidence))
            logger.warning("%s: no cited_doc_ids; falling back to evidence keys", where)

        missing_citation = set(evidence) - set(cited)
        if missing_citation:
            raise IntegrityError(
                f"{where}: evidence docs {sorted(missing_citation)} not in cited_doc_ids"
            )
        if corpus is not None:
            for doc_id, rationales in evidence.items():
                if doc_id not in corpus:
                    raise IntegrityError(f"{where}: evidence doc {doc_id} not in corpus")
                n_sentences = len(corpus[doc_id].sentences)
                for rationale in rationales:
                    bad = [i for i in rationale.sentence_indices if i >= n_sentences]
                    if bad:
                        raise IntegrityError(
                            f"{where}: sentence indices {sorted(bad)} out of range "
                            f"for doc {doc_id} ({n_sentences} sentences)"
                        )
        claims.append(
            Claim(claim_id=claim_id, text=text, cited_doc_ids=cited, evidence=evidence)
        )
    return ClaimSet(claims)


def _canonical_prediction(pred: Prediction) -> Prediction:
    evidence = {
        doc_id: PredictedEvidence(
            sentences=tuple(sorted(set(pred.evidence[doc_id].sentences))),
            label=pred.evidence[doc_id].label,
        )
        for doc_id in sorted(pred.evidence)
    }
    return Prediction(claim_id=pred.claim_id, evidence=evidence)


def write_predictions(predictions: Sequence[Prediction], path) -> None:
    """Write predictions in canonical form (sorted ids, docs, and sentences).

    Raises ContractError when a prediction violates the output contract
    (NOT_ENOUGH_INFO label, empty sentence list, duplicate claim ids).
    """
    seen: set[int] = set()
    canonical = sorted((_canonical_prediction(p) for p in predictions), key=lambda p: p.claim_id)
    with open(path, "w", encoding="utf-8") as handle:
        for pred in canonical:
            if pred.claim_id in seen:
                raise ContractError(f"duplicate prediction for claim {pred.claim_id}")
            seen.add(pred.claim_id)
            evidence_obj = {}
            for doc_id in sorted(pred.evidence):
                entry = pred.evidence[doc_id]
                if entry.label not in EVIDENCE_LABELS:
                    raise ContractError(
                        f"claim {pred.claim_id} doc {doc_id}: {entry.label.value} is not a "
                        "valid evidence label (NEI docs must be omitted)"
                    )
                if not entry.sentences:
                    raise ContractError(
                        f"claim {pred.claim_id} doc {doc_id}: empty sentence list"
                    )
                evidence_obj[str(doc_id)] = {
                    "sentences": list(entry.sentences),
                    "label": entry.label.value,
                }
            record = {"id": pred.claim_id, "evidence": evidence_obj}
            handle.write(json.dumps(record, separators=(",", ":")) + "\n")


def load_predictions(path, corpus: Corpus | None = None) -> list[Prediction]:
    """Load predictions into canonical form, validating the output contract."""
    predictions: list[Prediction] = []
    seen: set[int] = set()
    for lineno, record in _iter_records(path):
        where = f"{path}:{lineno}"
        claim_id = _as_int(_require(record, "id", where), where)
        if claim_id in seen:
            raise IntegrityError(f"{where}: duplicate prediction for claim {claim_id}")
        seen.add(claim_id)
        raw_evidence = _require(record, "evidence", where)
        if not isinstance(raw_evidence, dict):
            raise ParseError(f"{where}: 'evidence' must be an object")
        evidence: dict[int, PredictedEvidence] = {}
        for doc_key, entry in raw_evidence.items():
            try:
                doc_id = int(doc_key)
            except (TypeError, ValueError):
                raise ParseError(f"{where}: evidence key {doc_key!r} is not a doc_id") from None
            if not isinstance(entry, dict):
                raise ParseError(f"{where}: evidence for doc {doc_id} must be an object")
            sentences = _require(entry, "sentences", where)
            if not isinstance(sentences, list) or not sentences:
                raise IntegrityError(f"{where}: doc {doc_id} has an empty sentence list")
            indices = tuple(sorted({_as_int(i, where) for i in sentences}))
            try:
                label = Label(_require(entry, "label", where))
            except ValueError:
                raise ParseError(f"{where}: unknown label for doc {doc_id}") from None
            if label not in EVIDENCE_LABELS:
                raise IntegrityError(f"{where}: NEI labels may not appear in predictions")
            if corpus is not None:
                if doc_id not in corpus:
                    raise IntegrityError(f"{where}: doc {doc_id} not in corpus")
                n_sentences = len(corpus[doc_id].sentences)
                if any(i >= n_sentences or i < 0 for i in indices):
                    raise IntegrityError(
                        f"{where}: sentence index out of range for doc {doc_id}"
                    )
            evidence[doc_id] = PredictedEvidence(sentences=indices, label=label)
        predictions.append(Prediction(claim_id=claim_id, evidence=evidence))
    predictions.sort(key=lambda p: p.claim_id)
    return predictions
