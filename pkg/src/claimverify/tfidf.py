"""Word n-gram TF-IDF vectorization and cosine top-k ranking over a corpus.

Conventions, pinned for reproducibility:

* tokens are maximal runs of letters/digits (underscore excluded), optionally
  lowercased, expanded into word n-grams joined by single spaces;
* idf(t) = ln((1 + N) / (1 + df(t))) + 1 (smoothed);
* tf is the raw in-document count (sublinear ``1 + ln(tf)`` optional);
* document vectors are L2-normalized, so cosine similarity is a dot product;
* ranking ties are broken by ascending doc_id.
"""

from __future__ import annotations

import pickle
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .data import Corpus
from .errors import FingerprintError, ParseError

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_INDEX_FORMAT = "claimverify-tfidf-index"
_INDEX_VERSION = 1


@dataclass(frozen=True)
class Tokenizer:
    """Deterministic word n-gram tokenizer."""

    lowercase: bool = True
    ngram_min: int = 1
    ngram_max: int = 2

    def __post_init__(self):
        if not (1 <= self.ngram_min <= self.ngram_max <= 3):
            raise ValueError(
                f"ngram range ({self.ngram_min}, {self.ngram_max}) must satisfy "
                "1 <= min <= max <= 3"
            )

    def words(self, text: str) -> list[str]:
        words = _TOKEN_RE.findall(text)
        if self.lowercase:
            words = [w.lower() for w in words]
        return words

    def tokenize(self, text: str) -> list[str]:
        words = self.words(text)
        tokens: list[str] = []
        for n in range(self.ngram_min, self.ngram_max + 1):
            if n == 1:
                tokens.extend(words)
            else:
                tokens.extend(" ".join(words[i : i + n]) for i in range(len(words) - n + 1))
        return tokens


def tokenize(text: str, tokenizer: Tokenizer | None = None) -> list[str]:
    """Tokenize ``text`` into word n-grams (empty text gives an empty list)."""
    return (tokenizer or Tokenizer()).tokenize(text)


@dataclass(frozen=True)
class WeightingConfig:
    sublinear_tf: bool = False


@dataclass
class TfidfIndex:
    """Immutable TF-IDF index over a corpus; safe for concurrent queries."""

    tokenizer: Tokenizer
    weighting: WeightingConfig
    vocabulary: dict[str, int]
    idf: np.ndarray
    matrix: sp.csr_matrix          # docs x terms, rows L2-normalized
    doc_ids: np.ndarray            # row -> doc_id
    fingerprint: str | None = None

    def __len__(self) -> int:
        return self.matrix.shape[0]

    def transform(self, text: str) -> np.ndarray:
        """Unit-norm dense TF-IDF vector for arbitrary query text.

        Out-of-vocabulary terms are dropped; a query with no known terms maps
        to the zero vector.
        """
        vec = np.zeros(len(self.vocabulary))
        for term, count in Counter(self.tokenizer.tokenize(text)).items():
            column = self.vocabulary.get(term)
            if column is None:
                continue
            tf = 1.0 + np.log(count) if self.weighting.sublinear_tf else float(count)
            vec[column] = tf * self.idf[column]
        norm = np.linalg.norm(vec)
        if norm > 0.0:
            vec /= norm
        return vec

    def doc_vector(self, doc_id: int) -> dict[str, float]:
        """The stored weight vector of one document, keyed by term."""
        rows = np.flatnonzero(self.doc_ids == doc_id)
        if rows.size == 0:
            raise KeyError(doc_id)
        row = self.matrix.getrow(int(rows[0]))
        terms = sorted(self.vocabulary, key=self.vocabulary.get)
        return {terms[j]: float(v) for j, v in zip(row.indices, row.data)}


def build_index(
    corpus: Corpus,
    tokenizer: Tokenizer | None = None,
    weighting: WeightingConfig | None = None,
    fingerprint: str | None = None,
) -> TfidfIndex:
    """Index every document's title + abstract text.

    Raises ValueError on an empty corpus. Documents with no tokens get zero
    vectors and always rank last.
    """
    if len(corpus) == 0:
        raise ValueError("cannot build an index over an empty corpus")
    tokenizer = tokenizer or Tokenizer()
    weighting = weighting or WeightingConfig()

    doc_ids: list[int] = []
    doc_counts: list[Counter] = []
    document_frequency: Counter = Counter()
    for doc in corpus:
        counts = Counter(tokenizer.tokenize(doc.text()))
        doc_ids.append(doc.doc_id)
        doc_counts.append(counts)
        document_frequency.update(counts.keys())

    vocabulary = {term: j for j, term in enumerate(sorted(document_frequency))}
    n_docs = len(doc_ids)
    idf = np.empty(len(vocabulary))
    for term, j in vocabulary.items():
        idf[j] = np.log((1.0 + n_docs) / (1.0 + document_frequency[term])) + 1.0

    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for counts in doc_counts:
        row = []
        for term in sorted(counts):
            tf = 1.0 + np.log(counts[term]) if weighting.sublinear_tf else float(counts[term])
            column = vocabulary[term]
            row.append((column, tf * idf[column]))
        norm = float(np.sqrt(sum(v * v for _, v in row)))
        for column, value in row:
            indices.append(column)
            data.append(value / norm if norm > 0.0 else 0.0)
        indptr.append(len(indices))

    matrix = sp.csr_matrix(
        (np.asarray(data), np.asarray(indices, dtype=np.int32), np.asarray(indptr, dtype=np.int32)),
        shape=(n_docs, len(vocabulary)),
    )
    return TfidfIndex(
        tokenizer=tokenizer,
        weighting=weighting,
        vocabulary=vocabulary,
        idf=idf,
        matrix=matrix,
        doc_ids=np.asarray(doc_ids, dtype=np.int64),
        fingerprint=fingerprint,
    )


def top_k(index: TfidfIndex, query_text: str, k: int) -> list[tuple[int, float]]:
    """The ``k`` most cosine-similar documents as (doc_id, score) pairs.

    Scores are non-increasing; equal scores are ordered by ascending doc_id,
    so for any k1 <= k2 the k1-ranking is a prefix of the k2-ranking.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    scores = index.matrix @ index.transform(query_text)
    np.clip(scores, 0.0, 1.0, out=scores)
    order = np.lexsort((index.doc_ids, -scores))[: min(k, len(index))]
    return [(int(index.doc_ids[j]), float(scores[j])) for j in order]


def save_index(index: TfidfIndex, path) -> None:
    payload = {"format": _INDEX_FORMAT, "version": _INDEX_VERSION,
               "fingerprint": index.fingerprint, "index": index}
    with open(path, "wb") as handle:
        pickle.dump(payload, handle, protocol=4)


def load_index(path, expected_fingerprint: str | None = None) -> TfidfIndex:
    """Load a cached index; fingerprint or version mismatch forces a rebuild
    by raising FingerprintError."""
    with open(path, "rb") as handle:
        payload = pickle.load(handle)
    if not isinstance(payload, dict) or payload.get("format") != _INDEX_FORMAT:
        raise ParseError(f"{path}: not an index cache file")
    if payload.get("version") != _INDEX_VERSION:
        raise FingerprintError(
            f"{path}: cache version {payload.get('version')} != {_INDEX_VERSION}"
        )
    if expected_fingerprint is not None and payload.get("fingerprint") != expected_fingerprint:
        raise FingerprintError(
            f"{path}: cache fingerprint {payload.get('fingerprint')} does not match "
            f"expected {expected_fingerprint}"
        )
    return payload["index"]
