"""Binary scoring of text pairs: the backend contract, a deterministic
feature-hashed logistic model, and a client for a remote scorer service.

A backend maps a batch of (claim, text) pairs to positive-class probabilities
in [0, 1], order-aligned with its input. The built-in model is a desk-scale
stand-in for neural pair classifiers and is reproducible from its training
set, hyperparameters, and seed.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from collections import Counter
from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

import httpx
import numpy as np

from .data import Label
from .errors import FingerprintError, ParseError, ProtocolError, TransportError
from .tfidf import Tokenizer

#: Task tags a backend instance may be bound to. One backend serves one tag.
TASK_TAGS = ("abstract", "rationale", "neutral", "support", "threeway")

#: Class order used by three-way backends and the confusion matrix.
CLASS_ORDER = (Label.CONTRADICT, Label.NOT_ENOUGH_INFO, Label.SUPPORT)

_MODEL_FORMAT = "claimverify-linear"
_MODEL_VERSION = 1

_WORDS = Tokenizer(lowercase=True, ngram_min=1, ngram_max=1)


@dataclass(frozen=True)
class TextPair:
    """A scoring input. side_a is always the claim and must be non-empty."""

    side_a: str
    side_b: str
    task: str

    def __post_init__(self):
        if not self.side_a:
            raise ValueError("side_a (the claim) must be non-empty")
        if self.task not in TASK_TAGS:
            raise ValueError(f"unknown task tag {self.task!r}")


@runtime_checkable
class ClassifierBackend(Protocol):
    """Scoring contract: batch of pairs in, batch of probabilities out."""

    task: str
    concurrent_safe: bool
    trainable: bool

    def score(self, pairs: Sequence[TextPair]) -> list[float]: ...


@dataclass(frozen=True)
class FeatureConfig:
    hash_bits: int = 18

    @property
    def dim(self) -> int:
        return 1 << self.hash_bits


@dataclass(frozen=True)
class PairFeatures:
    """Sparse hashed features plus the raw overlap statistics."""

    indices: np.ndarray
    values: np.ndarray
    overlap_count: int
    jaccard: float
    length_ratio: float


def _bucket(namespace: str, token: str, dim: int) -> int:
    # per-namespace salt keeps side_a/side_b terms from colliding by construction
    digest = hashlib.blake2b(
        token.encode("utf-8"), digest_size=8, person=namespace.encode("ascii")
    ).digest()
    return int.from_bytes(digest, "little") % dim


def _bigrams(words: list[str]) -> list[str]:
    return [" ".join(words[i : i + 2]) for i in range(len(words) - 1)]


def featurize_pair(pair: TextPair, config: FeatureConfig | None = None) -> PairFeatures:
    """Deterministic sparse features for one pair.

    Unigrams and bigrams of each side are hashed under separate namespaces,
    shared unigrams under a third; the hashed block is L2-normalized. Three
    scalar slots carry the overlap count, Jaccard overlap of the unigram sets
    (in [0, 1]) and the min/max token-length ratio (in [0, 1]).
    """
    config = config or FeatureConfig()
    words_a = _WORDS.words(pair.side_a)
    words_b = _WORDS.words(pair.side_b)
    set_a, set_b = set(words_a), set(words_b)
    shared = set_a & set_b
    union = set_a | set_b

    overlap = len(shared)
    jaccard = overlap / len(union) if union else 0.0
    longer = max(len(words_a), len(words_b))
    length_ratio = min(len(words_a), len(words_b)) / longer if longer else 0.0

    buckets: Counter = Counter()
    for namespace, tokens in (
        ("a1", words_a),
        ("a2", _bigrams(words_a)),
        ("b1", words_b),
        ("b2", _bigrams(words_b)),
        ("x", sorted(shared)),
    ):
        for token in tokens:
            buckets[_bucket(namespace, token, config.dim)] += 1.0
    norm = float(np.sqrt(sum(v * v for v in buckets.values())))
    if norm > 0.0:
        for index in buckets:
            buckets[index] /= norm
    for name, value in (("overlap", float(overlap)), ("jaccard", jaccard), ("ratio", length_ratio)):
        buckets[_bucket("s", name, config.dim)] += value

    indices = np.fromiter(sorted(buckets), dtype=np.int64, count=len(buckets))
    values = np.asarray([buckets[i] for i in indices])
    return PairFeatures(
        indices=indices,
        values=values,
        overlap_count=overlap,
        jaccard=jaccard,
        length_ratio=length_ratio,
    )


@dataclass(frozen=True)
class LinearHyperparams:
    hash_bits: int = 18
    epochs: int = 10
    learning_rate: float = 0.1
    l2: float = 1e-5
    seed: int = 13

    @property
    def feature_config(self) -> FeatureConfig:
        return FeatureConfig(hash_bits=self.hash_bits)


@dataclass
class LinearModel:
    """Logistic model over hashed pair features; immutable once trained."""

    weights: np.ndarray
    bias: float
    hyperparams: LinearHyperparams

    def probability(self, features: PairFeatures) -> float:
        margin = float(self.weights[features.indices] @ features.values) + self.bias
        return _sigmoid(margin)


def _sigmoid(z: float) -> float:
    z = min(max(z, -35.0), 35.0)
    return 1.0 / (1.0 + float(np.exp(-z)))


def train_linear(
    pairs: Sequence[TextPair],
    labels: Sequence[int],
    hyperparams: LinearHyperparams | None = None,
    init: LinearModel | None = None,
) -> LinearModel:
    """Minimize logistic loss by per-example SGD with seeded shuffling.

    The result is a deterministic function of (pairs, labels, hyperparams,
    init). ``init`` warm-starts the weights from another model of the same
    dimensionality. Raises ValueError on an empty or single-class training
    set.
    """
    hp = hyperparams or LinearHyperparams()
    if len(pairs) == 0:
        raise ValueError("empty training set")
    if len(pairs) != len(labels):
        raise ValueError("pairs and labels must be aligned")
    labels = [int(y) for y in labels]
    if any(y not in (0, 1) for y in labels):
        raise ValueError("labels must be 0 or 1")
    if len(set(labels)) < 2:
        raise ValueError("training set contains a single class; decision boundary undefined")

    config = hp.feature_config
    if init is not None:
        if init.weights.shape[0] != config.dim:
            raise ValueError(
                f"warm-start dimension {init.weights.shape[0]} != {config.dim}"
            )
        weights = init.weights.copy()
        bias = init.bias
    else:
        weights = np.zeros(config.dim)
        bias = 0.0

    features = [featurize_pair(p, config) for p in pairs]
    rng = np.random.default_rng(hp.seed)
    for _ in range(hp.epochs):
        for i in rng.permutation(len(features)):
            feats = features[i]
            margin = float(weights[feats.indices] @ feats.values) + bias
            gradient = _sigmoid(margin) - labels[i]
            # L2 decay applied on the active coordinates only (lazy regularization)
            weights[feats.indices] -= hp.learning_rate * (
                gradient * feats.values + hp.l2 * weights[feats.indices]
            )
            bias -= hp.learning_rate * gradient
    return LinearModel(weights=weights, bias=bias, hyperparams=hp)


class LinearBackend:
    """Built-in backend: a trained linear model bound to one task tag."""

    concurrent_safe = True
    trainable = True

    def __init__(self, model: LinearModel, task: str):
        if task not in TASK_TAGS:
            raise ValueError(f"unknown task tag {task!r}")
        self.model = model
        self.task = task

    def score(self, pairs: Sequence[TextPair]) -> list[float]:
        config = self.model.hyperparams.feature_config
        return [self.model.probability(featurize_pair(p, config)) for p in pairs]


def score(backend: ClassifierBackend, pairs: Sequence[TextPair]) -> list[float]:
    """Score a batch through ``backend``, enforcing the output contract."""
    pairs = list(pairs)
    if not pairs:
        return []
    probs = backend.score(pairs)
    if len(probs) != len(pairs):
        raise ProtocolError(
            f"backend returned {len(probs)} probabilities for {len(pairs)} pairs"
        )
    out = [float(p) for p in probs]
    if any(p < 0.0 or p > 1.0 or p != p for p in out):
        raise ProtocolError("backend produced a probability outside [0, 1]")
    return out


def predict_binary(
    backend: ClassifierBackend, pairs: Sequence[TextPair], threshold: float = 0.5
) -> list[bool]:
    """Positive iff probability strictly exceeds ``threshold`` (in (0, 1))."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    return [p > threshold for p in score(backend, pairs)]


@dataclass
class LinearThreeWay:
    """One-vs-rest linear models in CLASS_ORDER, combined by softmax."""

    models: tuple[LinearModel, LinearModel, LinearModel]


def train_linear_threeway(
    pairs: Sequence[TextPair],
    labels: Sequence[Label],
    hyperparams: LinearHyperparams | None = None,
) -> LinearThreeWay:
    models = []
    for cls in CLASS_ORDER:
        binary = [1 if label == cls else 0 for label in labels]
        models.append(train_linear(pairs, binary, hyperparams))
    return LinearThreeWay(models=tuple(models))


class ThreeWayLinearBackend:
    """Per-class scores for the three-way baseline label classifier."""

    concurrent_safe = True
    trainable = True
    task = "threeway"

    def __init__(self, model: LinearThreeWay):
        self.model = model

    def score_classes(self, pairs: Sequence[TextPair]) -> list[tuple[float, float, float]]:
        """Softmax-normalized class scores in CLASS_ORDER (C, N, S)."""
        out = []
        for pair in pairs:
            margins = []
            for model in self.model.models:
                config = model.hyperparams.feature_config
                feats = featurize_pair(pair, config)
                margins.append(float(model.weights[feats.indices] @ feats.values) + model.bias)
            z = np.asarray(margins)
            z = np.exp(z - z.max())
            z /= z.sum()
            out.append((float(z[0]), float(z[1]), float(z[2])))
        return out


def save_model(
    path,
    model: LinearModel | LinearThreeWay,
    task: str,
    fingerprint: str | None = None,
) -> None:
    """Persist a trained model. The file is byte-identical for identical
    model state, so retraining with a fixed seed reproduces it exactly."""
    if isinstance(model, LinearThreeWay):
        kind = "threeway"
        weight_blocks = [m.weights for m in model.models]
        biases = [m.bias for m in model.models]
        hp = model.models[0].hyperparams
    else:
        kind = "binary"
        weight_blocks = [model.weights]
        biases = [model.bias]
        hp = model.hyperparams
    header = {
        "format": _MODEL_FORMAT,
        "version": _MODEL_VERSION,
        "kind": kind,
        "task": task,
        "fingerprint": fingerprint,
        "hyperparams": {
            "hash_bits": hp.hash_bits,
            "epochs": hp.epochs,
            "learning_rate": hp.learning_rate,
            "l2": hp.l2,
            "seed": hp.seed,
        },
        "biases": biases,
        "dim": int(weight_blocks[0].shape[0]),
    }
    with open(path, "wb") as handle:
        handle.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        for block in weight_blocks:
            handle.write(np.ascontiguousarray(block, dtype="<f8").tobytes())


@dataclass(frozen=True)
class LoadedModel:
    kind: str
    task: str
    fingerprint: str | None
    model: LinearModel | LinearThreeWay

    def backend(self) -> LinearBackend | ThreeWayLinearBackend:
        if self.kind == "threeway":
            return ThreeWayLinearBackend(self.model)
        return LinearBackend(self.model, self.task)


def load_model(path, expected_fingerprint: str | None = None) -> LoadedModel:
    with open(path, "rb") as handle:
        header_line = handle.readline()
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: not a model file") from exc
        if header.get("format") != _MODEL_FORMAT or header.get("version") != _MODEL_VERSION:
            raise ParseError(f"{path}: unsupported model format/version")
        if (
            expected_fingerprint is not None
            and header.get("fingerprint") != expected_fingerprint
        ):
            raise FingerprintError(
                f"{path}: model fingerprint {header.get('fingerprint')} does not match "
                f"expected {expected_fingerprint}"
            )
        hp = LinearHyperparams(**header["hyperparams"])
        dim = header["dim"]
        blocks = 3 if header["kind"] == "threeway" else 1
        raw = handle.read()
    expected_bytes = blocks * dim * 8
    if len(raw) != expected_bytes:
        raise ParseError(f"{path}: truncated weight data")
    weights = np.frombuffer(raw, dtype="<f8").reshape(blocks, dim)
    if header["kind"] == "threeway":
        model: LinearModel | LinearThreeWay = LinearThreeWay(
            models=tuple(
                LinearModel(weights=weights[i].copy(), bias=float(header["biases"][i]), hyperparams=hp)
                for i in range(3)
            )
        )
    else:
        model = LinearModel(
            weights=weights[0].copy(), bias=float(header["biases"][0]), hyperparams=hp
        )
    return LoadedModel(
        kind=header["kind"],
        task=header["task"],
        fingerprint=header.get("fingerprint"),
        model=model,
    )


class RemoteBackend:
    """HTTP client for a scorer service speaking the /score protocol.

    Concurrent callers are admitted up to ``max_in_flight`` requests; failed
    transports are retried with exponential backoff before TransportError is
    raised. Replies that do not match the protocol raise ProtocolError.
    """

    concurrent_safe = True
    trainable = False

    def __init__(
        self,
        endpoint: str,
        task: str,
        timeout: float = 30.0,
        retries: int = 2,
        backoff: float = 0.25,
        max_in_flight: int = 4,
        client: httpx.Client | None = None,
    ):
        if task not in TASK_TAGS:
            raise ValueError(f"unknown task tag {task!r}")
        self.endpoint = endpoint.rstrip("/")
        self.task = task
        self.retries = retries
        self.backoff = backoff
        self._semaphore = threading.BoundedSemaphore(max_in_flight)
        self._client = client or httpx.Client(timeout=timeout)

    def score(self, pairs: Sequence[TextPair]) -> list[float]:
        if not pairs:
            return []
        body = {"task": self.task, "pairs": [[p.side_a, p.side_b] for p in pairs]}
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                with self._semaphore:
                    response = self._client.post(f"{self.endpoint}/score", json=body)
            except httpx.HTTPError as exc:
                last_error = exc
                if attempt < self.retries:
                    time.sleep(self.backoff * (2**attempt))
                continue
            if response.status_code >= 500:
                last_error = TransportError(
                    f"scorer returned HTTP {response.status_code}"
                )
                if attempt < self.retries:
                    time.sleep(self.backoff * (2**attempt))
                continue
            if response.status_code != 200:
                raise TransportError(
                    f"scorer rejected request: HTTP {response.status_code} {response.text[:200]}"
                )
            return self._parse_reply(response, len(pairs))
        raise TransportError(
            f"scorer at {self.endpoint} unreachable after {self.retries + 1} attempts: {last_error}"
        )

    @staticmethod
    def _parse_reply(response: httpx.Response, n: int) -> list[float]:
        try:
            payload = response.json()
        except ValueError as exc:
            raise ProtocolError(f"scorer reply is not JSON: {exc}") from exc
        probs = payload.get("probs") if isinstance(payload, dict) else None
        if not isinstance(probs, list) or len(probs) != n:
            raise ProtocolError("scorer reply must carry an order-aligned 'probs' list")
        out = []
        for p in probs:
            if not isinstance(p, (int, float)) or isinstance(p, bool) or not 0.0 <= p <= 1.0:
                raise ProtocolError(f"scorer probability {p!r} outside [0, 1]")
            out.append(float(p))
        return out

    def health(self) -> dict:
        try:
            response = self._client.get(f"{self.endpoint}/healthz")
        except httpx.HTTPError as exc:
            raise TransportError(f"health check failed: {exc}") from exc
        if response.status_code != 200:
            raise TransportError(f"health check returned HTTP {response.status_code}")
        return response.json()


class CountingBackend:
    """Wrapper that counts invocations; used to observe short-circuiting."""

    def __init__(self, inner: ClassifierBackend):
        self.inner = inner
        self.calls = 0
        self.pairs_scored = 0
        self._lock = threading.Lock()

    @property
    def task(self) -> str:
        return self.inner.task

    @property
    def concurrent_safe(self) -> bool:
        return self.inner.concurrent_safe

    @property
    def trainable(self) -> bool:
        return self.inner.trainable

    def score(self, pairs: Sequence[TextPair]) -> list[float]:
        with self._lock:
            self.calls += 1
            self.pairs_scored += len(pairs)
        return self.inner.score(pairs)
