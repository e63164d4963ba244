"""Run configuration, stage wiring, training entry points, and artifacts.

A run is deterministic for a fixed configuration, seed, dataset, and backend
state: two identical ``run_pipeline`` invocations produce byte-identical
prediction files. Every artifact (models, index cache, stage maps, reports)
embeds the configuration fingerprint, and artifacts from different
fingerprints refuse to mix.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np
import yaml

from . import abstracts, rationales
from .classifier import (
    LinearHyperparams,
    RemoteBackend,
    TextPair,
    load_model,
    save_model,
    train_linear,
    train_linear_threeway,
)
from .data import (
    Claim,
    ClaimSet,
    Corpus,
    Label,
    PredictedEvidence,
    Prediction,
    load_claims,
    load_corpus,
    load_predictions,
    write_predictions,
)
from .errors import ConfigError, FingerprintError, ParseError, StageError
from .evaluation import EvalConfig, MetricReport, evaluate_run, save_report
from .labels import (
    CascadeConfig,
    LabelInput,
    build_label_input,
    make_label_training_sets,
    predict_label_three_way,
    predict_label_two_step,
)
from .tfidf import TfidfIndex, Tokenizer, WeightingConfig, build_index, load_index, save_index

logger = logging.getLogger(__name__)

#: Environment variable overriding every remote backend endpoint.
ENDPOINT_ENV_VAR = "CLAIMVERIFY_ENDPOINT"

TRAINABLE_STAGES = ("abstract", "rationale", "neutral", "support", "threeway")


@dataclass(frozen=True)
class BackendSpec:
    kind: str = "builtin"  # builtin | remote
    model: str | None = None
    endpoint: str | None = None

    def __post_init__(self):
        if self.kind not in ("builtin", "remote"):
            raise ConfigError(f"unknown backend kind {self.kind!r}")
        if self.kind == "remote" and not self.endpoint and not os.environ.get(ENDPOINT_ENV_VAR):
            raise ConfigError("remote backend needs an endpoint (config or "
                              f"{ENDPOINT_ENV_VAR})")


@dataclass
class PipelineConfig:
    corpus_path: str = "data/corpus.jsonl"
    claims_path: str = "data/claims_dev.jsonl"
    train_claims_paths: tuple[str, ...] = ()
    tokenizer: Tokenizer = field(default_factory=Tokenizer)
    weighting: WeightingConfig = field(default_factory=WeightingConfig)
    retrieval: abstracts.RetrievalConfig = field(default_factory=abstracts.RetrievalConfig)
    rationale: rationales.RationaleConfig = field(default_factory=rationales.RationaleConfig)
    rationale_negative_subsample: float | None = None
    cascade: CascadeConfig = field(default_factory=CascadeConfig)
    evaluation: EvalConfig = field(default_factory=EvalConfig)
    hyperparams: LinearHyperparams = field(default_factory=LinearHyperparams)
    backends: dict[str, BackendSpec] = field(default_factory=dict)
    oracle_abstracts: bool = False
    oracle_rationales: bool = False
    retrieved_map: str | None = None
    rationale_train_map: str | None = None
    warm_start_rationale: bool = False
    seed: int = 13
    workers: int = 1
    output_dir: str = "out"
    index_cache: str | None = None

    def __post_init__(self):
        if self.oracle_rationales and not (self.oracle_abstracts or self.retrieved_map):
            raise ConfigError(
                "oracle_rationales requires oracle_abstracts or an explicit retrieved_map"
            )
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        # a single seed drives shuffling, NEI sampling, and model training
        self.hyperparams = replace(self.hyperparams, seed=self.seed)
        self.cascade = replace(self.cascade, seed=self.seed)

    def backend_spec(self, stage: str) -> BackendSpec:
        spec = self.backends.get(stage)
        if spec is None:
            spec = BackendSpec(kind="builtin",
                               model=str(Path(self.output_dir) / "models" / f"{stage}.bin"))
        return spec

    def fingerprint(self) -> str:
        """Twelve hex chars identifying every behavior-relevant setting."""
        payload = {
            "tokenizer": [self.tokenizer.lowercase, self.tokenizer.ngram_min,
                          self.tokenizer.ngram_max],
            "weighting": [self.weighting.sublinear_tf],
            "retrieval": [self.retrieval.pool_size, self.retrieval.mode,
                          self.retrieval.baseline_k, self.retrieval.rerank_k,
                          self.retrieval.max_accepted],
            "rationale": [self.rationale.mode, self.rationale.threshold,
                          self.rationale.max_sentences, self.rationale_negative_subsample],
            "cascade": [self.cascade.scheme, self.cascade.neutral_threshold,
                        self.cascade.support_threshold, self.cascade.nei_negatives_per_doc,
                        self.cascade.nei_source],
            "hyperparams": [self.hyperparams.hash_bits, self.hyperparams.epochs,
                            self.hyperparams.learning_rate, self.hyperparams.l2],
            "oracle": [self.oracle_abstracts, self.oracle_rationales],
            "warm_start": self.warm_start_rationale,
            "seed": self.seed,
        }
        return _digest(payload)


def _digest(payload) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def _take(section: Mapping, allowed: Iterable[str], where: str) -> dict:
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in config section '{where}'")
    return dict(section)


def config_from_dict(raw: Mapping) -> PipelineConfig:
    raw = _take(raw, (
        "data", "tokenizer", "weighting", "retrieval", "rationale", "cascade",
        "evaluation", "classifier", "backends", "oracle", "seed", "workers",
        "output_dir", "index_cache", "retrieved_map", "rationale_train_map",
        "warm_start_rationale",
    ), "<root>")
    kwargs: dict = {}

    data = _take(raw.get("data", {}), ("corpus", "claims", "train_claims"), "data")
    if "corpus" in data:
        kwargs["corpus_path"] = data["corpus"]
    if "claims" in data:
        kwargs["claims_path"] = data["claims"]
    if "train_claims" in data:
        paths = data["train_claims"]
        kwargs["train_claims_paths"] = tuple([paths] if isinstance(paths, str) else paths)

    if "tokenizer" in raw:
        kwargs["tokenizer"] = Tokenizer(**_take(
            raw["tokenizer"], ("lowercase", "ngram_min", "ngram_max"), "tokenizer"))
    if "weighting" in raw:
        kwargs["weighting"] = WeightingConfig(**_take(
            raw["weighting"], ("sublinear_tf",), "weighting"))
    if "retrieval" in raw:
        kwargs["retrieval"] = abstracts.RetrievalConfig(**_take(
            raw["retrieval"],
            ("pool_size", "mode", "baseline_k", "rerank_k", "max_accepted"), "retrieval"))
    if "rationale" in raw:
        section = _take(raw["rationale"],
                        ("mode", "threshold", "max_sentences", "negative_subsample"),
                        "rationale")
        kwargs["rationale_negative_subsample"] = section.pop("negative_subsample", None)
        kwargs["rationale"] = rationales.RationaleConfig(**section)
    if "cascade" in raw:
        kwargs["cascade"] = CascadeConfig(**_take(
            raw["cascade"],
            ("scheme", "neutral_threshold", "support_threshold",
             "nei_negatives_per_doc", "nei_source"), "cascade"))
    if "evaluation" in raw:
        kwargs["evaluation"] = EvalConfig(**_take(
            raw["evaluation"], ("rationale_cap", "denominator"), "evaluation"))
    if "classifier" in raw:
        kwargs["hyperparams"] = LinearHyperparams(**_take(
            raw["classifier"], ("hash_bits", "epochs", "learning_rate", "l2"), "classifier"))
    if "backends" in raw:
        backends = {}
        for stage, spec in raw["backends"].items():
            if stage not in TRAINABLE_STAGES:
                raise ConfigError(f"unknown backend stage {stage!r}")
            backends[stage] = BackendSpec(**_take(
                spec, ("kind", "model", "endpoint"), f"backends.{stage}"))
        kwargs["backends"] = backends
    if "oracle" in raw:
        oracle = _take(raw["oracle"], ("abstracts", "rationales"), "oracle")
        kwargs["oracle_abstracts"] = bool(oracle.get("abstracts", False))
        kwargs["oracle_rationales"] = bool(oracle.get("rationales", False))
    for key in ("seed", "workers", "output_dir", "index_cache",
                "retrieved_map", "rationale_train_map", "warm_start_rationale"):
        if key in raw:
            kwargs[key] = raw[key]
    return PipelineConfig(**kwargs)


def load_config(path) -> PipelineConfig:
    with open(path, encoding="utf-8") as handle:
        raw = yaml.safe_load(handle)
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config root must be a mapping")
    return config_from_dict(raw)


def corpus_digest(corpus: Corpus) -> str:
    state = hashlib.sha256()
    for doc in corpus:
        state.update(str(doc.doc_id).encode())
        state.update(doc.title.encode("utf-8"))
        for sentence in doc.sentences:
            state.update(b"\x00" + sentence.encode("utf-8"))
        state.update(b"\x01")
    return state.hexdigest()[:12]


def ensure_index(config: PipelineConfig, corpus: Corpus) -> TfidfIndex:
    """Build the TF-IDF index, or reuse a cache whose fingerprint matches."""
    index_fp = _digest({
        "tokenizer": [config.tokenizer.lowercase, config.tokenizer.ngram_min,
                      config.tokenizer.ngram_max],
        "weighting": [config.weighting.sublinear_tf],
        "corpus": corpus_digest(corpus),
    })
    cache = config.index_cache
    if cache and Path(cache).exists():
        try:
            return load_index(cache, expected_fingerprint=index_fp)
        except (FingerprintError, ParseError) as exc:
            logger.warning("index cache rejected (%s); rebuilding", exc)
    index = build_index(corpus, config.tokenizer, config.weighting, fingerprint=index_fp)
    if cache:
        Path(cache).parent.mkdir(parents=True, exist_ok=True)
        save_index(index, cache)
    return index


def build_backend(
    config: PipelineConfig,
    stage: str,
    fingerprint: str | None = None,
    overrides: Mapping[str, object] | None = None,
):
    """Instantiate the backend bound to ``stage`` (builtin model or remote)."""
    if overrides and stage in overrides:
        return overrides[stage]
    spec = config.backend_spec(stage)
    if spec.kind == "remote":
        endpoint = os.environ.get(ENDPOINT_ENV_VAR) or spec.endpoint
        if stage == "threeway":
            raise ConfigError(
                "the remote protocol carries binary probabilities only; "
                "three-way scoring requires the builtin backend"
            )
        return RemoteBackend(endpoint, task=stage)
    if not spec.model:
        raise ConfigError(f"builtin backend for stage '{stage}' has no model path")
    loaded = load_model(spec.model, expected_fingerprint=fingerprint)
    if loaded.task != stage:
        raise ConfigError(
            f"model {spec.model} was trained for stage '{loaded.task}', not '{stage}'"
        )
    return loaded.backend()


def _map_claims(
    claims: Sequence[Claim], fn: Callable[[Claim], object], workers: int
) -> Iterator[tuple[Claim, object]]:
    # assembly order always follows the input order, whatever the fan-out
    if workers <= 1:
        for claim in claims:
            yield claim, fn(claim)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            yield from zip(claims, pool.map(fn, claims))


def _wrap_stage(stage: str, claim: Claim, fn: Callable[[Claim], object]):
    try:
        return fn(claim)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(stage, claim.claim_id, exc) from exc


_DECISIONS_KIND = "label_decisions"


def write_label_decisions(
    decisions: Sequence[tuple[int, int, Label]],
    path,
    fingerprint: str | None = None,
    partial: bool = False,
) -> None:
    """Per-(claim, doc) verdicts, including NEI (which predictions omit)."""
    with open(path, "w", encoding="utf-8") as handle:
        meta = {"_meta": {"artifact": _DECISIONS_KIND, "version": 1,
                          "fingerprint": fingerprint, "partial": partial}}
        handle.write(json.dumps(meta, separators=(",", ":")) + "\n")
        for claim_id, doc_id, label in sorted(decisions):
            record = {"id": claim_id, "doc_id": doc_id, "label": label.value}
            handle.write(json.dumps(record, separators=(",", ":")) + "\n")


def load_label_decisions(
    path, expected_fingerprint: str | None = None
) -> list[tuple[int, int, Label]]:
    out = []
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
                if meta.get("artifact") != _DECISIONS_KIND:
                    raise ParseError(f"{path}: not a label-decisions artifact")
                if (expected_fingerprint is not None
                        and meta.get("fingerprint") != expected_fingerprint):
                    raise FingerprintError(
                        f"{path}: artifact fingerprint {meta.get('fingerprint')} does not "
                        f"match expected {expected_fingerprint}")
                continue
            out.append((int(record["id"]), int(record["doc_id"]), Label(record["label"])))
    return out


@dataclass
class RunResult:
    predictions: list[Prediction]
    retrieved: dict[int, list[int]]
    selections: dict[int, dict[int, list[int]]]
    decisions: list[tuple[int, int, Label]]
    report: MetricReport
    paths: dict[str, Path]


def run_pipeline(
    config: PipelineConfig,
    backend_overrides: Mapping[str, object] | None = None,
    corpus: Corpus | None = None,
    claims: ClaimSet | None = None,
) -> RunResult:
    """Execute retrieval, rationale selection, and label prediction.

    Oracle flags substitute gold artifacts for the corresponding stage
    outputs (the replaced stage's backend is never touched). Stage failures
    abort with the stage name, claim id, and cause; whatever the stage had
    already produced is flushed to disk for debugging.
    """
    fingerprint = config.fingerprint()
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "retrieved": out_dir / "retrieved.jsonl",
        "selections": out_dir / "rationales.jsonl",
        "decisions": out_dir / "label_decisions.jsonl",
        "predictions": out_dir / "predictions.jsonl",
        "report": out_dir / "report.json",
    }
    if corpus is None:
        corpus = load_corpus(config.corpus_path)
    if claims is None:
        claims = load_claims(config.claims_path, corpus)
    claim_list = list(claims)

    # stage 1: abstract retrieval
    retrieved: dict[int, list[int]] = {}
    if config.retrieved_map:
        retrieved = abstracts.load_retrieval_map(
            config.retrieved_map, expected_fingerprint=fingerprint
        )
    elif config.oracle_abstracts:
        for claim in claim_list:
            docs = sorted(set(claim.cited_doc_ids))
            missing = [d for d in docs if d not in corpus]
            if missing:
                logger.warning("claim %d cites unknown docs %s", claim.claim_id, missing)
            retrieved[claim.claim_id] = [d for d in docs if d in corpus]
    else:
        index = ensure_index(config, corpus)
        backend = None
        if config.retrieval.mode != "topk_baseline":
            backend = build_backend(config, "abstract", fingerprint, backend_overrides)

        def _retrieve(claim: Claim):
            return _wrap_stage(
                "abstract_retrieval",
                claim,
                lambda c: abstracts.retrieve_abstracts(
                    c, index, corpus, backend, config.retrieval
                ),
            )

        try:
            for claim, docs in _map_claims(claim_list, _retrieve, config.workers):
                retrieved[claim.claim_id] = docs
        except StageError:
            abstracts.write_retrieval_map(
                retrieved, paths["retrieved"], fingerprint, partial=True
            )
            raise
    abstracts.write_retrieval_map(retrieved, paths["retrieved"], fingerprint)

    # stage 2: rationale selection
    selections: dict[int, dict[int, list[int]]] = {}
    if config.oracle_rationales:
        rng = np.random.default_rng(config.seed)
        for claim in claim_list:
            chosen: dict[int, list[int]] = {}
            for doc_id in retrieved.get(claim.claim_id, ()):
                gold = sorted(claim.gold_sentences_for(doc_id))
                if gold:
                    chosen[doc_id] = gold
                    continue
                # docs cited without evidence get sampled pseudo-rationales so
                # the label stage still sees an instance to call NEI on
                doc = corpus[doc_id]
                take = min(config.cascade.nei_negatives_per_doc, len(doc.sentences))
                if take:
                    picked = rng.choice(len(doc.sentences), size=take, replace=False)
                    chosen[doc_id] = sorted(int(i) for i in picked)
            selections[claim.claim_id] = chosen
    else:
        backend = build_backend(config, "rationale", fingerprint, backend_overrides)

        def _select(claim: Claim):
            def inner(c: Claim):
                chosen: dict[int, list[int]] = {}
                for doc_id in retrieved.get(c.claim_id, ()):
                    doc = corpus[doc_id]
                    if not doc.sentences:
                        continue
                    picked = rationales.select_rationales(c, doc, backend, config.rationale)
                    if picked:
                        chosen[doc_id] = picked
                return chosen

            return _wrap_stage("rationale_selection", claim, inner)

        try:
            for claim, chosen in _map_claims(claim_list, _select, config.workers):
                selections[claim.claim_id] = chosen
        except StageError:
            rationales.write_rationale_map(
                selections, paths["selections"], fingerprint, partial=True
            )
            raise
    selections = {
        claim_id: {doc_id: picks for doc_id, picks in chosen.items() if picks}
        for claim_id, chosen in selections.items()
    }
    rationales.write_rationale_map(selections, paths["selections"], fingerprint)

    # stage 3: label prediction
    if config.cascade.scheme == "two_step":
        neutral = build_backend(config, "neutral", fingerprint, backend_overrides)
        support = build_backend(config, "support", fingerprint, backend_overrides)

        def _decide(label_input: LabelInput) -> Label:
            return predict_label_two_step(neutral, support, label_input, config.cascade)

    else:
        threeway = build_backend(config, "threeway", fingerprint, backend_overrides)

        def _decide(label_input: LabelInput) -> Label:
            return predict_label_three_way(threeway, label_input)

    decisions: list[tuple[int, int, Label]] = []
    predictions: list[Prediction] = []

    def _label(claim: Claim):
        def inner(c: Claim):
            out = []
            for doc_id, picked in sorted(selections.get(c.claim_id, {}).items()):
                label_input = build_label_input(c, corpus[doc_id], picked)
                out.append((doc_id, picked, _decide(label_input)))
            return out

        return _wrap_stage("label_prediction", claim, inner)

    try:
        for claim, verdicts in _map_claims(claim_list, _label, config.workers):
            evidence = {}
            for doc_id, picked, label in verdicts:
                decisions.append((claim.claim_id, doc_id, label))
                if label is not Label.NOT_ENOUGH_INFO:
                    evidence[doc_id] = PredictedEvidence(
                        sentences=tuple(picked), label=label
                    )
            predictions.append(Prediction(claim_id=claim.claim_id, evidence=evidence))
    except StageError:
        write_label_decisions(decisions, paths["decisions"], fingerprint, partial=True)
        raise
    write_label_decisions(decisions, paths["decisions"], fingerprint)
    write_predictions(predictions, paths["predictions"])

    label_pairs = _decision_label_pairs(claims, decisions)
    report = evaluate_run(
        claims, predictions, config.evaluation, label_pairs, fingerprint=fingerprint
    )
    save_report(report, paths["report"])
    return RunResult(
        predictions=predictions,
        retrieved=retrieved,
        selections=selections,
        decisions=decisions,
        report=report,
        paths=paths,
    )


def _decision_label_pairs(
    claims: ClaimSet, decisions: Sequence[tuple[int, int, Label]]
) -> tuple[list[Label], list[Label]] | None:
    """Aligned (gold, predicted) labels over the decided (claim, doc) pairs."""
    if not decisions:
        return None
    gold, predicted = [], []
    for claim_id, doc_id, label in decisions:
        claim = claims[claim_id]
        gold.append(claim.gold_label_for(doc_id) or Label.NOT_ENOUGH_INFO)
        predicted.append(label)
    return gold, predicted


def _load_training_claims(config: PipelineConfig, corpus: Corpus) -> ClaimSet:
    paths = config.train_claims_paths or (config.claims_path,)
    merged: list[Claim] = []
    for path in paths:
        merged.extend(load_claims(path, corpus))
    return ClaimSet(merged)


def _training_retrieval_map(
    config: PipelineConfig,
    corpus: Corpus,
    claims: ClaimSet,
    fingerprint: str,
    backend_overrides: Mapping[str, object] | None,
) -> dict[int, list[int]]:
    """Retrieved abstracts for pipeline-consistent stage-2/3 training."""
    if config.rationale_train_map:
        return abstracts.load_retrieval_map(
            config.rationale_train_map, expected_fingerprint=fingerprint
        )
    index = ensure_index(config, corpus)
    backend = None
    if config.retrieval.mode != "topk_baseline":
        backend = build_backend(config, "abstract", fingerprint, backend_overrides)
    return {
        claim.claim_id: abstracts.retrieve_abstracts(
            claim, index, corpus, backend, config.retrieval
        )
        for claim in claims
    }


def train_stage(
    stage: str,
    config: PipelineConfig,
    backend_overrides: Mapping[str, object] | None = None,
) -> Path:
    """Train the builtin model for one stage and persist it with the config
    fingerprint. Returns the model path."""
    if stage not in TRAINABLE_STAGES:
        raise ConfigError(f"unknown stage {stage!r}")
    spec = config.backend_spec(stage)
    if spec.kind != "builtin":
        raise ConfigError(f"stage '{stage}' is bound to a remote backend; it trains out of process")
    fingerprint = config.fingerprint()
    corpus = load_corpus(config.corpus_path)
    claims = _load_training_claims(config, corpus)

    if stage == "abstract":
        index = ensure_index(config, corpus)
        examples = abstracts.make_abstract_training_set(
            claims, corpus, index, config.retrieval.pool_size
        )
        pairs = [TextPair(e.claim, e.title, "abstract") for e in examples]
        labels = [e.label for e in examples]
        model = train_linear(pairs, labels, config.hyperparams)
    elif stage == "rationale":
        retrieved = _training_retrieval_map(config, corpus, claims, fingerprint,
                                            backend_overrides)
        examples = rationales.make_rationale_training_set(
            claims, retrieved, corpus,
            negative_subsample=config.rationale_negative_subsample, seed=config.seed,
        )
        pairs = [TextPair(e.claim, e.sentence, "rationale") for e in examples]
        labels = [e.label for e in examples]
        init = None
        if config.warm_start_rationale:
            abstract_spec = config.backend_spec("abstract")
            if abstract_spec.kind != "builtin" or not abstract_spec.model:
                raise ConfigError("warm start needs a builtin abstract model")
            init = load_model(abstract_spec.model, expected_fingerprint=fingerprint).model
        model = train_linear(pairs, labels, config.hyperparams, init=init)
    else:
        retrieved = None
        if config.cascade.nei_source == "retrieved":
            retrieved = _training_retrieval_map(config, corpus, claims, fingerprint,
                                                backend_overrides)
        sets = make_label_training_sets(claims, corpus, config.cascade, retrieved)
        if stage == "threeway":
            pairs = [TextPair(inp.claim, inp.evidence, "threeway") for inp, _ in sets.threeway]
            model = train_linear_threeway(
                pairs, [label for _, label in sets.threeway], config.hyperparams
            )
        else:
            labeled = sets.neutral if stage == "neutral" else sets.support
            pairs = [TextPair(inp.claim, inp.evidence, stage) for inp, _ in labeled]
            model = train_linear(pairs, [y for _, y in labeled], config.hyperparams)

    path = Path(spec.model)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_model(path, model, task=stage, fingerprint=fingerprint)
    return path


def ingest(config: PipelineConfig) -> dict:
    """Validate the datasets and warm the index cache; returns summary stats."""
    corpus = load_corpus(config.corpus_path)
    claims = load_claims(config.claims_path, corpus)
    index = ensure_index(config, corpus)
    with_evidence = sum(1 for c in claims if c.has_evidence)
    return {
        "documents": len(corpus),
        "claims": len(claims),
        "claims_with_evidence": with_evidence,
        "claims_nei": len(claims) - with_evidence,
        "vocabulary": len(index.vocabulary),
        "index_cache": config.index_cache,
    }


def evaluate_files(
    gold_path,
    predictions_path,
    config: EvalConfig | None = None,
    corpus_path=None,
    decisions_path=None,
    report_path=None,
) -> MetricReport:
    """Evaluate a predictions file against a gold claims file."""
    corpus = load_corpus(corpus_path) if corpus_path else None
    claims = load_claims(gold_path, corpus)
    predictions = load_predictions(predictions_path, corpus)
    label_pairs = None
    if decisions_path:
        decisions = load_label_decisions(decisions_path)
        label_pairs = _decision_label_pairs(claims, decisions)
    report = evaluate_run(claims, predictions, config, label_pairs)
    if report_path:
        save_report(report, report_path)
    return report
