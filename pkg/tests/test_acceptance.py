"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest -v tests/test_acceptance.py``).

The corpus-scale retrieval criterion needs the public dataset files
(corpus.jsonl, claims_dev.jsonl) under $CLAIMVERIFY_SCIFACT_DIR (default
``data/scifact``); without them it is skipped and the randomized ranking
oracle stands in.
"""

import os
import random
import time
from pathlib import Path

import numpy as np
import pytest

from claimverify import (
    CascadeConfig,
    ConfusionMatrix,
    CountingBackend,
    EvalConfig,
    Label,
    LinearBackend,
    LinearHyperparams,
    PipelineConfig,
    RetrievalConfig,
    TextPair,
    Tokenizer,
    abstract_metrics,
    aggregates_from_confusion,
    build_index,
    gold_docs_by_claim,
    load_claims,
    load_corpus,
    make_label_training_sets,
    predict_label_two_step,
    retrieval_metrics,
    run_pipeline,
    sentence_metrics,
    top_k,
    train_linear,
    train_stage,
)

import bruteforce
from conftest import RuleBackend
from test_classifier import separable_pairs
from test_evaluation import claims_of, predictions_of
from test_labels import random_gold_fixture
from test_tfidf import brute_query_scores, corpus_of


def report(name: str):
    print(f"\nACCEPTANCE {name}: PASS")


def test_label_metric_oracle_reproduces_published_aggregates():
    """Published confusion matrices reproduce their aggregate rows ±0.01."""
    started = time.monotonic()
    cases = [
        ([[47, 17, 7], [6, 104, 2], [8, 18, 112]], (81.93, 80.19, 81.85)),
        ([[53, 7, 11], [2, 107, 3], [12, 10, 116]], (85.98, 84.69, 85.84)),
    ]
    for rows, (accuracy, macro, weighted) in cases:
        metrics = aggregates_from_confusion(ConfusionMatrix.from_rows(rows))
        assert 100 * metrics.accuracy == pytest.approx(accuracy, abs=0.01)
        assert 100 * metrics.macro_f1 == pytest.approx(macro, abs=0.01)
        assert 100 * metrics.weighted_f1 == pytest.approx(weighted, abs=0.01)
    assert time.monotonic() - started < 1.0
    report("label-metric oracle")


def test_metric_families_match_brute_force_scorer():
    """All four pipeline metric families equal the brute-force scorer on
    1000+ randomized fixtures."""
    started = time.monotonic()
    rng = random.Random(123456)
    checked = 0
    for _ in range(1000):
        gold, preds, _ = bruteforce.random_fixture(rng)
        claims = claims_of(gold)
        predictions = predictions_of(preds)
        denominator = rng.choice(["all_claims", "evidence_claims_only"])
        cap = rng.choice([1, 2, 3])
        config = EvalConfig(rationale_cap=cap, denominator=denominator)
        for mode, with_label in (("selection_only", False), ("selection_label", True)):
            got = sentence_metrics(claims, predictions, mode, config)
            assert (got.tp, got.fp, got.fn) == bruteforce.sentence_counts(
                gold, preds, with_label, denominator
            )
        for mode, with_rationale in (("label_only", False), ("label_rationale", True)):
            got = abstract_metrics(claims, predictions, mode, config)
            assert (got.tp, got.fp, got.fn) == bruteforce.abstract_counts(
                gold, preds, with_rationale, cap, denominator
            )
        retrieved = {cid: set(docs) for cid, docs in preds.items()}
        got = retrieval_metrics(gold_docs_by_claim(claims), retrieved, config)
        assert (got.tp, got.fp, got.fn) == bruteforce.retrieval_counts(
            gold, preds, denominator
        )
        checked += 1
    assert checked >= 1000
    assert time.monotonic() - started < 30.0
    report("metric brute-force equivalence")


def test_cascade_never_overrules_the_neutral_detector():
    """Randomized scores: NEI whenever neutral <= threshold, and the support
    detector is untouched on every NEI verdict."""
    rng = random.Random(31337)
    from claimverify import LabelInput

    label_input = LabelInput(claim="a claim", evidence="some evidence")
    for _ in range(500):
        neutral_score = rng.random()
        support_score = rng.random()
        threshold = rng.uniform(0.05, 0.95)
        neutral = RuleBackend("neutral", lambda a, b, v=neutral_score: v)
        support = CountingBackend(RuleBackend("support", lambda a, b, v=support_score: v))
        verdict = predict_label_two_step(
            neutral, support, label_input, CascadeConfig(neutral_threshold=threshold)
        )
        if neutral_score <= threshold:
            assert verdict is Label.NOT_ENOUGH_INFO
        if verdict is Label.NOT_ENOUGH_INFO:
            assert support.calls == 0
    report("cascade properties")


def test_class_merge_identities_hold_exactly():
    """Neutral positives == SUPPORT + CONTRADICT and support negatives ==
    NEI + CONTRADICT, as exact set identities on randomized gold."""
    rng = random.Random(2025)
    for _ in range(200):
        claims, corpus = random_gold_fixture(rng)
        sets = make_label_training_sets(
            claims, corpus, CascadeConfig(seed=rng.randint(0, 10_000))
        )
        threeway = [label for _, label in sets.threeway]
        neutral_positive_inputs = [inp for inp, y in sets.neutral if y == 1]
        merged_inputs = [
            inp for inp, label in sets.threeway
            if label in (Label.SUPPORT, Label.CONTRADICT)
        ]
        assert neutral_positive_inputs == merged_inputs
        support_negative_inputs = [inp for inp, y in sets.support if y == 0]
        not_support_inputs = [
            inp for inp, label in sets.threeway
            if label in (Label.NOT_ENOUGH_INFO, Label.CONTRADICT)
        ]
        assert support_negative_inputs == not_support_inputs
        assert sum(y for _, y in sets.neutral) == sum(
            1 for label in threeway if label is not Label.NOT_ENOUGH_INFO
        )
    report("training-set identities")


def test_ranking_matches_exhaustive_cosine_sort():
    """top_k equals a brute-force exhaustive sort, ties included."""
    rng = random.Random(8711)
    vocab = [f"term{i}" for i in range(14)]
    for _ in range(120):
        n_docs = rng.randint(2, 50)
        texts = {}
        for doc_id in range(1, n_docs + 1):
            if texts and rng.random() < 0.3:
                texts[doc_id] = texts[rng.choice(list(texts))]  # forced score ties
            else:
                texts[doc_id] = " ".join(rng.choices(vocab, k=rng.randint(1, 10)))
        tokenizer = Tokenizer()
        index = build_index(corpus_of(texts), tokenizer)
        query = " ".join(rng.choices(vocab, k=rng.randint(1, 5)))
        expected = brute_query_scores(query, texts, tokenizer)
        order = sorted(expected, key=lambda d: (-expected[d], d))
        k = rng.randint(1, n_docs)
        assert [doc_id for doc_id, _ in top_k(index, query, k)] == order[:k]
    report("ranking oracle")


def test_candidate_pool_recall_on_scifact_dev():
    """Top-30 pool recall over dev claims-with-evidence >= 89.4%."""
    data_dir = Path(os.environ.get("CLAIMVERIFY_SCIFACT_DIR", "data/scifact"))
    corpus_path = data_dir / "corpus.jsonl"
    claims_path = data_dir / "claims_dev.jsonl"
    if not corpus_path.exists() or not claims_path.exists():
        pytest.skip(
            f"dataset files not found under {data_dir}; "
            "the ranking-oracle criterion stands in"
        )
    started = time.monotonic()
    corpus = load_corpus(corpus_path)
    claims = load_claims(claims_path, corpus)
    index = build_index(corpus)
    pools = {
        claim.claim_id: {doc_id for doc_id, _ in top_k(index, claim.text, 30)}
        for claim in claims
        if claim.has_evidence
    }
    gold = {cid: set(claims[cid].evidence) for cid in pools}
    prf = retrieval_metrics(gold, pools, EvalConfig(denominator="evidence_claims_only"))
    elapsed = time.monotonic() - started
    assert 100 * prf.recall >= 89.4, f"pool recall {100 * prf.recall:.2f}%"
    assert elapsed < 120.0
    report(f"pool recall ({100 * prf.recall:.2f}% in {elapsed:.0f}s)")


def test_end_to_end_determinism(toy_files):
    """Identical config and seed give byte-identical prediction files."""
    config_kwargs = dict(
        corpus_path=str(toy_files["corpus"]),
        claims_path=str(toy_files["claims"]),
        train_claims_paths=(str(toy_files["claims"]),),
        retrieval=RetrievalConfig(pool_size=5, mode="classify"),
        hyperparams=LinearHyperparams(hash_bits=12, epochs=40),
        seed=13,
    )
    first_cfg = PipelineConfig(output_dir=str(toy_files["dir"] / "run1"), **config_kwargs)
    for stage in ("abstract", "rationale", "neutral", "support"):
        train_stage(stage, first_cfg)
    first = run_pipeline(first_cfg)

    second_cfg = PipelineConfig(output_dir=str(toy_files["dir"] / "run2"), **config_kwargs)
    second_cfg.backends = dict(first_cfg.backends)
    for stage in ("abstract", "rationale", "neutral", "support"):
        second_cfg.backends[stage] = first_cfg.backend_spec(stage)
    second = run_pipeline(second_cfg)

    first_bytes = first.paths["predictions"].read_bytes()
    second_bytes = second.paths["predictions"].read_bytes()
    assert first_bytes == second_bytes and len(first_bytes) > 0
    report("end-to-end determinism")


def test_builtin_classifier_sanity():
    """>= 95% training accuracy on a separable fixture; reruns bit-identical."""
    pairs, labels = separable_pairs(n=80, seed=5)
    hp = LinearHyperparams(hash_bits=12, epochs=20, seed=13)
    model = train_linear(pairs, labels, hp)
    backend = LinearBackend(model, "abstract")
    accuracy = sum(
        (p > 0.5) == bool(y) for p, y in zip(backend.score(pairs), labels)
    ) / len(pairs)
    assert accuracy >= 0.95
    again = train_linear(pairs, labels, hp)
    assert np.array_equal(model.weights, again.weights)
    assert model.bias == again.bias
    report(f"builtin classifier sanity (accuracy {100 * accuracy:.1f}%)")


def test_neural_table_rows_are_out_of_scope():
    """The published neural-model metric rows (e.g. test Selection+Label F1
    55.35) need fine-tuned transformer scorers; this suite deliberately
    asserts none of them. Serving such scorers is the companion service's
    job, and even then those rows are not acceptance gates."""
    report("neural rows explicitly not asserted (out of desk-scale scope)")
