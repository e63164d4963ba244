"""Shared fixtures: a small decidable dataset plus rule-based backends."""

import json

import pytest

from claimverify import (
    Claim,
    ClaimSet,
    Corpus,
    Document,
    GoldRationale,
    Label,
)

TOPICS = ("alpha", "beta", "gamma", "delta", "epsilon")

TOY_DOCS = [
    {
        "doc_id": 11,
        "title": "alpha signaling study",
        "abstract": [
            "background information only",
            "evidence alpha marker present",
            "unrelated conclusion remarks",
        ],
    },
    {
        "doc_id": 12,
        "title": "beta pathway review",
        "abstract": ["beta outcome evidence sentence", "methodology filler text"],
    },
    {
        "doc_id": 13,
        "title": "gamma cohort report",
        "abstract": [
            "gamma effect observed first",
            "gamma effect confirmed second",
            "noise sentence third",
        ],
    },
    {
        "doc_id": 14,
        "title": "delta observational survey",
        "abstract": ["delta context sentence", "more delta context"],
    },
    {
        "doc_id": 15,
        "title": "unrelated control document",
        "abstract": ["nothing relevant appears here"],
    },
]

TOY_CLAIMS = [
    {
        "id": 1,
        "claim": "alpha improves recovery supports",
        "evidence": {"11": [{"sentences": [1], "label": "SUPPORT"}]},
        "cited_doc_ids": [11],
    },
    {
        "id": 2,
        "claim": "beta reduces mortality refutes",
        "evidence": {"12": [{"sentences": [0], "label": "CONTRADICT"}]},
        "cited_doc_ids": [12],
    },
    {
        "id": 3,
        "claim": "gamma raises risk supports",
        "evidence": {"13": [{"sentences": [0, 1], "label": "SUPPORT"}]},
        "cited_doc_ids": [13],
    },
    {
        "id": 4,
        "claim": "delta changes outcomes perhaps",
        "evidence": {},
        "cited_doc_ids": [14],
    },
    {
        "id": 5,
        "claim": "epsilon cures disease supports",
        "evidence": {},
        "cited_doc_ids": [15],
    },
]


def write_jsonl(records, path):
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")


def build_toy_corpus() -> Corpus:
    return Corpus(
        Document(doc_id=d["doc_id"], title=d["title"], sentences=tuple(d["abstract"]))
        for d in TOY_DOCS
    )


def build_toy_claims() -> ClaimSet:
    claims = []
    for raw in TOY_CLAIMS:
        evidence = {
            int(doc_id): tuple(
                GoldRationale(
                    sentence_indices=frozenset(entry["sentences"]),
                    label=Label(entry["label"]),
                )
                for entry in entries
            )
            for doc_id, entries in raw["evidence"].items()
        }
        claims.append(
            Claim(
                claim_id=raw["id"],
                text=raw["claim"],
                cited_doc_ids=tuple(raw["cited_doc_ids"]),
                evidence=evidence,
            )
        )
    return ClaimSet(claims)


def topic_of(text: str) -> str | None:
    for topic in TOPICS:
        if topic in text:
            return topic
    return None


class RuleBackend:
    """Deterministic backend driven by a (side_a, side_b) -> probability rule."""

    concurrent_safe = True
    trainable = False

    def __init__(self, task, rule):
        self.task = task
        self._rule = rule

    def score(self, pairs):
        return [float(self._rule(p.side_a, p.side_b)) for p in pairs]


class RuleThreeWayBackend:
    """score_classes() driven by a rule returning (C, N, S) scores."""

    concurrent_safe = True
    trainable = False
    task = "threeway"

    def __init__(self, rule):
        self._rule = rule

    def score_classes(self, pairs):
        return [tuple(float(v) for v in self._rule(p.side_a, p.side_b)) for p in pairs]


def perfect_rule_backends() -> dict:
    """Backends that decide the toy dataset perfectly at every stage."""

    def abstract_rule(a, b):
        topic = topic_of(a)
        return 1.0 if topic and topic in b else 0.0

    def rationale_rule(a, b):
        topic = topic_of(a)
        return 1.0 if topic and topic in b else 0.0

    def neutral_rule(a, b):
        decided = "supports" in a or "refutes" in a
        topic = topic_of(a)
        return 1.0 if decided and topic and topic in b else 0.0

    def support_rule(a, b):
        return 1.0 if "supports" in a else 0.0

    def threeway_rule(a, b):
        if neutral_rule(a, b) > 0.5:
            return (0.1, 0.0, 0.9) if "supports" in a else (0.9, 0.0, 0.1)
        return (0.0, 1.0, 0.0)

    return {
        "abstract": RuleBackend("abstract", abstract_rule),
        "rationale": RuleBackend("rationale", rationale_rule),
        "neutral": RuleBackend("neutral", neutral_rule),
        "support": RuleBackend("support", support_rule),
        "threeway": RuleThreeWayBackend(threeway_rule),
    }


@pytest.fixture
def toy_corpus():
    return build_toy_corpus()


@pytest.fixture
def toy_claims():
    return build_toy_claims()


@pytest.fixture
def toy_files(tmp_path):
    corpus_path = tmp_path / "corpus.jsonl"
    claims_path = tmp_path / "claims.jsonl"
    write_jsonl(TOY_DOCS, corpus_path)
    write_jsonl(TOY_CLAIMS, claims_path)
    return {"corpus": corpus_path, "claims": claims_path, "dir": tmp_path}
