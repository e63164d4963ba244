import json

import pytest

from claimverify import (
    ContractError,
    IntegrityError,
    Label,
    ParseError,
    PredictedEvidence,
    Prediction,
    load_claims,
    load_corpus,
    load_predictions,
    write_predictions,
)

from conftest import TOY_CLAIMS, TOY_DOCS, write_jsonl


def test_empty_corpus_file(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_text("")
    assert len(load_corpus(path)) == 0


def test_two_record_corpus_fields(tmp_path):
    path = tmp_path / "corpus.jsonl"
    write_jsonl(TOY_DOCS[:2], path)
    corpus = load_corpus(path)
    assert len(corpus) == 2
    assert corpus[11].title == "alpha signaling study"
    assert corpus[11].sentences == (
        "background information only",
        "evidence alpha marker present",
        "unrelated conclusion remarks",
    )
    assert corpus[12].doc_id == 12
    assert [d.doc_id for d in corpus] == [11, 12]


def test_duplicate_doc_id_rejected(tmp_path):
    path = tmp_path / "corpus.jsonl"
    write_jsonl([TOY_DOCS[0], TOY_DOCS[0]], path)
    with pytest.raises(IntegrityError, match="duplicate doc_id 11"):
        load_corpus(path)


def test_malformed_line_names_line_number(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_text(json.dumps(TOY_DOCS[0]) + "\n{not json\n")
    with pytest.raises(ParseError, match=":2"):
        load_corpus(path)


def test_extra_fields_ignored(tmp_path):
    record = dict(TOY_DOCS[0], structured=False, journal="unused")
    path = tmp_path / "corpus.jsonl"
    write_jsonl([record], path)
    assert load_corpus(path)[11].title == TOY_DOCS[0]["title"]


def test_empty_abstract_needs_degenerate_flag(tmp_path):
    path = tmp_path / "corpus.jsonl"
    write_jsonl([{"doc_id": 1, "title": "t", "abstract": []}], path)
    with pytest.raises(IntegrityError, match="empty abstract"):
        load_corpus(path)
    corpus = load_corpus(path, allow_degenerate=True)
    assert corpus[1].degenerate


def test_claim_evidence_round_trip(tmp_path, toy_corpus):
    path = tmp_path / "claims.jsonl"
    write_jsonl(
        [{"id": 3, "claim": "c", "evidence": {"7": [{"sentences": [2, 3], "label": "SUPPORT"}]},
          "cited_doc_ids": [7]}],
        path,
    )
    claims = load_claims(path)
    claim = claims[3]
    assert claim.gold_label_for(7) is Label.SUPPORT
    assert claim.gold_sentences_for(7) == frozenset({2, 3})
    assert claim.has_evidence


def test_empty_evidence_is_gold_nei(tmp_path):
    path = tmp_path / "claims.jsonl"
    write_jsonl([{"id": 1, "claim": "c", "evidence": {}, "cited_doc_ids": [4]}], path)
    claim = load_claims(path)[1]
    assert not claim.has_evidence
    assert claim.gold_label_for(4) is None


def test_out_of_range_rationale_index(tmp_path, toy_corpus):
    path = tmp_path / "claims.jsonl"
    write_jsonl(
        [{"id": 1, "claim": "c", "evidence": {"11": [{"sentences": [99], "label": "SUPPORT"}]},
          "cited_doc_ids": [11]}],
        path,
    )
    load_claims(path)  # fine without a corpus to check against
    with pytest.raises(IntegrityError, match="out of range"):
        load_claims(path, toy_corpus)


def test_unknown_evidence_doc(tmp_path, toy_corpus):
    path = tmp_path / "claims.jsonl"
    write_jsonl(
        [{"id": 1, "claim": "c", "evidence": {"999": [{"sentences": [0], "label": "SUPPORT"}]},
          "cited_doc_ids": [999]}],
        path,
    )
    with pytest.raises(IntegrityError, match="not in corpus"):
        load_claims(path, toy_corpus)


def test_evidence_must_be_cited(tmp_path):
    path = tmp_path / "claims.jsonl"
    write_jsonl(
        [{"id": 1, "claim": "c", "evidence": {"11": [{"sentences": [0], "label": "SUPPORT"}]},
          "cited_doc_ids": [12]}],
        path,
    )
    with pytest.raises(IntegrityError, match="not in cited_doc_ids"):
        load_claims(path)


def test_conflicting_evidence_labels(tmp_path):
    path = tmp_path / "claims.jsonl"
    write_jsonl(
        [{"id": 1, "claim": "c",
          "evidence": {"11": [{"sentences": [0], "label": "SUPPORT"},
                              {"sentences": [1], "label": "CONTRADICT"}]},
          "cited_doc_ids": [11]}],
        path,
    )
    with pytest.raises(IntegrityError, match="conflicting"):
        load_claims(path)


def test_nei_never_in_gold_evidence(tmp_path):
    path = tmp_path / "claims.jsonl"
    write_jsonl(
        [{"id": 1, "claim": "c",
          "evidence": {"11": [{"sentences": [0], "label": "NOT_ENOUGH_INFO"}]},
          "cited_doc_ids": [11]}],
        path,
    )
    with pytest.raises(IntegrityError, match="not allowed"):
        load_claims(path)


def test_missing_cited_docs_falls_back_to_evidence_keys(tmp_path, caplog):
    path = tmp_path / "claims.jsonl"
    write_jsonl(
        [{"id": 1, "claim": "c", "evidence": {"11": [{"sentences": [0], "label": "SUPPORT"}]}}],
        path,
    )
    with caplog.at_level("WARNING"):
        claim = load_claims(path)[1]
    assert claim.cited_doc_ids == (11,)
    assert any("cited_doc_ids" in message for message in caplog.messages)


def test_duplicate_claim_ids(tmp_path):
    path = tmp_path / "claims.jsonl"
    write_jsonl([TOY_CLAIMS[0], TOY_CLAIMS[0]], path)
    with pytest.raises(IntegrityError, match="duplicate claim id"):
        load_claims(path)


def test_predictions_round_trip_identity(tmp_path):
    path = tmp_path / "preds.jsonl"
    predictions = [
        Prediction(claim_id=2, evidence={
            7: PredictedEvidence(sentences=(4, 0), label=Label.SUPPORT),
        }),
        Prediction(claim_id=1, evidence={}),
    ]
    write_predictions(predictions, path)
    loaded = load_predictions(path)
    assert [p.claim_id for p in loaded] == [1, 2]
    assert loaded[1].evidence[7].sentences == (0, 4)
    assert loaded[1].evidence[7].label is Label.SUPPORT

    # write∘load is the identity on the canonical form, byte for byte
    second = tmp_path / "second.jsonl"
    write_predictions(loaded, second)
    assert path.read_bytes() == second.read_bytes()


def test_empty_prediction_set_round_trip(tmp_path):
    path = tmp_path / "preds.jsonl"
    write_predictions([], path)
    assert path.read_text() == ""
    assert load_predictions(path) == []


def test_nei_label_rejected_at_write(tmp_path):
    path = tmp_path / "preds.jsonl"
    bad = [Prediction(claim_id=1, evidence={
        7: PredictedEvidence(sentences=(0,), label=Label.NOT_ENOUGH_INFO)})]
    with pytest.raises(ContractError, match="NEI"):
        write_predictions(bad, path)


def test_empty_sentence_list_rejected_at_write(tmp_path):
    path = tmp_path / "preds.jsonl"
    bad = [Prediction(claim_id=1, evidence={
        7: PredictedEvidence(sentences=(), label=Label.SUPPORT)})]
    with pytest.raises(ContractError, match="empty sentence list"):
        write_predictions(bad, path)


def test_load_predictions_validates(tmp_path, toy_corpus):
    path = tmp_path / "preds.jsonl"
    path.write_text('{"id": 1, "evidence": {"11": {"sentences": [0], "label": "SUPPORT"}}}\n'
                    '{"id": 1, "evidence": {}}\n')
    with pytest.raises(IntegrityError, match="duplicate prediction"):
        load_predictions(path)

    path.write_text('{"id": 1, "evidence": {"999": {"sentences": [0], "label": "SUPPORT"}}}\n')
    with pytest.raises(IntegrityError, match="not in corpus"):
        load_predictions(path, toy_corpus)

    path.write_text('{"id": 1, "evidence": {"11": {"sentences": [0], "label": "NOT_ENOUGH_INFO"}}}\n')
    with pytest.raises(IntegrityError, match="NEI"):
        load_predictions(path)
