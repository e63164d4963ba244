"""Independent brute-force scorers used as oracles for the evaluation module.

Everything here works on plain dicts and counts by literal enumeration of the
definitions, deliberately sharing no code with the package implementation.

Structures:
  gold:  {claim_id: {doc_id: {"label": str, "rationales": [[int, ...], ...]}}}
         (claims without evidence map to {})
  preds: {claim_id: {doc_id: {"label": str, "sentences": [int, ...]}}}
"""

import random


def _fully_predicted(rationale, predicted):
    return all(s in predicted for s in rationale)


def retrieval_counts(gold, preds, denominator="all_claims"):
    tp = fp = fn = 0
    for claim_id, gold_docs in gold.items():
        if denominator == "evidence_claims_only" and not gold_docs:
            continue
        retrieved = set(preds.get(claim_id, {}))
        for doc_id in retrieved:
            if doc_id in gold_docs:
                tp += 1
            else:
                fp += 1
        for doc_id in gold_docs:
            if doc_id not in retrieved:
                fn += 1
    return tp, fp, fn


def sentence_counts(gold, preds, with_label, denominator="all_claims"):
    tp = fp = fn = 0
    for claim_id, gold_docs in gold.items():
        if denominator == "evidence_claims_only" and not gold_docs:
            continue
        pred_docs = preds.get(claim_id, {})
        for doc_id in set(gold_docs) | set(pred_docs):
            gold_entry = gold_docs.get(doc_id)
            pred_entry = pred_docs.get(doc_id)
            predicted = list(pred_entry["sentences"]) if pred_entry else []
            rationales = gold_entry["rationales"] if gold_entry else []
            label_ok = (not with_label) or (
                gold_entry is not None
                and pred_entry is not None
                and pred_entry["label"] == gold_entry["label"]
            )
            counted = []
            for s in predicted:
                for rationale in rationales:
                    if s in rationale and _fully_predicted(rationale, predicted) and label_ok:
                        counted.append(s)
                        break
            tp += len(counted)
            fp += len(predicted) - len(counted)
            gold_sentences = {s for rationale in rationales for s in rationale}
            for s in gold_sentences:
                if s not in counted:
                    fn += 1
    return tp, fp, fn


def abstract_counts(gold, preds, with_rationale, cap=3, denominator="all_claims"):
    tp = fp = fn = 0
    for claim_id, gold_docs in gold.items():
        if denominator == "evidence_claims_only" and not gold_docs:
            continue
        pred_docs = preds.get(claim_id, {})
        for doc_id, pred_entry in pred_docs.items():
            gold_entry = gold_docs.get(doc_id)
            ok = gold_entry is not None and pred_entry["label"] == gold_entry["label"]
            if ok and with_rationale:
                head = sorted(pred_entry["sentences"])[:cap]
                ok = any(
                    _fully_predicted(rationale, head)
                    for rationale in gold_entry["rationales"]
                )
            if ok:
                tp += 1
            else:
                fp += 1
        for doc_id, gold_entry in gold_docs.items():
            pred_entry = pred_docs.get(doc_id)
            ok = pred_entry is not None and pred_entry["label"] == gold_entry["label"]
            if ok and with_rationale:
                head = sorted(pred_entry["sentences"])[:cap]
                ok = any(
                    _fully_predicted(rationale, head)
                    for rationale in gold_entry["rationales"]
                )
            if not ok:
                fn += 1
    return tp, fp, fn


def random_fixture(rng: random.Random):
    """A random (gold, preds) pair: <=5 claims, <=4 docs, <=6 sentences."""
    n_claims = rng.randint(1, 5)
    n_docs = rng.randint(1, 4)
    doc_ids = [10 + i for i in range(n_docs)]
    doc_lengths = {d: rng.randint(1, 6) for d in doc_ids}

    gold = {}
    for claim_id in range(1, n_claims + 1):
        gold_docs = {}
        for doc_id in doc_ids:
            if rng.random() < 0.45:
                continue_label = rng.choice(["SUPPORT", "CONTRADICT"])
                available = list(range(doc_lengths[doc_id]))
                rng.shuffle(available)
                rationales = []
                used = 0
                for _ in range(rng.randint(1, 2)):
                    size = rng.randint(1, 2)
                    chunk = available[used : used + size]
                    used += size
                    if chunk:
                        rationales.append(sorted(chunk))
                if rationales:
                    gold_docs[doc_id] = {"label": continue_label, "rationales": rationales}
        gold[claim_id] = gold_docs

    preds = {}
    for claim_id in range(1, n_claims + 1):
        pred_docs = {}
        for doc_id in doc_ids:
            if rng.random() < 0.5:
                continue
            k = rng.randint(1, doc_lengths[doc_id])
            sentences = sorted(rng.sample(range(doc_lengths[doc_id]), k))
            pred_docs[doc_id] = {
                "label": rng.choice(["SUPPORT", "CONTRADICT"]),
                "sentences": sentences,
            }
        if pred_docs or rng.random() < 0.5:
            preds[claim_id] = pred_docs
    return gold, preds, doc_lengths
