#!/usr/bin/env python3
"""Build labeled sentence-pair files from the public dataset layout.

Reads the corpus ({"doc_id", "title", "abstract"}) and claims ({"id",
"claim", "evidence", "cited_doc_ids"}) JSONL files and writes one
``{"a": ..., "b": ..., "label": 0|1}`` record per pair, ready for
``finetune.py``:

  abstract   <claim, title> over cited docs; positive iff the doc is evidence
  rationale  <claim, sentence> over cited docs; positive iff the sentence is
             in a gold rationale
  neutral    <claim, joined gold rationales> positive; <claim, sampled
             non-rationale sentence> negative (ENOUGH_INFO detector)
  support    same instances; positive only for SUPPORT evidence

Usage:
  python scripts/make_pairs.py --corpus corpus.jsonl --claims claims_train.jsonl \
      --task abstract --out abstract_pairs.jsonl
"""

import argparse
import json
import random


def read_jsonl(path):
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                yield json.loads(line)


def gold_sentence_sets(claim, doc_id):
    entries = claim.get("evidence", {}).get(str(doc_id), [])
    indices = {i for entry in entries for i in entry["sentences"]}
    label = entries[0]["label"] if entries else None
    return indices, label


def abstract_pairs(corpus, claims):
    for claim in claims:
        evidence_docs = {int(d) for d in claim.get("evidence", {})}
        for doc_id in claim.get("cited_doc_ids", []):
            if doc_id not in corpus:
                continue
            yield {"a": claim["claim"], "b": corpus[doc_id]["title"],
                   "label": int(doc_id in evidence_docs)}


def rationale_pairs(corpus, claims):
    for claim in claims:
        for doc_id in claim.get("cited_doc_ids", []):
            if doc_id not in corpus:
                continue
            gold, _ = gold_sentence_sets(claim, doc_id)
            for i, sentence in enumerate(corpus[doc_id]["abstract"]):
                yield {"a": claim["claim"], "b": sentence, "label": int(i in gold)}


def label_pairs(corpus, claims, task, nei_per_doc, seed):
    rng = random.Random(seed)
    for claim in claims:
        for doc_key, entries in sorted(claim.get("evidence", {}).items()):
            doc = corpus.get(int(doc_key))
            if doc is None:
                continue
            indices = sorted({i for entry in entries for i in entry["sentences"]})
            text = " ".join(doc["abstract"][i] for i in indices)
            gold_label = entries[0]["label"]
            positive = 1 if task == "neutral" else int(gold_label == "SUPPORT")
            yield {"a": claim["claim"], "b": text, "label": positive}
        for doc_id in claim.get("cited_doc_ids", []):
            doc = corpus.get(doc_id)
            if doc is None:
                continue
            gold, _ = gold_sentence_sets(claim, doc_id)
            candidates = [i for i in range(len(doc["abstract"])) if i not in gold]
            rng.shuffle(candidates)
            for i in sorted(candidates[:nei_per_doc]):
                yield {"a": claim["claim"], "b": doc["abstract"][i], "label": 0}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--corpus", required=True)
    parser.add_argument("--claims", required=True)
    parser.add_argument("--task", required=True,
                        choices=("abstract", "rationale", "neutral", "support"))
    parser.add_argument("--out", required=True)
    parser.add_argument("--nei-per-doc", type=int, default=2,
                        help="sampled negatives per cited doc (neutral/support)")
    parser.add_argument("--seed", type=int, default=13)
    args = parser.parse_args()

    corpus = {record["doc_id"]: record for record in read_jsonl(args.corpus)}
    claims = list(read_jsonl(args.claims))
    if args.task == "abstract":
        pairs = abstract_pairs(corpus, claims)
    elif args.task == "rationale":
        pairs = rationale_pairs(corpus, claims)
    else:
        pairs = label_pairs(corpus, claims, args.task, args.nei_per_doc, args.seed)

    count = positives = 0
    with open(args.out, "w", encoding="utf-8") as handle:
        for pair in pairs:
            handle.write(json.dumps(pair) + "\n")
            count += 1
            positives += pair["label"]
    print(f"wrote {count} pairs ({positives} positive) -> {args.out}")


if __name__ == "__main__":
    main()
