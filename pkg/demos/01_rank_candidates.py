"""Candidate pooling: TF-IDF ranking of abstracts against a claim.

Builds the n-gram TF-IDF index over the demo corpus, ranks every document
for a few claims, and shows why a generous pool (top-k) is the right first
stage: the gold abstract is almost always *somewhere* near the top even when
it is not rank 1.
"""

from pathlib import Path

from claimverify import build_index, load_claims, load_corpus, top_k

DATA = Path(__file__).parent / "data"

corpus = load_corpus(DATA / "corpus.jsonl")
claims = load_claims(DATA / "claims.jsonl", corpus)
index = build_index(corpus)

print(f"corpus: {len(corpus)} documents, vocabulary of {len(index.vocabulary)} n-grams\n")

for claim_id in (201, 203, 206):
    claim = claims[claim_id]
    print(f"claim {claim.claim_id}: {claim.text}")
    print(f"  gold evidence docs: {sorted(claim.evidence) or 'none (NEI)'}")
    for rank, (doc_id, score) in enumerate(top_k(index, claim.text, 3), start=1):
        marker = "*" if doc_id in claim.evidence else " "
        print(f"  {rank}. {marker} doc {doc_id}  cosine={score:.3f}  {corpus[doc_id].title}")
    print()

# pool recall: how often the gold doc survives pooling at various sizes
for pool_size in (1, 3, 8):
    hits = total = 0
    for claim in claims:
        pool = {doc_id for doc_id, _ in top_k(index, claim.text, pool_size)}
        for doc_id in claim.evidence:
            total += 1
            hits += doc_id in pool
    print(f"pool size {pool_size}: gold-doc recall {hits}/{total}")
