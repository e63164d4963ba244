"""End-to-end run: train every stage, predict, and score both label schemes.

Wires the three stages together twice over the demo dataset:

* the stepwise system - classified retrieval, binary sentence selection, and
  the two-step label cascade (ENOUGH_INFO gate, then SUPPORT vs NOT_SUPPORT);
* the baseline system - top-3 retrieval, thresholded selection at T=0.5, and
  a single three-way label classifier.

Training and evaluation use the same tiny split, so the numbers only
illustrate the mechanics and the report format.
"""

import tempfile
from pathlib import Path

from claimverify import (
    CascadeConfig,
    LinearHyperparams,
    PipelineConfig,
    RationaleConfig,
    RetrievalConfig,
    run_pipeline,
    train_stage,
)

DATA = Path(__file__).parent / "data"
WORK = Path(tempfile.mkdtemp(prefix="claimverify-demo-"))


def make_config(name: str, retrieval, rationale, cascade) -> PipelineConfig:
    return PipelineConfig(
        corpus_path=str(DATA / "corpus.jsonl"),
        claims_path=str(DATA / "claims.jsonl"),
        train_claims_paths=(str(DATA / "claims.jsonl"),),
        retrieval=retrieval,
        rationale=rationale,
        cascade=cascade,
        hyperparams=LinearHyperparams(hash_bits=14, epochs=60),
        output_dir=str(WORK / name),
        seed=13,
    )


stepwise = make_config(
    "stepwise",
    RetrievalConfig(pool_size=8, mode="classify"),
    RationaleConfig(mode="binary"),
    CascadeConfig(scheme="two_step"),
)
baseline = make_config(
    "baseline",
    RetrievalConfig(pool_size=8, mode="topk_baseline", baseline_k=3),
    RationaleConfig(mode="threshold", threshold=0.5),
    CascadeConfig(scheme="three_way"),
)

for name, config, stages in (
    ("stepwise", stepwise, ("abstract", "rationale", "neutral", "support")),
    ("baseline", baseline, ("rationale", "threeway")),
):
    print(f"training {name} stages: {', '.join(stages)}")
    for stage in stages:
        train_stage(stage, config)

for name, config in (("STEPWISE (two-step cascade)", stepwise),
                     ("BASELINE (top-3 + threshold + three-way)", baseline)):
    result = run_pipeline(config)
    print(f"\n=== {name} ===")
    print(result.report.format_table())
    print(f"artifacts under {config.output_dir}")
