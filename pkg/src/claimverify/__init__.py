"""Stepwise binary-classification pipeline for scientific claim verification.

The pipeline verifies claims against a corpus of abstracts in three stages:
TF-IDF candidate pooling plus binary abstract retrieval, per-sentence
rationale selection, and two-step cascaded label prediction — with baseline
modes (top-k retrieval, thresholded selection, three-way labels) and a full
micro-averaged evaluation harness.
"""

from .abstracts import (
    AbstractExample,
    RetrievalConfig,
    candidate_pool,
    make_abstract_training_set,
    retrieve_abstracts,
)
from .classifier import (
    CLASS_ORDER,
    TASK_TAGS,
    ClassifierBackend,
    CountingBackend,
    FeatureConfig,
    LinearBackend,
    LinearHyperparams,
    LinearModel,
    LinearThreeWay,
    PairFeatures,
    RemoteBackend,
    TextPair,
    ThreeWayLinearBackend,
    featurize_pair,
    load_model,
    predict_binary,
    save_model,
    score,
    train_linear,
    train_linear_threeway,
)
from .data import (
    EVIDENCE_LABELS,
    Claim,
    ClaimSet,
    Corpus,
    Document,
    GoldRationale,
    Label,
    PredictedEvidence,
    Prediction,
    load_claims,
    load_corpus,
    load_predictions,
    write_predictions,
)
from .errors import (
    ClaimverifyError,
    ConfigError,
    ContractError,
    FingerprintError,
    IntegrityError,
    ParseError,
    ProtocolError,
    StageError,
    TransportError,
)
from .evaluation import (
    ConfusionMatrix,
    EvalConfig,
    LabelMetrics,
    MetricReport,
    PRF,
    abstract_metrics,
    aggregates_from_confusion,
    evaluate_run,
    gold_docs_by_claim,
    label_metrics,
    retrieval_metrics,
    save_report,
    sentence_metrics,
)
from .labels import (
    CascadeConfig,
    LabelInput,
    LabelInstance,
    LabelTrainingSets,
    build_label_input,
    make_label_training_sets,
    predict_label_three_way,
    predict_label_two_step,
)
from .pipeline import (
    BackendSpec,
    PipelineConfig,
    RunResult,
    build_backend,
    ensure_index,
    evaluate_files,
    ingest,
    load_config,
    run_pipeline,
    train_stage,
)
from .rationales import (
    RationaleConfig,
    RationaleExample,
    make_rationale_training_set,
    select_rationales,
)
from .tfidf import (
    TfidfIndex,
    Tokenizer,
    WeightingConfig,
    build_index,
    load_index,
    save_index,
    tokenize,
    top_k,
)

__version__ = "0.1.0"
