"""Command-line surface: ingest, train, predict, evaluate, report.

Every command exits 0 on success; failures print a machine-readable JSON
error object to stderr and exit 1 (2 for usage errors, per argparse).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ClaimverifyError
from .evaluation import EvalConfig
from .pipeline import (
    TRAINABLE_STAGES,
    evaluate_files,
    ingest,
    load_config,
    run_pipeline,
    train_stage,
)


def _add_config_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="YAML run configuration")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="claimverify",
        description="Stepwise binary-classification pipeline for scientific claim verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate datasets and warm the index cache")
    _add_config_arg(p_ingest)

    p_train = sub.add_parser("train", help="train the builtin model for one stage")
    _add_config_arg(p_train)
    p_train.add_argument("--stage", required=True, choices=TRAINABLE_STAGES)

    p_predict = sub.add_parser("predict", help="run the full pipeline")
    _add_config_arg(p_predict)

    p_eval = sub.add_parser("evaluate", help="score a predictions file against gold claims")
    p_eval.add_argument("--gold", required=True, help="gold claims file")
    p_eval.add_argument("--predictions", required=True, help="predictions file")
    p_eval.add_argument("--corpus", help="corpus file (enables reference validation)")
    p_eval.add_argument("--decisions", help="label-decisions artifact for label metrics")
    p_eval.add_argument("--cap", type=int, default=3,
                        help="rationale cap for abstract label+rationale (default 3)")
    p_eval.add_argument("--denominator", default="all_claims",
                        choices=("all_claims", "evidence_claims_only"))
    p_eval.add_argument("--report", help="write the structured report to this path")

    p_report = sub.add_parser("report", help="render a saved report as a table")
    p_report.add_argument("--report", required=True, help="report JSON file")

    return parser


def _render_saved_report(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    metrics = payload.get("metrics", {})
    lines = [f"{'Family':<28}{'P':>8}{'R':>8}{'F1':>8}{'tp':>6}{'fp':>6}{'fn':>6}"]
    titles = {
        "retrieval": "Retrieval",
        "abstract_label_only": "Abstract Label Only",
        "abstract_label_rationale": "Abstract Label+Rationale",
        "sentence_selection_only": "Sentence Selection Only",
        "sentence_selection_label": "Sentence Selection+Label",
    }
    for name, title in titles.items():
        prf = metrics.get(name)
        if not prf:
            continue
        lines.append(
            f"{title:<28}"
            f"{100 * prf['precision']:>8.2f}{100 * prf['recall']:>8.2f}{100 * prf['f1']:>8.2f}"
            f"{prf['tp']:>6}{prf['fp']:>6}{prf['fn']:>6}"
        )
    label = metrics.get("label")
    if label:
        lines.append("")
        lines.append(
            f"{'Label Prediction':<28}accuracy {100 * label['accuracy']:.2f}  "
            f"macro-F1 {100 * label['macro_f1']:.2f}  "
            f"weighted-F1 {100 * label['weighted_f1']:.2f}"
        )
        for row in label["confusion"]["rows"]:
            lines.append(f"{'':<28}{row}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "ingest":
            stats = ingest(load_config(args.config))
            print(json.dumps(stats, indent=2))
        elif args.command == "train":
            path = train_stage(args.stage, load_config(args.config))
            print(f"trained stage '{args.stage}' -> {path}")
        elif args.command == "predict":
            result = run_pipeline(load_config(args.config))
            print(f"predictions -> {result.paths['predictions']}")
            print(f"report      -> {result.paths['report']}")
            print()
            print(result.report.format_table())
        elif args.command == "evaluate":
            report = evaluate_files(
                args.gold,
                args.predictions,
                EvalConfig(rationale_cap=args.cap, denominator=args.denominator),
                corpus_path=args.corpus,
                decisions_path=args.decisions,
                report_path=args.report,
            )
            print(report.format_table())
        elif args.command == "report":
            print(_render_saved_report(args.report))
    except ClaimverifyError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    except OSError as exc:
        json.dump({"error": "OSError", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
