"""Batch entry points: ingest, train, audit, aggregate, serve.

Exit codes: 0 success, 1 validation error, 2 I/O error. All outputs are
stable JSON so repeated runs over unchanged inputs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations

from . import metrics as M
from .dataset import load_dataset, load_german_credit, load_mapping_file, save_dataset
from .elicitation import (
    PreferenceRecord,
    borda,
    threshold_stats,
    top1_category_counts,
    top1_metric_counts,
    weighted_rank_scores,
)
from .errors import FairdeskError, StoreCorruptError
from .model import ModelConfig, evaluate, load_model, save_model, train
from .service import (
    create_app,
    group_result_json,
    individual_result_json,
    subgroup_result_json,
)

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2


def _emit(doc: dict, out_path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_ingest(args) -> int:
    if args.mapping:
        protected, legitimate = load_mapping_file(args.mapping)
        dataset = load_german_credit(args.data, protected, legitimate)
    else:
        dataset = load_german_credit(args.data)
    save_dataset(dataset, args.out)
    _emit({"instances": len(dataset.instances),
           "protected": [s.name for s in dataset.protected_specs],
           "legitimate": [s.feature for s in dataset.legitimate_specs],
           "out": args.out}, None)
    return EXIT_OK


def _config_from_args(args) -> ModelConfig:
    base = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            base = json.load(fh)
    for key, flag in (("learning_rate", args.learning_rate), ("epochs", args.epochs),
                      ("l2_penalty", args.l2), ("seed", args.seed), ("folds", args.folds)):
        if flag is not None:
            base[key] = flag
    defaults = ModelConfig()
    return ModelConfig(
        learning_rate=base.get("learning_rate", defaults.learning_rate),
        epochs=base.get("epochs", defaults.epochs),
        l2_penalty=base.get("l2_penalty", defaults.l2_penalty),
        seed=base.get("seed", defaults.seed),
        folds=base.get("folds", defaults.folds),
    )


def cmd_train(args) -> int:
    dataset = load_dataset(args.data)
    model = train(dataset, _config_from_args(args))
    save_model(model, args.out)
    summary = evaluate(model, dataset)
    _emit({
        "overall_accuracy": round(summary.overall_accuracy, 4),
        "accuracy_good": None if summary.accuracy_good is None else round(summary.accuracy_good, 4),
        "accuracy_bad": None if summary.accuracy_bad is None else round(summary.accuracy_bad, 4),
        "test_size": summary.test_size,
        "model": args.out,
    }, None)
    return EXIT_OK


def cmd_audit(args) -> int:
    dataset = load_dataset(args.data)
    model = load_model(args.model)
    features = [f for f in args.features.split(",") if f]
    if not features:
        raise FairdeskError("audit needs at least one protected feature")
    for f in features:
        dataset.protected_spec(f)
    parts = args.thresholds.split(",")
    if len(parts) != 3:
        raise FairdeskError("thresholds must be three comma-separated numbers: group,subgroup,individual")
    config = M.ThresholdConfig(group_threshold=float(parts[0]),
                               subgroup_threshold=float(parts[1]),
                               individual_threshold=float(parts[2]))
    frame = M.build_frame(dataset, model)

    group_block = {
        feature: [group_result_json(M.group_metric(frame, m, feature), config)
                  for m in M.GROUP_METRICS]
        for feature in features
    }
    combos = [c for size in (2, 3) for c in combinations(features, size)]
    subgroup_block = {
        "+".join(combo): [subgroup_result_json(M.subgroup_metric(frame, m, combo), config)
                          for m in M.GROUP_METRICS]
        for combo in combos
    }
    individual_block = [
        individual_result_json(M.counterfactual_fairness(model, dataset, f), config)
        for f in features
    ]
    individual_block.append(individual_result_json(M.consistency(model, dataset), config))

    _emit({
        "thresholds": config.to_json(),
        "group": group_block,
        "subgroup": subgroup_block,
        "individual": individual_block,
    }, args.out)
    return EXIT_OK


def _load_records(path: str) -> list[PreferenceRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if isinstance(doc, dict):
        doc = doc.get("records", [])
    return [PreferenceRecord.from_json(d) for d in doc]


def cmd_aggregate(args) -> int:
    records = _load_records(args.records)
    if not records:
        raise FairdeskError("records file holds no preference records")
    stats = threshold_stats(records)
    _emit({
        "n": len(records),
        "weighted_scores": weighted_rank_scores(records).scores,
        "borda": [{"points": points, "metrics": list(group)}
                  for points, group in borda(records)],
        "threshold_stats": {
            cat: {"mean": round(block["mean"], 2),
                  "sd": None if block["sd"] is None else round(block["sd"], 2)}
            for cat, block in stats.items()
        },
        "category_counts": top1_category_counts(records),
        "top1_metric_counts": top1_metric_counts(records),
    }, getattr(args, "out", None))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    app = create_app(args.dataset, args.model, args.store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairdesk",
                                     description="Credit-fairness audit toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a raw credit file into a dataset artifact")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mapping", help="JSON file overriding protected/legitimate specs")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="train the classifier and write a model artifact")
    p.add_argument("--data", required=True, help="dataset artifact from ingest")
    p.add_argument("--config", help="JSON file of config overrides")
    p.add_argument("--out", required=True)
    p.add_argument("--learning-rate", type=float, dest="learning_rate")
    p.add_argument("--epochs", type=int)
    p.add_argument("--l2", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--folds", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("audit", help="full fairness report over the active fold")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True, help="comma-separated protected features")
    p.add_argument("--thresholds", default="10,10,95", help="group,subgroup,individual")
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("aggregate", help="aggregate a preference-records file")
    p.add_argument("--records", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--dataset", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StoreCorruptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FairdeskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
