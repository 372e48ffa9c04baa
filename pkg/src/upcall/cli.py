"""Command-line front end.

Commands mirror the pipeline stages: synth (build a labeled synthetic corpus),
features (dump feature CSVs), train, detect, compare, report. Exit codes:
0 success, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import classifiers, pipeline
from .audio import sample_corpus_specs, write_corpus
from .errors import ConfigError, ConvergenceError, DataError, UpcallError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3


def _load_config(args) -> pipeline.PipelineConfig:
    cfg = pipeline.load_config(args.config) if args.config else pipeline.PipelineConfig()
    overrides = {}
    for attr in ("branch", "classifier"):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[attr] = value
    if getattr(args, "seed", None) is not None:
        overrides["master_seed"] = args.seed
    if overrides:
        cfg = pipeline.PipelineConfig.from_dict({**cfg.to_dict(), **overrides})
    return cfg


def _cmd_synth(args) -> int:
    specs = sample_corpus_specs(args.upcalls, args.confounders, args.tonal,
                                args.ambient, args.seed,
                                snr_db_range=(args.snr_min, args.snr_max))
    items = write_corpus(args.out, specs, segment_s=args.segment_s)
    print(f"wrote {len(items)} segments + manifest to {args.out}")
    return EXIT_OK


def _cmd_features(args) -> int:
    cfg = _load_config(args)
    items = pipeline.load_corpus(args.corpus)
    feats = pipeline.extract_corpus_features(args.corpus, items, cfg)
    pipeline.write_features_csv(feats, cfg.branch, args.out, cfg.config_hash())
    n = sum(1 for sf in feats if sf.vector is not None)
    print(f"wrote {n} {cfg.branch} feature rows to {args.out}")
    return EXIT_OK


def _cmd_train(args) -> int:
    cfg = _load_config(args)
    model = pipeline.run_train(args.corpus, cfg, model_path=args.model)
    print(f"trained {model.algorithm} on {cfg.branch} features "
          f"({model.n_features} dims); saved to {args.model}")
    return EXIT_OK


def _cmd_detect(args) -> int:
    cfg = _load_config(args)
    model = classifiers.load_model(args.model)
    result = pipeline.run_detect(args.corpus, cfg, model)
    pipeline.write_records_csv(result, args.out_records)
    n_up = sum(1 for r in result.records if r.predicted == "upcall")
    print(f"{len(result.records)} segments: {result.gate_passed} passed the gate, "
          f"{n_up} predicted upcalls")
    if result.report is not None and args.out_report:
        pipeline.write_report(result.report, args.out_report)
        rates = result.report["rates"]
        print(f"rates: upcall {rates['upcall_rate']:.2f}% / "
              f"non-upcall {rates['nonupcall_rate']:.2f}% / "
              f"overall {rates['overall_rate']:.2f}%  AUC {result.report['auc']:.4f}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    cfg = _load_config(args)
    report = pipeline.run_compare(args.corpus, cfg, out_dir=args.out_dir)
    print(f"train {report['n_train']} / test {report['n_test']} segments")
    for branch, entries in report["branches"].items():
        for alg, entry in entries.items():
            rates = entry["rates"]
            print(f"{branch:5s} {alg:11s} overall {rates['overall_rate']:6.2f}%  "
                  f"AUC {entry['auc']:.4f}")
    print(f"outputs in {args.out_dir}")
    return EXIT_OK


def _cmd_report(args) -> int:
    records = pipeline.read_records_csv(args.records)
    if any(r.label is None for r in records):
        raise DataError("records file lacks labels; cannot evaluate")
    report = pipeline.evaluate_records(records, config_hash="from-records",
                                       branch="unknown", classifier="unknown")
    pipeline.write_report(report, args.out)
    print(f"wrote report to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="upcall",
        description="Two-stage right-whale upcall detector (synthetic desk-scale kit)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a labeled synthetic corpus")
    p.add_argument("--out", required=True, help="output corpus directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--upcalls", type=int, default=100)
    p.add_argument("--confounders", type=int, default=100)
    p.add_argument("--tonal", type=int, default=50)
    p.add_argument("--ambient", type=int, default=150)
    p.add_argument("--snr-min", type=float, default=5.0)
    p.add_argument("--snr-max", type=float, default=15.0)
    p.add_argument("--segment-s", type=float, default=3.0)
    p.set_defaults(func=_cmd_synth)

    def common(p):
        p.add_argument("--config", help="pipeline config JSON")
        p.add_argument("--branch", choices=pipeline.BRANCHES)
        p.add_argument("--classifier", choices=classifiers.ALGORITHMS)
        p.add_argument("--seed", type=int, help="override master seed")

    p = sub.add_parser("features", help="dump branch features for a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="features CSV path")
    common(p)
    p.set_defaults(func=_cmd_features)

    p = sub.add_parser("train", help="train the configured classifier")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True, help="output model JSON path")
    common(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("detect", help="run detection over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True, help="trained model JSON")
    p.add_argument("--out-records", required=True, help="records CSV path")
    p.add_argument("--out-report", help="report JSON path (labeled corpora)")
    common(p)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("compare", help="evaluate all classifiers on both branches")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out-dir", required=True)
    common(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("report", help="recompute a report from a records CSV")
    p.add_argument("--records", required=True)
    p.add_argument("--out", required=True, help="report JSON path")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, ConvergenceError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except UpcallError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
