"""End-to-end orchestration: configuration, per-segment processing, training,
detection runs, and the two-branch comparison report.

Flow per segment: raw dB spectrogram -> stage-1 energy gate -> (if passed)
per-band normalization, hard-limiting, and branch-specific features -> binary
classifier. Gate-rejected segments are never featurized or classified: they are
reported as non-upcalls with the score pinned to REJECT_SCORE so ROC analysis
over a full corpus stays well defined. On the contour branch the same applies
when no candidate object survives filtering.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import classifiers
from .audio import (AudioSegment, CorpusItem, DEFAULT_SEGMENT_S, LABEL_UPCALL,
                    LABEL_NONUPCALL, MANIFEST_NAME, read_manifest, read_wav)
from .contours import (CandidateOutcome, MergePolicy, NO_UPCALL, TFP2_NAMES,
                       detect_candidate, extract_tfp2)
from .errors import ConfigError, DataError
from .evaluation import ConfusionCounts, auc, detection_rates, roc_curve
from .gate import GateConfig, GateDecision, stage1_gate
from .lbp import LBPConfig, lbp_image, regional_histograms
from .spectrogram import (EqualizationBounds, Spectrogram, SpectrogramParams,
                          bandpass_crop, equalize, normalize, stft)

CONFIG_VERSION = 1
BRANCHES = ("tfp2", "lbp")
REJECT_SCORE = -1e9


@dataclass(frozen=True)
class PipelineConfig:
    version: int = CONFIG_VERSION
    spectrogram: SpectrogramParams = field(default_factory=SpectrogramParams)
    bounds: EqualizationBounds = field(default_factory=EqualizationBounds)
    gate: GateConfig = field(default_factory=GateConfig)
    merge: MergePolicy = field(default_factory=MergePolicy)
    lbp: LBPConfig = field(default_factory=LBPConfig)
    binarize_threshold: float = 1.5
    band_lo_hz: float = 80.0
    band_hi_hz: float = 320.0
    branch: str = "lbp"
    classifier: str = "lda"
    hyper: dict = field(default_factory=dict)
    segment_s: float = DEFAULT_SEGMENT_S
    train_frac: float = 0.5
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.version != CONFIG_VERSION:
            raise ConfigError(f"unsupported config version {self.version!r}")
        if self.branch not in BRANCHES:
            raise ConfigError(f"branch must be one of {BRANCHES}")
        if self.classifier not in classifiers.ALGORITHMS:
            raise ConfigError(f"unknown classifier {self.classifier!r}")
        if not 0.0 < self.train_frac < 1.0:
            raise ConfigError("train_frac must lie in (0, 1)")
        classifiers.resolve_hyper(self.classifier, self.hyper)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        d = dict(d)
        try:
            for key, sub in (("spectrogram", SpectrogramParams),
                             ("bounds", EqualizationBounds),
                             ("gate", GateConfig),
                             ("merge", MergePolicy),
                             ("lbp", LBPConfig)):
                if key in d and isinstance(d[key], dict):
                    d[key] = sub(**d[key])
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(f"bad config: {exc}") from exc

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"no config file at {path}")
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return PipelineConfig.from_dict(data)


def save_config(cfg: PipelineConfig, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(cfg.to_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")


# --- per-segment processing ---------------------------------------------------

@dataclass
class PreprocessedSegment:
    raw: Spectrogram        # dB cells; gate input
    enhanced: Spectrogram   # normalized + hard-limited, full band; contour input
    cropped: Spectrogram    # enhanced restricted to the core band; texture input


def preprocess(audio: AudioSegment, cfg: PipelineConfig) -> PreprocessedSegment:
    raw = stft(audio, cfg.spectrogram)
    enhanced = equalize(normalize(raw), cfg.bounds)
    cropped = bandpass_crop(enhanced, cfg.band_lo_hz, cfg.band_hi_hz)
    return PreprocessedSegment(raw=raw, enhanced=enhanced, cropped=cropped)


def branch_features(pre: PreprocessedSegment, cfg: PipelineConfig,
                    branch: str | None = None) -> tuple[np.ndarray | None, str | None]:
    """(feature vector, candidate kind). The vector is None when the contour
    branch finds no candidate; the kind is None on the texture branch."""
    branch = branch or cfg.branch
    if branch == "tfp2":
        outcome = detect_candidate(pre.enhanced, cfg.binarize_threshold, cfg.merge)
        if outcome.kind == NO_UPCALL:
            return None, outcome.kind
        return extract_tfp2(outcome.candidate).vector(), outcome.kind
    vec = regional_histograms(lbp_image(pre.cropped, cfg.lbp), cfg.lbp).vector
    return vec, None


def feature_dim(cfg: PipelineConfig, branch: str | None = None) -> int:
    branch = branch or cfg.branch
    if branch == "tfp2":
        return len(TFP2_NAMES)
    from .lbp import build_u2_table
    bins = build_u2_table(cfg.lbp.points).bin_count if cfg.lbp.uniform \
        else (1 << cfg.lbp.points)
    return cfg.lbp.regions_t * cfg.lbp.regions_f * bins


# --- corpus handling ------------------------------------------------------------

def load_corpus(corpus_dir: str | Path) -> list[CorpusItem]:
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise DataError(f"no corpus directory at {corpus_dir}")
    return read_manifest(corpus_dir / MANIFEST_NAME)


def split_corpus(items: list[CorpusItem], train_frac: float,
                 seed: int) -> tuple[list[CorpusItem], list[CorpusItem]]:
    """Deterministic train/test split, stratified by manifest class."""
    rng = np.random.default_rng(seed)
    by_kind: dict[str, list[CorpusItem]] = {}
    for it in items:
        by_kind.setdefault(it.kind, []).append(it)
    train: list[CorpusItem] = []
    test: list[CorpusItem] = []
    for kind in sorted(by_kind):
        group = by_kind[kind]
        order = rng.permutation(len(group))
        n_train = int(round(train_frac * len(group)))
        chosen = set(order[:n_train].tolist())
        for k, it in enumerate(group):
            (train if k in chosen else test).append(it)
    return train, test


@dataclass
class SegmentFeatures:
    item: CorpusItem
    gate: GateDecision
    vector: np.ndarray | None
    candidate_kind: str | None


def extract_corpus_features(corpus_dir: str | Path, items: list[CorpusItem],
                            cfg: PipelineConfig,
                            branch: str | None = None) -> list[SegmentFeatures]:
    corpus_dir = Path(corpus_dir)
    out = []
    for it in items:
        audio = read_wav(corpus_dir / it.file, cfg.spectrogram.sample_rate_hz)
        raw = stft(audio, cfg.spectrogram)
        decision = stage1_gate(raw, cfg.gate)
        if not decision.passed:
            out.append(SegmentFeatures(it, decision, None, None))
            continue
        enhanced = equalize(normalize(raw), cfg.bounds)
        pre = PreprocessedSegment(
            raw=raw, enhanced=enhanced,
            cropped=bandpass_crop(enhanced, cfg.band_lo_hz, cfg.band_hi_hz))
        vec, kind = branch_features(pre, cfg, branch)
        out.append(SegmentFeatures(it, decision, vec, kind))
    return out


def features_dataset(feats: list[SegmentFeatures]) -> tuple[classifiers.Dataset, list[CorpusItem]]:
    """Dataset over gate-passed, feature-bearing segments; needs labels."""
    rows, labels, used = [], [], []
    for sf in feats:
        if sf.vector is None:
            continue
        if sf.item.label is None:
            raise DataError(f"segment {sf.item.file} has no class label")
        rows.append(sf.vector)
        labels.append(sf.item.label == LABEL_UPCALL)
        used.append(sf.item)
    if not rows:
        raise DataError("no usable feature vectors (everything gated out?)")
    return classifiers.Dataset(np.array(rows), np.array(labels)), used


# --- detection records ------------------------------------------------------------

@dataclass
class DetectionRecord:
    source: str
    stage1_pass: bool
    stage1_score_db: float
    candidate_kind: str | None
    feature_vector: np.ndarray | None
    predicted: str
    score: float
    label: str | None


@dataclass
class DetectResult:
    records: list[DetectionRecord]
    report: dict | None
    classifier_evaluations: int
    gate_passed: int
    config_hash: str


def run_train(corpus_dir: str | Path, cfg: PipelineConfig,
              model_path: str | Path | None = None) -> classifiers.ClassifierModel:
    """Train the configured classifier on the configured feature branch."""
    items = load_corpus(corpus_dir)
    if any(it.label is None for it in items):
        raise DataError("training corpus must be fully labeled")
    feats = extract_corpus_features(corpus_dir, items, cfg)
    ds, _ = features_dataset(feats)
    if ds.labels.all() or not ds.labels.any():
        raise DataError("one class was eliminated before training "
                        "(gate or contour filtering removed it entirely)")
    model = classifiers.train(ds, cfg.classifier, seed=cfg.master_seed, **cfg.hyper)
    if model_path is not None:
        classifiers.save_model(model, model_path)
    return model


def run_detect(corpus_dir: str | Path, cfg: PipelineConfig,
               model: classifiers.ClassifierModel) -> DetectResult:
    """Classify every corpus segment; emit records in corpus order."""
    if model.algorithm != cfg.classifier:
        raise ConfigError(f"model is {model.algorithm!r} but config asks for "
                          f"{cfg.classifier!r}")
    expected = feature_dim(cfg)
    if model.n_features != expected:
        raise ConfigError(f"model expects {model.n_features} features but the "
                          f"{cfg.branch} branch yields {expected}")
    items = load_corpus(corpus_dir)
    feats = extract_corpus_features(corpus_dir, items, cfg)
    records = []
    evaluations = 0
    for sf in feats:
        if sf.vector is None:
            records.append(DetectionRecord(
                source=sf.item.file, stage1_pass=sf.gate.passed,
                stage1_score_db=sf.gate.score_db, candidate_kind=sf.candidate_kind,
                feature_vector=None, predicted=LABEL_NONUPCALL,
                score=REJECT_SCORE, label=sf.item.label))
            continue
        is_up, score = classifiers.predict_score(model, sf.vector)
        evaluations += 1
        records.append(DetectionRecord(
            source=sf.item.file, stage1_pass=True,
            stage1_score_db=sf.gate.score_db, candidate_kind=sf.candidate_kind,
            feature_vector=sf.vector,
            predicted=LABEL_UPCALL if is_up else LABEL_NONUPCALL,
            score=score, label=sf.item.label))

    gate_passed = sum(1 for sf in feats if sf.gate.passed)
    chash = cfg.config_hash()
    report = None
    if all(r.label is not None for r in records):
        report = evaluate_records(records, chash,
                                  branch=cfg.branch, classifier=cfg.classifier)
    return DetectResult(records=records, report=report,
                        classifier_evaluations=evaluations,
                        gate_passed=gate_passed, config_hash=chash)


def evaluate_records(records: list[DetectionRecord], config_hash: str,
                     branch: str, classifier: str) -> dict:
    """Rates, confusion counts and AUC over labeled detection records."""
    if any(r.label is None for r in records):
        raise DataError("evaluation needs labels on every record")
    up_total = sum(1 for r in records if r.label == LABEL_UPCALL)
    non_total = len(records) - up_total
    up_ok = sum(1 for r in records
                if r.label == LABEL_UPCALL and r.predicted == LABEL_UPCALL)
    non_ok = sum(1 for r in records
                 if r.label == LABEL_NONUPCALL and r.predicted == LABEL_NONUPCALL)
    counts = ConfusionCounts(up_ok, up_total, non_ok, non_total)
    rates = detection_rates(counts)
    scores = [r.score for r in records]
    labels = [r.label == LABEL_UPCALL for r in records]
    return {
        "config_hash": config_hash,
        "branch": branch,
        "classifier": classifier,
        "n_segments": len(records),
        "gate_rejected": sum(1 for r in records if not r.stage1_pass),
        "confusion": {"upcalls_correct": counts.upcalls_correct,
                      "upcalls_total": counts.upcalls_total,
                      "nonupcalls_correct": counts.nonupcalls_correct,
                      "nonupcalls_total": counts.nonupcalls_total},
        "rates": {"upcall_rate": round(rates.upcall_rate, 2),
                  "nonupcall_rate": round(rates.nonupcall_rate, 2),
                  "overall_rate": round(rates.overall_rate, 2)},
        "auc": auc(scores, labels),
    }


# --- two-branch comparison ----------------------------------------------------------

def run_compare(corpus_dir: str | Path, cfg: PipelineConfig,
                out_dir: str | Path | None = None) -> dict:
    """Train every classifier on both branches and evaluate on a held-out split.

    Writes (when out_dir is given): compare.csv with one row per classifier and
    the three rates plus AUC per branch, per-classifier ROC point CSVs, and
    report.json with the full numbers.
    """
    items = load_corpus(corpus_dir)
    if any(it.label is None for it in items):
        raise DataError("comparison corpus must be fully labeled")
    train_items, test_items = split_corpus(items, cfg.train_frac, cfg.master_seed)
    if not train_items or not test_items:
        raise DataError("corpus too small to split")

    chash = cfg.config_hash()
    report: dict = {"config_hash": chash, "n_train": len(train_items),
                    "n_test": len(test_items), "branches": {}}
    roc_tables: dict[tuple[str, str], object] = {}

    for branch in BRANCHES:
        train_feats = extract_corpus_features(corpus_dir, train_items, cfg, branch)
        test_feats = extract_corpus_features(corpus_dir, test_items, cfg, branch)
        ds, _ = features_dataset(train_feats)
        if ds.labels.all() or not ds.labels.any():
            raise DataError(f"{branch}: one class absent from the training split")
        branch_report = {}
        for alg in classifiers.ALGORITHMS:
            model = classifiers.train(ds, alg, seed=cfg.master_seed)
            records = []
            for sf in test_feats:
                if sf.vector is None:
                    predicted, score = LABEL_NONUPCALL, REJECT_SCORE
                else:
                    is_up, score = classifiers.predict_score(model, sf.vector)
                    predicted = LABEL_UPCALL if is_up else LABEL_NONUPCALL
                records.append(DetectionRecord(
                    source=sf.item.file, stage1_pass=sf.gate.passed,
                    stage1_score_db=sf.gate.score_db,
                    candidate_kind=sf.candidate_kind, feature_vector=sf.vector,
                    predicted=predicted, score=score, label=sf.item.label))
            branch_report[alg] = evaluate_records(records, chash, branch, alg)
            roc_tables[(branch, alg)] = roc_curve(
                [r.score for r in records],
                [r.label == LABEL_UPCALL for r in records])
        report["branches"][branch] = branch_report

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_report(report, out_dir / "report.json")
        _write_compare_csv(report, out_dir / "compare.csv", chash)
        for (branch, alg), curve in roc_tables.items():
            write_roc_csv(curve, out_dir / f"roc_{branch}_{alg}.csv", chash)
    return report


def _write_compare_csv(report: dict, path: Path, config_hash: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash={config_hash}\n")
        writer = csv.writer(fh)
        header = ["classifier"]
        for branch in BRANCHES:
            header += [f"{branch}_upcall_rate", f"{branch}_nonupcall_rate",
                       f"{branch}_overall_rate", f"{branch}_auc"]
        writer.writerow(header)
        for alg in classifiers.ALGORITHMS:
            row = [alg]
            for branch in BRANCHES:
                entry = report["branches"][branch][alg]
                row += [f"{entry['rates']['upcall_rate']:.2f}",
                        f"{entry['rates']['nonupcall_rate']:.2f}",
                        f"{entry['rates']['overall_rate']:.2f}",
                        f"{entry['auc']:.4f}"]
            writer.writerow(row)


# --- file emission -------------------------------------------------------------------

def write_report(report: dict, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_roc_csv(curve, path: str | Path, config_hash: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash={config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(["fpr", "tpr", "threshold"])
        for (fpr, tpr), thr in zip(curve.points, curve.thresholds):
            writer.writerow([repr(fpr), repr(tpr), repr(thr)])


def write_records_csv(result: DetectResult, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash={result.config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(["source", "stage1_pass", "stage1_score_db",
                         "candidate", "predicted", "score", "label"])
        for r in result.records:
            writer.writerow([r.source, int(r.stage1_pass), repr(r.stage1_score_db),
                             r.candidate_kind or "", r.predicted, repr(r.score),
                             r.label or ""])


def read_records_csv(path: str | Path) -> list[DetectionRecord]:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no records file at {path}")
    records = []
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    for row in csv.DictReader(lines):
        records.append(DetectionRecord(
            source=row["source"], stage1_pass=bool(int(row["stage1_pass"])),
            stage1_score_db=float(row["stage1_score_db"]),
            candidate_kind=row["candidate"] or None, feature_vector=None,
            predicted=row["predicted"], score=float(row["score"]),
            label=row["label"] or None))
    return records


def write_features_csv(feats: list[SegmentFeatures], branch: str,
                       path: str | Path, config_hash: str,
                       n_lbp_features: int | None = None) -> None:
    """Contour branch: one row per candidate (7 named columns). Texture branch:
    one row per gate-passed segment (numbered histogram columns)."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash={config_hash}\n")
        writer = csv.writer(fh)
        if branch == "tfp2":
            writer.writerow(list(TFP2_NAMES) + ["label", "source"])
        else:
            width = n_lbp_features
            if width is None:
                width = next((len(sf.vector) for sf in feats if sf.vector is not None), 0)
            writer.writerow([f"h{k:03d}" for k in range(width)] + ["label", "source"])
        for sf in feats:
            if sf.vector is None:
                continue
            writer.writerow([repr(float(v)) for v in sf.vector]
                            + [sf.item.label or "", sf.item.file])
