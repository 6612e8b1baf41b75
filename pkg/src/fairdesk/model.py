"""Logistic credit classifier with stratified k-fold splitting.

Fold 0 is the active held-out fold; every fairness view runs on it alone.
Encoding is schema-driven: one-hot for categoricals, min-max for numerics
(fit on training folds only), and the raw sources of derived group columns
are replaced by those binary columns so a protected flip is a single-bit
edit in encoded space.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .dataset import Dataset, Instance, GOOD
from .errors import ValidationError


@dataclass(frozen=True)
class ModelConfig:
    learning_rate: float = 0.1
    epochs: int = 2000
    l2_penalty: float = 1e-3
    seed: int = 0
    folds: int = 5

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if self.epochs <= 0:
            raise ValidationError("epochs must be positive")
        if self.l2_penalty < 0:
            raise ValidationError("l2_penalty must be nonnegative")
        if self.folds < 2:
            raise ValidationError("folds must be >= 2")

    def to_json(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "l2_penalty": self.l2_penalty,
            "seed": self.seed,
            "folds": self.folds,
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "ModelConfig":
        return cls(**{k: doc[k] for k in ("learning_rate", "epochs", "l2_penalty", "seed", "folds")})


@dataclass(frozen=True)
class Encoding:
    """Encoded column layout: one-hot vocabularies, scaler ranges, derived bits."""

    columns: tuple[str, ...]
    onehot: Mapping[str, tuple[str, ...]]
    scalers: Mapping[str, tuple[float, float]]
    derived: tuple[str, ...]

    def column_index(self, name: str) -> int:
        try:
            return self.columns.index(name)
        except ValueError:
            raise ValidationError(f"unknown encoded column {name!r}") from None

    def to_json(self) -> dict:
        return {
            "columns": list(self.columns),
            "onehot": {k: list(v) for k, v in self.onehot.items()},
            "scalers": {k: list(v) for k, v in self.scalers.items()},
            "derived": list(self.derived),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "Encoding":
        return cls(
            columns=tuple(doc["columns"]),
            onehot={k: tuple(v) for k, v in doc["onehot"].items()},
            scalers={k: (float(v[0]), float(v[1])) for k, v in doc["scalers"].items()},
            derived=tuple(doc["derived"]),
        )


@dataclass(frozen=True)
class PredictionRecord:
    instance_id: int
    predicted: int
    probability_good: float

    @property
    def probability_bad(self) -> float:
        return 1.0 - self.probability_good


@dataclass(frozen=True)
class PerformanceSummary:
    overall_accuracy: float
    accuracy_good: float | None
    accuracy_bad: float | None
    test_size: int


@dataclass(frozen=True)
class TrainedModel:
    config: ModelConfig
    encoding: Encoding
    weights: Mapping[str, float]
    bias: float
    fold_assignment: Mapping[int, int]
    active_fold: int = 0
    _wvec: np.ndarray = field(default=None, repr=False, compare=False)

    def weight_vector(self) -> np.ndarray:
        if self._wvec is None:
            vec = np.array([self.weights[c] for c in self.encoding.columns], dtype=np.float64)
            object.__setattr__(self, "_wvec", vec)
        return self._wvec

    def active_ids(self, dataset: Dataset) -> list[int]:
        return [inst.id for inst in dataset.instances
                if self.fold_assignment[inst.id] == self.active_fold]

    def training_ids(self, dataset: Dataset) -> list[int]:
        return [inst.id for inst in dataset.instances
                if self.fold_assignment[inst.id] != self.active_fold]


def build_encoding(dataset: Dataset, train_ids: Sequence[int]) -> Encoding:
    excluded = {spec.source for spec in dataset.protected_specs}
    train_set = set(train_ids)
    train_rows = [inst for inst in dataset.instances if inst.id in train_set]
    columns: list[str] = []
    onehot: dict[str, tuple[str, ...]] = {}
    scalers: dict[str, tuple[float, float]] = {}
    for spec in dataset.schema:
        if spec.name in excluded:
            continue
        if spec.kind == "categorical":
            onehot[spec.name] = spec.categories
            columns += [f"{spec.name}={code}" for code in spec.categories]
        else:
            values = [inst.values[spec.name] for inst in train_rows]
            lo, hi = (min(values), max(values)) if values else (0.0, 1.0)
            scalers[spec.name] = (float(lo), float(hi))
            columns.append(spec.name)
    derived = tuple(spec.name for spec in dataset.protected_specs)
    columns += list(derived)
    return Encoding(tuple(columns), onehot, scalers, derived)


def encode_instance(encoding: Encoding, instance: Instance) -> np.ndarray:
    row = np.zeros(len(encoding.columns), dtype=np.float64)
    pos = 0
    for name in encoding.columns:
        if name in encoding.derived:
            if name not in instance.groups:
                raise ValidationError(f"instance {instance.id}: missing group flag {name!r}")
            row[pos] = 1.0 if instance.groups[name] else 0.0
        elif "=" in name:
            feature, code = name.split("=", 1)
            value = instance.values.get(feature)
            if value is None:
                raise ValidationError(f"instance {instance.id}: missing value for {feature!r}")
            if value not in encoding.onehot[feature]:
                raise ValidationError(
                    f"instance {instance.id}: unencodable value {value!r} for {feature!r}")
            row[pos] = 1.0 if value == code else 0.0
        else:
            value = instance.values.get(name)
            if value is None or not isinstance(value, (int, float)):
                raise ValidationError(f"instance {instance.id}: unencodable value for {name!r}")
            lo, hi = encoding.scalers[name]
            row[pos] = (float(value) - lo) / (hi - lo) if hi > lo else 0.0
        pos += 1
    return row


def encode_matrix(encoding: Encoding, instances: Sequence[Instance]) -> np.ndarray:
    if not instances:
        return np.zeros((0, len(encoding.columns)), dtype=np.float64)
    return np.stack([encode_instance(encoding, inst) for inst in instances])


def stratified_folds(labels: Sequence[int], folds: int, seed: int) -> list[int]:
    """Deal each class round-robin over folds with one continuing pointer.

    Keeps overall fold sizes within 1 of each other and each class's
    representation within 1 across folds.
    """
    rng = np.random.default_rng(seed)
    assignment = [0] * len(labels)
    pointer = 0
    for cls in sorted(set(labels)):
        idxs = [i for i, lab in enumerate(labels) if lab == cls]
        for i in rng.permutation(len(idxs)):
            assignment[idxs[i]] = pointer
            pointer = (pointer + 1) % folds
    return assignment


def train(dataset: Dataset, config: ModelConfig = ModelConfig()) -> TrainedModel:
    """Fit logistic weights on the non-active folds with full-batch GD."""
    if not dataset.instances:
        raise ValidationError("cannot train on an empty dataset")
    labels = [inst.ground_truth for inst in dataset.instances]
    assignment = stratified_folds(labels, config.folds, config.seed)
    fold_assignment = {inst.id: f for inst, f in zip(dataset.instances, assignment)}

    for fold in range(config.folds):
        fold_labels = {lab for lab, f in zip(labels, assignment) if f == fold}
        if len(fold_labels) < 2:
            warnings.warn(f"fold {fold} holds a single class; accuracy there is degenerate",
                          stacklevel=2)

    active = 0
    train_rows = [inst for inst in dataset.instances if fold_assignment[inst.id] != active]
    encoding = build_encoding(dataset, [inst.id for inst in train_rows])
    X = encode_matrix(encoding, train_rows)
    y = np.array([inst.ground_truth for inst in train_rows], dtype=np.float64)
    w, b = _kernels.logistic_gd(X, y, config.learning_rate, config.epochs, config.l2_penalty)
    weights = {col: float(wj) for col, wj in zip(encoding.columns, w)}
    return TrainedModel(
        config=config,
        encoding=encoding,
        weights=weights,
        bias=float(b),
        fold_assignment=fold_assignment,
        active_fold=active,
    )


def _sigmoid(z):
    # np.where evaluates both branches; the unused one may overflow harmlessly
    with np.errstate(over="ignore", invalid="ignore"):
        return np.where(z >= 0, 1.0 / (1.0 + np.exp(-z)), np.exp(z) / (1.0 + np.exp(z)))


def predict_encoded(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    """Probability of the positive (Good) label for encoded rows."""
    z = X @ model.weight_vector() + model.bias
    return np.asarray(_sigmoid(z), dtype=np.float64)


def predict(model: TrainedModel, instance: Instance) -> PredictionRecord:
    x = encode_instance(model.encoding, instance)
    p = float(predict_encoded(model, x[None, :])[0])
    return PredictionRecord(instance_id=instance.id, predicted=GOOD if p >= 0.5 else 0,
                            probability_good=p)


def predict_many(model: TrainedModel, dataset: Dataset,
                 ids: Sequence[int] | None = None) -> list[PredictionRecord]:
    if ids is None:
        ids = model.active_ids(dataset)
    rows = [dataset.instance(i) for i in ids]
    X = encode_matrix(model.encoding, rows)
    probs = predict_encoded(model, X)
    return [
        PredictionRecord(instance_id=inst.id, predicted=GOOD if p >= 0.5 else 0,
                         probability_good=float(p))
        for inst, p in zip(rows, probs)
    ]


def evaluate(model: TrainedModel, dataset: Dataset) -> PerformanceSummary:
    """Accuracy on the active fold, overall and per ground-truth class."""
    records = predict_many(model, dataset)
    truth = {inst.id: inst.ground_truth for inst in dataset.instances}
    correct = sum(1 for r in records if r.predicted == truth[r.instance_id])
    good = [r for r in records if truth[r.instance_id] == GOOD]
    bad = [r for r in records if truth[r.instance_id] != GOOD]
    return PerformanceSummary(
        overall_accuracy=correct / len(records),
        accuracy_good=(sum(1 for r in good if r.predicted == GOOD) / len(good)) if good else None,
        accuracy_bad=(sum(1 for r in bad if r.predicted != GOOD) / len(bad)) if bad else None,
        test_size=len(records),
    )


def feature_weights(model: TrainedModel, dataset: Dataset | None = None) -> list[tuple[str, float, str]]:
    """Encoded features with weights, largest magnitude first; sign for coloring."""
    def display(column: str) -> str:
        if dataset is None:
            return column
        if column in model.encoding.derived:
            spec = dataset.protected_spec(column)
            return f"{column} ({spec.protected_label})"
        if "=" in column:
            feature, code = column.split("=", 1)
            return f"{feature}: {dataset.feature(feature).label(code)}"
        return column

    order = {c: i for i, c in enumerate(model.encoding.columns)}
    ranked = sorted(model.weights.items(), key=lambda kv: (-abs(kv[1]), order[kv[0]]))
    return [(display(col), w, "negative" if w < 0 else "positive") for col, w in ranked]


def model_to_json(model: TrainedModel) -> dict:
    return {
        "config": model.config.to_json(),
        "encoding": model.encoding.to_json(),
        "weights": {k: model.weights[k] for k in model.encoding.columns},
        "bias": model.bias,
        "fold_assignment": {str(k): v for k, v in model.fold_assignment.items()},
        "active_fold": model.active_fold,
    }


def model_from_json(doc: Mapping) -> TrainedModel:
    encoding = Encoding.from_json(doc["encoding"])
    weights = {k: float(v) for k, v in doc["weights"].items()}
    if set(weights) != set(encoding.columns):
        raise ValidationError("model artifact: weights do not match encoded columns")
    return TrainedModel(
        config=ModelConfig.from_json(doc["config"]),
        encoding=encoding,
        weights=weights,
        bias=float(doc["bias"]),
        fold_assignment={int(k): int(v) for k, v in doc["fold_assignment"].items()},
        active_fold=int(doc["active_fold"]),
    )


def save_model(model: TrainedModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_json(model), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_model(path) -> TrainedModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_json(json.load(fh))
