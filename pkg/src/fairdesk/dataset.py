"""Tabular credit datasets: ingestion, derived protected-group columns, views.

A loaded :class:`Dataset` is immutable. Protected-group and legitimate-feature
specs are data, not code, so alternative group definitions can be supplied as a
JSON mapping file at ingestion time without touching this module.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .errors import DataFormatError, UnknownFeatureError, ValidationError

GOOD, BAD = 1, 0

LABEL_NAMES = {GOOD: "Good", BAD: "Bad"}


@dataclass(frozen=True)
class FeatureSpec:
    """One raw column: its kind, category codes, and display labels."""

    name: str
    kind: str  # "categorical" | "numeric"
    categories: tuple[str, ...] = ()
    display_labels: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("categorical", "numeric"):
            raise ValidationError(f"feature {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == "categorical" and len(self.categories) < 2:
            raise ValidationError(f"feature {self.name!r}: categorical specs need >= 2 categories")

    def label(self, code) -> str:
        return self.display_labels.get(code, str(code))


@dataclass(frozen=True)
class ValuePredicate:
    """Serializable predicate over a raw feature value (total over the domain)."""

    op: str  # "in" | "eq" | "lt" | "le" | "gt" | "ge"
    operand: Any

    _OPS = ("in", "eq", "lt", "le", "gt", "ge")

    def __post_init__(self):
        if self.op not in self._OPS:
            raise ValidationError(f"unknown predicate op {self.op!r}")
        if self.op == "in":
            object.__setattr__(self, "operand", tuple(self.operand))

    def __call__(self, value) -> bool:
        if self.op == "in":
            return value in self.operand
        if self.op == "eq":
            return value == self.operand
        if self.op == "lt":
            return value < self.operand
        if self.op == "le":
            return value <= self.operand
        if self.op == "gt":
            return value > self.operand
        return value >= self.operand

    def to_json(self) -> dict:
        operand = list(self.operand) if self.op == "in" else self.operand
        return {"op": self.op, "operand": operand}

    @classmethod
    def from_json(cls, doc: Mapping) -> "ValuePredicate":
        return cls(op=doc["op"], operand=doc["operand"])


@dataclass(frozen=True)
class ProtectedGroupSpec:
    """Binary partition of the dataset derived from one raw feature.

    ``name`` is the derived column (e.g. ``gender``); ``source`` the raw
    feature the predicate reads (e.g. ``personal_status_sex``). Instances where
    the predicate holds belong to the protected group.
    """

    name: str
    source: str
    predicate: ValuePredicate
    protected_label: str
    unprotected_label: str

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "source": self.source,
            "predicate": self.predicate.to_json(),
            "protected_label": self.protected_label,
            "unprotected_label": self.unprotected_label,
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "ProtectedGroupSpec":
        return cls(
            name=doc["name"],
            source=doc["source"],
            predicate=ValuePredicate.from_json(doc["predicate"]),
            protected_label=doc["protected_label"],
            unprotected_label=doc["unprotected_label"],
        )


@dataclass(frozen=True)
class LegitimateFeatureSpec:
    """Conditioning feature with its declared strata (codes or numeric bin edges)."""

    feature: str
    strata: tuple = ()

    def to_json(self) -> dict:
        return {"feature": self.feature, "strata": list(self.strata)}

    @classmethod
    def from_json(cls, doc: Mapping) -> "LegitimateFeatureSpec":
        return cls(feature=doc["feature"], strata=tuple(doc["strata"]))


@dataclass(frozen=True)
class Instance:
    """One row: 1-based stable id, raw values, binary ground truth, group flags."""

    id: int
    values: Mapping[str, Any]
    ground_truth: int
    groups: Mapping[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "values": dict(self.values),
            "ground_truth": self.ground_truth,
            "groups": dict(self.groups),
        }


@dataclass(frozen=True)
class GroupPartition:
    protected_ids: frozenset[int]
    unprotected_ids: frozenset[int]


@dataclass(frozen=True)
class Filter:
    """Conjunctive row predicate; ``value`` may use display words for derived
    columns ("protected"/"unprotected") and labels ("Good"/"Bad")."""

    feature: str
    op: str = "eq"
    value: Any = None


@dataclass(frozen=True)
class HistogramBucket:
    label: str
    positive: int
    negative: int
    lo: float | None = None
    hi: float | None = None


@dataclass(frozen=True)
class Dataset:
    schema: tuple[FeatureSpec, ...]
    instances: tuple[Instance, ...]
    protected_specs: tuple[ProtectedGroupSpec, ...]
    legitimate_specs: tuple[LegitimateFeatureSpec, ...]

    def feature(self, name: str) -> FeatureSpec:
        for spec in self.schema:
            if spec.name == name:
                return spec
        raise UnknownFeatureError(f"unknown feature {name!r}")

    def protected_spec(self, name: str) -> ProtectedGroupSpec:
        for spec in self.protected_specs:
            if spec.name == name:
                return spec
        raise UnknownFeatureError(f"unknown protected feature {name!r}")

    def legitimate_spec(self, feature: str) -> LegitimateFeatureSpec:
        for spec in self.legitimate_specs:
            if spec.feature == feature:
                return spec
        raise UnknownFeatureError(f"unknown legitimate feature {feature!r}")

    def instance(self, instance_id: int) -> Instance:
        idx = self._index().get(instance_id)
        if idx is None:
            raise ValidationError(f"unknown instance id {instance_id}")
        return self.instances[idx]

    def _index(self) -> dict[int, int]:
        cached = getattr(self, "_id_index", None)
        if cached is None:
            cached = {inst.id: i for i, inst in enumerate(self.instances)}
            object.__setattr__(self, "_id_index", cached)
        return cached

    def column(self, name: str) -> list:
        """Values of a raw feature, derived group column, 'ground_truth', or 'id'."""
        if name == "id":
            return [inst.id for inst in self.instances]
        if name == "ground_truth":
            return [inst.ground_truth for inst in self.instances]
        if any(spec.name == name for spec in self.protected_specs):
            return [inst.groups[name] for inst in self.instances]
        self.feature(name)
        return [inst.values[name] for inst in self.instances]

    def column_names(self) -> list[str]:
        names = [spec.name for spec in self.schema]
        names += [spec.name for spec in self.protected_specs]
        return names


# --- canonical German Credit schema ----------------------------------------

def _cat(name, codes, labels):
    return FeatureSpec(name, "categorical", tuple(codes), dict(zip(codes, labels)))


GERMAN_CREDIT_SCHEMA: tuple[FeatureSpec, ...] = (
    _cat("checking_status", ["A11", "A12", "A13", "A14"],
         ["< 0 DM", "0 to 200 DM", ">= 200 DM or salary account", "no checking account"]),
    FeatureSpec("duration", "numeric"),
    _cat("credit_history", ["A30", "A31", "A32", "A33", "A34"],
         ["no credits / all paid", "all paid at this bank", "existing paid till now",
          "delay in the past", "critical / other credits"]),
    _cat("purpose", ["A40", "A41", "A42", "A43", "A44", "A45", "A46", "A47", "A48", "A49", "A410"],
         ["car (new)", "car (used)", "furniture", "radio/television", "domestic appliances",
          "repairs", "education", "vacation", "retraining", "business", "others"]),
    FeatureSpec("credit_amount", "numeric"),
    _cat("savings", ["A61", "A62", "A63", "A64", "A65"],
         ["< 100 DM", "100 to 500 DM", "500 to 1000 DM", ">= 1000 DM", "unknown / none"]),
    _cat("employment", ["A71", "A72", "A73", "A74", "A75"],
         ["unemployed", "< 1 year", "1 to 4 years", "4 to 7 years", ">= 7 years"]),
    FeatureSpec("installment_rate", "numeric"),
    _cat("personal_status_sex", ["A91", "A92", "A93", "A94", "A95"],
         ["male divorced/separated", "female divorced/separated/married", "male single",
          "male married/widowed", "female single"]),
    _cat("other_debtors", ["A101", "A102", "A103"], ["none", "co-applicant", "guarantor"]),
    FeatureSpec("residence_since", "numeric"),
    _cat("property", ["A121", "A122", "A123", "A124"],
         ["real estate", "savings agreement / insurance", "car or other", "unknown / none"]),
    FeatureSpec("age", "numeric"),
    _cat("other_installment_plans", ["A141", "A142", "A143"], ["bank", "stores", "none"]),
    _cat("housing", ["A151", "A152", "A153"], ["rent", "own", "for free"]),
    FeatureSpec("existing_credits", "numeric"),
    _cat("job", ["A171", "A172", "A173", "A174"],
         ["unemployed / unskilled non-resident", "unskilled resident", "skilled employee",
          "management / highly qualified"]),
    FeatureSpec("num_liable", "numeric"),
    _cat("telephone", ["A191", "A192"], ["none", "yes, registered"]),
    _cat("foreign_worker_status", ["A201", "A202"], ["yes", "no"]),
)

DEFAULT_PROTECTED_SPECS: tuple[ProtectedGroupSpec, ...] = (
    ProtectedGroupSpec("age_group", "age", ValuePredicate("lt", 25), "age < 25", "age >= 25"),
    ProtectedGroupSpec("gender", "personal_status_sex", ValuePredicate("in", ("A92", "A95")),
                       "female", "male"),
    ProtectedGroupSpec("foreign_worker", "foreign_worker_status", ValuePredicate("eq", "A201"),
                       "foreign worker", "not a foreign worker"),
)

DEFAULT_LEGITIMATE_SPECS: tuple[LegitimateFeatureSpec, ...] = (
    LegitimateFeatureSpec("job", ("A171", "A172", "A173", "A174")),
    LegitimateFeatureSpec("savings", ("A61", "A62", "A63", "A64", "A65")),
    LegitimateFeatureSpec("employment", ("A71", "A72", "A73", "A74", "A75")),
    LegitimateFeatureSpec("credit_history", ("A30", "A31", "A32", "A33", "A34")),
)

_NUMERIC_INT_FEATURES = {
    "duration", "credit_amount", "installment_rate", "residence_since",
    "age", "existing_credits", "num_liable",
}


def _parse_value(spec: FeatureSpec, token: str, row: int):
    if spec.kind == "numeric":
        try:
            return int(token) if spec.name in _NUMERIC_INT_FEATURES else float(token)
        except ValueError:
            raise DataFormatError(f"row {row}: non-numeric value {token!r} for {spec.name}") from None
    if token not in spec.categories:
        raise DataFormatError(f"row {row}: unknown category code {token!r} for {spec.name}")
    return token


def _derive_groups(values: Mapping[str, Any], specs: Sequence[ProtectedGroupSpec]) -> dict[str, bool]:
    return {spec.name: bool(spec.predicate(values[spec.source])) for spec in specs}


def validate_specs(schema: Sequence[FeatureSpec],
                   protected: Sequence[ProtectedGroupSpec],
                   legitimate: Sequence[LegitimateFeatureSpec]) -> None:
    names = [s.name for s in schema]
    if len(set(names)) != len(names):
        raise ValidationError("duplicate feature names in schema")
    by_name = {s.name: s for s in schema}
    derived = [s.name for s in protected]
    if len(set(derived)) != len(derived):
        raise ValidationError("duplicate derived group names")
    for spec in protected:
        if spec.source not in by_name:
            raise UnknownFeatureError(f"protected spec {spec.name!r}: unknown source {spec.source!r}")
        src = by_name[spec.source]
        if src.kind == "categorical" and spec.predicate.op == "in":
            bad = [c for c in spec.predicate.operand if c not in src.categories]
            if bad:
                raise ValidationError(f"protected spec {spec.name!r}: codes {bad} not in {spec.source}")
    for spec in legitimate:
        if spec.feature not in by_name:
            raise UnknownFeatureError(f"legitimate spec: unknown feature {spec.feature!r}")
        feat = by_name[spec.feature]
        if feat.kind == "categorical":
            if set(spec.strata) != set(feat.categories):
                raise ValidationError(
                    f"legitimate spec {spec.feature!r}: strata must cover the category domain")
        elif len(spec.strata) < 2:
            raise ValidationError(f"legitimate spec {spec.feature!r}: numeric strata need bin edges")


def load_german_credit(source,
                       protected_specs: Sequence[ProtectedGroupSpec] = DEFAULT_PROTECTED_SPECS,
                       legitimate_specs: Sequence[LegitimateFeatureSpec] = DEFAULT_LEGITIMATE_SPECS,
                       ) -> Dataset:
    """Parse the canonical space-delimited 21-column credit file.

    ``source`` may be a path, a text string, bytes, or a file-like object.
    The trailing column holds the rating (1 good, 2 bad); the remaining 20
    must match :data:`GERMAN_CREDIT_SCHEMA` in order.
    """
    text = _read_text(source)
    schema = GERMAN_CREDIT_SCHEMA
    validate_specs(schema, protected_specs, legitimate_specs)

    instances = []
    row = 0
    for line in text.splitlines():
        if not line.strip():
            continue
        row += 1
        tokens = line.split()
        if len(tokens) != len(schema) + 1:
            raise DataFormatError(
                f"row {row}: expected {len(schema) + 1} columns, got {len(tokens)}")
        values = {spec.name: _parse_value(spec, tok, row) for spec, tok in zip(schema, tokens)}
        target = tokens[-1]
        if target == "1":
            label = GOOD
        elif target == "2":
            label = BAD
        else:
            raise DataFormatError(f"row {row}: rating column must be 1 or 2, got {target!r}")
        instances.append(Instance(
            id=row,
            values=values,
            ground_truth=label,
            groups=_derive_groups(values, protected_specs),
        ))
    if not instances:
        raise DataFormatError("empty input: no data rows")
    return Dataset(
        schema=schema,
        instances=tuple(instances),
        protected_specs=tuple(protected_specs),
        legitimate_specs=tuple(legitimate_specs),
    )


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        if "\n" in source or " " in source.strip():
            return source
        with open(source, "r", encoding="utf-8") as fh:
            return fh.read()
    if isinstance(source, io.IOBase) or hasattr(source, "read"):
        data = source.read()
        return data.decode("utf-8") if isinstance(data, bytes) else data
    with open(source, "r", encoding="utf-8") as fh:  # pathlib.Path
        return fh.read()


def load_mapping_file(path) -> tuple[tuple[ProtectedGroupSpec, ...], tuple[LegitimateFeatureSpec, ...]]:
    """Read a JSON mapping file declaring protected/legitimate specs."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    protected = tuple(ProtectedGroupSpec.from_json(d) for d in doc.get("protected", []))
    legitimate = tuple(LegitimateFeatureSpec.from_json(d) for d in doc.get("legitimate", []))
    return protected, legitimate


# --- views ------------------------------------------------------------------

def partition(dataset: Dataset, group: str | ProtectedGroupSpec,
              stratum: tuple[str | LegitimateFeatureSpec, Any] | None = None) -> GroupPartition:
    """Split instance ids into protected/unprotected, optionally within one stratum."""
    spec = group if isinstance(group, ProtectedGroupSpec) else dataset.protected_spec(group)
    if spec not in dataset.protected_specs:
        raise UnknownFeatureError(f"protected spec {spec.name!r} does not belong to this dataset")
    pool = dataset.instances
    if stratum is not None:
        legit, value = stratum
        legit_spec = legit if isinstance(legit, LegitimateFeatureSpec) else dataset.legitimate_spec(legit)
        if value not in legit_spec.strata:
            raise ValidationError(f"{value!r} is not a declared stratum of {legit_spec.feature!r}")
        pool = [inst for inst in pool if inst.values[legit_spec.feature] == value]
    protected = frozenset(inst.id for inst in pool if inst.groups[spec.name])
    unprotected = frozenset(inst.id for inst in pool if not inst.groups[spec.name])
    return GroupPartition(protected, unprotected)


def _normalize_filter_value(dataset: Dataset, flt: Filter):
    value = flt.value
    if isinstance(value, str):
        if any(s.name == flt.feature for s in dataset.protected_specs):
            if value.lower() == "protected":
                return True
            if value.lower() == "unprotected":
                return False
        if flt.feature == "ground_truth":
            if value == "Good":
                return GOOD
            if value == "Bad":
                return BAD
    return value


def query_view(dataset: Dataset, filters: Iterable[Filter] = (),
               sort: tuple[str, str] | None = None,
               ids: Iterable[int] | None = None) -> list[Instance]:
    """Filtered (conjunctive), stably sorted instance view.

    ``ids`` optionally restricts the pool (the service passes the active fold).
    """
    pool = list(dataset.instances)
    if ids is not None:
        wanted = set(ids)
        pool = [inst for inst in pool if inst.id in wanted]
    for flt in filters:
        value = _normalize_filter_value(dataset, flt)
        pred = ValuePredicate(flt.op, value)
        column = {inst.id: v for inst, v in zip(dataset.instances, dataset.column(flt.feature))}
        pool = [inst for inst in pool if pred(column[inst.id])]
    if sort is not None:
        feature, direction = sort
        if direction not in ("asc", "desc"):
            raise ValidationError(f"sort direction must be asc or desc, got {direction!r}")
        column = {inst.id: v for inst, v in zip(dataset.instances, dataset.column(feature))}
        pool.sort(key=lambda inst: column[inst.id], reverse=(direction == "desc"))
    return pool


def histogram(dataset: Dataset, feature: str, target: str = "ground_truth",
              bins: Sequence[float] | None = None,
              predictions: Mapping[int, int] | None = None,
              ids: Iterable[int] | None = None) -> list[HistogramBucket]:
    """Per-category (or per-bin) counts of positive and negative labels."""
    if target not in ("ground_truth", "prediction"):
        raise ValidationError(f"histogram target must be ground_truth or prediction, got {target!r}")
    if target == "prediction" and predictions is None:
        raise ValidationError("prediction histogram requires a predictions map")
    spec = dataset.feature(feature)
    pool = dataset.instances
    if ids is not None:
        wanted = set(ids)
        pool = [inst for inst in pool if inst.id in wanted]

    def label_of(inst):
        return inst.ground_truth if target == "ground_truth" else predictions[inst.id]

    if spec.kind == "categorical":
        counts = {code: [0, 0] for code in spec.categories}
        for inst in pool:
            bucket = counts[inst.values[feature]]
            bucket[0 if label_of(inst) == GOOD else 1] += 1
        return [HistogramBucket(label=spec.label(code), positive=pos, negative=neg)
                for code, (pos, neg) in counts.items()]

    values = [inst.values[feature] for inst in pool]
    if bins is None:
        lo, hi = (min(values), max(values)) if values else (0.0, 1.0)
        if lo == hi:
            hi = lo + 1
        step = (hi - lo) / 5
        bins = [lo + i * step for i in range(6)]
    edges = list(bins)
    if len(edges) < 2 or any(nxt <= prev for prev, nxt in zip(edges, edges[1:])):
        raise ValidationError("bin edges must be strictly increasing")
    if values and (min(values) < edges[0] or max(values) > edges[-1]):
        raise ValidationError("bin edges do not cover the observed range")
    counts = [[0, 0] for _ in range(len(edges) - 1)]
    for inst in pool:
        v = inst.values[feature]
        idx = len(edges) - 2  # top edge closes the last bin
        for i in range(len(edges) - 1):
            if edges[i] <= v < edges[i + 1]:
                idx = i
                break
        counts[idx][0 if label_of(inst) == GOOD else 1] += 1
    return [
        HistogramBucket(label=f"[{edges[i]:g}, {edges[i + 1]:g})", positive=pos, negative=neg,
                        lo=float(edges[i]), hi=float(edges[i + 1]))
        for i, (pos, neg) in enumerate(counts)
    ]


# --- serialization ----------------------------------------------------------

def dataset_to_json(dataset: Dataset) -> dict:
    return {
        "schema": [
            {
                "name": s.name,
                "kind": s.kind,
                "categories": list(s.categories),
                "display_labels": dict(s.display_labels),
            }
            for s in dataset.schema
        ],
        "protected_specs": [s.to_json() for s in dataset.protected_specs],
        "legitimate_specs": [s.to_json() for s in dataset.legitimate_specs],
        "instances": [inst.to_json() for inst in dataset.instances],
    }


def dataset_from_json(doc: Mapping) -> Dataset:
    schema = tuple(
        FeatureSpec(d["name"], d["kind"], tuple(d["categories"]), dict(d["display_labels"]))
        for d in doc["schema"]
    )
    protected = tuple(ProtectedGroupSpec.from_json(d) for d in doc["protected_specs"])
    legitimate = tuple(LegitimateFeatureSpec.from_json(d) for d in doc["legitimate_specs"])
    instances = tuple(
        Instance(
            id=d["id"],
            values=dict(d["values"]),
            ground_truth=d["ground_truth"],
            groups={k: bool(v) for k, v in d["groups"].items()},
        )
        for d in doc["instances"]
    )
    ids = [inst.id for inst in instances]
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate instance ids in dataset dump")
    return Dataset(schema=schema, instances=instances,
                   protected_specs=protected, legitimate_specs=legitimate)


def save_dataset(dataset: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dataset_to_json(dataset), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_dataset(path) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        return dataset_from_json(json.load(fh))
