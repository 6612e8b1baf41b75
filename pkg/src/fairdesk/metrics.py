"""Eight fairness metrics over the active fold at three scopes.

Group metrics (DP, EOpp, PE, EOdds, OT, CSP) read an :class:`EvaluationFrame`
so that label/prediction overlays can be audited without retraining.
Individual metrics (counterfactual rate, consistency) need the model itself
because they re-predict in encoded feature space.

All values are percentages in [0, 100] at full precision; rounding to one
decimal happens only at serialization boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .dataset import Dataset
from .errors import (
    EmptyDenominatorError,
    UnsupportedCounterfactualError,
    ValidationError,
)
from .model import TrainedModel, encode_matrix, predict_encoded, predict_many

GROUP_METRICS = ("DP", "EOpp", "PE", "EOdds", "OT", "CSP")
INDIVIDUAL_METRICS = ("CF", "Consistency")
ALL_METRICS = GROUP_METRICS + INDIVIDUAL_METRICS

METRIC_NAMES = {
    "DP": "Demographic Parity",
    "EOpp": "Equal Opportunity",
    "PE": "Predictive Equality",
    "EOdds": "Equalized Odds",
    "OT": "Outcome Test",
    "CSP": "Conditional Statistical Parity",
    "CF": "Counterfactual Fairness",
    "Consistency": "Consistency",
}


@dataclass(frozen=True)
class EvaluationFrame:
    """Everything the group metrics need about the active fold.

    ``y`` and ``yhat`` are binary maps keyed by instance id; ``groups`` maps
    each derived protected column to its per-id membership flag; ``strata``
    holds raw values of the declared legitimate features.
    """

    ids: tuple[int, ...]
    y: Mapping[int, int]
    yhat: Mapping[int, int]
    groups: Mapping[str, Mapping[int, bool]]
    strata: Mapping[str, Mapping[int, Any]]
    group_labels: Mapping[str, tuple[str, str]]
    strata_domains: Mapping[str, tuple]

    def with_overrides(self, y: Mapping[int, int] | None = None,
                       yhat: Mapping[int, int] | None = None) -> "EvaluationFrame":
        new_y = dict(self.y)
        new_yhat = dict(self.yhat)
        for i, v in (y or {}).items():
            if i not in new_y:
                raise ValidationError(f"instance {i} is not in the active fold")
            new_y[i] = v
        for i, v in (yhat or {}).items():
            if i not in new_yhat:
                raise ValidationError(f"instance {i} is not in the active fold")
            new_yhat[i] = v
        return EvaluationFrame(self.ids, new_y, new_yhat, self.groups, self.strata,
                               self.group_labels, self.strata_domains)


def build_frame(dataset: Dataset, model: TrainedModel,
                predictions=None) -> EvaluationFrame:
    """Assemble the audit frame for the model's active fold."""
    if predictions is None:
        predictions = predict_many(model, dataset)
    ids = tuple(r.instance_id for r in predictions)
    yhat = {r.instance_id: r.predicted for r in predictions}
    y = {i: dataset.instance(i).ground_truth for i in ids}
    groups = {
        spec.name: {i: dataset.instance(i).groups[spec.name] for i in ids}
        for spec in dataset.protected_specs
    }
    strata = {
        spec.feature: {i: dataset.instance(i).values[spec.feature] for i in ids}
        for spec in dataset.legitimate_specs
    }
    return EvaluationFrame(
        ids=ids,
        y=y,
        yhat=yhat,
        groups=groups,
        strata=strata,
        group_labels={s.name: (s.protected_label, s.unprotected_label)
                      for s in dataset.protected_specs},
        strata_domains={s.feature: tuple(s.strata) for s in dataset.legitimate_specs},
    )


# --- rate machinery ---------------------------------------------------------

# metric -> (denominator condition, numerator condition) over (y, yhat)
_FORMS: Mapping[str, tuple[Callable[[int, int], bool], Callable[[int, int], bool]]] = {
    "DP": (lambda y, p: True, lambda y, p: p == 1),
    "EOpp": (lambda y, p: y == 1, lambda y, p: p == 1),
    "PE": (lambda y, p: y == 0, lambda y, p: p == 1),
    "OT": (lambda y, p: p == 1, lambda y, p: y == 1),
}


def _rate(frame: EvaluationFrame, metric_id: str, member_ids: Iterable[int]) -> tuple[int, int]:
    """(numerator, denominator) counts of the metric's rate over given ids."""
    den_cond, num_cond = _FORMS[metric_id]
    den = [i for i in member_ids if den_cond(frame.y[i], frame.yhat[i])]
    num = [i for i in den if num_cond(frame.y[i], frame.yhat[i])]
    return len(num), len(den)


def _rate_pct(num: int, den: int) -> float:
    return 100.0 * num / den


def _members(frame: EvaluationFrame, group: str, protected: bool) -> list[int]:
    if group not in frame.groups:
        raise ValidationError(f"unknown protected feature {group!r}")
    flags = frame.groups[group]
    return [i for i in frame.ids if flags[i] == protected]


@dataclass(frozen=True)
class GroupMetricResult:
    metric_id: str
    group: str
    value: float
    rate_protected: float
    rate_unprotected: float
    advantaged_group: str | None
    scope: str = "group"
    components: tuple[float, float] | None = None
    strata_breakdown: Mapping[Any, float] | None = None
    excluded_strata: tuple = ()


@dataclass(frozen=True)
class SubgroupMetricResult:
    metric_id: str
    features: tuple[str, ...]
    value: float
    subgroup_rates: Mapping[str, Any]
    most_advantaged: str | None
    most_disadvantaged: str | None
    excluded_subgroups: tuple[str, ...] = ()
    scope: str = "subgroup"
    detail: Mapping[str, Any] | None = None


@dataclass(frozen=True)
class CounterfactualResult:
    protected_feature: str
    cfr: float
    violating_ids: tuple[int, ...]
    n: int
    metric_id: str = "CF"
    scope: str = "individual"

    @property
    def value(self) -> float:
        return self.cfr


@dataclass(frozen=True)
class ConsistencyResult:
    score: float
    per_instance: Mapping[int, float]
    neighbor_map: Mapping[int, tuple[int, ...]]
    n_neighbors: int = 5
    metric_id: str = "Consistency"
    scope: str = "individual"

    @property
    def value(self) -> float:
        return self.score


def _two_rates(frame: EvaluationFrame, metric_id: str, group: str) -> tuple[float, float]:
    if group not in frame.groups:
        raise ValidationError(f"unknown protected feature {group!r}")
    labels = frame.group_labels[group]
    out = []
    for protected, side in ((True, labels[0]), (False, labels[1])):
        num, den = _rate(frame, metric_id, _members(frame, group, protected))
        if den == 0:
            raise EmptyDenominatorError(
                f"{metric_id}: group {group!r} side {side!r} has an empty denominator")
        out.append(_rate_pct(num, den))
    return out[0], out[1]


def _advantaged(frame: EvaluationFrame, group: str,
                rate_protected: float, rate_unprotected: float) -> str | None:
    protected_label, unprotected_label = frame.group_labels[group]
    if rate_protected == rate_unprotected:
        return None
    return protected_label if rate_protected > rate_unprotected else unprotected_label


def _simple_group_metric(frame: EvaluationFrame, metric_id: str, group: str) -> GroupMetricResult:
    rp, ru = _two_rates(frame, metric_id, group)
    return GroupMetricResult(
        metric_id=metric_id,
        group=group,
        value=abs(ru - rp),
        rate_protected=rp,
        rate_unprotected=ru,
        advantaged_group=_advantaged(frame, group, rp, ru),
    )


def demographic_parity(frame: EvaluationFrame, group: str) -> GroupMetricResult:
    """Difference in P(predicted Good) between the two sides of a group."""
    return _simple_group_metric(frame, "DP", group)


def equal_opportunity(frame: EvaluationFrame, group: str) -> GroupMetricResult:
    """Difference in P(predicted Good | truly Good)."""
    return _simple_group_metric(frame, "EOpp", group)


def predictive_equality(frame: EvaluationFrame, group: str) -> GroupMetricResult:
    """Difference in P(predicted Good | truly Bad)."""
    return _simple_group_metric(frame, "PE", group)


def outcome_test(frame: EvaluationFrame, group: str) -> GroupMetricResult:
    """Difference in P(truly Good | predicted Good)."""
    return _simple_group_metric(frame, "OT", group)


def equalized_odds(frame: EvaluationFrame, group: str) -> GroupMetricResult:
    """Worse of the Equal Opportunity and Predictive Equality differences."""
    eopp = equal_opportunity(frame, group)
    pe = predictive_equality(frame, group)
    dominant = eopp if eopp.value >= pe.value else pe
    return GroupMetricResult(
        metric_id="EOdds",
        group=group,
        value=max(eopp.value, pe.value),
        rate_protected=dominant.rate_protected,
        rate_unprotected=dominant.rate_unprotected,
        advantaged_group=dominant.advantaged_group,
        components=(eopp.value, pe.value),
    )


def conditional_statistical_parity(frame: EvaluationFrame, group: str,
                                   legit_feature: str) -> GroupMetricResult:
    """Worst per-stratum Demographic Parity difference, with full breakdown."""
    if legit_feature not in frame.strata:
        raise ValidationError(f"unknown legitimate feature {legit_feature!r}")
    values = frame.strata[legit_feature]
    breakdown: dict[Any, float] = {}
    rates: dict[Any, tuple[float, float]] = {}
    excluded = []
    for stratum in frame.strata_domains[legit_feature]:
        pool = [i for i in frame.ids if values[i] == stratum]
        protected = [i for i in pool if frame.groups[group][i]]
        unprotected = [i for i in pool if not frame.groups[group][i]]
        if not protected or not unprotected:
            excluded.append(stratum)
            continue
        np_, dp_ = _rate(frame, "DP", protected)
        nu, du = _rate(frame, "DP", unprotected)
        rp, ru = _rate_pct(np_, dp_), _rate_pct(nu, du)
        rates[stratum] = (rp, ru)
        breakdown[stratum] = abs(ru - rp)
    if not breakdown:
        raise EmptyDenominatorError(
            f"CSP: no stratum of {legit_feature!r} has both {group!r} sides represented")
    worst = max(breakdown, key=lambda s: (breakdown[s], str(s)))
    rp, ru = rates[worst]
    return GroupMetricResult(
        metric_id="CSP",
        group=group,
        value=breakdown[worst],
        rate_protected=rp,
        rate_unprotected=ru,
        advantaged_group=_advantaged(frame, group, rp, ru),
        strata_breakdown=breakdown,
        excluded_strata=tuple(excluded),
    )


def group_metric(frame: EvaluationFrame, metric_id: str, group: str,
                 legit_feature: str | None = None) -> GroupMetricResult:
    """Dispatch a group-scope metric by id."""
    if metric_id == "CSP":
        if legit_feature is not None:
            return conditional_statistical_parity(frame, group, legit_feature)
        return worst_csp(frame, group)
    ops = {
        "DP": demographic_parity,
        "EOpp": equal_opportunity,
        "PE": predictive_equality,
        "EOdds": equalized_odds,
        "OT": outcome_test,
    }
    if metric_id not in ops:
        raise ValidationError(f"unknown group metric {metric_id!r}")
    return ops[metric_id](frame, group)


def worst_csp(frame: EvaluationFrame, group: str) -> GroupMetricResult:
    """CSP over every declared legitimate feature; keeps the worst result."""
    results = []
    errors = []
    for feature in frame.strata_domains:
        try:
            results.append((feature, conditional_statistical_parity(frame, group, feature)))
        except EmptyDenominatorError as exc:
            errors.append(str(exc))
    if not results:
        raise EmptyDenominatorError("; ".join(errors))
    feature, worst = max(results, key=lambda fr: (fr[1].value, fr[0]))
    breakdown = {f"{feature}={stratum}": diff
                 for feature, res in results
                 for stratum, diff in res.strata_breakdown.items()}
    return GroupMetricResult(
        metric_id="CSP",
        group=group,
        value=worst.value,
        rate_protected=worst.rate_protected,
        rate_unprotected=worst.rate_unprotected,
        advantaged_group=worst.advantaged_group,
        strata_breakdown=breakdown,
        excluded_strata=tuple(f"{feat}={s}" for feat, res in results
                              for s in res.excluded_strata),
    )


# --- subgroup scope ---------------------------------------------------------

def _subgroup_keys(frame: EvaluationFrame, features: Sequence[str]) -> list[tuple[str, tuple[bool, ...]]]:
    keys = []
    n = len(features)
    for mask in range(2 ** n):
        flags = tuple(bool((mask >> (n - 1 - i)) & 1) for i in range(n))
        parts = [frame.group_labels[f][0 if flag else 1] for f, flag in zip(features, flags)]
        keys.append((", ".join(parts), flags))
    return keys


def _subgroup_ids(frame: EvaluationFrame, features: Sequence[str],
                  flags: Sequence[bool]) -> list[int]:
    return [i for i in frame.ids
            if all(frame.groups[f][i] == flag for f, flag in zip(features, flags))]


def subgroup_metric(frame: EvaluationFrame, metric_id: str, features: Sequence[str],
                    legit_feature: str | None = None) -> SubgroupMetricResult:
    """Max pairwise rate difference over the cross product of 2 or 3 groups.

    Subgroups lacking a required denominator are excluded and reported, never
    scored as zero. EOdds takes the pairwise max per component, then the max
    of the two; CSP compares subgroups within each stratum and keeps the
    worst stratum anywhere.
    """
    features = tuple(features)
    if len(features) not in (2, 3):
        raise ValidationError("subgroup analysis needs 2 or 3 protected features")
    if len(set(features)) != len(features):
        raise ValidationError("subgroup features must be distinct")
    if metric_id not in GROUP_METRICS:
        raise ValidationError(f"unknown group metric {metric_id!r}")
    for f in features:
        if f not in frame.groups:
            raise ValidationError(f"unknown protected feature {f!r}")

    keys = _subgroup_keys(frame, features)
    members = {key: _subgroup_ids(frame, features, flags) for key, flags in keys}

    if metric_id == "CSP":
        return _subgroup_csp(frame, features, members, legit_feature)
    if metric_id == "EOdds":
        return _subgroup_eodds(frame, features, members)

    rates: dict[str, float] = {}
    excluded: list[str] = []
    for key, _ in keys:
        num, den = _rate(frame, metric_id, members[key])
        if den == 0:
            excluded.append(key)
        else:
            rates[key] = _rate_pct(num, den)
    if len(rates) < 2:
        raise EmptyDenominatorError(
            f"{metric_id}: fewer than 2 subgroups of {features} have a valid denominator")
    ordered = sorted(rates, key=lambda k: (rates[k], k))
    value = rates[ordered[-1]] - rates[ordered[0]]
    return SubgroupMetricResult(
        metric_id=metric_id,
        features=features,
        value=value,
        subgroup_rates=rates,
        most_advantaged=ordered[-1] if value > 0 else None,
        most_disadvantaged=ordered[0] if value > 0 else None,
        excluded_subgroups=tuple(excluded),
    )


def _subgroup_eodds(frame: EvaluationFrame, features, members) -> SubgroupMetricResult:
    rates: dict[str, dict[str, float]] = {}
    excluded: list[str] = []
    for key, ids in members.items():
        n1, d1 = _rate(frame, "EOpp", ids)
        n2, d2 = _rate(frame, "PE", ids)
        if d1 == 0 or d2 == 0:
            excluded.append(key)
        else:
            rates[key] = {"EOpp": _rate_pct(n1, d1), "PE": _rate_pct(n2, d2)}
    if len(rates) < 2:
        raise EmptyDenominatorError(
            f"EOdds: fewer than 2 subgroups of {features} have valid denominators")
    best = None
    for component in ("EOpp", "PE"):
        ordered = sorted(rates, key=lambda k: (rates[k][component], k))
        spread = rates[ordered[-1]][component] - rates[ordered[0]][component]
        if best is None or spread > best[0]:
            best = (spread, component, ordered[-1], ordered[0])
    spread, component, hi, lo = best
    return SubgroupMetricResult(
        metric_id="EOdds",
        features=features,
        value=spread,
        subgroup_rates=rates,
        most_advantaged=hi if spread > 0 else None,
        most_disadvantaged=lo if spread > 0 else None,
        excluded_subgroups=tuple(excluded),
        detail={"dominant_component": component},
    )


def _subgroup_csp(frame: EvaluationFrame, features, members,
                  legit_feature: str | None) -> SubgroupMetricResult:
    legit_features = [legit_feature] if legit_feature else list(frame.strata_domains)
    for f in legit_features:
        if f not in frame.strata_domains:
            raise ValidationError(f"unknown legitimate feature {f!r}")
    rates: dict[str, dict[str, float]] = {key: {} for key in members}
    never_valid = {key: True for key in members}
    best = None
    for feature in legit_features:
        values = frame.strata[feature]
        for stratum in frame.strata_domains[feature]:
            cell = f"{feature}={stratum}"
            valid_here = {}
            for key, ids in members.items():
                pool = [i for i in ids if values[i] == stratum]
                if pool:
                    num, den = _rate(frame, "DP", pool)
                    valid_here[key] = _rate_pct(num, den)
                    rates[key][cell] = valid_here[key]
                    never_valid[key] = False
            if len(valid_here) < 2:
                continue
            ordered = sorted(valid_here, key=lambda k: (valid_here[k], k))
            spread = valid_here[ordered[-1]] - valid_here[ordered[0]]
            if best is None or spread > best[0]:
                best = (spread, cell, ordered[-1], ordered[0])
    if best is None:
        raise EmptyDenominatorError(
            f"CSP: no stratum holds 2 or more subgroups of {features}")
    spread, cell, hi, lo = best
    return SubgroupMetricResult(
        metric_id="CSP",
        features=features,
        value=spread,
        subgroup_rates=rates,
        most_advantaged=hi if spread > 0 else None,
        most_disadvantaged=lo if spread > 0 else None,
        excluded_subgroups=tuple(k for k, flag in never_valid.items() if flag),
        detail={"worst_cell": cell},
    )


# --- individual scope -------------------------------------------------------

def counterfactual_fairness(model: TrainedModel, dataset: Dataset,
                            protected_feature: str) -> CounterfactualResult:
    """Share of active-fold instances whose label survives a protected flip."""
    if protected_feature not in model.encoding.derived:
        raise UnsupportedCounterfactualError(
            f"{protected_feature!r} is not a binary derived column; "
            "counterfactual flips are defined only for those")
    ids = model.active_ids(dataset)
    rows = [dataset.instance(i) for i in ids]
    X = encode_matrix(model.encoding, rows)
    col = model.encoding.column_index(protected_feature)
    X_flipped = X.copy()
    X_flipped[:, col] = 1.0 - X_flipped[:, col]
    base = predict_encoded(model, X) >= 0.5
    flipped = predict_encoded(model, X_flipped) >= 0.5
    violating = tuple(i for i, b, f in zip(ids, base, flipped) if b != f)
    n = len(ids)
    return CounterfactualResult(
        protected_feature=protected_feature,
        cfr=100.0 * (n - len(violating)) / n,
        violating_ids=violating,
        n=n,
    )


def consistency(model: TrainedModel, dataset: Dataset, k: int = 5) -> ConsistencyResult:
    """Agreement between each prediction and its k nearest neighbors' mean.

    Distances are Euclidean in the model's encoded feature space, protected
    columns included. Self is excluded; distance ties break toward the lower
    instance id.
    """
    ids = model.active_ids(dataset)
    n = len(ids)
    if n <= k:
        raise ValidationError(f"active fold has {n} instances; need more than k={k}")
    rows = [dataset.instance(i) for i in ids]
    X = encode_matrix(model.encoding, rows)
    yhat = (predict_encoded(model, X) >= 0.5).astype(np.float64)
    d2 = _kernels.pairwise_sq_dists(X)
    per_instance: dict[int, float] = {}
    neighbor_map: dict[int, tuple[int, ...]] = {}
    for i in range(n):
        order = sorted((j for j in range(n) if j != i), key=lambda j: (d2[i, j], ids[j]))
        nearest = order[:k]
        neighbor_map[ids[i]] = tuple(ids[j] for j in nearest)
        mean_nb = float(np.mean(yhat[nearest]))
        per_instance[ids[i]] = 1.0 - abs(float(yhat[i]) - mean_nb)
    score = 100.0 * (sum(per_instance.values()) / n)
    return ConsistencyResult(score=score, per_instance=per_instance,
                             neighbor_map=neighbor_map, n_neighbors=k)


# --- thresholds -------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdConfig:
    group_threshold: float = 10.0
    subgroup_threshold: float = 10.0
    individual_threshold: float = 95.0

    def __post_init__(self):
        for name in ("group_threshold", "subgroup_threshold", "individual_threshold"):
            v = getattr(self, name)
            if not (0.0 <= v <= 100.0):
                raise ValidationError(f"{name} must be within [0, 100]")

    def to_json(self) -> dict:
        return {
            "group": self.group_threshold,
            "subgroup": self.subgroup_threshold,
            "individual": self.individual_threshold,
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "ThresholdConfig":
        return cls(group_threshold=float(doc["group"]),
                   subgroup_threshold=float(doc["subgroup"]),
                   individual_threshold=float(doc["individual"]))


def verdict(result, config: ThresholdConfig) -> str:
    """'fair' or 'unfair'; the boundary value counts as fair on both scales."""
    if result.scope == "group":
        return "fair" if result.value <= config.group_threshold else "unfair"
    if result.scope == "subgroup":
        return "fair" if result.value <= config.subgroup_threshold else "unfair"
    return "fair" if result.value >= config.individual_threshold else "unfair"


def result_key(result) -> str:
    if result.scope == "group":
        return f"group/{result.metric_id}/{result.group}"
    if result.scope == "subgroup":
        return f"subgroup/{result.metric_id}/{'+'.join(result.features)}"
    qual = getattr(result, "protected_feature", "all")
    return f"individual/{result.metric_id}/{qual}"


def evaluate_thresholds(results: Iterable, config: ThresholdConfig) -> dict[str, str]:
    return {result_key(r): verdict(r, config) for r in results}


# --- explanation buckets ----------------------------------------------------

@dataclass(frozen=True)
class Bucket:
    title: str
    predicate: Mapping[str, Any]
    ids: tuple[int, ...]
    count: int


@dataclass(frozen=True)
class ExplanationBuckets:
    metric_id: str
    group: str
    buckets: tuple[Bucket, ...]
    stratum: Any = None
    legit_feature: str | None = None


_LABEL_WORD = {1: "Good", 0: "Bad"}


def explanation_buckets(frame: EvaluationFrame, metric_id: str, group: str,
                        legit_feature: str | None = None,
                        stratum: Any = None) -> ExplanationBuckets:
    """Disjoint instance buckets whose counts rebuild the metric's fractions.

    Confusion-style metrics bucket by group x truth x prediction (8 buckets).
    CSP buckets by group x stratum x prediction, optionally fixed to one
    stratum.
    """
    if group not in frame.groups:
        raise ValidationError(f"unknown protected feature {group!r}")
    if metric_id not in GROUP_METRICS:
        raise ValidationError(f"no explanation buckets for metric {metric_id!r}")
    labels = frame.group_labels[group]
    buckets: list[Bucket] = []

    if metric_id == "CSP":
        if legit_feature is None:
            raise ValidationError("CSP buckets need a legitimate feature")
        if legit_feature not in frame.strata_domains:
            raise ValidationError(f"unknown legitimate feature {legit_feature!r}")
        strata = frame.strata_domains[legit_feature]
        if stratum is not None:
            if stratum not in strata:
                raise ValidationError(f"{stratum!r} is not a stratum of {legit_feature!r}")
            strata = (stratum,)
        values = frame.strata[legit_feature]
        for protected, side in ((True, labels[0]), (False, labels[1])):
            for s in strata:
                for pred in (1, 0):
                    ids = tuple(i for i in frame.ids
                                if frame.groups[group][i] == protected
                                and values[i] == s and frame.yhat[i] == pred)
                    buckets.append(Bucket(
                        title=f"{side} · {legit_feature}={s} · predicted {_LABEL_WORD[pred]}",
                        predicate={"group": protected, "stratum": s, "yhat": pred},
                        ids=ids,
                        count=len(ids),
                    ))
        return ExplanationBuckets(metric_id=metric_id, group=group, buckets=tuple(buckets),
                                  stratum=stratum, legit_feature=legit_feature)

    for protected, side in ((True, labels[0]), (False, labels[1])):
        for truth in (1, 0):
            for pred in (1, 0):
                ids = tuple(i for i in frame.ids
                            if frame.groups[group][i] == protected
                            and frame.y[i] == truth and frame.yhat[i] == pred)
                buckets.append(Bucket(
                    title=(f"{side} · truth {_LABEL_WORD[truth]}"
                           f" · predicted {_LABEL_WORD[pred]}"),
                    predicate={"group": protected, "y": truth, "yhat": pred},
                    ids=ids,
                    count=len(ids),
                ))
    return ExplanationBuckets(metric_id=metric_id, group=group, buckets=tuple(buckets))
