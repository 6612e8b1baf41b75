"""Stakeholder preference records and team-level aggregation.

A ranking holds up to three ranks of metric ids; a rank may declare ties,
and every metric in a tied set receives that rank's full points (ties are
never split). Aggregates cover weighted rank scores, Borda tallies,
threshold statistics, category counts, preference vectors, and team
assignment by clustering plus a round-robin deal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import mean, stdev
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from .errors import ValidationError
from .metrics import ALL_METRICS, INDIVIDUAL_METRICS, ThresholdConfig

METRIC_ORDER = ("DP", "EOpp", "PE", "EOdds", "OT", "CSP", "CF", "Consistency")
RANK_WEIGHTS = (3, 2, 1)
BORDA_WEIGHTS = (2, 1, 0)
SCOPE_CHOICES = ("group", "subgroup", "context_dependent")
CONSENSUS_SCOPES = ("group", "subgroup", "individual")


def _check_metrics(ids: Iterable[str], where: str) -> frozenset[str]:
    ids = frozenset(ids)
    unknown = ids - set(ALL_METRICS)
    if unknown:
        raise ValidationError(f"{where}: unknown metric ids {sorted(unknown)}")
    return ids


@dataclass(frozen=True)
class RankedList:
    """Top-3 metric ranking; each rank is a set to allow declared ties.

    ``top1`` must be non-empty; later ranks may be empty but only from the
    tail (a filled rank never follows an empty one).
    """

    top1: frozenset[str]
    top2: frozenset[str] = frozenset()
    top3: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "top1", _check_metrics(self.top1, "top1"))
        object.__setattr__(self, "top2", _check_metrics(self.top2, "top2"))
        object.__setattr__(self, "top3", _check_metrics(self.top3, "top3"))
        if not self.top1:
            raise ValidationError("top1 must name at least one metric")
        if self.top3 and not self.top2:
            raise ValidationError("top3 cannot be filled while top2 is empty")
        seen = set()
        for rank in self.ranks():
            dup = seen & rank
            if dup:
                raise ValidationError(f"metrics {sorted(dup)} appear at two ranks")
            seen |= rank

    def ranks(self) -> tuple[frozenset[str], ...]:
        return (self.top1, self.top2, self.top3)

    def to_json(self) -> dict:
        return {
            "top1": sorted(self.top1),
            "top2": sorted(self.top2),
            "top3": sorted(self.top3),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "RankedList":
        return cls(
            top1=frozenset(doc.get("top1", ())),
            top2=frozenset(doc.get("top2", ())),
            top3=frozenset(doc.get("top3", ())),
        )


@dataclass(frozen=True)
class PreferenceRecord:
    participant_id: str
    ranking: RankedList
    thresholds: ThresholdConfig
    scope_choice: str
    feature_concern: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.participant_id:
            raise ValidationError("participant_id must be non-empty")
        if self.scope_choice not in SCOPE_CHOICES:
            raise ValidationError(
                f"scope_choice must be one of {SCOPE_CHOICES}, got {self.scope_choice!r}")
        object.__setattr__(self, "feature_concern", frozenset(self.feature_concern))

    def to_json(self) -> dict:
        return {
            "participant_id": self.participant_id,
            "ranking": self.ranking.to_json(),
            "thresholds": self.thresholds.to_json(),
            "scope_choice": self.scope_choice,
            "feature_concern": sorted(self.feature_concern),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "PreferenceRecord":
        return cls(
            participant_id=doc["participant_id"],
            ranking=RankedList.from_json(doc["ranking"]),
            thresholds=ThresholdConfig.from_json(doc["thresholds"]),
            scope_choice=doc["scope_choice"],
            feature_concern=frozenset(doc.get("feature_concern", ())),
        )


@dataclass(frozen=True)
class AggregateScore:
    scores: Mapping[str, int]
    weights: tuple[int, int, int] = RANK_WEIGHTS


@dataclass(frozen=True)
class TeamSession:
    team_id: str
    member_ids: tuple[str, ...]
    consensus: tuple[tuple[str, str], ...]
    notes: str = ""
    final: bool = False

    def __post_init__(self):
        object.__setattr__(self, "member_ids", tuple(self.member_ids))
        object.__setattr__(self, "consensus",
                           tuple((m, s) for m, s in self.consensus))
        if not self.team_id:
            raise ValidationError("team_id must be non-empty")
        if not self.member_ids:
            raise ValidationError("a team session needs at least one member")
        if not self.consensus:
            raise ValidationError("consensus must name at least one metric")
        for metric_id, scope in self.consensus:
            _check_metrics([metric_id], "consensus")
            if scope not in CONSENSUS_SCOPES:
                raise ValidationError(
                    f"consensus scope must be one of {CONSENSUS_SCOPES}, got {scope!r}")

    def to_json(self) -> dict:
        return {
            "team_id": self.team_id,
            "member_ids": list(self.member_ids),
            "consensus": [{"metric_id": m, "scope": s} for m, s in self.consensus],
            "notes": self.notes,
            "final": self.final,
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "TeamSession":
        return cls(
            team_id=doc["team_id"],
            member_ids=tuple(doc["member_ids"]),
            consensus=tuple((c["metric_id"], c["scope"]) for c in doc["consensus"]),
            notes=doc.get("notes", ""),
            final=bool(doc.get("final", False)),
        )


def validate_members(session: TeamSession, known_participants: Iterable[str]) -> None:
    unknown = set(session.member_ids) - set(known_participants)
    if unknown:
        raise ValidationError(f"unknown team members {sorted(unknown)}")


# --- aggregates -------------------------------------------------------------

def weighted_rank_scores(records: Sequence[PreferenceRecord]) -> AggregateScore:
    """Total 3/2/1 points per metric; every metric in a tied set scores fully."""
    if not records:
        raise ValidationError("need at least one preference record")
    scores = {m: 0 for m in METRIC_ORDER}
    for record in records:
        for weight, rank in zip(RANK_WEIGHTS, record.ranking.ranks()):
            for metric_id in rank:
                scores[metric_id] += weight
    return AggregateScore(scores=scores)


def borda(records: Sequence[PreferenceRecord]) -> list[tuple[int, tuple[str, ...]]]:
    """Truncated-ballot Borda (2/1/0 within a ballot), final ties kept as ties.

    Returns tally groups ordered best first: (points, metric ids at that
    tally). Unranked metrics contribute zero and appear in the tail group.
    """
    if not records:
        raise ValidationError("need at least one preference record")
    tally = {m: 0 for m in METRIC_ORDER}
    for record in records:
        for weight, rank in zip(BORDA_WEIGHTS, record.ranking.ranks()):
            for metric_id in rank:
                tally[metric_id] += weight
    groups: dict[int, list[str]] = {}
    for metric_id in METRIC_ORDER:
        groups.setdefault(tally[metric_id], []).append(metric_id)
    return [(points, tuple(groups[points])) for points in sorted(groups, reverse=True)]


def threshold_stats(records: Sequence[PreferenceRecord]) -> dict[str, dict[str, float | None]]:
    """Mean and sample (n-1) standard deviation of each threshold category."""
    if not records:
        raise ValidationError("need at least one preference record")
    out = {}
    for category, attr in (("group", "group_threshold"),
                           ("subgroup", "subgroup_threshold"),
                           ("individual", "individual_threshold")):
        values = [getattr(r.thresholds, attr) for r in records]
        out[category] = {
            "mean": mean(values),
            "sd": stdev(values) if len(values) >= 2 else None,
        }
    return out


def top1_category_counts(records: Sequence[PreferenceRecord]) -> dict[str, int]:
    """Participants by favored category: individual wins any Top-1 mention,
    otherwise the participant's declared group-vs-subgroup scope counts.
    Context-dependent scopes fall outside all three buckets."""
    if not records:
        raise ValidationError("need at least one preference record")
    counts = {"individual": 0, "subgroup": 0, "group": 0}
    for record in records:
        if record.ranking.top1 & set(INDIVIDUAL_METRICS):
            counts["individual"] += 1
        elif record.scope_choice in ("group", "subgroup"):
            counts[record.scope_choice] += 1
    return counts


def top1_metric_counts(records: Sequence[PreferenceRecord]) -> dict[str, int]:
    """How many participants put each metric in Top-1; ties count for each."""
    counts = {m: 0 for m in METRIC_ORDER}
    for record in records:
        for metric_id in record.ranking.top1:
            counts[metric_id] += 1
    return {m: c for m, c in counts.items() if c > 0}


def preference_vector(record: PreferenceRecord) -> np.ndarray:
    """Fixed-order 8-dimensional encoding with rank weights as magnitudes."""
    vec = np.zeros(len(METRIC_ORDER), dtype=np.float64)
    index = {m: i for i, m in enumerate(METRIC_ORDER)}
    for weight, rank in zip(RANK_WEIGHTS, record.ranking.ranks()):
        for metric_id in rank:
            vec[index[metric_id]] = float(weight)
    return vec


def assign_teams(records: Sequence[PreferenceRecord], team_count: int) -> dict[str, int]:
    """Spread like-minded participants apart.

    Preference vectors are clustered (agglomerative, cosine distance,
    average linkage) into ``team_count`` clusters; members are then dealt to
    teams round-robin with one pointer running across clusters, so each
    cluster's members land on different teams and team sizes stay within 1.
    """
    if team_count < 2:
        raise ValidationError("team_count must be >= 2")
    if len(records) < team_count:
        raise ValidationError(f"need at least {team_count} records for {team_count} teams")
    ids = [r.participant_id for r in records]
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate participant ids")
    vectors = np.stack([preference_vector(r) for r in records])
    merge_tree = linkage(vectors, method="average", metric="cosine")
    labels = fcluster(merge_tree, t=team_count, criterion="maxclust")
    order: list[int] = []
    for label in labels:
        if label not in order:
            order.append(label)
    assignment: dict[str, int] = {}
    pointer = 0
    for label in order:
        for pid, member_label in zip(ids, labels):
            if member_label == label:
                assignment[pid] = pointer
                pointer = (pointer + 1) % team_count
    return assignment
