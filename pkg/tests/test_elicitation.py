"""Preference records, rank aggregation, voting, and team formation."""

import random

import numpy as np
import pytest

from fairdesk import ThresholdConfig, ValidationError
from fairdesk.elicitation import (
    BORDA_WEIGHTS,
    METRIC_ORDER,
    PreferenceRecord,
    RankedList,
    TeamSession,
    assign_teams,
    borda,
    preference_vector,
    threshold_stats,
    top1_category_counts,
    top1_metric_counts,
    validate_members,
    weighted_rank_scores,
)

import oracles


def rec(pid, top1, top2=(), top3=(), g=10.0, s=10.0, i=95.0, scope="group"):
    return PreferenceRecord(
        participant_id=pid,
        ranking=RankedList(frozenset(top1), frozenset(top2), frozenset(top3)),
        thresholds=ThresholdConfig(g, s, i),
        scope_choice=scope,
    )


# --- record validation ------------------------------------------------------

def test_ranked_list_validation():
    with pytest.raises(ValidationError):
        RankedList(frozenset())  # empty top1
    with pytest.raises(ValidationError):
        RankedList(frozenset({"DP"}), frozenset({"DP"}))  # metric at two ranks
    with pytest.raises(ValidationError):
        RankedList(frozenset({"DP"}), frozenset(), frozenset({"PE"}))  # gap
    with pytest.raises(ValidationError):
        RankedList(frozenset({"NotAMetric"}))
    r = RankedList(frozenset({"CF", "Consistency"}), frozenset({"EOpp"}))
    assert r.ranks() == (frozenset({"CF", "Consistency"}), frozenset({"EOpp"}), frozenset())


def test_preference_record_validation():
    with pytest.raises(ValidationError):
        rec("", ["DP"])
    with pytest.raises(ValidationError):
        rec("P", ["DP"], scope="individual")  # not an Ask scope choice
    with pytest.raises(ValidationError):
        rec("P", ["DP"], g=105.0)  # out-of-range threshold
    r = rec("P", ["DP"], scope="context_dependent")
    assert r.scope_choice == "context_dependent"


def test_record_json_round_trip():
    r = rec("P9", ["CF", "Consistency"], ["EOpp"], ["DP"], g=15.0, s=5.0, i=99.0,
            scope="subgroup")
    doc = r.to_json()
    assert doc["ranking"]["top1"] == ["CF", "Consistency"]  # sorted for stable dumps
    assert PreferenceRecord.from_json(doc) == r


def test_panel_fixture_first_rows_stored_verbatim(panel_records):
    by_id = {r.participant_id: r for r in panel_records}
    p1 = by_id["P1"]
    assert p1.ranking == RankedList(frozenset({"CSP"}), frozenset({"EOpp"}), frozenset({"CF"}))
    assert p1.thresholds == ThresholdConfig(30.0, 30.0, 70.0)
    assert p1.scope_choice == "subgroup"
    p2 = by_id["P2"]
    assert p2.ranking == RankedList(frozenset({"EOdds"}), frozenset({"CSP"}), frozenset({"OT"}))


# --- weighted rank scores ---------------------------------------------------

def test_weighted_singleton():
    agg = weighted_rank_scores([rec("P", ["DP"])])
    assert agg.scores["DP"] == 3
    assert sum(agg.scores.values()) == 3
    assert agg.weights == (3, 2, 1)


def test_weighted_tied_top1_scores_full_points():
    agg = weighted_rank_scores([rec("P", ["CF", "Consistency"], ["EOpp"])])
    assert agg.scores["CF"] == 3
    assert agg.scores["Consistency"] == 3
    assert agg.scores["EOpp"] == 2


def test_weighted_requires_records():
    with pytest.raises(ValidationError):
        weighted_rank_scores([])


def test_weighted_linearity():
    batch_a = [rec("A1", ["DP"], ["EOpp"]), rec("A2", ["CSP"], ["CF"], ["OT"])]
    batch_b = [rec("B1", ["CSP"], ["PE"]), rec("B2", ["EOdds"])]
    combined = weighted_rank_scores(batch_a + batch_b).scores
    a = weighted_rank_scores(batch_a).scores
    b = weighted_rank_scores(batch_b).scores
    assert combined == {m: a[m] + b[m] for m in METRIC_ORDER}


def test_weighted_matches_oracle_on_random_ballots():
    rng = random.Random(5)
    for _ in range(30):
        records = []
        for k in range(rng.randint(1, 10)):
            pool = list(METRIC_ORDER)
            rng.shuffle(pool)
            sizes = [rng.randint(1, 2) for _ in range(3)]
            top1 = pool[:sizes[0]]
            top2 = pool[sizes[0]:sizes[0] + sizes[1]]
            top3 = pool[sizes[0] + sizes[1]:sum(sizes)]
            records.append(rec(f"P{k}", top1, top2, top3))
        ballots = [(set(r.ranking.top1), set(r.ranking.top2), set(r.ranking.top3))
                   for r in records]
        expect = oracles.weighted_totals(ballots, METRIC_ORDER)
        assert weighted_rank_scores(records).scores == expect


# --- borda ------------------------------------------------------------------

def test_borda_single_ballot():
    groups = borda([rec("P", ["DP"], ["EOpp"], ["PE"])])
    assert groups[0] == (2, ("DP",))
    assert groups[1] == (1, ("EOpp",))
    tail_points, tail_metrics = groups[2]
    assert tail_points == 0
    assert "PE" in tail_metrics  # rank 3 scores 0 under 2/1/0
    assert set(tail_metrics) == set(METRIC_ORDER) - {"DP", "EOpp"}


def test_borda_opposite_ballots_tie():
    groups = borda([rec("P1", ["DP"], ["EOpp"], ["PE"]),
                    rec("P2", ["PE"], ["EOpp"], ["DP"])])
    assert groups[0] == (2, ("DP", "EOpp", "PE"))
    assert groups[1][0] == 0


def test_borda_three_ballots_match_hand_count():
    records = [
        rec("P1", ["CSP"], ["CF"], ["DP"]),
        rec("P2", ["CF", "Consistency"], ["CSP"]),
        rec("P3", ["EOpp"], ["CSP"], ["CF"]),
    ]
    ballots = [(set(r.ranking.top1), set(r.ranking.top2), set(r.ranking.top3))
               for r in records]
    expect = oracles.borda_tallies(ballots, METRIC_ORDER)
    for points, metrics in borda(records):
        for m in metrics:
            assert expect[m] == points
    # groups ordered best-first and exhaustive
    listed = [m for _, metrics in borda(records) for m in metrics]
    assert sorted(listed) == sorted(METRIC_ORDER)


def test_borda_weight_scaling_preserves_order():
    records = [
        rec("P1", ["CSP"], ["CF"], ["DP"]),
        rec("P2", ["CF"], ["CSP"], ["EOpp"]),
        rec("P3", ["CSP"], ["EOpp"], ["CF"]),
    ]
    base_groups = [metrics for _, metrics in borda(records)]
    scale = 3
    tally = {m: 0 for m in METRIC_ORDER}
    for r in records:
        for weight, rank in zip([w * scale for w in BORDA_WEIGHTS], r.ranking.ranks()):
            for m in rank:
                tally[m] += weight
    scaled_groups = {}
    for m in METRIC_ORDER:
        scaled_groups.setdefault(tally[m], []).append(m)
    ordered = [tuple(scaled_groups[p]) for p in sorted(scaled_groups, reverse=True)]
    assert ordered == base_groups


# --- threshold stats --------------------------------------------------------

def test_threshold_stats_two_equal_values():
    stats = threshold_stats([rec("A", ["DP"], g=20.0), rec("B", ["DP"], g=20.0)])
    assert stats["group"]["mean"] == 20.0
    assert stats["group"]["sd"] == 0.0


def test_threshold_stats_single_record_has_no_sd():
    stats = threshold_stats([rec("A", ["DP"], g=12.0, s=7.0, i=88.0)])
    assert stats["group"] == {"mean": 12.0, "sd": None}
    assert stats["subgroup"]["mean"] == 7.0
    assert stats["individual"]["mean"] == 88.0


def test_threshold_stats_match_oracle():
    rng = random.Random(11)
    for _ in range(20):
        records = [rec(f"P{k}", ["DP"], g=rng.uniform(0, 100), s=rng.uniform(0, 100),
                       i=rng.uniform(0, 100)) for k in range(rng.randint(2, 12))]
        stats = threshold_stats(records)
        for category, attr in (("group", "group_threshold"),
                               ("subgroup", "subgroup_threshold"),
                               ("individual", "individual_threshold")):
            mean, sd = oracles.mean_sd([getattr(r.thresholds, attr) for r in records])
            assert abs(stats[category]["mean"] - mean) <= 1e-9
            assert abs(stats[category]["sd"] - sd) <= 1e-9


# --- category and metric counts ---------------------------------------------

def test_top1_category_singleton_group_scope():
    counts = top1_category_counts([rec("P", ["CSP"], scope="group")])
    assert counts == {"individual": 0, "subgroup": 0, "group": 1}


def test_top1_individual_wins_over_scope():
    counts = top1_category_counts([rec("P", ["CF"], scope="group")])
    assert counts == {"individual": 1, "subgroup": 0, "group": 0}


def test_context_dependent_outside_all_buckets():
    counts = top1_category_counts([rec("P", ["CSP"], scope="context_dependent")])
    assert counts == {"individual": 0, "subgroup": 0, "group": 0}


def test_top1_metric_counts_ties_count_for_both():
    counts = top1_metric_counts([rec("P", ["CF", "Consistency"]), rec("Q", ["CF"])])
    assert counts == {"CF": 2, "Consistency": 1}


# --- preference vectors -----------------------------------------------------

def test_preference_vector_fixed_order():
    # rank weights land at each metric's fixed slot: EOdds idx 3, OT idx 4, CSP idx 5
    vec = preference_vector(rec("P2", ["EOdds"], ["CSP"], ["OT"]))
    assert vec.tolist() == [0, 0, 0, 3, 1, 2, 0, 0]
    assert METRIC_ORDER == ("DP", "EOpp", "PE", "EOdds", "OT", "CSP", "CF", "Consistency")


def test_preference_vector_tied_top1():
    vec = preference_vector(rec("P", ["CF", "Consistency"]))
    assert vec.tolist() == [0, 0, 0, 0, 0, 0, 3, 3]


def test_preference_vector_never_all_zero():
    rng = random.Random(3)
    for _ in range(20):
        pool = list(METRIC_ORDER)
        rng.shuffle(pool)
        vec = preference_vector(rec("P", pool[:rng.randint(1, 3)]))
        assert np.any(vec > 0)


# --- team assignment --------------------------------------------------------

def test_identical_preferences_land_on_different_teams():
    records = [rec("A", ["CSP"], ["CF"]), rec("B", ["CSP"], ["CF"])]
    teams = assign_teams(records, 2)
    assert teams["A"] != teams["B"]


def test_three_obvious_clusters_spread_over_three_teams():
    records = [
        rec("A1", ["DP"], ["EOpp"]), rec("A2", ["DP"], ["EOpp"]),
        rec("B1", ["CF"], ["Consistency"]), rec("B2", ["CF"], ["Consistency"]),
        rec("C1", ["CSP"], ["OT"]), rec("C2", ["CSP"], ["OT"]),
    ]
    teams = assign_teams(records, 3)
    sizes = [list(teams.values()).count(t) for t in range(3)]
    assert sorted(sizes) == [2, 2, 2]
    for pair in (("A1", "A2"), ("B1", "B2"), ("C1", "C2")):
        assert teams[pair[0]] != teams[pair[1]]
    # each team holds one member of each cluster
    for t in range(3):
        members = {pid for pid, team in teams.items() if team == t}
        assert len({pid[0] for pid in members}) == 2


def test_panel_forms_three_even_teams(panel_records):
    teams = assign_teams(panel_records, 3)
    assert len(teams) == 18
    sizes = [list(teams.values()).count(t) for t in range(3)]
    assert sizes == [6, 6, 6]
    assert assign_teams(panel_records, 3) == teams  # deterministic


def test_team_sizes_stay_balanced_on_random_inputs():
    rng = random.Random(21)
    for _ in range(15):
        n = rng.randint(4, 19)
        team_count = rng.randint(2, min(5, n))
        records = []
        for k in range(n):
            pool = list(METRIC_ORDER)
            rng.shuffle(pool)
            cut1 = rng.randint(1, 2)
            records.append(rec(f"P{k}", pool[:cut1], pool[cut1:cut1 + 1],
                               pool[cut1 + 1:cut1 + 2]))
        teams = assign_teams(records, team_count)
        sizes = [list(teams.values()).count(t) for t in range(team_count)]
        assert max(sizes) - min(sizes) <= 1
        assert set(teams) == {r.participant_id for r in records}


def test_assign_teams_validation():
    records = [rec("A", ["DP"]), rec("B", ["PE"])]
    with pytest.raises(ValidationError):
        assign_teams(records, 1)
    with pytest.raises(ValidationError):
        assign_teams(records, 3)
    with pytest.raises(ValidationError):
        assign_teams([rec("A", ["DP"]), rec("A", ["PE"])], 2)


# --- anonymity --------------------------------------------------------------

def test_aggregates_ignore_record_order(panel_records):
    shuffled = list(panel_records)
    random.Random(9).shuffle(shuffled)
    assert weighted_rank_scores(shuffled).scores == weighted_rank_scores(panel_records).scores
    assert borda(shuffled) == borda(panel_records)
    assert threshold_stats(shuffled) == threshold_stats(panel_records)
    assert top1_category_counts(shuffled) == top1_category_counts(panel_records)


# --- team sessions ----------------------------------------------------------

def test_team_session_validation_and_round_trip():
    session = TeamSession(
        team_id="team-1",
        member_ids=("P1", "P2"),
        consensus=(("CSP", "subgroup"), ("CF", "individual")),
        notes="priority order as negotiated",
    )
    assert TeamSession.from_json(session.to_json()) == session
    with pytest.raises(ValidationError):
        TeamSession(team_id="", member_ids=("P1",), consensus=(("DP", "group"),))
    with pytest.raises(ValidationError):
        TeamSession(team_id="t", member_ids=(), consensus=(("DP", "group"),))
    with pytest.raises(ValidationError):
        TeamSession(team_id="t", member_ids=("P1",), consensus=())
    with pytest.raises(ValidationError):
        TeamSession(team_id="t", member_ids=("P1",), consensus=(("XX", "group"),))
    with pytest.raises(ValidationError):
        TeamSession(team_id="t", member_ids=("P1",), consensus=(("DP", "cosmic"),))
    validate_members(session, ["P1", "P2", "P3"])
    with pytest.raises(ValidationError):
        validate_members(session, ["P1"])
