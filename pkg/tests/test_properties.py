"""Property-based invariants over generated frames, ballots, and documents."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairdesk import metrics as M
from fairdesk import whatif as W
from fairdesk.elicitation import (
    METRIC_ORDER,
    PreferenceRecord,
    RankedList,
    borda,
    threshold_stats,
    weighted_rank_scores,
)
from fairdesk.errors import EmptyDenominatorError
from fairdesk.metrics import ThresholdConfig
from fairdesk.store import canonical_dumps

from helpers import make_frame

BITS = st.integers(0, 1)
CONFUSION_METRICS = ("DP", "EOpp", "PE", "OT")


@st.composite
def frames(draw, with_strata=False):
    n = draw(st.integers(2, 12))
    rows = []
    for i in range(1, n + 1):
        row = {"id": i, "y": draw(BITS), "yhat": draw(BITS),
               "grp": draw(st.booleans())}
        if with_strata:
            row["stratum"] = draw(st.sampled_from(("s1", "s2", "s3")))
        rows.append(row)
    return make_frame(rows, strata_domain=("s1", "s2", "s3") if with_strata else None)


def _swap_sides(frame):
    flipped = {i: not frame.groups["grp"][i] for i in frame.ids}
    return M.EvaluationFrame(
        ids=frame.ids, y=frame.y, yhat=frame.yhat, groups={"grp": flipped},
        strata=frame.strata, group_labels=frame.group_labels,
        strata_domains=frame.strata_domains)


@settings(max_examples=80, deadline=None)
@given(frames())
def test_group_values_are_bounded_absolute_differences(frame):
    for metric_id in CONFUSION_METRICS:
        try:
            res = M.group_metric(frame, metric_id, "grp")
        except EmptyDenominatorError:
            continue
        assert 0.0 <= res.value <= 100.0
        assert 0.0 <= res.rate_protected <= 100.0
        assert 0.0 <= res.rate_unprotected <= 100.0
        assert res.value == pytest.approx(
            abs(res.rate_protected - res.rate_unprotected), abs=1e-9)
        if res.rate_protected == res.rate_unprotected:
            assert res.advantaged_group is None
        else:
            assert res.advantaged_group in frame.group_labels["grp"]


@settings(max_examples=80, deadline=None)
@given(frames())
def test_group_values_survive_side_swap(frame):
    swapped = _swap_sides(frame)
    for metric_id in CONFUSION_METRICS + ("EOdds",):
        try:
            base = M.group_metric(frame, metric_id, "grp")
        except EmptyDenominatorError:
            with pytest.raises(EmptyDenominatorError):
                M.group_metric(swapped, metric_id, "grp")
            continue
        other = M.group_metric(swapped, metric_id, "grp")
        assert other.value == base.value
        assert other.rate_protected == base.rate_unprotected
        assert other.rate_unprotected == base.rate_protected


@settings(max_examples=80, deadline=None)
@given(frames())
def test_eodds_is_the_worse_component(frame):
    try:
        res = M.group_metric(frame, "EOdds", "grp")
    except EmptyDenominatorError:
        return
    assert res.components is not None
    assert res.value == max(res.components)


@settings(max_examples=80, deadline=None)
@given(frames())
def test_perfect_classifier_has_no_error_rate_gap(frame):
    perfect = frame.with_overrides(yhat=dict(frame.y))
    for metric_id in ("EOpp", "PE", "EOdds", "OT"):
        try:
            res = M.group_metric(perfect, metric_id, "grp")
        except EmptyDenominatorError:
            continue
        assert res.value == 0.0


@settings(max_examples=60, deadline=None)
@given(frames(with_strata=True), st.permutations(range(12)))
def test_row_order_never_changes_group_values(frame, order):
    rows = [{"id": i, "y": frame.y[i], "yhat": frame.yhat[i],
             "grp": frame.groups["grp"][i], "stratum": frame.strata["cond"][i]}
            for i in frame.ids]
    shuffled_rows = [rows[k % len(rows)] for k in order if k < len(rows)]
    seen = set()
    unique_rows = [r for r in shuffled_rows
                   if r["id"] not in seen and not seen.add(r["id"])]
    shuffled = make_frame(unique_rows, strata_domain=frame.strata_domains["cond"])
    for metric_id in M.GROUP_METRICS:
        try:
            base = M.group_metric(frame, metric_id, "grp")
        except EmptyDenominatorError:
            with pytest.raises(EmptyDenominatorError):
                M.group_metric(shuffled, metric_id, "grp")
            continue
        assert M.group_metric(shuffled, metric_id, "grp") == base


@settings(max_examples=60, deadline=None)
@given(frames(), st.data())
def test_overlay_edits_then_reverts_leave_nothing(frame, data):
    overlay = W.EditOverlay(session_id="s")
    touched = []
    for _ in range(data.draw(st.integers(1, 8))):
        i = data.draw(st.sampled_from(frame.ids))
        target = data.draw(st.sampled_from(W.TARGETS))
        value = data.draw(BITS)
        overlay = W.apply_edit(overlay, frame, i, target, value)
        touched.append((i, target))
    for i, target in touched:
        base = frame.y[i] if target == "ground_truth" else frame.yhat[i]
        overlay = W.apply_edit(overlay, frame, i, target, base)
    assert overlay.edits == {}
    restored = W.overlaid_frame(overlay, frame)
    assert restored.y == frame.y and restored.yhat == frame.yhat


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 100), st.floats(0, 100), st.floats(0, 100))
def test_verdicts_are_monotone_in_the_threshold(value, low, high):
    lo, hi = sorted((low, high))
    res = M.GroupMetricResult(metric_id="DP", group="grp", value=value,
                              rate_protected=0.0, rate_unprotected=0.0,
                              advantaged_group=None)
    if M.verdict(res, ThresholdConfig(group_threshold=lo)) == "fair":
        assert M.verdict(res, ThresholdConfig(group_threshold=hi)) == "fair"
    ind = M.CounterfactualResult(protected_feature="grp", cfr=value,
                                 violating_ids=(), n=3)
    if M.verdict(ind, ThresholdConfig(individual_threshold=hi)) == "fair":
        assert M.verdict(ind, ThresholdConfig(individual_threshold=lo)) == "fair"
    at_boundary = M.GroupMetricResult(metric_id="DP", group="grp", value=value,
                                      rate_protected=0.0, rate_unprotected=0.0,
                                      advantaged_group=None)
    assert M.verdict(at_boundary, ThresholdConfig(group_threshold=value)) == "fair"


@st.composite
def ranked_lists(draw):
    chosen = draw(st.lists(st.sampled_from(METRIC_ORDER), unique=True,
                           min_size=1, max_size=6))
    k1 = draw(st.integers(1, len(chosen)))
    rest = chosen[k1:]
    k2 = draw(st.integers(0, len(rest)))
    top2, top3 = rest[:k2], rest[k2:]
    if not top2 and top3:
        top2, top3 = top3, []
    return RankedList(frozenset(chosen[:k1]), frozenset(top2), frozenset(top3))


@st.composite
def record_batches(draw, min_size=1, prefix="P"):
    rankings = draw(st.lists(ranked_lists(), min_size=min_size, max_size=8))
    return [
        PreferenceRecord(
            participant_id=f"{prefix}{k}",
            ranking=ranking,
            thresholds=ThresholdConfig(
                draw(st.floats(0, 100)), draw(st.floats(0, 100)),
                draw(st.floats(0, 100))),
            scope_choice=draw(st.sampled_from(("group", "subgroup",
                                               "context_dependent"))),
        )
        for k, ranking in enumerate(rankings)
    ]


@settings(max_examples=60, deadline=None)
@given(record_batches(prefix="A"), record_batches(prefix="B"))
def test_weighted_scores_add_over_batches(batch_a, batch_b):
    combined = weighted_rank_scores(batch_a + batch_b).scores
    a = weighted_rank_scores(batch_a).scores
    b = weighted_rank_scores(batch_b).scores
    assert combined == {m: a[m] + b[m] for m in METRIC_ORDER}


@settings(max_examples=60, deadline=None)
@given(record_batches())
def test_borda_conserves_total_points(records):
    groups = borda(records)
    total = sum(points * len(metrics) for points, metrics in groups)
    expected = sum(2 * len(r.ranking.top1) + len(r.ranking.top2) for r in records)
    assert total == expected
    points_seen = [points for points, _ in groups]
    assert points_seen == sorted(points_seen, reverse=True)
    listed = [m for _, metrics in groups for m in metrics]
    assert sorted(listed) == sorted(METRIC_ORDER)


@settings(max_examples=40, deadline=None)
@given(record_batches(min_size=2), st.randoms(use_true_random=False))
def test_aggregation_is_anonymous(records, rng):
    shuffled = list(records)
    rng.shuffle(shuffled)
    assert weighted_rank_scores(shuffled).scores == weighted_rank_scores(records).scores
    assert borda(shuffled) == borda(records)
    base, other = threshold_stats(records), threshold_stats(shuffled)
    for category in ("group", "subgroup", "individual"):
        assert other[category]["mean"] == pytest.approx(base[category]["mean"],
                                                        abs=1e-9)
        if base[category]["sd"] is None:
            assert other[category]["sd"] is None
        else:
            assert other[category]["sd"] == pytest.approx(base[category]["sd"],
                                                          abs=1e-9)


JSON_SCALARS = st.one_of(
    st.none(), st.booleans(), st.integers(-10**6, 10**6),
    st.floats(allow_nan=False, allow_infinity=False), st.text(max_size=8))
JSON_VALUES = st.recursive(
    JSON_SCALARS,
    lambda children: st.one_of(
        st.lists(children, max_size=4),
        st.dictionaries(st.text(max_size=6), children, max_size=4)),
    max_leaves=12)
JSON_DOCS = st.dictionaries(st.text(max_size=6), JSON_VALUES, max_size=6)


@settings(max_examples=100, deadline=None)
@given(JSON_DOCS)
def test_canonical_dumps_round_trips_and_is_stable(doc):
    text = canonical_dumps(doc)
    back = json.loads(text)
    assert back == doc
    assert canonical_dumps(back) == text
    assert "\n" not in text
