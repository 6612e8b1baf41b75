"""Overlay semantics: delta storage, recomputation purity, session isolation."""

import random

import pytest

from fairdesk import EmptyDenominatorError, ValidationError
from fairdesk.metrics import demographic_parity, equal_opportunity, group_metric, subgroup_metric
from fairdesk.whatif import (
    EditOverlay,
    apply_edit,
    clear_edits,
    hypothetical_accuracy,
    overlaid_frame,
    recompute,
)

from helpers import make_frame, random_frame


def base_frame():
    rows = [
        {"id": 1, "y": 1, "yhat": 1, "grp": True},
        {"id": 2, "y": 1, "yhat": 0, "grp": True},
        {"id": 3, "y": 0, "yhat": 0, "grp": True},
        {"id": 4, "y": 0, "yhat": 0, "grp": True},
        {"id": 5, "y": 1, "yhat": 1, "grp": False},
        {"id": 6, "y": 1, "yhat": 1, "grp": False},
        {"id": 7, "y": 0, "yhat": 1, "grp": False},
        {"id": 8, "y": 0, "yhat": 0, "grp": False},
    ]
    return make_frame(rows)


def test_edit_then_revert_cancels():
    frame = base_frame()
    overlay = EditOverlay(session_id="s")
    overlay = apply_edit(overlay, frame, 2, "prediction", 1)
    assert overlay.edits == {(2, "prediction"): 1}
    overlay = apply_edit(overlay, frame, 2, "prediction", 0)
    assert overlay.edits == {}


def test_last_write_wins_single_entry():
    frame = base_frame()
    overlay = EditOverlay(session_id="s")
    overlay = apply_edit(overlay, frame, 3, "ground_truth", 1)
    overlay = apply_edit(overlay, frame, 3, "ground_truth", 1)  # idempotent
    assert overlay.edits == {(3, "ground_truth"): 1}
    assert len(overlay.edit_list()) == 1


def test_edit_validation():
    frame = base_frame()
    overlay = EditOverlay(session_id="s")
    with pytest.raises(ValidationError):
        apply_edit(overlay, frame, 99, "prediction", 1)  # outside the active fold
    with pytest.raises(ValidationError):
        apply_edit(overlay, frame, 1, "probability", 1)
    with pytest.raises(ValidationError):
        apply_edit(overlay, frame, 1, "prediction", 2)


def test_empty_overlay_is_identity():
    frame = base_frame()
    overlay = EditOverlay(session_id="s")
    assert overlaid_frame(overlay, frame).yhat == frame.yhat
    static = demographic_parity(frame, "grp")
    [dynamic] = recompute(overlay, frame, ["DP"], group="grp")
    assert dynamic == static


def test_single_flip_moves_dp_by_one_over_group_size():
    frame = base_frame()  # protected DP 1/4, unprotected 3/4
    overlay = apply_edit(EditOverlay(session_id="s"), frame, 2, "prediction", 1)
    before = demographic_parity(frame, "grp")
    [after] = recompute(overlay, frame, ["DP"], group="grp")
    assert before.value == 50.0
    assert after.value == before.value - 100.0 / 4
    assert after.rate_protected == before.rate_protected + 100.0 / 4


def test_edits_surface_metric_errors():
    frame = base_frame()
    overlay = EditOverlay(session_id="s")
    # rewrite every protected truly-Good row to truly-Bad
    overlay = apply_edit(overlay, frame, 1, "ground_truth", 0)
    overlay = apply_edit(overlay, frame, 2, "ground_truth", 0)
    with pytest.raises(EmptyDenominatorError):
        recompute(overlay, frame, ["EOpp"], group="grp")


def test_recompute_argument_validation():
    frame = base_frame()
    overlay = EditOverlay(session_id="s")
    with pytest.raises(ValidationError):
        recompute(overlay, frame, ["DP"])  # neither group nor features
    with pytest.raises(ValidationError):
        recompute(overlay, frame, ["DP"], group="grp", features=("grp", "x"))
    with pytest.raises(ValidationError):
        recompute(overlay, frame, ["CF"], group="grp")


def test_base_frame_is_never_mutated():
    frame = base_frame()
    snapshot_y = dict(frame.y)
    snapshot_yhat = dict(frame.yhat)
    overlay = apply_edit(EditOverlay(session_id="s"), frame, 1, "prediction", 0)
    overlay = apply_edit(overlay, frame, 3, "ground_truth", 1)
    recompute(overlay, frame, ["DP", "EOpp"], group="grp")
    hypothetical_accuracy(overlay, frame)
    assert frame.y == snapshot_y
    assert frame.yhat == snapshot_yhat


def test_randomized_sequences_match_rebuilt_frames():
    matched = 0
    for seed in range(100):
        rng = random.Random(1000 + seed)
        frame = random_frame(seed, max_n=10, n_groups=2, with_strata=True)
        overlay = EditOverlay(session_id=f"s{seed}")
        for _ in range(rng.randint(0, 12)):
            i = rng.choice(frame.ids)
            target = rng.choice(("ground_truth", "prediction"))
            overlay = apply_edit(overlay, frame, i, target, rng.randint(0, 1))
        # oracle: rebuild a frame from scratch with the edits written in
        y = dict(frame.y)
        yhat = dict(frame.yhat)
        for (i, target), v in overlay.edits.items():
            (y if target == "ground_truth" else yhat)[i] = v
        rebuilt = type(frame)(frame.ids, y, yhat, frame.groups, frame.strata,
                              frame.group_labels, frame.strata_domains)
        for metric in ("DP", "EOpp", "PE", "EOdds", "OT", "CSP"):
            try:
                expect = group_metric(rebuilt, metric, "g0")
            except EmptyDenominatorError:
                with pytest.raises(EmptyDenominatorError):
                    recompute(overlay, frame, [metric], group="g0")
                continue
            [got] = recompute(overlay, frame, [metric], group="g0")
            assert got == expect
            matched += 1
        try:
            expect = subgroup_metric(rebuilt, "DP", ("g0", "g1"))
        except EmptyDenominatorError:
            continue
        [got] = recompute(overlay, frame, ["DP"], features=("g0", "g1"))
        assert got == expect
    assert matched >= 100


def test_session_isolation():
    frame = base_frame()
    a = apply_edit(EditOverlay(session_id="a"), frame, 1, "prediction", 0)
    b = EditOverlay(session_id="b")
    assert b.edits == {}
    [res_b] = recompute(b, frame, ["DP"], group="grp")
    assert res_b == demographic_parity(frame, "grp")
    [res_a] = recompute(a, frame, ["DP"], group="grp")
    assert res_a != res_b


def test_clear_edits_resets():
    frame = base_frame()
    overlay = apply_edit(EditOverlay(session_id="s"), frame, 1, "prediction", 0)
    overlay = apply_edit(overlay, frame, 2, "ground_truth", 0)
    cleared = clear_edits(overlay)
    assert cleared.edits == {}
    assert cleared.session_id == "s"
    assert cleared.created_at == overlay.created_at


def test_hypothetical_accuracy_flags_and_counts():
    frame = base_frame()  # base: 6 of 8 agree
    overlay = EditOverlay(session_id="s")
    base = hypothetical_accuracy(overlay, frame)
    assert base["hypothetical"] is False
    assert base["overall_accuracy"] == 0.75
    assert base["test_size"] == 8

    overlay = apply_edit(overlay, frame, 2, "prediction", 1)
    edited = hypothetical_accuracy(overlay, frame)
    assert edited["hypothetical"] is True
    assert edited["overall_accuracy"] == 0.875
    assert edited["accuracy_good"] == 1.0
    assert edited["accuracy_bad"] == 0.75


def test_hypothetical_accuracy_empty_class_is_none():
    frame = base_frame()
    overlay = EditOverlay(session_id="s")
    for i in (3, 4, 7, 8):
        overlay = apply_edit(overlay, frame, i, "ground_truth", 1)
    res = hypothetical_accuracy(overlay, frame)
    assert res["accuracy_bad"] is None


def test_overlay_json_round_trip():
    frame = base_frame()
    overlay = apply_edit(EditOverlay(session_id="s"), frame, 4, "prediction", 1)
    overlay = apply_edit(overlay, frame, 1, "ground_truth", 0)
    doc = overlay.to_json()
    assert doc["edits"] == [
        {"instance_id": 1, "target": "ground_truth", "new_value": 0},
        {"instance_id": 4, "target": "prediction", "new_value": 1},
    ]
    restored = EditOverlay.from_json(doc)
    assert restored.edits == overlay.edits
    assert restored.session_id == "s"
    assert restored.created_at == overlay.created_at
