"""Session-scoped label and prediction overlays with live recomputation.

An overlay stores only deltas from the base frame: writing a value equal to
the original removes the entry, so an empty overlay means "no change". Group
and subgroup metrics recompute against the overlaid frame; individual
metrics are out of scope for overlays because they depend on the model's
encoded feature space, not on recorded labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Mapping, Sequence

from .errors import ValidationError
from .metrics import (
    GROUP_METRICS,
    EvaluationFrame,
    group_metric,
    subgroup_metric,
)

TARGETS = ("ground_truth", "prediction")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class EditOverlay:
    """Delta map of a session's label/prediction edits over the active fold."""

    session_id: str
    edits: Mapping[tuple[int, str], int] = field(default_factory=dict)
    created_at: str = field(default_factory=_now)
    updated_at: str = field(default_factory=_now)

    def edit_list(self) -> list[dict]:
        return [
            {"instance_id": i, "target": target, "new_value": value}
            for (i, target), value in sorted(self.edits.items())
        ]

    def to_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "edits": self.edit_list(),
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "EditOverlay":
        edits = {
            (int(e["instance_id"]), e["target"]): int(e["new_value"])
            for e in doc.get("edits", [])
        }
        return cls(
            session_id=doc["session_id"],
            edits=edits,
            created_at=doc.get("created_at", _now()),
            updated_at=doc.get("updated_at", _now()),
        )


def _base_value(frame: EvaluationFrame, instance_id: int, target: str) -> int:
    if target == "ground_truth":
        return frame.y[instance_id]
    return frame.yhat[instance_id]


def apply_edit(overlay: EditOverlay, frame: EvaluationFrame, instance_id: int,
               target: str, new_value: int) -> EditOverlay:
    """Upsert one edit; writing the original value back removes the delta."""
    if target not in TARGETS:
        raise ValidationError(f"edit target must be one of {TARGETS}, got {target!r}")
    if new_value not in (0, 1):
        raise ValidationError(f"edited value must be binary, got {new_value!r}")
    if instance_id not in frame.y:
        raise ValidationError(f"instance {instance_id} is not in the active fold")
    edits = dict(overlay.edits)
    if new_value == _base_value(frame, instance_id, target):
        edits.pop((instance_id, target), None)
    else:
        edits[(instance_id, target)] = new_value
    return EditOverlay(
        session_id=overlay.session_id,
        edits=edits,
        created_at=overlay.created_at,
        updated_at=_now(),
    )


def clear_edits(overlay: EditOverlay) -> EditOverlay:
    return EditOverlay(session_id=overlay.session_id, edits={},
                       created_at=overlay.created_at, updated_at=_now())


def overlaid_frame(overlay: EditOverlay, frame: EvaluationFrame) -> EvaluationFrame:
    """The base frame with the overlay's deltas written in."""
    y = {i: v for (i, target), v in overlay.edits.items() if target == "ground_truth"}
    yhat = {i: v for (i, target), v in overlay.edits.items() if target == "prediction"}
    return frame.with_overrides(y=y, yhat=yhat)


def recompute(overlay: EditOverlay, frame: EvaluationFrame, metric_ids: Sequence[str],
              group: str | None = None, features: Sequence[str] | None = None,
              legit_feature: str | None = None) -> list:
    """Group/subgroup metrics on the overlaid frame; base frame untouched."""
    if (group is None) == (features is None):
        raise ValidationError("pass exactly one of a protected feature or a feature set")
    bad = [m for m in metric_ids if m not in GROUP_METRICS]
    if bad:
        raise ValidationError(f"overlay recomputation covers group metrics only, not {bad}")
    edited = overlaid_frame(overlay, frame)
    if group is not None:
        return [group_metric(edited, m, group, legit_feature=legit_feature)
                for m in metric_ids]
    return [subgroup_metric(edited, m, features, legit_feature=legit_feature)
            for m in metric_ids]


def hypothetical_accuracy(overlay: EditOverlay, frame: EvaluationFrame) -> dict:
    """Accuracy of overlaid predictions against overlaid labels, flagged as such."""
    edited = overlaid_frame(overlay, frame)
    ids = edited.ids
    correct = sum(1 for i in ids if edited.y[i] == edited.yhat[i])
    good = [i for i in ids if edited.y[i] == 1]
    bad = [i for i in ids if edited.y[i] == 0]
    return {
        "overall_accuracy": correct / len(ids),
        "accuracy_good": (sum(1 for i in good if edited.yhat[i] == 1) / len(good)) if good else None,
        "accuracy_bad": (sum(1 for i in bad if edited.yhat[i] == 0) / len(bad)) if bad else None,
        "test_size": len(ids),
        "hypothetical": bool(overlay.edits),
    }
