"""HTTP/JSON facade over the dataset, model, metrics, overlays, and records.

The app is a pure function of its three artifacts (dataset JSON, model JSON,
store directory): every response is deterministic given store state, and a
restart replays the store files to bit-identical API bodies. Sessions are
addressed by an opaque ``?session=`` token ("default" when absent); only
mutations are persisted, so an unused session costs nothing.

Percentages cross this boundary rounded to one decimal; aggregate threshold
statistics use two decimals. Full precision stays internal.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Any

from fastapi import Body, FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import metrics as M
from . import whatif as W
from .dataset import Dataset, Filter, LABEL_NAMES, histogram, load_dataset, query_view
from .elicitation import (
    PreferenceRecord,
    TeamSession,
    assign_teams,
    borda,
    threshold_stats,
    top1_category_counts,
    top1_metric_counts,
    validate_members,
    weighted_rank_scores,
)
from .errors import (
    ArtifactError,
    EmptyDenominatorError,
    FairdeskError,
    StoreCorruptError,
    UnknownFeatureError,
    ValidationError,
)
from .model import TrainedModel, evaluate, feature_weights, load_model, predict_many
from .store import JsonlStore


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def pct(value: float) -> float:
    return round(value, 1)


@dataclass
class Session:
    session_id: str
    thresholds: M.ThresholdConfig = field(default_factory=M.ThresholdConfig)
    participant_id: str | None = None
    created_at: str = field(default_factory=_now)

    def to_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "participant_id": self.participant_id,
            "thresholds": self.thresholds.to_json(),
            "created_at": self.created_at,
        }


class ServiceState:
    """Artifacts plus replayed session state; owned by one app instance."""

    def __init__(self, dataset: Dataset, model: TrainedModel, store: JsonlStore):
        _check_artifacts(dataset, model)
        self.dataset = dataset
        self.model = model
        self.store = store
        self.predictions = predict_many(model, dataset)
        self.base_frame = M.build_frame(dataset, model, self.predictions)
        self.summary = evaluate(model, dataset)
        self._individual_cache: dict[str, Any] = {}
        self.sessions: dict[str, Session] = {}
        self.overlays: dict[str, W.EditOverlay] = {}
        self._replay()

    def _replay(self) -> None:
        for doc in self.store.latest_by("sessions", "session_id").values():
            self.sessions[doc["session_id"]] = Session(
                session_id=doc["session_id"],
                thresholds=M.ThresholdConfig.from_json(doc["thresholds"]),
                participant_id=doc.get("participant_id"),
                created_at=doc["created_at"],
            )
        for doc in self.store.latest_by("overlays", "session_id").values():
            self.overlays[doc["session_id"]] = W.EditOverlay.from_json(doc)

    def session(self, session_id: str) -> Session:
        if session_id not in self.sessions:
            self.sessions[session_id] = Session(session_id=session_id)
        return self.sessions[session_id]

    def overlay(self, session_id: str) -> W.EditOverlay:
        if session_id not in self.overlays:
            self.overlays[session_id] = W.EditOverlay(session_id=session_id)
        return self.overlays[session_id]

    def frame_for(self, session_id: str) -> M.EvaluationFrame:
        overlay = self.overlays.get(session_id)
        if overlay is None or not overlay.edits:
            return self.base_frame
        return W.overlaid_frame(overlay, self.base_frame)

    def save_session(self, session: Session) -> None:
        self.sessions[session.session_id] = session
        self.store.append("sessions", session.to_json())

    def save_overlay(self, overlay: W.EditOverlay) -> None:
        self.overlays[overlay.session_id] = overlay
        self.store.append("overlays", overlay.to_json())

    def preference_records(self) -> list[PreferenceRecord]:
        latest = self.store.latest_by("preferences", "participant_id")
        return [PreferenceRecord.from_json(doc) for doc in latest.values()]

    def consensus_records(self) -> dict[str, TeamSession]:
        latest = self.store.latest_by("consensus", "team_id")
        return {k: TeamSession.from_json(doc) for k, doc in latest.items()}

    def individual_results(self) -> list:
        if "results" not in self._individual_cache:
            results = [
                M.counterfactual_fairness(self.model, self.dataset, spec.name)
                for spec in self.dataset.protected_specs
            ]
            results.append(M.consistency(self.model, self.dataset))
            self._individual_cache["results"] = results
        return self._individual_cache["results"]


def _check_artifacts(dataset: Dataset, model: TrainedModel) -> None:
    derived = tuple(spec.name for spec in dataset.protected_specs)
    if tuple(model.encoding.derived) != derived:
        raise ArtifactError(
            "model/dataset mismatch: derived protected columns differ "
            f"({model.encoding.derived} vs {derived})")
    ids = {inst.id for inst in dataset.instances}
    if set(model.fold_assignment) != ids:
        raise ArtifactError("model/dataset mismatch: fold assignment does not cover the dataset")
    for feature, codes in model.encoding.onehot.items():
        spec = dataset.feature(feature)
        if tuple(codes) != tuple(spec.categories):
            raise ArtifactError(f"model/dataset mismatch: category vocabulary for {feature!r}")


# --- result serialization ---------------------------------------------------

def group_result_json(res: M.GroupMetricResult, config: M.ThresholdConfig) -> dict:
    breakdown: dict[str, Any] = {
        "rate_protected_pct": pct(res.rate_protected),
        "rate_unprotected_pct": pct(res.rate_unprotected),
        "advantaged_group": res.advantaged_group,
    }
    if res.components is not None:
        breakdown["components"] = {
            "EOpp": pct(res.components[0]),
            "PE": pct(res.components[1]),
        }
    if res.strata_breakdown is not None:
        breakdown["strata"] = {str(k): pct(v) for k, v in res.strata_breakdown.items()}
    return {
        "metric_id": res.metric_id,
        "scope": "group",
        "feature": res.group,
        "value_pct": pct(res.value),
        "breakdown": breakdown,
        "excluded": [str(s) for s in res.excluded_strata],
        "verdict": M.verdict(res, config),
    }


def subgroup_result_json(res: M.SubgroupMetricResult, config: M.ThresholdConfig) -> dict:
    def rate_json(r):
        if isinstance(r, dict):
            return {str(k): pct(v) for k, v in r.items()}
        return pct(r)

    breakdown: dict[str, Any] = {
        "subgroup_rates": {k: rate_json(v) for k, v in res.subgroup_rates.items()},
        "most_advantaged": res.most_advantaged,
        "most_disadvantaged": res.most_disadvantaged,
    }
    if res.detail:
        breakdown.update(res.detail)
    return {
        "metric_id": res.metric_id,
        "scope": "subgroup",
        "features": list(res.features),
        "value_pct": pct(res.value),
        "breakdown": breakdown,
        "excluded": list(res.excluded_subgroups),
        "verdict": M.verdict(res, config),
    }


def individual_result_json(res, config: M.ThresholdConfig) -> dict:
    if isinstance(res, M.CounterfactualResult):
        return {
            "metric_id": "CF",
            "scope": "individual",
            "feature": res.protected_feature,
            "value_pct": pct(res.cfr),
            "breakdown": {
                "violating_ids": sorted(res.violating_ids),
                "n": res.n,
            },
            "excluded": [],
            "verdict": M.verdict(res, config),
        }
    return {
        "metric_id": "Consistency",
        "scope": "individual",
        "feature": None,
        "value_pct": pct(res.score),
        "breakdown": {
            "n_neighbors": res.n_neighbors,
            "per_instance": {str(i): round(v, 4) for i, v in sorted(res.per_instance.items())},
            "neighbor_map": {str(i): list(ns) for i, ns in sorted(res.neighbor_map.items())},
        },
        "excluded": [],
        "verdict": M.verdict(res, config),
    }


# --- request parsing --------------------------------------------------------

def _parse_scalar(token: str):
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        return token


def parse_filters(raw: list[str]) -> list[Filter]:
    out = []
    for item in raw:
        parts = item.split(":")
        if len(parts) == 2:
            feature, value = parts
            out.append(Filter(feature=feature, op="eq", value=_parse_scalar(value)))
        elif len(parts) == 3:
            feature, op, value = parts
            out.append(Filter(feature=feature, op=op, value=_parse_scalar(value)))
        else:
            raise ValidationError(
                f"filter {item!r} must look like feature:value or feature:op:value")
    return out


def _parse_sort(raw: str | None) -> tuple[str, str] | None:
    if raw is None:
        return None
    if ":" in raw:
        feature, direction = raw.split(":", 1)
        return feature, direction
    return raw, "asc"


# --- app factory ------------------------------------------------------------

def create_app(dataset_path, model_path, store_dir) -> FastAPI:
    dataset = load_dataset(dataset_path)
    model = load_model(model_path)
    state = ServiceState(dataset, model, JsonlStore(store_dir))
    return build_app(state)


def build_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="fairdesk", docs_url=None, redoc_url=None)
    app.state.fairdesk = state
    dataset = state.dataset
    model = state.model

    def error_response(status: int, code: str, detail: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"code": code, "detail": detail})

    @app.exception_handler(FairdeskError)
    async def _fairdesk_error(request: Request, exc: FairdeskError):
        status = 400
        if isinstance(exc, UnknownFeatureError):
            status = 404
        elif isinstance(exc, EmptyDenominatorError):
            status = 422
        elif isinstance(exc, (StoreCorruptError, ArtifactError)):
            status = 500
        return error_response(status, exc.code, str(exc))

    @app.exception_handler(RequestValidationError)
    async def _request_error(request: Request, exc: RequestValidationError):
        return error_response(400, "validation_error", str(exc.errors()))

    def session_of(request: Request) -> Session:
        return state.session(request.query_params.get("session", "default"))

    # -- dataset ------------------------------------------------------------

    @app.get("/api/dataset/schema")
    def get_schema():
        return {
            "features": [
                {
                    "name": s.name,
                    "kind": s.kind,
                    "categories": list(s.categories),
                    "display_labels": dict(s.display_labels),
                }
                for s in dataset.schema
            ],
            "protected": [s.to_json() for s in dataset.protected_specs],
            "legitimate": [s.to_json() for s in dataset.legitimate_specs],
            "size": len(dataset.instances),
            "active_fold_size": len(state.base_frame.ids),
        }

    @app.get("/api/instances")
    def get_instances(request: Request,
                      filter: list[str] = Query(default=[]),
                      sort: str | None = None,
                      limit: int = Query(default=50, ge=1, le=1000),
                      offset: int = Query(default=0, ge=0)):
        session = session_of(request)
        frame = state.frame_for(session.session_id)
        overlay = state.overlays.get(session.session_id)
        edited = overlay.edits if overlay else {}
        rows = query_view(dataset, parse_filters(filter), _parse_sort(sort),
                          ids=state.base_frame.ids)
        total = len(rows)
        page = rows[offset:offset + limit]
        proba = {r.instance_id: r.probability_good for r in state.predictions}
        body = []
        for inst in page:
            body.append({
                "id": inst.id,
                "values": dict(inst.values),
                "groups": dict(inst.groups),
                "ground_truth": LABEL_NAMES[frame.y[inst.id]],
                "predicted": LABEL_NAMES[frame.yhat[inst.id]],
                "probability_good": round(proba[inst.id], 4),
                "ground_truth_overridden": (inst.id, "ground_truth") in edited,
                "prediction_overridden": (inst.id, "prediction") in edited,
            })
        return {"total": total, "offset": offset, "limit": limit, "rows": body}

    @app.get("/api/dataset/histogram")
    def get_histogram(request: Request, feature: str,
                      target: str = "ground_truth"):
        session = session_of(request)
        frame = state.frame_for(session.session_id)
        predictions = {i: frame.yhat[i] for i in frame.ids} if target == "prediction" else None
        buckets = histogram(dataset, feature, target=target,
                            predictions=predictions, ids=state.base_frame.ids)
        return {
            "feature": feature,
            "target": target,
            "buckets": [
                {"label": b.label, "positive": b.positive, "negative": b.negative,
                 "lo": b.lo, "hi": b.hi}
                for b in buckets
            ],
        }

    # -- model --------------------------------------------------------------

    @app.get("/api/model/summary")
    def get_summary(request: Request):
        session = session_of(request)
        overlay = state.overlays.get(session.session_id)
        if overlay and overlay.edits:
            hypo = W.hypothetical_accuracy(overlay, state.base_frame)
            return {
                "overall_accuracy_pct": pct(100 * hypo["overall_accuracy"]),
                "accuracy_good_pct": None if hypo["accuracy_good"] is None
                else pct(100 * hypo["accuracy_good"]),
                "accuracy_bad_pct": None if hypo["accuracy_bad"] is None
                else pct(100 * hypo["accuracy_bad"]),
                "test_size": hypo["test_size"],
                "hypothetical": True,
            }
        s = state.summary
        return {
            "overall_accuracy_pct": pct(100 * s.overall_accuracy),
            "accuracy_good_pct": None if s.accuracy_good is None else pct(100 * s.accuracy_good),
            "accuracy_bad_pct": None if s.accuracy_bad is None else pct(100 * s.accuracy_bad),
            "test_size": s.test_size,
            "hypothetical": False,
        }

    @app.get("/api/model/weights")
    def get_weights():
        return {
            "bias": model.bias,
            "weights": [
                {"feature": name, "weight": weight, "sign": sign}
                for name, weight, sign in feature_weights(model, dataset)
            ],
        }

    # -- metrics ------------------------------------------------------------

    @app.get("/api/metrics/group")
    def get_group_metrics(request: Request, feature: str,
                          condition: str | None = None):
        session = session_of(request)
        frame = state.frame_for(session.session_id)
        results = []
        for metric_id in M.GROUP_METRICS:
            legit = condition if metric_id == "CSP" else None
            results.append(group_result_json(
                M.group_metric(frame, metric_id, feature, legit_feature=legit),
                session.thresholds))
        return {"feature": feature, "results": results}

    @app.get("/api/metrics/subgroup")
    def get_subgroup_metrics(request: Request, features: str,
                             metric: str | None = None,
                             condition: str | None = None):
        session = session_of(request)
        frame = state.frame_for(session.session_id)
        feature_set = tuple(f for f in features.split(",") if f)
        wanted = [metric] if metric else list(M.GROUP_METRICS)
        results = [
            subgroup_result_json(
                M.subgroup_metric(frame, m, feature_set, legit_feature=condition),
                session.thresholds)
            for m in wanted
        ]
        return {"features": list(feature_set), "results": results}

    @app.get("/api/metrics/individual")
    def get_individual_metrics(request: Request):
        session = session_of(request)
        return {
            "results": [
                individual_result_json(res, session.thresholds)
                for res in state.individual_results()
            ],
        }

    @app.get("/api/metrics/explain")
    def get_explanation(request: Request, metric: str, feature: str,
                        condition: str | None = None,
                        stratum: str | None = None):
        session = session_of(request)
        frame = state.frame_for(session.session_id)
        legit = condition
        if metric == "CSP" and legit is None:
            legit = dataset.legitimate_specs[0].feature
        res = M.explanation_buckets(frame, metric, feature,
                                    legit_feature=legit, stratum=stratum)
        return {
            "metric_id": res.metric_id,
            "feature": res.group,
            "legit_feature": res.legit_feature,
            "stratum": res.stratum,
            "buckets": [
                {
                    "title": b.title,
                    "predicate": dict(b.predicate),
                    "ids": list(b.ids),
                    "count": b.count,
                }
                for b in res.buckets
            ],
        }

    # -- what-if ------------------------------------------------------------

    @app.get("/api/whatif/edits")
    def get_edits(request: Request):
        session = session_of(request)
        return state.overlay(session.session_id).to_json()

    @app.post("/api/whatif/edits")
    def post_edit(request: Request, payload: dict = Body(...)):
        session = session_of(request)
        for key in ("instance_id", "target", "new_value"):
            if key not in payload:
                raise ValidationError(f"edit body must carry {key!r}")
        value = payload["new_value"]
        if isinstance(value, str):
            reverse = {v: k for k, v in LABEL_NAMES.items()}
            if value not in reverse:
                raise ValidationError(f"new_value must be binary or one of {sorted(reverse)}")
            value = reverse[value]
        overlay = W.apply_edit(state.overlay(session.session_id), state.base_frame,
                               int(payload["instance_id"]), payload["target"], value)
        state.save_overlay(overlay)
        return overlay.to_json()

    @app.delete("/api/whatif/edits")
    def delete_edits(request: Request, instance_id: int | None = None,
                     target: str | None = None):
        session = session_of(request)
        overlay = state.overlay(session.session_id)
        if instance_id is None and target is None:
            overlay = W.clear_edits(overlay)
        else:
            if instance_id is None or target is None:
                raise ValidationError("removing one edit needs both instance_id and target")
            base = (state.base_frame.y if target == "ground_truth" else state.base_frame.yhat)
            if target not in W.TARGETS:
                raise ValidationError(f"edit target must be one of {W.TARGETS}")
            if instance_id not in base:
                raise ValidationError(f"instance {instance_id} is not in the active fold")
            overlay = W.apply_edit(overlay, state.base_frame, instance_id, target,
                                   base[instance_id])
        state.save_overlay(overlay)
        return overlay.to_json()

    # -- session ------------------------------------------------------------

    @app.get("/api/session")
    def get_session(request: Request):
        return session_of(request).to_json()

    @app.put("/api/session/thresholds")
    def put_thresholds(request: Request, payload: dict = Body(...)):
        session = session_of(request)
        config = M.ThresholdConfig.from_json(payload)
        session = replace(session, thresholds=config)
        state.save_session(session)
        return session.to_json()

    # -- elicitation --------------------------------------------------------

    @app.post("/api/preferences")
    def post_preference(payload: dict = Body(...)):
        record = PreferenceRecord.from_json(payload)
        state.store.append("preferences", record.to_json())
        return record.to_json()

    @app.get("/api/preferences")
    def get_preferences():
        return {"records": [r.to_json() for r in state.preference_records()]}

    @app.get("/api/preferences/aggregate")
    def get_aggregate():
        records = state.preference_records()
        if not records:
            raise ValidationError("no preference records stored yet")
        stats = threshold_stats(records)
        return {
            "n": len(records),
            "weighted_scores": weighted_rank_scores(records).scores,
            "borda": [
                {"points": points, "metrics": list(group)}
                for points, group in borda(records)
            ],
            "threshold_stats": {
                category: {
                    "mean": round(block["mean"], 2),
                    "sd": None if block["sd"] is None else round(block["sd"], 2),
                }
                for category, block in stats.items()
            },
            "category_counts": top1_category_counts(records),
            "top1_metric_counts": top1_metric_counts(records),
        }

    @app.post("/api/teams/assign")
    def post_assign(payload: dict = Body(...)):
        team_count = payload.get("team_count")
        if not isinstance(team_count, int):
            raise ValidationError("team_count must be an integer")
        records = state.preference_records()
        assignment = assign_teams(records, team_count)
        teams: list[list[str]] = [[] for _ in range(team_count)]
        for pid in (r.participant_id for r in records):
            teams[assignment[pid]].append(pid)
        return {"assignments": assignment, "teams": teams}

    # -- consensus ----------------------------------------------------------

    @app.post("/api/consensus")
    def post_consensus(payload: dict = Body(...)):
        session = TeamSession.from_json(payload)
        known = {r.participant_id for r in state.preference_records()}
        validate_members(session, known)
        existing = state.consensus_records().get(session.team_id)
        if existing is not None and existing.final:
            raise ValidationError(
                f"team session {session.team_id!r} is finalized and cannot change")
        state.store.append("consensus", session.to_json())
        return session.to_json()

    @app.get("/api/consensus")
    def get_consensus(team_id: str | None = None):
        records = state.consensus_records()
        if team_id is not None:
            if team_id not in records:
                raise UnknownFeatureError(f"no consensus stored for team {team_id!r}")
            return records[team_id].to_json()
        return {"teams": [records[k].to_json() for k in sorted(records)]}

    return app
