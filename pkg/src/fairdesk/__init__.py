"""Fairness auditing and preference-elicitation toolkit for credit models."""

from ._kernels import ACTIVE_LANE, HAS_NUMBA
from .dataset import (
    BAD,
    GOOD,
    LABEL_NAMES,
    Dataset,
    FeatureSpec,
    Filter,
    Instance,
    LegitimateFeatureSpec,
    ProtectedGroupSpec,
    ValuePredicate,
    histogram,
    load_dataset,
    load_german_credit,
    partition,
    query_view,
    save_dataset,
)
from .errors import (
    ArtifactError,
    DataFormatError,
    EmptyDenominatorError,
    FairdeskError,
    StoreCorruptError,
    StoreError,
    UnknownFeatureError,
    UnsupportedCounterfactualError,
    ValidationError,
)
from .elicitation import (
    PreferenceRecord,
    RankedList,
    TeamSession,
    assign_teams,
    borda,
    preference_vector,
    threshold_stats,
    top1_category_counts,
    top1_metric_counts,
    weighted_rank_scores,
)
from .metrics import (
    ALL_METRICS,
    GROUP_METRICS,
    INDIVIDUAL_METRICS,
    ConsistencyResult,
    CounterfactualResult,
    EvaluationFrame,
    GroupMetricResult,
    SubgroupMetricResult,
    ThresholdConfig,
    build_frame,
    consistency,
    counterfactual_fairness,
    demographic_parity,
    equal_opportunity,
    equalized_odds,
    evaluate_thresholds,
    explanation_buckets,
    group_metric,
    outcome_test,
    predictive_equality,
    subgroup_metric,
    conditional_statistical_parity,
)
from .model import (
    ModelConfig,
    PerformanceSummary,
    PredictionRecord,
    TrainedModel,
    evaluate,
    feature_weights,
    load_model,
    predict,
    predict_many,
    save_model,
    train,
)
from .service import create_app
from .whatif import EditOverlay, apply_edit, hypothetical_accuracy, overlaid_frame, recompute

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_LANE",
    "ALL_METRICS",
    "ArtifactError",
    "BAD",
    "ConsistencyResult",
    "CounterfactualResult",
    "DataFormatError",
    "Dataset",
    "EditOverlay",
    "EmptyDenominatorError",
    "EvaluationFrame",
    "FairdeskError",
    "FeatureSpec",
    "Filter",
    "GOOD",
    "GROUP_METRICS",
    "GroupMetricResult",
    "HAS_NUMBA",
    "INDIVIDUAL_METRICS",
    "Instance",
    "LABEL_NAMES",
    "LegitimateFeatureSpec",
    "ModelConfig",
    "PerformanceSummary",
    "PredictionRecord",
    "PreferenceRecord",
    "ProtectedGroupSpec",
    "RankedList",
    "StoreCorruptError",
    "StoreError",
    "SubgroupMetricResult",
    "TeamSession",
    "ThresholdConfig",
    "TrainedModel",
    "UnknownFeatureError",
    "UnsupportedCounterfactualError",
    "ValidationError",
    "ValuePredicate",
    "apply_edit",
    "assign_teams",
    "borda",
    "build_frame",
    "conditional_statistical_parity",
    "consistency",
    "counterfactual_fairness",
    "create_app",
    "demographic_parity",
    "equal_opportunity",
    "equalized_odds",
    "evaluate",
    "evaluate_thresholds",
    "explanation_buckets",
    "feature_weights",
    "group_metric",
    "histogram",
    "hypothetical_accuracy",
    "load_dataset",
    "load_german_credit",
    "load_model",
    "outcome_test",
    "overlaid_frame",
    "partition",
    "predict",
    "predict_many",
    "predictive_equality",
    "preference_vector",
    "query_view",
    "recompute",
    "save_dataset",
    "save_model",
    "subgroup_metric",
    "threshold_stats",
    "top1_category_counts",
    "top1_metric_counts",
    "train",
    "weighted_rank_scores",
]
