"""Builders for hand-sized frames, datasets, and models used across tests."""

import random

from fairdesk.dataset import (
    Dataset,
    FeatureSpec,
    Instance,
    LegitimateFeatureSpec,
    ProtectedGroupSpec,
    ValuePredicate,
)
from fairdesk.metrics import EvaluationFrame
from fairdesk.model import Encoding, ModelConfig, TrainedModel


def make_frame(rows, strata_domain=None, group_names=("grp",)):
    """Build an EvaluationFrame from dict rows.

    Each row: {"id", "y", "yhat", <group name>: bool..., "stratum": value}.
    """
    ids = tuple(r["id"] for r in rows)
    y = {r["id"]: r["y"] for r in rows}
    yhat = {r["id"]: r["yhat"] for r in rows}
    groups = {g: {r["id"]: bool(r[g]) for r in rows} for g in group_names}
    strata = {}
    domains = {}
    if any("stratum" in r for r in rows):
        strata["cond"] = {r["id"]: r["stratum"] for r in rows}
        domains["cond"] = tuple(strata_domain or sorted({r["stratum"] for r in rows}))
    return EvaluationFrame(
        ids=ids,
        y=y,
        yhat=yhat,
        groups=groups,
        strata=strata,
        group_labels={g: (f"{g}+", f"{g}-") for g in group_names},
        strata_domains=domains,
    )


def random_frame(seed, max_n=12, n_groups=1, with_strata=False):
    """Random small frame; plain `random` so it shares nothing with the code under test."""
    rng = random.Random(seed)
    n = rng.randint(2, max_n)
    group_names = tuple(f"g{k}" for k in range(n_groups))
    domain = ("s1", "s2", "s3")[: rng.randint(2, 3)]
    rows = []
    for i in range(1, n + 1):
        row = {"id": i, "y": rng.randint(0, 1), "yhat": rng.randint(0, 1)}
        for g in group_names:
            row[g] = rng.random() < 0.5
        if with_strata:
            row["stratum"] = rng.choice(domain)
        rows.append(row)
    return make_frame(rows, strata_domain=domain if with_strata else None,
                      group_names=group_names)


TOY_SCHEMA = (
    FeatureSpec("x1", "numeric"),
    FeatureSpec("x2", "numeric"),
    FeatureSpec("g", "categorical", ("GA", "GB"), {"GA": "side a", "GB": "side b"}),
    FeatureSpec("cond", "categorical", ("C1", "C2"), {"C1": "low", "C2": "high"}),
)

TOY_PROTECTED = (
    ProtectedGroupSpec("grp", "g", ValuePredicate("eq", "GA"), "side a", "side b"),
)

TOY_LEGITIMATE = (LegitimateFeatureSpec("cond", ("C1", "C2")),)


def toy_dataset(rows):
    """rows: list of (x1, x2, g, cond, label). Ids are 1-based row order."""
    instances = []
    for i, (x1, x2, g, cond, label) in enumerate(rows, start=1):
        values = {"x1": x1, "x2": x2, "g": g, "cond": cond}
        instances.append(Instance(
            id=i,
            values=values,
            ground_truth=label,
            groups={"grp": g == "GA"},
        ))
    return Dataset(
        schema=TOY_SCHEMA,
        instances=tuple(instances),
        protected_specs=TOY_PROTECTED,
        legitimate_specs=TOY_LEGITIMATE,
    )


def toy_model(dataset, weights, bias=0.0, active_ids=None):
    """Hand-built model over the toy schema; all listed ids sit in the active fold.

    ``weights`` keys follow the encoded columns: x1, x2, cond=C1, cond=C2, grp.
    """
    encoding = Encoding(
        columns=("x1", "x2", "cond=C1", "cond=C2", "grp"),
        onehot={"cond": ("C1", "C2")},
        scalers={"x1": (0.0, 1.0), "x2": (0.0, 1.0)},
        derived=("grp",),
    )
    active = set(active_ids) if active_ids is not None else {i.id for i in dataset.instances}
    fold_assignment = {inst.id: (0 if inst.id in active else 1)
                       for inst in dataset.instances}
    full = {c: 0.0 for c in encoding.columns}
    full.update(weights)
    return TrainedModel(
        config=ModelConfig(folds=2),
        encoding=encoding,
        weights=full,
        bias=bias,
        fold_assignment=fold_assignment,
        active_fold=0,
    )
