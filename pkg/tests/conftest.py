import json
from pathlib import Path

import pytest

from fairdesk import ModelConfig, build_frame, load_german_credit, train
from fairdesk.elicitation import PreferenceRecord

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
SYNTHETIC_CREDIT = DATA_DIR / "synthetic_credit.data"
PANEL_FIXTURE = DATA_DIR / "credit_panel_preferences.json"


@pytest.fixture(scope="session")
def credit_dataset():
    return load_german_credit(SYNTHETIC_CREDIT)


@pytest.fixture(scope="session")
def credit_model(credit_dataset):
    return train(credit_dataset, ModelConfig())


@pytest.fixture(scope="session")
def credit_frame(credit_dataset, credit_model):
    return build_frame(credit_dataset, credit_model)


@pytest.fixture(scope="session")
def panel_records():
    with open(PANEL_FIXTURE, "r", encoding="utf-8") as fh:
        return [PreferenceRecord.from_json(doc) for doc in json.load(fh)]
