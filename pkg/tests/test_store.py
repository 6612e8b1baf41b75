"""Append-only JSONL store: canonical serialization, replay, corruption."""

import json

import pytest

from fairdesk import StoreCorruptError
from fairdesk.store import JsonlStore, canonical_dumps


def test_canonical_dumps_sorted_and_compact():
    doc = {"b": 2, "a": [1, {"z": None, "y": True}], "c": "text"}
    assert canonical_dumps(doc) == '{"a":[1,{"y":true,"z":null}],"b":2,"c":"text"}'


def test_canonical_dumps_keeps_unicode():
    assert canonical_dumps({"name": "Müller"}) == '{"name":"Müller"}'


def test_append_read_round_trip(tmp_path):
    store = JsonlStore(tmp_path / "state")
    docs = [{"id": "a", "n": 1}, {"id": "b", "n": 2}, {"id": "a", "n": 3}]
    for doc in docs:
        store.append("prefs", doc)
    assert store.read_all("prefs") == docs
    assert store.read_all("missing_kind") == []


def test_file_bytes_are_canonical(tmp_path):
    store = JsonlStore(tmp_path)
    store.append("prefs", {"z": 1, "a": 2})
    raw = (tmp_path / "prefs.jsonl").read_text(encoding="utf-8")
    assert raw == '{"a":2,"z":1}\n'


def test_rewriting_same_state_is_byte_identical(tmp_path):
    docs = [{"id": "a", "v": [3, 2]}, {"id": "b", "v": []}]
    for name in ("one", "two"):
        store = JsonlStore(tmp_path / name)
        for doc in docs:
            store.append("records", doc)
    first = (tmp_path / "one" / "records.jsonl").read_bytes()
    second = (tmp_path / "two" / "records.jsonl").read_bytes()
    assert first == second


def test_blank_lines_are_ignored(tmp_path):
    path = tmp_path / "prefs.jsonl"
    path.write_text('{"id":"a"}\n\n{"id":"b"}\n', encoding="utf-8")
    assert JsonlStore(tmp_path).read_all("prefs") == [{"id": "a"}, {"id": "b"}]


def test_corrupt_line_names_file_and_line(tmp_path):
    path = tmp_path / "prefs.jsonl"
    path.write_text('{"id":"a"}\nnot json at all\n', encoding="utf-8")
    with pytest.raises(StoreCorruptError, match=r"line 2"):
        JsonlStore(tmp_path).read_all("prefs")
    try:
        JsonlStore(tmp_path).read_all("prefs")
    except StoreCorruptError as exc:
        assert "prefs.jsonl" in str(exc)


def test_truncated_tail_fails_loudly(tmp_path):
    store = JsonlStore(tmp_path)
    store.append("edits", {"id": "a", "payload": list(range(50))})
    path = tmp_path / "edits.jsonl"
    raw = path.read_bytes()
    path.write_bytes(raw[: len(raw) // 2])  # simulate a crash mid-write
    with pytest.raises(StoreCorruptError, match=r"line 1"):
        store.read_all("edits")


def test_non_object_line_rejected(tmp_path):
    (tmp_path / "prefs.jsonl").write_text('[1,2,3]\n', encoding="utf-8")
    with pytest.raises(StoreCorruptError, match=r"not a JSON object"):
        JsonlStore(tmp_path).read_all("prefs")


def test_latest_by_last_write_wins_first_appearance_order(tmp_path):
    store = JsonlStore(tmp_path)
    store.append("prefs", {"id": "b", "n": 1})
    store.append("prefs", {"id": "a", "n": 2})
    store.append("prefs", {"id": "b", "n": 3})
    latest = store.latest_by("prefs", "id")
    assert list(latest) == ["b", "a"]
    assert latest["b"] == {"id": "b", "n": 3}
    assert latest["a"] == {"id": "a", "n": 2}


def test_latest_by_missing_key_field(tmp_path):
    store = JsonlStore(tmp_path)
    store.append("prefs", {"id": "a"})
    store.append("prefs", {"other": 1})
    with pytest.raises(StoreCorruptError, match=r"missing key field"):
        store.latest_by("prefs", "id")


def test_kind_name_validation(tmp_path):
    store = JsonlStore(tmp_path)
    assert store.path("team_sessions").name == "team_sessions.jsonl"
    for bad in ("../escape", "a/b", "", "with space", "dot.dot"):
        with pytest.raises(ValueError):
            store.path(bad)


def test_directory_created_on_init(tmp_path):
    target = tmp_path / "nested" / "deeper"
    JsonlStore(target)
    assert target.is_dir()


def test_numbers_round_trip_exactly(tmp_path):
    store = JsonlStore(tmp_path)
    doc = {"f": 0.1, "i": 10**15, "neg": -3.5e-7}
    store.append("vals", doc)
    back = store.read_all("vals")[0]
    assert back == doc
    assert json.dumps(back["f"]) == "0.1"
