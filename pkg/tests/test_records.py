import json

import pytest

from stampforge.records import (
    BasisCache,
    BasisRecord,
    RecordError,
    cache_path,
    load_elements,
    record_from_basis,
    timestamp,
)
from stampforge.sumsets import IntegerBasis


def rec(elements, n=8, h=2, verified=True, kind="exact_witness"):
    return BasisRecord(kind, {"n": n, "h": h}, list(elements), h, verified)


def test_timestamp_is_pinned(monkeypatch):
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
    assert timestamp() == "1970-01-01T00:00:00Z"
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "86400")
    assert timestamp() == "1970-01-02T00:00:00Z"


@pytest.mark.parametrize("kind", ["trivial", "lift", "jia_shen", "searched", "exact_witness"])
def test_json_round_trip_byte_identical(kind):
    r = BasisRecord(kind, {"n": 8, "h": 2, "seed": 1, "b": 7}, [4, 1, 3], 2, True,
                    size_ledger={"size": 3, "cyclic_target_met": True})
    text = r.to_json()
    assert BasisRecord.from_json(text).to_json() == text
    assert json.loads(text)["size"] == 3
    assert json.loads(text)["elements"] == [1, 3, 4]


def test_bad_records():
    with pytest.raises(RecordError):
        BasisRecord("nonsense", {}, [1], 2, True)
    with pytest.raises(RecordError):
        BasisRecord.from_json("{")
    d = json.loads(rec([1, 3, 4]).to_json())
    d["size"] = 7
    with pytest.raises(RecordError):
        BasisRecord.from_dict(d)
    del d["elements"]
    with pytest.raises(RecordError):
        BasisRecord.from_dict(d)


def test_load_elements_formats():
    assert load_elements("[1, 3, 4]") == ([1, 3, 4], None)
    assert load_elements("1 3,4\n") == ([1, 3, 4], None)
    els, r = load_elements(rec([1, 3, 4]).to_json())
    assert els == [1, 3, 4] and r.n == 8
    for bad in ["", "  ", "[]", '{"a": 1}', "1 x", "[1.5]", "[true]"]:
        with pytest.raises(RecordError):
            load_elements(bad)


def test_recheck():
    assert rec([1, 3, 4]).recheck()
    assert not rec([1, 2]).recheck()
    assert rec([-1, 1, 3], n=4, h=2).recheck()


def test_cache_put_get(tmp_path):
    c = BasisCache(tmp_path / "c.json")
    r = rec([1, 3, 4])
    assert c.put(r)
    assert c.get(8, 2).to_json() == r.to_json()
    assert c.get(9, 2) is None


def test_cache_rejects_unverified_and_false_claims(tmp_path):
    c = BasisCache(tmp_path / "c.json")
    with pytest.raises(RecordError):
        c.put(rec([1, 3, 4], verified=False))
    with pytest.raises(RecordError):
        c.put(rec([1, 2]))
    assert not (tmp_path / "c.json").exists()


def test_cache_keeps_smaller(tmp_path):
    c = BasisCache(tmp_path / "c.json")
    assert c.put(rec([1, 3, 4]))
    before = (tmp_path / "c.json").read_bytes()
    assert not c.put(rec([1, 2, 3, 4], kind="searched"))
    assert not c.put(rec([1, 3, 4], kind="searched"))  # equal size is not strictly smaller
    assert (tmp_path / "c.json").read_bytes() == before
    c2 = BasisCache(tmp_path / "d.json")
    assert c2.put(rec([1, 2, 3, 4], kind="searched"))
    assert c2.put(rec([1, 3, 4]))
    assert c2.get(8, 2).size == 3


def test_corrupt_cache_is_backed_up(tmp_path, caplog):
    p = tmp_path / "c.json"
    p.write_text("not json")
    c = BasisCache(p)
    assert c.entries() == {}
    assert (tmp_path / "c.json.corrupt").read_text() == "not json"
    assert "corrupt" in caplog.text
    assert c.put(rec([1, 3, 4]))
    assert json.loads(p.read_text())["version"] == 1


def test_cache_path_env(monkeypatch, tmp_path):
    monkeypatch.setenv("STAMPFORGE_CACHE", str(tmp_path / "x.json"))
    assert cache_path() == tmp_path / "x.json"
    assert cache_path(tmp_path / "y.json") == tmp_path / "y.json"
    monkeypatch.delenv("STAMPFORGE_CACHE")
    assert str(cache_path()) == "stampforge_cache.json"


def test_record_from_basis():
    r = record_from_basis("trivial", IntegerBasis((0, 1, 2, 4, 8), 8, 3), {"seed": 1}, verified=True)
    assert r.params == {"n": 8, "h": 3, "seed": 1} and r.order == 3 and r.size == 5
