import json

from droplab.serialize import dumps, format_float


def test_floats_written_with_17_significant_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(1.0) == "1"
    assert json.loads(dumps({"x": 0.1}))["x"] == 0.1


def test_round_trip_is_exact():
    values = [1e-300, 3.141592653589793, 2.0 ** -52, 6.2096653257761352e-3]
    doc = json.loads(dumps({"v": values}))
    assert doc["v"] == values


def test_nested_structures_and_non_finite():
    text = dumps({"a": [1, 2.5, "s", None, True],
                  "b": {"nan": float("nan"), "inf": float("inf")}})
    doc = json.loads(text)
    assert doc["a"] == [1, 2.5, "s", None, True]
    assert doc["b"]["nan"] is None and doc["b"]["inf"] is None


def test_deterministic_output():
    obj = {"z": 1, "a": [0.25, {"k": 2}]}
    assert dumps(obj) == dumps(obj)
    assert dumps(obj, indent=2) == dumps(obj, indent=2)
