import json

import pytest
from hypothesis import given, strategies as st

from subrank import greedy_trap, make_explicit, random_instance, validate_instance
from subrank.serialize import DocumentError, dumps_instance, loads_instance


@given(st.integers(0, 10**6), st.sampled_from(["modular", "coverage"]))
def test_round_trip_is_byte_stable(seed, family):
    text = dumps_instance(random_instance(5, 3, family, 0.5, seed))
    again = dumps_instance(loads_instance(text))
    assert again == text
    assert dumps_instance(loads_instance(again)) == again


def test_explicit_round_trip_and_bit_order():
    inst = validate_instance(2, [1], [make_explicit([0, 0.6, 0.5, 1.0])])
    text = dumps_instance(inst)
    doc = json.loads(text)
    assert doc["functions"][0] == {"kind": "explicit", "m": 2, "table": [0, 0.59999999999999998, 0.5, 1]}
    back = loads_instance(text)
    assert back.valuations[0].value({1}) == 0.6
    assert dumps_instance(back) == text


def test_document_layout():
    text = dumps_instance(greedy_trap(4))
    doc = json.loads(text)
    assert doc["schema_version"] == "1"
    assert doc["m"] == 4 and doc["n"] == 4
    assert list(doc) == sorted(doc)
    assert text.endswith("}\n")
    assert "0.75" in text and "0.25" in text


def test_floats_keep_17_digits():
    inst = random_instance(3, 1, "modular", 1.0, 9)
    back = loads_instance(dumps_instance(inst))
    assert list(back.valuations[0].values) == list(inst.valuations[0].values)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(schema_version="2"),
        lambda d: d.update(n=5),
        lambda d: d["functions"].__setitem__(0, {"kind": "matroid"}),
        lambda d: d["functions"][0].pop("values"),
    ],
)
def test_bad_documents(mutate):
    doc = json.loads(dumps_instance(greedy_trap(4)))
    mutate(doc)
    with pytest.raises(DocumentError):
        loads_instance(json.dumps(doc))


def test_invalid_json():
    with pytest.raises(DocumentError):
        loads_instance("{not json")
