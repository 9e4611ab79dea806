"""JSON schema round trips and validation."""

import pytest

from lie2check import serialize
from lie2check.serialize import SchemaError
from lie2check.examples import EXAMPLES, build_example


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_round_trip_is_stable(name):
    obj, expect_fail = build_example(name)
    doc = serialize.encode_structure(obj, name=name, expect_fail=expect_fail)
    text = serialize.dumps(doc)
    kind, back, meta = serialize.decode_structure(serialize.loads(text))
    assert meta.get("name") == name
    if expect_fail is not None:
        assert meta["expect_fail"] == sorted(expect_fail)
    doc2 = serialize.encode_structure(back, name=name,
                                      expect_fail=expect_fail)
    assert serialize.dumps(doc2) == text


def _sample_doc():
    obj, _ = build_example("so3_quadratic")
    return serialize.encode_structure(obj)


def test_unknown_field_rejected():
    doc = _sample_doc()
    doc["surprise"] = 1
    with pytest.raises(SchemaError):
        serialize.decode_structure(doc)


def test_missing_field_rejected():
    doc = _sample_doc()
    del doc["pairing"]
    with pytest.raises(SchemaError):
        serialize.decode_structure(doc)


def test_bad_format_version_rejected():
    doc = _sample_doc()
    doc["format"] = 99
    with pytest.raises(SchemaError):
        serialize.decode_structure(doc)


def test_unknown_kind_rejected():
    doc = _sample_doc()
    doc["kind"] = "mystery"
    with pytest.raises(SchemaError):
        serialize.decode_structure(doc)


def test_shape_mismatch_rejected():
    doc = _sample_doc()
    doc["rank"] = 4
    with pytest.raises(SchemaError):
        serialize.decode_structure(doc)


def test_non_object_rejected():
    with pytest.raises(SchemaError):
        serialize.decode_structure([1, 2, 3])


def test_kind_of_rejects_foreign_objects():
    with pytest.raises(SchemaError):
        serialize.encode_structure(object())
