import json

import pytest

from mrcycles.modelfile import (
    ModelDocument,
    ModelFileError,
    format_model_json,
    parse_model_json,
    read_model_file,
    utc_now_iso,
    write_model_file,
)
from mrcycles.regression import FitSummary, ModelCoefficients
from mrcycles.scaling import ScalingModel

CREATED = "2026-08-19T00:00:00+00:00"


def document(scaling=None, aggregation="mean"):
    model = ModelCoefficients(
        5.0e9,
        2.0e8,
        -3.0e6,
        1.5e8,
        -2.0e6,
        fitted_on=FitSummary(record_count=64, input_size_bytes=12884901888),
    )
    return ModelDocument(
        application="wordcount",
        model=model,
        created_utc=CREATED,
        aggregation=aggregation,
        scaling=scaling,
    )


def test_round_trip_preserves_document():
    doc = document()
    assert parse_model_json(format_model_json(doc)) == doc


def test_round_trip_is_byte_identical():
    text = format_model_json(document())
    assert format_model_json(parse_model_json(text)) == text


def test_round_trip_with_scaling():
    doc = document(scaling=ScalingModel(slope=0.873, intercept=1.25e8, fitted_points=3))
    text = format_model_json(doc)
    assert parse_model_json(text) == doc
    assert format_model_json(parse_model_json(text)) == text


def test_key_order_is_fixed():
    text = format_model_json(document(scaling=ScalingModel(1.0, 0.0, 2)))
    keys = list(json.loads(text).keys())
    assert keys == [
        "application", "a0", "a1", "a2", "a3", "a4",
        "trained_records", "input_size_bytes", "created_utc",
        "aggregation", "scaling_slope", "scaling_intercept", "scaling_points",
    ]


def test_file_round_trip(tmp_path):
    path = tmp_path / "model.json"
    doc = document(scaling=ScalingModel(0.7, 2.0e8, 4))
    write_model_file(path, doc)
    assert read_model_file(path) == doc
    first = path.read_bytes()
    write_model_file(path, read_model_file(path))
    assert path.read_bytes() == first


def test_missing_key_rejected():
    obj = json.loads(format_model_json(document()))
    del obj["a3"]
    with pytest.raises(ModelFileError) as err:
        parse_model_json(json.dumps(obj))
    assert "a3" in str(err.value)


def test_unknown_key_rejected():
    obj = json.loads(format_model_json(document()))
    obj["flavor"] = "vanilla"
    with pytest.raises(ModelFileError) as err:
        parse_model_json(json.dumps(obj))
    assert "flavor" in str(err.value)


def test_partial_scaling_keys_rejected():
    obj = json.loads(format_model_json(document()))
    obj["scaling_slope"] = 1.0
    with pytest.raises(ModelFileError) as err:
        parse_model_json(json.dumps(obj))
    assert "together" in str(err.value)


def test_non_numeric_coefficient_rejected():
    obj = json.loads(format_model_json(document()))
    obj["a0"] = "big"
    with pytest.raises(ModelFileError):
        parse_model_json(json.dumps(obj))


def test_invalid_timestamp_rejected():
    obj = json.loads(format_model_json(document()))
    obj["created_utc"] = "yesterday"
    with pytest.raises(ModelFileError):
        parse_model_json(json.dumps(obj))


def test_zulu_timestamp_accepted():
    obj = json.loads(format_model_json(document()))
    obj["created_utc"] = "2026-08-19T00:00:00Z"
    parse_model_json(json.dumps(obj))


def test_invalid_json_rejected():
    with pytest.raises(ModelFileError):
        parse_model_json("{not json")
    with pytest.raises(ModelFileError):
        parse_model_json("[1, 2, 3]")


def test_document_requires_provenance():
    bare = ModelCoefficients(1.0, 0.0, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        ModelDocument(application="app", model=bare, created_utc=CREATED)


def test_document_requires_single_training_size():
    model = ModelCoefficients(
        1.0, 0.0, 0.0, 0.0, 0.0,
        fitted_on=FitSummary(record_count=6, input_size_bytes=None),
    )
    with pytest.raises(ValueError) as err:
        ModelDocument(application="app", model=model, created_utc=CREATED)
    assert "input size" in str(err.value)


def test_utc_now_is_parsable():
    from datetime import datetime

    datetime.fromisoformat(utc_now_iso())
