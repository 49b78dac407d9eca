"""On-disk model documents.

A fitted model is stored as one JSON object holding the application name,
the five surface coefficients, fit provenance (record count, training input
size, creation timestamp), the aggregation mode the training data went
through, and -- once fitted -- the input-size scaling line.  Floats are
serialized with repr, keys in a fixed order, so write -> read -> write is
byte-identical.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .profiles import AGGREGATION_METHODS
from .regression import FitSummary, ModelCoefficients
from .scaling import ScalingModel

_REQUIRED_KEYS = (
    "application",
    "a0",
    "a1",
    "a2",
    "a3",
    "a4",
    "trained_records",
    "input_size_bytes",
    "created_utc",
)
_OPTIONAL_KEYS = ("aggregation", "scaling_slope", "scaling_intercept", "scaling_points")
_SCALING_KEYS = ("scaling_slope", "scaling_intercept", "scaling_points")


class ModelFileError(ValueError):
    """A model file that cannot be parsed or fails validation."""


@dataclass(frozen=True)
class ModelDocument:
    """Everything one model file holds."""

    application: str
    model: ModelCoefficients
    created_utc: str
    aggregation: str | None = None
    scaling: ScalingModel | None = None

    def __post_init__(self):
        if not self.application:
            raise ValueError("application name must be non-empty")
        if self.model.fitted_on is None:
            raise ValueError("model document requires fit provenance (fitted_on)")
        if self.model.fitted_on.input_size_bytes is None:
            raise ValueError(
                "model document requires a single training input size; "
                "this model was fit on records with mixed sizes"
            )
        _validate_timestamp(self.created_utc)
        if self.aggregation is not None and self.aggregation not in AGGREGATION_METHODS:
            raise ValueError(f"unknown aggregation method {self.aggregation!r}")


def utc_now_iso() -> str:
    """Current UTC time in the ISO-8601 form model files use."""
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _validate_timestamp(text: str) -> None:
    if not isinstance(text, str):
        raise ValueError(f"created_utc must be an ISO-8601 string, got {text!r}")
    try:
        # datetime.fromisoformat on 3.10 rejects a trailing Z; accept it anyway
        datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError:
        raise ValueError(f"created_utc is not ISO-8601: {text!r}") from None


def format_model_json(doc: ModelDocument) -> str:
    summary = doc.model.fitted_on
    payload: dict = {
        "application": doc.application,
        "a0": doc.model.a0,
        "a1": doc.model.a1,
        "a2": doc.model.a2,
        "a3": doc.model.a3,
        "a4": doc.model.a4,
        "trained_records": summary.record_count,
        "input_size_bytes": summary.input_size_bytes,
        "created_utc": doc.created_utc,
    }
    if doc.aggregation is not None:
        payload["aggregation"] = doc.aggregation
    if doc.scaling is not None:
        payload["scaling_slope"] = doc.scaling.slope
        payload["scaling_intercept"] = doc.scaling.intercept
        payload["scaling_points"] = doc.scaling.fitted_points
    return json.dumps(payload, indent=2) + "\n"


def _require_int(obj: dict, key: str) -> int:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModelFileError(f"{key} must be an integer, got {value!r}")
    return value


def _require_number(obj: dict, key: str) -> float:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ModelFileError(f"{key} must be a number, got {value!r}")
    return float(value)


def parse_model_json(text: str | bytes) -> ModelDocument:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"invalid model JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ModelFileError("model file must hold a JSON object")

    missing = [k for k in _REQUIRED_KEYS if k not in obj]
    if missing:
        raise ModelFileError(f"model file missing keys: {missing}")
    unknown = sorted(set(obj) - set(_REQUIRED_KEYS) - set(_OPTIONAL_KEYS))
    if unknown:
        raise ModelFileError(f"model file has unknown keys: {unknown}")

    scaling_present = [k for k in _SCALING_KEYS if k in obj]
    if scaling_present and len(scaling_present) != len(_SCALING_KEYS):
        raise ModelFileError(
            f"scaling keys must appear together; found only {scaling_present}"
        )

    summary = FitSummary(
        record_count=_require_int(obj, "trained_records"),
        input_size_bytes=_require_int(obj, "input_size_bytes"),
    )
    try:
        model = ModelCoefficients(
            a0=_require_number(obj, "a0"),
            a1=_require_number(obj, "a1"),
            a2=_require_number(obj, "a2"),
            a3=_require_number(obj, "a3"),
            a4=_require_number(obj, "a4"),
            fitted_on=summary,
        )
        scaling = None
        if scaling_present:
            scaling = ScalingModel(
                slope=_require_number(obj, "scaling_slope"),
                intercept=_require_number(obj, "scaling_intercept"),
                fitted_points=_require_int(obj, "scaling_points"),
            )
        return ModelDocument(
            application=str(obj["application"]),
            model=model,
            created_utc=obj["created_utc"],
            aggregation=obj.get("aggregation"),
            scaling=scaling,
        )
    except ValueError as exc:
        if isinstance(exc, ModelFileError):
            raise
        raise ModelFileError(str(exc)) from exc


def read_model_file(path: str | Path) -> ModelDocument:
    return parse_model_json(Path(path).read_text(encoding="utf-8"))


def write_model_file(path: str | Path, doc: ModelDocument) -> None:
    Path(path).write_text(format_model_json(doc), encoding="utf-8")
