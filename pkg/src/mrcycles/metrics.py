"""Prediction-accuracy metrics and evaluation reports.

All metrics take paired 1-D vectors of actual and predicted values.  Ratios
are kept as fractions internally (a 5% error is 0.05); only the fixed-width
table rendering multiplies by 100.

Two coefficient-of-determination variants are provided because profiling
reports disagree on the reference variance: :func:`r2_score` normalizes by
the spread of the actuals about their mean (the conventional definition),
while :func:`r2_prediction_spread` normalizes by the spread of the
*predictions* about the actual mean.  The two coincide for a perfect model
and drift apart as predictions degrade; reports carry both.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

#: Strict relative-error threshold counted by :func:`pred25`.
PRED25_THRESHOLD = 0.25


class MetricDomainError(ValueError):
    """The inputs are outside a metric's domain (zero mean, constant actuals,
    nonpositive actuals).  For nrmse failures ``rmse_raw`` still carries the
    unnormalized root-mean-square error."""

    def __init__(self, message: str, *, rmse_raw: float | None = None):
        super().__init__(message)
        self.rmse_raw = rmse_raw


def _paired(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.ndim != 1 or p.ndim != 1:
        raise ValueError(f"expected 1-D vectors, got shapes {a.shape} and {p.shape}")
    if a.shape[0] != p.shape[0]:
        raise ValueError(f"length mismatch: {a.shape[0]} actuals vs {p.shape[0]} predictions")
    if a.shape[0] == 0:
        raise ValueError("need at least one observation")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(p))):
        raise ValueError("actual and predicted values must be finite")
    return a, p


def mape(actual, predicted) -> float:
    """Mean absolute percentage error, as a fraction: mean(|y - yhat| / y)."""
    a, p = _paired(actual, predicted)
    if np.any(a <= 0):
        raise MetricDomainError("mape requires strictly positive actual values")
    return float(np.mean(np.abs(a - p) / a))


def pred25(actual, predicted) -> float:
    """Fraction of predictions whose relative error is strictly below 0.25."""
    a, p = _paired(actual, predicted)
    if np.any(a <= 0):
        raise MetricDomainError("pred25 requires strictly positive actual values")
    return float(np.mean(np.abs(a - p) / a < PRED25_THRESHOLD))


def rmse(actual, predicted) -> tuple[float, float]:
    """Root-mean-square error and its mean-normalized form.

    Returns ``(rmse_raw, nrmse)`` with ``nrmse = rmse_raw / mean(actual)``.
    When the actuals have zero mean the normalization is undefined and a
    :class:`MetricDomainError` is raised; its ``rmse_raw`` attribute still
    holds the unnormalized value.
    """
    a, p = _paired(actual, predicted)
    raw = float(np.sqrt(np.mean((a - p) ** 2)))
    mean = float(np.mean(a))
    if mean == 0.0:
        raise MetricDomainError(
            "nrmse is undefined for zero-mean actual values", rmse_raw=raw
        )
    return raw, raw / mean


def r2_prediction_spread(actual, predicted) -> float:
    """1 - sum((y - yhat)^2) / sum((yhat - mean(y))^2).

    Coefficient of determination normalized by the spread of the predictions
    about the mean of the actuals.  Undefined (domain error) when every
    prediction equals that mean.
    """
    a, p = _paired(actual, predicted)
    mean = np.mean(a)
    denom = float(np.sum((p - mean) ** 2))
    if denom == 0.0:
        raise MetricDomainError(
            "r2_prediction_spread is undefined when all predictions equal the actual mean"
        )
    return float(1.0 - np.sum((a - p) ** 2) / denom)


def r2_score(actual, predicted) -> float:
    """Conventional coefficient of determination.

    1 - sum((y - yhat)^2) / sum((y - mean(y))^2); at most 1, and exactly 1
    iff the predictions equal the actuals.  Undefined for constant actuals.
    """
    a, p = _paired(actual, predicted)
    denom = float(np.sum((a - np.mean(a)) ** 2))
    if denom == 0.0:
        raise MetricDomainError("r2_score is undefined for constant actual values")
    return float(1.0 - np.sum((a - p) ** 2) / denom)


@dataclass(frozen=True)
class EvaluationReport:
    """Every metric for one actual/predicted pairing.

    Fields are None where the metric's domain excluded these inputs; the
    ``notes`` mapping records why, keyed by metric name.
    """

    n: int
    mape: float | None
    pred25: float | None
    rmse_raw: float | None
    nrmse: float | None
    r2_prediction_spread: float | None
    r2_score: float | None
    notes: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")


def evaluate(actual, predicted) -> EvaluationReport:
    """Compute all metrics, degrading per-field instead of failing.

    Shape violations (mismatched lengths, empty or non-finite input) raise;
    domain violations of individual metrics null out that field and leave an
    explanation in ``notes``.
    """
    a, p = _paired(actual, predicted)
    values: dict[str, float | None] = {}
    notes: dict[str, str] = {}

    def attempt(name, fn):
        try:
            values[name] = fn(a, p)
        except MetricDomainError as exc:
            values[name] = None
            notes[name] = str(exc)

    attempt("mape", mape)
    attempt("pred25", pred25)
    try:
        raw, normalized = rmse(a, p)
    except MetricDomainError as exc:
        raw, normalized = exc.rmse_raw, None
        notes["nrmse"] = str(exc)
    attempt("r2_prediction_spread", r2_prediction_spread)
    attempt("r2_score", r2_score)

    return EvaluationReport(
        n=int(a.shape[0]),
        mape=values["mape"],
        pred25=values["pred25"],
        rmse_raw=raw,
        nrmse=normalized,
        r2_prediction_spread=values["r2_prediction_spread"],
        r2_score=values["r2_score"],
        notes=notes,
    )


# ---------------------------------------------------------------------------
# report rendering

_REPORT_FIELDS = (
    "n", "mape", "pred25", "rmse_raw", "nrmse", "r2_prediction_spread", "r2_score",
)

#: Fixed-width report layout: application left in 26 columns, then five
#: right-aligned 10-column metrics.  Values print with three significant
#: digits; percentage columns are scaled by 100; absent metrics render "-".
TABLE_HEADER = (
    f"{'application':<26}{'nrmse%':>10}{'mape%':>10}{'r2pred':>10}{'r2':>10}{'pred25':>10}"
)


def _cell(value: float | None, percent: bool = False) -> str:
    if value is None:
        return "-"
    if percent:
        return f"{value * 100:.3g}%"
    return f"{value:.3g}"


def render_report_table(rows: Sequence[tuple[str, EvaluationReport]]) -> str:
    """Render named evaluation reports as a fixed-width text table."""
    lines = [TABLE_HEADER, "-" * len(TABLE_HEADER)]
    for name, report in rows:
        lines.append(
            f"{name:<26}"
            f"{_cell(report.nrmse, percent=True):>10}"
            f"{_cell(report.mape, percent=True):>10}"
            f"{_cell(report.r2_prediction_spread):>10}"
            f"{_cell(report.r2_score):>10}"
            f"{_cell(report.pred25):>10}"
        )
    return "\n".join(lines) + "\n"


def report_to_json(report: EvaluationReport, application: str) -> str:
    """Serialize one report (with its application name) as indented JSON."""
    payload: dict = {"application": application}
    for name in _REPORT_FIELDS:
        payload[name] = getattr(report, name)
    payload["notes"] = dict(report.notes)
    return json.dumps(payload, indent=2) + "\n"


def report_from_json(text: str | bytes) -> tuple[str, EvaluationReport]:
    """Inverse of :func:`report_to_json`; returns (application, report)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid report JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ValueError("report JSON must be an object")
    missing = [k for k in ("application", *_REPORT_FIELDS) if k not in obj]
    if missing:
        raise ValueError(f"report JSON missing keys: {missing}")
    report = EvaluationReport(
        n=obj["n"],
        mape=obj["mape"],
        pred25=obj["pred25"],
        rmse_raw=obj["rmse_raw"],
        nrmse=obj["nrmse"],
        r2_prediction_spread=obj["r2_prediction_spread"],
        r2_score=obj["r2_score"],
        notes=dict(obj.get("notes", {})),
    )
    return str(obj["application"]), report
