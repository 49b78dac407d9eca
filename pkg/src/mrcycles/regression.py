"""Quadratic cost-surface regression over (mappers, reducers).

The model is a five-coefficient polynomial

    cycles(M, R) = a0 + a1*M + a2*M^2 + a3*R + a4*R^2

fitted by least squares on job records.  :func:`fit` solves through a
column-pivoted QR factorization, which stays stable on the badly conditioned
design matrices this basis produces (columns span 1 .. M^2) and lets us name
the columns responsible when the training grid is rank deficient.
:func:`normal_equation_fit` is the textbook estimator A = (H^T H)^-1 H^T y,
kept as an independent numerical cross-check -- use :func:`fit` for real work.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .profiles import ProfileDataset

#: Design-matrix column names, in basis order [1, M, M^2, R, R^2].
COLUMN_NAMES = ("intercept", "mappers", "mappers_squared", "reducers", "reducers_squared")

#: A QR pivot below this fraction of the largest pivot marks its column
#: as numerically dependent on the others.
RANK_PIVOT_TOLERANCE = 1e-10

#: Minimum records needed to determine five coefficients.
MIN_RECORDS = 5


class FitError(ValueError):
    """Base class for everything that can go wrong while fitting."""


class UnderdeterminedError(FitError):
    """Fewer training records than coefficients."""


class RankDeficiencyError(FitError):
    """The training grid does not span the basis.  ``columns`` names the
    design-matrix columns whose pivots collapsed."""

    def __init__(self, columns: Sequence[str]):
        self.columns = tuple(columns)
        super().__init__(
            "design matrix is rank deficient in columns: "
            + ", ".join(self.columns)
            + "; the training configurations do not vary enough in those directions"
        )


class SingularMatrixError(FitError):
    """Normal-equation matrix H^T H is not invertible."""


class NonFiniteObservationError(FitError):
    """A training record carries a NaN or infinite cycle count."""


class NegativePredictionWarning(UserWarning):
    """The fitted surface dipped below zero at the requested configuration."""


@dataclass(frozen=True)
class FitSummary:
    """Where a model came from: record count and the ranges it was fit on.

    ``input_size_bytes`` is the single input size shared by all training
    records, or None when they mixed sizes (size-dependent operations then
    refuse to run).  Models loaded back from disk recover only the record
    count and input size; the grid ranges stay None.
    """

    record_count: int
    mappers_min: int | None = None
    mappers_max: int | None = None
    reducers_min: int | None = None
    reducers_max: int | None = None
    input_size_bytes: int | None = None


@dataclass(frozen=True)
class ModelCoefficients:
    a0: float
    a1: float
    a2: float
    a3: float
    a4: float
    fitted_on: FitSummary | None = None

    def __post_init__(self):
        for name in ("a0", "a1", "a2", "a3", "a4"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"coefficient {name} must be finite, got {value}")

    def as_array(self) -> np.ndarray:
        return np.array([self.a0, self.a1, self.a2, self.a3, self.a4], dtype=float)


def build_design_matrix(configs: Sequence[tuple[int, int]]) -> np.ndarray:
    """Rows [1, M, M^2, R, R^2] for each (M, R) configuration, float64."""
    if len(configs) == 0:
        raise ValueError("need at least one configuration")
    H = np.empty((len(configs), 5), dtype=float)
    for i, (m, r) in enumerate(configs):
        if m < 1 or r < 1:
            raise ValueError(f"mappers and reducers must be >= 1, got ({m}, {r})")
        H[i] = (1.0, m, m * m, r, r * r)
    return H


def _summarize(dataset: ProfileDataset) -> FitSummary:
    records = dataset.records
    sizes = {rec.input_size_bytes for rec in records}
    return FitSummary(
        record_count=len(records),
        mappers_min=min(rec.mappers for rec in records),
        mappers_max=max(rec.mappers for rec in records),
        reducers_min=min(rec.reducers for rec in records),
        reducers_max=max(rec.reducers for rec in records),
        input_size_bytes=sizes.pop() if len(sizes) == 1 else None,
    )


def _training_arrays(dataset: ProfileDataset) -> tuple[np.ndarray, np.ndarray]:
    records = dataset.records
    if len(records) < MIN_RECORDS:
        raise UnderdeterminedError(
            f"need at least {MIN_RECORDS} records to fit, got {len(records)}"
        )
    y = np.array([rec.total_cycles for rec in records], dtype=float)
    if not np.all(np.isfinite(y)):
        raise NonFiniteObservationError("total_cycles contains NaN or infinity")
    H = build_design_matrix([rec.config for rec in records])
    return H, y


def fit(dataset: ProfileDataset, *, scale_columns: bool = False) -> ModelCoefficients:
    """Least-squares fit of the quadratic surface via column-pivoted QR.

    Raises :class:`UnderdeterminedError` below five records and
    :class:`RankDeficiencyError` (naming the dead columns) when the
    configurations all share, say, one mapper count.  ``scale_columns``
    normalizes each design column to unit length before solving and rescales
    the coefficients back; use it when configuration counts span ranges wide
    enough to push the plain solve toward its conditioning limits.
    """
    H, y = _training_arrays(dataset)
    norms = np.ones(H.shape[1])
    if scale_columns:
        norms = np.linalg.norm(H, axis=0)
        norms[norms == 0.0] = 1.0
        H = H / norms

    q, r, piv = scipy.linalg.qr(H, mode="economic", pivoting=True)
    pivots = np.abs(np.diag(r))
    dead = pivots < RANK_PIVOT_TOLERANCE * pivots[0]
    if np.any(dead):
        raise RankDeficiencyError([COLUMN_NAMES[piv[k]] for k in np.nonzero(dead)[0]])

    coef = np.zeros(H.shape[1])
    coef[piv] = scipy.linalg.solve_triangular(r, q.T @ y)
    coef /= norms
    return ModelCoefficients(*(float(c) for c in coef), fitted_on=_summarize(dataset))


def normal_equation_fit(dataset: ProfileDataset) -> ModelCoefficients:
    """Literal normal-equation estimate A = (H^T H)^-1 H^T y.

    Numerically inferior to :func:`fit` (it squares the condition number);
    it exists so the two solvers can be compared on the same data.  Raises
    :class:`SingularMatrixError` when H^T H is not invertible.
    """
    H, y = _training_arrays(dataset)
    G = H.T @ H
    if np.linalg.matrix_rank(G) < G.shape[0]:
        raise SingularMatrixError("normal-equation matrix H^T H is singular")
    try:
        coef = np.linalg.inv(G) @ (H.T @ y)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rank check above
        raise SingularMatrixError(str(exc)) from exc
    return ModelCoefficients(*(float(c) for c in coef), fitted_on=_summarize(dataset))


def predict(model: ModelCoefficients, mappers: int, reducers: int) -> float:
    """Evaluate the surface at one configuration.

    Plain scalar arithmetic in a fixed order, so repeated calls are
    bit-identical.  A negative value is returned as-is but flagged with
    :class:`NegativePredictionWarning`: the quadratic dipped below zero,
    which usually means the configuration sits far outside the fitted range.
    """
    if mappers < 1 or reducers < 1:
        raise ValueError(
            f"mappers and reducers must be >= 1, got ({mappers}, {reducers})"
        )
    m = float(mappers)
    r = float(reducers)
    value = model.a0 + model.a1 * m + model.a2 * (m * m) + model.a3 * r + model.a4 * (r * r)
    if value < 0.0:
        warnings.warn(
            f"predicted cycles {value!r} at ({mappers}, {reducers}) is negative",
            NegativePredictionWarning,
            stacklevel=2,
        )
    return value


def residual_error(dataset: ProfileDataset, model: ModelCoefficients) -> float:
    """Root of the summed squared residuals of the model on the dataset."""
    if not dataset.records:
        raise ValueError("cannot compute residuals on an empty dataset")
    return math.sqrt(
        math.fsum(
            (predict(model, rec.mappers, rec.reducers) - rec.total_cycles) ** 2
            for rec in dataset.records
        )
    )
