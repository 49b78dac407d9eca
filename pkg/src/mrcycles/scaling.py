"""Linear scaling of predicted cycles to new input sizes.

Total cycles grow close to linearly with input bytes for the workloads this
package targets, so a fitted line ``cycles = slope * bytes + intercept``
carries a quadratic model trained at one input size over to another: the
prediction is multiplied by the ratio of the line at the target size to the
line at the trained size.  At the trained size that ratio is exactly 1.0,
so scaling never perturbs a prediction it should leave alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .profiles import ProfileDataset
from .regression import ModelCoefficients, predict


class ScalingFitError(ValueError):
    """Not enough distinct input sizes to determine a line."""


class ScalingDomainError(ValueError):
    """The scaling line or model metadata cannot support the request."""


@dataclass(frozen=True)
class ScalingModel:
    """Fitted line mapping input bytes to total cycles."""

    slope: float
    intercept: float
    fitted_points: int

    def __post_init__(self):
        if not (math.isfinite(self.slope) and math.isfinite(self.intercept)):
            raise ValueError("slope and intercept must be finite")
        if self.fitted_points < 2:
            raise ValueError(f"fitted_points must be >= 2, got {self.fitted_points}")

    def cycles_at(self, size_bytes: int) -> float:
        return self.slope * size_bytes + self.intercept


def fit_scaling(
    points: Sequence[tuple[int, float]], *, through_origin: bool = False
) -> ScalingModel:
    """Ordinary least-squares line through (input_size_bytes, total_cycles).

    Needs at least two points covering at least two distinct sizes.  With
    ``through_origin`` the intercept is pinned at zero (pure proportional
    scaling) and only the slope is estimated.  Sums are accumulated with
    ``math.fsum``, so point order never changes the result.
    """
    if len(points) < 2:
        raise ScalingFitError(f"need at least 2 points, got {len(points)}")
    sizes = [s for s, _ in points]
    cycles = [c for _, c in points]
    for s, c in points:
        if s < 1:
            raise ValueError(f"input sizes must be >= 1 byte, got {s}")
        if not math.isfinite(c):
            raise ValueError(f"cycle values must be finite, got {c}")
    if len(set(sizes)) < 2:
        raise ScalingFitError("need at least 2 distinct input sizes to fit a line")

    n = len(points)
    if through_origin:
        slope = math.fsum(s * c for s, c in points) / math.fsum(s * s for s in sizes)
        return ScalingModel(slope=slope, intercept=0.0, fitted_points=n)

    size_mean = math.fsum(sizes) / n
    cycle_mean = math.fsum(cycles) / n
    covariance = math.fsum((s - size_mean) * (c - cycle_mean) for s, c in points)
    variance = math.fsum((s - size_mean) ** 2 for s in sizes)
    slope = covariance / variance
    intercept = cycle_mean - slope * size_mean
    return ScalingModel(slope=slope, intercept=intercept, fitted_points=n)


def fit_scaling_from_dataset(
    dataset: ProfileDataset, *, through_origin: bool = False
) -> ScalingModel:
    """Fit the size line from a profile dataset.

    When exactly one (mappers, reducers) configuration was profiled at two or
    more input sizes, its records are used directly, so the size effect is
    isolated from parallelism.  Otherwise records are mean-aggregated per
    input size across all configurations first.
    """
    if not dataset.records:
        raise ScalingFitError("cannot fit scaling on an empty dataset")

    by_config: dict[tuple[int, int], list[tuple[int, float]]] = {}
    for rec in dataset.records:
        by_config.setdefault(rec.config, []).append(
            (rec.input_size_bytes, rec.total_cycles)
        )
    multi_size = [
        cfg for cfg, pts in by_config.items() if len({s for s, _ in pts}) >= 2
    ]
    if len(multi_size) == 1:
        points = by_config[multi_size[0]]
    else:
        by_size: dict[int, list[float]] = {}
        for rec in dataset.records:
            by_size.setdefault(rec.input_size_bytes, []).append(rec.total_cycles)
        points = [
            (size, math.fsum(vals) / len(vals)) for size, vals in sorted(by_size.items())
        ]
    return fit_scaling(points, through_origin=through_origin)


def scale_prediction(
    model: ModelCoefficients,
    scaling: ScalingModel,
    mappers: int,
    reducers: int,
    target_size_bytes: int,
) -> float:
    """Predict cycles at a new input size.

    Multiplies the quadratic model's prediction by
    ``line(target) / line(trained)``.  The model must record the single input
    size it was trained on; asking for that same size returns the base
    prediction bit-for-bit.  Raises :class:`ScalingDomainError` when the line
    is nonpositive at the trained size (the ratio would be meaningless).  A
    target far below the fitted sizes can still drive the numerator, and so
    the result, nonpositive; that is extrapolation the caller asked for.
    """
    if target_size_bytes < 1:
        raise ValueError(f"target_size_bytes must be >= 1, got {target_size_bytes}")
    if model.fitted_on is None or model.fitted_on.input_size_bytes is None:
        raise ScalingDomainError(
            "model does not record a single training input size; "
            "refit on records sharing one input size"
        )
    trained = model.fitted_on.input_size_bytes
    at_trained = scaling.slope * trained + scaling.intercept
    if at_trained <= 0.0:
        raise ScalingDomainError(
            f"scaling line is nonpositive ({at_trained!r}) at the trained "
            f"input size {trained}"
        )
    at_target = scaling.slope * target_size_bytes + scaling.intercept
    return predict(model, mappers, reducers) * (at_target / at_trained)
