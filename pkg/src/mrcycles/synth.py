"""Synthetic workloads: known surfaces rendered as datasets and traces.

Everything here is driven by a :class:`GroundTruth`: a quadratic surface with
known coefficients, an optional relative noise level, an optional linear
input-size line, and a seed.  Datasets sampled from a truth let the fitting
and evaluation pipeline be tested end to end against known answers; traces
rendered from a truth exercise the trace parser and cycle accounting.

Trace synthesis quantizes the target utilization-seconds onto a 2^-16 grid
(one part in 65536 of one CPU-second) before spreading work across machines.
Each machine then gets some number of full-utilization seconds plus at most
one fractional sample, and every sample's cycle contribution is exact in
float arithmetic for any realistic clock frequency.  The practical upshot:
the cycle total of a generated trace is a *fixed* float for a given truth,
configuration and clock -- independent of how many machines it is spread
over -- which is what the redistribution-invariance tests demand.

Randomness comes from numpy's default generator (PCG64).  Trace noise is
seeded by (seed, mappers, reducers) so the draw does not depend on machine
count; zero-noise truths consume no randomness at all.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .profiles import JobRecord, ProfileDataset
from .regression import ModelCoefficients, NegativePredictionWarning, predict
from .traces import CpuSample, JobTrace, MachineTrace, total_cycles

#: Utilization samples are quantized to multiples of 2**-16 of a CPU-second.
QUANTA_PER_SECOND = 1 << 16


class GeneratorDomainError(ValueError):
    """The truth produces a nonpositive cycle count at a requested point."""


class TruthFileError(ValueError):
    """A ground-truth file that cannot be parsed or fails validation."""


@dataclass(frozen=True)
class GroundTruth:
    """A fully known workload model to sample synthetic data from."""

    coefficients: ModelCoefficients
    noise_sigma: float = 0.0
    seed: int = 0
    base_size_bytes: int = 1
    size_slope: float = 0.0
    size_intercept: float = 0.0
    application: str = "synthetic"

    def __post_init__(self):
        if not (math.isfinite(self.noise_sigma) and self.noise_sigma >= 0.0):
            raise ValueError(f"noise_sigma must be finite and >= 0, got {self.noise_sigma}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.base_size_bytes < 1:
            raise ValueError(f"base_size_bytes must be >= 1, got {self.base_size_bytes}")
        if not (math.isfinite(self.size_slope) and math.isfinite(self.size_intercept)):
            raise ValueError("size_slope and size_intercept must be finite")
        if not self.application or "\n" in self.application:
            raise ValueError("application must be non-empty without newlines")


def surface(truth: GroundTruth, mappers: int, reducers: int) -> float:
    """The noise-free cycle count of the truth at one configuration.

    A nonpositive value is returned silently here; the generators turn it
    into a :class:`GeneratorDomainError` at the point of use.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NegativePredictionWarning)
        return predict(truth.coefficients, mappers, reducers)


def _size_factor(truth: GroundTruth, input_size_bytes: int) -> float:
    if input_size_bytes == truth.base_size_bytes:
        return 1.0
    at_base = truth.size_slope * truth.base_size_bytes + truth.size_intercept
    at_size = truth.size_slope * input_size_bytes + truth.size_intercept
    if at_base <= 0.0 or at_size <= 0.0:
        raise GeneratorDomainError(
            f"truth's size line is nonpositive between sizes "
            f"{truth.base_size_bytes} and {input_size_bytes}; "
            "set size_slope/size_intercept to generate away from the base size"
        )
    return at_size / at_base


def generate_dataset(
    truth: GroundTruth,
    configs: Sequence[tuple[int, int]],
    repeats: int,
    *,
    input_size_bytes: int | None = None,
) -> ProfileDataset:
    """Sample a profile dataset from the truth.

    Produces ``len(configs) * repeats`` records in configuration order, with
    ``repeats`` consecutive records per configuration.  Each record's cycle
    count is ``surface * (1 + eps)`` with eps drawn from N(0, noise_sigma);
    at zero noise the records equal the surface values bit for bit.  Noise
    draws consume a PCG64 generator seeded with ``truth.seed`` in record
    order, so identical arguments reproduce the identical dataset.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    if len(configs) == 0:
        raise ValueError("need at least one configuration")
    size = truth.base_size_bytes if input_size_bytes is None else input_size_bytes
    if size < 1:
        raise ValueError(f"input_size_bytes must be >= 1, got {size}")
    factor = _size_factor(truth, size)

    rng = np.random.default_rng(truth.seed)
    records = []
    for m, r in configs:
        clean = surface(truth, m, r)
        if clean <= 0.0:
            raise GeneratorDomainError(
                f"truth surface is nonpositive ({clean!r}) at ({m}, {r})"
            )
        clean *= factor
        for _ in range(repeats):
            value = clean
            if truth.noise_sigma > 0.0:
                value = clean * (1.0 + rng.normal(0.0, truth.noise_sigma))
            if value <= 0.0:
                raise GeneratorDomainError(
                    f"noise drove the cycle count nonpositive at ({m}, {r}); "
                    f"noise_sigma={truth.noise_sigma} is too large for this surface"
                )
            records.append(JobRecord(m, r, size, value))
    return ProfileDataset(truth.application, tuple(records))


def representable_cycles(cycles: float, clock_hz: float) -> float:
    """Nearest cycle total a synthetic trace can hit exactly at this clock.

    Rounds ``cycles / clock_hz`` onto the 2^-16 utilization-second grid and
    returns the grid point times the clock, evaluated in exact rational
    arithmetic and correctly rounded to float once.
    """
    if not (math.isfinite(cycles) and cycles >= 0.0):
        raise ValueError(f"cycles must be finite and >= 0, got {cycles}")
    _check_clock(clock_hz)
    quanta = round(cycles / clock_hz * QUANTA_PER_SECOND)
    return float(Fraction(quanta, QUANTA_PER_SECOND) * Fraction(clock_hz))


def _check_clock(clock_hz: float) -> None:
    if not (math.isfinite(clock_hz) and clock_hz > 0.0):
        raise ValueError(f"clock_hz must be finite and > 0, got {clock_hz}")


def _noisy_target(truth: GroundTruth, mappers: int, reducers: int) -> float:
    """Surface value with this configuration's noise applied (pre-quantization)."""
    clean = surface(truth, mappers, reducers)
    if clean <= 0.0:
        raise GeneratorDomainError(
            f"truth surface is nonpositive ({clean!r}) at ({mappers}, {reducers})"
        )
    if truth.noise_sigma == 0.0:
        return clean
    rng = np.random.default_rng((truth.seed, mappers, reducers))
    value = clean * (1.0 + rng.normal(0.0, truth.noise_sigma))
    if value <= 0.0:
        raise GeneratorDomainError(
            f"noise drove the cycle target nonpositive at ({mappers}, {reducers})"
        )
    return value


def synthetic_job_target(
    truth: GroundTruth, mappers: int, reducers: int, clock_hz: float
) -> float:
    """The exact cycle total :func:`generate_trace` will deliver.

    Depends on the truth, the configuration and the clock -- but not on the
    machine count, which only changes how the work is laid out.
    """
    _check_clock(clock_hz)
    return representable_cycles(_noisy_target(truth, mappers, reducers), clock_hz)


def generate_trace(
    truth: GroundTruth,
    mappers: int,
    reducers: int,
    *,
    machines: int,
    clock_hz: float = 3.0e9,
) -> JobTrace:
    """Render one synthetic job as a per-machine utilization trace.

    The truth's (noisy) cycle target is quantized onto the utilization grid
    and split as evenly as possible across ``machines`` identical machines:
    whole quanta budgets, so each machine records some full-utilization
    seconds plus at most one fractional sample.  The resulting trace's
    :func:`~mrcycles.traces.total_cycles` equals
    :func:`synthetic_job_target` bit for bit, whatever the machine count.
    """
    if machines < 1:
        raise ValueError(f"machines must be >= 1, got {machines}")
    _check_clock(clock_hz)

    target = _noisy_target(truth, mappers, reducers)
    quanta = round(target / clock_hz * QUANTA_PER_SECOND)
    base, extra = divmod(quanta, machines)

    machine_traces = []
    for k in range(machines):
        share = base + (1 if k < extra else 0)
        full, ticks = divmod(share, QUANTA_PER_SECOND)
        samples = [CpuSample(second, 1.0) for second in range(full)]
        if ticks:
            samples.append(CpuSample(full, ticks / QUANTA_PER_SECOND))
        machine_traces.append(
            MachineTrace(
                machine_id=f"m{k:03d}",
                clock_frequency_hz=clock_hz,
                samples=tuple(samples),
            )
        )

    job = JobTrace(
        job_id=f"synthetic-m{mappers}-r{reducers}",
        mappers=mappers,
        reducers=reducers,
        input_size_bytes=truth.base_size_bytes,
        machines=tuple(machine_traces),
    )

    achieved = float(Fraction(quanta, QUANTA_PER_SECOND) * Fraction(clock_hz))
    if total_cycles(job) != achieved:
        # Only reachable for clocks whose mantissa needs more than ~37 bits
        # of odd factor -- far outside any physical frequency written in Hz.
        raise GeneratorDomainError(
            f"clock {clock_hz!r} cannot represent quantized samples exactly; "
            "use a clock with a coarser mantissa"
        )
    return job


def with_seed(truth: GroundTruth, seed: int) -> GroundTruth:
    """The same truth re-seeded (convenience for sweep experiments)."""
    return replace(truth, seed=seed)


# ---------------------------------------------------------------------------
# ground-truth file format

_TRUTH_KEYS = (
    "application",
    "coefficients",
    "noise_sigma",
    "seed",
    "base_size_bytes",
    "size_slope",
    "size_intercept",
)
_COEF_KEYS = ("a0", "a1", "a2", "a3", "a4")


def format_truth_json(truth: GroundTruth) -> str:
    payload = {
        "application": truth.application,
        "coefficients": {k: getattr(truth.coefficients, k) for k in _COEF_KEYS},
        "noise_sigma": truth.noise_sigma,
        "seed": truth.seed,
        "base_size_bytes": truth.base_size_bytes,
        "size_slope": truth.size_slope,
        "size_intercept": truth.size_intercept,
    }
    return json.dumps(payload, indent=2) + "\n"


def parse_truth_json(text: str | bytes) -> GroundTruth:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TruthFileError(f"invalid truth JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise TruthFileError("truth file must hold a JSON object")
    missing = [k for k in _TRUTH_KEYS if k not in obj]
    if missing:
        raise TruthFileError(f"truth file missing keys: {missing}")
    unknown = sorted(set(obj) - set(_TRUTH_KEYS))
    if unknown:
        raise TruthFileError(f"truth file has unknown keys: {unknown}")
    coefs = obj["coefficients"]
    if not isinstance(coefs, dict) or set(coefs) != set(_COEF_KEYS):
        raise TruthFileError(f"coefficients must be an object with keys {list(_COEF_KEYS)}")
    for key in ("seed", "base_size_bytes"):
        if isinstance(obj[key], bool) or not isinstance(obj[key], int):
            raise TruthFileError(f"{key} must be an integer, got {obj[key]!r}")
    try:
        return GroundTruth(
            coefficients=ModelCoefficients(*(float(coefs[k]) for k in _COEF_KEYS)),
            noise_sigma=float(obj["noise_sigma"]),
            seed=obj["seed"],
            base_size_bytes=obj["base_size_bytes"],
            size_slope=float(obj["size_slope"]),
            size_intercept=float(obj["size_intercept"]),
            application=str(obj["application"]),
        )
    except (TypeError, ValueError) as exc:
        raise TruthFileError(str(exc)) from exc


def read_truth_file(path: str | Path) -> GroundTruth:
    return parse_truth_json(Path(path).read_text(encoding="utf-8"))


def write_truth_file(path: str | Path, truth: GroundTruth) -> None:
    Path(path).write_text(format_truth_json(truth), encoding="utf-8")
