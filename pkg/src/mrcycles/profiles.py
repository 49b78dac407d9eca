"""Job-level CPU profiles and the datasets used to fit cost models.

A :class:`JobRecord` pins down one observed job execution: its parallelism
(mapper and reducer counts), the input size it processed, and the total CPU
clock cycles the cluster spent running it.  A :class:`ProfileDataset` is an
ordered collection of such records tagged with the application name.

Datasets are stored as JSON-lines files with a single ``# application=``
header line; see :func:`format_dataset` for the exact layout.
"""
from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

#: Mapper/reducer counts profiled by default when sweeping a training grid.
DEFAULT_TRAINING_GRID: tuple[int, ...] = (4, 8, 12, 16, 20, 24, 28, 32)

#: Keys of one dataset record line, in serialization order.
_RECORD_KEYS = ("mappers", "reducers", "input_size_bytes", "total_cycles")

AGGREGATION_METHODS = ("mean", "median")


class DatasetFormatError(ValueError):
    """A dataset file line that cannot be parsed.  ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class JobRecord:
    """One profiled job execution, reduced to its total CPU cost."""

    mappers: int
    reducers: int
    input_size_bytes: int
    total_cycles: float

    def __post_init__(self):
        if self.mappers < 1:
            raise ValueError(f"mappers must be >= 1, got {self.mappers}")
        if self.reducers < 1:
            raise ValueError(f"reducers must be >= 1, got {self.reducers}")
        if self.input_size_bytes < 1:
            raise ValueError(
                f"input_size_bytes must be >= 1, got {self.input_size_bytes}"
            )
        if not (math.isfinite(self.total_cycles) and self.total_cycles >= 0.0):
            raise ValueError(
                f"total_cycles must be finite and >= 0, got {self.total_cycles}"
            )

    @property
    def config(self) -> tuple[int, int]:
        return (self.mappers, self.reducers)


@dataclass(frozen=True)
class ProfileDataset:
    """An ordered set of job records for one application."""

    application: str
    records: tuple[JobRecord, ...]

    def __post_init__(self):
        if not self.application:
            raise ValueError("application name must be non-empty")
        if "\n" in self.application:
            raise ValueError("application name must not contain newlines")
        object.__setattr__(self, "records", tuple(self.records))

    def __len__(self) -> int:
        return len(self.records)


def aggregate_repeats(dataset: ProfileDataset, method: str = "mean") -> ProfileDataset:
    """Collapse repeated runs of the same configuration into one record.

    Records sharing (mappers, reducers, input_size_bytes) are replaced by a
    single record whose total_cycles is the mean (or median) of the group.
    The result is sorted by that key, so aggregation is a canonical form:
    applying it twice returns the same dataset.
    """
    if method not in AGGREGATION_METHODS:
        raise ValueError(
            f"unknown aggregation method {method!r}, expected one of {AGGREGATION_METHODS}"
        )
    if not dataset.records:
        raise ValueError("cannot aggregate an empty dataset")

    groups: dict[tuple[int, int, int], list[float]] = {}
    for rec in dataset.records:
        key = (rec.mappers, rec.reducers, rec.input_size_bytes)
        groups.setdefault(key, []).append(rec.total_cycles)

    out = []
    for key in sorted(groups):
        values = groups[key]
        if method == "mean":
            cycles = math.fsum(values) / len(values)
        else:
            cycles = float(statistics.median(values))
        out.append(JobRecord(key[0], key[1], key[2], cycles))
    return ProfileDataset(dataset.application, tuple(out))


def training_grid(values: Sequence[int]) -> list[tuple[int, int]]:
    """Full cross product of mapper x reducer counts, row-major.

    ``values`` must be non-empty and strictly increasing; the result has
    ``len(values) ** 2`` configurations.
    """
    if len(values) == 0:
        raise ValueError("grid values must be non-empty")
    for a, b in zip(values, values[1:]):
        if b <= a:
            raise ValueError(f"grid values must be strictly increasing, got {a} before {b}")
    return [(m, r) for m in values for r in values]


def random_eval_configs(count: int, low: int, high: int, seed: int) -> list[tuple[int, int]]:
    """Draw ``count`` (mappers, reducers) pairs uniformly from [low, high].

    Bounds are inclusive.  Draws come from numpy's default generator (PCG64),
    so a fixed seed reproduces the same configuration list on any platform.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if low < 1 or low > high:
        raise ValueError(f"need 1 <= low <= high, got low={low} high={high}")
    rng = np.random.default_rng(seed)
    pairs = rng.integers(low, high + 1, size=(count, 2))
    return [(int(m), int(r)) for m, r in pairs]


# ---------------------------------------------------------------------------
# dataset file format


def format_dataset(dataset: ProfileDataset) -> str:
    """Serialize to the JSON-lines dataset format.

    First line is ``# application=<name>``; every following line is one JSON
    object with keys mappers, reducers, input_size_bytes, total_cycles.
    Floats use Python repr (shortest round-trip form), so writing a parsed
    dataset reproduces the file byte for byte.
    """
    lines = [f"# application={dataset.application}"]
    for rec in dataset.records:
        lines.append(
            json.dumps(
                {
                    "mappers": rec.mappers,
                    "reducers": rec.reducers,
                    "input_size_bytes": rec.input_size_bytes,
                    "total_cycles": float(rec.total_cycles),
                }
            )
        )
    return "\n".join(lines) + "\n"


def _record_from_json(lineno: int, text: str) -> JobRecord:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(lineno, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise DatasetFormatError(lineno, "record line must be a JSON object")
    if set(obj) != set(_RECORD_KEYS):
        raise DatasetFormatError(
            lineno,
            f"record keys must be exactly {list(_RECORD_KEYS)}, got {sorted(obj)}",
        )
    for key in ("mappers", "reducers", "input_size_bytes"):
        if isinstance(obj[key], bool) or not isinstance(obj[key], int):
            raise DatasetFormatError(lineno, f"{key} must be an integer")
    if isinstance(obj["total_cycles"], bool) or not isinstance(
        obj["total_cycles"], (int, float)
    ):
        raise DatasetFormatError(lineno, "total_cycles must be a number")
    try:
        return JobRecord(
            mappers=obj["mappers"],
            reducers=obj["reducers"],
            input_size_bytes=obj["input_size_bytes"],
            total_cycles=float(obj["total_cycles"]),
        )
    except ValueError as exc:
        raise DatasetFormatError(lineno, str(exc)) from exc


def parse_dataset(text: str | bytes) -> ProfileDataset:
    """Parse the JSON-lines dataset format; errors name the offending line."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header = None
    records = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line:
            continue
        if header is None:
            if not line.startswith("# application="):
                raise DatasetFormatError(
                    lineno, "first line must be '# application=<name>'"
                )
            header = line[len("# application=") :]
            if not header:
                raise DatasetFormatError(lineno, "application name must be non-empty")
            continue
        if line.startswith("#"):
            raise DatasetFormatError(lineno, "unexpected comment line after header")
        records.append(_record_from_json(lineno, line))
    if header is None:
        raise DatasetFormatError(1, "missing '# application=' header line")
    return ProfileDataset(header, tuple(records))


def read_dataset_file(path: str | Path) -> ProfileDataset:
    return parse_dataset(Path(path).read_text(encoding="utf-8"))


def write_dataset_file(path: str | Path, dataset: ProfileDataset) -> None:
    Path(path).write_text(format_dataset(dataset), encoding="utf-8")


def merge_datasets(datasets: Iterable[ProfileDataset]) -> ProfileDataset:
    """Concatenate datasets that all describe the same application."""
    datasets = list(datasets)
    if not datasets:
        raise ValueError("nothing to merge")
    names = {ds.application for ds in datasets}
    if len(names) != 1:
        raise ValueError(f"datasets describe different applications: {sorted(names)}")
    records: list[JobRecord] = []
    for ds in datasets:
        records.extend(ds.records)
    return ProfileDataset(datasets[0].application, tuple(records))
