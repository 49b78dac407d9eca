"""Per-machine CPU-utilization traces and their reduction to clock cycles.

A job trace holds, for every machine that took part in a job, a sequence of
1-second utilization samples (fraction of one CPU in [0, 1]) together with
that machine's clock frequency.  The quantity of interest is the total number
of CPU clock cycles the job consumed across the whole cluster:

    total = sum over machines k of  (sum of samples u_i on k) * f_clock_k

which is what :func:`total_cycles` computes.  Multiplying each sample by its
machine's clock first and accumulating all products with error-free summation
(``math.fsum``) makes the result depend only on the multiset of per-sample
cycle contributions -- not on how samples are grouped into machines or on
their order.  That exactness is load-bearing: tests assert bit-identical
totals when work is redistributed across machines.

On disk a trace is a CSV body preceded by a ``#`` header block; see
:func:`format_trace` for the exact layout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .profiles import JobRecord

#: Column header of the CSV sample section.
TRACE_COLUMNS = "machine_id,clock_frequency_hz,elapsed_second,utilization"

_META_KEYS = ("job_id", "mappers", "reducers", "input_size_bytes")


class TraceFormatError(ValueError):
    """A trace file that violates the on-disk format.  ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UtilizationRangeError(TraceFormatError):
    """A utilization sample outside [0, 1]."""


class DuplicateSampleError(TraceFormatError):
    """Two samples for the same machine and elapsed second."""


class ClockMismatchError(TraceFormatError):
    """One machine reported under two different clock frequencies."""


@dataclass(frozen=True)
class CpuSample:
    """One 1-second utilization sample: fraction of a single CPU in use."""

    elapsed_second: int
    utilization: float

    def __post_init__(self):
        if self.elapsed_second < 0:
            raise ValueError(f"elapsed_second must be >= 0, got {self.elapsed_second}")
        if not (0.0 <= self.utilization <= 1.0):
            raise ValueError(
                f"utilization must be within [0, 1], got {self.utilization}"
            )


@dataclass(frozen=True)
class MachineTrace:
    machine_id: str
    clock_frequency_hz: float
    samples: tuple[CpuSample, ...]

    def __post_init__(self):
        if not self.machine_id:
            raise ValueError("machine_id must be non-empty")
        if not (math.isfinite(self.clock_frequency_hz) and self.clock_frequency_hz > 0):
            raise ValueError(
                f"clock_frequency_hz must be finite and > 0, got {self.clock_frequency_hz}"
            )
        object.__setattr__(self, "samples", tuple(self.samples))
        for a, b in zip(self.samples, self.samples[1:]):
            if b.elapsed_second <= a.elapsed_second:
                raise ValueError(
                    f"samples must be strictly increasing in elapsed_second "
                    f"({a.elapsed_second} then {b.elapsed_second})"
                )

    def utilization_seconds(self) -> float:
        return math.fsum(s.utilization for s in self.samples)


@dataclass(frozen=True)
class JobTrace:
    """All machine traces recorded while one job ran."""

    job_id: str
    mappers: int
    reducers: int
    input_size_bytes: int
    machines: tuple[MachineTrace, ...]

    def __post_init__(self):
        if not self.job_id:
            raise ValueError("job_id must be non-empty")
        if "\n" in self.job_id or "," in self.job_id:
            raise ValueError("job_id must not contain newlines or commas")
        if self.mappers < 1 or self.reducers < 1:
            raise ValueError(
                f"mappers and reducers must be >= 1, got {self.mappers}, {self.reducers}"
            )
        if self.input_size_bytes < 1:
            raise ValueError(
                f"input_size_bytes must be >= 1, got {self.input_size_bytes}"
            )
        object.__setattr__(self, "machines", tuple(self.machines))
        seen = set()
        for m in self.machines:
            if m.machine_id in seen:
                raise ValueError(f"duplicate machine_id {m.machine_id!r}")
            seen.add(m.machine_id)


def total_cycles(job: JobTrace) -> float:
    """Total CPU clock cycles consumed by the job across all machines.

    Each sample contributes utilization * clock_frequency_hz cycles (samples
    cover one second each).  All contributions are accumulated with
    ``math.fsum``, so the result is the correctly rounded sum of the exact
    per-sample products: regrouping samples across machines with the same
    clock, or reordering them, cannot change the returned float.
    """
    return math.fsum(
        s.utilization * m.clock_frequency_hz for m in job.machines for s in m.samples
    )


def job_record_from_trace(job: JobTrace) -> JobRecord:
    """Reduce a trace to the dataset record used for model fitting."""
    return JobRecord(
        mappers=job.mappers,
        reducers=job.reducers,
        input_size_bytes=job.input_size_bytes,
        total_cycles=total_cycles(job),
    )


# ---------------------------------------------------------------------------
# trace file format


def format_trace(job: JobTrace) -> str:
    """Serialize a job trace to its CSV-with-header file form.

    Layout::

        # job_id=<id>
        # mappers=<int>
        # reducers=<int>
        # input_size_bytes=<int>
        machine_id,clock_frequency_hz,elapsed_second,utilization
        <machine>,<clock>,<second>,<utilization>
        ...

    Rows are grouped by machine in stored order with samples ascending by
    elapsed second.  Floats are written with repr, so parse/format round-trips
    are byte-identical.
    """
    lines = [
        f"# job_id={job.job_id}",
        f"# mappers={job.mappers}",
        f"# reducers={job.reducers}",
        f"# input_size_bytes={job.input_size_bytes}",
        TRACE_COLUMNS,
    ]
    for m in job.machines:
        clock = repr(m.clock_frequency_hz)
        for s in m.samples:
            lines.append(f"{m.machine_id},{clock},{s.elapsed_second},{s.utilization!r}")
    return "\n".join(lines) + "\n"


def _parse_int(lineno: int, name: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise TraceFormatError(lineno, f"{name} must be an integer, got {text!r}") from None


def _parse_float(lineno: int, name: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise TraceFormatError(lineno, f"{name} must be a number, got {text!r}") from None
    if not math.isfinite(value):
        raise TraceFormatError(lineno, f"{name} must be finite, got {text!r}")
    return value


def parse_trace(text: str | bytes) -> JobTrace:
    """Parse the trace file format.  All errors carry the 1-based line number.

    The header block must define job_id, mappers, reducers and
    input_size_bytes (in any order), followed by the exact CSV column line.
    A file with a valid header and no sample rows parses to a job with zero
    machines.  Sample rows may arrive in any order; machines keep first-seen
    order and each machine's samples are sorted by elapsed second.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    meta: dict[str, str] = {}
    lines = text.split("\n")
    i = 0
    lineno = 0
    # header block
    while i < len(lines):
        lineno = i + 1
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, sep, value = body.partition("=")
            key = key.strip()
            if not sep or key not in _META_KEYS:
                raise TraceFormatError(
                    lineno, f"unknown header line {line!r}; expected '# key=value' "
                    f"with key in {list(_META_KEYS)}"
                )
            if key in meta:
                raise TraceFormatError(lineno, f"duplicate header key {key!r}")
            meta[key] = value.strip()
            continue
        if line != TRACE_COLUMNS:
            raise TraceFormatError(
                lineno, f"expected column header {TRACE_COLUMNS!r}, got {line!r}"
            )
        break
    else:
        raise TraceFormatError(lineno or 1, "missing CSV column header line")

    missing = [k for k in _META_KEYS if k not in meta]
    if missing:
        raise TraceFormatError(lineno, f"missing header keys: {missing}")

    job_id = meta["job_id"]
    mappers = _parse_int(lineno, "mappers", meta["mappers"])
    reducers = _parse_int(lineno, "reducers", meta["reducers"])
    input_size = _parse_int(lineno, "input_size_bytes", meta["input_size_bytes"])

    order: list[str] = []
    clocks: dict[str, float] = {}
    samples: dict[str, dict[int, float]] = {}
    clock_lines: dict[str, int] = {}

    for j in range(i, len(lines)):
        lineno = j + 1
        line = lines[j].strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise TraceFormatError(
                lineno, f"expected 4 comma-separated fields, got {len(parts)}"
            )
        machine_id, clock_text, second_text, util_text = (p.strip() for p in parts)
        if not machine_id:
            raise TraceFormatError(lineno, "machine_id must be non-empty")
        clock = _parse_float(lineno, "clock_frequency_hz", clock_text)
        if clock <= 0:
            raise TraceFormatError(lineno, f"clock_frequency_hz must be > 0, got {clock}")
        second = _parse_int(lineno, "elapsed_second", second_text)
        if second < 0:
            raise TraceFormatError(lineno, f"elapsed_second must be >= 0, got {second}")
        util = _parse_float(lineno, "utilization", util_text)
        if not (0.0 <= util <= 1.0):
            raise UtilizationRangeError(
                lineno, f"utilization must be within [0, 1], got {util}"
            )
        if machine_id not in clocks:
            order.append(machine_id)
            clocks[machine_id] = clock
            clock_lines[machine_id] = lineno
            samples[machine_id] = {}
        elif clock != clocks[machine_id]:
            raise ClockMismatchError(
                lineno,
                f"machine {machine_id!r} previously reported clock "
                f"{clocks[machine_id]!r} (line {clock_lines[machine_id]})",
            )
        if second in samples[machine_id]:
            raise DuplicateSampleError(
                lineno, f"duplicate sample for machine {machine_id!r} second {second}"
            )
        samples[machine_id][second] = util

    machines = tuple(
        MachineTrace(
            machine_id=mid,
            clock_frequency_hz=clocks[mid],
            samples=tuple(
                CpuSample(sec, samples[mid][sec]) for sec in sorted(samples[mid])
            ),
        )
        for mid in order
    )
    return JobTrace(
        job_id=job_id,
        mappers=mappers,
        reducers=reducers,
        input_size_bytes=input_size,
        machines=machines,
    )


def read_trace_file(path: str | Path) -> JobTrace:
    return parse_trace(Path(path).read_text(encoding="utf-8"))


def write_trace_file(path: str | Path, job: JobTrace) -> None:
    Path(path).write_text(format_trace(job), encoding="utf-8")
