"""
The whole pipeline on synthetic data
====================================

Ground truth -> per-machine traces -> cycle totals -> profile dataset
-> quadratic fit -> evaluation, entirely in memory.  The same flow is
available from the command line:

    mrcycles synth --truth truth.json --traces runs/
    mrcycles ingest runs/*.csv --output profiled.jsonl
    mrcycles fit profiled.jsonl --output model.json
    mrcycles eval --model model.json --input holdout.jsonl
"""

from mrcycles import (
    GroundTruth,
    ModelCoefficients,
    aggregate_repeats,
    evaluate,
    fit,
    generate_dataset,
    generate_trace,
    job_record_from_trace,
    predict,
    random_eval_configs,
    surface,
    total_cycles,
    with_seed,
)
from mrcycles.profiles import DEFAULT_TRAINING_GRID, ProfileDataset, training_grid

truth = GroundTruth(
    ModelCoefficients(5.0e9, 2.0e8, -3.0e6, 1.5e8, -2.0e6),
    noise_sigma=0.01,
    seed=42,
    base_size_bytes=12 * 1024**3,
    application="wordcount",
)

# 1. Simulate profiling runs as honest-to-goodness traces: machines,
#    clock rates, per-second utilization samples.  The generator rounds
#    each target to a representable quantum so the trace's cycle total
#    is independent of how many machines it is spread over.
configs = training_grid(DEFAULT_TRAINING_GRID)
records = []
for m, r in configs:
    trace = generate_trace(truth, m, r, machines=4)
    records.append(job_record_from_trace(trace))
profiled = ProfileDataset(truth.application, tuple(records))
print(f"simulated {len(profiled)} profiling runs on a {len(configs)}-point grid")

one = generate_trace(truth, 4, 4, machines=4)
print(
    f"example trace: {len(one.machines)} machines, "
    f"{sum(len(mt.samples) for mt in one.machines)} samples, "
    f"{total_cycles(one):.6g} cycles"
)

# 2. Fit the quadratic surface to the profiled totals.
model = fit(aggregate_repeats(profiled))
print("\nfitted:", ", ".join(f"{c:.4g}" for c in model.as_array()))

# 3. Judge it against fresh noisy observations at configurations the
#    grid never visited.
holdout_configs = random_eval_configs(30, 4, 32, seed=99)
holdout = generate_dataset(with_seed(truth, 4242), holdout_configs, 1)
actual = [rec.total_cycles for rec in holdout.records]
predicted = [predict(model, rec.mappers, rec.reducers) for rec in holdout.records]

report = evaluate(actual, predicted)
print(
    f"\nholdout: mape {report.mape:.2%}, pred25 {report.pred25:.0%}, "
    f"nrmse {report.nrmse:.2%}"
)

# Sanity: the fitted surface should sit close to the noise-free truth.
worst = max(
    abs(predict(model, m, r) - surface(with_seed(truth, 0), m, r))
    / surface(with_seed(truth, 0), m, r)
    for m, r in holdout_configs
)
print(f"worst deviation from the noise-free surface: {worst:.2%}")
