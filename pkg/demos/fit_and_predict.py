# Fit a quadratic cost surface to profiled jobs and predict unseen
# configurations.
#
# The model is total_cycles ~ a0 + a1*M + a2*M^2 + a3*R + a4*R^2 where
# M and R are the mapper and reducer counts.  Five coefficients, so any
# five sufficiently different configurations determine the surface;
# profiling a grid and averaging repeats buys robustness to noise.

import numpy as np

from mrcycles import (
    DEFAULT_TRAINING_GRID,
    JobRecord,
    ProfileDataset,
    aggregate_repeats,
    fit,
    predict,
    training_grid,
)

rng = np.random.default_rng(7)

# Pretend these came out of a profiling run: an 8x8 grid of (mappers,
# reducers), three repeats each, 1% measurement noise around a known
# quadratic ground truth.
TRUE = (5.0e9, 2.0e8, -3.0e6, 1.5e8, -2.0e6)


def true_cycles(m, r):
    return TRUE[0] + TRUE[1] * m + TRUE[2] * m * m + TRUE[3] * r + TRUE[4] * r * r


records = []
for m, r in training_grid(DEFAULT_TRAINING_GRID):
    for _ in range(3):
        noisy = true_cycles(m, r) * (1.0 + rng.normal(0.0, 0.01))
        records.append(JobRecord(m, r, 12 * 1024**3, noisy))

profiled = ProfileDataset("wordcount", tuple(records))
print(f"profiled {len(profiled)} jobs ({len(profiled) // 3} configurations x 3 repeats)")

# Average the repeats per configuration, then fit.
model = fit(aggregate_repeats(profiled))

print("\nfitted coefficients vs. truth:")
for name, got, want in zip(
    ("a0", "a1", "a2", "a3", "a4"), model.as_array(), TRUE
):
    print(f"  {name}: {got:14.6g}   (true {want:g})")

# Predict configurations the profiler never ran.
print("\npredictions at unseen configurations:")
for m, r in ((6, 10), (14, 22), (30, 5)):
    got = predict(model, m, r)
    want = true_cycles(m, r)
    print(
        f"  M={m:2d} R={r:2d}: predicted {got:.4g}, "
        f"true {want:.4g}, error {abs(got - want) / want:.2%}"
    )
