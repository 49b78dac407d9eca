# Rescale a fitted model to a different input size.
#
# A cost surface is fitted at one input size (say 12 GiB).  To predict
# the same configuration at 24 GiB, fit a straight line through
# (input_size, cycles) observations and multiply the prediction by the
# ratio of the line at the target size over the line at the trained
# size.  At the trained size the ratio is exactly 1, so scaling is a
# no-op there.

from mrcycles import (
    FitSummary,
    JobRecord,
    ModelCoefficients,
    ProfileDataset,
    fit_scaling_from_dataset,
    predict,
    scale_prediction,
)

GIB = 1024**3
TRAINED_SIZE = 12 * GIB

model = ModelCoefficients(
    5.0e9, 2.0e8, -3.0e6, 1.5e8, -2.0e6,
    fitted_on=FitSummary(record_count=64, input_size_bytes=TRAINED_SIZE),
)

# Size observations: the same configuration profiled at four sizes.
# Cycles grow roughly linearly with bytes read.
size_runs = ProfileDataset(
    "wordcount",
    (
        JobRecord(8, 8, 3 * GIB, 2.1e9),
        JobRecord(8, 8, 6 * GIB, 4.05e9),
        JobRecord(8, 8, 12 * GIB, 8.02e9),
        JobRecord(8, 8, 24 * GIB, 15.9e9),
    ),
)
line = fit_scaling_from_dataset(size_runs)
print(f"size line: cycles = {line.slope:.6g} * bytes + {line.intercept:.6g}")
print(f"fitted on {line.fitted_points} points")

base = predict(model, 16, 16)
print(f"\nprediction at trained size (12 GiB): {base:.6g} cycles")

for factor in (0.5, 1, 2, 4):
    target = int(TRAINED_SIZE * factor)
    scaled = scale_prediction(model, line, 16, 16, target)
    print(f"  at {target / GIB:5.1f} GiB: {scaled:.6g} cycles ({scaled / base:.3f}x)")
