"""
Scoring predictions
===================

Four ways to ask "how good are these predictions?", and the compact
table that summarizes several workloads side by side.
"""

from mrcycles import (
    EvaluationReport,
    evaluate,
    mape,
    pred25,
    r2_prediction_spread,
    r2_score,
    render_report_table,
    rmse,
)

actual = [100.0, 200.0, 400.0, 800.0, 1600.0]
predicted = [104.0, 195.0, 410.0, 780.0, 1650.0]

# Mean absolute percentage error: average relative miss.
print(f"mape   = {mape(actual, predicted):.4f}")

# pred25: fraction of predictions within 25% of the actual value.
print(f"pred25 = {pred25(actual, predicted):.4f}")

# Root-mean-square error, raw and normalized by the mean actual.
raw, normalized = rmse(actual, predicted)
print(f"rmse   = {raw:.4g} (nrmse {normalized:.4f})")

# Two R^2 flavors: one measures how well predictions track actuals
# relative to the *prediction* spread, the other is the conventional
# coefficient of determination.
print(f"r2 (prediction spread) = {r2_prediction_spread(actual, predicted):.4f}")
print(f"r2 (conventional)      = {r2_score(actual, predicted):.4f}")

# evaluate() computes everything at once and never throws half-way: a
# metric whose preconditions fail is recorded as None with a note.
report = evaluate(actual, predicted)
print(f"\nevaluate -> n={report.n}, notes={report.notes}")

# Reports from several workloads render as one fixed-width table.
other = EvaluationReport(
    n=30, mape=0.0726, pred25=0.89, rmse_raw=None, nrmse=0.0028,
    r2_prediction_spread=0.76, r2_score=None,
    notes={"r2_score": "not recorded for this workload"},
)
print()
print(render_report_table([("wordcount", report), ("terasort", other)]), end="")
