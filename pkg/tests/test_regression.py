import numpy as np
import pytest

from mrcycles.profiles import JobRecord, ProfileDataset, training_grid
from mrcycles.regression import (
    COLUMN_NAMES,
    FitSummary,
    ModelCoefficients,
    NegativePredictionWarning,
    RankDeficiencyError,
    SingularMatrixError,
    UnderdeterminedError,
    build_design_matrix,
    fit,
    normal_equation_fit,
    predict,
    residual_error,
)

SIZE = 12884901888
KNOWN = ModelCoefficients(5.0e9, 2.0e8, -3.0e6, 1.5e8, -2.0e6)


def surface_dataset(coef, values, noise_rel=0.0, seed=0, repeats=1):
    rng = np.random.default_rng(seed)
    records = []
    for m, r in training_grid(values):
        clean = predict(coef, m, r)
        for _ in range(repeats):
            value = clean
            if noise_rel:
                value = clean * (1.0 + float(rng.normal(0.0, noise_rel)))
            records.append(JobRecord(m, r, SIZE, value))
    return ProfileDataset("app", tuple(records))


def coef_errors(fitted, truth):
    return [
        abs(a - b) / max(1.0, abs(b))
        for a, b in zip(fitted.as_array(), truth.as_array())
    ]


# ---------------------------------------------------------------------------
# design matrix


def test_design_matrix_single_row():
    H = build_design_matrix([(4, 8)])
    assert H.shape == (1, 5)
    assert H.tolist() == [[1.0, 4.0, 16.0, 8.0, 64.0]]


def test_design_matrix_ones_row():
    assert build_design_matrix([(1, 1)]).tolist() == [[1.0, 1.0, 1.0, 1.0, 1.0]]


def test_design_matrix_row_order():
    H = build_design_matrix([(2, 3), (3, 2)])
    assert H.tolist() == [[1.0, 2.0, 4.0, 3.0, 9.0], [1.0, 3.0, 9.0, 2.0, 4.0]]


def test_design_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        build_design_matrix([])
    with pytest.raises(ValueError):
        build_design_matrix([(0, 1)])


# ---------------------------------------------------------------------------
# fitting


def test_fit_recovers_known_surface():
    ds = surface_dataset(KNOWN, (4, 8, 16, 24, 32))
    fitted = fit(ds)
    assert max(coef_errors(fitted, KNOWN)) <= 1e-8


def test_fit_summary_records_provenance():
    ds = surface_dataset(KNOWN, (4, 8, 16, 24, 32))
    fitted = fit(ds)
    assert fitted.fitted_on == FitSummary(
        record_count=25,
        mappers_min=4,
        mappers_max=32,
        reducers_min=4,
        reducers_max=32,
        input_size_bytes=SIZE,
    )


def test_fit_summary_mixed_sizes_has_no_single_size():
    configs = [(1, 2), (2, 5), (5, 3), (7, 8), (3, 7), (6, 1)]
    records = tuple(
        JobRecord(m, r, 100 if i % 2 else 200, 1.0e9 + i * 1.0e7)
        for i, (m, r) in enumerate(configs)
    )
    fitted = fit(ProfileDataset("app", records))
    assert fitted.fitted_on.input_size_bytes is None


def test_fit_constant_observations_yield_intercept_only():
    c = 7.0e9
    records = tuple(JobRecord(m, r, SIZE, c) for m, r in training_grid((2, 5, 9, 14, 20)))
    fitted = fit(ProfileDataset("app", records))
    assert abs(fitted.a0 - c) <= 1e-9 * c
    for a in (fitted.a1, fitted.a2, fitted.a3, fitted.a4):
        assert abs(a) <= 1e-9 * c


def test_fit_underdetermined():
    records = tuple(
        JobRecord(m, r, SIZE, 1.0e9) for m, r in [(1, 1), (2, 2), (3, 3), (4, 4)]
    )
    with pytest.raises(UnderdeterminedError):
        fit(ProfileDataset("app", records))


def test_fit_rank_deficiency_names_columns():
    # every record shares one mapper count: [1, M, M^2] collapse to one direction
    records = tuple(JobRecord(8, r, SIZE, 1.0e9 + r) for r in range(1, 9))
    with pytest.raises(RankDeficiencyError) as err:
        fit(ProfileDataset("app", records))
    assert len(err.value.columns) == 2
    assert set(err.value.columns) <= {"intercept", "mappers", "mappers_squared"}
    for name in err.value.columns:
        assert name in str(err.value)
        assert name in COLUMN_NAMES


def test_fit_row_permutation_invariance():
    ds = surface_dataset(KNOWN, (4, 8, 16, 24, 32), noise_rel=0.02, seed=5)
    rng = np.random.default_rng(6)
    shuffled = list(ds.records)
    rng.shuffle(shuffled)
    a = fit(ds)
    b = fit(ProfileDataset("app", tuple(shuffled)))
    for ea, eb in zip(a.as_array(), b.as_array()):
        assert ea == pytest.approx(eb, rel=1e-12, abs=1e-3)


def test_fit_observation_scaling_linearity():
    ds = surface_dataset(KNOWN, (4, 8, 16, 24, 32), noise_rel=0.02, seed=5)
    base = fit(ds)
    scaled = fit(
        ProfileDataset(
            "app",
            tuple(
                JobRecord(r.mappers, r.reducers, r.input_size_bytes, 3.0 * r.total_cycles)
                for r in ds.records
            ),
        )
    )
    for ea, eb in zip(scaled.as_array(), base.as_array()):
        assert ea == pytest.approx(3.0 * eb, rel=1e-12, abs=1e-3)


def test_fit_observation_shift_moves_intercept_only():
    ds = surface_dataset(KNOWN, (4, 8, 16, 24, 32), noise_rel=0.02, seed=5)
    base = fit(ds)
    d = 1.0e9
    shifted = fit(
        ProfileDataset(
            "app",
            tuple(
                JobRecord(r.mappers, r.reducers, r.input_size_bytes, r.total_cycles + d)
                for r in ds.records
            ),
        )
    )
    assert shifted.a0 == pytest.approx(base.a0 + d, rel=1e-12)
    for ea, eb in zip(shifted.as_array()[1:], base.as_array()[1:]):
        assert ea == pytest.approx(eb, rel=1e-9, abs=1e-2)


def test_fit_residual_is_locally_optimal():
    ds = surface_dataset(KNOWN, (4, 8, 16, 24, 32), noise_rel=0.05, seed=9)
    fitted = fit(ds)
    best = residual_error(ds, fitted)
    arr = fitted.as_array()
    for i in range(5):
        for bump in (1e-3, -1e-3):
            perturbed = arr.copy()
            perturbed[i] = perturbed[i] * (1.0 + bump) if perturbed[i] else bump
            other = ModelCoefficients(*perturbed)
            assert residual_error(ds, other) >= best


def test_scale_columns_mode_matches_plain_fit():
    ds = surface_dataset(KNOWN, (4, 8, 16, 24, 32), noise_rel=0.02, seed=12)
    plain = fit(ds)
    scaled = fit(ds, scale_columns=True)
    for ea, eb in zip(plain.as_array(), scaled.as_array()):
        assert ea == pytest.approx(eb, rel=1e-9, abs=1e-2)


def test_normal_equation_agrees_with_qr():
    ds = surface_dataset(KNOWN, tuple(range(4, 36, 4)), noise_rel=0.01, seed=3, repeats=1)
    a = fit(ds)
    b = normal_equation_fit(ds)
    diffs = [
        abs(ea - eb) / max(1.0, abs(ea)) for ea, eb in zip(a.as_array(), b.as_array())
    ]
    assert max(diffs) <= 1e-6


def test_normal_equation_exact_interpolation():
    # five records, five coefficients: both solvers interpolate exactly
    configs = [(1, 1), (2, 5), (5, 2), (7, 7), (9, 3)]
    records = tuple(JobRecord(m, r, SIZE, predict(KNOWN, m, r)) for m, r in configs)
    ds = ProfileDataset("app", records)
    fitted = normal_equation_fit(ds)
    assert residual_error(ds, fitted) <= 1e-3 * KNOWN.a0 * 1e-9


def test_normal_equation_singular():
    records = tuple(JobRecord(8, r, SIZE, 1.0e9 + r) for r in range(1, 9))
    with pytest.raises(SingularMatrixError):
        normal_equation_fit(ProfileDataset("app", records))


def test_normal_equation_underdetermined():
    records = tuple(JobRecord(m, m, SIZE, 1.0) for m in (1, 2, 3, 4))
    with pytest.raises(UnderdeterminedError):
        normal_equation_fit(ProfileDataset("app", records))


# ---------------------------------------------------------------------------
# prediction and residuals


def test_predict_hand_values():
    coef = ModelCoefficients(1.0, 2.0, 3.0, 4.0, 5.0)
    assert predict(coef, 1, 1) == 15.0
    assert predict(coef, 2, 3) == 74.0
    assert predict(coef, 10, 1) == 330.0


def test_predict_is_reproducible():
    ds = surface_dataset(KNOWN, (4, 8, 16, 24, 32), noise_rel=0.03, seed=2)
    fitted = fit(ds)
    values = [predict(fitted, 13, 29) for _ in range(10)]
    assert len(set(values)) == 1


def test_predict_rejects_bad_configuration():
    with pytest.raises(ValueError):
        predict(KNOWN, 0, 1)
    with pytest.raises(ValueError):
        predict(KNOWN, 1, -2)


def test_predict_negative_warns_but_returns():
    coef = ModelCoefficients(1.0, -100.0, 0.0, 0.0, 0.0)
    with pytest.warns(NegativePredictionWarning):
        value = predict(coef, 1, 1)
    assert value == -99.0


def test_coefficients_must_be_finite():
    with pytest.raises(ValueError):
        ModelCoefficients(float("nan"), 0.0, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        ModelCoefficients(0.0, 0.0, float("inf"), 0.0, 0.0)


def test_residual_zero_for_perfect_model():
    ds = surface_dataset(KNOWN, (4, 8, 16, 24, 32))
    assert residual_error(ds, KNOWN) == 0.0


def test_residual_three_four_five():
    c = 1.0e6
    coef = ModelCoefficients(c, 0.0, 0.0, 0.0, 0.0)
    ds = ProfileDataset(
        "app", (JobRecord(2, 2, SIZE, c - 3.0), JobRecord(3, 3, SIZE, c + 4.0))
    )
    assert residual_error(ds, coef) == 5.0


def test_residual_single_record_is_abs():
    c = 1.0e6
    coef = ModelCoefficients(c, 0.0, 0.0, 0.0, 0.0)
    ds = ProfileDataset("app", (JobRecord(2, 2, SIZE, c + 3.0),))
    assert residual_error(ds, coef) == 3.0


def test_residual_rejects_empty_dataset():
    with pytest.raises(ValueError):
        residual_error(ProfileDataset("app", ()), KNOWN)
