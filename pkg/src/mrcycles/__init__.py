"""Profile MapReduce-style jobs in CPU clock cycles and predict the cost of
configurations that were never run.

The pipeline: per-machine utilization traces reduce to one total-cycles
number per job (:mod:`~mrcycles.traces`); repeated runs collapse into a
profile dataset (:mod:`~mrcycles.profiles`); a five-coefficient quadratic
surface over (mappers, reducers) is fitted by least squares
(:mod:`~mrcycles.regression`); predictions are scored
(:mod:`~mrcycles.metrics`) and carried to new input sizes by a linear
scaling line (:mod:`~mrcycles.scaling`).  :mod:`~mrcycles.synth` fabricates
all of the above from known ground truths, and :mod:`~mrcycles.cli` wraps
the pipeline in a command-line tool.
"""
from .metrics import (
    EvaluationReport,
    MetricDomainError,
    evaluate,
    mape,
    pred25,
    r2_prediction_spread,
    r2_score,
    render_report_table,
    rmse,
)
from .modelfile import ModelDocument, ModelFileError, read_model_file, write_model_file
from .profiles import (
    DEFAULT_TRAINING_GRID,
    DatasetFormatError,
    JobRecord,
    ProfileDataset,
    aggregate_repeats,
    random_eval_configs,
    read_dataset_file,
    training_grid,
    write_dataset_file,
)
from .regression import (
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
from .scaling import (
    ScalingDomainError,
    ScalingFitError,
    ScalingModel,
    fit_scaling,
    fit_scaling_from_dataset,
    scale_prediction,
)
from .synth import (
    GeneratorDomainError,
    GroundTruth,
    generate_dataset,
    generate_trace,
    read_truth_file,
    representable_cycles,
    surface,
    synthetic_job_target,
    with_seed,
    write_truth_file,
)
from .traces import (
    CpuSample,
    JobTrace,
    MachineTrace,
    TraceFormatError,
    format_trace,
    job_record_from_trace,
    parse_trace,
    read_trace_file,
    total_cycles,
    write_trace_file,
)

__version__ = "0.1.0"

__all__ = [
    "CpuSample",
    "DEFAULT_TRAINING_GRID",
    "DatasetFormatError",
    "EvaluationReport",
    "FitSummary",
    "GeneratorDomainError",
    "GroundTruth",
    "JobRecord",
    "JobTrace",
    "MachineTrace",
    "MetricDomainError",
    "ModelCoefficients",
    "ModelDocument",
    "ModelFileError",
    "NegativePredictionWarning",
    "ProfileDataset",
    "RankDeficiencyError",
    "ScalingDomainError",
    "ScalingFitError",
    "ScalingModel",
    "SingularMatrixError",
    "TraceFormatError",
    "UnderdeterminedError",
    "aggregate_repeats",
    "build_design_matrix",
    "evaluate",
    "fit",
    "fit_scaling",
    "fit_scaling_from_dataset",
    "format_trace",
    "generate_dataset",
    "generate_trace",
    "job_record_from_trace",
    "mape",
    "normal_equation_fit",
    "parse_trace",
    "pred25",
    "predict",
    "r2_prediction_spread",
    "r2_score",
    "random_eval_configs",
    "read_dataset_file",
    "read_model_file",
    "read_trace_file",
    "read_truth_file",
    "render_report_table",
    "representable_cycles",
    "residual_error",
    "rmse",
    "scale_prediction",
    "surface",
    "synthetic_job_target",
    "total_cycles",
    "training_grid",
    "with_seed",
    "write_dataset_file",
    "write_model_file",
    "write_trace_file",
    "write_truth_file",
]
