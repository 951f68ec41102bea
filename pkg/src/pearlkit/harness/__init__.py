from .score import (
    ErrorClassification,
    EvaluationReport,
    classify_errors,
    gain,
    overlap,
    score_predictions,
)
from .experiment import DETERMINISTIC_LIMITS, ExperimentResult, run_experiment

__all__ = [
    "ErrorClassification", "EvaluationReport", "classify_errors",
    "gain", "overlap", "score_predictions",
    "DETERMINISTIC_LIMITS", "ExperimentResult", "run_experiment",
]
