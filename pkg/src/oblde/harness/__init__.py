"""Experiment harness: configuration, run farm, emission, comparison and timing."""

from .compare import compare_table, friedman_table
from .config import ALGORITHMS, ConfigError, ExperimentConfig
from .io import emit, read_csv, read_json, records_to_csv, records_to_json
from .runner import RunSpec, SummaryRow, expand, run_experiment, summarize
from .timing import TimingResult, bare_evaluations, reference_loop, timing_protocol

__all__ = [
    "ALGORITHMS", "ConfigError", "ExperimentConfig", "RunSpec", "SummaryRow", "TimingResult",
    "bare_evaluations", "compare_table", "emit", "expand", "friedman_table", "read_csv",
    "read_json", "records_to_csv", "records_to_json", "reference_loop", "run_experiment",
    "summarize", "timing_protocol",
]
