from .config import ConfigError, ExperimentConfig, load_config, parse_config
from .metrics import COLUMNS, MetricsWriter, TraceWriter, population_metrics
from .runner import (RunFailure, RunResult, TrialRecord, build_env,
                     build_population, optimal_probe_value, replicate_seeds,
                     run_mdp_trial, run_q_trial, run_replicates, run_single)
from .stability import StabilityTracker, detect_stability
from .summarize import (ENDPOINT_METRICS, MetricSummary, csv_endpoints,
                        format_summary, summarize_groups, welch_t)

__all__ = [
    "ConfigError", "ExperimentConfig", "load_config", "parse_config",
    "COLUMNS", "MetricsWriter", "TraceWriter", "population_metrics",
    "RunFailure", "RunResult", "TrialRecord", "build_env",
    "build_population", "optimal_probe_value", "replicate_seeds",
    "run_mdp_trial", "run_q_trial", "run_replicates", "run_single",
    "StabilityTracker", "detect_stability", "ENDPOINT_METRICS",
    "MetricSummary", "csv_endpoints", "format_summary", "summarize_groups",
    "welch_t",
]
