"""Python access to the safe-exploration core."""

import json

from ._colsafe import (
    BoundConfig,
    Benchmark,
    ConfigError,
    DimensionError,
    IoError,
    KernelKind,
    KernelSpec,
    benchmark_names,
    beta,
    beta_bar_bound,
    confidence_interval,
    eval_base,
    eval_scaled,
    make_benchmark,
    n_beta_bar,
    normalize_config,
    validate_kernel,
)
from ._colsafe import run_config as _run_config


def run(config):
    """Run one experiment. `config` is a dict or JSON text.

    Returns (summary dict, trace CSV text, env dict, converged flag).
    """
    text = config if isinstance(config, str) else json.dumps(config)
    out = _run_config(text)
    return json.loads(out["summary"]), out["trace_csv"], json.loads(out["env"]), out["converged"]


__all__ = [
    "BoundConfig",
    "Benchmark",
    "ConfigError",
    "DimensionError",
    "IoError",
    "KernelKind",
    "KernelSpec",
    "benchmark_names",
    "beta",
    "beta_bar_bound",
    "confidence_interval",
    "eval_base",
    "eval_scaled",
    "make_benchmark",
    "n_beta_bar",
    "normalize_config",
    "run",
    "validate_kernel",
]
