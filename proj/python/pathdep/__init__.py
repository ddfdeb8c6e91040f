"""Gaussian DAG path-dependence queries (C++ core)."""

from ._core import (
    Model,
    PathdepError,
    check_lemma,
    conformance,
    info_proper,
    run_suite,
    search_counterexample,
    sweep,
)

__all__ = [
    "Model",
    "PathdepError",
    "check_lemma",
    "conformance",
    "info_proper",
    "run_suite",
    "search_counterexample",
    "sweep",
]
