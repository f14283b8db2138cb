"""Numerical verification of pointwise slant submanifold geometry."""

from ._core import (
    __version__,
    builtin_names,
    check_kinds,
    eval_expr,
    run_example,
    run_scenario_file,
    run_scenario_text,
    slant_report,
)

__all__ = [
    "__version__",
    "builtin_names",
    "check_kinds",
    "eval_expr",
    "run_example",
    "run_scenario_file",
    "run_scenario_text",
    "slant_report",
]
