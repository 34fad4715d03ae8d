"""Equitable scheduling over several days: exact solvers, an approximation for
identical days, hardness reductions and a command-line front end."""

from .core import (
    CapExceeded,
    Day,
    EquityReport,
    Instance,
    InstanceError,
    Job,
    Solution,
    Variant,
    canonical_permutation,
    realizable_set,
    verify_solution,
)

__all__ = [
    "CapExceeded",
    "Day",
    "EquityReport",
    "Instance",
    "InstanceError",
    "Job",
    "Solution",
    "Variant",
    "canonical_permutation",
    "realizable_set",
    "verify_solution",
]

__version__ = "0.1.0"
