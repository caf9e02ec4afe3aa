"""Reunion probabilities of vicious walkers and their random-matrix limits."""

from .exact_sums import (
    Group,
    Method,
    ModelKind,
    MomentTable,
    ReunionQuery,
    ReunionResult,
    brute_force_reunion,
    build_moment_table,
    g1_poisson_dual,
    hankel_reunion,
    partition_function,
)

__version__ = "0.1.0"

__all__ = [
    "Group",
    "Method",
    "ModelKind",
    "MomentTable",
    "ReunionQuery",
    "ReunionResult",
    "brute_force_reunion",
    "build_moment_table",
    "g1_poisson_dual",
    "hankel_reunion",
    "partition_function",
]
