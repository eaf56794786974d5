"""Proportional-fairness packing: primal, dual and reference solvers."""

from ._core import (
    FairpackError,
    Instance,
    duality_report,
    exit_code_for,
    generate_random,
    load_instance,
    log_utility,
    max_constraint_violation,
    reference_solve,
    run_distributed,
    save_instance,
    solve_dual,
    solve_primal,
    yl_stage,
)

__all__ = [
    "FairpackError",
    "Instance",
    "duality_report",
    "exit_code_for",
    "generate_random",
    "load_instance",
    "log_utility",
    "max_constraint_violation",
    "reference_solve",
    "run_distributed",
    "save_instance",
    "solve_dual",
    "solve_primal",
    "yl_stage",
]
