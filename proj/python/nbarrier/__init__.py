"""N-barrier bounds and traveling waves for Lotka-Volterra competition systems."""

from ._core import (
    ConvergenceError,
    Error,
    LVSystem,
    ValidationError,
    barriers,
    check_hypothesis,
    check_nonexistence,
    compare_bounds,
    containment_sup,
    enumerate_equilibria,
    load_system,
    lv_box,
    nbmp_bounds,
    residual,
    sigma4_threshold,
    solve_wave,
    tangent_lambda2,
    verify_bounds,
)

__all__ = [
    "ConvergenceError",
    "Error",
    "LVSystem",
    "ValidationError",
    "barriers",
    "check_hypothesis",
    "check_nonexistence",
    "compare_bounds",
    "containment_sup",
    "enumerate_equilibria",
    "load_system",
    "lv_box",
    "nbmp_bounds",
    "residual",
    "sigma4_threshold",
    "solve_wave",
    "tangent_lambda2",
    "verify_bounds",
]
