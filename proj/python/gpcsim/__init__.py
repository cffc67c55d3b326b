"""Python bindings for the gpc simulation core.

Angles passed to the circuit helpers are in degrees unless a function name
says otherwise; the angle convention defaults to "doubled" (Ry(2 theta)).
"""

from ._core import (
    bd_slack,
    check,
    excitation_weights,
    grid_scan,
    main,
    monte_carlo_volume_ratio,
    natural_occupations,
    occupations,
    occupations_measured,
    standard_error,
    statevector,
    violation_confidence,
)

__all__ = [
    "bd_slack",
    "check",
    "excitation_weights",
    "grid_scan",
    "main",
    "monte_carlo_volume_ratio",
    "natural_occupations",
    "occupations",
    "occupations_measured",
    "standard_error",
    "statevector",
    "violation_confidence",
]
