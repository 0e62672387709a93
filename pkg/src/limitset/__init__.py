"""Exact computations on limit sets of cellular automata over shift spaces."""

from .automata import CellularAutomaton, apply_to_pattern, apply_to_periodic, compose, image_presentation, lagrange_lift
from .core import BINARY, FiniteAlphabet, GeneratedConfig, Interval, Pattern, PeriodicConfig
from .dynamics import NilpotencyBudget, image_chain, limit_set, nilpotency, omega_in_fixed_points
from .errors import DomainError, FormatError, LimitSetError, RangeError, ResourceError
from .shifts import (
    FiniteSubshift,
    SoficPresentation,
    Sft,
    canonical_presentation,
    check_mixing,
    equal_subshifts,
    periodic_points,
    window_language,
)
from .spacetime import build as spacetime_system

__all__ = [
    "BINARY",
    "CellularAutomaton",
    "DomainError",
    "FiniteAlphabet",
    "FiniteSubshift",
    "FormatError",
    "GeneratedConfig",
    "Interval",
    "LimitSetError",
    "NilpotencyBudget",
    "Pattern",
    "PeriodicConfig",
    "RangeError",
    "ResourceError",
    "Sft",
    "SoficPresentation",
    "apply_to_pattern",
    "apply_to_periodic",
    "canonical_presentation",
    "check_mixing",
    "compose",
    "equal_subshifts",
    "image_chain",
    "image_presentation",
    "lagrange_lift",
    "limit_set",
    "nilpotency",
    "omega_in_fixed_points",
    "periodic_points",
    "spacetime_system",
    "window_language",
]
