"""Steady-state heat transport through two XX-coupled qubits, with and without the Lamb shift."""

__version__ = "0.1.0"

from .model import (
    Eigensystem,
    HierarchyWarning,
    JumpOperator,
    JumpOperatorSet,
    SystemParams,
    check_hierarchy,
    eigensystem,
    jump_operators,
)
from .spectral import BathSpec, SpectralKind, bose_occupation, rate, spectral_density
from .pvquad import PvConfig, PvConvergenceError, pv_integral
from .lambshift import (
    LambShiftReport,
    SeriesConvergenceError,
    lamb_shift_report,
    level_shifts,
    matsubara_r,
    matsubara_r_estimate,
    transition_shifts,
)
from .transport import (
    CurrentReport,
    SecondLawViolation,
    SteadyState,
    current_report,
    heat_current,
    steady_state,
)
from .dynamics import build_liouvillian, evolve, steady_state_nullspace

__all__ = [
    "BathSpec",
    "CurrentReport",
    "Eigensystem",
    "HierarchyWarning",
    "JumpOperator",
    "JumpOperatorSet",
    "LambShiftReport",
    "PvConfig",
    "PvConvergenceError",
    "SecondLawViolation",
    "SeriesConvergenceError",
    "SpectralKind",
    "SteadyState",
    "SystemParams",
    "bose_occupation",
    "build_liouvillian",
    "check_hierarchy",
    "current_report",
    "eigensystem",
    "evolve",
    "heat_current",
    "jump_operators",
    "lamb_shift_report",
    "level_shifts",
    "matsubara_r",
    "matsubara_r_estimate",
    "pv_integral",
    "rate",
    "spectral_density",
    "steady_state",
    "steady_state_nullspace",
    "transition_shifts",
]
