"""Shortcut-to-adiabaticity driving of one and two qubits, and the work and
irreversible entropy it costs."""

from .cdengine import EigenFrame, FrameError, build_eigenframe, counterdiabatic_numeric, verify_against_analytic
from .frontier import FrontierPoint, InfeasibleTarget, sweep_parameter, trace_frontier
from .models import DriveSchedule, SingleQubitModel, TwoQubitModel, schedule
from .propagator import EvolutionError, evolve
from .states import family, special_states
from .thermo import StrokeOutcome, stroke

__all__ = [
    "DriveSchedule",
    "EigenFrame",
    "EvolutionError",
    "FrameError",
    "FrontierPoint",
    "InfeasibleTarget",
    "SingleQubitModel",
    "StrokeOutcome",
    "TwoQubitModel",
    "build_eigenframe",
    "counterdiabatic_numeric",
    "evolve",
    "family",
    "schedule",
    "special_states",
    "stroke",
    "sweep_parameter",
    "trace_frontier",
    "verify_against_analytic",
]

__version__ = "0.1.0"
