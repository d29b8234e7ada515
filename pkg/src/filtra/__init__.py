"""Exact verification of Hilbert coefficient inequalities for admissible
filtrations on concrete Noetherian local rings."""

from .fields import QQ, PrimeField, Rationals, field_from_descriptor
from .ideals import IdealHandle, LocalRing
from .filtration import (adic_filtration, explicit_filtration, find_reduction,
                         ratliff_rush_filtration, reduction_system,
                         verify_admissible)
from .checkers import (BoundaryData, EquivalenceViolation, compute_boundary_data,
                       ensure_consistent, evaluate_conditions,
                       evaluate_structural, run_checks)
from .config import JobConfig, load_config, parse_config
from .report import run_job, to_json, to_markdown

__version__ = "0.1.0"

__all__ = [
    "QQ", "PrimeField", "Rationals", "field_from_descriptor",
    "IdealHandle", "LocalRing",
    "adic_filtration", "explicit_filtration", "ratliff_rush_filtration",
    "reduction_system", "find_reduction", "verify_admissible",
    "BoundaryData", "EquivalenceViolation", "compute_boundary_data",
    "ensure_consistent", "evaluate_conditions", "evaluate_structural",
    "run_checks",
    "JobConfig", "load_config", "parse_config",
    "run_job", "to_json", "to_markdown",
    "__version__",
]
