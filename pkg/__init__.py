"""
Riesz Equilibrium Package

This package computes equilibrium measures, balayages and signed equilibrium
measures for Riesz s-kernels on the real line in the field of an attracting
point charge, with a command-line front end.
"""

__version__ = "1.0.0"

# Import main components for easy access
try:
  from .riesz_equilibrium import EquilibriumRunner, ConfigLoader, RunConfig, RunArtifact
  from .equilibrium.measures import FieldParams
  from .equilibrium.solver import critical_endpoint, SolverReport
  from .equilibrium.iba import run_iba, IBATrace
except ImportError:
  # Allow package to be imported even if dependencies aren't available
  pass
