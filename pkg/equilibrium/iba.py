"""Iterated balayage: shrink [-a, a] to the support of the positive part of eta_a until it stabilises."""

import warnings
from dataclasses import asdict, dataclass, field
from typing import List, Optional

from equilibrium.exceptions import DomainError, NumericalWarning
from equilibrium.measures import FieldParams, signed_endpoint_coeff, signed_eq_density
from equilibrium.quadrature import DEFAULT_QUADRATURE, QuadratureConfig

CONVERGED = 'converged'
POSITIVE_EVERYWHERE = 'positive_everywhere'
MAX_ITERATIONS = 'max_iterations'
NON_SHRINKING = 'non_shrinking'

DEFAULT_STOP_TOL = 1e-8
DEFAULT_MAX_ITER = 200
MAX_DOUBLINGS = 60


@dataclass
class IBATrace:
  """Nested half-widths a_0 >= a_1 >= ... with their endpoint coefficients."""
  s: float
  q: float
  b: float
  a_sequence: List[float] = field(default_factory=list)
  coeff_sequence: List[float] = field(default_factory=list)
  stop_reason: str = MAX_ITERATIONS
  limit_halfwidth: Optional[float] = None

  @property
  def iterations(self) -> int:
    return max(len(self.a_sequence) - 1, 0)

  def to_dict(self) -> dict:
    return asdict(self)

  @classmethod
  def from_dict(cls, data: dict) -> "IBATrace":
    return cls(**data)


def positive_support_halfwidth(params: FieldParams, a: float,
                               quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
  """Half-width a' of the support of the positive part of eta_a."""
  return signed_eq_density(params, a, quad_config).positive_halfwidth


def auto_start(params: FieldParams, quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> Optional[float]:
  """First a = 2^k b with a negative endpoint coefficient, or None when there is none."""
  a = params.b
  for _ in range(MAX_DOUBLINGS):
    if signed_endpoint_coeff(params, a, quad_config) < 0:
      return a
    a *= 2.0
  return None


def run_iba(params: FieldParams, a0: float = None, stop_tol: float = DEFAULT_STOP_TOL,
            max_iter: int = DEFAULT_MAX_ITER, quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> IBATrace:
  """Iterate a_{k+1} = a'(a_k) from a0 (chosen automatically when None)."""
  if stop_tol <= 0:
    raise DomainError(f"stop_tol must be positive, got {stop_tol}")
  if max_iter <= 0:
    raise DomainError(f"max_iter must be positive, got {max_iter}")
  trace = IBATrace(params.s, params.q, params.b)

  if params.q <= 1:
    # eta_a stays a positive measure for every a
    start = params.b if a0 is None else a0
    trace.a_sequence.append(start)
    trace.coeff_sequence.append(signed_endpoint_coeff(params, start, quad_config))
    trace.stop_reason = NON_SHRINKING
    trace.limit_halfwidth = start
    return trace

  if a0 is None:
    a0 = auto_start(params, quad_config)
    if a0 is None:
      trace.stop_reason = NON_SHRINKING
      return trace
  if a0 <= 0:
    raise DomainError(f"a0 must be positive, got {a0}")

  a = a0
  for _ in range(max_iter):
    report = signed_eq_density(params, a, quad_config)
    trace.a_sequence.append(a)
    trace.coeff_sequence.append(report.endpoint_coeff)
    if report.endpoint_coeff >= -stop_tol:
      trace.stop_reason = POSITIVE_EVERYWHERE if len(trace.a_sequence) == 1 else CONVERGED
      trace.limit_halfwidth = a
      return trace
    a_next = report.positive_halfwidth
    if abs(a_next - a) < stop_tol * a:
      trace.a_sequence.append(a_next)
      trace.coeff_sequence.append(signed_endpoint_coeff(params, a_next, quad_config))
      trace.stop_reason = CONVERGED
      trace.limit_halfwidth = a_next
      return trace
    a = a_next

  warnings.warn(f"iterated balayage stopped after {max_iter} steps at a = {a}", NumericalWarning)
  trace.stop_reason = MAX_ITERATIONS
  trace.limit_halfwidth = a
  return trace
