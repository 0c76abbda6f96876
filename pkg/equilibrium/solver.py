"""Critical endpoint of the equilibrium support and the scalars derived from it.

Three independent routes locate a~:
  sigma_mass  - root of |sigma_a| = 1
  c_equation  - root in c = a^2/(a^2+b^2) of the stationarity equation of F_s
  endpoint    - root of the endpoint coefficient of the signed measure eta_a
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Optional

from scipy import optimize

from equilibrium.exceptions import ConsensusError, DomainError, NoRootError
from equilibrium.measures import (
  FieldParams,
  balayage_mass,
  interval_energy,
  mass_loss_factor,
  mass_loss_shape,
  sigma_energy_constant,
  sigma_mass,
  signed_endpoint_coeff,
)
from equilibrium.quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from equilibrium.specfun import gamma_fn, hyp2f1

CONSENSUS_TOL = 1e-6
MAX_BRACKET_STEPS = 60
_C_LO = 1e-12
_C_HI = 1.0 - 1e-12


@dataclass(frozen=True)
class RootBracket:
  """Interval [lo, hi] on which a continuous function changes sign."""
  lo: float
  hi: float
  f_lo: float
  f_hi: float

  def __post_init__(self):
    if self.f_lo * self.f_hi > 0:
      raise DomainError(f"no sign change on [{self.lo}, {self.hi}]: f = ({self.f_lo}, {self.f_hi})")


@dataclass(frozen=True)
class SolverReport:
  """Critical endpoint a~ with the scalars that depend on it."""
  s: float
  q: float
  b: float
  a_tilde: float
  c: float
  d: float
  m_a_tilde: float
  mass_loss: float
  F_Q: float
  ms_value: float
  per_method: Dict[str, float] = field(default_factory=dict)
  consensus_spread: float = 0.0

  def to_dict(self) -> dict:
    return asdict(self)

  @classmethod
  def from_dict(cls, data: dict) -> "SolverReport":
    return cls(**data)


def expand_bracket(fn: Callable[[float], float], start: float,
                   max_steps: int = MAX_BRACKET_STEPS) -> RootBracket:
  """Bracket the sign change of a function that is negative for small x and positive for large x.

  Doubles upward from start while fn < 0, otherwise halves downward while fn > 0.
  """
  lo = hi = start
  f_lo = f_hi = fn(start)
  for _ in range(max_steps):
    if f_lo <= 0 <= f_hi and lo < hi:
      return RootBracket(lo, hi, f_lo, f_hi)
    if f_hi < 0:
      lo, f_lo = hi, f_hi
      hi *= 2.0
      f_hi = fn(hi)
    else:
      hi, f_hi = lo, f_lo
      lo *= 0.5
      f_lo = fn(lo)
  raise NoRootError(f"no sign change found within {max_steps} doublings/halvings of {start}")


def _solve(fn: Callable[[float], float], bracket: RootBracket, xtol: float) -> float:
  if bracket.lo == bracket.hi:
    return bracket.lo
  return float(optimize.brentq(fn, bracket.lo, bracket.hi, xtol=xtol, rtol=1e-14, maxiter=500))


# ---------------------------------------------------------------------------
# Mhaskar-Saff functional
# ---------------------------------------------------------------------------

def robin_potential_at_z(s: float, a: float, b: float) -> float:
  """Potential of the Robin measure of [-a, a] at bi: (a^2+b^2)^(-s/2) 2F1(s/2, (1+s)/2; 1+s/2; a^2/(a^2+b^2))."""
  if a <= 0 or b <= 0:
    raise DomainError(f"a and b must be positive, got a = {a}, b = {b}")
  big = a * a + b * b
  return big ** (-0.5 * s) * hyp2f1(0.5 * s, 0.5 * (1 + s), 1 + 0.5 * s, a * a / big)


def ms_functional(params: FieldParams, a: float) -> float:
  """F_s(a) = W_s(a) - q U^omega(bi) for the interval [-a, a]."""
  return interval_energy(params.s, a) - params.q * robin_potential_at_z(params.s, a, params.b)


def ms_functional_closed_form(params: FieldParams, a: float) -> float:
  """F_s(a) = Gamma(1+s) a^-s g(c, s) / (2^s Gamma((1+s)/2))."""
  s, q, b = params.s, params.q, params.b
  c = a * a / (a * a + b * b)
  g = gamma_fn(0.5 * (1 - s)) - q * math.sqrt(math.pi) / gamma_fn(1 + 0.5 * s) * c ** (0.5 * s) \
    * hyp2f1(0.5 * s, 0.5 * (1 + s), 1 + 0.5 * s, c)
  return gamma_fn(1 + s) / (2 ** s * gamma_fn(0.5 * (1 + s))) * a ** (-s) * g


def balayage_mass_closed_form(params: FieldParams, a: float) -> float:
  """m_a = U^omega(bi) / W_s(a)."""
  return robin_potential_at_z(params.s, a, params.b) / interval_energy(params.s, a)


# ---------------------------------------------------------------------------
# Critical endpoint
# ---------------------------------------------------------------------------

def c_equation_residual(params: FieldParams, c: float) -> float:
  """c^(s/2) (F_s(c) - (1-c) G_s(c)) - Gamma((1-s)/2) Gamma(1+s/2) / (q sqrt(pi))."""
  s = params.s
  f_s = hyp2f1(0.5 * s, 0.5 * (1 + s), 1 + 0.5 * s, c)
  g_s = hyp2f1(1 + 0.5 * s, 0.5 * (1 + s), 1 + 0.5 * s, c)
  target = gamma_fn(0.5 * (1 - s)) * gamma_fn(1 + 0.5 * s) / (params.q * math.sqrt(math.pi))
  return c ** (0.5 * s) * (f_s - (1 - c) * g_s) - target


def critical_c(params: FieldParams) -> float:
  """Root c in (0, 1) of the stationarity equation of F_s (q > 1)."""
  params.require_admissible()
  residual = lambda c: c_equation_residual(params, c)
  bracket = RootBracket(_C_LO, _C_HI, residual(_C_LO), residual(_C_HI))
  return _solve(residual, bracket, xtol=1e-13)


def endpoint_from_c(b: float, c: float) -> float:
  return b * math.sqrt(c / (1 - c))


def _route_sigma_mass(params: FieldParams, quad_config: QuadratureConfig) -> float:
  fn = lambda a: sigma_mass(params, a, quad_config) - 1.0
  bracket = expand_bracket(fn, params.b)
  return _solve(fn, bracket, xtol=1e-11 * bracket.hi)


def _route_endpoint_coeff(params: FieldParams, quad_config: QuadratureConfig) -> float:
  # the coefficient is positive for small a and negative past a~
  fn = lambda a: -signed_endpoint_coeff(params, a, quad_config)
  bracket = expand_bracket(fn, params.b)
  return _solve(fn, bracket, xtol=1e-11 * bracket.hi)


def critical_endpoint(params: FieldParams, quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> SolverReport:
  """a~ by three independent routes, with m_a~, mass loss, F_Q and F_s(a~)."""
  params.require_admissible()
  c = critical_c(params)
  per_method = {
    'c_equation': endpoint_from_c(params.b, c),
    'sigma_mass': _route_sigma_mass(params, quad_config),
    'endpoint_coeff': _route_endpoint_coeff(params, quad_config),
  }
  estimates = list(per_method.values())
  spread = max(estimates) - min(estimates)
  a_tilde = per_method['c_equation']
  if spread > CONSENSUS_TOL * a_tilde:
    raise ConsensusError(f"endpoint routes disagree by {spread:.3e}: {per_method}")

  m_a = balayage_mass(params, a_tilde, quad_config).value
  return SolverReport(
    s=params.s,
    q=params.q,
    b=params.b,
    a_tilde=a_tilde,
    c=c,
    d=a_tilde / params.b,
    m_a_tilde=m_a,
    mass_loss=mass_loss(params, a_tilde),
    F_Q=equilibrium_constant(params, a_tilde),
    ms_value=ms_functional(params, a_tilde),
    per_method=per_method,
    consensus_spread=spread,
  )


def _resolve_endpoint(params: FieldParams, a_tilde: Optional[float]) -> float:
  params.require_admissible()
  return endpoint_from_c(params.b, critical_c(params)) if a_tilde is None else a_tilde


def mass_loss(params: FieldParams, a_tilde: float = None) -> float:
  """1 - m_a~ = 1 - 1/q - f(s) h(a~/b, s)."""
  a_tilde = _resolve_endpoint(params, a_tilde)
  return 1.0 - 1.0 / params.q - mass_loss_factor(params.s) * mass_loss_shape(a_tilde / params.b, params.s)


def equilibrium_constant(params: FieldParams, a_tilde: float = None) -> float:
  """F_Q = -q b^(1-s) / sqrt(a~^2 + b^2)."""
  return sigma_energy_constant(params, _resolve_endpoint(params, a_tilde))
