"""Adaptive quadrature for integrands with algebraic endpoint singularities.

Every integral is handed to scipy.integrate.quad (QUADPACK, adaptive
Gauss-Kronrod) only after the endpoint singularities have been removed by a
power substitution, so the adaptive refinement never stalls at an endpoint.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from scipy import integrate

from equilibrium.exceptions import (
  DivergentIntegralError,
  DomainError,
  NumericalWarning,
  QuadratureConvergenceError,
)

Integrand = Callable[[float], float]

# evaluations per Gauss-Kronrod 21-point panel
_PANEL_EVALUATIONS = 21
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class QuadratureResult:
  """Value of an integral with its error estimate and cost."""
  value: float
  abs_error_estimate: float
  evaluations: int

  def __post_init__(self):
    if self.abs_error_estimate < 0:
      raise DomainError("abs_error_estimate must be nonnegative")

  def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
    return QuadratureResult(
      self.value + other.value,
      self.abs_error_estimate + other.abs_error_estimate,
      self.evaluations + other.evaluations,
    )


@dataclass(frozen=True)
class SingularityProfile:
  """Algebraic exponents of an integrand at the two ends of its interval.

  An exponent alpha at endpoint e means f(x) ~ |x - e|**alpha there.
  """
  left_exponent: float = 0.0
  right_exponent: float = 0.0

  def __post_init__(self):
    if self.left_exponent <= -1 or self.right_exponent <= -1:
      raise DomainError(
        f"endpoint exponents must exceed -1 for integrability, got "
        f"({self.left_exponent}, {self.right_exponent})"
      )


REGULAR = SingularityProfile()


@dataclass(frozen=True)
class QuadratureConfig:
  """Tolerance and refinement budget shared by all integrals."""
  tol: float = 1e-10
  budget: int = 2 ** 20

  def __post_init__(self):
    if self.tol <= 0:
      raise DomainError(f"quadrature tolerance must be positive, got {self.tol}")
    if self.budget < 10 * _PANEL_EVALUATIONS:
      raise DomainError(f"refinement budget too small: {self.budget}")

  @property
  def max_panels(self) -> int:
    return self.budget // _PANEL_EVALUATIONS


DEFAULT_QUADRATURE = QuadratureConfig()


def _adaptive(g: Integrand, lo: float, hi: float, tol: float, config: QuadratureConfig) -> QuadratureResult:
  """Run QUADPACK on a bounded integrand and check the outcome against tol."""
  with warnings.catch_warnings():
    warnings.simplefilter('ignore', integrate.IntegrationWarning)
    out = integrate.quad(g, lo, hi, epsabs=tol, epsrel=tol, limit=config.max_panels, full_output=1)
  value, abserr, info = out[0], out[1], out[2]
  result = QuadratureResult(float(value), float(abserr), int(info['neval']))
  if len(out) > 3:
    target = max(tol, tol * abs(value))
    if not math.isfinite(value) or abserr > 100 * target:
      raise QuadratureConvergenceError(
        f"quadrature on [{lo}, {hi}] did not converge: {out[3]} (estimate {abserr:.3e})",
        partial=result,
      )
    warnings.warn(f"quadrature on [{lo}, {hi}] flagged: {out[3]}", NumericalWarning)
  return result


def _remove_endpoint_singularity(g: Integrand, length: float, exponent: float):
  """g(d) ~ d**exponent at the offset d = 0 from an endpoint; substitute d = w**p, p = 1/(1+exponent)."""
  if exponent >= 0:
    return g, 0.0, length
  p = 1.0 / (1.0 + exponent)

  def h(w):
    return g(w ** p) * p * w ** (p - 1.0)

  return h, 0.0, length ** (1.0 + exponent)


def integrate_finite(
  f: Integrand,
  lo: float,
  hi: float,
  profile: SingularityProfile = REGULAR,
  tol: float = None,
  config: QuadratureConfig = DEFAULT_QUADRATURE,
  from_lo: Integrand = None,
  from_hi: Integrand = None,
) -> QuadratureResult:
  """Integrate f over [lo, hi], where profile gives f's algebraic endpoint behaviour.

  from_lo(d) and from_hi(d) are f(lo + d) and f(hi - d) written in the offset d.
  Supplying them lets singular integrands be evaluated without forming lo + d or
  hi - d, which loses the relative accuracy of d next to the endpoint.
  """
  if not lo < hi:
    raise DomainError(f"integration interval must satisfy lo < hi, got [{lo}, {hi}]")
  tol = config.tol if tol is None else tol

  regular = profile.left_exponent >= 0 and profile.right_exponent >= 0
  if regular and from_lo is None and from_hi is None:
    return _adaptive(f, lo, hi, tol, config)

  if from_lo is None:
    from_lo = lambda d: f(lo + d)
  if from_hi is None:
    from_hi = lambda d: f(hi - d)
  half = 0.5 * (hi - lo)
  left = _adaptive(*_remove_endpoint_singularity(from_lo, half, profile.left_exponent), tol, config)
  right = _adaptive(*_remove_endpoint_singularity(from_hi, half, profile.right_exponent), tol, config)
  return left + right


def estimate_tail_exponent(f: Integrand, u_near: float = 1e6, u_far: float = 1e9) -> float:
  """Slope of log|f| against log u far out; -inf when f has already underflowed."""
  near, far = abs(f(u_near)), abs(f(u_far))
  if near == 0.0 or far == 0.0:
    return -math.inf
  return math.log(far / near) / math.log(u_far / u_near)


def integrate_semi_infinite(
  f: Integrand,
  origin_exponent: float = 0.0,
  tol: float = None,
  config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> QuadratureResult:
  """Integrate f over (0, inf) through the map u = v / (1 - v).

  f(u) may behave like u**origin_exponent at 0 and must decay faster than 1/u.
  """
  if not -1 < origin_exponent <= 0:
    raise DomainError(f"origin exponent must lie in (-1, 0], got {origin_exponent}")
  tail = estimate_tail_exponent(f)
  if tail >= -1.0 - 1e-3:
    raise DivergentIntegralError(f"integrand decays like u**{tail:.3f}; need faster than 1/u")
  # f ~ u**tail and du = dv / (1-v)**2 give (1-v)**(-tail-2) at v = 1
  right = min(0.0, max(-tail - 2.0, -0.999))

  def g(v):
    return f(v / (1.0 - v)) / ((1.0 - v) * (1.0 - v))

  def g_tail(y):
    # v = 1 - y; y underflows to 0 only where f has decayed
    if y <= 0.0:
      return 0.0
    return f((1.0 - y) / y) / y / y

  return integrate_finite(g, 0.0, 1.0, SingularityProfile(origin_exponent, right), tol, config, from_hi=g_tail)


def riesz_potential(density, s: float, x: float, config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
  """Riesz s-potential of an interval density at a real point x.

  density needs half_width, evaluate and profile (see measures.IntervalDensity);
  its at_edge(d, side), the density at side * (a - d), is used next to the
  endpoints when present. Inside the support the integral is split at x and the
  kernel singularity is removed on each side by a power substitution in |x - t|.
  """
  if not 0 < s < 1:
    raise DomainError(f"s must lie in (0, 1), got {s}")
  a = density.half_width
  rho = density.evaluate
  profile = density.profile
  at_edge = getattr(density, 'at_edge', None)
  if at_edge is None:
    at_edge = lambda d, side: rho(side * (a - d))

  # substituted offsets can underflow to 0; floor the distance at one ulp
  floor = _EPS * max(abs(x), a)

  def kern(r):
    return max(r, floor) ** (-s)

  def kernel(t):
    return rho(t) * kern(abs(x - t))

  def from_minus_a(d):
    return at_edge(d, -1) * kern(abs((x + a) - d))

  def from_plus_a(d):
    return at_edge(d, 1) * kern(abs((a - x) - d))

  if abs(x) >= a:
    left_exp = profile.left_exponent - (s if x == -a else 0.0)
    right_exp = profile.right_exponent - (s if x == a else 0.0)
    return integrate_finite(kernel, -a, a, SingularityProfile(left_exp, right_exp), config=config,
                            from_lo=from_minus_a, from_hi=from_plus_a).value

  left = integrate_finite(kernel, -a, x, SingularityProfile(profile.left_exponent, -s), config=config,
                          from_lo=from_minus_a, from_hi=lambda d: rho(x - d) * kern(d))
  right = integrate_finite(kernel, x, a, SingularityProfile(-s, profile.right_exponent), config=config,
                           from_lo=lambda d: rho(x + d) * kern(d), from_hi=from_plus_a)
  return (left + right).value
