"""Gamma, Beta and Gauss hypergeometric evaluations.

scipy.special is the engine. These wrappers add the domain checks, typed errors
and the Gauss summation value used by the endpoint computations.

Note on the Gauss summation at the Mhaskar-Saff limit: for the family
(s/2, (1+s)/2; 1+s/2) the value at 1 is Gamma(1+s/2) Gamma((1-s)/2) / sqrt(pi).
Gamma((1+s)/2) in place of Gamma(1+s/2) would break the limit
(1-q) Gamma((1-s)/2) of g(c, s).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from equilibrium.exceptions import ConvergenceError, DomainError, PoleError, SpecFunOverflowError


@dataclass(frozen=True)
class SpecFunConfig:
  """Accuracy settings for the special functions."""
  target_rel_error: float = 1e-12
  max_series_terms: int = 10000

  def __post_init__(self):
    if not 0 < self.target_rel_error < 1e-6:
      raise DomainError(f"target_rel_error must lie in (0, 1e-6), got {self.target_rel_error}")
    if self.max_series_terms <= 0:
      raise DomainError(f"max_series_terms must be positive, got {self.max_series_terms}")


DEFAULT_CONFIG = SpecFunConfig()


def _is_nonpositive_integer(x: float) -> bool:
  return x <= 0 and float(x).is_integer()


def gamma_fn(x: float) -> float:
  """Gamma function for real x away from the poles."""
  if _is_nonpositive_integer(x):
    raise PoleError(f"Gamma has a pole at {x}")
  value = float(special.gamma(x))
  if not math.isfinite(value):
    raise SpecFunOverflowError(f"Gamma({x}) overflows double precision")
  return value


def beta_fn(p: float, r: float) -> float:
  """Euler Beta function B(p, r) = Gamma(p) Gamma(r) / Gamma(p + r)."""
  if p <= 0 or r <= 0:
    raise DomainError(f"Beta requires positive arguments, got ({p}, {r})")
  value = float(special.beta(p, r))
  if not math.isfinite(value) or value == 0.0:
    # fall back to the log form when one argument is tiny or both are large
    value = math.exp(special.betaln(p, r))
    if not math.isfinite(value):
      raise SpecFunOverflowError(f"B({p}, {r}) overflows double precision")
  return value


def _hyp2f1_series(alpha, beta, gamma, x, config):
  """Direct power series, used only when the library evaluation is not finite."""
  total = 1.0
  term = 1.0
  for n in range(config.max_series_terms):
    term *= (alpha + n) * (beta + n) / ((gamma + n) * (n + 1)) * x
    total += term
    if abs(term) <= config.target_rel_error * abs(total):
      return total
  raise ConvergenceError(
    f"2F1({alpha}, {beta}; {gamma}; {x}) series did not converge in {config.max_series_terms} terms"
  )


def hyp2f1(alpha: float, beta: float, gamma: float, x, config: SpecFunConfig = DEFAULT_CONFIG):
  """Gauss hypergeometric function 2F1(alpha, beta; gamma; x) for 0 <= x < 1.

  Accepts a scalar or an array of arguments and returns the same shape.
  """
  if _is_nonpositive_integer(gamma):
    raise PoleError(f"2F1 is undefined for gamma = {gamma}")
  xs = np.asarray(x, dtype=float)
  if np.any(xs < 0) or np.any(xs >= 1):
    raise DomainError("2F1 argument must lie in [0, 1)")

  values = np.asarray(special.hyp2f1(alpha, beta, gamma, xs), dtype=float)
  bad = ~np.isfinite(values)
  if np.any(bad):
    flat = values.reshape(-1)
    for i in np.flatnonzero(bad.reshape(-1)):
      flat[i] = _hyp2f1_series(alpha, beta, gamma, float(xs.reshape(-1)[i]), config)
    values = flat.reshape(xs.shape)
  if values.ndim == 0:
    return float(values)
  return values


def hyp2f1_at_one(alpha: float, beta: float, gamma: float) -> float:
  """2F1(alpha, beta; gamma; 1) by Gauss summation (requires gamma - alpha - beta > 0)."""
  excess = gamma - alpha - beta
  if excess <= 0:
    raise DomainError(f"Gauss summation needs gamma - alpha - beta > 0, got {excess}")
  if alpha == 0 or beta == 0:
    return 1.0
  if _is_nonpositive_integer(gamma):
    raise PoleError(f"2F1 is undefined for gamma = {gamma}")
  # rgamma is 1/Gamma, zero at the poles: that is the terminating-series case
  value = gamma_fn(gamma) * gamma_fn(excess) * special.rgamma(gamma - alpha) * special.rgamma(gamma - beta)
  if not math.isfinite(value):
    raise SpecFunOverflowError(f"2F1({alpha}, {beta}; {gamma}; 1) overflows double precision")
  return float(value)


def hyp2f1_complement(alpha: float, beta: float, gamma: float, u, config: SpecFunConfig = DEFAULT_CONFIG):
  """2F1(alpha, beta; gamma; 1 - u) for 0 < u <= 1, from u itself.

  For u <= 1/2 the linear transformation to argument u is used:
    A 2F1(alpha, beta; 1-e; u) + B u^e 2F1(gamma-alpha, gamma-beta; 1+e; u),  e = gamma-alpha-beta,
  so a small u known to full relative accuracy never passes through 1 - u.
  The branch with u^e diverges at u = 0 when e < 0; e must not be an integer.
  """
  excess = gamma - alpha - beta
  if abs(excess - round(excess)) < 1e-12:
    raise PoleError(f"gamma - alpha - beta = {excess} is an integer; the transformation is degenerate")
  shape = np.shape(u)
  us = np.atleast_1d(np.asarray(u, dtype=float)).reshape(-1)
  if np.any(us <= 0) or np.any(us > 1):
    raise DomainError("2F1 complement argument must lie in (0, 1]")

  values = np.empty(us.shape)
  small = us <= 0.5
  if np.any(~small):
    values[~small] = hyp2f1(alpha, beta, gamma, 1.0 - us[~small], config)
  if np.any(small):
    w = us[small]
    regular = gamma_fn(gamma) * gamma_fn(excess) * special.rgamma(gamma - alpha) * special.rgamma(gamma - beta)
    singular = gamma_fn(gamma) * gamma_fn(-excess) * special.rgamma(alpha) * special.rgamma(beta)
    values[small] = regular * hyp2f1(alpha, beta, 1.0 - excess, w, config) \
      + singular * w ** excess * hyp2f1(gamma - alpha, gamma - beta, 1.0 + excess, w, config)
  if not shape:
    return float(values[0])
  return values.reshape(shape)
