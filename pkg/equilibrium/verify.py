"""Numerical checks of the variational characterisation of the equilibrium measure."""

import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from equilibrium.exceptions import DomainError, FitQualityError
from equilibrium.measures import (
  FieldParams,
  IntervalDensity,
  bal_line_density,
  equilibrium_density,
  robin_density,
  sigma_density,
  sigma_energy_constant,
  signed_eq_density,
)
from equilibrium.quadrature import DEFAULT_QUADRATURE, QuadratureConfig, riesz_potential

EXTERIOR_FACTORS = (1.1, 1.5, 2.0, 5.0, 10.0)
INTERIOR_MARGIN = 1e-3
FIT_WINDOW = (1e-5, 1e-2)
FIT_POINTS = 40
FIT_MAX_RESIDUAL = 2e-2


@dataclass
class FrostmanReport:
  """U + Q sampled on and off the support, against the constant F."""
  on_support_max: float
  on_support_min: float
  constancy_gap: float
  off_support_min_excess: float
  F_Q_used: float
  tol: float
  exterior_points: List[float] = field(default_factory=list)
  exterior_excess: List[float] = field(default_factory=list)

  @property
  def passed(self) -> bool:
    return self.constancy_gap <= self.tol and self.off_support_min_excess >= -self.tol

  def to_dict(self) -> dict:
    data = asdict(self)
    data['passed'] = self.passed
    return data

  @classmethod
  def from_dict(cls, data: dict) -> "FrostmanReport":
    return cls(**{k: v for k, v in data.items() if k != 'passed'})


@dataclass
class WeaklyAdmissibleReport:
  """Balayage of delta_bi onto R against the q = 1 field.

  F_Q is the mean of U - |x - bi|^(-s) over the test points; it is 0 at q = 1.
  """
  s: float
  b: float
  test_points: List[float]
  differences: List[float]
  mass: float
  tol: float
  F_Q: float = 0.0

  @property
  def max_difference(self) -> float:
    return max(abs(d) for d in self.differences)

  @property
  def passed(self) -> bool:
    return self.max_difference <= self.tol and abs(self.F_Q) <= self.tol and abs(self.mass - 1.0) <= self.tol

  def to_dict(self) -> dict:
    data = asdict(self)
    data['max_difference'] = self.max_difference
    data['passed'] = self.passed
    return data

  @classmethod
  def from_dict(cls, data: dict) -> "WeaklyAdmissibleReport":
    return cls(**{k: v for k, v in data.items() if k not in ('max_difference', 'passed')})


def _total_potential(density: IntervalDensity, params: FieldParams, x: float, quad_config: QuadratureConfig) -> float:
  return riesz_potential(density, params.s, x, quad_config) + params.external_field(x)


def frostman_profile(density: IntervalDensity, params: FieldParams, constant: float, grid_size: int, tol: float,
                     quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> FrostmanReport:
  """Sample U^density + Q inside the support and at fixed exterior points."""
  if grid_size < 2:
    raise DomainError(f"grid_size must be at least 2, got {grid_size}")
  a = density.half_width
  margin = INTERIOR_MARGIN * a
  interior = np.linspace(-a + margin, a - margin, grid_size)
  inside = np.array([_total_potential(density, params, float(x), quad_config) for x in interior])

  exterior = [sign * factor * a for factor in EXTERIOR_FACTORS for sign in (1.0, -1.0)]
  excess = [_total_potential(density, params, x, quad_config) - constant for x in exterior]
  return FrostmanReport(
    on_support_max=float(inside.max()),
    on_support_min=float(inside.min()),
    constancy_gap=float(inside.max() - inside.min()),
    off_support_min_excess=float(min(excess)),
    F_Q_used=constant,
    tol=tol,
    exterior_points=exterior,
    exterior_excess=[float(e) for e in excess],
  )


def frostman_check(params: FieldParams, grid_size: int = 101, tol: float = 1e-6, a_tilde: float = None,
                   quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> FrostmanReport:
  """Frostman conditions for mu_Q; tol is relative to |F_Q|."""
  density = equilibrium_density(params, a_tilde, quad_config)
  constant = sigma_energy_constant(params, density.half_width)
  return frostman_profile(density, params, constant, grid_size, tol * abs(constant), quad_config)


def sigma_frostman_check(params: FieldParams, a: float, grid_size: int = 101, tol: float = 1e-6,
                         quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> FrostmanReport:
  """The same sampling for sigma_a, whose total potential is constant on [-a, a] for every a."""
  constant = sigma_energy_constant(params, a)
  return frostman_profile(sigma_density(params, a, quad_config), params, constant, grid_size,
                          tol * abs(constant), quad_config)


def endpoint_exponent_fit(density: IntervalDensity, side: str = 'right',
                          window: Tuple[float, float] = FIT_WINDOW, points: int = FIT_POINTS,
                          max_residual: float = FIT_MAX_RESIDUAL) -> float:
  """Least-squares slope of log density against log distance to an endpoint."""
  if side not in ('left', 'right'):
    raise DomainError(f"side must be 'left' or 'right', got {side!r}")
  a = density.half_width
  distances = a * np.geomspace(window[0], window[1], points)
  xs = a - distances if side == 'right' else -a + distances
  values = np.asarray(density.evaluate(xs), dtype=float)
  if np.any(values <= 0) or not np.all(np.isfinite(values)):
    raise FitQualityError(f"density is not positive and finite near the {side} endpoint")

  log_d, log_v = np.log(distances), np.log(values)
  (slope, intercept), residuals, _, _, _ = np.polyfit(log_d, log_v, 1, full=True)
  rms = math.sqrt(float(residuals[0]) / points) if len(residuals) else 0.0
  if rms > max_residual:
    raise FitQualityError(f"log-log fit residual {rms:.3e} exceeds {max_residual:.1e}")
  return float(slope)


def weakly_admissible_check(s: float, b: float, tol: float = 1e-6,
                            quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> WeaklyAdmissibleReport:
  """At q = 1 the balayage of delta_bi onto R reproduces |x - bi|^(-s) on R with constant 0."""
  if not 0 < s < 1:
    raise DomainError(f"s must lie in (0, 1), got {s}")
  line = bal_line_density(s, b, quad_config=quad_config)
  points = [0.0] + [sign * k * b for k in (1.0, 5.0, 20.0) for sign in (1.0, -1.0)]
  differences = [line.potential(x) - (x * x + b * b) ** (-0.5 * s) for x in points]
  return WeaklyAdmissibleReport(s, b, points, differences, line.mass, tol, F_Q=float(np.mean(differences)))


def normalization_check(params: FieldParams, a_tilde: float,
                        quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> Dict[str, float]:
  """Distance from 1 of the quadrature mass of every unit measure."""
  errors = {
    'equilibrium': equilibrium_density(params, a_tilde, quad_config).integrate().value - 1.0,
    'robin': robin_density(params.s, a_tilde, quad_config).integrate().value - 1.0,
    'signed': signed_eq_density(params, a_tilde, quad_config).density.integrate().value - 1.0,
    'line_balayage': bal_line_density(params.s, params.b, quad_config=quad_config).mass - 1.0,
  }
  return {name: float(err) for name, err in errors.items()}


def exponent_fits(density: IntervalDensity, sides: Sequence[str] = ('left', 'right')) -> Dict[str, float]:
  return {side: endpoint_exponent_fit(density, side) for side in sides}
