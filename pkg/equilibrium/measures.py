"""Densities and masses of the measures of the point-charge Riesz problem.

All densities live on a symmetric interval [-a, a] (or on the whole line for the
balayage onto R) and are evaluated pointwise from closed forms; quadrature is
used only for masses and potentials. The interval integrals I_a(x) that appear
in the balayage and sigma_a densities are expressed through 2F1:

  I_a(x) / (a^2-x^2)^((1-s)/2)
      = (a^2+b^2)^(s/2-1) B((3-s)/2, 1/2) 2F1(1-s/2, (3-s)/2; 2-s/2; z)
  (I_a(a) - I_a(x)) / (a^2-x^2)^((1-s)/2)
      = (a^2+b^2)^(s/2-1) B((1-s)/2, 3/2) 2F1(1-s/2, (1-s)/2; 2-s/2; z)

with z = (x^2+b^2)/(a^2+b^2).
"""

import functools
import math
import threading
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from equilibrium.exceptions import (
  DomainError,
  NoEquilibriumError,
  PositivityError,
  RootIsolationError,
  ConsistencyError,
  WeaklyAdmissibleError,
)
from equilibrium.quadrature import (
  DEFAULT_QUADRATURE,
  QuadratureConfig,
  QuadratureResult,
  SingularityProfile,
  integrate_finite,
  integrate_semi_infinite,
)
from equilibrium.specfun import beta_fn, gamma_fn, hyp2f1_complement

_EPS = float(np.finfo(float).eps)
_TINY = float(np.finfo(float).tiny)
# relative width of the band next to +-a where sigma_a is returned as 0
EDGE_BAND = 1e-12
ROUTE_AGREEMENT = 1e-6


@dataclass(frozen=True)
class FieldParams:
  """External field Q(x) = -q |x - bi|^(-s) of an attracting charge q at z = bi."""
  s: float
  q: float
  b: float

  def __post_init__(self):
    if not 0 < self.s < 1:
      raise DomainError(f"s must lie in (0, 1), got {self.s}")
    if self.q <= 0:
      raise DomainError(f"q must be positive, got {self.q}")
    if self.b <= 0:
      raise DomainError(f"b must be positive, got {self.b}")

  @property
  def z(self) -> complex:
    return complex(0.0, self.b)

  def external_field(self, x):
    x = np.asarray(x, dtype=float)
    return _output(-self.q * (x * x + self.b * self.b) ** (-0.5 * self.s))

  def require_admissible(self):
    """Raise the typed error for the charges with no compactly supported equilibrium."""
    if self.q < 1:
      raise NoEquilibriumError(
        f"q = {self.q} < 1: the equilibrium measure does not exist for this field"
      )
    if self.q == 1:
      raise WeaklyAdmissibleError(
        "q = 1 is weakly admissible: the equilibrium measure is the balayage of the "
        "attractor onto the whole real line"
      )


@dataclass(frozen=True)
class RieszConstants:
  """Beta-function constants that depend on s only."""
  s: float
  nu: float
  beta_line: float      # B(1/2, (1-s)/2)
  beta_conj: float      # B((1+s)/2, (1-s)/2) = 1/gamma_s
  beta_robin: float     # B(1/2, (1+s)/2)
  beta_inner: float     # B((3-s)/2, 1/2)
  beta_diff: float      # B((1-s)/2, 3/2)

  @property
  def gamma_s(self) -> float:
    return 1.0 / self.beta_conj


@functools.lru_cache(maxsize=64)
def riesz_constants(s: float) -> RieszConstants:
  return RieszConstants(
    s=s,
    nu=0.5 * (1.0 - s),
    beta_line=beta_fn(0.5, 0.5 * (1.0 - s)),
    beta_conj=beta_fn(0.5 * (1.0 + s), 0.5 * (1.0 - s)),
    beta_robin=beta_fn(0.5, 0.5 * (1.0 + s)),
    beta_inner=beta_fn(0.5 * (3.0 - s), 0.5),
    beta_diff=beta_fn(0.5 * (1.0 - s), 1.5),
  )


def _output(values):
  values = np.asarray(values, dtype=float)
  return float(values) if values.ndim == 0 else values


def _gap(a: float, x: np.ndarray) -> np.ndarray:
  """a^2 - x^2 as (a - |x|)(a + |x|), floored at the rounding scale of the endpoint."""
  ax = np.abs(x)
  return np.maximum((a - ax) * (a + ax), 2.0 * _EPS * a * a)


def _interval_forms(a: float, core: Callable, floor: bool = True):
  """Evaluators of a density on [-a, a] from core(x, a^2 - x^2).

  Returns evaluate(x), zero off the interval, and edge(d, side), the density at
  side * (a - d) with the gap formed as d (2a - d) so that it stays accurate next
  to the endpoint.
  """
  least = 2.0 * _EPS * a * a if floor else 0.0
  # offsets are exact, so only d = 0 itself needs a floor
  least_edge = _TINY if floor else 0.0

  def evaluate(x):
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros(xs.shape)
    inside = np.abs(xs) <= a
    if np.any(inside):
      ax = np.abs(xs[inside])
      out[inside] = core(xs[inside], np.maximum((a - ax) * (a + ax), least))
    return _output(out.reshape(np.shape(x)))

  def edge(d, side=1):
    ds = np.atleast_1d(np.asarray(d, dtype=float))
    out = np.zeros(ds.shape)
    inside = (ds >= 0) & (ds <= 2 * a)
    if np.any(inside):
      di = ds[inside]
      out[inside] = core(side * (a - di), np.maximum(di * (2 * a - di), least_edge))
    return _output(out.reshape(np.shape(d)))

  return evaluate, edge


def _check_s(s: float):
  if not 0 < s < 1:
    raise DomainError(f"s must lie in (0, 1), got {s}")


def _check_half_width(a: float):
  if not a > 0:
    raise DomainError(f"interval half-width must be positive, got {a}")


@dataclass(eq=False)
class IntervalDensity:
  """A density on [-a, a] given by a pointwise evaluator.

  The mass is computed once on first access, by mass_fn when one is supplied
  (exact linear combinations) and by quadrature otherwise.
  """
  half_width: float
  evaluate: Callable
  profile: SingularityProfile
  label: str = ''
  mass_fn: Optional[Callable[[], float]] = None
  quad_config: QuadratureConfig = DEFAULT_QUADRATURE
  edge_evaluate: Optional[Callable] = None
  _mass: Optional[float] = field(default=None, init=False, repr=False)
  _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

  def __call__(self, x):
    return self.evaluate(x)

  def at_edge(self, d, side: int = 1):
    """Density at side * (a - d), for offsets d from the endpoint."""
    if self.edge_evaluate is not None:
      return self.edge_evaluate(d, side)
    return self.evaluate(side * (self.half_width - np.asarray(d, dtype=float)))

  def integrate(self) -> QuadratureResult:
    a = self.half_width
    return integrate_finite(self.evaluate, -a, a, self.profile, config=self.quad_config,
                            from_lo=lambda d: self.at_edge(d, -1), from_hi=lambda d: self.at_edge(d, 1))

  @property
  def mass(self) -> float:
    if self._mass is None:
      with self._lock:
        if self._mass is None:
          self._mass = self.mass_fn() if self.mass_fn is not None else self.integrate().value
    return self._mass


def linear_combination(terms: Sequence[Tuple[float, IntervalDensity]], label: str = '') -> IntervalDensity:
  """Weighted sum of densities on the same interval; the mass is the weighted sum of masses."""
  if not terms:
    raise DomainError("linear_combination needs at least one term")
  a = terms[0][1].half_width
  if any(not math.isclose(d.half_width, a, rel_tol=1e-14) for _, d in terms):
    raise DomainError("all densities in a combination must share the same interval")
  profile = SingularityProfile(
    min(d.profile.left_exponent for _, d in terms),
    min(d.profile.right_exponent for _, d in terms),
  )

  def evaluate(x):
    return _output(sum(w * np.asarray(d.evaluate(x), dtype=float) for w, d in terms))

  def edge(offset, side=1):
    return _output(sum(w * np.asarray(d.at_edge(offset, side), dtype=float) for w, d in terms))

  return IntervalDensity(
    half_width=a,
    evaluate=evaluate,
    profile=profile,
    label=label,
    mass_fn=lambda: sum(w * d.mass for w, d in terms),
    quad_config=terms[0][1].quad_config,
    edge_evaluate=edge,
  )


# ---------------------------------------------------------------------------
# Robin measure and interval energy
# ---------------------------------------------------------------------------

def robin_constant(s: float, a: float) -> float:
  """C_a = 1 / (a^s B(1/2, (1+s)/2))."""
  return 1.0 / (a ** s * riesz_constants(s).beta_robin)


def robin_density(s: float, a: float, quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> IntervalDensity:
  """Unweighted s-equilibrium (Robin) measure of [-a, a]."""
  _check_s(s)
  _check_half_width(a)
  nu = riesz_constants(s).nu
  c_a = robin_constant(s, a)

  evaluate, edge = _interval_forms(a, lambda x, gap: c_a * gap ** (-nu))
  return IntervalDensity(a, evaluate, SingularityProfile(-nu, -nu), label='robin', quad_config=quad_config,
                         edge_evaluate=edge)


def interval_energy(s: float, a: float) -> float:
  """W_s(a): the constant value of the Robin potential on [-a, a]."""
  _check_s(s)
  _check_half_width(a)
  return gamma_fn(0.5 * (1 - s)) * gamma_fn(1 + s) * a ** (-s) / (2 ** s * gamma_fn(0.5 * (1 + s)))


def robin_potential(s: float, a: float, z: complex, quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
  """Potential of the Robin measure of [-a, a] at a point z off the interval, by quadrature."""
  z = complex(z)
  if z.imag == 0 and abs(z.real) <= a:
    raise DomainError("robin_potential is for points off the interval; use interval_energy on it")
  robin = robin_density(s, a, quad_config)

  def integrand(t):
    return robin.evaluate(t) * abs(t - z) ** (-s)

  return integrate_finite(integrand, -a, a, robin.profile, config=quad_config).value


# ---------------------------------------------------------------------------
# Balayage onto the real line
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class LineDensity:
  """A density on the whole real line (balayage of a point mass onto R)."""
  s: float
  evaluate: Callable
  center: float = 0.0
  quad_config: QuadratureConfig = DEFAULT_QUADRATURE

  def __call__(self, x):
    return self.evaluate(x)

  @property
  def mass(self) -> float:
    c = self.center
    right = integrate_semi_infinite(lambda u: self.evaluate(c + u), 0.0, config=self.quad_config)
    left = integrate_semi_infinite(lambda u: self.evaluate(c - u), 0.0, config=self.quad_config)
    return right.value + left.value

  def potential(self, y: float) -> float:
    """Riesz s-potential at a real point, split at y and compactified on each side."""
    if not 0 < self.s < 1:
      raise DomainError("the Riesz potential needs 0 < s < 1")
    s = self.s
    right = integrate_semi_infinite(lambda u: self.evaluate(y + u) * u ** (-s), -s, config=self.quad_config)
    left = integrate_semi_infinite(lambda u: self.evaluate(y - u) * u ** (-s), -s, config=self.quad_config)
    return right.value + left.value


def bal_line_density(s: float, b: float, center: float = 0.0,
                     quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> LineDensity:
  """Balayage of the unit point mass at center + bi onto the real line (0 <= s < 1)."""
  if not 0 <= s < 1:
    raise DomainError(f"s must lie in [0, 1), got {s}")
  if b == 0:
    raise DomainError("the point mass must lie off the real axis")
  b = abs(b)
  scale = b ** (1 - s) / beta_fn(0.5, 0.5 * (1 - s))

  def evaluate(x):
    dx = np.asarray(x, dtype=float) - center
    return _output(scale * (dx * dx + b * b) ** (0.5 * s - 1.0))

  return LineDensity(s, evaluate, center, quad_config)


# ---------------------------------------------------------------------------
# Balayage onto [-a, a]
# ---------------------------------------------------------------------------

def bal_realpoint_interval_density(s: float, a: float, t: float,
                                   quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> IntervalDensity:
  """Balayage of the unit point mass at a real t, |t| > a, onto [-a, a]."""
  _check_s(s)
  _check_half_width(a)
  if abs(t) <= a:
    raise DomainError(f"the point mass at t = {t} must lie outside [-{a}, {a}]")
  const = riesz_constants(s)
  nu = const.nu
  outer = t * t - a * a

  def core(x, gap):
    return const.gamma_s * (outer / gap) ** nu / np.abs(x - t)

  evaluate, edge = _interval_forms(a, core)
  return IntervalDensity(a, evaluate, SingularityProfile(-nu, -nu), label=f'bal(delta_{t})', quad_config=quad_config,
                         edge_evaluate=edge)


def integral_I(s: float, a: float, b: float, x: float,
               quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
  """I_a(x) by quadrature of its semi-infinite form; closed form at |x| = a."""
  _check_s(s)
  _check_half_width(a)
  if abs(x) > a:
    raise DomainError(f"I_a(x) needs |x| <= a, got x = {x}, a = {a}")
  big = a * a + b * b
  if abs(x) == a:
    return riesz_constants(s).beta_line / math.sqrt(big)
  gap = (a - abs(x)) * (a + abs(x))
  nu = 0.5 * (1 - s)

  def integrand(u):
    return u ** nu * (u + big) ** (0.5 * s - 1.0) / (u + gap)

  return integrate_semi_infinite(integrand, 0.0, config=quad_config).value


def integral_I_closed_form(s: float, a: float, b: float, x):
  """I_a(x) through the 2F1 representation (vectorized over x, |x| < a)."""
  const = riesz_constants(s)
  big = a * a + b * b
  gap = _gap(a, np.asarray(x, dtype=float))
  # 1 - z = (a^2 - x^2) / (a^2 + b^2)
  values = big ** (0.5 * s - 1.0) * gap ** const.nu * const.beta_inner \
    * hyp2f1_complement(1 - 0.5 * s, 0.5 * (3 - s), 2 - 0.5 * s, gap / big)
  return _output(values)


def balayage_edge_coeff(s: float, a: float, b: float) -> float:
  """lim (a^2-x^2)^((1-s)/2) f(x) at the endpoints: gamma_s b^(1-s) / sqrt(a^2+b^2)."""
  return riesz_constants(s).gamma_s * b ** (1 - s) / math.sqrt(a * a + b * b)


def _bal_z_forms(s: float, a: float, b: float):
  const = riesz_constants(s)
  big = a * a + b * b
  prefactor = b ** (1 - s) / const.beta_line
  inner = const.gamma_s * big ** (0.5 * s - 1.0) * const.beta_inner

  def core(x, gap):
    # 2F1 at z = 1 - gap/big grows like gap^(-nu); it carries the endpoint singularity
    smooth = (x * x + b * b) ** (0.5 * s - 1.0) \
      + inner * hyp2f1_complement(1 - 0.5 * s, 0.5 * (3 - s), 2 - 0.5 * s, gap / big)
    return prefactor * smooth

  return _interval_forms(a, core)


def _bal_z_density(s: float, b: float, a: float, quad_config: QuadratureConfig, mass_fn=None) -> IntervalDensity:
  nu = riesz_constants(s).nu
  evaluate, edge = _bal_z_forms(s, a, b)
  return IntervalDensity(a, evaluate, SingularityProfile(-nu, -nu), label='bal(delta_z)', mass_fn=mass_fn,
                         quad_config=quad_config, edge_evaluate=edge)


@functools.lru_cache(maxsize=512)
def _route_one_mass(s: float, b: float, a: float, quad_config: QuadratureConfig) -> float:
  return _bal_z_density(s, b, a, quad_config).integrate().value


def bal_z_interval_density(params: FieldParams, a: float,
                           quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> IntervalDensity:
  """Balayage of the unit point mass at bi onto [-a, a]; its mass is m_a."""
  _check_half_width(a)
  return _bal_z_density(params.s, params.b, a, quad_config,
                        mass_fn=lambda: _route_one_mass(params.s, params.b, a, quad_config))


def mass_loss_factor(s: float) -> float:
  """f(s) = B(1/2, (1+s)/2) / B((1-s)/2, (1+s)/2)."""
  const = riesz_constants(s)
  return const.beta_robin / const.beta_conj


def mass_loss_shape(d: float, s: float) -> float:
  """h(d, s) = d^s / sqrt(1 + d^2)."""
  return d ** s / math.sqrt(1 + d * d)


@dataclass(frozen=True)
class MassEstimate:
  """m_a from direct quadrature, with the gap to the sigma-mass route."""
  value: float
  discrepancy: float


def balayage_mass(params: FieldParams, a: float,
                  quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> MassEstimate:
  """m_a by quadrature of the balayage density, cross-checked by m_a = |sigma_a|/q + f(s) h(a/b, s)."""
  _check_half_width(a)
  route_one = _route_one_mass(params.s, params.b, a, quad_config)
  route_two = sigma_mass(params, a, quad_config) / params.q \
    + mass_loss_factor(params.s) * mass_loss_shape(a / params.b, params.s)
  discrepancy = abs(route_one - route_two)
  if discrepancy > ROUTE_AGREEMENT:
    raise ConsistencyError(f"m_a routes disagree by {discrepancy:.3e} at a = {a}")
  return MassEstimate(route_one, discrepancy)


# ---------------------------------------------------------------------------
# sigma_a family and the equilibrium measure
# ---------------------------------------------------------------------------

def _sigma_forms(params: FieldParams, a: float):
  s, q, b = params.s, params.q, params.b
  const = riesz_constants(s)
  big = a * a + b * b
  prefactor = q * b ** (1 - s) / (const.beta_line * const.beta_conj)
  inner = big ** (0.5 * s - 1.0) * const.beta_diff
  slack = 1e-12 * max(1.0, q)
  band = 2.0 * EDGE_BAND * a * a

  def core(x, gap):
    values = np.zeros(gap.shape)
    live = gap > band
    if np.any(live):
      xl = x[live]
      values[live] = prefactor * (
        const.beta_conj * (xl * xl + b * b) ** (0.5 * s - 1.0)
        - inner * hyp2f1_complement(1 - 0.5 * s, 0.5 * (1 - s), 2 - 0.5 * s, gap[live] / big)
      )
    if np.any(values < -slack):
      raise PositivityError(f"sigma_a density is negative ({np.min(values):.3e}) at a = {a}")
    return values

  return _interval_forms(a, core)


def sigma_density(params: FieldParams, a: float,
                  quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> IntervalDensity:
  """The positive measure sigma_a whose total potential plus Q is constant on [-a, a]."""
  _check_half_width(a)
  exponent = 0.5 * (1 + params.s)
  evaluate, edge = _sigma_forms(params, a)
  return IntervalDensity(a, evaluate, SingularityProfile(exponent, exponent),
                         label='sigma', quad_config=quad_config, edge_evaluate=edge)


@functools.lru_cache(maxsize=512)
def _sigma_mass(params: FieldParams, a: float, quad_config: QuadratureConfig) -> float:
  return sigma_density(params, a, quad_config).integrate().value


def sigma_mass(params: FieldParams, a: float, quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
  """|sigma_a| by quadrature; lies in (0, q) and increases with a."""
  _check_half_width(a)
  return _sigma_mass(params, a, quad_config)


def sigma_energy_constant(params: FieldParams, a: float) -> float:
  """E_a = -q b^(1-s) / sqrt(a^2+b^2), the value of U^sigma_a + Q on [-a, a]."""
  return -params.q * params.b ** (1 - params.s) / math.sqrt(a * a + params.b * params.b)


def locate_sigma_mass_s(q: float, b: float, a: float, target: float,
                        s_grid: Sequence[float] = tuple(np.linspace(0.05, 0.95, 19))) -> List[float]:
  """Values of s for which |sigma_a| equals target, from sign changes along s_grid."""
  def residual(s):
    return sigma_mass(FieldParams(s, q, b), a) - target

  values = [residual(s) for s in s_grid]
  roots = []
  for (s0, r0), (s1, r1) in zip(zip(s_grid, values), zip(s_grid[1:], values[1:])):
    if r0 == 0:
      roots.append(float(s0))
    elif r0 * r1 < 0:
      roots.append(float(optimize.brentq(residual, s0, s1, xtol=1e-10)))
  return roots


def equilibrium_edge_coeff(params: FieldParams, a_tilde: float) -> float:
  """lim (a~^2 - x^2)^(-(1+s)/2) mu_Q'(x) at the soft edges."""
  s = params.s
  const = riesz_constants(s)
  big = a_tilde * a_tilde + params.b * params.b
  prefactor = params.q * params.b ** (1 - s) / (const.beta_line * const.beta_conj)
  return prefactor * const.beta_diff * (2 - s) / (1 + s) * big ** -1.5


def equilibrium_density(params: FieldParams, a_tilde: float = None,
                        quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> IntervalDensity:
  """Density of mu_Q on [-a~, a~] (q > 1); a~ comes from the solver when not given."""
  params.require_admissible()
  if a_tilde is None:
    from equilibrium.solver import critical_c
    c = critical_c(params)
    a_tilde = params.b * math.sqrt(c / (1 - c))
  density = sigma_density(params, a_tilde, quad_config)
  density.label = 'equilibrium'
  return density


# ---------------------------------------------------------------------------
# Signed equilibrium measures eta_a
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignedDensityReport:
  """Signed equilibrium measure of [-a, a] with its positive-part support."""
  density: IntervalDensity
  half_width: float
  positive_halfwidth: float
  endpoint_coeff: float
  m_a: float


def signed_endpoint_coeff(params: FieldParams, a: float,
                          quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
  """lim (a^2-x^2)^((1-s)/2) eta_a'(x) at the endpoints."""
  _check_half_width(a)
  s, q, b = params.s, params.q, params.b
  const = riesz_constants(s)
  m_a = _route_one_mass(s, b, a, quad_config)
  return q * b ** (1 - s) / (const.beta_conj * math.sqrt(a * a + b * b)) \
    - (q * m_a - 1) / (a ** s * const.beta_robin)


def positive_part_halfwidth(density: IntervalDensity, coeff: float, rel_tol: float = 1e-10,
                            scan_points: int = 400) -> float:
  """Largest a' with the density positive on (-a', a'); a' = a when the endpoint coefficient is >= 0."""
  a = density.half_width
  if coeff >= 0:
    return a

  # scan in the distance d to +a, geometrically down to the endpoint where coeff fixes the sign
  offsets = a * np.geomspace(1.0, 1e-14, scan_points)
  values = np.asarray(density.at_edge(offsets, 1), dtype=float)
  if not values[0] > 0:
    raise RootIsolationError("signed density is not positive at the origin")
  signs = np.sign(values)
  changes = int(np.count_nonzero(np.diff(signs[signs != 0])))
  if changes == 0 and np.all(values > 0):
    # negative part thinner than the smallest offset scanned
    return a
  if changes != 1:
    raise RootIsolationError(f"expected one sign change of the signed density on [0, {a}), found {changes}")

  first_negative = int(np.argmax(values < 0))
  far, near = offsets[first_negative - 1], offsets[first_negative]
  if values[first_negative - 1] == 0:
    return float(a - far)

  def phi(d):
    return float(density.at_edge(d, 1))

  root = optimize.brentq(phi, near, far, xtol=rel_tol * a, rtol=4 * _EPS)
  return float(a - root)


def signed_eq_density(params: FieldParams, a: float,
                      quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> SignedDensityReport:
  """eta_a = q Bal(delta_z, [-a, a]) - (q m_a - 1) omega_[-a, a]."""
  _check_half_width(a)
  balayage = bal_z_interval_density(params, a, quad_config)
  robin = robin_density(params.s, a, quad_config)
  m_a = balayage.mass
  eta = linear_combination([(params.q, balayage), (-(params.q * m_a - 1), robin)], label='eta')
  coeff = signed_endpoint_coeff(params, a, quad_config)
  return SignedDensityReport(
    density=eta,
    half_width=a,
    positive_halfwidth=positive_part_halfwidth(eta, coeff),
    endpoint_coeff=coeff,
    m_a=m_a,
  )


def signed_equilibrium_constant(params: FieldParams, a: float,
                                quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
  """C_{Q,[-a,a]} = (1 - q m_a) W_s(a), the value of U^eta_a + Q on [-a, a]."""
  m_a = _route_one_mass(params.s, params.b, a, quad_config)
  return (1 - params.q * m_a) * interval_energy(params.s, a)


# ---------------------------------------------------------------------------
# Atomic fields and the logarithmic reference case
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AtomicMeasure:
  """Finitely many positive point masses (location, weight).

  Real locations are allowed; they must lie outside the target interval.
  """
  atoms: Tuple[Tuple[complex, float], ...]

  def __post_init__(self):
    if not self.atoms:
      raise DomainError("an atomic measure needs at least one atom")
    for location, weight in self.atoms:
      if weight <= 0:
        raise DomainError(f"atom weights must be positive, got {weight} at {location}")

  @property
  def total_weight(self) -> float:
    return sum(w for _, w in self.atoms)


def _off_axis_balayage(s: float, a: float, z: complex, quad_config: QuadratureConfig) -> IntervalDensity:
  """Bal(delta_z, [-a, a]) for z = x0 + i y0, x0 != 0, by the superposition integral."""
  const = riesz_constants(s)
  nu = const.nu
  line = bal_line_density(s, z.imag, center=z.real, quad_config=quad_config)
  robin_z = robin_potential(s, a, z, quad_config)
  energy = interval_energy(s, a)

  def swept(x):
    # integral over |t| > a of line(t) (t^2-a^2)^nu / |x - t|, at a scalar x in [-a, a]
    def right(u):
      return line.evaluate(a + u) * (u * (2 * a + u)) ** nu / (a + u - x)

    def left(u):
      return line.evaluate(-a - u) * (u * (2 * a + u)) ** nu / (a + u + x)

    r_exp = nu - 1 if x >= a * (1 - EDGE_BAND) else 0.0
    l_exp = nu - 1 if x <= -a * (1 - EDGE_BAND) else 0.0
    return integrate_semi_infinite(right, r_exp, config=quad_config).value \
      + integrate_semi_infinite(left, l_exp, config=quad_config).value

  def evaluate(x):
    xs = np.asarray(x, dtype=float)
    flat = xs.reshape(-1)
    out = np.zeros_like(flat)
    for i, xi in enumerate(flat):
      if abs(xi) <= a:
        xi = float(np.clip(xi, -a, a))
        out[i] = line.evaluate(xi) + const.gamma_s * _gap(a, xi) ** (-nu) * swept(xi)
    return _output(out.reshape(xs.shape))

  # m = U^omega(z) / W_s(a): integrate U^omega against Bal, or U^Bal = U^delta_z against omega
  return IntervalDensity(a, evaluate, SingularityProfile(-nu, -nu), label=f'bal(delta_{z})',
                         mass_fn=lambda: robin_z / energy, quad_config=quad_config)


def superpose_atomic(measure: AtomicMeasure, s: float, a: float,
                     quad_config: QuadratureConfig = DEFAULT_QUADRATURE) -> IntervalDensity:
  """Balayage of an atomic measure onto [-a, a] by superposition of single-atom balayages."""
  _check_s(s)
  _check_half_width(a)
  terms = []
  for location, weight in measure.atoms:
    z = complex(location)
    if z.imag == 0:
      if abs(z.real) <= a:
        raise DomainError(f"atom at {z.real} lies on [-{a}, {a}]")
      terms.append((weight, bal_realpoint_interval_density(s, a, z.real, quad_config)))
    elif z.real == 0:
      terms.append((weight, bal_z_interval_density(FieldParams(s, 1.0, abs(z.imag)), a, quad_config)))
    else:
      terms.append((weight, _off_axis_balayage(s, a, z, quad_config)))
  return linear_combination(terms, label='superposition')


@dataclass(frozen=True)
class LogCaseReference:
  """Logarithmic (s = 0) equilibrium support and density for the same field."""
  a_tilde: float
  density: IntervalDensity


def log_case_reference(q: float, b: float) -> LogCaseReference:
  """a~ = sqrt(2q-1) b/(q-1), density (q-1) sqrt(a~^2-x^2) / (pi (x^2+b^2))."""
  if q < 1:
    raise NoEquilibriumError(f"q = {q} < 1: no equilibrium measure in the logarithmic case either")
  if q == 1:
    raise WeaklyAdmissibleError("q = 1 is weakly admissible in the logarithmic case")
  if b <= 0:
    raise DomainError(f"b must be positive, got {b}")
  a_tilde = math.sqrt(2 * q - 1) * b / (q - 1)

  def core(x, gap):
    return (q - 1) * np.sqrt(gap) / (math.pi * (x * x + b * b))

  evaluate, edge = _interval_forms(a_tilde, core, floor=False)
  return LogCaseReference(a_tilde, IntervalDensity(a_tilde, evaluate, SingularityProfile(0.5, 0.5), label='log-case',
                                                   edge_evaluate=edge))
