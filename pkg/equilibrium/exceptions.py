"""Exception types raised by the equilibrium library."""


class EquilibriumError(Exception):
  """Base class for every error raised by this package."""


class NumericalWarning(UserWarning):
  """A computation finished within tolerance but the engine flagged it."""


class DomainError(EquilibriumError, ValueError):
  """Arguments outside the domain of an operation."""


class PoleError(DomainError):
  """Evaluation at a pole (Gamma at a non-positive integer)."""


class NoEquilibriumError(DomainError):
  """q < 1: the equilibrium measure does not exist."""


class WeaklyAdmissibleError(DomainError):
  """q = 1: the equilibrium measure exists but its support is the whole real line."""


class SpecFunOverflowError(EquilibriumError, OverflowError):
  """Special function value outside the representable range."""


class ConvergenceError(EquilibriumError, ArithmeticError):
  """An iterative numerical method did not reach its tolerance."""


class QuadratureConvergenceError(ConvergenceError):
  """Adaptive quadrature exhausted its refinement budget."""

  def __init__(self, message, partial=None):
    super().__init__(message)
    self.partial = partial


class DivergentIntegralError(ConvergenceError):
  """Integrand tail decays too slowly for the integral to exist."""


class NoRootError(ConvergenceError):
  """No sign change could be bracketed."""


class ConsistencyError(EquilibriumError):
  """Two computations that must agree do not."""


class ConsensusError(ConsistencyError):
  """Independent routes to the critical endpoint disagree."""


class PositivityError(ConsistencyError):
  """A density that must be nonnegative went negative beyond tolerance."""


class RootIsolationError(ConsistencyError):
  """More than one sign change where exactly one was expected."""


class FitQualityError(ConsistencyError):
  """A log-log fit left residuals above the acceptance threshold."""
