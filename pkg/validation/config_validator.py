"""Configuration validation for Riesz equilibrium runs."""

from typing import Any, Dict, List, Tuple


class ConfigValidator:
  """Validator for the field parameters and numerical settings of a run."""

  COMMANDS = ('endpoint', 'density', 'signed', 'sigma', 'functional', 'iba', 'verify', 'logcase')
  NEEDS_HALF_WIDTH = ('signed', 'sigma')

  def __init__(self):
    self.validation_results = []

  def validate_configuration(self, config: Dict[str, Any]) -> Tuple[bool, List[str]]:
    """Validate the complete run configuration."""
    self.validation_results = []
    valid = True

    if not self.validate_field(config):
      valid = False

    if not self.validate_numerics(config):
      valid = False

    if not self.validate_command(config):
      valid = False

    return valid, self.validation_results

  def _positive_number(self, config: Dict[str, Any], key: str, label: str) -> bool:
    if config.get(key) is None:
      self.validation_results.append(f"❌ Missing {label}")
      return False
    try:
      value = float(config[key])
    except (ValueError, TypeError):
      self.validation_results.append(f"❌ {label} must be a number")
      return False
    if value <= 0:
      self.validation_results.append(f"❌ {label} must be positive, got {value}")
      return False
    return True

  def _positive_integer(self, config: Dict[str, Any], key: str, label: str, minimum: int = 1) -> bool:
    if key not in config:
      return True
    try:
      value = int(config[key])
    except (ValueError, TypeError):
      self.validation_results.append(f"❌ {label} must be a valid integer")
      return False
    if value < minimum:
      self.validation_results.append(f"❌ {label} must be at least {minimum}, got {value}")
      return False
    return True

  def validate_field(self, config: Dict[str, Any]) -> bool:
    """Validate s, q and b."""
    valid = True

    if config.get('s') is None:
      self.validation_results.append("❌ Missing Riesz exponent s")
      valid = False
    else:
      try:
        s = float(config['s'])
        if not 0 < s < 1:
          self.validation_results.append(f"❌ Riesz exponent s must lie in (0, 1), got {s}")
          valid = False
        elif s < 0.05 or s > 0.95:
          self.validation_results.append(f"⚠️ s = {s} is close to the ends of (0, 1); expect slow quadrature")
        else:
          self.validation_results.append(f"✅ Riesz exponent: s = {s}")
      except (ValueError, TypeError):
        self.validation_results.append("❌ Riesz exponent s must be a number")
        valid = False

    if self._positive_number(config, 'q', 'Charge q'):
      q = float(config['q'])
      if q == 1:
        self.validation_results.append("⚠️ q = 1 is the weakly admissible case")
      elif q < 1:
        self.validation_results.append(f"ℹ️ q = {q} < 1: no equilibrium measure, signed measures only")
      else:
        self.validation_results.append(f"✅ Charge: q = {q}")
    else:
      valid = False

    if self._positive_number(config, 'b', 'Attractor height b'):
      self.validation_results.append(f"✅ Attractor at z = {float(config['b'])}i")
    else:
      valid = False

    return valid

  def validate_numerics(self, config: Dict[str, Any]) -> bool:
    """Validate tolerances, budgets and grid sizes."""
    valid = True

    for key, label in (('quad_tol', 'Quadrature tolerance'), ('iba_stop_tol', 'IBA stop tolerance'),
                       ('frostman_tol', 'Frostman tolerance')):
      if key not in config:
        continue
      if not self._positive_number(config, key, label):
        valid = False
      elif float(config[key]) > 1e-4:
        self.validation_results.append(f"⚠️ {label} is loose ({config[key]})")

    if not self._positive_integer(config, 'quad_budget', 'Quadrature budget', minimum=210):
      valid = False
    if not self._positive_integer(config, 'grid_n', 'Grid size', minimum=2):
      valid = False
    if not self._positive_integer(config, 'frostman_grid', 'Frostman grid size', minimum=2):
      valid = False
    if not self._positive_integer(config, 'iba_max_iter', 'IBA iteration limit'):
      valid = False

    if valid:
      self.validation_results.append("✅ Numerical settings look usable")
    return valid

  def validate_command(self, config: Dict[str, Any]) -> bool:
    """Validate command-specific requirements."""
    command = config.get('command')
    if command is None:
      self.validation_results.append("ℹ️ No command given (settings only)")
      return True
    if command not in self.COMMANDS:
      self.validation_results.append(f"❌ Unknown command '{command}'")
      return False

    valid = True
    if command in self.NEEDS_HALF_WIDTH:
      if not self._positive_number(config, 'a', 'Interval half-width a'):
        valid = False

    if command == 'functional':
      # RunConfig supplies the default range [0.1, 100]
      bounds = {key: config[key] for key in ('a_min', 'a_max') if config.get(key) is not None}
      if all(self._positive_number(config, key, key) for key in bounds):
        a_min, a_max = float(bounds.get('a_min', 0.1)), float(bounds.get('a_max', 100.0))
        if a_min >= a_max:
          self.validation_results.append("❌ a_min must be smaller than a_max")
          valid = False
      else:
        valid = False
      if not self._positive_integer(config, 'n', 'Number of samples', minimum=2):
        valid = False

    if command == 'iba' and config.get('a0') is not None:
      if not self._positive_number(config, 'a0', 'Starting half-width a0'):
        valid = False

    if valid:
      self.validation_results.append(f"✅ Command '{command}' is ready to run")
    return valid
