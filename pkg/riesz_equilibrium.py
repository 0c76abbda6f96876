import argparse
import json
import sys
import yaml
import numpy as np
import pandas as pd
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from equilibrium import __version__
from equilibrium.exceptions import ConsistencyError, ConvergenceError, DomainError
from equilibrium.iba import run_iba
from equilibrium.measures import (
  FieldParams,
  bal_z_interval_density,
  equilibrium_density,
  log_case_reference,
  sigma_density,
  sigma_energy_constant,
  sigma_mass,
  signed_eq_density,
  signed_equilibrium_constant,
)
from equilibrium.quadrature import QuadratureConfig
from equilibrium.solver import critical_c, critical_endpoint, endpoint_from_c, ms_functional
from equilibrium.verify import exponent_fits, frostman_check, normalization_check, weakly_admissible_check
from validation.config_validator import ConfigValidator

import warnings
# numpy evaluates both branches of np.where; the discarded branch may overflow
warnings.filterwarnings('ignore', category=RuntimeWarning)

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_VERIFICATION = 3
EXIT_USAGE = 64

REPORT_COMMANDS = ('endpoint', 'iba', 'verify')
EXPONENT_TOL = 0.05
MASS_TOL = 1e-8

@dataclass
class RunConfig:
  """Settings for a single command-line run."""
  command: str
  s: float = 0.5
  q: float = 5.0
  b: float = 1.0
  a: Optional[float] = None
  a0: Optional[float] = None
  a_min: float = 0.1
  a_max: float = 100.0
  n: int = 200
  grid_n: int = 1001
  output_path: Optional[Path] = None
  format: Optional[str] = None
  quad_tol: float = 1e-10
  quad_budget: int = 2 ** 20
  iba_stop_tol: float = 1e-8
  iba_max_iter: int = 200
  frostman_grid: int = 101
  frostman_tol: float = 1e-6

  def __post_init__(self):
    if self.format is None:
      self.format = 'json' if self.command in REPORT_COMMANDS else 'csv'
    if self.format not in ('csv', 'json'):
      raise DomainError(f"format must be csv or json, got {self.format!r}")

  @classmethod
  def from_settings(cls, settings: Dict[str, Any]) -> "RunConfig":
    known = {f.name for f in fields(cls)}
    return cls(**{key: value for key, value in settings.items() if key in known})

  @property
  def params(self) -> FieldParams:
    return FieldParams(float(self.s), float(self.q), float(self.b))

  @property
  def quad_config(self) -> QuadratureConfig:
    return QuadratureConfig(float(self.quad_tol), int(self.quad_budget))

@dataclass
class RunArtifact:
  """What a command produced: sampled columns, a JSON-ready report, or both."""
  command: str
  metadata: Dict[str, Any]
  table: Optional[pd.DataFrame] = None
  report: Optional[Dict[str, Any]] = None
  passed: bool = True

  def render(self, fmt: str) -> str:
    if fmt == 'json':
      if self.table is None:
        return json.dumps(self.report, indent=2)
      payload = dict(self.metadata)
      payload['samples'] = self.table.to_dict(orient='list')
      return json.dumps(payload, indent=2)

    table = self.table
    if table is None:
      table = pd.DataFrame([{k: v for k, v in self.report.items() if not isinstance(v, (dict, list))}])
    header = ''.join(f"# {key}: {value}\n" for key, value in self.metadata.items())
    return header + table.to_csv(index=False, float_format='%.17g', lineterminator='\n')

def chebyshev_grid(a: float, n: int) -> np.ndarray:
  """a cos(k pi/(n-1)), k = 0..n-1, ascending and exactly symmetric."""
  if n < 2:
    raise DomainError(f"grid needs at least 2 points, got {n}")
  x = -a * np.cos(np.arange(n) * np.pi / (n - 1))
  return 0.5 * (x - x[::-1])

def open_chebyshev_grid(a: float, n: int) -> np.ndarray:
  """Chebyshev points of the first kind, which avoid the endpoints of densities that blow up there."""
  x = -a * np.cos((2 * np.arange(n) + 1) * np.pi / (2 * n))
  return 0.5 * (x - x[::-1])

class EquilibriumRunner:
  """Dispatch a run configuration to the numerical library."""
  def __init__(self, config: RunConfig):
    self.config = config
    self.params = config.params
    self.quad = config.quad_config

  def run(self) -> RunArtifact:
    print(f"Running '{self.config.command}' for s={self.params.s}, q={self.params.q}, b={self.params.b}", file=sys.stderr)
    return getattr(self, f'_run_{self.config.command}')()

  def _metadata(self, **extra) -> Dict[str, Any]:
    meta = {
      'generator': f'riesz-equilibrium {__version__}',
      'command': self.config.command,
      's': self.params.s,
      'q': self.params.q,
      'b': self.params.b,
      'quad_tol': self.quad.tol,
    }
    meta.update(extra)
    return meta

  def _a_tilde(self) -> float:
    return endpoint_from_c(self.params.b, critical_c(self.params))

  def _require_half_width(self) -> float:
    if self.config.a is None:
      raise DomainError(f"'{self.config.command}' needs the interval half-width --a")
    return float(self.config.a)

  def _run_endpoint(self) -> RunArtifact:
    report = critical_endpoint(self.params, self.quad)
    print(f"  - a_tilde = {report.a_tilde:.12g} (spread {report.consensus_spread:.2e})", file=sys.stderr)
    return RunArtifact('endpoint', self._metadata(), report=report.to_dict())

  def _run_density(self) -> RunArtifact:
    a_tilde = self._a_tilde()
    density = equilibrium_density(self.params, a_tilde, self.quad)
    x = chebyshev_grid(a_tilde, self.config.grid_n)
    table = pd.DataFrame({'x': x, 'density': density.evaluate(x)})
    return RunArtifact('density', self._metadata(a_tilde=a_tilde), table=table)

  def _run_signed(self) -> RunArtifact:
    a = self._require_half_width()
    report = signed_eq_density(self.params, a, self.quad)
    x = open_chebyshev_grid(a, self.config.grid_n)
    table = pd.DataFrame({'x': x, 'density': report.density.evaluate(x)})
    meta = self._metadata(
      a=a,
      endpoint_coeff=report.endpoint_coeff,
      positive_halfwidth=report.positive_halfwidth,
      m_a=report.m_a,
      signed_constant=signed_equilibrium_constant(self.params, a, self.quad),
    )
    return RunArtifact('signed', meta, table=table)

  def _run_sigma(self) -> RunArtifact:
    a = self._require_half_width()
    density = sigma_density(self.params, a, self.quad)
    x = chebyshev_grid(a, self.config.grid_n)
    table = pd.DataFrame({'x': x, 'density': density.evaluate(x)})
    meta = self._metadata(a=a, mass=sigma_mass(self.params, a, self.quad),
                          energy_constant=sigma_energy_constant(self.params, a))
    return RunArtifact('sigma', meta, table=table)

  def _run_functional(self) -> RunArtifact:
    a = np.geomspace(self.config.a_min, self.config.a_max, self.config.n)
    values = np.array([ms_functional(self.params, float(ai)) for ai in a])
    meta = self._metadata(a_min=self.config.a_min, a_max=self.config.a_max,
                          grid_minimum_at=float(a[int(np.argmin(values))]))
    if self.params.q > 1:
      meta['a_tilde'] = self._a_tilde()
    return RunArtifact('functional', meta, table=pd.DataFrame({'a': a, 'functional': values}))

  def _run_iba(self) -> RunArtifact:
    trace = run_iba(self.params, self.config.a0, self.config.iba_stop_tol, self.config.iba_max_iter, self.quad)
    print(f"  - {trace.stop_reason} after {trace.iterations} step(s), limit {trace.limit_halfwidth}", file=sys.stderr)
    return RunArtifact('iba', self._metadata(), report=trace.to_dict())

  def _run_verify(self) -> RunArtifact:
    if self.params.q == 1:
      weak = weakly_admissible_check(self.params.s, self.params.b, self.config.frostman_tol, self.quad)
      report = {'weakly_admissible': weak.to_dict(), 'passed': weak.passed}
      return RunArtifact('verify', self._metadata(), report=report, passed=weak.passed)

    a_tilde = self._a_tilde()
    frostman = frostman_check(self.params, self.config.frostman_grid, self.config.frostman_tol, a_tilde, self.quad)
    print(f"  - Frostman constancy gap {frostman.constancy_gap:.3e}", file=sys.stderr)
    eq_fits = exponent_fits(equilibrium_density(self.params, a_tilde, self.quad))
    bal_fits = exponent_fits(bal_z_interval_density(self.params, a_tilde, self.quad))
    eq_expected = 0.5 * (1 + self.params.s)
    bal_expected = -0.5 * (1 - self.params.s)
    masses = normalization_check(self.params, a_tilde, self.quad)

    failures: List[str] = []
    if not frostman.passed:
      failures.append('frostman')
    if any(abs(v - eq_expected) > EXPONENT_TOL for v in eq_fits.values()):
      failures.append('equilibrium_exponent')
    if any(abs(v - bal_expected) > EXPONENT_TOL for v in bal_fits.values()):
      failures.append('balayage_exponent')
    if any(abs(err) > MASS_TOL for err in masses.values()):
      failures.append('normalization')

    report = {
      'a_tilde': a_tilde,
      'frostman': frostman.to_dict(),
      'equilibrium_exponents': eq_fits,
      'expected_equilibrium_exponent': eq_expected,
      'balayage_exponents': bal_fits,
      'expected_balayage_exponent': bal_expected,
      'mass_errors': masses,
      'failures': failures,
      'passed': not failures,
    }
    return RunArtifact('verify', self._metadata(), report=report, passed=not failures)

  def _run_logcase(self) -> RunArtifact:
    reference = log_case_reference(self.params.q, self.params.b)
    x = chebyshev_grid(reference.a_tilde, self.config.grid_n)
    table = pd.DataFrame({'x': x, 'density': reference.density.evaluate(x)})
    meta = self._metadata(a_tilde_log=reference.a_tilde, mass=reference.density.mass)
    meta.pop('s')
    return RunArtifact('logcase', meta, table=table)

class ConfigLoader:
  """Load default run settings."""
  @staticmethod
  def load_config(config_path: Optional[Path]) -> Dict[str, Any]:
    """Load settings from a YAML file; a missing default file gives no settings."""
    if config_path is None:
      config_path = Path(__file__).parent / 'config.yaml'
      if not config_path.exists():
        return {}
    with open(config_path, 'r') as file:
      config_data = yaml.safe_load(file)
    return dict(config_data or {})

class UsageErrorParser(argparse.ArgumentParser):
  """ArgumentParser that reports malformed command lines with exit status 64."""
  def error(self, message):
    self.print_usage(sys.stderr)
    self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")

# argparse destination -> settings key
_FLAG_KEYS = {
  's': 's', 'q': 'q', 'b': 'b', 'a': 'a', 'a0': 'a0', 'a_min': 'a_min', 'a_max': 'a_max',
  'n': 'n', 'grid_n': 'grid_n', 'out': 'output_path', 'format': 'format',
}
_TOL_KEYS = {'iba': 'iba_stop_tol', 'verify': 'frostman_tol'}

def build_parser() -> argparse.ArgumentParser:
  common = argparse.ArgumentParser(add_help=False)
  common.add_argument('--s', type=float, help='Riesz exponent s in (0, 1).')
  common.add_argument('--q', type=float, help='Charge of the attractor.')
  common.add_argument('--b', type=float, help='Height of the attractor z = bi.')
  common.add_argument('--a', type=float, help='Interval half-width (signed, sigma).')
  common.add_argument('--a0', type=float, help='Starting half-width for iba (automatic if omitted).')
  common.add_argument('--a-min', dest='a_min', type=float, help='Smallest a for functional.')
  common.add_argument('--a-max', dest='a_max', type=float, help='Largest a for functional.')
  common.add_argument('--n', type=int, help='Number of samples for functional.')
  common.add_argument('--grid-n', dest='grid_n', type=int, help='Number of density samples.')
  common.add_argument('--tol', type=float,
                      help='Tolerance: IBA stop tolerance for iba, Frostman tolerance for verify, quadrature otherwise.')
  common.add_argument('--out', type=Path, help='Output file (stdout if omitted).')
  common.add_argument('--format', choices=['csv', 'json'], help='Output format.')
  common.add_argument('-c', '--config', type=Path, help='Path to configuration file.')

  parser = UsageErrorParser(description='Riesz equilibrium measures in the field of an attracting point charge')
  parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
  commands = parser.add_subparsers(dest='command', required=True)
  for name, help_text in (
    ('endpoint', 'Critical endpoint a~ and derived scalars (JSON).'),
    ('density', 'Equilibrium density on a Chebyshev grid.'),
    ('signed', 'Signed equilibrium density of [-a, a].'),
    ('sigma', 'Density of sigma_a.'),
    ('functional', 'Mhaskar-Saff functional samples.'),
    ('iba', 'Iterated balayage trace (JSON).'),
    ('verify', 'Frostman, endpoint-exponent and normalization checks (JSON).'),
    ('logcase', 'Logarithmic reference endpoint and density.'),
  ):
    commands.add_parser(name, parents=[common], help=help_text)
  return parser

def settings_from_args(args: argparse.Namespace) -> Dict[str, Any]:
  settings = ConfigLoader.load_config(args.config)
  for dest, key in _FLAG_KEYS.items():
    value = getattr(args, dest, None)
    if value is not None:
      settings[key] = value
  if args.tol is not None:
    settings[_TOL_KEYS.get(args.command, 'quad_tol')] = args.tol
  settings['command'] = args.command
  return settings

def main(argv: Optional[List[str]] = None) -> int:
  parser = build_parser()
  args = parser.parse_args(argv)
  try:
    settings = settings_from_args(args)
  except (OSError, yaml.YAMLError) as exc:
    print(f"error: cannot read configuration: {exc}", file=sys.stderr)
    return EXIT_USAGE

  valid, messages = ConfigValidator().validate_configuration(settings)
  if not valid:
    for message in messages:
      if message.startswith('❌'):
        print(message, file=sys.stderr)
    return EXIT_DOMAIN

  try:
    config = RunConfig.from_settings(settings)
    artifact = EquilibriumRunner(config).run()
  except DomainError as exc:
    print(f"error: {exc}", file=sys.stderr)
    return EXIT_DOMAIN
  except (ConsistencyError, ConvergenceError) as exc:
    print(f"error: {exc}", file=sys.stderr)
    return EXIT_VERIFICATION

  text = artifact.render(config.format)
  if config.output_path is not None:
    Path(config.output_path).write_text(text, encoding='utf-8')
    print(f"\nResults saved to {config.output_path}", file=sys.stderr)
  else:
    sys.stdout.write(text)
  return EXIT_OK if artifact.passed else EXIT_VERIFICATION

if __name__ == "__main__":
  sys.exit(main())
