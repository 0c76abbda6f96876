import io
import json

import pytest
import numpy as np
import pandas as pd

import sys
from pathlib import Path
sys.path.append(str(Path(__file__).parent.parent))

from equilibrium.exceptions import DomainError
from equilibrium.solver import SolverReport
from riesz_equilibrium import (
  EXIT_DOMAIN,
  EXIT_OK,
  EXIT_USAGE,
  ConfigLoader,
  RunArtifact,
  RunConfig,
  build_parser,
  chebyshev_grid,
  main,
  open_chebyshev_grid,
  settings_from_args,
)
from test_data import A_TILDE_Q5

TEST_CONFIG = str(Path(__file__).parent / 'test_config.yaml')


def run_cli(capsys, *argv):
  code = main(list(argv) + ['-c', TEST_CONFIG])
  captured = capsys.readouterr()
  return code, captured.out, captured.err


def read_csv(text):
  return pd.read_csv(io.StringIO(text), comment='#')


def read_metadata(text):
  meta = {}
  for line in text.splitlines():
    if line.startswith('# '):
      key, _, value = line[2:].partition(': ')
      meta[key] = value
  return meta


class TestGrids:
  def test_chebyshev_grid(self):
    x = chebyshev_grid(2.0, 9)
    assert x[0] == -2.0 and x[-1] == 2.0
    assert np.array_equal(x, -x[::-1])
    assert np.all(np.diff(x) > 0)

  def test_open_grid_avoids_endpoints(self):
    x = open_chebyshev_grid(1.0, 8)
    assert np.all(np.abs(x) < 1.0)
    assert np.array_equal(x, -x[::-1])

  def test_grid_too_small(self):
    with pytest.raises(DomainError):
      chebyshev_grid(1.0, 1)


class TestRunConfig:
  @pytest.mark.parametrize('command, fmt', [('endpoint', 'json'), ('iba', 'json'), ('verify', 'json'),
                                            ('density', 'csv'), ('functional', 'csv'), ('logcase', 'csv')])
  def test_default_format(self, command, fmt):
    assert RunConfig(command=command).format == fmt

  def test_invalid_format(self):
    with pytest.raises(DomainError):
      RunConfig(command='density', format='xlsx')

  def test_from_settings_ignores_unknown_keys(self):
    config = RunConfig.from_settings({'command': 'density', 's': 0.25, 'colour': 'blue'})
    assert config.params.s == 0.25
    assert config.quad_config.tol == 1e-10

  def test_artifact_csv_header(self):
    artifact = RunArtifact('density', {'command': 'density', 'a_tilde': 1.5},
                           table=pd.DataFrame({'x': [0.0], 'density': [0.1]}))
    text = artifact.render('csv')
    assert text.startswith('# command: density\n# a_tilde: 1.5\n')
    assert read_csv(text)['density'][0] == 0.1


class TestConfigLoader:
  def test_load_config(self):
    settings = ConfigLoader.load_config(Path(TEST_CONFIG))
    assert settings['grid_n'] == 11
    assert settings['frostman_grid'] == 21

  def test_missing_file(self, tmp_path):
    with pytest.raises(FileNotFoundError):
      ConfigLoader.load_config(tmp_path / 'missing.yaml')

  def test_flags_override_file(self):
    args = build_parser().parse_args(['density', '--grid-n', '7', '--q', '2', '-c', TEST_CONFIG])
    settings = settings_from_args(args)
    assert settings['grid_n'] == 7
    assert settings['q'] == 2.0
    assert settings['command'] == 'density'

  @pytest.mark.parametrize('command, key', [('iba', 'iba_stop_tol'), ('verify', 'frostman_tol'),
                                            ('density', 'quad_tol')])
  def test_tol_target(self, command, key):
    args = build_parser().parse_args([command, '--tol', '1e-7', '-c', TEST_CONFIG])
    assert settings_from_args(args)[key] == 1e-7


class TestCommands:
  def test_endpoint_json(self, capsys):
    code, out, err = run_cli(capsys, 'endpoint')
    assert code == EXIT_OK
    data = json.loads(out)
    assert data['a_tilde'] == pytest.approx(A_TILDE_Q5, abs=1e-4)
    assert SolverReport.from_dict(data).a_tilde == data['a_tilde']
    assert "Running 'endpoint'" in err

  def test_density_grid(self, capsys):
    code, out, _ = run_cli(capsys, 'density', '--grid-n', '5')
    assert code == EXIT_OK
    table = read_csv(out)
    assert len(table) == 5
    assert list(table.columns) == ['x', 'density']
    assert table['density'].iloc[0] == 0.0 and table['density'].iloc[-1] == 0.0
    assert table['density'].iloc[2] > 0
    np.testing.assert_allclose(table['density'].values, table['density'].values[::-1], rtol=1e-14)
    assert float(read_metadata(out)['a_tilde']) == pytest.approx(A_TILDE_Q5, abs=1e-4)

  def test_no_equilibrium(self, capsys):
    code, _, err = run_cli(capsys, 'density', '--q', '0.9')
    assert code == EXIT_DOMAIN
    assert 'does not exist' in err

  def test_signed_needs_half_width(self, capsys):
    code, _, err = run_cli(capsys, 'signed')
    assert code == EXIT_DOMAIN
    assert 'half-width' in err

  def test_signed_metadata(self, capsys):
    code, out, _ = run_cli(capsys, 'signed', '--a', '4', '--grid-n', '6')
    assert code == EXIT_OK
    meta = read_metadata(out)
    assert float(meta['endpoint_coeff']) < 0
    assert float(meta['positive_halfwidth']) < 4.0

  def test_functional_rows(self, capsys):
    code, out, _ = run_cli(capsys, 'functional', '--a-min', '0.5', '--a-max', '5', '--n', '6')
    assert code == EXIT_OK
    table = read_csv(out)
    assert len(table) == 6
    assert table['a'].iloc[0] == pytest.approx(0.5)
    assert table['a'].iloc[-1] == pytest.approx(5.0)
    assert 'a_tilde' in read_metadata(out)

  def test_logcase_header(self, capsys):
    code, out, _ = run_cli(capsys, 'logcase')
    assert code == EXIT_OK
    meta = read_metadata(out)
    assert float(meta['a_tilde_log']) == pytest.approx(0.75)
    assert 's' not in meta

  def test_weakly_admissible_verify(self, capsys):
    code, out, _ = run_cli(capsys, 'verify', '--q', '1')
    assert code == EXIT_OK
    data = json.loads(out)
    assert data['passed'] is True
    assert 'weakly_admissible' in data

  def test_output_file_is_deterministic(self, tmp_path, capsys):
    first, second = tmp_path / 'first.csv', tmp_path / 'second.csv'
    assert run_cli(capsys, 'sigma', '--a', '2', '--out', str(first))[0] == EXIT_OK
    assert run_cli(capsys, 'sigma', '--a', '2', '--out', str(second))[0] == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert len(read_csv(first.read_text())) == 11

  @pytest.mark.parametrize('argv', [['density', '--s', 'abc'], ['bogus'], []])
  def test_malformed_command_line(self, argv):
    with pytest.raises(SystemExit) as exc_info:
      main(argv)
    assert exc_info.value.code == EXIT_USAGE

  def test_unreadable_config(self, tmp_path, capsys):
    assert main(['density', '-c', str(tmp_path / 'missing.yaml')]) == EXIT_USAGE
    assert 'cannot read configuration' in capsys.readouterr().err
