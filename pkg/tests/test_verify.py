import json

import pytest
import numpy as np

import sys
from pathlib import Path
sys.path.append(str(Path(__file__).parent.parent))

from equilibrium.exceptions import DomainError, FitQualityError
from equilibrium.measures import (
  IntervalDensity,
  bal_z_interval_density,
  equilibrium_density,
  robin_density,
)
from equilibrium.quadrature import REGULAR, QuadratureConfig
from equilibrium.solver import critical_c, endpoint_from_c
from equilibrium.verify import (
  EXTERIOR_FACTORS,
  FrostmanReport,
  WeaklyAdmissibleReport,
  endpoint_exponent_fit,
  exponent_fits,
  frostman_check,
  normalization_check,
  sigma_frostman_check,
  weakly_admissible_check,
)
from test_data import F_Q_Q5, create_field


def a_tilde_of(params):
  return endpoint_from_c(params.b, critical_c(params))


class TestFrostman:
  @pytest.fixture(scope='class')
  def report(self):
    return frostman_check(create_field(), grid_size=41)

  def test_passes(self, report):
    assert report.passed
    assert report.constancy_gap <= 1e-6 * abs(report.F_Q_used)

  def test_constant_matches_reference(self, report):
    assert report.F_Q_used == pytest.approx(F_Q_Q5, abs=1e-3)
    assert report.on_support_max == pytest.approx(report.F_Q_used, abs=1e-6 * abs(F_Q_Q5))

  def test_strict_exterior_inequality(self, report):
    assert len(report.exterior_points) == 2 * len(EXTERIOR_FACTORS)
    assert all(excess > 0 for excess in report.exterior_excess)

  def test_report_serialises(self, report):
    data = json.loads(json.dumps(report.to_dict()))
    assert data['passed'] is True
    assert FrostmanReport.from_dict(data) == report

  def test_tighter_quadrature_keeps_gap(self, report):
    tight = frostman_check(create_field(), grid_size=41, quad_config=QuadratureConfig(tol=1e-11))
    assert tight.constancy_gap <= report.constancy_gap + 1e-9 * abs(report.F_Q_used)
    assert tight.passed

  def test_sigma_constant_on_interval(self):
    report = sigma_frostman_check(create_field(), 3.0, grid_size=31)
    assert report.constancy_gap <= report.tol

  def test_grid_too_small(self):
    with pytest.raises(DomainError):
      frostman_check(create_field(), grid_size=1)


class TestEndpointExponent:
  @pytest.mark.parametrize('s', [0.25, 0.5, 0.75])
  def test_equilibrium_vanishes_at_edges(self, s):
    params = create_field(s=s)
    fits = exponent_fits(equilibrium_density(params, a_tilde_of(params)))
    for slope in fits.values():
      assert slope == pytest.approx((1 + s) / 2, abs=0.05)

  @pytest.mark.parametrize('s', [0.25, 0.5, 0.75])
  def test_robin_blows_up_at_edges(self, s):
    fits = exponent_fits(robin_density(s, 2.0))
    for slope in fits.values():
      assert slope == pytest.approx(-(1 - s) / 2, abs=0.01)

  @pytest.mark.parametrize('s', [0.25, 0.5, 0.75])
  def test_balayage_blows_up_at_edges(self, s):
    density = bal_z_interval_density(create_field(s=s), 2.0)
    assert endpoint_exponent_fit(density, 'right') == pytest.approx(-(1 - s) / 2, abs=0.02)

  def test_invalid_side(self):
    with pytest.raises(DomainError, match='side'):
      endpoint_exponent_fit(robin_density(0.5, 1.0), 'top')

  def test_negative_density_rejected(self):
    density = IntervalDensity(1.0, lambda x: -np.ones_like(np.asarray(x, dtype=float)), REGULAR)
    with pytest.raises(FitQualityError):
      endpoint_exponent_fit(density)


class TestWeaklyAdmissible:
  @pytest.mark.parametrize('s, b', [(0.5, 1.0), (0.25, 2.0), (0.75, 0.5)])
  def test_potential_reproduces_field(self, s, b):
    report = weakly_admissible_check(s, b)
    assert report.passed
    assert report.mass == pytest.approx(1.0, abs=1e-6)
    assert len(report.test_points) == 7

  def test_invalid_s(self):
    with pytest.raises(DomainError):
      weakly_admissible_check(1.0, 1.0)

  def test_report_serialises(self):
    report = weakly_admissible_check(0.5, 1.0)
    data = json.loads(json.dumps(report.to_dict()))
    assert data['passed'] is True
    assert WeaklyAdmissibleReport.from_dict(data) == report

  def test_constant_vanishes(self):
    report = weakly_admissible_check(0.75, 0.5)
    assert report.F_Q == pytest.approx(float(np.mean(report.differences)))
    assert abs(report.F_Q) <= report.tol


class TestNormalization:
  def test_unit_masses(self):
    params = create_field()
    errors = normalization_check(params, a_tilde_of(params))
    assert set(errors) == {'equilibrium', 'robin', 'signed', 'line_balayage'}
    for name, err in errors.items():
      assert abs(err) < 1e-8, name
