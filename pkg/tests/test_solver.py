import json
import math

import pytest
import numpy as np

import sys
from pathlib import Path
sys.path.append(str(Path(__file__).parent.parent))

from equilibrium.exceptions import DomainError, NoEquilibriumError, NoRootError, WeaklyAdmissibleError
from equilibrium.measures import (
  balayage_mass,
  robin_potential,
  sigma_mass,
  signed_equilibrium_constant,
)
from equilibrium.solver import (
  RootBracket,
  SolverReport,
  balayage_mass_closed_form,
  c_equation_residual,
  critical_c,
  critical_endpoint,
  endpoint_from_c,
  equilibrium_constant,
  expand_bracket,
  mass_loss,
  ms_functional,
  ms_functional_closed_form,
  robin_potential_at_z,
)
from test_data import (
  A_TILDE_Q2,
  A_TILDE_Q5,
  C_Q5,
  F_Q_Q5,
  MASS_LOSS_Q2,
  MASS_LOSS_Q5,
  create_consensus_cases,
  create_field,
  create_reference_fields,
)


class TestRobinPotentialAtZ:
  @pytest.mark.parametrize('s, a, b', [(0.5, 1.0, 1.0), (0.25, 3.0, 0.5), (0.75, 0.4, 2.0)])
  def test_matches_quadrature(self, s, a, b):
    assert robin_potential_at_z(s, a, b) == pytest.approx(robin_potential(s, a, complex(0.0, b)), abs=1e-8)

  def test_point_interval_limit(self):
    assert robin_potential_at_z(0.5, 1e-8, 2.0) == pytest.approx(2.0 ** -0.5, rel=1e-6)

  def test_decreasing_in_height(self):
    values = [robin_potential_at_z(0.5, 1.0, b) for b in (0.25, 0.5, 1.0, 2.0, 4.0)]
    assert all(lo > hi for lo, hi in zip(values, values[1:]))

  def test_rejects_nonpositive(self):
    with pytest.raises(DomainError):
      robin_potential_at_z(0.5, 0.0, 1.0)

  def test_closed_form_mass(self):
    params = create_field()
    for a in (0.5, 1.44227, 4.0):
      assert balayage_mass_closed_form(params, a) == pytest.approx(balayage_mass(params, a).value, abs=1e-8)


class TestMhaskarSaffFunctional:
  @pytest.mark.parametrize('s, q', [(0.25, 2.0), (0.5, 5.0), (0.75, 0.75)])
  def test_closed_form_agrees(self, s, q):
    params = create_field(s=s, q=q)
    for a in np.geomspace(0.05, 50.0, 15):
      assert ms_functional_closed_form(params, a) == pytest.approx(ms_functional(params, a), rel=1e-10, abs=1e-12)

  def test_limits(self):
    params = create_field(q=0.75)
    assert abs(ms_functional(params, 1e6)) < 1e-3
    assert ms_functional(params, 1e-6) > 1e2

  def test_positive_decreasing_for_small_charge(self):
    params = create_field(q=0.75)
    values = [ms_functional(params, a) for a in np.geomspace(0.1, 100.0, 40)]
    assert all(v > 0 for v in values)
    assert all(lo > hi for lo, hi in zip(values, values[1:]))

  @pytest.mark.parametrize('q', [5.0, 2.0])
  def test_minimum_at_critical_endpoint(self, q):
    params = create_reference_fields()[q]
    grid = np.geomspace(0.1, 100.0, 200)
    values = [ms_functional(params, a) for a in grid]
    i = int(np.argmin(values))
    a_tilde = endpoint_from_c(params.b, critical_c(params))
    assert grid[i - 1] <= a_tilde <= grid[i + 1]

  def test_equals_signed_equilibrium_constant(self):
    params = create_field()
    for a in (0.5, 2.0, 8.0):
      assert signed_equilibrium_constant(params, a) == pytest.approx(ms_functional(params, a), abs=1e-8)


class TestCriticalC:
  def test_reference_q5(self):
    params = create_field(q=5.0)
    c = critical_c(params)
    assert c == pytest.approx(C_Q5, abs=1e-4)
    assert endpoint_from_c(1.0, c) == pytest.approx(A_TILDE_Q5, abs=1e-4)
    assert abs(c_equation_residual(params, c)) < 1e-12

  def test_reference_q2(self):
    c = critical_c(create_field(q=2.0))
    assert c == pytest.approx(0.95341, abs=1e-4)
    assert endpoint_from_c(1.0, c) == pytest.approx(A_TILDE_Q2, abs=1e-3)

  def test_no_equilibrium(self):
    with pytest.raises(NoEquilibriumError):
      critical_c(create_field(q=0.9))
    with pytest.raises(WeaklyAdmissibleError):
      critical_c(create_field(q=1.0))

  def test_scales_with_height(self):
    base = endpoint_from_c(1.0, critical_c(create_field(q=3.0)))
    scaled = endpoint_from_c(2.5, critical_c(create_field(q=3.0, b=2.5)))
    assert scaled == pytest.approx(2.5 * base, rel=1e-9)

  def test_decreasing_in_charge(self):
    endpoints = [endpoint_from_c(1.0, critical_c(create_field(q=q))) for q in (2.0, 3.0, 5.0, 10.0)]
    assert all(lo > hi for lo, hi in zip(endpoints, endpoints[1:]))


class TestCriticalEndpoint:
  @pytest.fixture(scope='class')
  def report(self):
    return critical_endpoint(create_field())

  def test_reference_endpoint(self, report):
    assert report.a_tilde == pytest.approx(A_TILDE_Q5, abs=1e-4)
    assert set(report.per_method) == {'c_equation', 'sigma_mass', 'endpoint_coeff'}
    assert report.consensus_spread <= 1e-6 * report.a_tilde
    for estimate in report.per_method.values():
      assert estimate == pytest.approx(A_TILDE_Q5, abs=1e-4)

  def test_derived_scalars(self, report):
    assert report.c == pytest.approx(report.d ** 2 / (1 + report.d ** 2), abs=1e-12)
    assert report.mass_loss == pytest.approx(MASS_LOSS_Q5, abs=5e-3)
    assert report.mass_loss == pytest.approx(1.0 - report.m_a_tilde, abs=1e-6)
    assert report.F_Q == pytest.approx(F_Q_Q5, abs=1e-3)
    assert report.F_Q < 0

  def test_functional_minimum(self, report):
    params = create_field()
    assert ms_functional(params, report.a_tilde * (1 + 1e-3)) > report.ms_value
    assert ms_functional(params, report.a_tilde * (1 - 1e-3)) > report.ms_value

  def test_unit_sigma_mass(self, report):
    assert sigma_mass(create_field(), report.a_tilde) == pytest.approx(1.0, abs=1e-8)

  def test_json_round_trip(self, report):
    restored = SolverReport.from_dict(json.loads(json.dumps(report.to_dict())))
    assert restored == report

  @pytest.mark.parametrize('s, q', create_consensus_cases())
  def test_routes_agree(self, s, q):
    report = critical_endpoint(create_field(s=s, q=q))
    assert report.consensus_spread <= 1e-6 * report.a_tilde

  def test_inadmissible_charge(self):
    with pytest.raises(NoEquilibriumError, match='does not exist'):
      critical_endpoint(create_field(q=0.9))


class TestMassLossAndConstant:
  @pytest.mark.parametrize('q, expected', [(5.0, MASS_LOSS_Q5), (2.0, MASS_LOSS_Q2)])
  def test_mass_loss(self, q, expected):
    params = create_reference_fields()[q]
    a_tilde = endpoint_from_c(params.b, critical_c(params))
    loss = mass_loss(params)
    assert loss == pytest.approx(expected, abs=5e-3)
    assert loss == pytest.approx(1.0 - balayage_mass(params, a_tilde).value, abs=1e-6)

  @pytest.mark.parametrize('q', [1.5, 2.0, 5.0, 10.0])
  def test_constant_negative(self, q):
    assert equilibrium_constant(create_field(q=q)) < 0

  def test_constant_reference(self):
    assert equilibrium_constant(create_field(), A_TILDE_Q5) == pytest.approx(-5.0 / math.sqrt(A_TILDE_Q5 ** 2 + 1))
    assert equilibrium_constant(create_field()) == pytest.approx(F_Q_Q5, abs=1e-3)

  def test_constant_vanishes_near_unit_charge(self):
    assert abs(equilibrium_constant(create_field(q=1.01))) < 1e-2

  def test_inadmissible(self):
    with pytest.raises(NoEquilibriumError):
      mass_loss(create_field(q=0.5))


class TestBracketing:
  def test_expands_upward(self):
    bracket = expand_bracket(lambda x: x - 3.0, 1.0)
    assert bracket.lo <= 3.0 <= bracket.hi
    assert bracket.f_lo <= 0 <= bracket.f_hi

  def test_expands_downward(self):
    bracket = expand_bracket(lambda x: x - 0.01, 1.0)
    assert bracket.lo <= 0.01 <= bracket.hi

  def test_no_sign_change(self):
    with pytest.raises(NoRootError):
      expand_bracket(lambda x: -1.0, 1.0, max_steps=10)

  def test_invalid_bracket(self):
    with pytest.raises(DomainError, match='no sign change'):
      RootBracket(0.0, 1.0, 1.0, 2.0)
