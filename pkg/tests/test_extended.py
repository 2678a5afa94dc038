import math

import mpmath
import pytest

from src.dsbs_core import exact_ci, renyi_ci, wyner_ci
from src.errors import DomainError
from src.extended import (
    endpoint_omega_mp,
    epsilon0_mp,
    exact_mp,
    phi_ratio_mp,
    renyi_ci_mp,
    wyner_mp,
)
from src.negative_orders import omega, s_range_end


EPSILON0 = 0.05510465170298144


@pytest.mark.parametrize("eps", [0.01, 0.1, 0.3, 0.45])
def test_double_precision_limits_agree_with_extended(eps):
    assert float(wyner_mp(eps)) == pytest.approx(wyner_ci(eps), abs=1e-13)
    assert float(exact_mp(eps)) == pytest.approx(exact_ci(eps), abs=1e-13)


@pytest.mark.parametrize("eps", [0.05, 0.2, 0.4])
@pytest.mark.parametrize("alpha", [0.5, 1.5, 3.0, 20.0, math.inf])
def test_double_precision_closed_form_agrees_with_extended(eps, alpha):
    assert float(renyi_ci_mp(eps, alpha)) == pytest.approx(renyi_ci(eps, alpha).value, abs=1e-11)


def test_boundary_values():
    assert renyi_ci_mp(0.0, 2.0) == 1
    assert renyi_ci_mp(0.5, 2.0) == 0
    assert renyi_ci_mp(0.3, 0.0) == 0
    assert exact_mp(0.0) == 1


def test_negative_orders_are_not_covered():
    with pytest.raises(DomainError):
        renyi_ci_mp(0.3, -1.0)


def test_precision_is_scoped():
    before = mpmath.mp.dps
    renyi_ci_mp(0.2, 2.0, dps=80)

    assert mpmath.mp.dps == before


def test_phi_ratio_extended_values():
    assert phi_ratio_mp(1.0) == 1
    small = 1e-4
    series = 1.0 / (2.0 * math.log(2.0)) + small * small / (12.0 * math.log(2.0))
    assert float(phi_ratio_mp(small)) == pytest.approx(series, abs=1e-15)
    with pytest.raises(DomainError):
        phi_ratio_mp(0.0)


@pytest.mark.parametrize("eps", [0.03, 0.1, 0.3])
def test_endpoint_omega_matches_double_precision(eps):
    expected = omega(eps, s_range_end(eps))
    assert float(endpoint_omega_mp(eps)) == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_threshold_root():
    root = epsilon0_mp()

    assert float(root) == pytest.approx(EPSILON0, abs=1e-12)
    assert abs(endpoint_omega_mp(float(root))) < 1e-9


def test_threshold_root_needs_sign_change():
    with pytest.raises(DomainError):
        epsilon0_mp(low=0.2, high=0.3)
