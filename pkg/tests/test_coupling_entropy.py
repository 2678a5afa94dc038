import math

import numpy as np
import pytest

from src.coupling_entropy import (
    Coupling2x2,
    compare_with_oracle,
    coupling_oracle,
    epsilon_for_kappa,
    f_objective,
    feasible_interval,
    g_value,
    gamma_ub_super1,
    h_s,
    p_star_general,
    random_triples,
)
from src.dsbs_core import kappa, renyi_ci
from src.errors import DomainError


def test_feasible_interval():
    assert feasible_interval(0.3, 0.6) == (0.0, 0.3)
    assert feasible_interval(0.8, 0.7) == pytest.approx((0.5, 0.7))


def test_infeasible_coupling_is_rejected():
    with pytest.raises(DomainError):
        Coupling2x2(0.4, 0.3, 0.6)
    with pytest.raises(DomainError):
        Coupling2x2(0.1, 0.8, 0.7)


@pytest.mark.parametrize("gamma1, gamma2", [(0.3, 0.6), (0.5, 0.5), (0.9, 0.2), (0.7, 0.8)])
@pytest.mark.parametrize("eps, s", [(0.1, 0.5), (0.3, 2.0), (0.45, 1.0)])
def test_objective_is_concave_in_cell(gamma1, gamma2, eps, s):
    lower, upper = feasible_interval(gamma1, gamma2)
    cells = np.linspace(lower, upper, 41)
    values = np.array([f_objective(Coupling2x2(p, gamma1, gamma2), eps, s) for p in cells])

    assert np.all(values[2:] - 2.0 * values[1:-1] + values[:-2] <= 1e-12)


@pytest.mark.parametrize("gamma1, gamma2", [(0.3, 0.6), (0.05, 0.95), (0.5, 0.5), (0.99, 0.4)])
@pytest.mark.parametrize("eps, s", [(0.02, 3.0), (0.2, 1.0), (0.4, 0.1)])
def test_closed_form_maximizer_matches_golden_section(gamma1, gamma2, eps, s):
    closed = p_star_general(gamma1, gamma2, kappa(eps, s))
    argmax, best = coupling_oracle(gamma1, gamma2, eps, s)

    assert closed == pytest.approx(argmax, abs=1e-7)
    assert g_value(gamma1, gamma2, eps, s) == pytest.approx(best, abs=1e-12)


@pytest.mark.parametrize("gamma", [0.0, 0.1, 0.27, 0.5])
@pytest.mark.parametrize("eps, s", [(0.05, 1.0), (0.3, 0.25)])
def test_reflection_symmetry(gamma, eps, s):
    assert g_value(gamma, gamma, eps, s) == pytest.approx(g_value(1.0 - gamma, 1.0 - gamma, eps, s), abs=1e-12)


def test_shannon_cross_entropy_scales_maximum():
    assert h_s(0.3, 0.4, 0.2, 2.0) == pytest.approx(g_value(0.3, 0.4, 0.2, 2.0) / 2.0)


def test_maximizer_at_unit_kappa_is_product():
    assert p_star_general(0.3, 0.6, 1.0) == pytest.approx(0.18, abs=1e-15)
    with pytest.raises(DomainError):
        p_star_general(0.3, 0.6, 0.5)


@pytest.mark.parametrize("eps", [0.05, 0.25, 0.45])
def test_upper_bound_construction_equals_closed_form(eps):
    for s in (0.2, 1.0, 3.0):
        assert gamma_ub_super1(eps, s) == pytest.approx(renyi_ci(eps, 1.0 + s).value, abs=1e-9)
    assert gamma_ub_super1(0.5, 1.0) == 0.0


def test_epsilon_for_kappa_inverts_kappa():
    for eps, s in ((0.2, 1.5), (0.01, 0.3), (0.49, 4.0)):
        assert epsilon_for_kappa(kappa(eps, s), s) == pytest.approx(eps, rel=1e-12)
    assert epsilon_for_kappa(1.0) == 0.5
    with pytest.raises(DomainError):
        epsilon_for_kappa(0.9)


def test_random_triples_are_seeded():
    first = random_triples(25, seed=11)
    second = random_triples(25, seed=11)

    np.testing.assert_array_equal(first, second)
    assert first.shape == (25, 3)
    assert np.all((first[:, :2] >= 0.0) & (first[:, :2] <= 1.0))
    assert np.all((first[:, 2] >= 1.0) & (first[:, 2] <= 1e6))


def test_compare_with_oracle_reports_small_gaps():
    comparison = compare_with_oracle(count=40, seed=5)

    assert comparison["points"] == 40
    assert comparison["worst_argmax_gap"] <= 1e-7
    assert comparison["worst_value_gap"] <= 1e-12
    assert all(math.isfinite(x) for x in comparison["worst_location"])
