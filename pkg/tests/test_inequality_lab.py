import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_instance
from qfi_uncertainty.inequality_lab import (
    NoViolationFound,
    ce_closed_form_gap,
    ce_family,
    check,
    explore,
    find_violation,
    g_monotonicity_probe,
    instance_gap,
    proof_kernel,
    remark_family,
    xi_eta,
)
from qfi_uncertainty.linalg_core import DensityMatrix, Observable, matrix_from_dict
from qfi_uncertainty.monotone_metrics import BKM, RLD, SLD, WY, hgamma, upf_bound, wyd
from qfi_uncertainty.quantum_statistics import statistics_report

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 6)
CE_BETAS = [-1.0, -0.75, -0.5, -0.25, -0.05]

# (2(1-t) - K) K with K = t^b (1-2t)^(1-b) + (1-2t)^b t^(1-b), evaluated in exact
# rational arithmetic at t = 1/10, beta = -1: -189297/6400
CE_GAP_T01_RLD = -29.57765625
# same expression at beta = 1/2 in floating point: K = 2 sqrt(0.08)
CE_GAP_T01_WY = (1.8 - 2 * np.sqrt(0.08)) * 2 * np.sqrt(0.08)


def test_xi_eta_vanish_for_scalar_observable():
    rho, _, b = random_instance(4, 1)
    xi, eta = xi_eta(rho, 3.0 * np.eye(4), b, 0.3)
    assert xi == pytest.approx(0, abs=1e-14) and eta == pytest.approx(0, abs=1e-14)


@given(dim=dims, seed=seeds, beta=st.floats(0.01, 0.5))
def test_xi_minus_eta_nonnegative_in_theorem_range(dim, seed, beta):
    xi, eta = xi_eta(*random_instance(dim, seed), beta)
    assert xi - eta >= -1e-9


@given(dim=dims, seed=seeds, beta=st.floats(-1, 0.99).filter(lambda b: b != 0))
def test_xi_eta_equals_s_minus_t(dim, seed, beta):
    rho, a, b = random_instance(dim, seed)
    xi, eta = xi_eta(rho, a, b, beta)
    rep = statistics_report(rho, a, b, beta)
    assert abs((xi - eta) - (rep.s_gap - rep.t_gap)) <= 1e-9 * max(1.0, abs(rep.t_gap))
    # and the two sums individually
    assert xi == pytest.approx(rep.var_a * rep.var_b - rep.i_a * rep.i_b, rel=1e-9, abs=1e-9)
    assert eta == pytest.approx(rep.re_cov**2 - rep.re_corr**2, rel=1e-9, abs=1e-9)


@given(lam=st.lists(st.floats(1e-6, 1.0), min_size=2, max_size=6), beta=st.floats(0.001, 0.5))
def test_proof_kernel_nonnegative(lam, beta):
    assert proof_kernel(np.array(lam), beta).min() >= -1e-12


def test_proof_kernel_can_be_negative_outside_range():
    assert proof_kernel(np.array([0.01, 0.98, 0.01]), -1.0).min() < 0


def test_ce_family_matrices():
    rho, a, b = ce_family(0.1)
    np.testing.assert_array_equal(rho.matrix, np.diag([0.1, 0.8, 0.1]))
    for t in (1e-6, 0.2, 0.49):
        rho, a, b = ce_family(t)
        assert np.count_nonzero(a.matrix) == 2 and a.matrix[0, 1] == a.matrix[1, 0] == 1
        assert np.count_nonzero(b.matrix) == 2 and b.matrix[1, 2] == b.matrix[2, 1] == 1
        assert np.trace(rho.matrix).real == pytest.approx(1, abs=1e-15)
        np.testing.assert_allclose(sorted(rho.eigenvalues), sorted([t, 1 - 2 * t, t]), atol=1e-15)
    for bad in (0.0, 0.5, -0.1, 5e-9):
        with pytest.raises(ValueError):
            ce_family(bad)


def test_ce_closed_form_values():
    assert ce_closed_form_gap(0.1, -1) == pytest.approx(CE_GAP_T01_RLD, abs=1e-12)
    assert ce_closed_form_gap(0.1, 0.5) == pytest.approx(CE_GAP_T01_WY, abs=1e-12)
    assert ce_closed_form_gap(0.1, 0.5) == pytest.approx(0.6982337649, abs=1e-9)
    with pytest.raises(ValueError):
        ce_closed_form_gap(0.6, -1)


def test_ce_closed_form_matches_matrix_path():
    for t in np.geomspace(1e-6, 0.49, 40):
        for beta in CE_BETAS + [0.1, 0.25, 0.5]:
            xi, eta = xi_eta(*ce_family(t), beta)
            closed = ce_closed_form_gap(t, beta)
            assert abs((xi - eta) - closed) <= 1e-9 * max(1.0, abs(closed))
    xi, eta = xi_eta(*ce_family(0.1), -1)
    assert abs((xi - eta) - CE_GAP_T01_RLD) <= 1e-9


@pytest.mark.parametrize("beta", CE_BETAS)
def test_ce_gap_diverges_as_t_to_zero(beta):
    ts = np.geomspace(1e-3, 1e-12, 30)
    gaps = np.array([ce_closed_form_gap(t, beta) for t in ts])
    tail = gaps[gaps < 0]
    assert tail.size > 0
    assert np.all(np.diff(tail) < 0)


@pytest.mark.parametrize("beta", CE_BETAS)
def test_find_violation(beta):
    rec = find_violation(beta)
    assert rec.gap_at_t0 < 0
    assert ce_closed_form_gap(rec.t0, beta) < 0
    assert abs(rec.closed_form_gap - rec.matrix_gap) <= 1e-9 * max(1.0, abs(rec.closed_form_gap))
    assert rec.closed_form_gap < 0


def test_find_violation_coarse_grid():
    rec = find_violation(-1.0, 1e-4, 0.49, 200)
    assert rec.gap_at_t0 < 0


def test_find_violation_bisection():
    rec = find_violation(-0.05)
    assert rec.refined
    # the refined point sits on a sign change of width <= 1e-10
    assert ce_closed_form_gap(rec.t0, -0.05) < 0 <= ce_closed_form_gap(rec.t0 + 2e-10, -0.05)
    assert rec.t0 < find_violation(-1.0).t0


def test_find_violation_errors():
    with pytest.raises(ValueError):
        find_violation(0.25)
    with pytest.raises(ValueError):
        find_violation(-1, 0.3, 0.2)
    with pytest.raises(NoViolationFound, match="widen"):
        find_violation(-0.05, 1e-4, 0.4, 50)


@pytest.mark.parametrize("beta", [-1, -0.5, 0.25, 0.5])
def test_remark_family(beta):
    for t in np.linspace(0.05, 0.95, 19):
        rho, a, b = remark_family(t)
        rep = statistics_report(rho, a, b, beta)
        assert abs(rep.s_gap) <= 1e-12 and abs(rep.t_gap) <= 1e-12
        assert rep.var_a == pytest.approx(t * (1 - t), abs=1e-15)
        assert not (rep.s_gap < rep.t_gap - 1e-12)


def test_check_wy_random_holds():
    for seed in range(30):
        rep = check(*random_instance(2 + seed % 5, seed), WY)
        assert rep.holds


def test_check_rld_counterexample():
    rec = find_violation(-1)
    rep = check(*ce_family(rec.t0), RLD)
    assert not rep.holds and rep.gap < 0
    rep = check(*ce_family(0.1), RLD)
    assert rep.gap == pytest.approx(CE_GAP_T01_RLD, abs=1e-9)
    assert rep.metric_bound.bound == 0


def test_check_bkm_always_holds():
    for seed in range(20):
        rep = check(*random_instance(3, seed), BKM)
        assert rep.t_gap == 0 and rep.holds and rep.xi is None


@given(dim=dims, seed=seeds, beta=st.floats(0.01, 0.5))
def test_consistency_triangle(dim, seed, beta):
    rho, a, b = random_instance(dim, seed)
    rep = check(rho, a, b, wyd(beta))
    assert abs((rep.s_gap - rep.t_gap) - (rep.xi - rep.eta)) <= 1e-9
    assert abs(rep.t_gap - rep.metric_bound.bound) <= 1e-9
    assert rep.holds == (rep.gap >= -rep.tolerance)


@given(dim=dims, seed=seeds)
def test_equality_condition(dim, seed):
    rho, a, _ = random_instance(dim, seed)
    b = -1.7 * a.matrix + 0.4 * np.eye(dim)
    for beta in (0.1, 0.3, 0.5):
        assert abs(check(rho, a, b, wyd(beta)).gap) <= 1e-9


def test_explore_wy_has_no_violations():
    summ = explore(WY, trials=1000, seed=3)
    assert summ.violations_found == 0
    assert summ.min_gap >= -1e-9


def test_explore_rld_on_ce_grid_finds_violations():
    assert explore(RLD, trials=50, sampler="ce").violations_found >= 1


def test_explore_report_only_and_reproducible():
    s1 = explore(SLD, dims=[2, 3], trials=200, seed=11)
    s2 = explore(SLD, dims=[2, 3], trials=200, seed=11)
    assert s1 == s2
    arg = s1.argmin
    rho = DensityMatrix(matrix_from_dict(arg["rho"]))
    a, b = Observable(matrix_from_dict(arg["A"])), Observable(matrix_from_dict(arg["B"]))
    assert abs(instance_gap(SLD, rho, a, b) - s1.min_gap) <= 1e-10
    assert explore(SLD, dims=[2, 3], trials=200, seed=12).min_gap != s1.min_gap
    with pytest.raises(ValueError):
        explore(SLD, trials=0)


def test_probe_kosaki_range_is_asserted():
    rep = g_monotonicity_probe(wyd(0.1), wyd(0.5), trials=200, seed=1)
    assert rep.asserted and rep.verdict == "holds"
    assert rep.min_difference >= -1e-9


def test_probe_report_only_and_incomparable():
    rep = g_monotonicity_probe(RLD, SLD, trials=100)
    assert rep.comparable and not rep.asserted and rep.verdict == "report-only"
    assert np.isfinite(rep.min_difference)
    rep = g_monotonicity_probe(SLD, RLD, trials=100)
    assert not rep.comparable and rep.verdict == "incomparable"
    rep = g_monotonicity_probe(hgamma(0.75), hgamma(0.75), trials=20)
    assert rep.min_difference == 0


def test_g_monotone_beyond_kosaki_is_only_reported():
    # G(f) vanishes for beta <= 0, so any comparison with it is one-sided
    inst = random_instance(3, 5)
    assert upf_bound(RLD, *inst).bound == 0
    rep = g_monotonicity_probe(RLD, wyd(0.25), trials=50)
    assert rep.verdict == "report-only" and rep.min_difference >= 0
