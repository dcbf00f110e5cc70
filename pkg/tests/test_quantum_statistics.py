import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from conftest import PAULI_X, PAULI_Y, random_instance
from qfi_uncertainty.linalg_core import DensityMatrix, center, sample_density, sample_observable
from qfi_uncertainty.quantum_statistics import (
    commutator_term,
    corr_beta,
    covariance,
    schroedinger_bound,
    statistics_report,
    variance,
    wyd_information,
)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 6)
betas = st.floats(0.01, 0.99).filter(lambda b: b != 0.5)

# state and observable where only the (1,2) eigenbasis coefficient is nonzero
RHO_3 = DensityMatrix(np.diag([0.1, 0.8, 0.1]))
A_12 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=float)


def test_variance_examples():
    rho = DensityMatrix(np.eye(2) / 2)
    assert variance(rho, np.eye(2)) == pytest.approx(0, abs=1e-15)
    assert variance(rho, PAULI_X) == pytest.approx(1, abs=1e-15)


@pytest.mark.parametrize("t", [0.1, 0.3, 0.5, 0.77])
def test_covariance_diagonal_projections(t):
    rho = DensityMatrix(np.diag([t, 1 - t]))
    for method in ("eigen", "trace"):
        cov = covariance(rho, np.diag([1.0, 0]), np.diag([0, 1.0]), method=method)
        assert cov == pytest.approx(-t * (1 - t), abs=1e-15)


@given(dim=dims, seed=seeds)
def test_covariance_hermitian_symmetry_and_routes(dim, seed):
    rho, a, b = random_instance(dim, seed)
    ab, ba = covariance(rho, a, b), covariance(rho, b, a)
    assert abs(ab - np.conj(ba)) <= 1e-12
    assert abs(ab - covariance(rho, a, b, method="trace")) <= 1e-10
    assert variance(rho, a) >= 0


def test_corr_commuting_is_zero():
    rho = DensityMatrix(np.diag([0.5, 0.3, 0.2]))
    assert abs(corr_beta(rho, np.diag([1.0, 2, 3]), np.diag([0.0, 1, -1]), 0.3)) <= 1e-15


@pytest.mark.parametrize("p", [0.1, 0.35, 0.9])
@pytest.mark.parametrize("beta", [-1, -0.3, 0.25, 0.5])
def test_corr_pauli_xy_is_imaginary(p, beta):
    rho = DensityMatrix(np.diag([p, 1 - p]))
    c = corr_beta(rho, PAULI_X, PAULI_Y, beta)
    assert abs(c.real) <= 1e-15
    # eigenbasis sum with a_12 = 1, b_12 = -i
    expected = 1j * (2 * p - 1) - 1j * (p**beta * (1 - p) ** (1 - beta) - (1 - p) ** beta * p ** (1 - beta))
    assert c == pytest.approx(expected, abs=1e-14)


@given(dim=dims, seed=seeds, beta=betas)
def test_corr_diagonal_is_information(dim, seed, beta):
    rho, a, _ = random_instance(dim, seed)
    c = corr_beta(rho, a, a, beta)
    assert abs(c.imag) <= 1e-10
    assert c.real == pytest.approx(wyd_information(rho, a, beta), abs=1e-12)
    assert -1e-12 <= c.real <= variance(rho, a) + 1e-12


def test_wyd_information_examples():
    assert wyd_information(RHO_3, np.diag([1.0, 2, 3]), 0.5) == pytest.approx(0, abs=1e-15)
    assert wyd_information(RHO_3, A_12, 0.5) == pytest.approx(0.9 - 2 * np.sqrt(0.08), abs=1e-12)
    assert wyd_information(RHO_3, A_12, 0.5) == pytest.approx(0.3343145750507619, abs=1e-12)
    # frozen from an independent scalar evaluation of (l1+l2) - (l1^b l2^(1-b) + l2^b l1^(1-b))
    for method in ("eigen", "trace"):
        assert wyd_information(RHO_3, A_12, 0.25, method=method) == pytest.approx(0.25613787094816864, abs=1e-10)


def test_beta_domain():
    for bad in (0.0, 1.0, -1.5, 2.0):
        with pytest.raises(ValueError):
            corr_beta(RHO_3, A_12, A_12, bad)


@given(dim=dims, seed=seeds, beta=st.sampled_from([-1.0, -0.5, 0.1, 0.3, 0.5, 0.8]))
def test_trace_route_matches_scipy_powers(dim, seed, beta):
    rho, a, b = random_instance(dim, seed)
    r, am, bm = rho.matrix, a.matrix, b.matrix
    pb = scipy.linalg.fractional_matrix_power(r, beta)
    pc = scipy.linalg.fractional_matrix_power(r, 1 - beta)
    oracle = np.trace(r @ am @ bm) - np.trace(pb @ am @ pc @ bm)
    scale = max(1.0, abs(oracle))
    assert abs(corr_beta(rho, a, b, beta) - oracle) <= 1e-9 * scale
    assert abs(corr_beta(rho, a, b, beta, method="trace") - oracle) <= 1e-9 * scale


def test_report_equality_case():
    rho, a, _ = random_instance(4, 3)
    b = 2 * a.matrix + 3 * np.eye(4)
    rep = statistics_report(rho, a, b, 0.3, verify=True)
    assert rep.s_gap == pytest.approx(rep.t_gap, abs=1e-9)
    assert abs(rep.s_gap) <= 1e-9


@pytest.mark.parametrize("beta", [-1, -0.5, 0.25, 0.5])
def test_report_remark_family(beta):
    t = 0.3
    rep = statistics_report(DensityMatrix(np.diag([t, 1 - t])), np.diag([1.0, 0]), np.diag([0, 1.0]), beta)
    assert rep.var_a == pytest.approx(0.21, abs=1e-15)
    assert rep.var_b == pytest.approx(0.21, abs=1e-15)
    assert rep.re_cov == pytest.approx(-0.21, abs=1e-15)
    assert abs(rep.s_gap) <= 1e-15
    assert abs(rep.t_gap) <= 1e-15


@given(dim=dims, seed=seeds)
def test_report_theorem_beta_03(dim, seed):
    rep = statistics_report(*random_instance(dim, seed), 0.3, verify=True)
    assert rep.s_gap >= rep.t_gap - 1e-9
    assert rep.s_gap == pytest.approx(rep.var_a * rep.var_b - rep.re_cov**2, abs=1e-12)
    assert rep.t_gap == pytest.approx(rep.i_a * rep.i_b - rep.re_corr**2, abs=1e-12)
    assert rep.theorem_range


def test_report_flags_extended_range():
    assert not statistics_report(*random_instance(3, 1), -0.5).theorem_range


@given(dim=dims, seed=seeds)
def test_schroedinger_and_heisenberg(dim, seed):
    rho, a, b = random_instance(dim, seed)
    rep = statistics_report(rho, a, b, 0.5)
    bound = schroedinger_bound(rho, a, b)
    assert rep.s_gap >= bound - 1e-9
    assert rep.var_a * rep.var_b >= bound - 1e-9


def test_schroedinger_pauli_example():
    rho = DensityMatrix(np.diag([0.9, 0.1]))
    rep = statistics_report(rho, PAULI_X, PAULI_Y, 0.5)
    assert rep.s_gap == pytest.approx(1.0, abs=1e-14)
    assert schroedinger_bound(rho, PAULI_X, PAULI_Y) == pytest.approx(0.64, abs=1e-14)


@given(dim=dims, seed=seeds, beta=st.floats(-1, 0.99).filter(lambda b: b != 0))
def test_corr_identities(dim, seed, beta):
    rho, a, b = random_instance(dim, seed)
    c = corr_beta(rho, a, b, beta)
    scale = max(1.0, abs(c))
    assert abs(2 * c.real - commutator_term(rho, a, b, beta)) <= 1e-9 * scale
    # Corr(A,B) = Cov(A,B) - Tr(rho^b A0 rho^(1-b) B0), with powers from scipy
    a0, b0 = center(a, rho).matrix, center(b, rho).matrix
    pb = scipy.linalg.fractional_matrix_power(rho.matrix, beta)
    pc = scipy.linalg.fractional_matrix_power(rho.matrix, 1 - beta)
    rhs = covariance(rho, a, b) - np.trace(pb @ a0 @ pc @ b0)
    assert abs(c - rhs) <= 1e-9 * scale


@given(dim=dims, seed=seeds, beta=st.floats(0.01, 0.99))
def test_beta_symmetry(dim, seed, beta):
    rho, a, b = random_instance(dim, seed)
    t1 = statistics_report(rho, a, b, beta).t_gap
    t2 = statistics_report(rho, a, b, 1 - beta).t_gap
    assert abs(t1 - t2) <= 1e-10 * max(1.0, abs(t1))


@given(dim=dims, seed=seeds)
def test_kosaki_monotonicity(dim, seed):
    rho, a, b = random_instance(dim, seed)
    ts = [statistics_report(rho, a, b, beta).t_gap for beta in np.arange(1, 11) * 0.05]
    assert np.all(np.diff(ts) >= -1e-9)


@given(dim=dims, seed=seeds, c=st.floats(-5, 5), d=st.floats(-5, 5), beta=st.sampled_from([-0.7, 0.2, 0.5]))
def test_centering_invariance(dim, seed, c, d, beta):
    rho, a, b = random_instance(dim, seed)
    r1 = statistics_report(rho, a, b, beta)
    r2 = statistics_report(rho, a.matrix + c * np.eye(dim), b.matrix + d * np.eye(dim), beta)
    for name in ("var_a", "var_b", "re_cov", "s_gap", "i_a", "i_b", "re_corr", "t_gap"):
        x, y = getattr(r1, name), getattr(r2, name)
        assert abs(x - y) <= 1e-10 * max(1.0, abs(x)), name


def test_verify_mode_cross_checks_routes():
    rho = sample_density(5, 99)
    rep = statistics_report(rho, sample_observable(5, 1), sample_observable(5, 2), -0.8, verify=True)
    assert np.isfinite(rep.t_gap)
