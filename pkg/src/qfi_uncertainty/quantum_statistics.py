"""Covariance, variance, Wigner-Yanase-Dyson correlation and information.

Each functional has two routes.  ``method="eigen"`` (the default) works with
the eigenvalues of rho and the coefficients of the centred observables in the
eigenbasis of rho, reusing the single decomposition cached on the state.
``method="trace"`` evaluates the defining trace formulas with matrix powers.
The two are independent and agree to rounding; :func:`statistics_report`
cross-checks them when ``verify=True``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg_core import (
    _check_dims,
    as_density,
    as_observable,
    commutator,
    eigenbasis_coefficients,
    expectation,
    matrix_power,
)

IMAG_TOL = 1e-10
VERIFY_TOL = 1e-9


class ConsistencyError(ArithmeticError):
    """Two independent evaluation routes disagree."""


def validate_beta(beta: float) -> float:
    beta = float(beta)
    if not (-1.0 <= beta < 1.0) or beta == 0.0:
        raise ValueError(f"beta must lie in [-1, 1) without 0, got {beta}")
    return beta


def in_theorem_range(beta: float) -> bool:
    return 0.0 < beta <= 0.5


def _prep(rho, *obs):
    rho = as_density(rho)
    obs = [as_observable(o) for o in obs]
    _check_dims(rho.matrix, *(o.matrix for o in obs))
    return rho, obs


def _coeffs(rho, x):
    return eigenbasis_coefficients(x, rho.spectrum, rho).a


def _as_real(z: complex, what: str) -> float:
    if abs(z.imag) > IMAG_TOL * max(1.0, abs(z.real)):
        raise ConsistencyError(f"{what} should be real, imaginary part {z.imag:.3e}")
    return float(z.real)


def skew_weights(lam: np.ndarray, beta: float) -> np.ndarray:
    """P[i, j] = lambda_i**beta * lambda_j**(1 - beta)."""
    return lam[:, None] ** beta * lam[None, :] ** (1.0 - beta)


def covariance(rho, a, b, method: str = "eigen") -> complex:
    """Tr(rho A B) - Tr(rho A) Tr(rho B)."""
    rho, (a, b) = _prep(rho, a, b)
    if method == "trace":
        r = rho.matrix
        return complex(expectation(r, a.matrix @ b.matrix) - expectation(r, a) * expectation(r, b))
    lam = rho.eigenvalues
    ca, cb = _coeffs(rho, a), _coeffs(rho, b)
    return complex(np.sum(lam[:, None] * ca * cb.T))


def variance(rho, a, method: str = "eigen") -> float:
    cov = covariance(rho, a, a, method=method)
    return _as_real(cov, "Var")


def corr_beta(rho, a, b, beta: float, method: str = "eigen") -> complex:
    """Tr(rho A B) - Tr(rho^beta A rho^(1-beta) B)."""
    beta = validate_beta(beta)
    rho, (a, b) = _prep(rho, a, b)
    if method == "trace":
        pb = matrix_power(rho, beta).matrix
        pc = matrix_power(rho, 1.0 - beta).matrix
        return complex(np.trace(rho.matrix @ a.matrix @ b.matrix) - np.trace(pb @ a.matrix @ pc @ b.matrix))
    lam = rho.eigenvalues
    ca, cb = _coeffs(rho, a), _coeffs(rho, b)
    prod = ca * cb.T  # a_ij b_ji
    return complex(np.sum((lam[:, None] - skew_weights(lam, beta)) * prod))


def wyd_information(rho, a, beta: float, method: str = "eigen") -> float:
    """Wigner-Yanase-Dyson skew information -1/2 Tr([rho^b, A][rho^(1-b), A])."""
    beta = validate_beta(beta)
    if method == "trace":
        rho, (a,) = _prep(rho, a)
        pb = matrix_power(rho, beta).matrix
        pc = matrix_power(rho, 1.0 - beta).matrix
        val = -0.5 * np.trace(commutator(pb, a) @ commutator(pc, a))
        return _as_real(complex(val), "I_beta")
    return _as_real(corr_beta(rho, a, a, beta), "I_beta")


def commutator_term(rho, a, b, beta: float) -> float:
    """-Tr([rho^beta, A][rho^(1-beta), B]), which equals 2 Re Corr_beta(A, B)."""
    beta = validate_beta(beta)
    rho, (a, b) = _prep(rho, a, b)
    pb = matrix_power(rho, beta).matrix
    pc = matrix_power(rho, 1.0 - beta).matrix
    return _as_real(complex(-np.trace(commutator(pb, a) @ commutator(pc, b))), "commutator trace")


def schroedinger_bound(rho, a, b) -> float:
    """1/4 |Tr(rho [A, B])|^2."""
    rho, (a, b) = _prep(rho, a, b)
    return 0.25 * abs(expectation(rho, commutator(a, b))) ** 2


@dataclass(frozen=True)
class StatisticsReport:
    beta: float
    var_a: float
    var_b: float
    cov: complex
    re_cov: float
    s_gap: float
    i_a: float
    i_b: float
    re_corr: float
    t_gap: float
    theorem_range: bool  # beta in (0, 1/2]

    def as_dict(self) -> dict:
        return {
            "beta": self.beta,
            "var_a": self.var_a,
            "var_b": self.var_b,
            "cov_re": self.cov.real,
            "cov_im": self.cov.imag,
            "s_gap": self.s_gap,
            "i_a": self.i_a,
            "i_b": self.i_b,
            "re_corr": self.re_corr,
            "t_gap": self.t_gap,
            "theorem_range": self.theorem_range,
        }


def _report(rho, a, b, beta, method):
    var_a = variance(rho, a, method)
    var_b = variance(rho, b, method)
    cov = covariance(rho, a, b, method)
    i_a = wyd_information(rho, a, beta, method)
    i_b = wyd_information(rho, b, beta, method)
    re_corr = corr_beta(rho, a, b, beta, method).real
    return StatisticsReport(
        beta=beta,
        var_a=var_a,
        var_b=var_b,
        cov=cov,
        re_cov=cov.real,
        s_gap=var_a * var_b - cov.real**2,
        i_a=i_a,
        i_b=i_b,
        re_corr=re_corr,
        t_gap=i_a * i_b - re_corr**2,
        theorem_range=in_theorem_range(beta),
    )


def statistics_report(rho, a, b, beta: float, verify: bool = False) -> StatisticsReport:
    """S_rho(A, B) and T_rho,beta(A, B) together with their ingredients.

    With ``verify=True`` the trace-formula route is evaluated as well and
    every field is required to match the eigenbasis route within 1e-9
    (relative to the field's magnitude once it exceeds 1).
    """
    beta = validate_beta(beta)
    rho, (a, b) = _prep(rho, a, b)
    rep = _report(rho, a, b, beta, "eigen")
    if verify:
        alt = _report(rho, a, b, beta, "trace")
        for name in ("var_a", "var_b", "re_cov", "s_gap", "i_a", "i_b", "re_corr", "t_gap"):
            x, y = getattr(rep, name), getattr(alt, name)
            if abs(x - y) > VERIFY_TOL * max(1.0, abs(x)):
                raise ConsistencyError(f"{name}: eigenbasis {x!r} vs trace formula {y!r}")
    return rep
