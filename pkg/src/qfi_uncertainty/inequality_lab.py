"""Verification and refutation of S_rho(A,B) >= T_rho,beta(A,B) and its geometric forms.

``xi_eta`` evaluates the two quadruple sums over eigenvalue indices whose
difference is S - T.  For beta in (0, 1/2] the weight of every term is
nonnegative, which is why the inequality holds there.  For beta in [-1, 0) the
three-level family built by :func:`ce_family` drives the difference negative
as t -> 0+, and :func:`find_violation` locates such a t.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg_core import (
    DEFAULT_FLOOR,
    DensityMatrix,
    Observable,
    _check_dims,
    as_density,
    as_observable,
    eigenbasis_coefficients,
    matrix_to_dict,
    sample_density,
    sample_observable,
)
from .monotone_metrics import (
    MetricReport,
    MonotoneFunctionSpec,
    is_pointwise_le,
    upf_bound,
)
from .quantum_statistics import (
    ConsistencyError,
    in_theorem_range,
    skew_weights,
    statistics_report,
    validate_beta,
)

DEFAULT_TOL = 1e-9
CROSS_TOL = 1e-9


class NoViolationFound(RuntimeError):
    pass


class TheoremViolation(AssertionError):
    """A proved inequality failed numerically beyond tolerance."""


# ---------------------------------------------------------------------------
# Quadruple sums
# ---------------------------------------------------------------------------


def proof_kernel(lam: np.ndarray, beta: float) -> np.ndarray:
    """W[i,j,k,l] = (l_i + l_j) P_kl + (l_k + l_l) P_ij - 2 P_ij P_kl, P_ij = l_i^b l_j^(1-b)."""
    p = skew_weights(lam, beta)
    s = lam[:, None] + lam[None, :]
    return (s[:, :, None, None] * p[None, None, :, :]
            + s[None, None, :, :] * p[:, :, None, None]
            - 2.0 * p[:, :, None, None] * p[None, None, :, :])


def xi_eta(rho, a, b, beta: float) -> tuple[float, float]:
    """The sums xi = Var Var - I I and eta = (Re Cov)^2 - (Re Corr)^2 over the eigenbasis of rho."""
    beta = validate_beta(beta)
    rho = as_density(rho)
    a, b = as_observable(a), as_observable(b)
    _check_dims(rho.matrix, a.matrix, b.matrix)
    lam = rho.eigenvalues
    ca = eigenbasis_coefficients(a, rho.spectrum, rho).a
    cb = eigenbasis_coefficients(b, rho.spectrum, rho).a
    w = proof_kernel(lam, beta)

    aa = (ca * ca.T).real  # a_ij a_ji
    bb = (cb * cb.T).real
    r = (ca * cb.T).real  # Re(a_ij b_ji)

    sym = aa[:, :, None, None] * bb[None, None, :, :] + aa[None, None, :, :] * bb[:, :, None, None]
    xi = 0.25 * np.sum(w * sym)
    eta = 0.5 * np.sum(w * r[:, :, None, None] * r[None, None, :, :])
    return float(xi), float(eta)


# ---------------------------------------------------------------------------
# Counterexample family and the 2x2 remark family
# ---------------------------------------------------------------------------


def ce_family(t: float, floor: float = DEFAULT_FLOOR) -> tuple[DensityMatrix, Observable, Observable]:
    """rho = diag(t, 1-2t, t); A couples levels 1-2, B couples levels 2-3."""
    if not (floor < t < 0.5 - floor):
        raise ValueError(f"t must lie in ({floor:g}, 1/2 - {floor:g}), got {t}")
    rho = DensityMatrix(np.diag([t, 1.0 - 2.0 * t, t]), floor)
    a = np.zeros((3, 3))
    a[0, 1] = a[1, 0] = 1.0
    b = np.zeros((3, 3))
    b[1, 2] = b[2, 1] = 1.0
    return rho, Observable(a), Observable(b)


def ce_closed_form_gap(t: float, beta: float) -> float:
    """Closed form of S - T on :func:`ce_family`, written with scalars only."""
    beta = validate_beta(beta)
    if not 0.0 < t < 0.5:
        raise ValueError(f"t must lie in (0, 1/2), got {t}")
    u = 1.0 - 2.0 * t
    k = t**beta * u ** (1.0 - beta) + u**beta * t ** (1.0 - beta)
    return (2.0 * (1.0 - t) - k) * k


def remark_family(t: float, floor: float = DEFAULT_FLOOR) -> tuple[DensityMatrix, Observable, Observable]:
    """rho = diag(t, 1-t) with the two diagonal projections; S and T both vanish."""
    if not (floor < t < 1.0 - floor):
        raise ValueError(f"t must lie in ({floor:g}, 1 - {floor:g}), got {t}")
    rho = DensityMatrix(np.diag([t, 1.0 - t]), floor)
    return rho, Observable(np.diag([1.0, 0.0])), Observable(np.diag([0.0, 1.0]))


@dataclass(frozen=True)
class CounterexampleRecord:
    beta: float
    t: float  # largest violating grid point
    t0: float  # bisection-refined violating parameter
    gap_at_t0: float
    closed_form_gap: float  # at t
    matrix_gap: float  # xi - eta on ce_family(t)
    refined: bool

    def as_dict(self) -> dict:
        return {
            "beta": self.beta,
            "t": self.t,
            "t0": self.t0,
            "gap_at_t0": self.gap_at_t0,
            "closed_form_gap": self.closed_form_gap,
            "matrix_gap": self.matrix_gap,
            "refined": self.refined,
        }


def matrix_gap(t: float, beta: float, floor: float = DEFAULT_FLOOR) -> float:
    xi, eta = xi_eta(*ce_family(t, floor), beta)
    return xi - eta


def find_violation(beta: float, t_min: float = 1e-7, t_max: float = 0.49, steps: int = 200,
                   floor: float = DEFAULT_FLOOR) -> CounterexampleRecord:
    """Scan t from t_max down to t_min (log spaced) for a negative S - T on the family.

    The largest violating grid point is reported.  If the next larger grid
    point is not violating, the sign change between them is bisected down to
    an interval of 1e-10 and the violating end is returned as ``t0``.
    """
    beta = float(beta)
    if not -1.0 <= beta < 0.0:
        raise ValueError(f"counterexample search needs beta in [-1, 0), got {beta}")
    if not 0.0 < t_min < t_max < 0.5:
        raise ValueError(f"need 0 < t_min < t_max < 1/2, got t_min={t_min}, t_max={t_max}")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    grid = np.geomspace(t_max, t_min, steps)
    gaps = np.array([ce_closed_form_gap(t, beta) for t in grid])
    neg = np.flatnonzero(gaps < 0)
    if neg.size == 0:
        raise NoViolationFound(
            f"no violation found on grid [{t_min:g}, {t_max:g}] for beta={beta:g}; "
            "widen the scan toward smaller t"
        )
    k = int(neg[0])
    t_hit = float(grid[k])
    t0, refined = t_hit, False
    if k > 0:
        lo, hi = t_hit, float(grid[k - 1])  # gap(lo) < 0 <= gap(hi)
        while hi - lo > 1e-10:
            mid = 0.5 * (lo + hi)
            if ce_closed_form_gap(mid, beta) < 0:
                lo = mid
            else:
                hi = mid
        t0, refined = lo, True
    closed = ce_closed_form_gap(t_hit, beta)
    mgap = matrix_gap(t_hit, beta, floor)
    if abs(closed - mgap) > CROSS_TOL * max(1.0, abs(closed)):
        raise ConsistencyError(f"closed form {closed!r} vs matrix path {mgap!r} at t={t_hit!r}")
    return CounterexampleRecord(beta, t_hit, t0, ce_closed_form_gap(t0, beta), closed, mgap, refined)


# ---------------------------------------------------------------------------
# Single-instance check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InequalityReport:
    spec: MonotoneFunctionSpec
    s_gap: float
    t_gap: float  # T_beta for WYD specs, otherwise the geometric bound G(f)
    xi: float | None
    eta: float | None
    gap: float
    holds: bool
    tolerance: float
    metric_bound: MetricReport | None = None

    def as_dict(self) -> dict:
        d = {
            "metric": self.spec.label,
            "s_gap": self.s_gap,
            "t_gap": self.t_gap,
            "xi": self.xi,
            "eta": self.eta,
            "gap": self.gap,
            "holds": self.holds,
            "tolerance": self.tolerance,
        }
        if self.metric_bound is not None:
            d["metric_bound"] = self.metric_bound.as_dict()
        return d


def check(rho, a, b, spec: MonotoneFunctionSpec, tolerance: float = DEFAULT_TOL) -> InequalityReport:
    """Evaluate S_rho(A,B) against the lower bound attached to ``spec``.

    For ``wyd:<beta>`` the bound is T_rho,beta(A, B), valid or not; it is
    computed from the statistics, from xi - eta, and as a metric area, and the
    three must agree.  For other specs the bound is f(0)^2/4 Area_f^2.
    """
    rho = as_density(rho)
    a, b = as_observable(a), as_observable(b)
    mrep = upf_bound(spec, rho, a, b)
    if spec.is_wyd:
        beta = spec.param
        stats = statistics_report(rho, a, b, beta)
        xi, eta = xi_eta(rho, a, b, beta)
        s, t = stats.s_gap, stats.t_gap
        scale = max(1.0, abs(s), abs(t))
        if abs((s - t) - (xi - eta)) > CROSS_TOL * scale:
            raise ConsistencyError(f"S - T = {s - t!r} but xi - eta = {xi - eta!r}")
        # metric form of T holds on the whole WYD range
        t_metric = (beta * (1.0 - beta)) ** 2 / 4.0 * mrep.area**2
        if abs(t - t_metric) > CROSS_TOL * scale:
            raise ConsistencyError(f"T = {t!r} but (b(1-b))^2/4 Area^2 = {t_metric!r}")
        if in_theorem_range(beta) and abs(t - mrep.bound) > CROSS_TOL * scale:
            raise ConsistencyError(f"T = {t!r} but G(f) = {mrep.bound!r}")
        gap = s - t
    else:
        stats = statistics_report(rho, a, b, 0.5)
        s, t = stats.s_gap, mrep.bound
        xi = eta = None
        gap = s - t
    return InequalityReport(spec, s, t, xi, eta, gap, bool(gap >= -tolerance), tolerance, mrep)


def s_gap(rho, a, b) -> float:
    return statistics_report(rho, a, b, 0.5).s_gap


def geometric_bound(spec: MonotoneFunctionSpec, rho, a, b) -> float:
    return upf_bound(spec, rho, a, b).bound


# ---------------------------------------------------------------------------
# Exploration harnesses (report only)
# ---------------------------------------------------------------------------


def trial_seed(seed: int, trial: int, stream: int) -> list[int]:
    return [int(seed), int(trial), int(stream)]


def sample_instance(dim: int, seed: int, trial: int, floor: float = DEFAULT_FLOOR):
    rho = sample_density(dim, trial_seed(seed, trial, 0), floor)
    a = sample_observable(dim, trial_seed(seed, trial, 1))
    b = sample_observable(dim, trial_seed(seed, trial, 2))
    return rho, a, b


def serialize_instance(rho, a, b) -> dict:
    return {"rho": matrix_to_dict(rho), "A": matrix_to_dict(a), "B": matrix_to_dict(b)}


@dataclass(frozen=True)
class ExplorationSummary:
    spec: MonotoneFunctionSpec
    trials: int
    dims: tuple[int, ...]
    sampler: str
    seed: int
    min_gap: float
    argmin: dict = field(repr=False)
    violations_found: int
    tolerance: float

    def as_dict(self) -> dict:
        return {
            "metric": self.spec.label,
            "trials": self.trials,
            "dims": list(self.dims),
            "sampler": self.sampler,
            "seed": self.seed,
            "min_gap": self.min_gap,
            "violations_found": self.violations_found,
            "tolerance": self.tolerance,
            "argmin": self.argmin,
        }


def instance_gap(spec: MonotoneFunctionSpec, rho, a, b) -> float:
    """S - T_beta for WYD specs, S - G(f) otherwise (same convention as :func:`check`)."""
    if spec.is_wyd:
        stats = statistics_report(rho, a, b, spec.param)
        return stats.s_gap - stats.t_gap
    stats = statistics_report(rho, a, b, 0.5)
    return stats.s_gap - upf_bound(spec, rho, a, b).bound


def explore(spec: MonotoneFunctionSpec, dims=(2, 3, 4), trials: int = 1000, seed: int = 0,
            sampler: str = "random", tolerance: float = DEFAULT_TOL,
            floor: float = DEFAULT_FLOOR) -> ExplorationSummary:
    """Sample instances and record the smallest gap and the number of violations.

    ``sampler="random"`` draws Hilbert-Schmidt states and Gaussian observables,
    cycling through ``dims``.  ``sampler="ce"`` walks the three-level family on
    a log grid of t in [10*floor, 0.49].  Nothing is asserted about the sign.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dims = tuple(int(d) for d in dims)
    if sampler == "random":
        if not dims or min(dims) < 2:
            raise ValueError("dims must be a non-empty list of integers >= 2")
    elif sampler == "ce":
        ts = np.geomspace(0.49, 10 * floor, trials) if trials > 1 else np.array([0.1])
    else:
        raise ValueError(f"unknown sampler {sampler!r}")

    best_gap, best = np.inf, None
    violations = 0
    for k in range(trials):
        if sampler == "random":
            inst = sample_instance(dims[k % len(dims)], seed, k, floor)
        else:
            inst = ce_family(float(ts[k]), floor)
        g = instance_gap(spec, *inst)
        if g < -tolerance:
            violations += 1
        if g < best_gap:
            best_gap, best = g, inst
    return ExplorationSummary(spec, trials, dims, sampler, seed, float(best_gap),
                              serialize_instance(*best), violations, tolerance)


@dataclass(frozen=True)
class GProbeReport:
    spec1: MonotoneFunctionSpec
    spec2: MonotoneFunctionSpec
    comparable: bool
    trials: int
    min_difference: float | None  # min over samples of G(spec2) - G(spec1)
    argmin: dict | None = field(repr=False)
    asserted: bool
    verdict: str  # "holds", "report-only" or "incomparable"

    def as_dict(self) -> dict:
        return {
            "metric_a": self.spec1.label,
            "metric_b": self.spec2.label,
            "comparable": self.comparable,
            "trials": self.trials,
            "min_difference": self.min_difference,
            "asserted": self.asserted,
            "verdict": self.verdict,
            "argmin": self.argmin,
        }


def _kosaki_range(s1: MonotoneFunctionSpec, s2: MonotoneFunctionSpec) -> bool:
    return s1.is_wyd and s2.is_wyd and 0.0 < s1.param <= s2.param <= 0.5


def g_monotonicity_probe(spec1: MonotoneFunctionSpec, spec2: MonotoneFunctionSpec, dims=(2, 3, 4),
                         trials: int = 1000, seed: int = 0, tolerance: float = DEFAULT_TOL,
                         floor: float = DEFAULT_FLOOR) -> GProbeReport:
    """Does f1 <= f2 carry over to G(f1) <= G(f2) on sampled instances?

    Raises :class:`TheoremViolation` only for two WYD members with
    0 < beta1 <= beta2 <= 1/2, where the implication is a theorem.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dims = tuple(int(d) for d in dims)
    if not is_pointwise_le(spec1, spec2):
        return GProbeReport(spec1, spec2, False, 0, None, None, False, "incomparable")
    asserted = _kosaki_range(spec1, spec2)
    best, best_inst = np.inf, None
    for k in range(trials):
        inst = sample_instance(dims[k % len(dims)], seed, k, floor)
        if spec1 == spec2:
            diff = 0.0
        else:
            diff = geometric_bound(spec2, *inst) - geometric_bound(spec1, *inst)
        if diff < best:
            best, best_inst = diff, inst
    if asserted and best < -tolerance:
        raise TheoremViolation(
            f"G({spec2.label}) - G({spec1.label}) = {best!r} < -{tolerance:g} on a sampled instance"
        )
    return GProbeReport(spec1, spec2, True, trials, float(best), serialize_instance(*best_inst),
                        asserted, "holds" if asserted else "report-only")
