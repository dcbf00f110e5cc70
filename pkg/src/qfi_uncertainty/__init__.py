"""Quantum Fisher information bounds for the Schroedinger uncertainty gap."""

from .inequality_lab import (
    CounterexampleRecord,
    ExplorationSummary,
    InequalityReport,
    ce_closed_form_gap,
    ce_family,
    check,
    explore,
    find_violation,
    g_monotonicity_probe,
    remark_family,
    xi_eta,
)
from .linalg_core import (
    DensityMatrix,
    Observable,
    SpectralDecomposition,
    TangentVector,
    anticommutator,
    center,
    commutator,
    eigenbasis_coefficients,
    matrix_power,
    sample_density,
    sample_observable,
    spectral_decompose,
    tangent_of,
)
from .monotone_metrics import (
    BKM,
    RLD,
    SLD,
    WY,
    MetricReport,
    MonotoneFunctionSpec,
    area,
    cm_kernel,
    evaluate_f,
    f_at_zero,
    hgamma,
    metric,
    parse_spec,
    upf_bound,
    wyd,
)
from .quantum_statistics import (
    StatisticsReport,
    corr_beta,
    covariance,
    statistics_report,
    variance,
    wyd_information,
)

__version__ = "0.1.0"
