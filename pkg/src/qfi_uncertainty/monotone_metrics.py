"""Petz monotone metrics built from symmetric operator monotone functions.

The catalog is closed: the Wigner-Yanase-Dyson family ``wyd:<beta>`` for
beta in [-1, 1/2] minus {0}, its beta -> 0 limit ``bkm`` (the
Bogoliubov-Kubo-Mori metric), and the power means ``hgamma:<gamma>`` for gamma in
[1/2, 1].  Aliases: ``rld`` = wyd:-1, ``wy`` = wyd:0.5, ``sld`` / ``bures`` =
hgamma:1.

Metrics are evaluated in the eigenbasis of the state, where the operator
c_f(L_rho, R_rho) acts entrywise through the kernel c_f(lambda_i, lambda_j).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg_core import (
    DomainError,
    TangentVector,
    _check_dims,
    as_density,
    as_matrix,
    tangent_of,
)

NEAR_ONE = 1e-8
STANDARD_GRID = np.logspace(-6, 6, 241)

ALIASES = {
    "rld": ("wyd", -1.0),
    "wy": ("wyd", 0.5),
    "sld": ("hgamma", 1.0),
    "bures": ("hgamma", 1.0),
    "bkm": ("bkm", None),
}


@dataclass(frozen=True)
class MonotoneFunctionSpec:
    kind: str  # "wyd" | "bkm" | "hgamma"
    param: float | None = None

    def __post_init__(self):
        if self.kind == "wyd":
            b = self.param
            if b is None or not (-1.0 <= b <= 0.5) or b == 0.0:
                raise ValueError(f"wyd parameter must lie in [-1, 1/2] without 0, got {b}")
        elif self.kind == "hgamma":
            g = self.param
            if g is None or not (0.5 <= g <= 1.0):
                raise ValueError(f"hgamma parameter must lie in [1/2, 1], got {g}")
        elif self.kind == "bkm":
            if self.param is not None:
                raise ValueError("bkm takes no parameter")
        else:
            raise ValueError(f"unknown monotone function family {self.kind!r}")

    @property
    def label(self) -> str:
        if self.kind == "bkm":
            return "bkm"
        return f"{self.kind}:{self.param:g}"

    @property
    def is_wyd(self) -> bool:
        return self.kind == "wyd"

    def __str__(self) -> str:
        return self.label


def wyd(beta: float) -> MonotoneFunctionSpec:
    return MonotoneFunctionSpec("wyd", float(beta))


def hgamma(gamma: float) -> MonotoneFunctionSpec:
    return MonotoneFunctionSpec("hgamma", float(gamma))


RLD = wyd(-1.0)
WY = wyd(0.5)
BKM = MonotoneFunctionSpec("bkm")
SLD = hgamma(1.0)


def parse_spec(text: str) -> MonotoneFunctionSpec:
    """Parse ``wyd:<beta>``, ``bkm``, ``hgamma:<gamma>`` or an alias."""
    key = text.strip().lower()
    if key in ALIASES:
        kind, param = ALIASES[key]
        return MonotoneFunctionSpec(kind, param)
    kind, sep, value = key.partition(":")
    if not sep or kind not in ("wyd", "hgamma"):
        raise ValueError(f"unknown metric spec {text!r}; expected wyd:<beta>, bkm, hgamma:<gamma>, "
                         "rld, wy, sld or bures")
    try:
        param = float(value)
    except ValueError:
        raise ValueError(f"bad parameter in metric spec {text!r}") from None
    return MonotoneFunctionSpec(kind, param)


def evaluate_f(spec: MonotoneFunctionSpec, x):
    """Value of the operator monotone function f at x > 0 (scalar or array)."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("f is defined on x > 0 only")
    near = np.abs(x - 1.0) <= NEAR_ONE
    # keep the generic branch away from the 0/0 point; masked out below
    sx = np.where(near, 2.0, x)
    safe_dx = sx - 1.0
    # log1p is exact near 1; x - 1 discards the low bits of small x
    close = np.abs(safe_dx) < 0.5
    lx = np.where(close, np.log1p(np.where(close, safe_dx, 0.0)), np.log(sx))
    if spec.kind == "wyd":
        b = spec.param
        val = b * (1.0 - b) * safe_dx**2 / (np.expm1(b * lx) * np.expm1((1.0 - b) * lx))
    elif spec.kind == "bkm":
        val = safe_dx / lx
    else:
        g = spec.param
        val = ((1.0 + x**g) / 2.0) ** (1.0 / g)
    out = np.where(near, 1.0, val) if spec.kind != "hgamma" else val
    return out[()] if out.ndim == 0 else out


def f_at_zero(spec: MonotoneFunctionSpec) -> float:
    if spec.kind == "wyd":
        b = spec.param
        return b * (1.0 - b) if b > 0 else 0.0
    if spec.kind == "bkm":
        return 0.0
    return 0.5 ** (1.0 / spec.param)


def cm_kernel(spec: MonotoneFunctionSpec, x, y):
    """Chentsov-Morozova kernel c_f(x, y) = 1 / (y f(x/y))."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(~(x > 0)) or np.any(~(y > 0)):
        raise DomainError("c_f is defined for x, y > 0 only")
    x, y = np.broadcast_arrays(x, y)
    near = np.abs(x - y) <= NEAR_ONE * np.maximum(x, y)
    ratio = np.where(near, 2.0, x / y)
    generic = 1.0 / (y * evaluate_f(spec, ratio))
    # symmetric form of the diagonal limit 1/x
    out = np.where(near, 2.0 / (x + y), generic)
    return out[()] if out.ndim == 0 else out


def kernel_matrix(spec: MonotoneFunctionSpec, lam: np.ndarray) -> np.ndarray:
    return cm_kernel(spec, lam[:, None], lam[None, :])


def metric(spec: MonotoneFunctionSpec, rho, x, y) -> complex:
    """g_f at rho on the tangent vectors x, y (linear in y, antilinear in x)."""
    rho = as_density(rho)
    xm, ym = as_matrix(x), as_matrix(y)
    _check_dims(rho.matrix, xm, ym)
    u = rho.spectrum.eigenvectors
    xt = u.conj().T @ xm @ u
    yt = u.conj().T @ ym @ u
    c = kernel_matrix(spec, rho.eigenvalues)
    return complex(np.sum(c * xt.conj() * yt))


def _real_diag(g: complex, what: str) -> float:
    if abs(g.imag) > 1e-10 * max(1.0, abs(g.real)):
        raise ArithmeticError(f"{what} has imaginary part {g.imag:.3e}")
    return g.real


def _area_from(gaa: float, gbb: float, gab: complex) -> float:
    area2 = gaa * gbb - abs(gab) ** 2
    if area2 < -1e-10 * max(1.0, gaa * gbb):
        raise ArithmeticError(f"Gram determinant is negative ({area2:.3e})")
    return float(np.sqrt(max(area2, 0.0)))


def area(spec: MonotoneFunctionSpec, rho, x, y) -> float:
    """Metric area of the parallelogram spanned by two tangent vectors."""
    gaa = _real_diag(metric(spec, rho, x, x), "g(X, X)")
    gbb = _real_diag(metric(spec, rho, y, y), "g(Y, Y)")
    return _area_from(gaa, gbb, metric(spec, rho, x, y))


@dataclass(frozen=True)
class MetricReport:
    spec: MonotoneFunctionSpec
    g_aa: float
    g_bb: float
    g_ab: complex
    area: float
    f0: float
    bound: float

    def as_dict(self) -> dict:
        return {
            "metric": self.spec.label,
            "g_aa": self.g_aa,
            "g_bb": self.g_bb,
            "g_ab_re": self.g_ab.real,
            "g_ab_im": self.g_ab.imag,
            "area": self.area,
            "f0": self.f0,
            "bound": self.bound,
        }


def upf_bound(spec: MonotoneFunctionSpec, rho, a, b) -> MetricReport:
    """Geometric lower bound f(0)^2/4 * Area_f(i[rho,A], i[rho,B])^2 on S_rho(A, B)."""
    rho = as_density(rho)
    xa: TangentVector = tangent_of(a, rho)
    xb: TangentVector = tangent_of(b, rho)
    gaa = _real_diag(metric(spec, rho, xa, xa), "g(A_rho, A_rho)")
    gbb = _real_diag(metric(spec, rho, xb, xb), "g(B_rho, B_rho)")
    gab = metric(spec, rho, xa, xb)
    ar = _area_from(gaa, gbb, gab)
    f0 = f_at_zero(spec)
    return MetricReport(spec, gaa, gbb, gab, ar, f0, f0 * f0 / 4.0 * ar * ar)


def is_pointwise_le(lower: MonotoneFunctionSpec, upper: MonotoneFunctionSpec,
                    grid=STANDARD_GRID, rtol: float = 1e-10) -> bool:
    fl = evaluate_f(lower, grid)
    fu = evaluate_f(upper, grid)
    return bool(np.all(fl <= fu + rtol * np.maximum(1.0, np.abs(fu))))
