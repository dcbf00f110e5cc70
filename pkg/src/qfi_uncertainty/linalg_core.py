"""Small dense Hermitian linear algebra.

Everything here works on ``complex128`` numpy arrays of dimension at most a
few dozen.  States and observables are wrapped in frozen dataclasses whose
arrays are marked read-only, so they can be shared freely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
DEFAULT_FLOOR = 1e-8

JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


class InvariantError(ValueError):
    """An input violates a named structural invariant (Hermitian, unit trace, ...)."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class DomainError(ValueError):
    """A function was evaluated outside its domain."""


class ConvergenceError(RuntimeError):
    pass


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def as_matrix(x) -> np.ndarray:
    """Return the underlying complex array of a wrapper or array-like."""
    m = getattr(x, "matrix", x)
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvariantError("square", f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvariantError("finite", "matrix has non-finite entries")
    return m


def _check_dims(*mats: np.ndarray) -> int:
    n = mats[0].shape[0]
    for m in mats[1:]:
        if m.shape[0] != n:
            raise InvariantError("dimension", f"dimension mismatch: {n} vs {m.shape[0]}")
    return n


def _hermitize(m: np.ndarray, what: str) -> np.ndarray:
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > HERMITIAN_TOL:
        raise InvariantError("hermitian", f"{what} is not Hermitian (max |X - X*| = {dev:.3e})")
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # unitary, columns are eigenvectors

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


@dataclass(frozen=True)
class Observable:
    matrix: np.ndarray

    def __post_init__(self):
        m = _hermitize(as_matrix(self.matrix), "observable")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class TangentVector:
    matrix: np.ndarray

    def __post_init__(self):
        m = _hermitize(as_matrix(self.matrix), "tangent vector")
        tr = np.trace(m)
        if abs(tr) > TRACE_TOL * max(1.0, np.max(np.abs(m), initial=0.0)):
            raise InvariantError("traceless", f"tangent vector has trace {tr:.3e}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DensityMatrix:
    """Strictly positive unit-trace state.  The eigendecomposition is computed
    once at construction and reused by every downstream functional."""

    matrix: np.ndarray
    eigen_floor: float = DEFAULT_FLOOR
    spectrum: SpectralDecomposition = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.eigen_floor > 0:
            raise InvariantError("eigen_floor", "eigen_floor must be positive")
        m = _hermitize(as_matrix(self.matrix), "density matrix")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvariantError("unit_trace", f"trace is {tr!r}, expected 1 within {TRACE_TOL:g}")
        spec = spectral_decompose(m)
        lam_min = spec.eigenvalues[-1]
        if lam_min < self.eigen_floor:
            raise InvariantError(
                "eigen_floor",
                f"smallest eigenvalue {lam_min:.3e} is below the floor {self.eigen_floor:g}",
            )
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "spectrum", spec)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues


@dataclass(frozen=True)
class EigenbasisCoefficients:
    a: np.ndarray


def as_observable(x) -> Observable:
    return x if isinstance(x, Observable) else Observable(x)


def as_density(x, floor: float = DEFAULT_FLOOR) -> DensityMatrix:
    return x if isinstance(x, DensityMatrix) else DensityMatrix(x, floor)


# ---------------------------------------------------------------------------
# Eigensolver
# ---------------------------------------------------------------------------


def _jacobi_rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    # Phase the pivot to a real positive value, then apply the classical real
    # rotation that annihilates it.  Returns the 2x2 unitary G with
    # G* [[app, apq], [conj(apq), aqq]] G diagonal.
    r = abs(apq)
    phase = apq / r
    theta = (aqq - app) / (2.0 * r)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)


def spectral_decompose(h, max_sweeps: int = JACOBI_MAX_SWEEPS) -> SpectralDecomposition:
    """Cyclic Jacobi diagonalisation of a Hermitian matrix.

    Converges when the off-diagonal Frobenius norm drops below
    ``1e-13 * ||h||_F``.  Eigenvalues are returned in descending order (stable
    with respect to the diagonal order on ties).
    """
    a = np.array(as_matrix(h), dtype=np.complex128)
    a = _hermitize(a, "input")
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    threshold = JACOBI_REL_TOL * scale

    offdiag = ~np.eye(n, dtype=bool)

    def off_norm(m):
        return np.linalg.norm(m[offdiag])

    off = off_norm(a)
    sweeps = 0
    while off > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
                f"(off-diagonal residual {off:.3e}, target {threshold:.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                g = _jacobi_rotation(a[p, p].real, a[q, q].real, apq)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
        sweeps += 1
        off = off_norm(a)

    lam = np.diag(a).real.copy()
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    v = v[:, order]
    lam.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(lam, v)


# ---------------------------------------------------------------------------
# Matrix functions and algebra
# ---------------------------------------------------------------------------


def matrix_power(rho, p: float) -> Observable:
    """rho**p through the eigendecomposition of rho."""
    if not np.isfinite(p):
        raise DomainError(f"exponent must be finite, got {p}")
    rho = as_density(rho)
    spec = rho.spectrum
    if p < 0 and spec.eigenvalues[-1] < rho.eigen_floor:
        raise DomainError("negative power of a state with an eigenvalue below the floor")
    u = spec.eigenvectors
    return Observable((u * spec.eigenvalues**p) @ u.conj().T)


def commutator(x, y) -> np.ndarray:
    x, y = as_matrix(x), as_matrix(y)
    _check_dims(x, y)
    return x @ y - y @ x


def anticommutator(x, y) -> np.ndarray:
    x, y = as_matrix(x), as_matrix(y)
    _check_dims(x, y)
    return x @ y + y @ x


def expectation(rho, x) -> complex:
    r, m = as_matrix(rho), as_matrix(x)
    _check_dims(r, m)
    return np.trace(r @ m)


def center(x, rho) -> Observable:
    """X - Tr(rho X) I."""
    x = as_observable(x)
    rho = as_density(rho)
    _check_dims(x.matrix, rho.matrix)
    mean = expectation(rho, x).real
    return Observable(x.matrix - mean * np.eye(x.dim))


def tangent_of(a, rho) -> TangentVector:
    """The tangent direction i[rho, A] generated by the observable A."""
    a = as_observable(a)
    rho = as_density(rho)
    return TangentVector(1j * commutator(rho.matrix, a.matrix))


def eigenbasis_coefficients(x, spec: SpectralDecomposition, rho) -> EigenbasisCoefficients:
    """Coefficients of the centred observable in the eigenbasis of rho (U* X_0 U)."""
    x0 = center(x, rho).matrix
    u = spec.eigenvectors
    _check_dims(x0, u)
    a = u.conj().T @ x0 @ u
    a = 0.5 * (a + a.conj().T)
    a.setflags(write=False)
    return EigenbasisCoefficients(a)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def _complex_normal(rng: np.random.Generator, dim: int) -> np.ndarray:
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)


def sample_density(dim: int, seed, floor: float = DEFAULT_FLOOR) -> DensityMatrix:
    """Hilbert-Schmidt random state, mixed toward I/dim just enough to respect ``floor``.

    ``seed`` is anything accepted by :func:`numpy.random.default_rng`.
    """
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    if not 0 < floor < 1.0 / dim:
        raise ValueError(f"floor must lie in (0, 1/dim), got {floor}")
    rng = np.random.default_rng(seed)
    g = _complex_normal(rng, dim)
    w = g @ g.conj().T
    w = 0.5 * (w + w.conj().T)
    rho = w / np.trace(w).real
    lam_min = spectral_decompose(rho).eigenvalues[-1]
    if lam_min < floor:
        delta = (floor - lam_min) / (1.0 / dim - lam_min)
        delta = min(1.0, delta * (1.0 + 1e-9) + 1e-15)
        rho = (1.0 - delta) * rho + delta * np.eye(dim) / dim
    rho = rho / np.trace(rho).real
    return DensityMatrix(rho, floor)


def sample_observable(dim: int, seed) -> Observable:
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    g = _complex_normal(rng, dim)
    return Observable(0.5 * (g + g.conj().T))


# ---------------------------------------------------------------------------
# Matrix files: {"dim": n, "re": [[...]], "im": [[...]]}
# ---------------------------------------------------------------------------


def matrix_to_dict(x) -> dict:
    m = as_matrix(x)
    return {"dim": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_dict(d) -> np.ndarray:
    if not isinstance(d, dict) or not {"dim", "re", "im"} <= d.keys():
        raise InvariantError("format", 'matrix file must be an object with keys "dim", "re", "im"')
    n = d["dim"]
    try:
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvariantError("format", f"matrix entries are not numeric: {exc}") from None
    if not isinstance(n, int) or n < 1 or re.shape != (n, n) or im.shape != (n, n):
        raise InvariantError("format", f'"re" and "im" must both be {n}x{n} arrays')
    return re + 1j * im


def load_matrix(path) -> np.ndarray:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvariantError("json", f"malformed JSON in {path}: {exc}") from None
    return matrix_from_dict(d)


def load_density(path, floor: float = DEFAULT_FLOOR) -> DensityMatrix:
    return DensityMatrix(load_matrix(path), floor)


def load_observable(path) -> Observable:
    return Observable(load_matrix(path))


def dump_matrix(x, path) -> None:
    from .jsonfmt import dumps

    Path(path).write_text(dumps(matrix_to_dict(x)) + "\n")
