"""Quantum Fisher information for three-angle rotation estimation.

The main route builds the generators H_k (with dR/dk = -i H_k R) and takes
``4 Cov{H_l, H_m}`` in the rotated state.  An independent route differentiates
the rotated state directly and assembles symmetric logarithmic derivatives.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from .errors import NumericalError, SingularQfimError, ValidationError
from .geometry import to_angles
from .spin import (
    RotationSpec,
    SpinState,
    _unit,
    euler_zyz_from_matrix,
    rotation_derivatives,
    rotation_matrix,
    rotation_unitary,
    stokes_matrix,
    stokes_triple,
)

FD_STEP = 2e-4  # balances roundoff (eps/h) against the h^4 Richardson remainder
HERMITIAN_RESIDUAL = 1e-7
SINGULAR_REL = 1e-12
TWO_PATH_TOL = 1e-8


class GeneratorTriple(NamedTuple):
    h1: np.ndarray
    h2: np.ndarray
    h3: np.ndarray


@dataclass(frozen=True)
class QfimReport:
    matrix: np.ndarray
    determinant: float
    condition_number: float
    spec: RotationSpec
    state_descriptor: str = ""
    inverse: np.ndarray | None = field(default=None, repr=False)
    trace_of_inverse: float | None = None

    @property
    def singular(self) -> bool:
        return is_singular(self.matrix)


def singular_threshold(matrix: np.ndarray, rel: float = SINGULAR_REL) -> float:
    return rel * (np.trace(matrix) / 3.0) ** 3


def is_singular(matrix: np.ndarray, rel: float = SINGULAR_REL) -> bool:
    tr = np.trace(matrix)
    return tr <= 0 or np.linalg.det(matrix) < singular_threshold(matrix, rel)


# -- generators ----------------------------------------------------------------


def zyz_generators(n: int, phi: float, theta: float) -> GeneratorTriple:
    sx, sy, sz = stokes_triple(n)
    h_theta = -np.sin(phi) * sx + np.cos(phi) * sy
    h_psi = (
        np.sin(theta) * np.cos(phi) * sx
        + np.sin(theta) * np.sin(phi) * sy
        + np.cos(theta) * sz
    )
    return GeneratorTriple(sz, h_theta, h_psi)


def numeric_generators(n: int, spec: RotationSpec, step: float = FD_STEP) -> GeneratorTriple:
    """H_k = i (dR/dk) R^dag from central differences with one Richardson level."""
    r = rotation_unitary(n, spec)
    base = np.array(spec.params)
    out = []
    for k in range(3):
        e = np.zeros(3)
        e[k] = 1.0

        def central(h):
            fwd = rotation_unitary(n, spec.with_params(base + h * e))
            bwd = rotation_unitary(n, spec.with_params(base - h * e))
            return (fwd - bwd) / (2 * h)

        d = (4 * central(step / 2) - central(step)) / 3
        h = 1j * d @ r.conj().T
        resid = np.max(np.abs(h - h.conj().T))
        if resid > HERMITIAN_RESIDUAL * max(1.0, np.max(np.abs(h))):
            raise NumericalError(
                f"numeric generator {k} not Hermitian (residual {resid:.3g}); step {step} too coarse"
            )
        out.append((h + h.conj().T) / 2)
    return GeneratorTriple(*out)


def h_generators(n: int, spec: RotationSpec) -> GeneratorTriple:
    if spec.kind == "euler-zyz":
        phi, theta, _ = spec.params
        return zyz_generators(n, phi, theta)
    return numeric_generators(n, spec)


# -- QFIM ----------------------------------------------------------------------


def covariance_matrix(state: np.ndarray, ops: Sequence[np.ndarray]) -> np.ndarray:
    """Symmetrized covariance Cov{A,B} = <(AB+BA)/2> - <A><B> of Hermitian ops."""
    vecs = [op @ state for op in ops]
    means = np.array([np.vdot(state, v).real for v in vecs])
    k = len(ops)
    cov = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            # <(AB+BA)/2> = Re <A psi | B psi> for Hermitian A, B
            cov[i, j] = np.vdot(vecs[i], vecs[j]).real - means[i] * means[j]
    return (cov + cov.T) / 2


def _report(matrix: np.ndarray, spec: RotationSpec, descriptor: str) -> QfimReport:
    with np.errstate(divide="ignore"):
        cond = float(np.linalg.cond(matrix)) if not is_singular(matrix) else float("inf")
    return QfimReport(matrix, float(np.linalg.det(matrix)), cond, spec, descriptor)


def qfim_matrix(state0: SpinState, spec: RotationSpec) -> np.ndarray:
    psi = rotation_unitary(state0.n, spec) @ state0.amplitudes
    return 4.0 * covariance_matrix(psi, h_generators(state0.n, spec))


def qfim_sld(state0: SpinState, spec: RotationSpec) -> np.ndarray:
    """QFIM from symmetric logarithmic derivatives of the rotated state."""
    r = rotation_unitary(state0.n, spec)
    psi = r @ state0.amplitudes
    dpsi = [d @ state0.amplitudes for d in rotation_derivatives(state0.n, spec)]
    proj = [np.outer(dp, psi.conj()) for dp in dpsi]
    sld = [2.0 * (p + p.conj().T) for p in proj]
    out = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            anti = sld[i] @ sld[j] + sld[j] @ sld[i]
            out[i, j] = 0.5 * np.vdot(psi, anti @ psi).real
    return out


def qfim(
    state0: SpinState,
    spec: RotationSpec,
    descriptor: str = "",
    cross_check: bool = False,
) -> QfimReport:
    m = qfim_matrix(state0, spec)
    if cross_check:
        other = qfim_sld(state0, spec)
        gap = np.max(np.abs(m - other))
        if gap > TWO_PATH_TOL * max(1.0, np.max(np.abs(m))):
            raise NumericalError(f"covariance and SLD QFIMs disagree by {gap:.3g}")
    return _report(m, spec, descriptor)


def crb(report: QfimReport, rel_threshold: float = SINGULAR_REL) -> QfimReport:
    """Populate the Cramer-Rao inverse; raises SingularQfimError when not invertible."""
    m = report.matrix
    if is_singular(m, rel_threshold):
        raise SingularQfimError(float(np.linalg.det(m)), float(singular_threshold(m, rel_threshold)))
    inv = np.linalg.inv(m)
    inv = (inv + inv.T) / 2
    return replace(report, inverse=inv, trace_of_inverse=float(np.trace(inv)))


def anticoherent_qfim_closed_form(n: int, theta: float) -> np.ndarray:
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    c = np.cos(theta)
    return n * (n + 2) / 3.0 * np.array([[1.0, 0.0, c], [0.0, 1.0, 0.0], [c, 0.0, 1.0]])


def trace_bound(n: int, theta: float) -> float:
    s2 = np.sin(theta) ** 2
    if s2 < 1e-24:
        raise ValidationError(f"trace bound diverges at Theta={theta} (sin Theta = 0)")
    return 3.0 / (n * (n + 2)) * (1.0 + 2.0 / s2)


# -- single parameter ----------------------------------------------------------


def single_param_qfi(state: SpinState, n, check_tol: float = 1e-9) -> float:
    """4 Var[S.n], cross-checked against 4(<dR^dag dR> - |<R^dag dR>|^2) at chi=0."""
    axis = _unit(n)
    op = stokes_matrix(state.n, axis)
    psi = state.amplitudes
    v = op @ psi
    mean = np.vdot(psi, v).real
    value = 4.0 * (np.vdot(v, v).real - mean ** 2)

    theta, phi = to_angles(axis)
    spec = RotationSpec("axis-angle", (0.0, theta, phi))
    r = rotation_unitary(state.n, spec)
    dr = rotation_derivatives(state.n, spec)[0]
    dpsi = dr @ psi
    via_derivative = 4.0 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(r @ psi, dpsi)) ** 2)
    if abs(via_derivative - value) > check_tol * max(1.0, value):
        raise NumericalError(f"single-parameter QFI paths disagree: {value} vs {via_derivative}")
    return float(value)


def projection_variance(state: SpinState, n, chi: float) -> float:
    """Var[chi] = Var[P] / |d<P>/dchi|^2 for P = |psi><psi| after rotating by chi about n.

    Uses the spectral form of <psi|R|psi> so 1 - <P> is computed without cancellation.
    """
    op = stokes_matrix(state.n, _unit(n))
    w, v = np.linalg.eigh(op)
    p = np.abs(v.conj().T @ state.amplitudes) ** 2
    dl = w[:, None] - w[None, :]
    pp = p[:, None] * p[None, :]
    one_minus = float(np.sum(pp * 2.0 * np.sin(chi * dl / 2.0) ** 2))
    mean_p = 1.0 - one_minus
    deriv = float(-np.sum(pp * dl * np.sin(chi * dl)))
    var_p = mean_p * one_minus
    scale = float(np.sum(pp * np.abs(dl)))
    if scale == 0.0 or abs(deriv) < 1e-14 * scale:
        raise ValidationError(f"d<P>/dchi vanishes at chi={chi}; the estimator is stationary")
    return var_p / deriv ** 2


# -- reparametrization -----------------------------------------------------------


def jacobian_transform(jac, info) -> np.ndarray:
    jac = np.asarray(jac, dtype=float)
    info = np.asarray(info, dtype=float)
    if not (np.all(np.isfinite(jac)) and np.all(np.isfinite(info))):
        raise ValidationError("Jacobian and information matrix must be finite")
    return jac.T @ info @ jac


def _wrap(a):
    return (a + np.pi) % (2 * np.pi) - np.pi


def zyz_jacobian(spec: RotationSpec, step: float = 1e-6) -> np.ndarray:
    """d(Phi,Theta,Psi)/d(spec angles); rows zyz angles, columns spec angles."""
    base = np.array(spec.params)
    jac = np.empty((3, 3))
    for k in range(3):
        e = np.zeros(3)
        e[k] = step
        fwd = np.array(euler_zyz_from_matrix(rotation_matrix(spec.with_params(base + e))))
        bwd = np.array(euler_zyz_from_matrix(rotation_matrix(spec.with_params(base - e))))
        jac[:, k] = _wrap(fwd - bwd) / (2 * step)
    return jac


# -- scans -----------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    angles: tuple[float, float, float]
    det: float
    trace_inv: float  # inf at singular points


@dataclass(frozen=True)
class ScanTable:
    kind: str
    axes: tuple[np.ndarray, np.ndarray, np.ndarray]
    rows: tuple[ScanRow, ...]

    def det_grid(self) -> np.ndarray:
        shape = tuple(len(a) for a in self.axes)
        return np.array([r.det for r in self.rows]).reshape(shape)

    def trace_inv_grid(self) -> np.ndarray:
        shape = tuple(len(a) for a in self.axes)
        return np.array([r.trace_inv for r in self.rows]).reshape(shape)

    def singular_rows(self) -> list[ScanRow]:
        return [r for r in self.rows if np.isinf(r.trace_inv)]

    def near_zero_minima(self, axis: int, rel: float = 1e-3) -> list[tuple[float, float, float]]:
        """Grid points that are local minima of det along ``axis`` with det < rel * max det."""
        det = self.det_grid()
        top = np.max(det)
        moved = np.moveaxis(det, axis, -1)
        hits = []
        for idx in np.ndindex(moved.shape[:-1]):
            line = moved[idx]
            for i in range(len(line)):
                lo = line[i - 1] if i > 0 else np.inf
                hi = line[i + 1] if i + 1 < len(line) else np.inf
                if line[i] <= lo and line[i] <= hi and line[i] < rel * top:
                    full = list(idx)
                    full.insert(axis, i)
                    hits.append(tuple(float(self.axes[a][full[a]]) for a in range(3)))
        return hits


def _scan_point(state0: SpinState, kind: str, angles) -> ScanRow:
    spec = RotationSpec(kind, tuple(angles))
    m = qfim_matrix(state0, spec)
    det = float(np.linalg.det(m))
    if is_singular(m):
        return ScanRow(spec.params, det, float("inf"))
    return ScanRow(spec.params, det, float(np.trace(np.linalg.inv(m))))


def singularity_scan(
    state0: SpinState,
    kind: str,
    grid: Sequence[Sequence[float]],
    workers: int = 1,
) -> ScanTable:
    """Evaluate det and Tr[I^-1] over the product grid (first axis slowest)."""
    if len(grid) != 3:
        raise ValidationError("grid needs one value list per angle")
    axes = tuple(np.asarray(g, dtype=float).reshape(-1) for g in grid)
    if any(a.size == 0 for a in axes):
        raise ValidationError("grid axes must be nonempty")
    RotationSpec(kind, (0.0, 0.0, 0.0))
    points = list(itertools.product(*axes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda p: _scan_point(state0, kind, p), points))
    else:
        rows = [_scan_point(state0, kind, p) for p in points]
    return ScanTable(kind, axes, tuple(rows))
