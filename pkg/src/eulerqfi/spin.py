"""Two-mode fixed-N (Dicke basis) state algebra.

Basis convention: index ``m = 0..N`` labels the ket ``|m, N-m>`` with ``m``
quanta in mode a.  Every matrix in the package is indexed this way.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NumericalError, ValidationError

ALGEBRA_TOL = 1e-10
STATE_TOL = 1e-9

KINDS = ("euler-zyz", "euler-xyz", "axis-angle")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpinState:
    """Pure state with exactly ``n`` quanta, amplitudes over ``|m, n-m>``."""

    n: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.n < 0:
            raise ValidationError(f"n must be non-negative, got {self.n}")
        if amps.size != self.n + 1:
            raise ValidationError(
                f"expected {self.n + 1} amplitudes for n={self.n}, got {amps.size}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > STATE_TOL:
            raise ValidationError(f"state is not normalized (norm={norm:.12g})")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.n + 1

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes

    def overlap(self, other: "SpinState") -> complex:
        _check_same_n(self, other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "SpinState") -> float:
        """|<self|other>|, insensitive to global phase."""
        return abs(self.overlap(other))


def _check_same_n(a: SpinState, b: SpinState) -> None:
    if a.n != b.n:
        raise ValidationError(f"quanta mismatch: {a.n} vs {b.n}")


def make_state(n: int, amplitudes: Sequence[complex], normalize: bool = False) -> SpinState:
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if amps.size != n + 1:
        raise ValidationError(f"expected {n + 1} amplitudes for n={n}, got {amps.size}")
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise ValidationError("zero amplitude vector")
    if normalize:
        amps = amps / norm
    elif abs(norm - 1.0) > STATE_TOL:
        raise ValidationError(
            f"amplitudes have norm {norm:.12g}; pass normalize=True to rescale"
        )
    return SpinState(n, amps)


def basis_state(n: int, m: int) -> SpinState:
    """The Fock ket ``|m, n-m>``."""
    if not 0 <= m <= n:
        raise ValidationError(f"m={m} outside 0..{n}")
    amps = np.zeros(n + 1, dtype=complex)
    amps[m] = 1.0
    return SpinState(n, amps)


@dataclass(frozen=True)
class RotationSpec:
    """A point in one of three charts of the rotation group.

    ``euler-zyz``: (Phi, Theta, Psi);  ``euler-xyz``: (alpha, beta, gamma);
    ``axis-angle``: (chi, theta, phi) with axis (sin t cos p, sin t sin p, cos t).
    """

    kind: str
    params: tuple[float, float, float]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown rotation kind {self.kind!r}; expected one of {KINDS}")
        params = tuple(float(p) for p in self.params)
        if len(params) != 3:
            raise ValidationError("rotation spec needs exactly three angles")
        if not all(np.isfinite(params)):
            raise ValidationError(f"non-finite rotation angle in {params}")
        object.__setattr__(self, "params", params)

    def with_params(self, params) -> "RotationSpec":
        return RotationSpec(self.kind, tuple(params))


def zyz(phi: float, theta: float, psi: float) -> RotationSpec:
    return RotationSpec("euler-zyz", (phi, theta, psi))


def xyz(alpha: float, beta: float, gamma: float) -> RotationSpec:
    return RotationSpec("euler-xyz", (alpha, beta, gamma))


def axis_angle(chi: float, theta: float, phi: float) -> RotationSpec:
    return RotationSpec("axis-angle", (chi, theta, phi))


def axis_from_angles(theta: float, phi: float) -> np.ndarray:
    return np.array(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    )


def _unit(n, tol: float = ALGEBRA_TOL) -> np.ndarray:
    n = np.asarray(n, dtype=float).reshape(3)
    if abs(np.linalg.norm(n) - 1.0) > tol:
        raise ValidationError(f"axis {n.tolist()} is not a unit vector")
    return n


# -- operators -------------------------------------------------------------


def _ladder_band(n: int) -> np.ndarray:
    m = np.arange(n)
    return np.sqrt((m + 1) * (n - m)) / 2.0


def stokes_matrix(n: int, component) -> np.ndarray:
    """Matrix of S_x, S_y, S_z, S_0 (component 'x','y','z','0') or S.n for a unit 3-vector."""
    if n < 0:
        raise ValidationError(f"n must be non-negative, got {n}")
    dim = n + 1
    if isinstance(component, str):
        out = np.zeros((dim, dim), dtype=complex)
        band = _ladder_band(n)
        idx = np.arange(n)
        if component == "z":
            out[np.arange(dim), np.arange(dim)] = np.arange(dim) - n / 2.0
        elif component == "x":
            out[idx + 1, idx] = band
            out[idx, idx + 1] = band
        elif component == "y":
            out[idx + 1, idx] = -1j * band
            out[idx, idx + 1] = 1j * band
        elif component == "0":
            out[np.arange(dim), np.arange(dim)] = n / 2.0
        else:
            raise ValidationError(f"unknown Stokes component {component!r}")
        return out
    v = _unit(component)
    return v[0] * stokes_matrix(n, "x") + v[1] * stokes_matrix(n, "y") + v[2] * stokes_matrix(n, "z")


def stokes_triple(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return stokes_matrix(n, "x"), stokes_matrix(n, "y"), stokes_matrix(n, "z")


def check_hermitian(op: np.ndarray, tol: float = ALGEBRA_TOL) -> None:
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValidationError(f"operator must be square, got shape {op.shape}")
    if np.max(np.abs(op - op.conj().T), initial=0.0) > tol * max(1.0, np.max(np.abs(op), initial=0.0)):
        raise ValidationError("operator is not Hermitian")


def expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i t H) for Hermitian H via eigendecomposition."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * t * w)) @ v.conj().T


# -- rotations ---------------------------------------------------------------


def _factors(spec: RotationSpec) -> list[tuple[str | np.ndarray, float]]:
    """Generators and angles with R = prod exp(-i angle G) (left to right)."""
    a, b, c = spec.params
    if spec.kind == "euler-zyz":
        return [("z", a), ("y", b), ("z", c)]
    if spec.kind == "euler-xyz":
        return [("x", a), ("y", b), ("z", c)]
    # exp(+i chi S.n) == exp(-i (-chi) S.n)
    return [(axis_from_angles(b, c), -a)]


def _factor_unitary(n: int, gen, angle: float) -> np.ndarray:
    if isinstance(gen, str) and gen == "z":
        return np.diag(np.exp(-1j * angle * (np.arange(n + 1) - n / 2.0)))
    return expm_hermitian(stokes_matrix(n, gen), angle)


def rotation_unitary(n: int, spec: RotationSpec) -> np.ndarray:
    u = np.eye(n + 1, dtype=complex)
    for gen, angle in _factors(spec):
        u = u @ _factor_unitary(n, gen, angle)
    return u


def apply_rotation(state: SpinState, spec: RotationSpec) -> SpinState:
    out = rotation_unitary(state.n, spec) @ state.amplitudes
    return SpinState(state.n, out / np.linalg.norm(out))


def _expm_frechet_hermitian(a: np.ndarray, da: np.ndarray, coeff: complex) -> np.ndarray:
    """d/dt exp(coeff * (A + t dA)) at t=0, A Hermitian (Daleckii-Krein)."""
    w, v = np.linalg.eigh(a)
    f = np.exp(coeff * w)
    diff = w[:, None] - w[None, :]
    same = np.abs(diff) < 1e-9
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = np.where(same, coeff * f[:, None], (f[:, None] - f[None, :]) / np.where(same, 1.0, diff))
    return v @ ((v.conj().T @ da @ v) * gamma) @ v.conj().T


def rotation_derivatives(n: int, spec: RotationSpec) -> list[np.ndarray]:
    """Exact partial derivatives of the rotation unitary with respect to each angle."""
    if spec.kind in ("euler-zyz", "euler-xyz"):
        facs = [(stokes_matrix(n, g), ang) for g, ang in _factors(spec)]
        us = [_factor_unitary(n, g, ang) for g, ang in _factors(spec)]
        out = []
        for k in range(3):
            d = np.eye(n + 1, dtype=complex)
            for j in range(3):
                d = d @ ((-1j * facs[j][0] @ us[j]) if j == k else us[j])
            out.append(d)
        return out
    chi, theta, phi = spec.params
    axis = axis_from_angles(theta, phi)
    a = stokes_matrix(n, axis)
    r = expm_hermitian(a, -chi)
    d_theta = np.array([np.cos(theta) * np.cos(phi), np.cos(theta) * np.sin(phi), -np.sin(theta)])
    d_phi = np.array([-np.sin(theta) * np.sin(phi), np.sin(theta) * np.cos(phi), 0.0])
    sx, sy, sz = stokes_triple(n)
    out = [1j * a @ r]
    for dn in (d_theta, d_phi):
        da = dn[0] * sx + dn[1] * sy + dn[2] * sz
        out.append(_expm_frechet_hermitian(a, da, 1j * chi))
    return out


def expectation(state: SpinState, op: np.ndarray, tol: float = ALGEBRA_TOL) -> float:
    op = np.asarray(op)
    if op.shape != (state.dim, state.dim):
        raise ValidationError(f"operator shape {op.shape} does not match state dim {state.dim}")
    val = np.vdot(state.amplitudes, op @ state.amplitudes)
    if abs(val.imag) > tol * max(1.0, abs(val.real)):
        raise ValidationError(
            f"expectation has imaginary part {val.imag:.3g}; operator is not Hermitian"
        )
    return float(val.real)


# -- classical rotation matrices ----------------------------------------------


def rodrigues(chi: float, n) -> np.ndarray:
    """3x3 rotation matching exp(+i chi S.n): <S> -> R <S>."""
    nx, ny, nz = _unit(n)
    c, s = np.cos(chi), np.sin(chi)
    k = 1.0 - c
    return np.array(
        [
            [c + nx * nx * k, nx * ny * k + nz * s, nx * nz * k - ny * s],
            [ny * nx * k - nz * s, c + ny * ny * k, ny * nz * k + nx * s],
            [nz * nx * k + ny * s, nz * ny * k - nx * s, c + nz * nz * k],
        ]
    )


_AXES = {"x": np.array([1.0, 0, 0]), "y": np.array([0, 1.0, 0]), "z": np.array([0, 0, 1.0])}


def rotation_matrix(spec: RotationSpec) -> np.ndarray:
    """Classical rotation acting on <S> for the unitary of ``spec``.

    exp(-i a S.n) == exp(+i (-a) S.n), so each factor maps to rodrigues(-a, n).
    """
    out = np.eye(3)
    for gen, angle in _factors(spec):
        axis = _AXES[gen] if isinstance(gen, str) else gen
        out = out @ rodrigues(-angle, axis)
    return out


def axis_angle_from_matrix(r: np.ndarray) -> tuple[float, np.ndarray]:
    """Return (chi, n) with ``rodrigues(chi, n) == r``; chi in [0, pi]."""
    r = np.asarray(r, dtype=float)
    cos_chi = (np.trace(r) - 1.0) / 2.0
    # rodrigues antisymmetric part: r[0,1]-r[1,0] = 2 n_z sin chi, etc.
    v = np.array([r[1, 2] - r[2, 1], r[2, 0] - r[0, 2], r[0, 1] - r[1, 0]]) / 2.0
    sin_chi = float(np.linalg.norm(v))
    chi = float(np.arctan2(sin_chi, cos_chi))
    if sin_chi > 1e-6 or (cos_chi > 0 and sin_chi > 0):
        return chi, v / sin_chi
    if cos_chi > 0:
        return 0.0, np.array([0.0, 0.0, 1.0])
    # chi ~ pi: r ~ 2 n n^T - I; the sign of n follows v when it is resolvable
    m = (r + np.eye(3)) / 2.0
    i = int(np.argmax(np.diag(m)))
    n = m[:, i] / np.sqrt(m[i, i])
    if np.dot(n, v) < 0:
        n = -n
    return chi, n / np.linalg.norm(n)


def euler_zyz_from_matrix(r: np.ndarray) -> tuple[float, float, float]:
    """Angles (Phi, Theta, Psi) with rotation_matrix(zyz(...)) == r."""
    r = np.asarray(r, dtype=float)
    theta = float(np.arccos(np.clip(r[2, 2], -1.0, 1.0)))
    if np.sin(theta) < 1e-12:
        raise NumericalError("zyz chart is degenerate at this rotation (Theta = 0 or pi)")
    phi = float(np.arctan2(r[1, 2], r[0, 2]))
    psi = float(np.arctan2(r[2, 1], -r[2, 0]))
    return phi, theta, psi
