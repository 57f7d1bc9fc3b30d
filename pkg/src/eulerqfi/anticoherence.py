"""Polarization moments and anticoherence certification.

Orders 1 and 2 use the exact criteria S = 0 and <S_i S_j> = N(N+2)/12 delta_ij.
Higher orders are probed by checking that <(S.n)^k> is the same along a fixed set
of 32 directions: the 12 icosahedron vertices plus 20 seeded pseudorandom ones.
Sampling can refute isotropy but never prove it, so orders >= 3 are empirical.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geometry import icosahedron_vertices, random_directions
from .spin import SpinState, _unit, stokes_matrix, stokes_triple

DEFAULT_TOL = 1e-8
N_RANDOM_PROBES = 20


def probe_directions(seed: int = 0) -> np.ndarray:
    return np.vstack([icosahedron_vertices(), random_directions(N_RANDOM_PROBES, seed)])


def stokes_vector(state: SpinState) -> np.ndarray:
    psi = state.amplitudes
    return np.array([np.vdot(psi, s @ psi).real for s in stokes_triple(state.n)])


def stokes_tensor(state: SpinState) -> np.ndarray:
    """Complex Hermitian 3x3 tensor of <S_i S_j>."""
    psi = state.amplitudes
    vecs = [s @ psi for s in stokes_triple(state.n)]
    # <S_i S_j> = (S_i psi)^dag (S_j psi)
    return np.array([[np.vdot(vi, vj) for vj in vecs] for vi in vecs])


def directional_moment(state: SpinState, n, k: int) -> float:
    if k < 1:
        raise ValidationError(f"moment order must be >= 1, got {k}")
    op = stokes_matrix(state.n, _unit(n))
    w, v = np.linalg.eigh(op)
    weights = np.abs(v.conj().T @ state.amplitudes) ** 2
    return float(np.dot(weights, w ** k))


def isotropic_second_moment(n: int) -> float:
    return n * (n + 2) / 12.0


@dataclass(frozen=True)
class MomentReport:
    stokes_vector: np.ndarray
    stokes_tensor: np.ndarray
    order: int
    tolerance: float
    t_max: int
    directional_constants: tuple[float, ...]

    @property
    def capped(self) -> bool:
        """True when the search stopped at t_max rather than at a failing order."""
        return self.order == self.t_max


def _probe_moments(state: SpinState, k: int, dirs: np.ndarray) -> np.ndarray:
    sx, sy, sz = stokes_triple(state.n)
    out = np.empty(len(dirs))
    for i, d in enumerate(dirs):
        w, v = np.linalg.eigh(d[0] * sx + d[1] * sy + d[2] * sz)
        weights = np.abs(v.conj().T @ state.amplitudes) ** 2
        out[i] = np.dot(weights, w ** k)
    return out


def anticoherence_order(
    state: SpinState, t_max: int = 2, tol: float = DEFAULT_TOL, seed: int = 0
) -> MomentReport:
    if t_max < 0:
        raise ValidationError(f"t_max must be >= 0, got {t_max}")
    s = stokes_vector(state)
    tensor = stokes_tensor(state)
    iso = isotropic_second_moment(state.n)
    constants: list[float] = []
    order = 0
    if t_max >= 1 and np.linalg.norm(s) < tol:
        order = 1
        constants.append(0.0)
        if t_max >= 2 and np.max(np.abs(tensor - iso * np.eye(3))) < tol * max(1.0, iso):
            order = 2
            constants.append(iso)
            if t_max >= 3:
                dirs = probe_directions(seed)
                for k in range(3, t_max + 1):
                    vals = _probe_moments(state, k, dirs)
                    scale = max(1.0, float(np.max(np.abs(vals))))
                    if np.ptp(vals) >= tol * scale:
                        break
                    order = k
                    constants.append(float(np.mean(vals)))
    return MomentReport(s, tensor, order, tol, t_max, tuple(constants))
