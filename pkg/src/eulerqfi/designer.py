"""Algebraic construction of 2-anticoherent states.

With every pair of occupied indices at least three apart, all cross terms of
<S_i> and <S_i S_j> vanish and 2-anticoherence reduces to three linear equations
in the populations p_m = |c_m|^2:

    sum p_m = 1,    sum p_m m = N/2,    sum p_m m^2 = N(2N+1)/6.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .spin import SpinState

MIN_GAP = 3
MAX_VERTICES = 64
FEAS_TOL = 1e-12


class InfeasibleSupportError(ValidationError):
    def __init__(self, message: str, certificate: dict):
        self.certificate = certificate
        super().__init__(message)


@dataclass(frozen=True)
class SupportSolution:
    n: int
    support: tuple[int, ...]
    probabilities: np.ndarray
    free_parameters: int
    phases: np.ndarray
    vertices: tuple[np.ndarray, ...] = field(default=(), repr=False)
    truncated: bool = False

    def to_state(self, phases: Sequence[float] | None = None) -> SpinState:
        ph = self.phases if phases is None else np.asarray(phases, dtype=float)
        amps = np.zeros(self.n + 1, dtype=complex)
        p = np.clip(self.probabilities, 0.0, None)
        amps[list(self.support)] = np.sqrt(p) * np.exp(1j * ph)
        return SpinState(self.n, amps / np.linalg.norm(amps))


def constraint_system(n: int, support: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    m = np.asarray(support, dtype=float)
    a = np.vstack([np.ones_like(m), m, m ** 2])
    b = np.array([1.0, n / 2.0, n * (2 * n + 1) / 6.0])
    return a, b


def _validate_support(n: int, support: Sequence[int]) -> tuple[int, ...]:
    sup = tuple(int(s) for s in support)
    if not sup:
        raise ValidationError("support must be nonempty")
    if list(sup) != sorted(set(sup)):
        raise ValidationError(f"support must be sorted and distinct: {sup}")
    if sup[0] < 0 or sup[-1] > n:
        raise ValidationError(f"support {sup} outside 0..{n}")
    gaps = np.diff(sup)
    if gaps.size and gaps.min() < MIN_GAP:
        i = int(np.argmin(gaps))
        raise ValidationError(
            f"indices {sup[i]} and {sup[i + 1]} are closer than {MIN_GAP}; "
            "cross terms c_m c_(m+1) or c_m c_(m+2) would survive"
        )
    return sup


def _check_feasible(p: np.ndarray, sup, a, b) -> dict | None:
    resid = a @ p - b
    names = ("normalization", "first moment", "second moment")
    for name, r in zip(names, resid):
        if abs(r) > 1e-10 * max(1.0, abs(b).max()):
            return {"constraint": name, "residual": float(r)}
    for m, pm in zip(sup, p):
        if pm < -FEAS_TOL or pm > 1 + FEAS_TOL:
            return {"constraint": f"0 <= p[{m}] <= 1", "value": float(pm)}
    return None


def solve_support(n: int, support: Sequence[int]) -> SupportSolution:
    sup = _validate_support(n, support)
    a, b = constraint_system(n, sup)
    k = len(sup)
    if k <= 3:
        # solve the first k equations exactly; any remaining ones become the check
        p = np.linalg.solve(a[:k, :k], b[:k])
        cert = _check_feasible(p, sup, a, b)
        if cert:
            raise InfeasibleSupportError(f"support {sup} infeasible for N={n}: {cert}", cert)
        p = np.clip(p, 0.0, 1.0)
        return SupportSolution(n, sup, p, 0, np.zeros(k), (p,))
    verts: list[np.ndarray] = []
    truncated = False
    for basis in itertools.combinations(range(k), 3):
        sub = a[:, basis]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        p = np.zeros(k)
        p[list(basis)] = np.linalg.solve(sub, b)
        if np.all(p >= -FEAS_TOL) and not any(np.allclose(p, v, atol=1e-12) for v in verts):
            verts.append(np.clip(p, 0.0, 1.0))
            if len(verts) >= MAX_VERTICES:
                truncated = True
                break
    if not verts:
        cert = {"constraint": "nonnegativity", "detail": "no basic feasible solution"}
        raise InfeasibleSupportError(f"support {sup} infeasible for N={n}", cert)
    interior = np.mean(verts, axis=0)
    free = k - np.linalg.matrix_rank(a)
    return SupportSolution(n, sup, interior, int(free), np.zeros(k), tuple(verts), truncated)


def psi4_interval(n: int) -> tuple[float, float]:
    """Open interval for |c_N|^2 in the four-component family."""
    return (8 + n) / (9 * n), (4 + 2 * n) / (9 * n)


def psi4_probabilities(n: int, c_sq: float) -> dict[int, float]:
    return {
        n: c_sq,
        3 * n // 4: 2 * (2 + n) / (3 * n) - 3 * c_sq,
        n // 2: 3 * c_sq - (8 + n) / (3 * n),
        n // 4: 2 * (2 + n) / (3 * n) - c_sq,
    }


def psi4_family(n: int, c_sq: float, phases: Sequence[float] = (0.0, 0.0, 0.0)) -> SpinState:
    """Four-component state on m = N, 3N/4, N/2, N/4 (amplitude at m=N real)."""
    if n % 4:
        raise ValidationError(f"N must be divisible by 4, got {n}")
    if n < 12:
        raise ValidationError(f"N must be at least 12, got {n}")
    lo, hi = psi4_interval(n)
    if not lo < c_sq < hi:
        raise ValidationError(f"c^2={c_sq} outside the open interval ({lo}, {hi})")
    if len(phases) != 3:
        raise ValidationError("need three phases")
    probs = psi4_probabilities(n, c_sq)
    amps = np.zeros(n + 1, dtype=complex)
    for (m, p), ph in zip(probs.items(), (0.0, *phases)):
        amps[m] = np.sqrt(p) * np.exp(1j * ph)
    return SpinState(n, amps)
