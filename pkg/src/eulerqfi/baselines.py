"""Single-parameter and classical reference bounds."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .qfim import covariance_matrix, trace_bound, zyz_generators
from .spin import SpinState, _unit, basis_state, rotation_unitary, stokes_matrix, zyz


@dataclass(frozen=True)
class ComparisonRow:
    scheme: str
    n: int
    angles: tuple[float, ...]
    variance_sum_bound: float


class ThreeNoonBound(NamedTuple):
    total_n: float  # inner terms sin^2/N
    per_copy: float  # inner terms sin^2/(N/3)


class ShotNoise(NamedTuple):
    coherent_qfi: float
    shot_noise_constant: float


def noon_state(n: int) -> SpinState:
    if n < 1:
        raise ValidationError(f"NOON state needs n >= 1, got {n}")
    amps = np.zeros(n + 1, dtype=complex)
    amps[0] = amps[n] = 1 / np.sqrt(2)
    return SpinState(n, amps)


def _unit_from(a: float, b: float) -> np.ndarray:
    return np.array([np.sin(a) * np.cos(b), np.sin(a) * np.sin(b), np.cos(a)])


def noon_axis_state(n: int, a: float, b: float) -> SpinState:
    """NOON state whose sensitive axis is u = (sin a cos b, sin a sin b, cos a).

    Tilting by a about y and then turning by b about z: exp(-ib S_z) exp(-ia S_y).
    """
    psi = rotation_unitary(n, zyz(b, a, 0.0)) @ noon_state(n).amplitudes
    return SpinState(n, psi)


def generator_axes(phi: float, theta: float) -> dict[str, np.ndarray]:
    return {
        "phi": np.array([0.0, 0.0, 1.0]),
        "theta": np.array([-np.sin(phi), np.cos(phi), 0.0]),
        "psi": np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]),
    }


def rotated_noon_h_variance(n: int, a: float, b: float, which: str, phi: float, theta: float) -> float:
    """4 Var[H_which] on the NOON state aligned with u(a, b)."""
    names = ("phi", "theta", "psi")
    if which not in names:
        raise ValidationError(f"which must be one of {names}")
    h = zyz_generators(n, phi, theta)[names.index(which)]
    psi = noon_axis_state(n, a, b).amplitudes
    return float(4.0 * covariance_matrix(psi, [h])[0, 0])


def noon_variance_formula(n: int, u, axis) -> float:
    u, axis = np.asarray(u, float), np.asarray(axis, float)
    return float(n ** 2 * np.dot(u, axis) ** 2 + n * np.linalg.norm(np.cross(u, axis)) ** 2)


def _check_thirds(n: int) -> int:
    if n % 3:
        raise ValidationError(f"N must be divisible by 3 for three NOON copies, got {n}")
    per = n // 3
    if per < 3:
        warnings.warn(f"each NOON copy holds only {per} quanta (fewer than 3)", stacklevel=3)
    return per


def three_noon_bound(n: int, theta1: float, theta2: float) -> ThreeNoonBound:
    """Summed variance bound for three NOON copies of N/3 quanta.

    ``total_n`` is the commonly quoted form with sin^2/N in the inner terms;
    ``per_copy`` uses sin^2/(N/3), which is what N/3 quanta per copy give.
    They agree at theta1 = theta2 = 0.
    """
    per = _check_thirds(n)

    def total(inner):
        return (3.0 / n) ** 2 * (
            1.0
            + 1.0 / (np.cos(theta1) ** 2 + np.sin(theta1) ** 2 / inner)
            + 1.0 / (np.cos(theta2) ** 2 + np.sin(theta2) ** 2 / inner)
        )

    return ThreeNoonBound(float(total(n)), float(total(per)))


def advantage_ratio(n: int) -> float:
    return three_noon_bound(n, 0.0, 0.0).total_n / trace_bound(n, np.pi / 2)


def shot_noise_reference(n: int, axis) -> ShotNoise:
    axis = _unit(axis)
    op = stokes_matrix(n, axis)
    psi = basis_state(n, n).amplitudes
    return ShotNoise(float(4.0 * covariance_matrix(psi, [op])[0, 0]), float(n))


def comparison_rows(n: int, theta1: float, theta2: float, big_theta: float) -> list[ComparisonRow]:
    tnb = three_noon_bound(n, theta1, theta2)
    return [
        ComparisonRow("multi-anticoherent", n, (big_theta,), trace_bound(n, big_theta)),
        ComparisonRow("three-noon", n, (theta1, theta2), tnb.total_n),
        ComparisonRow("three-noon-rederived", n, (theta1, theta2), tnb.per_copy),
        # reference only: three coherent copies of N/3 quanta, each at 1/(N/3)
        ComparisonRow("shot-noise", n, (), 3 * 3.0 / n),
    ]
