"""Unit-sphere helpers shared by the constellation and polyhedra code."""
from __future__ import annotations

import numpy as np


def to_vector(theta: float, phi: float) -> np.ndarray:
    return np.array(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    )


def to_angles(v) -> tuple[float, float]:
    """(theta in [0, pi], phi in [0, 2pi)) of a nonzero 3-vector; phi=0 at the poles."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    theta = float(np.arccos(np.clip(v[2], -1.0, 1.0)))
    if np.hypot(v[0], v[1]) < 1e-15:
        return theta, 0.0
    phi = float(np.arctan2(v[1], v[0]) % (2 * np.pi))
    if phi >= 2 * np.pi:
        phi = 0.0
    return theta, phi


def angular_distance(u, v) -> float:
    """Great-circle angle between two directions (atan2 form, accurate near 0 and pi)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return float(np.arctan2(np.linalg.norm(np.cross(u, v)), np.dot(u, v)))


def icosahedron_vertices() -> np.ndarray:
    """12 unit vectors: poles plus two staggered rings at z = +-1/sqrt(5)."""
    z = 1.0 / np.sqrt(5.0)
    r = 2.0 / np.sqrt(5.0)
    pts = [[0.0, 0.0, 1.0]]
    pts += [[r * np.cos(2 * np.pi * k / 5), r * np.sin(2 * np.pi * k / 5), z] for k in range(5)]
    pts += [
        [r * np.cos(2 * np.pi * k / 5 + np.pi / 5), r * np.sin(2 * np.pi * k / 5 + np.pi / 5), -z]
        for k in range(5)
    ]
    pts.append([0.0, 0.0, -1.0])
    return np.array(pts)


def random_directions(count: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)
