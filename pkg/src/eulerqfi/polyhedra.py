"""Symmetric constellations: Platonic solids, duals, group orbits, compositions.

Canonical orientations
----------------------
tetrahedron   one vertex at the north pole, the rest at phi = 0, 2pi/3, 4pi/3
octahedron    the six +-axis points
cube          (+-1, +-1, +-1)/sqrt(3)
icosahedron   poles plus rings at z = +-1/sqrt(5) (5-fold axis along z)
dodecahedron  face centres of the icosahedron above (5-fold face axis along z)

The rotation groups T, O and I are generated in these same orientations, so an
orbit of any seed under a group shares the symmetry axes of the matching solid.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull

from .errors import ValidationError
from .geometry import icosahedron_vertices
from .majorana import Constellation, from_vectors, merge_points
from .spin import axis_angle_from_matrix, rodrigues

log = logging.getLogger(__name__)

DEDUP_TOL = 1e-8  # chordal distance
GROUP_TOL = 1e-9

GROUP_ORDERS = {"T": 12, "O": 24, "I": 60}
SOLIDS = ("tetrahedron", "cube", "octahedron", "icosahedron", "dodecahedron")
_GROUP_OF = {
    "tetrahedron": "T",
    "cube": "O",
    "octahedron": "O",
    "icosahedron": "I",
    "dodecahedron": "I",
}


def _tetrahedron_vertices() -> np.ndarray:
    s = np.sqrt(8.0 / 9.0)
    pts = [[0.0, 0.0, 1.0]]
    pts += [[s * np.cos(2 * np.pi * k / 3), s * np.sin(2 * np.pi * k / 3), -1.0 / 3.0] for k in range(3)]
    return np.array(pts)


def _octahedron_vertices() -> np.ndarray:
    return np.vstack([np.eye(3), -np.eye(3)])


def _cube_vertices() -> np.ndarray:
    return np.array([[x, y, z] for x in (1, -1) for y in (1, -1) for z in (1, -1)]) / np.sqrt(3.0)


def _face_centres(vertices: np.ndarray) -> np.ndarray:
    """Unit outward normals of the hull's faces (coplanar triangles merged)."""
    hull = ConvexHull(vertices)
    normals = hull.equations[:, :3]
    normals = normals / np.linalg.norm(normals, axis=1, keepdims=True)
    return _dedup(normals)


def _dedup(vectors: np.ndarray, tol: float = DEDUP_TOL) -> np.ndarray:
    out: list[np.ndarray] = []
    for v in vectors:
        if all(np.linalg.norm(v - u) >= tol for u in out):
            out.append(v)
    return np.array(out)


def vertices(name: str) -> np.ndarray:
    if name == "tetrahedron":
        return _tetrahedron_vertices()
    if name == "octahedron":
        return _octahedron_vertices()
    if name == "cube":
        return _cube_vertices()
    if name == "icosahedron":
        return icosahedron_vertices()
    if name == "dodecahedron":
        return _face_centres(icosahedron_vertices())
    raise ValidationError(f"unknown solid {name!r}; expected one of {SOLIDS}")


def platonic(name: str) -> Constellation:
    return from_vectors(vertices(name))


def dual(name: str) -> Constellation:
    """Normalized face centres of ``name`` in its canonical orientation."""
    return from_vectors(_face_centres(vertices(name)))


# -- groups ------------------------------------------------------------------------


@dataclass(frozen=True)
class RotationGroup:
    name: str
    elements: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.elements)


def _generators(name: str) -> list[np.ndarray]:
    if name == "T":
        v = _tetrahedron_vertices()
        return [rodrigues(2 * np.pi / 3, v[0]), rodrigues(2 * np.pi / 3, v[1])]
    if name == "O":
        return [rodrigues(np.pi / 2, [0, 0, 1.0]), rodrigues(np.pi / 2, [1.0, 0, 0])]
    if name == "I":
        v = icosahedron_vertices()
        return [rodrigues(2 * np.pi / 5, v[0]), rodrigues(2 * np.pi / 5, v[1])]
    raise ValidationError(f"unknown rotation group {name!r}; expected T, O or I")


def _contains(elements: list[np.ndarray], m: np.ndarray) -> bool:
    return any(np.max(np.abs(e - m)) < GROUP_TOL for e in elements)


def rotation_group(name: str) -> RotationGroup:
    gens = _generators(name)
    elements = [np.eye(3)]
    frontier = [np.eye(3)]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                m = g @ a
                if not _contains(elements, m):
                    elements.append(m)
                    nxt.append(m)
        if len(elements) > GROUP_ORDERS[name]:
            break
        frontier = nxt
    if len(elements) != GROUP_ORDERS[name]:
        raise RuntimeError(f"group {name} closed with {len(elements)} elements")
    return RotationGroup(name, tuple(elements))


def group_for(solid: str) -> RotationGroup:
    if solid not in _GROUP_OF:
        raise ValidationError(f"unknown solid {solid!r}; expected one of {SOLIDS}")
    return rotation_group(_GROUP_OF[solid])


def orbit_vectors(group: RotationGroup, seed) -> np.ndarray:
    seed = np.asarray(seed, dtype=float)
    if abs(np.linalg.norm(seed) - 1.0) > 1e-10:
        raise ValidationError("orbit seed must be a unit vector")
    return _dedup(np.array([g @ seed for g in group.elements]))


def orbit(group: RotationGroup, seed) -> Constellation:
    return from_vectors(orbit_vectors(group, seed))


def symmetry_pair(group: RotationGroup) -> tuple[tuple[float, np.ndarray], tuple[float, np.ndarray]]:
    """Two group rotations (chi, axis) about independent axes, neither a half-turn."""
    found: list[tuple[float, np.ndarray]] = []
    for g in group.elements:
        chi, axis = axis_angle_from_matrix(g)
        if chi < 1e-6 or abs(chi - np.pi) < 1e-6:
            continue
        if found and np.linalg.norm(np.cross(found[0][1], axis)) < 1e-6:
            continue
        found.append((chi, axis))
        if len(found) == 2:
            return found[0], found[1]
    raise RuntimeError(f"group {group.name} has no two independent non-half-turn rotations")


# -- Archimedean / compositions ----------------------------------------------------


def truncated_tetrahedron(aligned_with: str = "tetrahedron") -> Constellation:
    """12 vertices: T-orbit of the point one third along an edge from a vertex.

    ``aligned_with='dual'`` cuts the dual tetrahedron instead.
    """
    v = _tetrahedron_vertices()
    if aligned_with == "dual":
        v = -v
    elif aligned_with != "tetrahedron":
        raise ValidationError("aligned_with must be 'tetrahedron' or 'dual'")
    seed = (2 * v[0] + v[1]) / 3.0
    return orbit(rotation_group("T"), seed / np.linalg.norm(seed))


def compose(parts: Sequence[tuple[Constellation, int]], tol: float = DEDUP_TOL) -> Constellation:
    """Union of constellations, each point's multiplicity scaled by its part's factor."""
    if not parts:
        raise ValidationError("compose needs at least one part")
    vecs, mults = [], []
    for c, m in parts:
        if int(m) != m or m < 1:
            raise ValidationError(f"part multiplicity must be a positive integer, got {m}")
        vecs.extend(c.vectors())
        mults.extend(int(m) * c.multiplicities())
    # chordal tol -> angle (same to first order)
    merged, merged_mults = merge_points(np.array(vecs), mults, tol)
    if len(merged) < len(vecs):
        log.info("compose merged %d coincident points", len(vecs) - len(merged))
    return from_vectors(merged, merged_mults)


def tetrahedral_family(m: int, n: int, i: int = 0, j: int = 0) -> Constellation:
    """m on a tetrahedron, n on its dual, i / j on the truncated tetrahedra aligned with each."""
    parts = []
    if m:
        parts.append((platonic("tetrahedron"), m))
    if n:
        parts.append((dual("tetrahedron"), n))
    if i:
        parts.append((truncated_tetrahedron("tetrahedron"), i))
    if j:
        parts.append((truncated_tetrahedron("dual"), j))
    return compose(parts)
