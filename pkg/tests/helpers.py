import numpy as np
from scipy.optimize import linear_sum_assignment

from eulerqfi.geometry import angular_distance
from eulerqfi.majorana import from_vectors


def random_constellation(rng, max_total=20, max_mult=3):
    """Random points with multiplicities, total at most ``max_total``."""
    total_target = int(rng.integers(1, max_total + 1))
    vecs, mults = [], []
    while sum(mults) < total_target:
        k = int(min(rng.integers(1, max_mult + 1), total_target - sum(mults)))
        v = rng.normal(size=3)
        vecs.append(v / np.linalg.norm(v))
        mults.append(k)
    return from_vectors(vecs, mults)


def match_constellations(a, b):
    """(max angular error, multiplicities equal) under the best point matching."""
    va, vb = a.vectors(), b.vectors()
    if len(va) != len(vb):
        return np.inf, False
    cost = np.array([[angular_distance(u, v) for v in vb] for u in va])
    rows, cols = linear_sum_assignment(cost)
    err = float(cost[rows, cols].max()) if len(rows) else 0.0
    same = bool(np.all(a.multiplicities()[rows] == b.multiplicities()[cols]))
    return err, same


def same_point_set(a, b, tol=1e-9):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    cost = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)
    r, c = linear_sum_assignment(cost)
    return bool(cost[r, c].max() < tol)
