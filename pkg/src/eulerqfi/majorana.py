"""Majorana constellations and the two-symmetry certificate.

A state with coefficients c_m is the product of N single-quantum creation
operators cos(t/2) a^dag + e^{ip} sin(t/2) b^dag.  Writing x = a^dag / b^dag,
the product is the polynomial sum_m c_m sqrt(C(N,m)) x^m (up to normalization),
and each root x_k = -e^{ip_k} tan(t_k/2).  Missing top-degree terms are points
at the south pole (t = pi); zero roots are points at the north pole.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize, special
from scipy.cluster import hierarchy

from .errors import ValidationError
from .geometry import angular_distance, to_angles, to_vector
from .spin import SpinState, _unit, rodrigues, rotation_unitary, RotationSpec

log = logging.getLogger(__name__)

MERGE_TOL = 1e-4
# candidate radius for grouping split multiple roots before the structure fit
CLUSTER_SEARCH = 0.1
# relative coefficient residual below which a multiple-root structure is accepted
FIT_TOL = 1e-12
FIT_STEPS = 20
MAX_COMPOSITIONS = 200
# roots with error bound below this fraction of the nearest-root distance count as simple
SIMPLE_RATIO = 1e-3
EPS = np.finfo(float).eps
NEWTON_STEPS = 2


@dataclass(frozen=True)
class MajoranaPoint:
    theta: float
    phi: float
    mult: int = 1

    @property
    def vector(self) -> np.ndarray:
        return to_vector(self.theta, self.phi)


@dataclass(frozen=True)
class Constellation:
    points: tuple[MajoranaPoint, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        for p in pts:
            if not (0.0 <= p.theta <= np.pi + 1e-12) or not (0.0 <= p.phi < 2 * np.pi + 1e-12):
                raise ValidationError(f"point angles out of range: {p}")
            if int(p.mult) != p.mult or p.mult < 1:
                raise ValidationError(f"multiplicity must be a positive integer: {p}")
        object.__setattr__(self, "points", pts)

    @property
    def total(self) -> int:
        return sum(p.mult for p in self.points)

    def vectors(self) -> np.ndarray:
        return np.array([p.vector for p in self.points]).reshape(-1, 3)

    def multiplicities(self) -> np.ndarray:
        return np.array([p.mult for p in self.points], dtype=int)

    def expanded_vectors(self) -> np.ndarray:
        """One row per quantum (points repeated by multiplicity)."""
        return np.repeat(self.vectors(), self.multiplicities(), axis=0)

    def scaled(self, factor: int) -> "Constellation":
        return Constellation(tuple(MajoranaPoint(p.theta, p.phi, p.mult * factor) for p in self.points))

    def rotated(self, matrix: np.ndarray) -> "Constellation":
        return from_vectors(self.vectors() @ np.asarray(matrix).T, self.multiplicities())


def from_vectors(vectors, mults: Iterable[int] | None = None) -> Constellation:
    vectors = np.asarray(vectors, dtype=float).reshape(-1, 3)
    mults = [1] * len(vectors) if mults is None else [int(m) for m in mults]
    pts = tuple(MajoranaPoint(*to_angles(v), m) for v, m in zip(vectors, mults))
    return Constellation(pts)


def merge_points(vectors, mults, tol: float) -> tuple[np.ndarray, list[int]]:
    """Greedy merge of directions closer than ``tol`` (radians); multiplicities add."""
    out_v: list[np.ndarray] = []
    out_m: list[int] = []
    sums: list[np.ndarray] = []
    for v, m in zip(np.asarray(vectors, dtype=float), mults):
        for i, u in enumerate(out_v):
            if angular_distance(u, v) < tol:
                sums[i] = sums[i] + m * v
                out_m[i] += m
                out_v[i] = sums[i] / np.linalg.norm(sums[i])
                break
        else:
            out_v.append(v / np.linalg.norm(v))
            out_m.append(int(m))
            sums.append(m * v / np.linalg.norm(v))
    return np.array(out_v).reshape(-1, 3), out_m


# -- constellation -> state ------------------------------------------------------


def _sqrt_binomials(n: int) -> np.ndarray:
    return np.sqrt(special.comb(n, np.arange(n + 1)))


def fix_global_phase(amps: np.ndarray) -> np.ndarray:
    """Rotate the phase so the first largest-modulus amplitude is real positive."""
    mags = np.abs(amps)
    i = int(np.argmax(mags >= mags.max() * (1 - 1e-12)))
    return amps * np.exp(-1j * np.angle(amps[i]))


def constellation_to_state(c: Constellation) -> SpinState:
    """Apply cos(t/2) a^dag + e^{ip} sin(t/2) b^dag once per quantum, renormalizing each time.

    Working in the normalized Fock basis keeps every step O(1); expanding the
    product in monomials first would lose about sqrt(C(N, m)) in relative accuracy.
    The factors commute, and sweeping them north to south keeps the rounding
    error near machine precision: for symmetric orbits with N = 180 the moment
    residuals drop from ~1e-5 (orbit order) to ~1e-11.
    """
    n = c.total
    if n < 1:
        raise ValidationError("empty constellation")
    amps = np.array([1.0 + 0j])
    for p in sorted(c.points, key=lambda q: q.theta):
        up = np.cos(p.theta / 2)
        side = np.exp(1j * p.phi) * np.sin(p.theta / 2)
        for _ in range(p.mult):
            k = len(amps) - 1
            m = np.arange(k + 1)
            nxt = np.zeros(k + 2, dtype=complex)
            nxt[1:] += up * np.sqrt(m + 1.0) * amps
            nxt[:-1] += side * np.sqrt(k - m + 1.0) * amps
            amps = nxt / np.linalg.norm(nxt)
    return SpinState(n, fix_global_phase(amps))


# -- state -> constellation ------------------------------------------------------


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots of sum_k coeffs[k] x^k (nonzero constant and leading terms)."""
    deg = len(coeffs) - 1
    if deg == 0:
        return np.empty(0, dtype=complex)
    # rescale x = s y so the monic polynomial's coefficients are balanced
    s = abs(coeffs[0] / coeffs[-1]) ** (1.0 / deg)
    scaled = coeffs * s ** np.arange(deg + 1)
    monic = scaled / scaled[-1]
    comp = np.zeros((deg, deg), dtype=complex)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -monic[:-1]
    return s * np.linalg.eigvals(comp)


def _newton(coeffs: np.ndarray, root: complex, steps: int) -> complex:
    """Polish a root, keeping a step only if it reduces |P|."""
    p = np.polynomial.polynomial
    dcoeffs = p.polyder(coeffs)
    for _ in range(steps):
        f = p.polyval(root, coeffs)
        df = p.polyval(root, dcoeffs)
        if df == 0:
            break
        cand = root - f / df
        if abs(p.polyval(cand, coeffs)) < abs(f):
            root = cand
        else:
            break
    return root


def majorana_polynomial(state: SpinState) -> np.ndarray:
    """Coefficients c_m sqrt(C(N,m)), lowest degree first."""
    return state.amplitudes * _sqrt_binomials(state.n)


def state_to_constellation(state: SpinState, tol: float = MERGE_TOL) -> Constellation:
    n = state.n
    if n == 0:
        return Constellation(())
    coeffs = majorana_polynomial(state)
    scale = np.max(np.abs(coeffs))
    nz = np.flatnonzero(np.abs(coeffs) > 1e-14 * scale)
    low, high = int(nz[0]), int(nz[-1])
    vectors: list[np.ndarray] = []
    mults: list[int] = []
    if low:  # x = 0: north pole
        vectors.append(np.array([0.0, 0.0, 1.0]))
        mults.append(low)
    if n - high:  # degree deficit: south pole
        vectors.append(np.array([0.0, 0.0, -1.0]))
        mults.append(n - high)
    core = coeffs[low : high + 1]
    if len(core) > 1:
        for v, k in _root_clusters(core, tol):
            vectors.append(v)
            mults.append(k)
    merged, merged_mults = merge_points(np.array(vectors), mults, tol)
    return from_vectors(merged, merged_mults)


def _root_to_vector(x: complex) -> np.ndarray:
    z = -x  # z = e^{ip} tan(t/2)
    return to_vector(2 * np.arctan(abs(z)), np.angle(z))


def _reciprocal_to_vector(w: complex) -> np.ndarray:
    # w = 1/x and -w = e^{-ip} cot(t/2)
    return to_vector(np.pi - 2 * np.arctan(abs(w)), -np.angle(-w))


def _expand(roots: np.ndarray, mults: Sequence[int], lead: complex) -> np.ndarray:
    """Coefficients of lead * prod (x - r_i)^k_i, lowest degree first."""
    return lead * np.poly(np.repeat(roots, mults))[::-1]


def _fit_structure(q: np.ndarray, roots, mults: Sequence[int]) -> tuple[np.ndarray, float]:
    """Levenberg-Marquardt fit of lead * prod (x - r_i)^k_i to q; roots and relative residual."""
    m = len(roots)
    norm = np.linalg.norm(q)

    def unpack(u):
        return u[:m] + 1j * u[m:]

    def residual(u):
        r = (_expand(unpack(u), mults, q[-1]) - q) / norm
        return np.concatenate([r.real, r.imag])

    def jacobian(u):
        z = unpack(u)
        f = _expand(z, mults, q[-1])
        # synthetic division f / (x - r_i) for all roots at once, highest degree first
        g = np.zeros((len(q), m), dtype=complex)
        g[-2] = f[-1]
        for j in range(len(q) - 2, 0, -1):
            g[j - 1] = f[j] + z * g[j]
        jac = -np.asarray(mults) * g / norm
        return np.block([[jac.real, -jac.imag], [jac.imag, jac.real]])

    z0 = np.asarray(roots, dtype=complex)
    sol = optimize.least_squares(
        residual, np.concatenate([z0.real, z0.imag]), jac=jacobian, method="lm",
        xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=FIT_STEPS * (2 * m + 1),
    )
    return unpack(sol.x), float(np.linalg.norm(residual(sol.x)))


def _candidate_structures(vals: np.ndarray):
    """(seeds, multiplicities) splitting a group of k nearby roots, fewest parts first."""
    k = len(vals)
    tree = hierarchy.linkage(np.column_stack([vals.real, vals.imag]), method="average")
    for n_parts in range(1, k):
        labels = hierarchy.fcluster(tree, n_parts, criterion="maxclust")
        parts = [labels == lab for lab in np.unique(labels)]
        seeds = [complex(np.mean(vals[m])) for m in parts]
        if special.comb(k - 1, len(parts) - 1) > MAX_COMPOSITIONS:
            comps = [tuple(int(m.sum()) for m in parts)]
        else:
            # every ordered split of k into len(parts) positive multiplicities
            comps = [
                tuple(np.diff((0, *cuts, k)))
                for cuts in itertools.combinations(range(1, k), len(parts) - 1)
            ]
        yield n_parts, [(seeds, c) for c in comps]


def _suspect_roots(q: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Mask of roots whose first-order error bound is not small against their nearest neighbour.

    A simple root moves by about eps * sum |q_j| |y|^j / |q'(y)| under coefficient rounding;
    numerically split multiple roots fail this test because their spread is of that size.
    """
    p = np.polynomial.polynomial
    bound = EPS * p.polyval(np.abs(y), np.abs(q)) / np.maximum(np.abs(p.polyval(y, p.polyder(q))), 1e-300)
    dist = np.abs(y[:, None] - y[None, :]) + np.diag(np.full(len(y), np.inf))
    return bound > SIMPLE_RATIO * dist.min(axis=1)


def _root_clusters(core: np.ndarray, tol: float) -> list[tuple[np.ndarray, int]]:
    roots = _companion_roots(core)
    # balanced variable y = x / s so the fitted coefficients have comparable size
    deg = len(core) - 1
    s = abs(core[0] / core[-1]) ** (1.0 / deg)
    q = core * s ** np.arange(deg + 1)
    q = q / np.linalg.norm(q)
    suspect = _suspect_roots(q, roots / s) if deg > 1 else np.zeros(deg, dtype=bool)
    vecs = np.array([_root_to_vector(x) for x in roots])
    # single-linkage groups of suspect roots within the search radius
    groups: list[list[int]] = [[i] for i in np.flatnonzero(~suspect)]
    pending: list[list[int]] = []
    for i in np.flatnonzero(suspect):
        hit = [g for g in pending if any(angular_distance(vecs[j], vecs[i]) < CLUSTER_SEARCH for j in g)]
        pending = [g for g in pending if g not in hit] + [[i] + [j for g in hit for j in g]]
    groups += pending
    # structure[i] lists (root in y, multiplicity) for group i; unresolved groups stay simple
    structure = [[(roots[j] / s, 1) for j in g] for g in groups]
    unresolved = [i for i, g in enumerate(groups) if len(g) > 1]
    # a second pass revisits groups left unresolved once the others have their structure
    for _ in range(2):
        for gi in list(unresolved):
            best, best_res = None, FIT_TOL
            for _, cands in _candidate_structures(roots[groups[gi]] / s):
                for seeds, ks in cands:
                    trial = structure[:gi] + [list(zip(seeds, ks))] + structure[gi + 1 :]
                    flat = [e for grp in trial for e in grp]
                    z, res = _fit_structure(q, [r for r, _ in flat], [k for _, k in flat])
                    if res <= best_res:
                        best, best_res = (trial, z), res
                if best is not None:
                    break
            if best is None:
                continue
            trial, z = best
            it = iter(z)
            structure = [[(next(it), k) for _, k in grp] for grp in trial]
            unresolved.remove(gi)
    out: list[tuple[np.ndarray, int]] = []
    for grp in structure:
        simple = []
        for y, k in grp:
            x = y * s
            if k > 1:
                out.append((_root_to_vector(x), k))
            elif abs(x) <= 1:
                simple.append(_root_to_vector(_newton(core, x, NEWTON_STEPS)))
            else:
                w = _newton(core[::-1], 1.0 / x, NEWTON_STEPS)
                simple.append(_reciprocal_to_vector(w))
        if simple:
            merged, mults = merge_points(np.array(simple), [1] * len(simple), tol)
            out.extend(zip(merged, mults))
    return out

# -- symmetry ----------------------------------------------------------------------


def symmetry_check(state: SpinState, chi: float, n) -> float:
    """1 - |<psi| exp(i chi S.n) |psi>|; zero when the state is invariant up to phase."""
    axis = _unit(n)
    theta, phi = to_angles(axis)
    r = rotation_unitary(state.n, RotationSpec("axis-angle", (chi, theta, phi)))
    return max(0.0, float(1.0 - abs(np.vdot(state.amplitudes, r @ state.amplitudes))))


@dataclass(frozen=True)
class SymmetryCertificate:
    rotations: tuple[tuple[float, tuple[float, float, float]], ...]
    residuals: tuple[float, float]
    axes_angle: float
    verdict: bool
    reasons: tuple[str, ...]


def _is_trivial_or_half_turn(chi: float, tol: float = 1e-9) -> str | None:
    r = chi % (2 * np.pi)
    if min(r, 2 * np.pi - r) < tol:
        return "identity rotation (chi = 0 mod 2pi)"
    if abs(r - np.pi) < tol:
        return "half-turn (chi = pi) acts as a reflection on the second-moment tensor"
    return None


def certify_two_symmetries(
    state: SpinState,
    rot1: tuple[float, Sequence[float]],
    rot2: tuple[float, Sequence[float]],
    tol: float = 1e-12,
) -> SymmetryCertificate:
    (chi1, n1), (chi2, n2) = rot1, rot2
    n1, n2 = _unit(n1), _unit(n2)
    res = (symmetry_check(state, chi1, n1), symmetry_check(state, chi2, n2))
    reasons = []
    for k, (chi, r) in enumerate(zip((chi1, chi2), res), start=1):
        if r >= tol:
            reasons.append(f"rotation {k} is not a symmetry (residual {r:.3g})")
        bad = _is_trivial_or_half_turn(chi)
        if bad:
            reasons.append(f"rotation {k}: {bad}")
    if np.linalg.norm(np.cross(n1, n2)) <= 1e-6:
        reasons.append("rotation axes are parallel")
    return SymmetryCertificate(
        rotations=((float(chi1), tuple(n1.tolist())), (float(chi2), tuple(n2.tolist()))),
        residuals=res,
        axes_angle=angular_distance(n1, n2),
        verdict=not reasons,
        reasons=tuple(reasons),
    )


def rotate_constellation(c: Constellation, chi: float, n) -> Constellation:
    return c.rotated(rodrigues(chi, n))
