"""Acceptance criteria, each run at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed in the terminal summary.
"""
import subprocess
import sys
import warnings

import numpy as np
import pytest

from eulerqfi.anticoherence import anticoherence_order, isotropic_second_moment, stokes_tensor, stokes_vector
from eulerqfi.baselines import (
    advantage_ratio,
    generator_axes,
    noon_state,
    noon_variance_formula,
    rotated_noon_h_variance,
)
from eulerqfi.designer import psi4_family, psi4_interval, solve_support
from eulerqfi.errors import ValidationError
from eulerqfi.geometry import angular_distance, to_vector
from eulerqfi.majorana import certify_two_symmetries, constellation_to_state, state_to_constellation
from eulerqfi.polyhedra import orbit, rotation_group, symmetry_pair
from eulerqfi.qfim import (
    anticoherent_qfim_closed_form,
    crb,
    projection_variance,
    qfim,
    qfim_matrix,
    qfim_sld,
    singularity_scan,
    trace_bound,
)
from eulerqfi.spin import RotationSpec, axis_angle, stokes_matrix, zyz
from conftest import random_state
from helpers import match_constellations, random_constellation


@pytest.fixture(scope="module")
def certified_states(tetra, composite20):
    states = {"tetrahedron N=4": tetra, "tetra+dual+truncated N=20": composite20, "psi4 N=12": psi4_family(12, 2 / 9)}
    for s in states.values():
        assert anticoherence_order(s).order >= 2
    return states


def test_c1_qfim_closed_form(certified_states, record):
    rng = np.random.default_rng(1)
    worst = 0.0
    for s in certified_states.values():
        for _ in range(200):
            phi, theta, psi = rng.uniform(-np.pi, np.pi), rng.uniform(0, np.pi), rng.uniform(-np.pi, np.pi)
            gap = np.max(np.abs(qfim(s, zyz(phi, theta, psi)).matrix - anticoherent_qfim_closed_form(s.n, theta)))
            worst = max(worst, gap)
    ok = record("1  QFIM closed form (3 states x 200 triples, tol 1e-7)", worst < 1e-7, f"max gap {worst:.2e}")
    assert ok


def test_c2_trace_bound(certified_states, record):
    rng = np.random.default_rng(2)
    thetas = np.linspace(0.1, 3.04, 50)
    worst = 0.0
    for s in certified_states.values():
        for th in thetas:
            rep = crb(qfim(s, zyz(rng.uniform(-np.pi, np.pi), th, rng.uniform(-np.pi, np.pi))))
            worst = max(worst, abs(rep.trace_of_inverse / trace_bound(s.n, th) - 1))
    exact = crb(qfim(certified_states["tetrahedron N=4"], zyz(0.0, np.pi / 2, 0.0))).trace_of_inverse
    ok = worst < 1e-6 and abs(exact - 0.375) < 1e-9
    record("2  trace bound (rel 1e-6; N=4 pi/2 -> 0.375 within 1e-9)", ok, f"max rel {worst:.2e}, value {exact:.12f}")
    assert ok


def test_c3a_zyz_det_over_sin2(certified_states, record):
    thetas = np.linspace(0.1, 3.04, 60)
    worst = 0.0
    for s in certified_states.values():
        tab = singularity_scan(s, "euler-zyz", [[0.4], thetas, [-1.2]])
        ratio = tab.det_grid().ravel() / np.sin(thetas) ** 2
        worst = max(worst, np.ptp(ratio) / np.mean(ratio))
    ok = record("3a det/sin^2(Theta) constant (rel 1e-6)", worst < 1e-6, f"rel spread {worst:.2e}")
    assert ok


def _xyz_curve(beta_fine):
    """Points (alpha, beta) with sin(2 alpha) = cos(beta) / sin^2(beta/2), alpha in [-pi/2, pi/2]."""
    pts = []
    for b in beta_fine:
        k = np.cos(b) / np.sin(b / 2) ** 2
        if abs(k) > 1:
            continue
        a0 = 0.5 * np.arcsin(k)
        for a in (a0, np.pi / 2 - a0, a0 - np.pi, -np.pi / 2 - a0):
            a = (a + np.pi / 2) % np.pi - np.pi / 2
            pts.append((a, b))
    return np.array(pts)


def test_c3b_xyz_divergence_curve(tetra, record):
    alphas = np.linspace(-np.pi / 2, np.pi / 2, 61)
    betas = np.linspace(0.05, np.pi - 0.05, 61)
    da, db = alphas[1] - alphas[0], betas[1] - betas[0]
    tab = singularity_scan(tetra, "euler-xyz", [alphas, betas, [0.3]])
    det = tab.det_grid()[:, :, 0]
    zero = det < 1e-3 * det.max()
    zeros = np.array([(alphas[i], betas[j]) for i, j in zip(*np.nonzero(zero))])
    curve = _xyz_curve(np.linspace(1e-3, np.pi - 1e-3, 20001))

    def near(p, cloud):
        d = np.abs(cloud - p)
        d[:, 0] = np.minimum(d[:, 0], np.pi - d[:, 0])  # alpha is pi-periodic in sin(2 alpha)
        return bool(np.any((d[:, 0] <= da) & (d[:, 1] <= db)))

    zeros_on_curve = np.mean([near(p, curve) for p in zeros]) if len(zeros) else 0.0
    grid_pts = np.array([(a, b) for a in alphas for b in betas])
    on_curve = np.array([near(p, curve) for p in grid_pts])
    curve_dets = det.ravel()[on_curve]
    curve_has_zero = np.mean(curve_dets < 1e-3 * det.max())
    ok = zeros_on_curve == 1.0 and curve_has_zero == 1.0
    record(
        "3b xyz det zeros on sin(2a)=cos(b)/sin^2(b/2) (grid resolution)",
        ok,
        f"{len(zeros)} zero cells, {zeros_on_curve:.0%} near curve; {curve_has_zero:.0%} of curve cells near zero"
        f"; det on curve up to {curve_dets.max():.1f} (max {det.max():.1f})",
    )
    assert ok


def test_c3c_axis_angle_degenerates(tetra, record):
    chis = [1.0, 1e-1, 1e-2, 1e-3, 1e-4]
    dets = [np.linalg.det(qfim(tetra, axis_angle(c, 0.9, 0.4)).matrix) for c in chis]
    monotone = all(a > b for a, b in zip(dets, dets[1:]))
    ok = monotone and dets[-1] < 1e-6 * dets[0]
    record("3c axis-angle det -> 0 as chi -> 0", ok, f"det {dets[0]:.3g} -> {dets[-1]:.3g}")
    assert ok


def test_c4_noon_single_parameter(record):
    rng = np.random.default_rng(4)
    law, worst_proj = {}, 0.0
    for n in (2, 4, 8, 12):
        s = noon_state(n)
        law[n] = 0.0
        for _ in range(50):
            v = rng.normal(size=3)
            v /= np.linalg.norm(v)
            op = stokes_matrix(n, v)
            psi = s.amplitudes
            var4 = 4 * (np.vdot(op @ psi, op @ psi).real - np.vdot(psi, op @ psi).real ** 2)
            cos2 = v[2] ** 2
            law[n] = max(law[n], abs(var4 - (n * n * cos2 + n * (1 - cos2))))
            worst_proj = max(worst_proj, abs(projection_variance(s, v, 1e-3) * var4 - 1))
    ok = max(law.values()) < 1e-9 and worst_proj < 1e-4
    detail = "law " + ", ".join(f"N={n}: {e:.1e}" for n, e in law.items()) + f"; proj {worst_proj:.1e}"
    record("4  NOON 4Var law (1e-9) and projection variance (rel 1e-4)", ok, detail)
    assert ok


def test_c5_rotated_noon_variances(record):
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(3, 13))
        a, b = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        phi, theta = rng.uniform(0, 2 * np.pi), rng.uniform(0, np.pi)
        u = to_vector(a, b)
        axes = generator_axes(phi, theta)
        for which in ("phi", "theta", "psi"):
            got = rotated_noon_h_variance(n, a, b, which, phi, theta)
            worst = max(worst, abs(got - noon_variance_formula(n, u, axes[which])))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # N=6 has two quanta per copy
        ratio_gap = max(abs(advantage_ratio(n) - (3 + 6 / n)) for n in (6, 12, 30))
    ok = worst < 1e-9 and ratio_gap < 1e-12
    record("5  rotated NOON generator variances (1e-9); advantage 3+6/N (1e-12)", ok, f"var {worst:.2e}, ratio {ratio_gap:.2e}")
    assert ok


def _exact_residual(s):
    return max(
        float(np.linalg.norm(stokes_vector(s))),
        float(np.max(np.abs(stokes_tensor(s) - isotropic_second_moment(s.n) * np.eye(3)))),
    )


def test_c6_two_symmetry_theorem(record):
    rng = np.random.default_rng(6)
    groups = {g: (rotation_group(g), symmetry_pair(rotation_group(g))) for g in "TOI"}
    certified, worst = 0, 0.0
    implication = True
    for k in range(50):
        g, pair = groups["TOI"[k % 3]]
        seed = rng.normal(size=3)
        base = orbit(g, seed / np.linalg.norm(seed))
        for m in (1, int(rng.integers(2, 4))):
            s = constellation_to_state(base.scaled(m))
            cert = certify_two_symmetries(s, *pair)
            if cert.verdict:
                certified += 1
                r = _exact_residual(s)
                worst = max(worst, r)
                implication &= anticoherence_order(s).order >= 2 and r < 1e-8
    noon_ok = True
    for n in (2, 4, 6, 8):
        s = noon_state(n)
        cert = certify_two_symmetries(s, (2 * np.pi / n, [0, 0, 1]), (np.pi, [1, 0, 0]))
        noon_ok &= (not cert.verdict) and any("half-turn" in r for r in cert.reasons)
        noon_ok &= anticoherence_order(s).order == 1
    ok = implication and noon_ok and certified == 100
    record(
        "6  two-symmetry theorem (50 orbits + inflated; NOON rejected)",
        ok,
        f"{certified}/100 certified, max exact residual {worst:.2e}, NOON {'rejected' if noon_ok else 'NOT rejected'}",
    )
    assert ok


def test_c7_majorana_roundtrip(tetra, record):
    rng = np.random.default_rng(7)
    worst, mult_ok = 0.0, True
    for _ in range(200):
        c = random_constellation(rng, 20, 3)
        err, same = match_constellations(c, state_to_constellation(constellation_to_state(c)))
        worst = max(worst, err)
        mult_ok &= same
    v = state_to_constellation(tetra).vectors()
    sep = max(abs(angular_distance(v[i], v[j]) - np.arccos(-1 / 3)) for i in range(4) for j in range(i))
    ok = worst < 1e-6 and mult_ok and sep < 1e-8
    record("7  Majorana roundtrip (<1e-6 rad, exact mults); tetra separations (1e-8)", ok, f"max err {worst:.2e}, sep {sep:.2e}")
    assert ok


def test_c8_designer(record):
    p = solve_support(4, [1, 4]).probabilities
    tetra_ok = np.max(np.abs(p - [2 / 3, 1 / 3])) < 1e-12
    family_ok = True
    for n in (12, 16, 20):
        lo, hi = psi4_interval(n)
        for c2 in np.linspace(lo, hi, 7)[1:-1]:
            s = psi4_family(n, c2, (0.3, 1.1, 2.0))
            sz = stokes_matrix(n, "z")
            zz = np.vdot(s.amplitudes, sz @ sz @ s.amplitudes).real
            family_ok &= anticoherence_order(s).order == 2 and abs(zz - n * (n + 2) / 12) < 1e-10
    rejected = 0
    for bad in (psi4_interval(12)[0], psi4_interval(12)[1], 0.05, 0.5):
        try:
            psi4_family(12, bad)
        except ValidationError:
            rejected += 1
    ok = tetra_ok and family_ok and rejected == 4
    record("8  designer: tetra support, psi4 family order 2, interval enforced", ok, f"p={p.round(12).tolist()}, rejected {rejected}/4")
    assert ok


def test_c9_two_path_oracle(record):
    rng = np.random.default_rng(9)
    gaps = {}
    for kind in ("euler-zyz", "euler-xyz", "axis-angle"):
        worst = 0.0
        for _ in range(100):
            n = int(rng.integers(1, 21))
            s = random_state(rng, n)
            spec = RotationSpec(kind, tuple(rng.uniform(-np.pi, np.pi, size=3)))
            worst = max(worst, np.max(np.abs(qfim_matrix(s, spec) - qfim_sld(s, spec))))
        gaps[kind] = worst
    ok = max(gaps.values()) < 1e-8
    record("9  4Cov vs SLD QFIM (100 states per chart, tol 1e-8)", ok, ", ".join(f"{k} {v:.1e}" for k, v in gaps.items()))
    assert ok


def test_c10_cli_determinism(tmp_path, record):
    def cli(*args):
        return subprocess.run([sys.executable, "-m", "eulerqfi.cli", *args], capture_output=True, check=True).stdout

    state = tmp_path / "s.json"
    cli("state", "--tetrahedral", "1,1,1", "-o", str(state))
    runs = [
        ("state", "--psi4", "12", "--csq", "0.2222", "--phases", "0.1,0.2,0.3"),
        ("qfim", str(state), "--param", "xyz", "--angles", "0.3,1.1,-0.4"),
        ("sweep", str(state), "--param", "axis-angle", "--grid", "0.01:1:4", "--grid", "0.2:2:3", "--grid", "0.5", "--jobs", "3"),
        ("check", str(state), "--tmax", "4", "--seed", "3"),
        ("majorana", str(state)),
        ("compare", "--n", "12", "--theta1", "0.3", "--theta2", "0.6", "--big-theta", "1.2"),
        ("solve", "--n", "30", "--support", "0,3,6,10,14,18,22,26,30"),
    ]
    same = 0
    for args in runs:
        files = [tmp_path / f"out{i}" for i in range(2)]
        outs = [cli(*args, "-o", str(f)) + f.read_bytes() for f in files]
        same += outs[0] == outs[1] and len(outs[0]) > 0
    ok = same == len(runs)
    record("10 CLI determinism (byte-identical repeated runs)", ok, f"{same}/{len(runs)} commands identical")
    assert ok
