import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eulerqfi.errors import ValidationError
from eulerqfi.spin import (
    RotationSpec,
    apply_rotation,
    axis_angle,
    axis_angle_from_matrix,
    basis_state,
    euler_zyz_from_matrix,
    expectation,
    make_state,
    rodrigues,
    rotation_matrix,
    rotation_unitary,
    stokes_matrix,
    stokes_triple,
    xyz,
    zyz,
)
from eulerqfi.anticoherence import stokes_tensor, stokes_vector
from conftest import random_state

angle = st.floats(-2 * np.pi, 2 * np.pi, allow_nan=False)
small_n = st.integers(1, 60)


def test_stokes_examples():
    np.testing.assert_allclose(stokes_matrix(1, "z"), np.diag([-0.5, 0.5]))
    sx = stokes_matrix(2, "x")
    np.testing.assert_allclose(np.diag(sx, 1), [np.sqrt(2) / 2] * 2)
    np.testing.assert_allclose(np.diag(sx, -1), [np.sqrt(2) / 2] * 2)
    np.testing.assert_allclose(stokes_matrix(3, "0"), 1.5 * np.eye(4))
    sy = stokes_matrix(1, "y")
    # S_y = -i(a^dag b - b^dag a)/2 with a counting the first index
    assert sy[1, 0] == pytest.approx(-0.5j) and sy[0, 1] == pytest.approx(0.5j)


def test_casimir_n4():
    sx, sy, sz = stokes_triple(4)
    np.testing.assert_allclose(sx @ sx + sy @ sy + sz @ sz, 6 * np.eye(5), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(small_n)
def test_algebra(n):
    sx, sy, sz = stokes_triple(n)
    j = n / 2
    assert np.max(np.abs(sx @ sx + sy @ sy + sz @ sz - j * (j + 1) * np.eye(n + 1))) < 1e-10
    for a, b, c in ((sx, sy, sz), (sy, sz, sx), (sz, sx, sy)):
        assert np.max(np.abs(a @ b - b @ a - 1j * c)) < 1e-10


def test_stokes_vector_axis_rejects_non_unit():
    with pytest.raises(ValidationError):
        stokes_matrix(3, [1.0, 1.0, 0.0])
    with pytest.raises(ValidationError):
        stokes_matrix(3, "w")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), angle, angle, angle, st.sampled_from(["euler-zyz", "euler-xyz", "axis-angle"]))
def test_unitarity(n, a, b, c, kind):
    r = rotation_unitary(n, RotationSpec(kind, (a, b, c)))
    assert np.max(np.abs(r.conj().T @ r - np.eye(n + 1))) < 1e-10


def test_zyz_theta_zero_is_diagonal_phase():
    n, phi, psi = 5, 0.4, 1.3
    r = rotation_unitary(n, zyz(phi, 0.0, psi))
    m = np.arange(n + 1)
    np.testing.assert_allclose(r, np.diag(np.exp(-1j * (phi + psi) * (m - n / 2))), atol=1e-12)
    np.testing.assert_allclose(r, rotation_unitary(n, zyz(phi + psi, 0.0, 0.0)), atol=1e-12)


def test_axis_angle_identity_and_double_cover():
    assert np.allclose(rotation_unitary(3, axis_angle(0.0, 0.7, 0.2)), np.eye(4))
    assert np.allclose(rotation_unitary(4, axis_angle(2 * np.pi, 0.7, 0.2)), np.eye(5), atol=1e-10)
    assert np.allclose(rotation_unitary(3, axis_angle(2 * np.pi, 0.7, 0.2)), -np.eye(4), atol=1e-10)


def test_z_rotation_of_fock_state():
    n, m, phi = 6, 2, 0.9
    out = apply_rotation(basis_state(n, m), zyz(phi, 0, 0))
    assert out.amplitudes[m] == pytest.approx(np.exp(-1j * phi * (m - n / 2)))


def test_tetrahedron_vertex_axis_symmetry(tetra):
    # north-pole Majorana point, 2pi/3 turn
    out = apply_rotation(tetra, axis_angle(2 * np.pi / 3, 0.0, 0.0))
    assert abs(np.vdot(tetra.amplitudes, out.amplitudes)) == pytest.approx(1.0, abs=1e-12)


def test_expectation_examples(tetra):
    assert expectation(basis_state(5, 5), stokes_matrix(5, "z")) == pytest.approx(2.5)
    assert expectation(tetra, stokes_matrix(4, "0")) == pytest.approx(2.0)
    sz = stokes_matrix(4, "z")
    assert expectation(tetra, sz @ sz) == pytest.approx(2.0)
    with pytest.raises(ValidationError):
        expectation(tetra, np.eye(3))
    with pytest.raises(ValidationError):
        expectation(tetra, 1j * np.eye(5))


def test_state_validation():
    with pytest.raises(ValidationError):
        make_state(2, [1, 1, 1])
    with pytest.raises(ValidationError):
        make_state(2, [1, 0])
    with pytest.raises(ValidationError):
        make_state(1, [0, 0], normalize=True)
    s = make_state(1, [1, 1j], normalize=True)
    assert np.linalg.norm(s.amplitudes) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0


def test_spec_validation():
    with pytest.raises(ValidationError):
        RotationSpec("euler-zxz", (0, 0, 0))
    with pytest.raises(ValidationError):
        zyz(np.nan, 0, 0)


def test_rodrigues_examples():
    np.testing.assert_allclose(rodrigues(0.0, [0.3, 0.4, np.sqrt(0.75)]), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(rodrigues(np.pi / 2, [0, 0, 1]), [[0, 1, 0], [-1, 0, 0], [0, 0, 1]], atol=1e-15)
    r = rodrigues(2 * np.pi / 3, np.ones(3) / np.sqrt(3))
    assert np.allclose(np.abs(r), np.roll(np.eye(3), 1, axis=0)) or np.allclose(np.abs(r), np.roll(np.eye(3), -1, axis=0))
    assert np.allclose(r @ r @ r, np.eye(3))
    with pytest.raises(ValidationError):
        rodrigues(1.0, [1, 1, 0])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), angle, angle, angle, st.sampled_from(["euler-zyz", "euler-xyz", "axis-angle"]), st.integers(0, 2**31))
def test_covariance(n, a, b, c, kind, seed):
    state = random_state(np.random.default_rng(seed), n)
    spec = RotationSpec(kind, (a, b, c))
    rot = rotation_matrix(spec)
    out = apply_rotation(state, spec)
    assert np.max(np.abs(stokes_vector(out) - rot @ stokes_vector(state))) < 1e-9
    assert np.max(np.abs(stokes_tensor(out) - rot @ stokes_tensor(state) @ rot.T)) < 1e-9


def test_composition(rng):
    s = random_state(rng, 7)
    s1, s2 = zyz(0.3, 1.1, -0.4), xyz(0.2, 0.5, 0.9)
    u = rotation_unitary(7, s1) @ rotation_unitary(7, s2)
    assert np.allclose(u.conj().T @ u, np.eye(8), atol=1e-10)
    np.testing.assert_allclose(u @ s.amplitudes, apply_rotation(apply_rotation(s, s2), s1).amplitudes, atol=1e-12)
    np.testing.assert_allclose(rotation_matrix(s1) @ rotation_matrix(s2), rodrigues(*axis_angle_from_matrix(rotation_matrix(s1) @ rotation_matrix(s2))), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(angle, st.floats(0.05, np.pi - 0.05), angle)
def test_zyz_extraction_roundtrip(a, b, c):
    r = rotation_matrix(zyz(a, b, c))
    np.testing.assert_allclose(rotation_matrix(zyz(*euler_zyz_from_matrix(r))), r, atol=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, np.pi), st.floats(0, np.pi), angle)
def test_axis_angle_extraction(chi, t, p):
    r = rotation_matrix(axis_angle(chi, t, p))
    c2, n2 = axis_angle_from_matrix(r)
    assert 0 <= c2 <= np.pi + 1e-12
    np.testing.assert_allclose(rodrigues(c2, n2), r, atol=1e-7)
