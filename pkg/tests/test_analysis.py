import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from usbp_dg.analysis import (
    assemble_linear_operator,
    eigenvalues,
    eoc_table,
    jacobian_fd,
    l2_error_P,
    write_spectrum_csv,
)
from usbp_dg.errors import InvalidArgument
from usbp_dg.operators import lgl_usbp
from usbp_dg.physics import Euler1D, Euler2D, advection_splitting, burgers_full_upwind, make_splitting
from usbp_dg.semidisc import DG1D, DG2D, CartesianMesh2D, Mesh1D


@pytest.fixture
def advection_sd():
    return DG1D(lgl_usbp(4, -1.0), Mesh1D(5, 0.0, 3.0), advection_splitting(1.0))


def test_l2_error_identical_is_zero(advection_sd, rng):
    u = rng.normal(size=advection_sd.state_shape)
    assert l2_error_P(u, u, advection_sd) == 0.0


@pytest.mark.parametrize("delta", [1e-3, 0.5, 7.0])
def test_l2_error_of_constant_offset(advection_sd, rng, delta):
    u = rng.normal(size=advection_sd.state_shape)
    assert l2_error_P(u + delta, u, advection_sd) == pytest.approx(delta * math.sqrt(3.0), rel=1e-13)
    assert l2_error_P(u + delta, u, advection_sd, normalized=True) == pytest.approx(delta, rel=1e-13)


def test_l2_error_matches_integral():
    # e = x on [0, 3]: ||e||^2 = 9, exactly integrated by the LGL rule
    sd = DG1D(lgl_usbp(4, -1.0), Mesh1D(5, 0.0, 3.0), advection_splitting(1.0))
    e = sd.x[None]
    assert l2_error_P(e, np.zeros_like(e), sd) == pytest.approx(3.0, rel=1e-14)


def test_l2_error_variable_selection():
    sd = DG2D(lgl_usbp(3, -1.0), CartesianMesh2D(2, 2), make_splitting("vlh", Euler2D()))
    a = np.zeros(sd.state_shape)
    b = a.copy()
    b[0] += 1.0
    b[3] += 2.0
    assert l2_error_P(b, a, sd, variables=0) == pytest.approx(2.0)
    assert l2_error_P(b, a, sd, variables=[0, 3]) == pytest.approx(math.sqrt(4 + 16))
    with pytest.raises(InvalidArgument):
        l2_error_P(b[:, :1], a, sd)


def test_eoc_table_values():
    rows = eoc_table([16, 32, 64], [1e-2, 1.25e-3, 1.5625e-4])
    assert rows[0].eoc is None
    assert rows[1].eoc == pytest.approx(3.0)
    assert rows[2].eoc == pytest.approx(3.0)
    rows = eoc_table([10, 30], [9e-2, 1e-2])
    assert rows[1].eoc == pytest.approx(2.0)


def test_eoc_table_validation():
    with pytest.raises(InvalidArgument):
        eoc_table([2, 4], [1.0])
    with pytest.raises(InvalidArgument):
        eoc_table([4, 2], [1.0, 0.5])
    with pytest.raises(InvalidArgument):
        eoc_table([2, 4], [1.0, 0.0])


@given(st.floats(min_value=1e-12, max_value=1e6), st.floats(min_value=0.5, max_value=8.0))
def test_eoc_scale_invariance(scale, order):
    errs = [scale * 2.0 ** (-order * k) for k in range(3)]
    rows = eoc_table([4, 8, 16], errs)
    assert rows[1].eoc == pytest.approx(order, rel=1e-9)
    scaled = eoc_table([4, 8, 16], [7.0 * e for e in errs])
    assert scaled[2].eoc == pytest.approx(rows[2].eoc, rel=1e-12)


def test_assembled_operator_matches_rhs(advection_sd, rng):
    A = assemble_linear_operator(advection_sd)
    for _ in range(20):
        u = rng.normal(size=advection_sd.state_shape)
        np.testing.assert_allclose(A @ u.reshape(-1), advection_sd.rhs(u).reshape(-1),
                                   rtol=0, atol=1e-13 * max(1.0, np.abs(A).max()))


def test_assembly_needs_linear_problem():
    sd = DG1D(lgl_usbp(3, -1.0), Mesh1D(2), burgers_full_upwind())
    with pytest.raises(InvalidArgument):
        assemble_linear_operator(sd)


def test_jacobian_fd_of_linear_problem(advection_sd):
    A = assemble_linear_operator(advection_sd)
    u = np.ones(advection_sd.state_shape)
    np.testing.assert_allclose(jacobian_fd(advection_sd, u), A, atol=1e-10)


def test_jacobian_fd_burgers_exact_for_quadratic_flux(rng):
    # the rhs is quadratic in u, so central differences are step-independent
    sd = DG1D(lgl_usbp(4, -1e-2), Mesh1D(3), burgers_full_upwind())
    u = rng.uniform(0.1, 1.1, size=sd.state_shape)
    A1 = jacobian_fd(sd, u, step=1e-2)
    A2 = jacobian_fd(sd, u, step=1e-5)
    np.testing.assert_allclose(A1, A2, atol=1e-9 * np.abs(A1).max())
    # directional derivative agrees with the assembled Jacobian
    v = rng.normal(size=u.shape)
    lhs = (A1 @ v.reshape(-1)).reshape(u.shape)
    h = 1e-3
    rhs = (sd.rhs(u + h * v) - sd.rhs(u - h * v)) / (2 * h)
    np.testing.assert_allclose(lhs, rhs, atol=1e-9 * np.abs(rhs).max())


def test_jacobian_fd_rejects_bad_step(advection_sd):
    with pytest.raises(InvalidArgument):
        jacobian_fd(advection_sd, np.ones(advection_sd.state_shape), step=0.0)


def test_eigenvalues_of_known_matrices():
    skew = np.array([[0.0, 2.0], [-2.0, 0.0]])
    rep = eigenvalues(skew)
    assert rep.max_real_part == pytest.approx(0.0, abs=1e-15)
    assert rep.spectral_radius == pytest.approx(2.0)
    assert rep.norm2 == pytest.approx(2.0)
    rep = eigenvalues(np.diag([-3.0, -1.0, 0.5]))
    assert rep.max_real_part == pytest.approx(0.5)
    assert rep.relative_max_real_part == pytest.approx(0.5 / 3.0)
    with pytest.raises(InvalidArgument):
        eigenvalues(np.ones((2, 3)))


@pytest.mark.parametrize("N", [3, 4, 5])
def test_periodic_upwind_spectrum_is_dissipative(N):
    sd = DG1D(lgl_usbp(N, -0.1), Mesh1D(6), advection_splitting(1.0))
    rep = eigenvalues(assemble_linear_operator(sd))
    assert rep.relative_max_real_part <= 1e-10
    # the constant mode is conserved, so the spectrum touches zero
    assert np.min(np.abs(rep.eigenvalues)) < 1e-10 * rep.norm2


def test_euler_jacobian_at_constant_state_has_upwind_spectrum():
    sd = DG1D(lgl_usbp(3, -1.0), Mesh1D(4, 0, 2), make_splitting("sw", Euler1D()))
    u = np.broadcast_to(np.array([1.0, 0.2, 2.6])[:, None, None], sd.state_shape).copy()
    rep = eigenvalues(jacobian_fd(sd, u, step=1e-6))
    assert rep.relative_max_real_part <= 1e-7


def test_write_spectrum_csv(tmp_path):
    rep = eigenvalues(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    path = tmp_path / "spec.csv"
    write_spectrum_csv(path, rep, header="# test\n")
    lines = path.read_text().splitlines()
    assert lines[:2] == ["# test", "re,im"] and len(lines) == 4
