import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from usbp_dg import kernels
from usbp_dg.physics import GAMMA, primitive_to_conserved

needs_native = pytest.mark.skipif(not kernels.NATIVE_AVAILABLE, reason="compiled kernels not built")


def _states_1d(rng, n, mach_max=3.0):
    rho = rng.uniform(0.2, 3.0, n)
    p = rng.uniform(0.2, 5.0, n)
    a = np.sqrt(GAMMA * p / rho)
    v = rng.uniform(-mach_max, mach_max, n) * a
    return primitive_to_conserved(rho, (v,), p)


def _states_2d(rng, n, speed=3.0):
    rho = rng.uniform(0.2, 3.0, n)
    p = rng.uniform(0.2, 5.0, n)
    a = np.sqrt(GAMMA * p / rho)
    v1, v2 = (rng.uniform(-speed, speed, n) * a for _ in range(2))
    return primitive_to_conserved(rho, (v1, v2), p)


def _flux_1d(u):
    rho, m, E = u
    v = m / rho
    p = (GAMMA - 1) * (E - 0.5 * rho * v * v)
    return np.stack([m, m * v + p, (E + p) * v])


def _flux_2d(u, nx, ny):
    rho, m1, m2, E = u
    v1, v2 = m1 / rho, m2 / rho
    p = (GAMMA - 1) * (E - 0.5 * rho * (v1 * v1 + v2 * v2))
    vn = nx * v1 + ny * v2
    return np.stack([rho * vn, m1 * vn + nx * p, m2 * vn + ny * p, (E + p) * vn])


@pytest.mark.parametrize("backend", ["python", pytest.param("native", marks=needs_native)])
def test_fluxes_match_direct_formula(backend, rng):
    u1 = _states_1d(rng, 500)
    np.testing.assert_allclose(kernels.euler_flux_1d(u1, backend=backend), _flux_1d(u1),
                               rtol=1e-14, atol=1e-14)
    u2 = _states_2d(rng, 500)
    nx, ny = rng.normal(size=500), rng.normal(size=500)
    np.testing.assert_allclose(kernels.euler_flux_2d(u2, nx, ny, backend=backend),
                               _flux_2d(u2, nx, ny), rtol=1e-14, atol=1e-13)


@pytest.mark.parametrize("name", ["steger_warming", "van_leer_haenel"])
@pytest.mark.parametrize("backend", ["python", pytest.param("native", marks=needs_native)])
def test_splittings_are_consistent(name, backend, rng):
    u1 = _states_1d(rng, 2000)
    fp, fm = getattr(kernels, name + "_1d")(u1, backend=backend)
    np.testing.assert_allclose(fp + fm, _flux_1d(u1), rtol=1e-12, atol=1e-12)
    u2 = _states_2d(rng, 2000)
    nx, ny = rng.normal(size=2000), rng.normal(size=2000)
    fp, fm = getattr(kernels, name + "_2d")(u2, nx, ny, backend=backend)
    np.testing.assert_allclose(fp + fm, _flux_2d(u2, nx, ny), rtol=1e-12, atol=1e-12)


@needs_native
@pytest.mark.parametrize("name", ["euler_flux", "steger_warming", "van_leer_haenel"])
def test_native_matches_python(name, rng):
    u1 = _states_1d(rng, 3000)
    a = getattr(kernels, name + "_1d")(u1, backend="native")
    b = getattr(kernels, name + "_1d")(u1, backend="python")
    np.testing.assert_allclose(np.asarray(a), np.asarray(b), rtol=1e-13, atol=1e-13)
    u2 = _states_2d(rng, 3000)
    nx, ny = rng.normal(size=3000), rng.normal(size=3000)
    a = getattr(kernels, name + "_2d")(u2, nx, ny, backend="native")
    b = getattr(kernels, name + "_2d")(u2, nx, ny, backend="python")
    np.testing.assert_allclose(np.asarray(a), np.asarray(b), rtol=1e-13, atol=1e-13)


@needs_native
def test_scalar_direction_broadcasts(rng):
    u2 = _states_2d(rng, 50).reshape(4, 5, 10)
    a = kernels.van_leer_haenel_2d(u2, 0.3, -0.7)
    b = kernels.van_leer_haenel_2d(u2, np.full((5, 10), 0.3), np.full((5, 10), -0.7))
    np.testing.assert_array_equal(a[0], b[0])
    assert a[0].shape == (4, 5, 10)


@pytest.mark.parametrize("name", ["steger_warming", "van_leer_haenel"])
def test_supersonic_states_are_one_sided(name, rng):
    u = _states_1d(rng, 400, mach_max=3.0)
    rho, m, E = u
    v = m / rho
    a = np.sqrt(GAMMA * (GAMMA - 1) * (E - 0.5 * rho * v * v) / rho)
    fp, fm = getattr(kernels, name + "_1d")(u)
    right, left = v / a >= 1.0, v / a <= -1.0
    assert right.any() and left.any()
    np.testing.assert_array_equal(fm[:, right], 0.0)
    np.testing.assert_array_equal(fp[:, left], 0.0)


def _jacobian_1d(fun, u, h=1e-6):
    J = np.empty((3, 3))
    for k in range(3):
        e = np.zeros(3)
        e[k] = h * max(1.0, abs(u[k]))
        J[:, k] = (fun(u + e) - fun(u - e)) / (2 * e[k])
    return J


def test_steger_warming_jacobian_signs(rng):
    # f_plus has a nonnegative and f_minus a nonpositive spectrum
    for u in _states_1d(rng, 60, mach_max=0.95).T:
        Jp = _jacobian_1d(lambda w: kernels.steger_warming_1d(w[:, None])[0][:, 0], u)
        Jm = _jacobian_1d(lambda w: kernels.steger_warming_1d(w[:, None])[1][:, 0], u)
        scale = np.abs(np.linalg.eigvals(Jp - Jm)).max()
        assert np.linalg.eigvals(Jp).real.min() > -1e-6 * scale
        assert np.linalg.eigvals(Jm).real.max() < 1e-6 * scale


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.1, max_value=5.0))
def test_steger_warming_is_homogeneous_in_direction(alpha):
    rng = np.random.default_rng(7)
    u = _states_2d(rng, 40)
    nx, ny = rng.normal(size=40), rng.normal(size=40)
    fp, fm = kernels.steger_warming_2d(u, nx, ny)
    gp, gm = kernels.steger_warming_2d(u, alpha * nx, alpha * ny)
    np.testing.assert_allclose(gp, alpha * fp, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(gm, alpha * fm, rtol=1e-12, atol=1e-12)


def test_van_leer_haenel_quadratic_in_direction(rng):
    # subsonic in every sampled direction: third differences along a line vanish
    rho = rng.uniform(0.5, 2.0, 30)
    p = rng.uniform(1.0, 3.0, 30)
    a = np.sqrt(GAMMA * p / rho)
    u = primitive_to_conserved(rho, (0.1 * a, -0.05 * a), p)
    n0 = np.array([0.8, 0.3])
    n1 = np.array([-0.2, 0.5])
    vals = [kernels.van_leer_haenel_2d(u, *(n0 + t * n1))[0] for t in (0.0, 0.5, 1.0, 1.5)]
    third = vals[3] - 3 * vals[2] + 3 * vals[1] - vals[0]
    assert np.max(np.abs(third)) < 1e-12 * np.max(np.abs(vals[0]))


def test_pure_python_switch():
    env = dict(os.environ, USBP_DG_PURE_PYTHON="1")
    code = "from usbp_dg import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels.euler_flux_1d(np.ones((3, 2)), backend="fortran")
