"""Method-of-lines right-hand sides for DG discretisations with upwind SBP pairs.

Layouts
-------
1D states have shape ``(nvar, J, N)``: variable, element, node.
2D states have shape ``(nvar, Jx, Jy, N, N)``; the fourth axis runs along
the first reference coordinate and the last axis along the second one.

The upwind scheme applies ``D_minus`` to the positive and ``D_plus`` to the
negative flux part and couples elements through interface terms that only
exchange the part of the flux travelling into the element. The central
baseline uses the central operator with a local Lax-Friedrichs interface
flux.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, MeshError, SimulationAbort
from .operators import SbpOperator, UsbpPair, interpolation_matrix
from .physics import (
    ConservationLaw,
    Euler1D,
    Euler2D,
    FluxSplitting,
    SplittingName,
    pressure,
)

SCHEMES = ("usbp", "central")


# ---------------------------------------------------------------------------
# Meshes


@dataclass(frozen=True, eq=False)
class Mesh1D:
    """Uniform partition of ``[x_min, x_max]`` into ``J`` elements."""

    J: int
    x_min: float = -1.0
    x_max: float = 1.0

    def __post_init__(self):
        if self.J < 1:
            raise InvalidArgument("need at least one element")
        if not self.x_max > self.x_min:
            raise InvalidArgument("empty domain")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.J + 1)

    @property
    def h(self) -> np.ndarray:
        return np.diff(self.edges)

    def coordinates(self, ref_nodes) -> np.ndarray:
        """Physical node positions, shape ``(J, N)``, for nodes on [-1, 1]."""
        e = self.edges
        r = np.asarray(ref_nodes, dtype=float)
        return 0.5 * (e[:-1, None] + e[1:, None]) + 0.5 * np.diff(e)[:, None] * r[None, :]


@dataclass(frozen=True, eq=False)
class CartesianMesh2D:
    """Uniform ``Jx x Jy`` partition of a rectangle."""

    Jx: int
    Jy: int
    x_range: tuple = (-1.0, 1.0)
    y_range: tuple = (-1.0, 1.0)

    @property
    def hx(self) -> float:
        return (self.x_range[1] - self.x_range[0]) / self.Jx

    @property
    def hy(self) -> float:
        return (self.y_range[1] - self.y_range[0]) / self.Jy

    @property
    def h_min(self) -> float:
        return min(self.hx, self.hy)

    @property
    def area(self) -> float:
        return (self.x_range[1] - self.x_range[0]) * (self.y_range[1] - self.y_range[0])

    def coordinates(self, ref_nodes):
        """Node coordinates ``X, Y`` of shape ``(Jx, Jy, N, N)``."""
        r = np.asarray(ref_nodes, dtype=float)
        xc = self.x_range[0] + self.hx * (np.arange(self.Jx) + 0.5)
        yc = self.y_range[0] + self.hy * (np.arange(self.Jy) + 0.5)
        X = xc[:, None, None, None] + 0.5 * self.hx * r[None, None, :, None]
        Y = yc[None, :, None, None] + 0.5 * self.hy * r[None, None, None, :]
        shape = (self.Jx, self.Jy, r.size, r.size)
        return np.broadcast_to(X, shape).copy(), np.broadcast_to(Y, shape).copy()


@dataclass(frozen=True, eq=False)
class CurvilinearMesh2D:
    """Structured mesh of curved quadrilaterals sampled at operator nodes.

    ``X``, ``Y`` and all metric arrays have shape ``(Jx, Jy, N, N)``. Metric
    terms are obtained by applying the central operator to the nodal
    coordinates, so the discrete metric identities hold to rounding for any
    mapping.
    """

    X: np.ndarray
    Y: np.ndarray
    X_xi: np.ndarray
    X_eta: np.ndarray
    Y_xi: np.ndarray
    Y_eta: np.ndarray
    jacobian: np.ndarray
    N_geo: int
    metric_identity_residual: np.ndarray
    h_min: float

    @property
    def Jx(self) -> int:
        return self.X.shape[0]

    @property
    def Jy(self) -> int:
        return self.X.shape[1]

    @property
    def n1(self):
        """Contravariant direction for the first reference coordinate."""
        return self.Y_eta, -self.X_eta

    @property
    def n2(self):
        return -self.Y_xi, self.X_xi


def curvilinear_from_nodes(X, Y, operator: SbpOperator, N_geo: int) -> CurvilinearMesh2D:
    """Compute metric terms of a mesh given by nodal coordinates."""
    D = operator.D
    X_xi, X_eta = D @ X, X @ D.T
    Y_xi, Y_eta = D @ Y, Y @ D.T
    jac = X_xi * Y_eta - X_eta * Y_xi
    if not np.all(jac > 0):
        raise MeshError(f"mapping Jacobian not positive (min {jac.min():.3e})")
    # d/dxi of the first contravariant vector + d/deta of the second
    r1 = D @ Y_eta - Y_xi @ D.T
    r2 = -(D @ X_eta) + X_xi @ D.T
    resid = np.maximum(np.abs(r1), np.abs(r2)).max(axis=(2, 3))
    p = np.diag(operator.P)
    area = np.einsum("abij,i,j->ab", jac, p, p)
    h_min = float(np.sqrt(area.min()))
    return CurvilinearMesh2D(X, Y, X_xi, X_eta, Y_xi, Y_eta, jac, int(N_geo), resid, h_min)


def warp_map(s, t, amplitude):
    """Periodic smooth deformation of the unit square."""
    g = amplitude * np.sin(2.0 * np.pi * s) * np.sin(2.0 * np.pi * t)
    return s + g, t + g


def build_warped_mesh(J_xi, J_eta, N_geo, amplitude, operator: SbpOperator,
                      length=1.0, mapping=warp_map) -> CurvilinearMesh2D:
    """Warped periodic mesh of the square ``[0, length]^2``.

    Each element maps its reference square through the tensor-product
    polynomial of degree ``N_geo`` interpolating ``mapping`` at equispaced
    points that include the element corners; ``N_geo = 1`` gives bilinear
    elements. The polynomial is then sampled at the operator nodes.
    ``mapping`` acts on the unit square and its image is scaled by
    ``length``.
    """
    if N_geo not in (1, 2, 3, 4):
        raise InvalidArgument("N_geo must be 1, 2, 3 or 4")
    if not operator.nodes.includes_boundary:
        raise InvalidArgument("operator nodes must include the boundary")
    geo = np.linspace(-1.0, 1.0, N_geo + 1)
    I = interpolation_matrix(geo, operator.nodes.nodes)
    N = operator.N
    X = np.empty((J_xi, J_eta, N, N))
    Y = np.empty_like(X)
    for a in range(J_xi):
        s = (a + 0.5 * (geo + 1.0)) / J_xi
        for b in range(J_eta):
            t = (b + 0.5 * (geo + 1.0)) / J_eta
            xg, yg = mapping(s[:, None], t[None, :], amplitude)
            X[a, b] = length * (I @ xg @ I.T)
            Y[a, b] = length * (I @ yg @ I.T)
    return curvilinear_from_nodes(X, Y, operator, N_geo)


def identity_curvilinear_mesh(mesh: CartesianMesh2D, operator: SbpOperator) -> CurvilinearMesh2D:
    X, Y = mesh.coordinates(operator.nodes.nodes)
    return curvilinear_from_nodes(X, Y, operator, 1)


# ---------------------------------------------------------------------------
# Common machinery


def _locate(mask):
    idx = np.argwhere(mask)[0]
    return idx


class SemiDiscretization:
    """Interface shared by the 1D and 2D discretisations."""

    law: ConservationLaw
    pair: UsbpPair
    splitting: FluxSplitting | None
    scheme: str
    ndim: int = 1

    @property
    def N(self) -> int:
        return self.pair.N

    @property
    def state_shape(self) -> tuple:
        raise NotImplementedError

    @property
    def h_min(self) -> float:
        raise NotImplementedError

    @property
    def is_linear(self) -> bool:
        return self.law.linear and self.source is None

    def rhs(self, u, t=0.0):
        raise NotImplementedError

    def __call__(self, u, t=0.0):
        return self.rhs(u, t)

    def max_wave_speed(self, u) -> float:
        return self.law.max_wave_speed(u)

    def check_state(self, u, t):
        """Raise :class:`SimulationAbort` at the first inadmissible node."""
        if u.shape != self.state_shape:
            raise InvalidArgument(f"state has shape {u.shape}, expected {self.state_shape}")
        elem_axes = self.ndim
        if not np.all(np.isfinite(u)):
            loc = _locate(~np.all(np.isfinite(u), axis=0))
            raise SimulationAbort(t, loc[:elem_axes], loc[elem_axes:], "finite")
        if not self.law.needs_admissibility:
            return
        rho = u[0]
        if np.any(rho <= 0):
            loc = _locate(rho <= 0)
            raise SimulationAbort(t, loc[:elem_axes], loc[elem_axes:], "density", rho[tuple(loc)])
        p = pressure(u)
        if np.any(p <= 0):
            loc = _locate(p <= 0)
            raise SimulationAbort(t, loc[:elem_axes], loc[elem_axes:], "pressure", p[tuple(loc)])

    def quadrature_weights(self) -> np.ndarray:
        """Weights ``w`` such that ``sum(w * f)`` integrates nodal ``f``."""
        raise NotImplementedError

    def integrate(self, values) -> float:
        return float(np.sum(self.quadrature_weights() * values))

    @property
    def volume(self) -> float:
        """Measure of the computational domain."""
        return float(np.sum(self.quadrature_weights()))


def _validate_pair(pair: UsbpPair):
    if not pair.nodes.includes_boundary:
        raise InvalidArgument("interface coupling requires boundary-including nodes")


# ---------------------------------------------------------------------------
# 1D


class DG1D(SemiDiscretization):
    """Multi-element 1D discretisation on a :class:`Mesh1D`.

    Parameters
    ----------
    pair : UsbpPair
        Reference-element operators on [-1, 1].
    mesh : Mesh1D
    splitting : FluxSplitting
        Required for ``scheme="usbp"``; for ``"central"`` only its law is used.
    boundary : {"periodic", "dirichlet"}
    exterior : callable, optional
        ``exterior(t) -> (u_left, u_right)`` outer states for Dirichlet data.
    source : callable, optional
        ``source(t, x)`` added to the right-hand side.
    scheme : {"usbp", "central"}
    law : ConservationLaw, optional
        Overrides ``splitting.law``; needed when ``splitting`` is omitted.
    """

    ndim = 1

    def __init__(self, pair, mesh, splitting=None, boundary="periodic", exterior=None,
                 source=None, scheme="usbp", law=None):
        _validate_pair(pair)
        if scheme not in SCHEMES:
            raise InvalidArgument(f"unknown scheme {scheme!r}")
        if scheme == "usbp" and splitting is None:
            raise InvalidArgument("the upwind scheme needs a flux splitting")
        if boundary not in ("periodic", "dirichlet"):
            raise InvalidArgument(f"unknown boundary treatment {boundary!r}")
        if boundary == "dirichlet" and exterior is None:
            raise InvalidArgument("Dirichlet boundaries need exterior states")
        self.pair = pair
        self.mesh = mesh
        self.splitting = splitting
        self.law = law if law is not None else splitting.law
        self.boundary = boundary
        self.exterior = exterior
        self.source = source
        self.scheme = scheme
        self.x = mesh.coordinates(pair.nodes.nodes)
        self._scale = (2.0 / mesh.h)[None, :, None]
        P = pair.P
        N = pair.N
        self._pinv_left = np.linalg.solve(P, np.eye(N)[0])
        self._pinv_right = np.linalg.solve(P, np.eye(N)[-1])
        self._DpT = np.ascontiguousarray(pair.Dplus.T)
        self._DmT = np.ascontiguousarray(pair.Dminus.T)
        self._DT = np.ascontiguousarray(pair.D.T)

    @property
    def state_shape(self):
        return (self.law.nvar, self.mesh.J, self.N)

    @property
    def h_min(self):
        return float(self.mesh.h.min())

    def quadrature_weights(self):
        if not self.pair.base.is_diagonal_norm:
            raise InvalidArgument("nodal weights need a diagonal norm")
        return 0.5 * self.mesh.h[:, None] * np.diag(self.pair.P)[None, :]

    @property
    def volume(self) -> float:
        return float(np.sum(self.mesh.h))

    def norm_squared(self, e) -> np.ndarray:
        """``sum_j h_j/2 e_j^T P e_j`` per variable."""
        e = np.asarray(e, dtype=float)
        return np.einsum("vjn,nm,vjm,j->v", e, self.pair.P, e, 0.5 * self.mesh.h)

    def _neighbours(self, left_face, right_face, t):
        """States across the left and right face of every element."""
        from_left = np.roll(right_face, 1, axis=1)
        from_right = np.roll(left_face, -1, axis=1)
        if self.boundary == "dirichlet":
            ul, ur = self.exterior(t)
            from_left[:, 0] = ul
            from_right[:, -1] = ur
        return from_left, from_right

    def _add_sat(self, du, left_jump, right_jump):
        du -= self._pinv_right[None, None, :] * right_jump[:, :, None]
        du += self._pinv_left[None, None, :] * left_jump[:, :, None]

    def rhs(self, u, t=0.0):
        u = np.asarray(u, dtype=float)
        self.check_state(u, t)
        if self.scheme == "central":
            du = self._rhs_central(u, t)
        else:
            du = self._rhs_usbp(u, t)
        du *= self._scale
        if self.source is not None:
            du += self.source(t, self.x)
        return du

    def _rhs_usbp(self, u, t):
        sp = self.splitting
        fp, fm = sp.split(u, check=False)
        du = -(fm @ self._DpT + fp @ self._DmT)
        from_left, from_right = self._neighbours(u[:, :, 0], u[:, :, -1], t)
        if self.boundary == "periodic":
            fp_nb = np.roll(fp[:, :, -1], 1, axis=1)
            fm_nb = np.roll(fm[:, :, 0], -1, axis=1)
        else:
            fp_nb = sp.split(from_left, check=False)[0]
            fm_nb = sp.split(from_right, check=False)[1]
        right_jump = fm_nb - fm[:, :, -1]
        left_jump = fp_nb - fp[:, :, 0]
        self._add_sat(du, left_jump, right_jump)
        return du

    def _rusanov(self, ul, ur):
        law = self.law
        lam = np.maximum(law.wave_speed(ul), law.wave_speed(ur))
        return 0.5 * (law.flux(ul) + law.flux(ur)) - 0.5 * lam * (ur - ul)

    def _rhs_central(self, u, t):
        f = self.law.flux(u)
        du = -(f @ self._DT)
        uL, uR = u[:, :, 0], u[:, :, -1]
        from_left, from_right = self._neighbours(uL, uR, t)
        right_jump = self._rusanov(uR, from_right) - f[:, :, -1]
        left_jump = self._rusanov(from_left, uL) - f[:, :, 0]
        self._add_sat(du, left_jump, right_jump)
        return du


# ---------------------------------------------------------------------------
# 2D


class DG2D(SemiDiscretization):
    """Tensor-product discretisation on a Cartesian or curvilinear mesh.

    On a :class:`CartesianMesh2D` the splittings act in the coordinate
    directions and are scaled by the element size. On a
    :class:`CurvilinearMesh2D` they act on the contravariant fluxes, i.e.
    in the (unnormalised) contravariant direction vectors, and the result is
    divided by the mapping Jacobian. The Lax-Friedrichs coefficient is then
    multiplied by the largest direction-vector length on the mesh so the
    split stays upwind while remaining linear in the metric terms.

    ``exterior(t, X, Y)`` supplies outer states for ``boundary="dirichlet"``.
    Only diagonal-norm operators are supported.
    """

    ndim = 2

    def __init__(self, pair, mesh, splitting=None, boundary="periodic", exterior=None,
                 source=None, scheme="usbp", law=None):
        _validate_pair(pair)
        if not pair.base.is_diagonal_norm:
            raise InvalidArgument("2D discretisations need a diagonal norm")
        if scheme not in SCHEMES:
            raise InvalidArgument(f"unknown scheme {scheme!r}")
        if scheme == "usbp" and splitting is None:
            raise InvalidArgument("the upwind scheme needs a flux splitting")
        if boundary not in ("periodic", "dirichlet"):
            raise InvalidArgument(f"unknown boundary treatment {boundary!r}")
        if boundary == "dirichlet" and exterior is None:
            raise InvalidArgument("Dirichlet boundaries need exterior states")
        self.pair = pair
        self.mesh = mesh
        self.law = law if law is not None else splitting.law
        if self.law.ndim != 2:
            raise InvalidArgument("2D discretisations need a 2D conservation law")
        self.boundary = boundary
        self.exterior = exterior
        self.source = source
        self.scheme = scheme
        N = pair.N
        p = np.diag(pair.P)
        self._pinv_first = 1.0 / p[0]
        self._pinv_last = 1.0 / p[-1]
        self._Dp, self._Dm, self._D = pair.Dplus, pair.Dminus, pair.D
        self._DpT = np.ascontiguousarray(pair.Dplus.T)
        self._DmT = np.ascontiguousarray(pair.Dminus.T)
        self._DT = np.ascontiguousarray(pair.D.T)
        self._weights1d = p

        if isinstance(mesh, CartesianMesh2D):
            self.curvilinear = False
            self.X, self.Y = mesh.coordinates(pair.nodes.nodes)
            self.n1 = (1.0, 0.0)
            self.n2 = (0.0, 1.0)
            self._s1 = 0.5 * mesh.hy
            self._s2 = 0.5 * mesh.hx
            self._inv_jac = 4.0 / (mesh.hx * mesh.hy)
            self._jac = np.full(self.X.shape, 0.25 * mesh.hx * mesh.hy)
            self._h_min = mesh.h_min
            self.splitting = splitting
        elif isinstance(mesh, CurvilinearMesh2D):
            self.curvilinear = True
            if mesh.X.shape[2:] != (N, N):
                raise InvalidArgument("mesh was built for a different node count")
            self.X, self.Y = mesh.X, mesh.Y
            self.n1 = mesh.n1
            self.n2 = mesh.n2
            self._s1 = self._s2 = 1.0
            self._inv_jac = 1.0 / mesh.jacobian
            self._jac = mesh.jacobian
            self._h_min = mesh.h_min
            if splitting is not None and splitting.name is SplittingName.LAX_FRIEDRICHS:
                nmax = max(np.sqrt(self.n1[0] ** 2 + self.n1[1] ** 2).max(),
                           np.sqrt(self.n2[0] ** 2 + self.n2[1] ** 2).max())
                splitting = splitting.with_lambda(splitting.lambda_max * nmax)
            self.splitting = splitting
        else:
            raise InvalidArgument("unsupported mesh type")
        self._faces = self._face_normals()

    # faces ---------------------------------------------------------------

    def _face_normals(self):
        """Direction vectors on the four faces of every element."""
        def face(n, sl):
            if np.ndim(n[0]) == 0:
                return n
            return (n[0][sl], n[1][sl])

        return {
            "xi_first": face(self.n1, np.s_[:, :, 0, :]),
            "xi_last": face(self.n1, np.s_[:, :, -1, :]),
            "eta_first": face(self.n2, np.s_[:, :, :, 0]),
            "eta_last": face(self.n2, np.s_[:, :, :, -1]),
        }

    @property
    def state_shape(self):
        N = self.N
        return (self.law.nvar, self.mesh.Jx, self.mesh.Jy, N, N)

    @property
    def h_min(self):
        return float(self._h_min)

    def quadrature_weights(self):
        p = self._weights1d
        return self._jac * p[None, None, :, None] * p[None, None, None, :]

    def norm_squared(self, e):
        e = np.asarray(e, dtype=float)
        return np.sum(e * e * self.quadrature_weights(), axis=tuple(range(1, e.ndim)))

    def _neighbour_faces(self, u, t):
        """Outer states on the four faces of every element."""
        xi_first = np.roll(u[:, :, :, -1, :], 1, axis=1)
        xi_last = np.roll(u[:, :, :, 0, :], -1, axis=1)
        eta_first = np.roll(u[:, :, :, :, -1], 1, axis=2)
        eta_last = np.roll(u[:, :, :, :, 0], -1, axis=2)
        if self.boundary == "dirichlet":
            X, Y, ext = self.X, self.Y, self.exterior
            xi_first[:, 0] = ext(t, X[0, :, 0, :], Y[0, :, 0, :])
            xi_last[:, -1] = ext(t, X[-1, :, -1, :], Y[-1, :, -1, :])
            eta_first[:, :, 0] = ext(t, X[:, 0, :, 0], Y[:, 0, :, 0])
            eta_last[:, :, -1] = ext(t, X[:, -1, :, -1], Y[:, -1, :, -1])
        return xi_first, xi_last, eta_first, eta_last

    def _split(self, u, normal, scale):
        fp, fm = self.splitting.split(u, normal, check=False)
        if scale != 1.0:
            fp *= scale
            fm *= scale
        return fp, fm

    def rhs(self, u, t=0.0):
        u = np.asarray(u, dtype=float)
        self.check_state(u, t)
        if self.scheme == "central":
            du = self._rhs_central(u, t)
        else:
            du = self._rhs_usbp(u, t)
        du *= self._inv_jac
        if self.source is not None:
            du += self.source(t, self.X, self.Y)
        return du

    def _rhs_usbp(self, u, t):
        s1, s2 = self._s1, self._s2
        fp1, fm1 = self._split(u, self.n1, s1)
        fp2, fm2 = self._split(u, self.n2, s2)
        du = -(self._Dm @ fp1 + self._Dp @ fm1)
        du -= fp2 @ self._DmT + fm2 @ self._DpT

        faces = self._faces
        if not self.curvilinear and self.boundary == "periodic":
            fp_xf = np.roll(fp1[:, :, :, -1, :], 1, axis=1)
            fm_xl = np.roll(fm1[:, :, :, 0, :], -1, axis=1)
            fp_ef = np.roll(fp2[:, :, :, :, -1], 1, axis=2)
            fm_el = np.roll(fm2[:, :, :, :, 0], -1, axis=2)
        else:
            xf, xl, ef, el = self._neighbour_faces(u, t)
            fp_xf = self._split(xf, faces["xi_first"], s1)[0]
            fm_xl = self._split(xl, faces["xi_last"], s1)[1]
            fp_ef = self._split(ef, faces["eta_first"], s2)[0]
            fm_el = self._split(el, faces["eta_last"], s2)[1]
        du[:, :, :, -1, :] -= self._pinv_last * (fm_xl - fm1[:, :, :, -1, :])
        du[:, :, :, 0, :] += self._pinv_first * (fp_xf - fp1[:, :, :, 0, :])
        du[:, :, :, :, -1] -= self._pinv_last * (fm_el - fm2[:, :, :, :, -1])
        du[:, :, :, :, 0] += self._pinv_first * (fp_ef - fp2[:, :, :, :, 0])
        return du

    def _contravariant(self, u, normal, scale):
        f = self.law.flux(u, normal)
        return f * scale if scale != 1.0 else f

    def _rusanov(self, ul, ur, normal, scale):
        law = self.law
        lam = scale * np.maximum(law.wave_speed(ul, normal), law.wave_speed(ur, normal))
        fl = self._contravariant(ul, normal, scale)
        fr = self._contravariant(ur, normal, scale)
        return 0.5 * (fl + fr) - 0.5 * lam * (ur - ul)

    def _rhs_central(self, u, t):
        s1, s2 = self._s1, self._s2
        f1 = self._contravariant(u, self.n1, s1)
        f2 = self._contravariant(u, self.n2, s2)
        du = -(self._D @ f1 + f2 @ self._DT)
        faces = self._faces
        xf, xl, ef, el = self._neighbour_faces(u, t)
        own = u[:, :, :, 0, :]
        du[:, :, :, 0, :] += self._pinv_first * (
            self._rusanov(xf, own, faces["xi_first"], s1) - f1[:, :, :, 0, :])
        own = u[:, :, :, -1, :]
        du[:, :, :, -1, :] -= self._pinv_last * (
            self._rusanov(own, xl, faces["xi_last"], s1) - f1[:, :, :, -1, :])
        own = u[:, :, :, :, 0]
        du[:, :, :, :, 0] += self._pinv_first * (
            self._rusanov(ef, own, faces["eta_first"], s2) - f2[:, :, :, :, 0])
        own = u[:, :, :, :, -1]
        du[:, :, :, :, -1] -= self._pinv_last * (
            self._rusanov(own, el, faces["eta_last"], s2) - f2[:, :, :, :, -1])
        return du

    def max_wave_speed(self, u):
        return self.law.max_wave_speed(u)


def rhs_1d(semidisc: DG1D, u, t=0.0):
    return semidisc.rhs(u, t)


def rhs_2d_cartesian(semidisc: DG2D, u, t=0.0):
    if semidisc.curvilinear:
        raise InvalidArgument("expected a Cartesian discretisation")
    return semidisc.rhs(u, t)


def rhs_2d_curvilinear(semidisc: DG2D, u, t=0.0):
    if not semidisc.curvilinear:
        raise InvalidArgument("expected a curvilinear discretisation")
    return semidisc.rhs(u, t)


def rhs_baseline_central(semidisc: SemiDiscretization, u, t=0.0):
    if semidisc.scheme != "central":
        raise InvalidArgument("expected a discretisation built with scheme='central'")
    return semidisc.rhs(u, t)


# ---------------------------------------------------------------------------
# Snapshots


def write_snapshot(path, semidisc: SemiDiscretization, u, t=0.0, variables=None):
    """Write node coordinates and conserved variables as CSV.

    The first line is a ``#`` comment carrying ``J``, ``N``, ``t`` and the
    variable names.
    """
    import json

    u = np.asarray(u, dtype=float)
    nvar = u.shape[0]
    names = list(variables) if variables else [f"u{i}" for i in range(nvar)]
    if semidisc.ndim == 1:
        coords = [semidisc.x.reshape(-1)]
        cnames = ["x"]
        J = semidisc.mesh.J
    else:
        coords = [semidisc.X.reshape(-1), semidisc.Y.reshape(-1)]
        cnames = ["x", "y"]
        J = [semidisc.mesh.Jx, semidisc.mesh.Jy]
    data = np.column_stack(coords + [u[i].reshape(-1) for i in range(nvar)])
    header = json.dumps({"J": J, "N": semidisc.N, "t": float(t), "variables": names})
    with open(path, "w") as fh:
        fh.write("# " + header + "\n")
        fh.write(",".join(cnames + names) + "\n")
        for row in data:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_snapshot(path):
    """Return ``(header, columns)`` from :func:`write_snapshot` output."""
    import json

    with open(path) as fh:
        header = json.loads(fh.readline()[1:])
        names = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return header, {n: data[:, i] for i, n in enumerate(names)}


__all__ = [
    "Mesh1D", "CartesianMesh2D", "CurvilinearMesh2D", "DG1D", "DG2D",
    "build_warped_mesh", "curvilinear_from_nodes", "identity_curvilinear_mesh",
    "rhs_1d", "rhs_2d_cartesian", "rhs_2d_curvilinear", "rhs_baseline_central",
    "write_snapshot", "read_snapshot", "Euler1D", "Euler2D",
]
