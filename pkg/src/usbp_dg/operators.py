"""Node sets, SBP operators, DOP bases and upwind SBP operator pairs.

Everything here lives on a single reference interval and is immutable after
construction. The main entry points are :func:`lgl_nodes`,
:func:`lagrange_sbp`, :func:`dop_basis`, :func:`dissipation_matrix` and
:func:`build_usbp`; :func:`lgl_usbp` chains them for the common case of
damping only the highest discrete orthogonal mode.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import ConstructionFailure, InvalidArgument

WEIGHT_SUM_TOL = 1e-13
SBP_TOL = 1e-12
EXACT_TOL = 1e-11
NSD_TOL = 1e-12
EXACTNESS_DEGREE_TOL = 1e-9


class NodeFamily(str, enum.Enum):
    LGL = "LGL"
    GAUSS_LEGENDRE = "GaussLegendre"
    EQUIDISTANT = "Equidistant"
    CUSTOM = "Custom"


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class NodeSet:
    """Ordered nodes on ``[x_left, x_right]`` with optional diagonal weights.

    ``weights`` is ``None`` for node sets used with a dense norm matrix.
    """

    nodes: np.ndarray
    weights: np.ndarray | None
    includes_boundary: bool
    family: NodeFamily = NodeFamily.CUSTOM
    x_left: float = -1.0
    x_right: float = 1.0

    def __post_init__(self):
        x = _frozen(self.nodes)
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "family", NodeFamily(self.family))
        if x.ndim != 1 or x.size < 1:
            raise InvalidArgument("nodes must be a nonempty 1D array")
        if np.any(np.diff(x) <= 0):
            raise InvalidArgument("nodes must be strictly increasing")
        if self.x_right <= self.x_left:
            raise InvalidArgument("empty interval")
        span = self.x_right - self.x_left
        if x[0] < self.x_left - 1e-14 * span or x[-1] > self.x_right + 1e-14 * span:
            raise InvalidArgument("nodes outside the interval")
        if self.family is NodeFamily.LGL:
            if x[0] != self.x_left or x[-1] != self.x_right or not self.includes_boundary:
                raise InvalidArgument("LGL nodes must contain both endpoints")
        if self.weights is not None:
            w = _frozen(self.weights)
            object.__setattr__(self, "weights", w)
            if w.shape != x.shape:
                raise InvalidArgument("weights and nodes differ in length")
            if np.any(w <= 0):
                raise InvalidArgument("weights must be positive")
            if abs(w.sum() - span) > WEIGHT_SUM_TOL * max(1.0, span):
                raise InvalidArgument(f"weights sum to {w.sum()!r}, expected {span!r}")

    @property
    def N(self) -> int:
        return self.nodes.size

    def scaled(self) -> np.ndarray:
        """Nodes mapped affinely onto [-1, 1]."""
        return (2.0 * self.nodes - (self.x_left + self.x_right)) / (self.x_right - self.x_left)


def lgl_nodes(N: int, tol: float = 1e-15, max_iter: int = 100) -> NodeSet:
    """Legendre-Gauss-Lobatto nodes and weights on [-1, 1].

    Newton iteration on ``(1 - x^2) P'_{N-1}(x)`` started from the
    Chebyshev-Gauss-Lobatto points.
    """
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise InvalidArgument("LGL rules need N >= 2")
    if N > 12:
        raise InvalidArgument("LGL rules are provided for N <= 12")
    n = N - 1
    x = np.cos(np.pi * np.arange(N) / n)
    for _ in range(max_iter):
        p_prev, p = np.ones_like(x), x.copy()
        for k in range(2, n + 1):
            p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
        dx = (x * p - p_prev) / (N * p)
        x = x - dx
        if np.max(np.abs(dx)) < tol:
            break
    x = np.sort(x)
    x = 0.5 * (x - x[::-1])
    x[0], x[-1] = -1.0, 1.0
    p_prev, p = np.ones_like(x), x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    w = 2.0 / (n * N * p**2)
    w = 0.5 * (w + w[::-1])
    return NodeSet(x, w, True, NodeFamily.LGL)


def gauss_legendre_nodes(N: int) -> NodeSet:
    """Gauss-Legendre nodes and weights on [-1, 1] (boundary excluded)."""
    if not isinstance(N, (int, np.integer)) or N < 1 or N > 12:
        raise InvalidArgument("Gauss-Legendre rules are provided for 1 <= N <= 12")
    x, w = np.polynomial.legendre.leggauss(N)
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return NodeSet(x, w, False, NodeFamily.GAUSS_LEGENDRE)


def equidistant_nodes(N: int, x_left: float = -1.0, x_right: float = 1.0) -> NodeSet:
    """Uniformly spaced nodes including both endpoints, without weights."""
    if N < 2:
        raise InvalidArgument("equidistant nodes need N >= 2")
    x = np.linspace(x_left, x_right, N)
    return NodeSet(x, None, True, NodeFamily.EQUIDISTANT, float(x_left), float(x_right))


def barycentric_weights(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def lagrange_derivative_matrix(x) -> np.ndarray:
    """Collocation derivative matrix of the Lagrange basis on nodes ``x``."""
    x = np.asarray(x, dtype=float)
    w = barycentric_weights(x)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    D = (w[None, :] / w[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


def lagrange_values(x, z: float) -> np.ndarray:
    """Values of all Lagrange basis polynomials on nodes ``x`` at point ``z``."""
    x = np.asarray(x, dtype=float)
    # Points closer than this to a node are snapped to it; the barycentric
    # quotient would otherwise overflow for subnormal distances.
    hit = np.flatnonzero(np.abs(z - x) <= 1e-100 * np.maximum(1.0, np.abs(x)))
    if hit.size:
        e = np.zeros_like(x)
        e[hit[0]] = 1.0
        return e
    w = barycentric_weights(x)
    c = w / (z - x)
    return c / c.sum()


def interpolation_matrix(x_from, x_to) -> np.ndarray:
    """Matrix mapping nodal values on ``x_from`` to the interpolant on ``x_to``."""
    return np.array([lagrange_values(x_from, z) for z in np.atleast_1d(x_to)])


@dataclass(frozen=True, eq=False)
class SbpOperator:
    """Degree-``degree`` SBP operator ``D = P^{-1}(Q + B/2)``.

    ``t_left`` and ``t_right`` interpolate nodal data to the interval ends;
    the boundary matrix is ``B = t_right t_right^T - t_left t_left^T``.
    """

    nodes: NodeSet
    P: np.ndarray
    Q: np.ndarray
    B: np.ndarray
    D: np.ndarray
    degree: int
    t_left: np.ndarray
    t_right: np.ndarray

    def __post_init__(self):
        for name in ("P", "Q", "B", "D", "t_left", "t_right"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def N(self) -> int:
        return self.nodes.N

    @cached_property
    def P_inv(self) -> np.ndarray:
        return _frozen(np.linalg.inv(self.P))

    @property
    def is_diagonal_norm(self) -> bool:
        return bool(np.all(self.P == np.diag(np.diag(self.P))))


def _boundary_matrix(t_left, t_right):
    return np.outer(t_right, t_right) - np.outer(t_left, t_left)


def lagrange_sbp(nodes: NodeSet) -> SbpOperator:
    """Diagonal-norm SBP operator from Lagrange collocation on ``nodes``."""
    if nodes.weights is None:
        raise InvalidArgument("lagrange_sbp needs quadrature weights")
    x = nodes.nodes
    D = lagrange_derivative_matrix(x)
    P = np.diag(nodes.weights)
    t_left = lagrange_values(x, nodes.x_left)
    t_right = lagrange_values(x, nodes.x_right)
    B = _boundary_matrix(t_left, t_right)
    Q = P @ D - 0.5 * B
    resid = np.max(np.abs(Q + Q.T))
    if resid > 1e-10 * max(1.0, np.max(np.abs(P @ D))):
        raise ConstructionFailure(f"SBP identity violated (residual {resid:.2e})")
    return SbpOperator(nodes, P, Q, B, D, nodes.N - 1, t_left, t_right)


def dense_norm_sbp_4pt() -> SbpOperator:
    """Degree-three dense-norm SBP operator on four equidistant nodes.

    The matrices below describe unit node spacing, so the nodes are
    ``0, 1, 2, 3``.
    """
    nodes = equidistant_nodes(4, 0.0, 3.0)
    P = np.array([[2, 1, 0, 0], [1, 10, -2, 0], [0, -2, 10, 1], [0, 0, 1, 2]]) / 8.0
    D = np.array(
        [[-11, 18, -9, 2], [-2, -3, 6, -1], [1, -6, 3, 2], [-2, 9, -18, 11]]
    ) / 6.0
    t_left = lagrange_values(nodes.nodes, nodes.x_left)
    t_right = lagrange_values(nodes.nodes, nodes.x_right)
    B = _boundary_matrix(t_left, t_right)
    Q = P @ D - 0.5 * B
    return SbpOperator(nodes, P, Q, B, D, 3, t_left, t_right)


@dataclass(frozen=True, eq=False)
class DopBasis:
    """Columns of ``V`` are nodal values of orthonormal discrete polynomials."""

    nodes: NodeSet
    V: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "V", _frozen(self.V))


def dop_basis(nodes: NodeSet) -> DopBasis:
    """Discrete orthonormal polynomial basis by modified Gram-Schmidt.

    The monomials of the nodes scaled to [-1, 1] are orthonormalised in the
    unweighted Euclidean inner product, each with a second pass to recover
    orthogonality lost to rounding. Column signs make the last entry
    nonnegative.
    """
    if not isinstance(nodes, NodeSet):
        x = np.asarray(nodes, dtype=float)
        if np.unique(x).size != x.size:
            raise InvalidArgument("duplicate nodes")
        nodes = NodeSet(np.sort(x), None, False, NodeFamily.CUSTOM,
                        float(np.min(x)), float(np.max(x)))
    s = nodes.scaled()
    N = s.size
    A = np.vander(s, N, increasing=True)
    V = np.zeros((N, N))
    for k in range(N):
        v = A[:, k].copy()
        for _ in range(2):
            for j in range(k):
                v -= (V[:, j] @ v) * V[:, j]
        nv = np.linalg.norm(v)
        if nv < 1e-13 * max(1.0, np.linalg.norm(A[:, k])):
            raise ConstructionFailure("monomial columns are numerically dependent")
        v /= nv
        if v[-1] < 0:
            v = -v
        V[:, k] = v
    err = np.max(np.abs(V.T @ V - np.eye(N)))
    if err > 1e-10:
        raise ConstructionFailure(f"DOP basis lost orthogonality ({err:.2e})")
    return DopBasis(nodes, V)


@dataclass(frozen=True, eq=False)
class DissipationSpec:
    """Spectrum of a dissipation matrix in the DOP basis.

    The first ``degree + 1`` eigenvalues must vanish so that polynomials up
    to ``degree`` are left untouched; the rest must be nonpositive.
    """

    eigenvalues: np.ndarray
    degree: int

    def __post_init__(self):
        lam = _frozen(self.eigenvalues)
        object.__setattr__(self, "eigenvalues", lam)
        d = int(self.degree)
        if d < 0 or d >= lam.size:
            raise InvalidArgument("degree must satisfy 0 <= degree < N")
        if np.any(lam[: d + 1] != 0.0):
            raise InvalidArgument(f"eigenvalues 1..{d + 1} must be zero for degree {d}")
        if np.any(lam > 0.0) or not np.all(np.isfinite(lam)):
            raise InvalidArgument("eigenvalues must be finite and nonpositive")

    @classmethod
    def top_mode(cls, N: int, lam: float) -> "DissipationSpec":
        """Damp only the highest mode with eigenvalue ``lam``; degree ``N - 2``."""
        if lam > 0:
            raise InvalidArgument("dissipation eigenvalue must be nonpositive")
        eig = np.zeros(N)
        eig[-1] = lam
        return cls(eig, N - 2)

    @classmethod
    def uniform(cls, N: int, degree: int, lam: float) -> "DissipationSpec":
        """Damp every mode above ``degree`` with the same eigenvalue."""
        if lam > 0:
            raise InvalidArgument("dissipation eigenvalue must be nonpositive")
        eig = np.zeros(N)
        eig[degree + 1:] = lam
        return cls(eig, degree)


def dissipation_matrix(basis: DopBasis, spec: DissipationSpec) -> np.ndarray:
    """``S = V diag(lambda) V^T`` (symmetric negative semi-definite)."""
    V = basis.V
    lam = spec.eigenvalues
    if lam.size != V.shape[1]:
        raise InvalidArgument("spectrum length does not match the basis")
    S = (V * lam) @ V.T
    return 0.5 * (S + S.T)


def _monomials(nodes: NodeSet, kmax: int):
    """Yield ``(k, f, f')`` for monomials in the scaled coordinate."""
    s = nodes.scaled()
    jac = 2.0 / (nodes.x_right - nodes.x_left)
    for k in range(kmax + 1):
        f = s**k
        df = k * s ** (k - 1) * jac if k > 0 else np.zeros_like(s)
        yield k, f, df


@dataclass(frozen=True, eq=False)
class UsbpPair:
    """Upwind SBP pair ``D_plus``/``D_minus`` sharing ``P`` and ``B``."""

    base: SbpOperator
    S: np.ndarray
    Dplus: np.ndarray
    Dminus: np.ndarray
    Qplus: np.ndarray
    Qminus: np.ndarray
    degree: int

    def __post_init__(self):
        for name in ("S", "Dplus", "Dminus", "Qplus", "Qminus"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def nodes(self) -> NodeSet:
        return self.base.nodes

    @property
    def N(self) -> int:
        return self.base.N

    @property
    def P(self) -> np.ndarray:
        return self.base.P

    @property
    def B(self) -> np.ndarray:
        return self.base.B

    @property
    def D(self) -> np.ndarray:
        return self.base.D


def build_usbp(base: SbpOperator, S, degree: int) -> UsbpPair:
    """Split ``base`` into an upwind pair ``D +- P^{-1} S / 2``."""
    S = np.asarray(S, dtype=float)
    N = base.N
    if S.shape != (N, N):
        raise InvalidArgument("S has the wrong shape")
    if degree > base.degree:
        raise InvalidArgument("target degree exceeds the base operator degree")
    scale = max(1.0, np.max(np.abs(S)))
    if np.max(np.abs(S - S.T)) > SBP_TOL * scale:
        raise InvalidArgument("S is not symmetric")
    if np.max(np.linalg.eigvalsh(0.5 * (S + S.T))) > NSD_TOL * scale:
        raise InvalidArgument("S is not negative semi-definite")
    for k, f, _ in _monomials(base.nodes, degree):
        if np.max(np.abs(S @ f)) > EXACT_TOL * scale:
            raise InvalidArgument(f"S does not annihilate degree-{k} polynomials")
    PinvS = np.linalg.solve(base.P, S)
    return UsbpPair(
        base=base,
        S=S,
        Dplus=base.D + 0.5 * PinvS,
        Dminus=base.D - 0.5 * PinvS,
        Qplus=base.Q + 0.5 * S,
        Qminus=base.Q - 0.5 * S,
        degree=int(degree),
    )


def usbp_from_spec(base: SbpOperator, spec: DissipationSpec) -> UsbpPair:
    S = dissipation_matrix(dop_basis(base.nodes), spec)
    return build_usbp(base, S, spec.degree)


def lgl_usbp(N: int, lam: float) -> UsbpPair:
    """USBP pair on ``N`` LGL nodes damping the top DOP mode by ``lam``.

    ``lam = 0`` returns the central operator twice (degree ``N - 1``).
    """
    base = lagrange_sbp(lgl_nodes(N))
    if lam == 0:
        return build_usbp(base, np.zeros((N, N)), N - 1)
    return usbp_from_spec(base, DissipationSpec.top_mode(N, lam))


@dataclass(frozen=True)
class VerificationReport:
    """Residual of each defining identity of a USBP pair.

    ``exactness_degree`` is the largest ``k`` such that both ``D_plus`` and
    ``D_minus`` differentiate every monomial of degree ``<= k`` to within
    ``1e-9``.
    """

    residuals: dict
    tolerances: dict
    exactness_degree: int

    @property
    def failures(self) -> list:
        return [k for k, r in self.residuals.items() if not r <= self.tolerances[k]]

    @property
    def ok(self) -> bool:
        return not self.failures


def _exactness_error(Dmat, nodes, k):
    for j, f, df in _monomials(nodes, k):
        if j == k:
            return np.max(np.abs(Dmat @ f - df))
    raise AssertionError


def verify_usbp(pair: UsbpPair) -> VerificationReport:
    """Measure every defining identity of ``pair``.

    Tolerances are absolute for matrices of unit size and scale with the
    largest entry of the matrices involved otherwise.
    """
    base = pair.base
    nodes = base.nodes
    P, Q, B, D, S = base.P, base.Q, base.B, base.D, pair.S
    PinvS = np.linalg.solve(P, S)
    sD = max(1.0, np.max(np.abs(D)))
    sS = max(1.0, np.max(np.abs(S)))
    res, tol = {}, {}

    def put(name, value, t):
        res[name] = float(value)
        tol[name] = t

    put("sbp_decomposition", np.max(np.abs(D - np.linalg.solve(P, Q + 0.5 * B))), SBP_TOL * sD)
    put("q_skew", np.max(np.abs(Q + Q.T)), SBP_TOL * sD)
    put("norm_spd", -np.min(np.linalg.eigvalsh(0.5 * (P + P.T))), 0.0)
    put("norm_symmetric", np.max(np.abs(P - P.T)), SBP_TOL)
    central = 0.0
    boundary = 0.0
    mono = list(_monomials(nodes, base.degree))
    s_l, s_r = -1.0, 1.0
    for k, f, df in mono:
        central = max(central, np.max(np.abs(D @ f - df)))
        for j, g, _ in mono:
            exact = s_r ** (k + j) - s_l ** (k + j)
            boundary = max(boundary, abs(f @ B @ g - exact))
    put("central_exactness", central, EXACT_TOL * sD)
    put("boundary_exactness", boundary, EXACT_TOL)
    put("s_symmetric", np.max(np.abs(S - S.T)), SBP_TOL * sS)
    put("s_nsd", np.max(np.linalg.eigvalsh(0.5 * (S + S.T))), NSD_TOL * sS)
    annihil = max(np.max(np.abs(S @ f)) for _, f, _ in _monomials(nodes, pair.degree))
    put("s_annihilates", annihil, EXACT_TOL * sS)
    sQ = max(sD, sS)
    put("qplus_qminus_skew", np.max(np.abs(pair.Qplus + pair.Qminus.T)), SBP_TOL * sQ)
    put("qplus_symmetric_part", np.max(np.abs(pair.Qplus + pair.Qplus.T - S)), SBP_TOL * sQ)
    sPS = max(sD, np.max(np.abs(PinvS)))
    put("d_difference", np.max(np.abs(pair.Dplus - pair.Dminus - PinvS)), SBP_TOL * sPS)
    put("round_trip", np.max(np.abs(0.5 * (pair.Dplus + pair.Dminus) - D)), SBP_TOL * sPS)
    upw = 0.0
    for _, f, df in _monomials(nodes, pair.degree):
        upw = max(upw, np.max(np.abs(pair.Dplus @ f - df)), np.max(np.abs(pair.Dminus @ f - df)))
    put("upwind_exactness", upw, EXACT_TOL * sPS)

    degree = -1
    for k in range(nodes.N):
        e = max(_exactness_error(pair.Dplus, nodes, k), _exactness_error(pair.Dminus, nodes, k))
        if e >= EXACTNESS_DEGREE_TOL * sPS:
            break
        degree = k
    return VerificationReport(res, tol, degree)


# ---------------------------------------------------------------------------
# JSON exchange


def pair_to_dict(pair: UsbpPair) -> dict:
    nodes = pair.nodes
    return {
        "family": nodes.family.value,
        "N": nodes.N,
        "degree": pair.degree,
        "base_degree": pair.base.degree,
        "interval": [nodes.x_left, nodes.x_right],
        "includes_boundary": nodes.includes_boundary,
        "nodes": nodes.nodes.tolist(),
        "weights": None if nodes.weights is None else nodes.weights.tolist(),
        "P": pair.P.tolist(),
        "Q": pair.base.Q.tolist(),
        "B": pair.B.tolist(),
        "S": pair.S.tolist(),
        "Dplus": pair.Dplus.tolist(),
        "Dminus": pair.Dminus.tolist(),
        "t_left": pair.base.t_left.tolist(),
        "t_right": pair.base.t_right.tolist(),
    }


def pair_from_dict(data: dict) -> UsbpPair:
    """Rebuild a pair from :func:`pair_to_dict` output.

    The central operator is recovered as ``P^{-1}(Q + B/2)``.
    """
    x_left, x_right = data.get("interval", [-1.0, 1.0])
    nodes = NodeSet(
        data["nodes"], data["weights"], bool(data.get("includes_boundary", True)),
        NodeFamily(data["family"]), float(x_left), float(x_right),
    )
    P = np.asarray(data["P"], dtype=float)
    Q = np.asarray(data["Q"], dtype=float)
    B = np.asarray(data["B"], dtype=float)
    N = nodes.N
    t_left = np.asarray(data.get("t_left", np.eye(N)[0]), dtype=float)
    t_right = np.asarray(data.get("t_right", np.eye(N)[-1]), dtype=float)
    D = np.linalg.solve(P, Q + 0.5 * B)
    base = SbpOperator(nodes, P, Q, B, D, int(data.get("base_degree", N - 1)), t_left, t_right)
    S = np.asarray(data["S"], dtype=float)
    return UsbpPair(
        base, S,
        np.asarray(data["Dplus"], dtype=float),
        np.asarray(data["Dminus"], dtype=float),
        Q + 0.5 * S, Q - 0.5 * S, int(data["degree"]),
    )


def save_pair(pair: UsbpPair, path) -> Path:
    """Write ``pair`` as JSON; floats use shortest round-trip repr."""
    path = Path(path)
    path.write_text(json.dumps(pair_to_dict(pair), indent=1) + "\n")
    return path


def load_pair(path) -> UsbpPair:
    return pair_from_dict(json.loads(Path(path).read_text()))
