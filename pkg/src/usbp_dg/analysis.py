"""Error norms, convergence rates, operator assembly and spectra."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument


def l2_error_P(numerical, exact, semidisc, variables=None, normalized=False) -> float:
    """Discrete L2 error in the quadrature of the norm matrix.

    ``sqrt(sum_j (h_j / 2) e_j^T P e_j)`` summed over the selected conserved
    variables (all by default). ``semidisc`` supplies the mesh and ``P``.
    With ``normalized`` the squared error is divided by the domain measure,
    i.e. a root-mean-square error.
    """
    numerical = np.asarray(numerical, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if numerical.shape != exact.shape:
        raise InvalidArgument(f"shape mismatch {numerical.shape} vs {exact.shape}")
    e = numerical - exact
    if variables is not None:
        e = e[list(np.atleast_1d(variables))]
    sq = max(float(np.sum(semidisc.norm_squared(e))), 0.0)
    if normalized:
        sq /= semidisc.volume
    return math.sqrt(sq)


@dataclass(frozen=True)
class ConvergenceRow:
    J: int
    l2_error: float
    eoc: float | None = None


def eoc_table(Js, errors) -> list:
    """Rows with ``eoc = log(e_prev / e) / log(J / J_prev)``."""
    Js = [int(j) for j in Js]
    errors = [float(e) for e in errors]
    if len(Js) != len(errors):
        raise InvalidArgument("J list and error list differ in length")
    if any(not e > 0 for e in errors):
        raise InvalidArgument("errors must be positive")
    if any(b <= a for a, b in zip(Js, Js[1:])):
        raise InvalidArgument("J sequence must be strictly increasing")
    rows = []
    for i, (J, e) in enumerate(zip(Js, errors)):
        eoc = None
        if i:
            eoc = math.log(errors[i - 1] / e) / math.log(J / Js[i - 1])
        rows.append(ConvergenceRow(J, e, eoc))
    return rows


def assemble_linear_operator(semidisc, t=0.0) -> np.ndarray:
    """Matrix ``A`` with ``rhs(u) = A u``, probed one unit vector at a time."""
    if not semidisc.is_linear:
        raise InvalidArgument("operator assembly needs a linear semi-discretisation")
    shape = semidisc.state_shape
    n = int(np.prod(shape))
    A = np.empty((n, n))
    e = np.zeros(n)
    for k in range(n):
        e[k] = 1.0
        A[:, k] = semidisc.rhs(e.reshape(shape), t).reshape(-1)
        e[k] = 0.0
    return A


def jacobian_fd(semidisc, u, step=1e-4, t=0.0) -> np.ndarray:
    """Central-difference Jacobian of ``rhs`` at ``u``.

    Exact up to rounding when the right-hand side is at most quadratic.
    """
    if not step > 0:
        raise InvalidArgument("step must be positive")
    u = np.asarray(u, dtype=float)
    shape = u.shape
    flat = u.reshape(-1)
    n = flat.size
    A = np.empty((n, n))
    for k in range(n):
        up = flat.copy()
        um = flat.copy()
        up[k] += step
        um[k] -= step
        fp = semidisc.rhs(up.reshape(shape), t).reshape(-1)
        fm = semidisc.rhs(um.reshape(shape), t).reshape(-1)
        A[:, k] = (fp - fm) / (2.0 * step)
    return A


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    max_real_part: float
    spectral_radius: float
    norm2: float

    @property
    def relative_max_real_part(self) -> float:
        return self.max_real_part / self.norm2 if self.norm2 > 0 else self.max_real_part


def eigenvalues(A) -> SpectrumReport:
    """Full spectrum of a dense square matrix."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgument("expected a square matrix")
    try:
        lam = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigensolver failed: {exc}") from exc
    return SpectrumReport(
        eigenvalues=lam,
        max_real_part=float(np.max(lam.real)),
        spectral_radius=float(np.max(np.abs(lam))),
        norm2=float(np.linalg.norm(A, 2)),
    )


def write_spectrum_csv(path, report: SpectrumReport, header=None):
    with open(path, "w", newline="") as fh:
        if header:
            fh.write(header)
        w = csv.writer(fh)
        w.writerow(["re", "im"])
        for z in report.eigenvalues:
            w.writerow([repr(float(z.real)), repr(float(z.imag))])
