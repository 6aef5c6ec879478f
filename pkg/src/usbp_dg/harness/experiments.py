"""Experiment runners producing CSV tables and JSON operator bundles.

Each experiment expands its config into independent combinations, runs
them (optionally in worker processes) and writes one CSV whose first line
is ``# `` followed by a JSON header with the config, seed and version.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import __version__
from ..analysis import assemble_linear_operator, eigenvalues, eoc_table, jacobian_fd, l2_error_P
from ..errors import ConfigError
from ..operators import lgl_usbp, pair_from_dict, pair_to_dict
from ..physics import (
    Euler1D,
    Euler2D,
    SplittingName,
    advection_splitting,
    burgers_full_upwind,
    free_stream,
    isentropic_vortex,
    kelvin_helmholtz,
    lax_friedrichs_bound,
    make_splitting,
    manufactured_euler_exact,
    manufactured_euler_source,
    parse_splitting_name,
    random_nonnegative,
)
from ..semidisc import DG1D, DG2D, CartesianMesh2D, Mesh1D, build_warped_mesh
from ..timeint import IntegratorConfig, integrate
from .config import Experiment, ExperimentConfig

VORTEX_BOX = (-5.0, 5.0)


@dataclass
class RunOutput:
    path: Path
    columns: list
    rows: list


def header(cfg: ExperimentConfig) -> dict:
    return {"artifact": "usbp_dg", "version": __version__, "seed": cfg.seed,
            "config": cfg.to_json()}


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return str(v)


def format_csv(cfg: ExperimentConfig, columns, rows) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(header(cfg), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def read_csv(path):
    """Header dict and rows (as string dicts) of a file written by :func:`run`."""
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("# "):
        raise ValueError(f"{path} has no header line")
    meta = json.loads(text[0][2:])
    rows = list(csv.DictReader(text[1:]))
    return meta, rows


def _side(J):
    return math.isqrt(J)


def _splitting_key(name):
    return parse_splitting_name(name).value


# ---------------------------------------------------------------------------
# Combination runners (module level so worker processes can import them)


def _convergence_advection(cfg, N, lam, splitting):
    if parse_splitting_name(splitting) is not SplittingName.LAX_FRIEDRICHS:
        raise ConfigError("advection uses the Lax-Friedrichs splitting")
    pair = lgl_usbp(N, lam)
    errs, norm_errs, steps = [], [], []
    for J in cfg.J:
        sd = DG1D(pair, Mesh1D(J, -1.0, 1.0), advection_splitting(1.0))
        u0 = np.sin(np.pi * sd.x)[None]
        res = integrate(sd, u0, IntegratorConfig(scheme=cfg.scheme, cfl=cfg.cfl, t_end=cfg.t_end))
        exact = np.sin(np.pi * (sd.x - cfg.t_end))[None]
        errs.append(l2_error_P(res.u, exact, sd))
        norm_errs.append(l2_error_P(res.u, exact, sd, normalized=True))
        steps.append(res.steps)
    return _convergence_rows(N, lam, splitting, cfg.J, errs, norm_errs, steps)


def _convergence_euler(cfg, N, lam, splitting):
    pair = lgl_usbp(N, lam)
    law = Euler1D()
    errs, norm_errs, steps = [], [], []
    for J in cfg.J:
        mesh = Mesh1D(J, 0.0, 2.0)
        x = mesh.coordinates(pair.nodes.nodes)
        u0 = manufactured_euler_exact(0.0, x)
        lam_max = lax_friedrichs_bound(u0, law) if _is_lf(splitting) else None
        sd = DG1D(pair, mesh, make_splitting(splitting, law, lam_max),
                  source=manufactured_euler_source)
        res = integrate(sd, u0, IntegratorConfig(scheme=cfg.scheme, cfl=cfg.cfl, t_end=cfg.t_end))
        if res.crashed:
            raise RuntimeError(f"manufactured solution run crashed at J={J}: {res.abort}")
        exact = manufactured_euler_exact(cfg.t_end, sd.x)
        errs.append(l2_error_P(res.u, exact, sd))
        norm_errs.append(l2_error_P(res.u, exact, sd, normalized=True))
        steps.append(res.steps)
    return _convergence_rows(N, lam, splitting, cfg.J, errs, norm_errs, steps)


def _convergence_rows(N, lam, splitting, Js, errs, norm_errs, steps):
    rows = []
    for r, e_norm, n in zip(eoc_table(Js, errs), norm_errs, steps):
        rows.append({"N": N, "lambda": lam, "splitting": _splitting_key(splitting), "J": r.J,
                     "l2_error": r.l2_error, "l2_error_normalized": e_norm, "eoc": r.eoc,
                     "steps": n})
    return rows


def _is_lf(name):
    return parse_splitting_name(name) is SplittingName.LAX_FRIEDRICHS


def _spectrum(cfg, N, lam, J):
    sd = DG1D(lgl_usbp(N, lam), Mesh1D(J, -1.0, 1.0), advection_splitting(1.0))
    rep = eigenvalues(assemble_linear_operator(sd))
    order = np.lexsort((rep.eigenvalues.imag, rep.eigenvalues.real))
    base = {"N": N, "lambda": lam, "J": J, "max_real_part": rep.max_real_part,
            "spectral_radius": rep.spectral_radius, "norm2": rep.norm2}
    return [dict(base, re=float(z.real), im=float(z.imag)) for z in rep.eigenvalues[order]]


def local_stability_state(shape, seed, N, J, sample):
    """Reproducible random Burgers state for one sample of the sweep."""
    rng = np.random.default_rng([seed, N, J, sample])
    return random_nonnegative(shape, rng)


def _local_stability(cfg, N, lam, J):
    sd = DG1D(lgl_usbp(N, lam), Mesh1D(J, -1.0, 1.0), burgers_full_upwind())
    rows = []
    for k in range(cfg.samples):
        u = local_stability_state(sd.x.shape, cfg.seed, N, J, k)
        rep = eigenvalues(jacobian_fd(sd, u))
        rows.append({"N": N, "lambda": lam, "J": J, "sample": k,
                     "max_real_part": rep.max_real_part, "norm2": rep.norm2,
                     "relative_max_real_part": rep.relative_max_real_part})
    return rows


def free_stream_residual(N, lam, n_geo, splitting, J, amplitude, length):
    """Max-norm of the right-hand side for the free stream on a warped mesh."""
    pair = lgl_usbp(N, lam)
    side = _side(J)
    mesh = build_warped_mesh(side, side, n_geo, amplitude, pair.base, length=length)
    law = Euler2D()
    u = free_stream(mesh.X.shape)
    lam_max = lax_friedrichs_bound(u, law) if _is_lf(splitting) else None
    sd = DG2D(pair, mesh, make_splitting(splitting, law, lam_max), boundary="dirichlet",
              exterior=lambda t, X, Y: free_stream(np.shape(X)))
    return float(np.max(np.abs(sd.rhs(u))))


def _free_stream(cfg, N, lam, n_geo, splitting, J):
    res = free_stream_residual(N, lam, n_geo, splitting, J, cfg.amplitude, cfg.mesh_length)
    return [{"N": N, "lambda": lam, "n_geo": n_geo, "degree": lgl_usbp(N, lam).degree,
             "splitting": _splitting_key(splitting), "J": J, "rhs_max": res}]


def _run_2d(cfg, sd, u0, exact=None):
    res = integrate(sd, u0, IntegratorConfig(scheme=cfg.scheme, cfl=cfg.cfl, t_end=cfg.t_end))
    row = {"status": "crashed" if res.crashed else "finished",
           "final_time": res.final_time, "steps": res.steps}
    if res.crashed:
        a = res.abort
        row.update(quantity=a.quantity, element="/".join(map(str, a.element)),
                   node="/".join(map(str, a.node)))
    elif exact is not None:
        row["density_l2"] = l2_error_P(res.u, exact, sd, variables=0)
    return row


def _vortex(cfg, N, lam, splitting, J, scheme="usbp"):
    side = _side(J)
    mesh = CartesianMesh2D(side, side, VORTEX_BOX, VORTEX_BOX)
    law = Euler2D()
    pair = lgl_usbp(N, lam)
    X, Y = mesh.coordinates(pair.nodes.nodes)
    u0 = isentropic_vortex(X, Y)
    if scheme == "central":
        sd = DG2D(pair, mesh, scheme="central", law=law)
    else:
        lam_max = lax_friedrichs_bound(u0, law) if _is_lf(splitting) else None
        sd = DG2D(pair, mesh, make_splitting(splitting, law, lam_max))
    row = _run_2d(cfg, sd, u0, isentropic_vortex(X, Y, cfg.t_end))
    split_name = "rusanov" if scheme == "central" else _splitting_key(splitting)
    return [dict(row, N=N, J=J, scheme=scheme, splitting=split_name,
                 **{"lambda": lam if scheme != "central" else None})]


def _kelvin_helmholtz(cfg, N, lam, splitting, J):
    side = _side(J)
    law = Euler2D()
    pair = lgl_usbp(N, lam)
    mesh = CartesianMesh2D(side, side)
    X, Y = mesh.coordinates(pair.nodes.nodes)
    u0 = kelvin_helmholtz(X, Y)
    lam_max = lax_friedrichs_bound(u0, law) if _is_lf(splitting) else None
    sd = DG2D(pair, mesh, make_splitting(splitting, law, lam_max))
    row = _run_2d(cfg, sd, u0)
    return [dict(row, N=N, J=J, splitting=_splitting_key(splitting), **{"lambda": lam})]


_CONV_COLS = ["N", "lambda", "splitting", "J", "l2_error", "l2_error_normalized", "eoc", "steps"]
_TWO_D_COLS = ["status", "final_time", "steps", "quantity", "element", "node"]

TABLES = {
    Experiment.CONVERGENCE_ADVECTION: (
        _convergence_advection, lambda c: itertools.product(c.N, c.lam, c.splitting), _CONV_COLS),
    Experiment.CONVERGENCE_EULER: (
        _convergence_euler, lambda c: itertools.product(c.N, c.lam, c.splitting), _CONV_COLS),
    Experiment.SPECTRUM: (
        _spectrum, lambda c: itertools.product(c.N, c.lam, c.J),
        ["N", "lambda", "J", "max_real_part", "spectral_radius", "norm2", "re", "im"]),
    Experiment.LOCAL_STABILITY: (
        _local_stability, lambda c: itertools.product(c.N, c.lam, c.J),
        ["N", "lambda", "J", "sample", "max_real_part", "norm2", "relative_max_real_part"]),
    Experiment.FREE_STREAM: (
        _free_stream, lambda c: itertools.product(c.N, c.lam, c.n_geo, c.splitting, c.J),
        ["N", "lambda", "n_geo", "degree", "splitting", "J", "rhs_max"]),
    Experiment.ISENTROPIC_VORTEX: (
        _vortex, lambda c: _vortex_combos(c),
        ["N", "lambda", "splitting", "scheme", "J"] + _TWO_D_COLS + ["density_l2"]),
    Experiment.KELVIN_HELMHOLTZ: (
        _kelvin_helmholtz, lambda c: itertools.product(c.N, c.lam, c.splitting, c.J),
        ["N", "J", "lambda", "splitting"] + _TWO_D_COLS),
}


def _vortex_combos(cfg):
    combos = [c + ("usbp",) for c in itertools.product(cfg.N, cfg.lam, cfg.splitting, cfg.J)]
    if cfg.baseline:
        combos += [(N, 0.0, cfg.splitting[0], J, "central")
                   for N, J in itertools.product(cfg.N, cfg.J)]
    return combos


def _task(args):
    fn, cfg, combo = args
    return fn(cfg, *combo)


def collect_rows(cfg: ExperimentConfig) -> tuple:
    """Run every combination of ``cfg`` and return ``(columns, rows)``."""
    fn, combos, columns = TABLES[cfg.experiment]
    tasks = [(fn, cfg, combo) for combo in combos(cfg)]
    if cfg.parallel and len(tasks) > 1:
        with ProcessPoolExecutor() as pool:
            chunks = list(pool.map(_task, tasks))
    else:
        chunks = [_task(t) for t in tasks]
    return columns, [row for chunk in chunks for row in chunk]


def operator_bundle(cfg: ExperimentConfig) -> dict:
    return {"header": header(cfg),
            "operators": [pair_to_dict(lgl_usbp(N, lam))
                          for N, lam in itertools.product(cfg.N, cfg.lam)]}


def load_operator_bundle(path) -> list:
    """Pairs stored by the ``operator-dump`` experiment."""
    data = json.loads(Path(path).read_text())
    return [pair_from_dict(d) for d in data["operators"]]


def run(cfg: ExperimentConfig) -> RunOutput:
    """Execute ``cfg`` and write its output file."""
    path = cfg.output_path
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    if cfg.experiment is Experiment.OPERATOR_DUMP:
        bundle = operator_bundle(cfg)
        path.write_text(json.dumps(bundle, indent=1, sort_keys=True) + "\n")
        return RunOutput(path, [], bundle["operators"])
    columns, rows = collect_rows(cfg)
    path.write_text(format_csv(cfg, columns, rows))
    return RunOutput(path, columns, rows)
