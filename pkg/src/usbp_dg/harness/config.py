"""Experiment configuration: defaults, validation, file and flag merging."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from ..errors import ConfigError, InvalidArgument
from ..physics import parse_splitting_name


class Experiment(str, enum.Enum):
    CONVERGENCE_ADVECTION = "convergence-advection"
    CONVERGENCE_EULER = "convergence-euler"
    SPECTRUM = "spectrum"
    LOCAL_STABILITY = "local-stability"
    FREE_STREAM = "free-stream"
    ISENTROPIC_VORTEX = "isentropic-vortex"
    KELVIN_HELMHOLTZ = "kelvin-helmholtz"
    OPERATOR_DUMP = "operator-dump"


def _pow2(lo, hi):
    return [2**k for k in range(lo, hi + 1)]


# Per-experiment defaults. ``J`` counts elements in total: for the 2D
# experiments it must be a perfect square (``sqrt(J)`` per direction).
DEFAULTS = {
    Experiment.CONVERGENCE_ADVECTION: dict(
        N=[3], lam=[-1.0], splitting=["lf"], J=_pow2(1, 7), cfl=0.1, t_end=5.0),
    Experiment.CONVERGENCE_EULER: dict(
        N=[3], lam=[-1.0], splitting=["vlh"], J=_pow2(1, 7), cfl=0.1, t_end=2.0),
    Experiment.SPECTRUM: dict(
        N=[4], lam=[-1e-3, -1e-2, -1e-1, -1.0], splitting=["lf"], J=[16]),
    Experiment.LOCAL_STABILITY: dict(
        N=[3, 4, 5], lam=[0.0, -1e-2, -1.0], splitting=["upwind"], J=[2, 4, 8, 16], samples=10),
    Experiment.FREE_STREAM: dict(
        N=[3, 4, 5, 6], lam=[-1.0], splitting=["lf", "vlh"], J=[16], n_geo=[1, 2, 3, 4]),
    Experiment.ISENTROPIC_VORTEX: dict(
        N=[4], lam=[-1e-3], splitting=["vlh"], J=[256], cfl=0.5, t_end=10.0, baseline=True),
    Experiment.KELVIN_HELMHOLTZ: dict(
        N=[3], lam=[-1e-3, -1e-2, -1e-1], splitting=["vlh", "sw"], J=[16, 64], cfl=0.5,
        t_end=15.0, scheme="ssp33"),
    Experiment.OPERATOR_DUMP: dict(N=[4], lam=[-1.0], splitting=["lf"], J=[1]),
}

TWO_D = {Experiment.FREE_STREAM, Experiment.ISENTROPIC_VORTEX, Experiment.KELVIN_HELMHOLTZ}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to rerun an experiment.

    List-valued fields span a sweep: every combination is run. In JSON files
    and on the command line the dissipation value is spelled ``lambda``.
    """

    experiment: Experiment
    N: list = field(default_factory=list)
    lam: list = field(default_factory=list)
    splitting: list = field(default_factory=list)
    J: list = field(default_factory=list)
    cfl: float = 0.1
    t_end: float = 1.0
    seed: int = 0
    out: str | None = None
    scheme: str = "rk4"
    samples: int = 10
    n_geo: list = field(default_factory=lambda: [1])
    amplitude: float = 0.08
    mesh_length: float = 8.0
    baseline: bool = False
    parallel: bool = False

    def to_json(self) -> dict:
        d = asdict(self)
        d["experiment"] = self.experiment.value
        d["lambda"] = d.pop("lam")
        d.pop("parallel")
        return d

    @property
    def output_path(self) -> Path:
        if self.out is not None:
            return Path(self.out)
        suffix = ".json" if self.experiment is Experiment.OPERATOR_DUMP else ".csv"
        return Path(self.experiment.value + suffix)


_FIELD_NAMES = {f.name for f in fields(ExperimentConfig)}
_LIST_FIELDS = {"N", "lam", "splitting", "J", "n_geo"}


def _key(name: str) -> str:
    name = name.replace("-", "_")
    return "lam" if name == "lambda" else name


def _as_list(value):
    if isinstance(value, str):
        return [v for v in (s.strip() for s in value.split(",")) if v]
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _coerce(name, value):
    try:
        if name in ("N", "J", "n_geo"):
            out = []
            for v in _as_list(value):
                if isinstance(v, bool) or float(v) != int(float(v)):
                    raise ValueError(v)
                out.append(int(float(v)))
            return out
        if name == "lam":
            return [float(v) for v in _as_list(value)]
        if name == "splitting":
            return [str(v) for v in _as_list(value)]
        if name in ("cfl", "t_end", "amplitude", "mesh_length"):
            return float(value)
        if name in ("seed", "samples"):
            if isinstance(value, bool) or float(value) != int(float(value)):
                raise ValueError(value)
            return int(float(value))
        if name in ("baseline", "parallel"):
            if isinstance(value, str):
                if value.lower() not in ("1", "0", "true", "false", "yes", "no"):
                    raise ValueError(value)
                return value.lower() in ("1", "true", "yes")
            return bool(value)
        if name in ("out", "scheme"):
            return None if value is None else str(value)
        if name == "experiment":
            return Experiment(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value for {name!r}: {value!r}") from exc
    raise ConfigError(f"unknown field {name!r}")


def _validate(cfg: ExperimentConfig) -> ExperimentConfig:
    def bad(name, why):
        shown = "lambda" if name == "lam" else name
        raise ConfigError(f"invalid {shown!r}: {why}")

    for name in _LIST_FIELDS:
        if not getattr(cfg, name):
            bad(name, "must not be empty")
    if any(not 2 <= n <= 12 for n in cfg.N):
        bad("N", "nodes per element must lie in 2..12")
    if any(lam > 0 or not math.isfinite(lam) for lam in cfg.lam):
        bad("lam", "dissipation eigenvalues must be finite and <= 0")
    for name in cfg.splitting:
        try:
            parse_splitting_name(name)
        except InvalidArgument:
            bad("splitting", f"unknown splitting {name!r}")
    if any(j < 1 for j in cfg.J):
        bad("J", "element counts must be positive")
    if cfg.experiment in (Experiment.CONVERGENCE_ADVECTION, Experiment.CONVERGENCE_EULER):
        if any(b <= a for a, b in zip(cfg.J, cfg.J[1:])):
            bad("J", "must be strictly increasing for a convergence study")
    if cfg.experiment in TWO_D:
        for j in cfg.J:
            if math.isqrt(j) ** 2 != j:
                bad("J", f"2D element count {j} is not a perfect square")
    if not 0.0 < cfg.cfl <= 2.0:
        bad("cfl", "must lie in (0, 2]")
    if not cfg.t_end > 0:
        bad("t_end", "must be positive")
    if cfg.seed < 0:
        bad("seed", "must be nonnegative")
    if cfg.samples < 1:
        bad("samples", "must be positive")
    if cfg.scheme not in ("rk4", "ssp33"):
        bad("scheme", "must be 'rk4' or 'ssp33'")
    if any(g not in (1, 2, 3, 4) for g in cfg.n_geo):
        bad("n_geo", "geometry degrees must lie in 1..4")
    if not 0.0 <= cfg.amplitude < 0.2:
        bad("amplitude", "must lie in [0, 0.2)")
    if not cfg.mesh_length > 0:
        bad("mesh_length", "must be positive")
    return cfg


def make_config(experiment, **overrides) -> ExperimentConfig:
    """Defaults for ``experiment`` updated with ``overrides`` and validated."""
    exp = _coerce("experiment", experiment) if not isinstance(experiment, Experiment) else experiment
    values = dict(DEFAULTS[exp])
    for name, value in overrides.items():
        key = _key(name)
        if key not in _FIELD_NAMES or key == "experiment":
            raise ConfigError(f"unknown field {name!r}")
        if value is not None or key == "out":
            values[key] = value
    coerced = {k: _coerce(k, v) for k, v in values.items()}
    return _validate(ExperimentConfig(experiment=exp, **coerced))


def load_config(path=None, experiment=None, **flags) -> ExperimentConfig:
    """Read a JSON config file and let non-``None`` ``flags`` override it.

    The experiment comes from ``experiment`` or the file's ``experiment`` key.
    Unknown keys and out-of-range values raise :class:`ConfigError`.
    """
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    data = {_key(k): v for k, v in data.items()}
    for k in data:
        if k not in _FIELD_NAMES:
            raise ConfigError(f"unknown field {k!r}")
    exp = experiment if experiment is not None else data.pop("experiment", None)
    data.pop("experiment", None)
    if exp is None:
        raise ConfigError("no experiment given")
    for k, v in flags.items():
        if v is not None:
            data[_key(k)] = v
    return make_config(exp, **data)


def with_overrides(cfg: ExperimentConfig, **changes) -> ExperimentConfig:
    """Validated copy of ``cfg`` with some fields replaced."""
    coerced = {_key(k): _coerce(_key(k), v) for k, v in changes.items()}
    return _validate(replace(cfg, **coerced))
