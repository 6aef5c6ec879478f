"""Command-line entry point ``usbp-dg``.

Exit codes: 0 on success (recorded simulation crashes included), 2 for
usage and configuration errors, 3 for internal errors.
"""

from __future__ import annotations

import argparse
import sys
import traceback

from ..errors import ConfigError
from .config import Experiment, load_config
from .experiments import run

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INTERNAL = 3

# Options whose values may start with "-" (negative numbers in exponent
# form such as -1e-3, or comma lists like -1,-0.1).
_VALUE_OPTIONS = {"--lambda", "--N", "--J", "--splitting", "--n-geo", "--cfl", "--t-end",
                  "--seed", "--samples", "--amplitude", "--mesh-length"}


def _glue_values(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def build_parser() -> argparse.ArgumentParser:
    names = [e.value for e in Experiment]
    p = argparse.ArgumentParser(
        prog="usbp-dg",
        description="Run DG-USBP experiments and write CSV/JSON results.")
    p.add_argument("experiment_pos", nargs="?", metavar="experiment", choices=names,
                   help="one of: " + ", ".join(names))
    p.add_argument("--experiment", dest="experiment_opt", choices=names,
                   help="alternative to the positional experiment name")
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--N", help="nodes per element (comma list allowed)")
    p.add_argument("--lambda", dest="lam", help="top-mode dissipation eigenvalue(s), <= 0")
    p.add_argument("--splitting", help="lf, sw, vlh or upwind (comma list allowed)")
    p.add_argument("--J", help="element counts (comma list; total elements in 2D)")
    p.add_argument("--cfl", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output path")
    p.add_argument("--scheme", choices=["rk4", "ssp33"])
    p.add_argument("--samples", type=int, help="random states per combination (local-stability)")
    p.add_argument("--n-geo", dest="n_geo", help="geometry degrees (free-stream)")
    p.add_argument("--amplitude", type=float, help="mesh warping amplitude (free-stream)")
    p.add_argument("--mesh-length", dest="mesh_length", type=float,
                   help="side length of the warped mesh (free-stream)")
    p.add_argument("--baseline", action=argparse.BooleanOptionalAction, default=None,
                   help="also run the central baseline (isentropic-vortex)")
    p.add_argument("--parallel", action="store_true", default=None,
                   help="run independent combinations in worker processes")
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_values(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    experiment = args.experiment_pos or args.experiment_opt
    if args.experiment_pos and args.experiment_opt and args.experiment_pos != args.experiment_opt:
        parser.print_usage(sys.stderr)
        print("usbp-dg: error: conflicting experiment names", file=sys.stderr)
        return EXIT_USAGE
    flags = {k: getattr(args, k) for k in ("N", "lam", "splitting", "J", "cfl", "t_end", "seed",
                                           "out", "scheme", "samples", "n_geo", "amplitude",
                                           "mesh_length", "baseline", "parallel")}
    try:
        cfg = load_config(args.config, experiment=experiment, **flags)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"usbp-dg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        out = run(cfg)
    except ConfigError as exc:
        print(f"usbp-dg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL
    print(f"wrote {out.path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
