"""Command-line entry point: ropekit {gen,thickness,tighten,dubins,verify}."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from typing import List, Optional

from . import io as rio
from .curve import CurveError, make_circle, make_ellipse, make_helix, make_stadium, make_torus_knot
from .dubins import (
    DubinsError,
    integrate_helicoidal,
    is_coplanar,
    solve_clc_3d,
    solve_dubins_2d,
)
from .thickness import DEFAULT_TOL, ThicknessError, thickness
from .tighten import TightenConfig, TightenError, tighten, verify_contact_condition

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_COMPUTE = 3
EXIT_BUDGET = 4
EXIT_VERDICT = 5

FILE_COMMANDS = ("gen", "thickness", "tighten", "dubins")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    out: Optional[str] = None
    tol: float = DEFAULT_TOL
    seed: int = 0
    n: int = 256
    iters: int = TightenConfig.max_iter
    eps0: float = TightenConfig.eps0
    verdict_tol: float = 0.05
    oracle: bool = False
    pairs: Optional[str] = None
    trace: Optional[str] = None
    verdict: Optional[str] = None
    helical: Optional[List[float]] = None
    shape: Optional[str] = None
    shape_args: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command in FILE_COMMANDS and not self.out:
            raise ConfigError(f"{self.command}: --out is required")
        if self.command in ("thickness", "tighten") and not self.input:
            raise ConfigError(f"{self.command}: an input curve file is required")
        for name in ("tol", "eps0", "verdict_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"--{name.replace('_', '-')} must be positive")
        if self.n < 2:
            raise ConfigError("--n must be at least 2")
        if self.iters < 0:
            raise ConfigError("--iters must be nonnegative")

    def sibling(self, given: Optional[str], suffix: str) -> str:
        """Explicit path, or the output path with its extension replaced."""
        if given:
            return given
        stem, _ = os.path.splitext(self.out)
        return stem + suffix


def _fail(code: int, msg: str) -> int:
    print(f"ropekit: {msg}", file=sys.stderr)
    return code


def cmd_gen(cfg: RunConfig) -> int:
    a = cfg.shape_args
    if cfg.shape == "circle":
        curve = make_circle(cfg.n, radius=a["radius"])
    elif cfg.shape == "ellipse":
        curve = make_ellipse(cfg.n, a["a"], a["b"])
    elif cfg.shape == "stadium":
        curve = make_stadium(cfg.n, straight=a["straight"], radius=a["radius"])
    elif cfg.shape == "torus-knot":
        curve = make_torus_knot(a["p"], a["q"], R=a["R"], r=a["r"], n=cfg.n)
    else:
        curve = make_helix(cfg.n, a=a["a"], b=a["b"], turns=a["turns"])
    rio.atomic_write(cfg.out, rio.dumps(rio.curve_to_dict(curve)))
    return EXIT_OK


def cmd_thickness(cfg: RunConfig) -> int:
    curve = rio.load_curve(cfg.input)
    rep = thickness(curve, cfg.tol, oracles=cfg.oracle)
    rio.atomic_write_all({
        cfg.out: rio.dumps(rep.as_dict()),
        cfg.sibling(cfg.pairs, ".pairs.csv"): rio.pairs_csv(rep.minimal_pairs),
    })
    return EXIT_OK


def cmd_tighten(cfg: RunConfig) -> int:
    curve = rio.load_curve(cfg.input)
    tc = TightenConfig(max_iter=cfg.iters, eps0=cfg.eps0, seed=cfg.seed)
    final, trace = tighten(curve, tc)
    verdict = verify_contact_condition(final, tol_rel=cfg.verdict_tol, tol=cfg.tol)
    summary = verdict.as_dict()
    summary.update({"converged": trace.converged, "budget": trace.budget, "iterations": trace.records[-1].iter,
                    "initial_ropelength": trace.records[0].ropelength,
                    "final_ropelength": trace.records[-1].ropelength})
    rio.atomic_write_all({
        cfg.out: rio.dumps(rio.curve_to_dict(final)),
        cfg.sibling(cfg.trace, ".trace.csv"): trace.to_csv(),
        cfg.sibling(cfg.verdict, ".verdict.json"): rio.dumps(summary),
    })
    if trace.budget:
        return EXIT_BUDGET
    return EXIT_OK if verdict.passed else EXIT_VERDICT


def cmd_dubins(cfg: RunConfig) -> int:
    if cfg.helical is not None:
        zeta, tau0, dtau0, span = cfg.helical
        arc = integrate_helicoidal(zeta, tau0, dtau0, span, cfg.n)
        out = rio.curve_to_dict(arc.curve)
        out.update({"zeta": zeta, "tau0": tau0, "dtau0": dtau0, "span": span, "tau": arc.tau.tolist()})
        rio.atomic_write(cfg.out, rio.dumps(out))
        return EXIT_OK
    if not cfg.input:
        raise ConfigError("dubins: a boundary file is required unless --helical is given")
    bd = rio.boundary_from_dict(rio.read_json(cfg.input))
    if is_coplanar(bd):
        path, solver = solve_dubins_2d(bd), "planar"
    else:
        path, solver = solve_clc_3d(bd), "clc3d"
    out = path.as_dict()
    out["solver"] = solver
    rio.atomic_write(cfg.out, rio.dumps(out))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from .acceptance import run_all

    results = run_all(sys.stdout)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERDICT


COMMANDS = {"gen": cmd_gen, "thickness": cmd_thickness, "tighten": cmd_tighten, "dubins": cmd_dubins,
            "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ropekit", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a fixture curve")
    g.add_argument("shape", choices=["circle", "ellipse", "stadium", "torus-knot", "helix"])
    g.add_argument("--n", type=int, default=256)
    g.add_argument("--out", required=True)
    g.add_argument("--radius", type=float, default=1.0, help="circle radius or stadium cap radius")
    g.add_argument("--a", type=float, default=None, help="ellipse semi-axis (2) or helix radius (0.5)")
    g.add_argument("--b", type=float, default=None, help="ellipse semi-axis (1) or helix pitch/2pi (0.5)")
    g.add_argument("--straight", type=float, default=2.0, help="stadium straight length")
    g.add_argument("--p", type=int, default=2)
    g.add_argument("--q", type=int, default=3)
    g.add_argument("--R", type=float, default=2.0, help="torus major radius")
    g.add_argument("--r", type=float, default=1.0, help="torus minor radius")
    g.add_argument("--turns", type=float, default=2.0)

    t = sub.add_parser("thickness", help="thickness report of a curve")
    t.add_argument("input")
    t.add_argument("--out", required=True)
    t.add_argument("--pairs", help="minimal pairs CSV (default: <out stem>.pairs.csv)")
    t.add_argument("--tol", type=float, default=DEFAULT_TOL)
    t.add_argument("--oracle", action="store_true", help="also compute R_O, rho_G and F_g")

    d = sub.add_parser("tighten", help="reduce ropelength and check the minimizer condition")
    d.add_argument("input")
    d.add_argument("--out", required=True)
    d.add_argument("--trace", help="trace CSV (default: <out stem>.trace.csv)")
    d.add_argument("--verdict", help="verdict JSON (default: <out stem>.verdict.json)")
    d.add_argument("--iters", type=int, default=TightenConfig.max_iter)
    d.add_argument("--eps0", type=float, default=TightenConfig.eps0)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--tol", type=float, default=DEFAULT_TOL)
    d.add_argument("--verdict-tol", type=float, default=0.05)

    b = sub.add_parser("dubins", help="shortest unit-curvature path between two poses")
    b.add_argument("input", nargs="?", help='boundary JSON {"p","v","q","w"}')
    b.add_argument("--out", required=True)
    b.add_argument("--helical", type=float, nargs=4, metavar=("ZETA", "TAU0", "DTAU0", "SPAN"),
                   help="emit a helicoidal arc instead of solving a boundary problem")
    b.add_argument("--n", type=int, default=256, help="samples for --helical")

    sub.add_parser("verify", help="run the acceptance suite")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    kw = {"command": ns.command}
    for name in ("input", "out", "tol", "seed", "n", "iters", "eps0", "verdict_tol", "oracle", "pairs", "trace",
                 "verdict", "helical"):
        if hasattr(ns, name):
            kw[name] = getattr(ns, name)
    if ns.command == "gen":
        kw["shape"] = ns.shape
        ellipse = ns.shape == "ellipse"
        kw["shape_args"] = {
            "radius": ns.radius, "straight": ns.straight, "p": ns.p, "q": ns.q, "R": ns.R, "r": ns.r,
            "turns": ns.turns,
            "a": ns.a if ns.a is not None else (2.0 if ellipse else 0.5),
            "b": ns.b if ns.b is not None else (1.0 if ellipse else 0.5),
        }
    return RunConfig(**kw)


def main(argv: Optional[List[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, rio.FormatError, CurveError) as e:
        return _fail(EXIT_INPUT, str(e))
    except (ThicknessError, TightenError, DubinsError, ValueError, ArithmeticError) as e:
        return _fail(EXIT_COMPUTE, str(e))


if __name__ == "__main__":
    sys.exit(main())
