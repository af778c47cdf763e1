"""Command-line front end.

Commands: actions, locus, spectrum, monodromy, dynamics, operators verify,
plot spectrum.  Exit codes: 0 success, 2 invalid input or region, 3 numerical
failure.  All numeric output uses 17 significant digits so files round-trip
doubles exactly and reruns are byte-identical.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import actions as act
from . import dynamics as dyn
from . import monodromy as mon
from . import operators as ops
from . import spectrum as spec
from .cubic import EnergyMomentum, classify, sample_locus
from .errors import (
    ConvergenceError,
    DomainError,
    EventError,
    LatticeAmbiguous,
    LoopInvalid,
    NotInRange,
    QuadratureError,
    RefinementLimit,
    SphPendError,
    StepError,
)
from .svgplot import render_spectrum_svg

_INPUT_ERRORS = (NotInRange, DomainError, LoopInvalid, ValueError)
_NUMERIC_ERRORS = (
    QuadratureError,
    ConvergenceError,
    RefinementLimit,
    LatticeAmbiguous,
    EventError,
    StepError,
)

DEFAULTS = {
    "hbar": 0.1,
    "tol_quad": act.QUAD_TOL,
    "tol_root": 1e-12,
    "format": "json",
}


@dataclass(frozen=True)
class RunConfig:
    hbar: float = 0.1
    tol_quad: float = act.QUAD_TOL
    tol_root: float = 1e-12
    output_format: str = "json"
    output_path: str | None = None

    def __post_init__(self):
        if self.hbar <= 0.0:
            raise DomainError("hbar must be positive")
        if self.tol_quad <= 0.0 or self.tol_root <= 0.0:
            raise DomainError("tolerances must be positive")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            hbar=_resolve(args, "hbar"),
            tol_quad=_resolve(args, "tol_quad"),
            tol_root=_resolve(args, "tol_root"),
            output_format=_resolve(args, "format", str),
            output_path=getattr(args, "out", None),
        )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _dump_json(obj) -> str:
    return spec.json_dumps_17(obj)


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _load_config(path) -> dict:
    """Flat key=value file; '#' starts a comment."""
    settings = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"config line without '=': {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            settings[key.replace("-", "_")] = value
    return settings


def _resolve(args, key, cast=float):
    """Flag > config file > default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    cfg = getattr(args, "_config", {})
    if key in cfg:
        return cast(cfg[key])
    return DEFAULTS[key]


def _add_common(parser):
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--hbar", type=float, default=None)
    parser.add_argument("--tol-quad", dest="tol_quad", type=float, default=None)
    parser.add_argument("--tol-root", dest="tol_root", type=float, default=None)
    parser.add_argument("--out", dest="out", default=None)
    parser.add_argument(
        "--format", dest="format", choices=["json", "csv", "svg"], default=None
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphpend",
        description="Actions, joint spectrum and monodromy of the spherical pendulum",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("actions", help="integrals at one (h, l) point")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--json", action="store_true", help="force JSON output")
    _add_common(p)

    p = sub.add_parser("locus", help="sample the boundary curves")
    p.add_argument("--count", type=int, default=200)
    _add_common(p)

    p = sub.add_parser("spectrum", help="joint spectrum for a window")
    p.add_argument("--n-max", dest="n_max", type=int, default=10)
    p.add_argument("--m-max", dest="m_max", type=int, default=10)
    _add_common(p)

    p = sub.add_parser("monodromy", help="monodromy matrix along a loop")
    p.add_argument("--method", choices=["analytic", "spectral"], default="analytic")
    p.add_argument("--loop", help="JSON file with a list of [h, l] vertices")
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.add_argument("--m-max", dest="m_max", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("dynamics", help="integrate and measure one torus")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--duration", type=float, default=10.0)
    p.add_argument("--step", type=float, default=1e-3)
    _add_common(p)

    p = sub.add_parser("operators", help="operator algebra utilities")
    opsub = p.add_subparsers(dest="subcommand", required=True)
    pv = opsub.add_parser("verify", help="check the commutation relations")
    pv.add_argument("--n-max", dest="n_max", type=int, default=20)
    pv.add_argument("--m-max", dest="m_max", type=int, default=20)
    _add_common(pv)

    p = sub.add_parser("plot", help="figure outputs")
    plotsub = p.add_subparsers(dest="subcommand", required=True)
    pp = plotsub.add_parser("spectrum", help="SVG scatter of the joint spectrum")
    pp.add_argument("--n-max", dest="n_max", type=int, default=10)
    pp.add_argument("--m-max", dest="m_max", type=int, default=10)
    _add_common(pp)

    return parser


def _cmd_actions(args) -> int:
    cfg = RunConfig.from_args(args)
    em = EnergyMomentum(args.h, args.l)
    kind = classify(em)
    tol = cfg.tol_quad
    a1 = act.action_a1(em, tol=tol)  # NotInRange propagates -> exit 2
    # period and I diverge at the pinch point; report null there
    try:
        t_tilde = act.period(em, tol=tol)
        i_value = act.integral_i(em, tol=tol)
    except QuadratureError:
        t_tilde = i_value = None
    try:
        theta = act.rotation_number(em, tol=tol)
    except NotInRange:
        theta = None
    record = {
        "h": args.h,
        "l": args.l,
        "stratum": kind.value,
        "t_tilde": t_tilde,
        "theta_tilde": (
            {"branch_cut": True, "limit_pos": theta.limit_pos, "limit_neg": theta.limit_neg}
            if isinstance(theta, act.BranchCutMarker)
            else theta
        ),
        "a1": a1,
        "i_value": i_value,
    }
    if args.json or cfg.output_format == "json":
        _emit(_dump_json(record), cfg.output_path)
    else:
        lines = [f"{k} = {v}" for k, v in record.items()]
        _emit("\n".join(lines) + "\n", cfg.output_path)
    return 0


def _cmd_locus(args) -> int:
    pts = sample_locus(args.count)
    fmt = _resolve(args, "format", str)
    if fmt == "csv":
        rows = ["s,sign,h,l"]
        rows += [f"{_fmt(p.s)},{p.sign},{_fmt(p.h)},{_fmt(p.l)}" for p in pts]
        _emit("\n".join(rows) + "\n", args.out)
    else:
        _emit(
            _dump_json(
                [{"s": p.s, "sign": p.sign, "h": p.h, "l": p.l} for p in pts]
            ),
            args.out,
        )
    return 0


def _cmd_spectrum(args) -> int:
    cfg = RunConfig.from_args(args)
    failures = []
    points = []
    for m in range(-args.m_max, args.m_max + 1):
        for n in range(args.n_max + 1):
            try:
                points.append(
                    spec.solve_energy(n, m, cfg.hbar, cfg.tol_root, cfg.tol_quad)
                )
            except SphPendError as exc:
                failures.append((n, m, exc))
    for n, m, exc in failures:
        print(f"warning: (n={n}, m={m}) skipped: {exc}", file=sys.stderr)
    text = spec.to_csv(points) if cfg.output_format == "csv" else spec.to_json(points)
    _emit(text, cfg.output_path)
    if any(not isinstance(exc, spec.PinchCollision) for _, _, exc in failures):
        return 3
    return 0


def _spectral_window(hbar: float, loop) -> tuple[int, int]:
    h_max = max(v.h for v in loop.vertices)
    l_max = max(abs(v.l) for v in loop.vertices)
    a_max = act.action_a1(EnergyMomentum(h_max, 0.0))
    return int(math.ceil(a_max / hbar)) + 3, int(math.ceil(l_max / hbar)) + 3


def _cmd_monodromy(args) -> int:
    cfg = RunConfig.from_args(args)
    hbar = cfg.hbar
    if args.loop:
        with open(args.loop) as fh:
            vertices = json.load(fh)
        loop = mon.make_loop(vertices)
    else:
        loop = mon.default_loop(hbar)
    if loop.winding == 0:
        print("warning: trivial loop (winding 0)", file=sys.stderr)
    if args.method == "analytic":
        result = mon.monodromy_analytic(loop)
    else:
        n_max, m_max = args.n_max, args.m_max
        if n_max is None or m_max is None:
            n_auto, m_auto = _spectral_window(hbar, loop)
            n_max = n_max if n_max is not None else n_auto
            m_max = m_max if m_max is not None else m_auto
        spectrum = spec.build_spectrum(hbar, n_max, m_max, cfg.tol_root, cfg.tol_quad)
        result = mon.monodromy_spectral(spectrum, loop)
    _emit(_dump_json(mon.report_json(result)), cfg.output_path)
    return 0


def _cmd_dynamics(args) -> int:
    em = EnergyMomentum(args.h, args.l)
    ret = dyn.measure_first_return(em, step=args.step)
    traj = dyn.integrate_full(dyn.seed_on_torus(em), args.duration, args.step)
    h_drift = float(np.abs(dyn.energy(traj) - args.h).max())
    l_drift = float(np.abs(dyn.angular_momentum(traj) - args.l).max())
    r_qq, r_qp = dyn.constraint_residuals(traj)
    record = {
        "h": args.h,
        "l": args.l,
        "t_period": ret.t_period,
        "theta_angle": ret.theta_angle,
        "t_tilde_measured": ret.t_period / (2.0 * math.pi),
        "theta_tilde_measured": ret.theta_angle / (2.0 * math.pi),
        "drift": {
            "energy": h_drift,
            "angular_momentum": l_drift,
            "unit_sphere": float(np.abs(r_qq).max()),
            "tangency": float(np.abs(r_qp).max()),
        },
    }
    _emit(_dump_json(record), args.out)
    return 0


def _cmd_operators_verify(args) -> int:
    cfg = RunConfig.from_args(args)
    violations = ops.verify_relations(cfg.hbar, args.n_max, args.m_max)
    record = {
        "hbar": cfg.hbar,
        "window": {"n_max": args.n_max, "m_max": args.m_max},
        "violations": violations,
        "ok": not violations,
    }
    _emit(_dump_json(record), cfg.output_path)
    return 0 if not violations else 3


def _cmd_plot_spectrum(args) -> int:
    cfg = RunConfig.from_args(args)
    points = spec.build_spectrum(cfg.hbar, args.n_max, args.m_max, cfg.tol_root, cfg.tol_quad)
    _emit(render_spectrum_svg(points), cfg.output_path)
    return 0


_HANDLERS = {
    "actions": _cmd_actions,
    "locus": _cmd_locus,
    "spectrum": _cmd_spectrum,
    "monodromy": _cmd_monodromy,
    "dynamics": _cmd_dynamics,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._config = _load_config(args.config) if getattr(args, "config", None) else {}
    try:
        if args.command == "operators":
            return _cmd_operators_verify(args)
        if args.command == "plot":
            return _cmd_plot_spectrum(args)
        return _HANDLERS[args.command](args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
