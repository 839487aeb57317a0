"""Command-line front end.

Exit codes: 0 success / well-posed, 1 usage or configuration error,
2 ill-posed verdict or a physics refusal.
"""

from __future__ import annotations

import argparse
import io
import itertools
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .classical import TrajectoryState, integrate
from .config import ConfigError, RunConfig, expand_range, load_config
from .core import FieldConfig, ParticleParams, channel_coefficient, reduce, well_posedness
from .phase import LoopPath, PathError, loop_holonomy, winding_phase
from .radial import (
    LINEAR,
    LOGARITHMIC,
    RadialProblem,
    dirichlet_spectrum,
    regularized_bound_spectrum,
)

EXIT_OK, EXIT_USAGE, EXIT_ILL_POSED = 0, 1, 2


class UsageError(Exception):
    pass


class Refusal(Exception):
    """Physics refusal; maps to exit code 2."""


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return ";".join(fmt(v) for v in value)
    return str(value)


def to_json(value, indent: int = 0) -> str:
    """JSON with floats written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f'{pad}"{k}": {to_json(v, indent + 1)}' for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        return "[" + ", ".join(to_json(v, indent + 1) for v in value) + "]"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if value is None:
        return "null"
    if isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return "null"
    return fmt(value)


class Table:
    def __init__(self, columns, rows, trailer=None, record=None):
        self.columns = list(columns)
        self.rows = rows
        self.trailer = trailer or {}
        self.record = record

    def render(self, fmt_name: str) -> str:
        if fmt_name == "json" and self.record is not None:
            return to_json(self.record) + "\n"
        if fmt_name == "json":
            body = {"columns": self.columns, "rows": [list(r) for r in self.rows]}
            body.update(self.trailer)
            return to_json(body) + "\n"
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(fmt(v) for v in row) + "\n")
        for key, value in self.trailer.items():
            buf.write(f"# {key}={fmt(value)}\n")
        return buf.getvalue()


def cmd_channels(cfg: RunConfig, threads: int = 1):
    c = reduce(cfg.particle, cfg.fields)
    rep = well_posedness(c, float(cfg.section("channels")["tol"]))
    rows = [(ch.m, ch.nu_sq, ch.cls.value) for ch in rep.channels]
    trailer = {
        "a_B": c.a_B,
        "a_E": c.a_E,
        "m_eff": c.m_eff,
        "m_scan_bound": rep.m_scan_bound,
        "verdict": rep.verdict,
        "violating_m": list(rep.violating_m),
    }
    return Table(["m", "nu_sq", "class"], rows, trailer), EXIT_OK if rep.well_posed else EXIT_ILL_POSED


def cmd_spectrum(cfg: RunConfig, threads: int = 1):
    s = cfg.section("spectrum")
    c = reduce(cfg.particle, cfg.fields)
    nu_sq = float(s["nu_sq"]) if s["nu_sq"] is not None else channel_coefficient(s["m"], c)
    mode = s["mode"]
    if mode not in ("auto", "disk", "regularized"):
        raise ConfigError(f"spectrum.mode must be auto, disk or regularized, got {mode!r}")
    if mode == "auto":
        mode = "regularized" if nu_sq < 0 else "disk"
    r_inner, r_outer = float(s["r_inner"]), float(s["r_outer"])
    if nu_sq < 0 and r_inner <= 0:
        raise Refusal(
            f"channel m={s['m']} has nu^2={fmt(nu_sq)} < 0: the radial problem is ill-posed "
            "(fall to the center); set spectrum.r_inner > 0 to study a regularized spectrum"
        )
    try:
        if mode == "regularized":
            if nu_sq >= 0:
                raise ConfigError("regularized mode needs a supercritical channel (nu^2 < 0)")
            p = RadialProblem(nu_sq, r_inner, r_outer, s["n_points"], s["spacing"] or LOGARITHMIC)
            res = regularized_bound_spectrum(math.sqrt(-nu_sq), p, s["n_levels"])
        else:
            p = RadialProblem(nu_sq, r_inner, r_outer, s["n_points"], s["spacing"] or LINEAR)
            res = dirichlet_spectrum(p, s["n_levels"] or 3)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [(i, e, r) for i, (e, r) in enumerate(zip(res.eigenvalues, res.residual_norms))]
    trailer = {
        "mode": mode,
        "nu_sq": nu_sq,
        "u_form_coefficient": res.u_form_coefficient,
        "class": res.problem.channel_class.value,
    }
    return Table(["index", "epsilon", "residual"], rows, trailer), EXIT_OK


def _build_path(spec) -> LoopPath:
    kind = spec["kind"]
    center = tuple(float(v) for v in spec["center"])
    if kind == "circle":
        return LoopPath.circle(center, float(spec["radius"]), spec["n_vertices"], spec["turns"])
    if kind == "ellipse":
        return LoopPath.ellipse(center, tuple(float(v) for v in spec["semi_axes"]), spec["n_vertices"], spec["turns"])
    if kind == "square":
        return LoopPath.square(center, float(spec["side"]))
    if kind == "polygon":
        if not spec["vertices"]:
            raise ConfigError("path.vertices required for a polygon")
        return LoopPath.polygon(spec["vertices"])
    raise ConfigError(f"unknown path kind {kind!r}")


def cmd_phase(cfg: RunConfig, threads: int = 1):
    try:
        path = _build_path(cfg.section("path"))
        res = loop_holonomy(path, cfg.particle, cfg.fields)
    except PathError as exc:
        raise ConfigError(str(exc)) from exc
    record = {
        "phase": res.phase,
        "winding": res.winding,
        "a_B": res.couplings.a_B,
        "well_posed": res.verdict.well_posed,
        "violating_m": list(res.verdict.violating_m),
    }
    table = Table(list(record), [tuple(record.values())], record=record)
    return table, EXIT_OK if res.verdict.well_posed else EXIT_ILL_POSED


def cmd_classical(cfg: RunConfig, threads: int = 1):
    s = cfg.section("classical")
    try:
        s0 = TrajectoryState(np.array(s["x0"], dtype=float), np.array(s["p0"], dtype=float))
        traj = integrate(s0, float(s["t_end"]), float(s["tol"]), cfg.particle, cfg.fields)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    stride = max(1, s["stride"])
    idx = list(range(0, traj.t.size, stride))
    if idx[-1] != traj.t.size - 1:
        idx.append(traj.t.size - 1)
    rows = [
        (traj.t[i], *traj.x[i], *traj.p[i], traj.energy_log[i], traj.p_theta_log[i]) for i in idx
    ]
    trailer = {
        "outcome": traj.outcome.value,
        "t_capture": traj.t_capture,
        "energy_drift": traj.energy_drift,
        "p_theta_drift": traj.p_theta_drift,
        "min_radius": traj.min_radius,
    }
    if traj.diagnostic:
        trailer["diagnostic"] = traj.diagnostic
    return Table(["t", "x1", "x2", "p1", "p2", "H", "p_theta"], rows, trailer), EXIT_OK


SWEEP_COLUMNS = ["alpha", "k", "B", "M", "a_B", "a_E", "m_eff", "well_posed", "violating_m", "nu_sq_0"]


def _sweep_point(point, hbar, with_phase):
    alpha, k, B, M = point
    particle = ParticleParams(M, alpha)
    fields = FieldConfig.normalized(k, B, hbar)
    c = reduce(particle, fields)
    rep = well_posedness(c)
    row = [alpha, k, B, M, c.a_B, c.a_E, c.m_eff, rep.well_posed, list(rep.violating_m), channel_coefficient(0, c)]
    if with_phase:
        row.append(winding_phase(1, c))
    return tuple(row)


def cmd_sweep(cfg: RunConfig, threads: int = 1):
    s = cfg.section("sweep")
    p, f = cfg.particle, cfg.fields
    ranges = [
        expand_range("alpha", s["alpha"], p.alpha),
        expand_range("k", s["k"], f.k),
        expand_range("B", s["B"], f.B),
        expand_range("M", s["M"], p.M),
    ]
    points = list(itertools.product(*ranges))
    try:
        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            rows = list(pool.map(lambda pt: _sweep_point(pt, f.hbar, s["phase"]), points))
    except ValueError as exc:
        raise ConfigError(f"invalid sweep point: {exc}") from exc
    cols = SWEEP_COLUMNS + (["phase"] if s["phase"] else [])
    n_bad = sum(1 for r in rows if not r[7])
    return Table(cols, rows, {"points": len(rows), "ill_posed_points": n_bad}), EXIT_OK


COMMANDS = {
    "channels": (cmd_channels, "csv", "per-channel inverse-square coefficients and the verdict"),
    "spectrum": (cmd_spectrum, "csv", "radial eigenvalues of one channel"),
    "phase": (cmd_phase, "json", "holonomy of the induced gauge potential around a loop"),
    "classical": (cmd_classical, "csv", "classical trajectory with energy and p_theta logs"),
    "sweep": (cmd_sweep, "csv", "Cartesian parameter sweep of couplings and verdicts"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dipolelab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, default_fmt, help_text) in COMMANDS.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="JSON run configuration")
        cmd.add_argument("--out", help="output file (default: stdout)")
        cmd.add_argument("--format", choices=("csv", "json"), default=default_fmt)
        cmd.add_argument("--threads", type=int, default=1)
        cmd.add_argument(
            "--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
            help="override a config value (repeatable)",
        )
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        cfg = load_config(args.config, args.set)
        func = COMMANDS[args.command][0]
        table, code = func(cfg, args.threads)
    except (UsageError, ConfigError) as exc:
        print(f"dipolelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Refusal as exc:
        print(f"dipolelab: refused: {exc}", file=sys.stderr)
        return EXIT_ILL_POSED
    text = table.render(args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
