"""Command line entry point: ``fracwill <config-path>``.

The config is a flat ``key=value`` file; ``#`` starts a comment.  Every CSV
written starts with a comment line holding the resolved config, and contains
no timestamps, so identical configs give byte-identical files.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

from .constants import DEFAULT_LADDER, LOG_RATE_LADDER, constants_row, format_ladder
from .errors import ConfigurationError, FracwillError
from .experiment import EnergyConfig, fermi_expansion_terms, recovery_field, run_limsup_experiment
from .geometry import PlanarCurve
from .heatkernel import fundamental_solution, heat_kernel, heat_kernel_deriv
from .profile import POTENTIALS, decay_fit, get_potential, solve_profile

SUBCOMMANDS = ("profile", "kernel", "constants", "expansion", "gamma")
DEFAULT_EPS = {"gamma": (0.08, 0.04, 0.02), "expansion": (0.05, 0.025, 0.0125)}


@dataclass
class RunConfig:
    subcommand: str = "gamma"
    s: float = 0.8
    potential: str = "quartic"
    curve: str = "circle:1.0"
    center: tuple = (0.0, 0.0)
    ladder: tuple = ()
    output: str = ""
    L: float = 40.0
    n: int = 4096
    tol: float = 1e-8
    delta: float | None = None
    omega_radius: float | None = None
    Lambda: float = 20.0
    z0: float = 0.0005
    t: float = 1.0
    lam: float = 1.0
    x: tuple = (0.5, 1.0, 2.0, 5.0, 10.0, 50.0)
    timing: bool = False
    _explicit: set = field(default_factory=set, repr=False)

    def resolved(self) -> str:
        d = {k: v for k, v in asdict(self).items() if not k.startswith("_")}
        return " ".join(f"{k}={_show(v)}" for k, v in sorted(d.items()))


def _show(v):
    if isinstance(v, tuple):
        return ",".join(_show(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return "none" if v is None else str(v)


def parse_curve(spec: str, center=(0.0, 0.0)) -> PlanarCurve:
    """``circle:R`` or ``ellipse:a,b``."""
    try:
        kind, _, args = spec.partition(":")
        vals = [float(v) for v in args.split(",")] if args else []
    except ValueError:
        raise ConfigurationError(f"unparsable curve spec {spec!r}") from None
    if kind == "circle" and len(vals) == 1:
        return PlanarCurve.circle(vals[0], center)
    if kind == "ellipse" and len(vals) == 2:
        return PlanarCurve.ellipse(vals[0], vals[1], center)
    raise ConfigurationError(f"curve must be circle:R or ellipse:a,b, got {spec!r}")


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _bool(text):
    t = text.lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def _opt_float(text):
    return None if text.lower() == "none" else float(text)


_PARSERS = {
    "subcommand": str, "s": float, "potential": str, "curve": str, "center": _floats, "ladder": _floats,
    "output": str, "L": float, "n": int, "tol": float, "delta": _opt_float, "omega_radius": _opt_float,
    "Lambda": float, "z0": float, "t": float, "lam": float, "x": _floats, "timing": _bool,
}


def parse_config(text: str) -> RunConfig:
    """Parse and validate a config; errors name the offending line."""
    cfg = RunConfig()
    lines = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (p.strip() for p in line.partition("="))
        if not sep:
            raise ConfigurationError(f"line {no}: expected key=value, got {raw.strip()!r}")
        if key not in _PARSERS:
            raise ConfigurationError(f"line {no}: unknown key {key!r}")
        try:
            setattr(cfg, key, _PARSERS[key](value))
        except ValueError:
            raise ConfigurationError(f"line {no}: cannot parse {key}={value!r}") from None
        cfg._explicit.add(key)
        lines[key] = no
    _validate(cfg, lines)
    return cfg


def _validate(cfg: RunConfig, lines: dict) -> None:
    def fail(key, msg):
        where = f"line {lines[key]}: " if key in lines else ""
        raise ConfigurationError(f"{where}{msg}")

    if cfg.subcommand not in SUBCOMMANDS:
        fail("subcommand", f"subcommand must be one of {', '.join(SUBCOMMANDS)}")
    if cfg.potential not in POTENTIALS:
        fail("potential", f"potential must be one of {', '.join(sorted(POTENTIALS))}")
    lo, hi, closed = {"gamma": (0.75, 1.0, True), "constants": (0.75, 1.0, True),
                      "expansion": (0.5, 1.0, False)}.get(cfg.subcommand, (0.0, 1.0, False))
    ok = (lo <= cfg.s < hi) if closed else (lo < cfg.s < hi)
    if not ok:
        bracket = "[" if closed else "("
        fail("s", f"s={cfg.s!r} is not admissible for {cfg.subcommand}; need s in {bracket}{lo}, {hi})")
    if len(cfg.center) != 2:
        fail("center", "center needs two coordinates")
    try:
        curve = parse_curve(cfg.curve, cfg.center)
    except ConfigurationError as exc:
        fail("curve", str(exc))
    if cfg.subcommand == "gamma" and curve.kind != "circle":
        fail("curve", "the gamma experiment runs on circles")
    if cfg.n < 1024 or cfg.n % 2 or cfg.L < 20:
        fail("n" if "n" in lines else "L", "profile grid needs even n >= 1024 and L >= 20")
    if not (cfg.tol > 0 and cfg.t > 0 and cfg.lam > 0 and cfg.Lambda >= 1):
        fail("tol", "tol, t, lam must be positive and Lambda >= 1")
    if not cfg.ladder:
        if cfg.subcommand in DEFAULT_EPS:
            cfg.ladder = DEFAULT_EPS[cfg.subcommand]
        elif cfg.subcommand == "constants":
            cfg.ladder = LOG_RATE_LADDER if cfg.s == 0.75 else DEFAULT_LADDER
    if cfg.subcommand in DEFAULT_EPS:
        lad = cfg.ladder
        if any(e <= 0 for e in lad) or any(b >= a for a, b in zip(lad, lad[1:])):
            fail("ladder", "epsilon ladder must be positive and strictly decreasing")
    if not cfg.output:
        cfg.output = f"fracwill_{cfg.subcommand}.csv"
    try:
        with open(cfg.output, "a", encoding="utf-8"):
            pass
    except OSError as exc:
        fail("output", f"output path not writable: {exc}")


# ------------------------------------------------------------------ runners

def _writer():
    buf = io.StringIO()
    return buf, csv.writer(buf, lineterminator="\n")


def _num(v):
    return repr(float(v)) if math.isfinite(v) else "nan"


def _profile(cfg: RunConfig):
    return solve_profile(get_potential(cfg.potential), cfg.s, cfg.L, cfg.n, cfg.tol)


def run_profile(cfg):
    prof = _profile(cfg)
    buf, wr = _writer()
    wr.writerow(["s", "potential", "L", "n", "iterations", "residual_sup", "tail_coefficient",
                 "slope_w", "slope_dw", "slope_d2w"])
    # the fit window is [10, min(20, L/2)]; short grids leave no room for it
    hi = min(20.0, cfg.L / 2)
    slopes = [_num(decay_fit(prof, k, (10.0, hi))) if hi > 10 else "na" for k in (0, 1, 2)]
    wr.writerow([_num(cfg.s), cfg.potential, _num(cfg.L), cfg.n, prof.iterations, _num(prof.residual_sup),
                 _num(prof.tail_coefficient)] + slopes)
    return buf.getvalue(), []


def run_kernel(cfg):
    buf, wr = _writer()
    wr.writerow(["x", "P", "dP", "G_lambda"])
    errors = []
    for x in cfg.x:
        try:
            wr.writerow([_num(x), _num(heat_kernel(cfg.t, x, cfg.s)), _num(heat_kernel_deriv(1, x, cfg.s, cfg.t)),
                         _num(fundamental_solution(cfg.lam, x, cfg.s))])
        except FracwillError as exc:
            errors.append(f"x={x!r} {type(exc).__name__}: {exc}")
    return buf.getvalue(), errors


def run_constants(cfg):
    row = constants_row(cfg.s, _profile(cfg), cfg.ladder)
    buf, wr = _writer()
    wr.writerow(["s", "gamma_1s", "mu_w_or_na", "kappa_star", "ladder_json"])
    mu = row["mu_w_or_na"]
    wr.writerow([_num(row["s"]), _num(row["gamma_1s"]), mu if isinstance(mu, str) else _num(mu),
                 _num(row["kappa_star"]), format_ladder(row["ladder_json"])])
    return buf.getvalue(), []


def run_expansion(cfg):
    prof = _profile(cfg)
    curve = parse_curve(cfg.curve, cfg.center)
    buf, wr = _writer()
    wr.writerow(["epsilon", "z0", "H", "full", "leading", "curvature", "residual"])
    errors = []
    # the evaluation point sits at signed distance z0 from the curve, on the major axis
    x0 = (curve.center[0] + curve.a - cfg.z0, curve.center[1])
    for eps in cfg.ladder:
        try:
            fld = recovery_field(curve, prof, eps, cfg.delta)
            d = fermi_expansion_terms(fld, x0, cfg.Lambda)
            wr.writerow([_num(eps)] + [_num(d[k]) for k in ("z0", "H", "full", "leading", "curvature", "residual")])
        except FracwillError as exc:
            errors.append(f"epsilon={eps!r} {type(exc).__name__}: {exc}")
    return buf.getvalue(), errors


def run_gamma(cfg):
    prof = _profile(cfg)
    curve = parse_curve(cfg.curve, cfg.center)
    ec = EnergyConfig(cfg.s, cfg.omega_radius, cfg.ladder, potential=cfg.potential)
    report = run_limsup_experiment(ec, curve, prof, timing=cfg.timing)
    return report.to_csv(), list(report.errors)


RUNNERS = {"profile": run_profile, "kernel": run_kernel, "constants": run_constants,
           "expansion": run_expansion, "gamma": run_gamma}


def _error_line(kind, message, row=None):
    return json.dumps({"error": kind, "row": row, "message": message}, sort_keys=True)


def execute(cfg: RunConfig) -> int:
    """Run the subcommand, write its CSV, return the exit status."""
    try:
        body, errors = RUNNERS[cfg.subcommand](cfg)
    except FracwillError as exc:
        body, errors = "", [f"{type(exc).__name__}: {exc}"]
    text = f"# fracwill {cfg.resolved()}\n" + body
    text += "".join(f"# error {e}\n" for e in errors if f"# error {e}\n" not in body)
    with open(cfg.output, "w", encoding="utf-8") as fh:
        fh.write(text)
    for e in errors:
        head = e.split(":", 1)[0].split()
        row = head[0] if len(head) > 1 else None
        print(_error_line(head[-1], e, row), file=sys.stderr)
    return 0 if not errors else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="fracwill", description=__doc__.splitlines()[0])
    ap.add_argument("config", help="path to a key=value config file")
    args = ap.parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
        cfg = parse_config(text)
    except (OSError, UnicodeDecodeError) as exc:
        print(_error_line("ConfigurationError", f"cannot read config: {exc}"), file=sys.stderr)
        return 2
    except ConfigurationError as exc:
        print(_error_line("ConfigurationError", str(exc)), file=sys.stderr)
        return 2
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
