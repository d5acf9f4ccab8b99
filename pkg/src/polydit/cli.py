"""Command-line front end.

Subcommands write CSV (17 significant digits, a ``# config:`` comment line,
then a header) or JSON (an array of sample objects).  A ``--config`` file
holds ``key = value`` lines using the long flag names with dashes or
underscores; flags given on the command line take precedence.

Exit codes: 0 ok, 2 invalid configuration, 3 numerical failure,
4 verification failure.  Errors go to standard error as one JSON object.
"""

from __future__ import annotations

import argparse
import configparser
import io
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from polydit.moshinsky import CORNU_XI_WIDTH, moshinsky_density, space_width, xi_of
from polydit import shutter, spiral, transition, verify, wave

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4
DYNAMICS = ("polymer", "continuum", "wave", "classical")

_DEFAULTS = {
    "dynamics": "polymer",
    "mu": 10,
    "rho": 0.3,
    "tau": 250.0,
    "tau_start": 0.0,
    "tau_stop": 400.0,
    "tau_step": 0.5,
    "mu_lo": -50,
    "mu_hi": 150,
    "tol": 1e-6,
    "format": "csv",
    "out": None,
    "kind": "like",
    "suite": "all",
    "tol_scale": 1.0,
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    dynamics: str
    mu: int
    rho: float
    tau: float
    tau_start: float
    tau_stop: float
    tau_step: float
    mu_lo: int
    mu_hi: int
    tol: float
    format: str
    out: str | None
    kind: str
    suite: str
    tol_scale: float

    def tau_grid(self) -> np.ndarray:
        if self.tau_step <= 0 or self.tau_stop < self.tau_start or self.tau_start < 0:
            raise ConfigError("tau grid needs 0 <= tau_start <= tau_stop and tau_step > 0")
        n = int(math.floor((self.tau_stop - self.tau_start) / self.tau_step + 1e-9))
        grid = self.tau_start + self.tau_step * np.arange(n + 1)
        if grid.size < 2:
            raise ConfigError("tau grid is empty")
        return grid

    def mu_sites(self) -> np.ndarray:
        if self.mu_hi <= self.mu_lo:
            raise ConfigError("site range is empty")
        return np.arange(self.mu_lo, self.mu_hi + 1)


def _load_config_file(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser()
    try:
        cp.read_string("[run]\n" + p.read_text())
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file: {exc}") from exc
    return {k.replace("-", "_"): v for k, v in cp["run"].items()}


def _coerce(key: str, value):
    if value is None:
        return None
    kind = type(_DEFAULTS[key]) if _DEFAULTS[key] is not None else str
    try:
        if kind is int:
            f = float(value)
            if f != int(f):
                raise ConfigError(f"{key} must be an integer")
            return int(f)
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc


def build_config(ns: argparse.Namespace) -> RunConfig:
    file_vals = _load_config_file(ns.config) if getattr(ns, "config", None) else {}
    unknown = set(file_vals) - set(_DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = {}
    for key, default in _DEFAULTS.items():
        flag = getattr(ns, key, None)
        if flag is not None:
            merged[key] = _coerce(key, flag)
        elif key in file_vals:
            merged[key] = _coerce(key, file_vals[key])
        else:
            merged[key] = default
    cfg = RunConfig(**merged)
    if cfg.dynamics not in DYNAMICS:
        raise ConfigError(f"dynamics must be one of {DYNAMICS}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    if not 0 < cfg.tol <= 1e-3:
        raise ConfigError("tol must lie in (0, 1e-3]")
    if not math.isfinite(cfg.rho) or cfg.rho < 0:
        raise ConfigError("rho must be finite and non-negative")
    if cfg.dynamics == "wave" and not 0 < cfg.rho < math.pi:
        raise ConfigError("wave dynamics needs 0 < rho < pi")
    if cfg.kind not in ("cornu", "like"):
        raise ConfigError("kind must be cornu or like")
    return cfg


# --- output ------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _json_value(v):
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else None
    return v


def write_table(cfg: RunConfig, columns: list[str], rows: list[list]) -> None:
    if cfg.format == "csv":
        buf = io.StringIO()
        buf.write("# config: " + json.dumps(asdict(cfg), sort_keys=True) + "\n")
        buf.write(",".join(columns) + "\n")
        for r in rows:
            buf.write(",".join(_fmt(v) for v in r) + "\n")
        text = buf.getvalue()
    else:
        objs = [{c: _json_value(v) for c, v in zip(columns, r)} for r in rows]
        text = json.dumps(objs, indent=1) + "\n"
    _emit(cfg, text)


def write_object(cfg: RunConfig, obj: dict) -> None:
    _emit(cfg, json.dumps({k: _json_value(v) for k, v in obj.items()}, indent=1) + "\n")


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


# --- densities ---------------------------------------------------------------

def _continuum_density_time(mu: float, rho: float, taus: np.ndarray) -> np.ndarray:
    out = np.empty_like(taus)
    pos = taus > 0
    out[pos] = moshinsky_density(xi_of(mu, rho, taus[pos]))
    out[~pos] = 1.0 if mu < 0 else (0.25 if mu == 0 else 0.0)
    return out


def _dynamics_time(cfg: RunConfig, taus: np.ndarray) -> np.ndarray:
    mu, rho = cfg.mu, cfg.rho
    if cfg.dynamics == "polymer":
        return shutter.density(mu, rho, taus)
    if cfg.dynamics == "continuum":
        return _continuum_density_time(mu, rho, taus)
    if cfg.dynamics == "classical":
        return shutter.classical_profile(mu, rho, taus)
    return np.abs(wave.closed_form(mu, rho, taus)) ** 2


def cmd_time_profile(cfg: RunConfig) -> int:
    taus = cfg.tau_grid()
    d = _dynamics_time(cfg, taus)
    c = _continuum_density_time(cfg.mu, cfg.rho, taus)
    k = shutter.classical_profile(cfg.mu, cfg.rho, taus)
    cols = ["tau", f"density_{cfg.dynamics}", "density_continuum_reference", "density_classical"]
    write_table(cfg, cols, [list(r) for r in zip(taus, d, c, k)])
    return EXIT_OK


def cmd_space_profile(cfg: RunConfig) -> int:
    sites = cfg.mu_sites()
    tau = cfg.tau
    if tau <= 0:
        raise ConfigError("space profile needs tau > 0")
    rho = cfg.rho
    if cfg.dynamics == "polymer":
        d = shutter.profile_space(tau, rho, (int(sites[0]), int(sites[-1]))).densities
    elif cfg.dynamics == "continuum":
        d = moshinsky_density(xi_of(sites, rho, tau))
    elif cfg.dynamics == "classical":
        d = shutter.classical_profile(sites, rho, tau)
    else:
        d = np.array([abs(wave.closed_form(int(m), rho, tau)) ** 2 for m in sites])
    c = moshinsky_density(xi_of(sites, rho, tau))
    k = shutter.classical_profile(sites, rho, tau)
    cols = ["mu", f"density_{cfg.dynamics}", "density_continuum_reference", "density_classical"]
    write_table(cfg, cols, [list(r) for r in zip(sites, d, c, k)])
    return EXIT_OK


def cmd_spiral(cfg: RunConfig) -> int:
    if cfg.kind == "cornu":
        if cfg.tau_step <= 0 or cfg.tau_stop <= cfg.tau_start:
            raise ConfigError("cornu parameter grid is empty")
        curve = spiral.cornu_curve(cfg.tau_start, cfg.tau_stop, cfg.tau_step)
    else:
        taus = cfg.tau_grid()
        curve = spiral.like_spiral(cfg.mu, cfg.rho, float(taus[-1]), cfg.tau_step)
    write_table(cfg, ["x", "y", "param"], [list(r) for r in curve.points])
    return EXIT_OK


def cmd_widths(cfg: RunConfig) -> int:
    taus = cfg.tau_grid()
    report = {"mu": cfg.mu, "rho": cfg.rho}
    prof = shutter.profile_time(cfg.mu, cfg.rho, taus)
    try:
        rep = spiral.crossings(prof)
        report.update(status="ok", tau1=rep.first, tau2=rep.second, delta_tau_measured=rep.width)
    except spiral.NoCrossingError as exc:
        report.update(status="no crossings", detail=str(exc), tau1=None, tau2=None,
                      delta_tau_measured=None)
    report["delta_tau_formula"] = (
        CORNU_XI_WIDTH * math.sqrt(math.pi * cfg.mu / cfg.rho**3)
        if cfg.mu > 0 and cfg.rho > 0 else None
    )
    report["delta_mu_formula"] = space_width(cfg.tau) if cfg.tau > 0 else None
    report["delta_xi_cornu"] = spiral.cornu_circle_width()
    report["delta_xi_quoted"] = CORNU_XI_WIDTH
    write_object(cfg, report)
    return EXIT_OK


def cmd_transition(cfg: RunConfig) -> int:
    taus = cfg.tau_grid()
    taus = taus[taus > 0]
    if taus.size == 0:
        raise ConfigError("transition needs tau > 0")
    exact = shutter.density(cfg.mu, cfg.rho, taus)
    cont = moshinsky_density(xi_of(cfg.mu, cfg.rho, taus))
    p1 = transition.residual_curve(cfg.mu, cfg.rho, taus, "first_order")
    cols = ["tau", "density_polymer", "density_continuum", "P_exact", "P_first_order"]
    write_table(cfg, cols, [list(r) for r in zip(taus, exact, cont, exact - cont, p1)])
    return EXIT_OK


def cmd_wave(cfg: RunConfig) -> int:
    if not 0 < cfg.rho < math.pi:
        raise ConfigError("wave needs 0 < rho < pi")
    taus = cfg.tau_grid()
    w = np.abs(wave.closed_form(cfg.mu, cfg.rho, taus)) ** 2
    s = shutter.density(cfg.mu, cfg.rho, taus)
    cols = ["tau", "density_wave", "density_polymer"]
    write_table(cfg, cols, [list(r) for r in zip(taus, w, s)])
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.suite not in ("all", *verify.SUITES):
        raise ConfigError(f"suite must be one of {('all', *verify.SUITES)}")
    checks = verify.run_suite(cfg.suite, cfg.tol_scale)
    lines = "".join(json.dumps(c.as_dict()) + "\n" for c in checks)
    summary = {"checks": len(checks), "failed": sum(not c.passed for c in checks)}
    _emit(cfg, lines + json.dumps(summary) + "\n")
    return EXIT_OK if summary["failed"] == 0 else EXIT_VERIFY


COMMANDS = {
    "time-profile": cmd_time_profile,
    "space-profile": cmd_space_profile,
    "spiral": cmd_spiral,
    "widths": cmd_widths,
    "transition": cmd_transition,
    "wave": cmd_wave,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail(EXIT_CONFIG, "ConfigError", message)


def _fail(code: int, kind: str, message: str):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    raise SystemExit(code)


def make_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--dynamics", choices=DYNAMICS)
    common.add_argument("--mu", type=float)
    common.add_argument("--rho", type=float)
    common.add_argument("--tau", type=float, help="fixed time for space profiles and widths")
    common.add_argument("--tau-start", type=float)
    common.add_argument("--tau-stop", type=float)
    common.add_argument("--tau-step", type=float)
    common.add_argument("--mu-lo", type=int)
    common.add_argument("--mu-hi", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out")
    common.add_argument("--config")
    common.add_argument("--kind", choices=("cornu", "like"), help="spiral kind")
    common.add_argument("--suite", help="verify suite")
    common.add_argument("--tol-scale", type=float, help="multiply verify tolerances")

    parser = _Parser(prog="polydit", description="Diffraction in time on a polymer lattice.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    ns = make_parser().parse_args(argv)
    try:
        cfg = build_config(ns)
        return COMMANDS[ns.command](cfg)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, "ConfigError", str(exc))
    except (ArithmeticError, FloatingPointError) as exc:
        _fail(EXIT_NUMERIC, type(exc).__name__, str(exc))
    except ValueError as exc:
        _fail(EXIT_CONFIG, type(exc).__name__, str(exc))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
