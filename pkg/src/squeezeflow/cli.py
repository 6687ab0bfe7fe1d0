"""Command-line front end: ``squeezeflow <subcommand> [options]``.

Settings are resolved as built-in defaults, then a flat JSON ``--config`` file,
then explicit flags. Exit codes: 0 ok, 2 numeric failure, 3 bad configuration,
4 I/O error.
"""
import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .bogoliubov import BogoliubovError, read_matrix
from .flow import (FrequencyProfile, IntegrationError, InvalidBogoliubovError, circular_distance,
                   instantaneous_trajectory, omega, propagator, squeeze_of_vacuum)
from .geometry import TangentPair, fd_check, gaussian_curvature_fd, hermitian_form, hermitian_form_alt
from .squeezed import fidelity, occupation_probs
from .weber import EvaluationError, asymptotic_squeeze

EXIT_OK = 0
EXIT_NUMERIC = 2
EXIT_CONFIG = 3
EXIT_IO = 4

FD_LIMIT = 1e-6
ALT_LIMIT = 1e-10
CURVATURE_LIMIT = 1e-4

COMMON_DEFAULTS = {
    "alpha": 1.0,
    "g": 0.0,
    "t_start": -40.0,
    "t_end": 40.0,
    "tol": 1e-10,
    "n_max": 20,
    "grid": 601,
    "format": "csv",
    "out": None,
    "jobs": 1,
    "timing": False,
}

# Per-command horizons; the remaining defaults are shared.
COMMAND_DEFAULTS = {
    "simulate": {},
    "trajectory": {"t_start": -30.0, "t_end": 30.0},
    "spectrum-fan": {"t_start": -5.0, "t_end": 5.0, "grid": 101, "n_levels": 6},
    "lz-compare": {"t_start": -60.0, "t_end": 60.0, "delta_sq": [0.0, 0.25, 0.5, 1.0, 2.0, 3.0]},
    "geometry-check": {"points": 50, "seed": 0, "max_modes": 3, "radius": 0.8, "z_file": None},
}

TYPES = {
    "alpha": float, "g": float, "t_start": float, "t_end": float, "tol": float,
    "n_max": int, "grid": int, "format": str, "out": str, "jobs": int, "timing": bool,
    "n_levels": int, "delta_sq": list, "points": int, "seed": int, "max_modes": int,
    "radius": float, "z_file": str,
}


class ConfigError(ValueError):
    pass


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _jobs_default():
    env = os.environ.get("SQUEEZEFLOW_JOBS")
    if env is None:
        return None
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"SQUEEZEFLOW_JOBS must be an integer, got {env!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="squeezeflow",
        description="Squeezing of the vacuum under the sweep omega_t^2 = alpha^2 t^2 + g^2.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    helps = {
        "simulate": "propagate the vacuum over [t-start, t-end] and report squeezing",
        "trajectory": "disk coordinate relative to the instantaneous ground state",
        "spectrum-fan": "instantaneous levels (n + 1/2) omega_t",
        "lz-compare": "tunneling 1 - p0 against its closed forms over a delta^2 grid",
        "geometry-check": "finite-difference checks of the squeezed-state geometry",
    }
    for name, text in helps.items():
        defaults = {**COMMON_DEFAULTS, **COMMAND_DEFAULTS[name]}
        p = sub.add_parser(name, help=text, description=text)
        S = argparse.SUPPRESS

        def add(flag, help_text, key, **kw):
            p.add_argument(flag, default=S, help=f"{help_text} (default: {defaults.get(key)})", **kw)

        add("--config", "flat JSON file of settings; flags override it", "config", metavar="PATH")
        add("--alpha", "sweep rate alpha > 0", "alpha", type=float)
        add("--g", "gap g >= 0", "g", type=float)
        add("--t-start", "initial time", "t_start", type=float, dest="t_start")
        add("--t-end", "final time", "t_end", type=float, dest="t_end")
        add("--tol", "integrator tolerance in (0, 1e-3]", "tol", type=float)
        add("--n-max", "largest occupation number reported", "n_max", type=int, dest="n_max")
        add("--grid", "number of time samples", "grid", type=int)
        add("--out", "output file instead of stdout", "out", metavar="PATH")
        add("--format", "output format", "format", choices=["csv", "json"])
        add("--jobs", "worker processes (env SQUEEZEFLOW_JOBS)", "jobs", type=int)
        p.add_argument("--timing", action="store_true", default=S,
                       help="include wall time in the report (output is then not reproducible)")
        if name == "spectrum-fan":
            add("--n-levels", "number of levels", "n_levels", type=int, dest="n_levels")
        if name == "lz-compare":
            add("--delta-sq", "comma-separated delta^2 values", "delta_sq", type=_float_list,
                dest="delta_sq")
        if name == "geometry-check":
            add("--points", "random base points", "points", type=int)
            add("--seed", "random seed", "seed", type=int)
            add("--max-modes", "largest mode count N", "max_modes", type=int, dest="max_modes")
            add("--radius", "largest operator norm of random base points", "radius", type=float)
            add("--z-file", "base points in matrix format instead of random ones", "z_file",
                dest="z_file", metavar="PATH")
    return parser


def resolve_config(args):
    """Merge defaults, the optional JSON file and explicit flags into a flat dict."""
    command = args.command
    cfg = {**COMMON_DEFAULTS, **COMMAND_DEFAULTS[command]}
    env_jobs = _jobs_default()
    if env_jobs is not None:
        cfg["jobs"] = env_jobs
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    path = getattr(args, "config", None)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}")
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a flat JSON object")
        for key, value in data.items():
            key = key.replace("-", "_")
            if key not in cfg:
                raise ConfigError(f"unknown config key {key!r} for {command}")
            cfg[key] = _coerce(key, value)
    cfg.update(flags)
    _validate(command, cfg)
    return cfg


def _coerce(key, value):
    kind = TYPES[key]
    if value is None:
        if key in ("out", "z_file"):
            return None
        raise ConfigError(f"{key} must not be null")
    try:
        if kind is list:
            if isinstance(value, str):
                return _float_list(value)
            return [float(v) for v in value]
        if kind is bool:
            if not isinstance(value, bool):
                raise TypeError
            return value
        if kind is int and isinstance(value, float) and not value.is_integer():
            raise TypeError
        return kind(value)
    except (TypeError, ValueError, argparse.ArgumentTypeError):
        raise ConfigError(f"bad value for {key}: {value!r}")


def _validate(command, cfg):
    checks = [
        (cfg["alpha"] > 0, "alpha must be positive"),
        (cfg["g"] >= 0, "g must be non-negative"),
        (cfg["t_start"] < cfg["t_end"], "t_start must be below t_end"),
        (0 < cfg["tol"] <= 1e-3, "tol must lie in (0, 1e-3]"),
        (cfg["n_max"] >= 0, "n_max must be non-negative"),
        (cfg["grid"] >= 2, "grid must be at least 2"),
        (cfg["jobs"] >= 1, "jobs must be at least 1"),
        (cfg["format"] in ("csv", "json"), "format must be csv or json"),
    ]
    if command == "spectrum-fan":
        checks.append((cfg["n_levels"] >= 1, "n_levels must be at least 1"))
    if command == "lz-compare":
        checks.append((len(cfg["delta_sq"]) > 0, "delta_sq grid must not be empty"))
        checks.append((all(d >= 0 for d in cfg["delta_sq"]), "delta_sq values must be non-negative"))
    if command == "geometry-check":
        checks.append((cfg["points"] >= 1, "points must be at least 1"))
        checks.append((cfg["max_modes"] >= 1, "max_modes must be at least 1"))
        checks.append((0 <= cfg["radius"] < 1, "radius must lie in [0, 1)"))
    for ok, message in checks:
        if not ok:
            raise ConfigError(message)


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.15e" % value
    if value is None:
        return ""
    if isinstance(value, list):
        return ";".join(_fmt(v) for v in value)
    return str(value)


def _json_value(value):
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def render_table(columns, rows, fmt):
    """Serialize rows as CSV (header, ``%.15e``, LF) or as a JSON list of objects."""
    if fmt == "json":
        objs = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
        return json.dumps(objs, sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _config_items(cfg):
    return sorted((k, v) for k, v in cfg.items() if k != "out")


def simulate(cfg):
    """Propagate the initial ground state and compare with the closed forms.

    Returns an ordered list of ``(key, value)`` pairs.
    """
    profile = FrequencyProfile(cfg["alpha"], cfg["g"])
    phi = propagator(profile, cfg["t_start"], cfg["t_end"], tol=cfg["tol"])
    tau = squeeze_of_vacuum(phi)
    delta_sq = profile.delta_sq
    cf_tanh, offset = asymptotic_squeeze(delta_sq)
    cf_fid = 1.0 / math.sqrt(1.0 + math.exp(-math.pi * delta_sq))
    t_end = cfg["t_end"]
    if t_end > 0:
        s = math.sqrt(cfg["alpha"]) * t_end
        log_term = delta_sq * math.log(s) if delta_sq else 0.0
        cf_theta = (-s * s - log_term + offset) % (2.0 * math.pi)
        phase_err = circular_distance(tau.theta, cf_theta)
    else:
        cf_theta = phase_err = float("nan")
    spectrum = occupation_probs(tau, cfg["n_max"])
    fid = fidelity(tau)
    report = [
        ("tanh_r", tau.tanh_r),
        ("theta", tau.theta),
        ("fidelity", fid),
        ("closed_form_tanh_r", cf_tanh),
        ("closed_form_theta", cf_theta),
        ("closed_form_fidelity", cf_fid),
        ("abs_error_tanh_r", abs(tau.tanh_r - cf_tanh)),
        ("abs_error_fidelity", abs(fid - cf_fid)),
        ("phase_distance", phase_err),
        ("delta_sq", delta_sq),
        ("symplectic_defect", phi.defect),
        ("U_re", phi.U.real), ("U_im", phi.U.imag),
        ("V_re", phi.V.real), ("V_im", phi.V.imag),
    ]
    report += [(f"p_{n}", p) for n, p in enumerate(spectrum.probs)]
    report.append(("tail_bound", spectrum.tail_bound))
    report.append(("version", __version__))
    report += [(f"config.{k}", v) for k, v in _config_items(cfg)]
    return report


def render_report(report, fmt):
    if fmt == "json":
        return json.dumps({k: _json_value(v) for k, v in report}, sort_keys=True, indent=1) + "\n"
    return render_table(["key", "value"], report, "csv")


def _time_grid(cfg):
    return np.linspace(cfg["t_start"], cfg["t_end"], cfg["grid"]).tolist()


def trajectory(cfg):
    profile = FrequencyProfile(cfg["alpha"], cfg["g"])
    rows = instantaneous_trajectory(profile, _time_grid(cfg), tol=cfg["tol"])
    columns = ["t", "re_z", "im_z", "re_w", "im_w", "tanh_r"]
    return columns, [(t, z.real, z.imag, w.real, w.imag, abs(z)) for t, z, w in rows]


def spectrum_fan(cfg):
    profile = FrequencyProfile(cfg["alpha"], cfg["g"])
    rows = []
    for t in _time_grid(cfg):
        w = omega(profile, t)
        rows += [(t, n, (n + 0.5) * w) for n in range(cfg["n_levels"])]
    return ["t", "n", "E_n"], rows


def _lz_row(job):
    delta_sq, alpha, t_start, t_end, tol = job
    profile = FrequencyProfile(alpha, math.sqrt(delta_sq * alpha))
    tau = squeeze_of_vacuum(propagator(profile, t_start, t_end, tol=tol))
    measured = 1.0 - fidelity(tau)
    exact = 1.0 - 1.0 / math.sqrt(1.0 + math.exp(-math.pi * delta_sq))
    asym = 0.5 * math.exp(-math.pi * delta_sq)
    lz = math.exp(-0.5 * math.pi * delta_sq)
    return (delta_sq, measured, exact, asym, lz, measured / asym)


def lz_compare(cfg):
    grid = sorted(set(cfg["delta_sq"]))
    jobs = [(d, cfg["alpha"], cfg["t_start"], cfg["t_end"], cfg["tol"]) for d in grid]
    if cfg["jobs"] > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg["jobs"], len(jobs))) as pool:
            rows = list(pool.map(_lz_row, jobs))
    else:
        rows = [_lz_row(j) for j in jobs]
    rows.sort(key=lambda r: r[0])
    columns = ["delta_sq", "measured_1mp0", "closed_form_1mp0", "asymptote_1mp0", "lz_formula",
               "ratio_to_asymptote"]
    return columns, rows


def _random_symmetric(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    a = a + a.T
    return a / np.linalg.norm(a, 2)


def geometry_check(cfg):
    """Residuals of the finite-difference and two-route checks at sampled base points.

    Returns ``(columns, rows, ok)``.
    """
    rng = np.random.default_rng(cfg["seed"])
    if cfg["z_file"]:
        with open(cfg["z_file"], encoding="utf-8") as fh:
            points = []
            while True:
                try:
                    m = read_matrix(fh)
                except ValueError as exc:
                    raise ConfigError(f"malformed matrix file {cfg['z_file']}: {exc}")
                if m is None:
                    break
                points.append(m)
        if not points:
            raise ConfigError(f"no matrices in {cfg['z_file']}")
    else:
        points = []
        for _ in range(cfg["points"]):
            n = int(rng.integers(1, cfg["max_modes"] + 1))
            points.append(_random_symmetric(rng, n) * rng.uniform(0.0, cfg["radius"]))
    rows = []
    ok = True
    for i, Z in enumerate(points):
        n = Z.shape[0]
        t1, t2 = _random_symmetric(rng, n), _random_symmetric(rng, n)
        tp = TangentPair(Z, t1, t2)
        fd = fd_check(Z, t1, t2)
        alt = abs(hermitian_form(tp) - hermitian_form_alt(tp))
        z = complex(Z[0, 0]) if n == 1 else complex(*rng.uniform(-0.6, 0.6, size=2))
        curv = abs(gaussian_curvature_fd(z) + 4.0)
        ok = ok and fd <= FD_LIMIT and alt <= ALT_LIMIT and curv <= CURVATURE_LIMIT
        rows.append((i, n, fd, alt, curv))
    return ["point", "n_modes", "fd_residual", "two_route_difference", "curvature_error"], rows, ok


def _emit(text, cfg):
    if cfg["out"]:
        with open(cfg["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(cfg, command):
    """Execute one command on a resolved config; returns ``(text, exit_code)``."""
    start = time.perf_counter()
    code = EXIT_OK
    if command == "simulate":
        report = simulate(cfg)
        if cfg["timing"]:
            report.append(("wall_time_s", time.perf_counter() - start))
        return render_report(report, cfg["format"]), code
    if command == "trajectory":
        columns, rows = trajectory(cfg)
    elif command == "spectrum-fan":
        columns, rows = spectrum_fan(cfg)
    elif command == "lz-compare":
        columns, rows = lz_compare(cfg)
    else:
        columns, rows, ok = geometry_check(cfg)
        code = EXIT_OK if ok else EXIT_NUMERIC
    text = render_table(columns, rows, cfg["format"])
    if cfg["timing"]:
        print(f"wall time: {time.perf_counter() - start:.3f} s", file=sys.stderr)
    return text, code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    try:
        cfg = resolve_config(args)
        text, code = run(cfg, args.command)
    except ConfigError as exc:
        print(f"squeezeflow: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, EvaluationError, InvalidBogoliubovError, BogoliubovError,
            ArithmeticError) as exc:
        print(f"squeezeflow: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"squeezeflow: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        _emit(text, cfg)
    except OSError as exc:
        print(f"squeezeflow: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    if code == EXIT_NUMERIC:
        print("squeezeflow: residuals above limits", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
