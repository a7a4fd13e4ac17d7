"""Command-line front end.

Every computation in the package is exposed as a subcommand with a
reproducible seed and machine-readable output: a CSV table (header row,
17 significant digits) plus a JSON summary echoing the fully resolved
configuration.  A JSON config file may supply any value; command-line
flags override it.  Exit codes: 0 success, 1 usage/config error, 2
numerical failure (non-converged quadrature, resolvent clamp violation).
"""

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

from . import __version__, bounds, dos, dynamics, lyapunov, resonance
from . import thouless as thouless_mod
from . import verify as verify_mod
from .operators import ConfigurationError, NumericalFailure, OperatorSpec

USAGE_ERROR = 1
NUMERICAL_ERROR = 2

# Per-subcommand defaults; None means "required unless supplied by the
# config file".  The resolved config echoed in the JSON summary is
# defaults <- config file <- explicit flags.
_MODEL_DEFAULTS = {
    "model": "stdmap",
    "lam": None,
    "value": 0.0,
    "values": "-1,1",
    "dist_lo": 0.0,
    "dist_hi": 1.0,
    "dim": 2,
    "rotation_alpha": math.sqrt(2.0),
    "init": None,
}

_DEFAULTS = {
    "orbit": {**_MODEL_DEFAULTS, "steps": 1000},
    "lyapunov": {**_MODEL_DEFAULTS, "energy": None, "e_min": None,
                 "e_max": None, "e_count": 1, "steps": 100000,
                 "ensemble": 8},
    "dos": {**_MODEL_DEFAULTS, "window": 2000, "ensemble": 32, "bins": 400,
            "e_min": None, "e_max": None},
    "thouless": {**_MODEL_DEFAULTS, "e_min": None, "e_max": None,
                 "e_count": 11, "steps": 100000, "lyap_ensemble": 8,
                 "dos_window": 2000, "dos_ensemble": 32, "bins": 400},
    "scan": {**_MODEL_DEFAULTS, "e_min": -0.5, "e_max": 0.5, "e_count": 101,
             "steps": 100000, "ensemble": 8, "threshold_frac": 0.8},
    "bounds": {**_MODEL_DEFAULTS, "energy": 0.0, "t": None, "t_frac": 0.8,
               "xi": 0.05, "delta": None, "ell": 1, "g": None,
               "window": 2000, "ensemble": 32, "bins": 400},
    "resonance": {"lambdas": None, "delta_exp": 0.1, "offsets": "0,pi",
                  "alpha": 0.6, "b": 0.0, "with_k": False, "k_tol": 2e-3},
    "verify": {},
}


def _add_model_flags(p):
    p.add_argument("--model",
                   choices=["stdmap", "skewshift", "iid", "constant",
                            "periodic"])
    p.add_argument("--lambda", dest="lam", type=float,
                   help="coupling constant")
    p.add_argument("--value", type=float, help="constant-potential value")
    p.add_argument("--values", help="comma-separated periodic cell")
    p.add_argument("--dist-lo", type=float, help="iid uniform lower bound")
    p.add_argument("--dist-hi", type=float, help="iid uniform upper bound")
    p.add_argument("--dim", type=int, help="skew-shift torus dimension")
    p.add_argument("--rotation-alpha", type=float,
                   help="skew-shift base rotation")
    p.add_argument("--init", help="comma-separated initial point "
                                  "(overrides seeded random start)")


def _add_common(p, model=True):
    if model:
        _add_model_flags(p)
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--summary", help="JSON summary path "
                                     "(default: OUT with .json suffix)")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int,
                   help="worker count (results identical at any value)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lyaplab",
        description="Numerical laboratory for 1-D ergodic Schrodinger "
                    "operators at large coupling")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("orbit", help="dump a driving-dynamics orbit")
    _add_common(p)
    p.add_argument("--steps", type=int)

    p = sub.add_parser("lyapunov", help="transfer-matrix Lyapunov exponent")
    _add_common(p)
    p.add_argument("--energy", type=float)
    p.add_argument("--e-min", type=float)
    p.add_argument("--e-max", type=float)
    p.add_argument("--e-count", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--ensemble", type=int)

    p = sub.add_parser("dos", help="density-of-states histogram")
    _add_common(p)
    p.add_argument("--window", type=int, help="truncation length N")
    p.add_argument("--ensemble", type=int, help="number of windows B")
    p.add_argument("--bins", type=int)
    p.add_argument("--e-min", type=float)
    p.add_argument("--e-max", type=float)

    p = sub.add_parser("thouless",
                       help="transfer vs DOS log-potential cross-check")
    _add_common(p)
    p.add_argument("--e-min", type=float)
    p.add_argument("--e-max", type=float)
    p.add_argument("--e-count", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--lyap-ensemble", type=int)
    p.add_argument("--dos-window", type=int)
    p.add_argument("--dos-ensemble", type=int)
    p.add_argument("--bins", type=int)

    p = sub.add_parser("scan",
                       help="energy sweep with low-exponent set measure")
    _add_common(p)
    p.add_argument("--e-min", type=float)
    p.add_argument("--e-max", type=float)
    p.add_argument("--e-count", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--ensemble", type=int)
    p.add_argument("--threshold-frac", type=float,
                   help="threshold t as a fraction of ln(lambda)")

    p = sub.add_parser("bounds", help="exceptional-set measure bound")
    _add_common(p)
    p.add_argument("--energy", type=float, help="window center")
    p.add_argument("--t", type=float, help="exponent threshold")
    p.add_argument("--t-frac", type=float,
                   help="threshold as fraction of ln(lambda), "
                        "used when --t is absent")
    p.add_argument("--xi", type=float)
    p.add_argument("--delta", type=float,
                   help="window half-width (default lambda^-2 for stdmap, "
                        "lambda^-ell otherwise)")
    p.add_argument("--ell", type=int)
    p.add_argument("--g", type=float,
                   help="window-mass scale (default: estimated from a DOS "
                        "histogram)")
    p.add_argument("--window", type=int)
    p.add_argument("--ensemble", type=int)
    p.add_argument("--bins", type=int)

    p = sub.add_parser("resonance",
                       help="classify couplings and probe phase-proximity "
                            "integrals")
    _add_common(p, model=False)
    p.add_argument("--lambdas", help="comma-separated coupling list")
    p.add_argument("--delta-exp", type=float)
    p.add_argument("--offsets", help="comma-separated resonant offsets "
                                     "mod 2*pi ('pi' accepted)")
    p.add_argument("--alpha", type=float, help="fractional moment power")
    p.add_argument("--b", type=float, help="phase target")
    p.add_argument("--with-k", action="store_true", default=None,
                   help="evaluate the phase-proximity integral per lambda")
    p.add_argument("--k-tol", type=float)

    p = sub.add_parser("verify", help="run the cross-module invariant suite")
    _add_common(p, model=False)

    return parser


def _resolve(args, name):
    """defaults <- config file <- explicit flags; returns a plain dict."""
    cfg = dict(_DEFAULTS[name])
    cfg.update({"seed": 0, "workers": 1, "out": None, "summary": None})
    if getattr(args, "config", None):
        try:
            with open(args.config) as f:
                file_cfg = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config file: {exc}")
        if not isinstance(file_cfg, dict):
            raise ConfigurationError("config file must hold a JSON object")
        unknown = set(file_cfg) - set(cfg)
        if unknown:
            raise ConfigurationError(
                f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _require(cfg, *keys):
    for key in keys:
        if cfg.get(key) is None:
            raise ConfigurationError(f"missing required setting '{key}'")


def _parse_floats(text):
    try:
        return [float(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"bad numeric list {text!r}: {exc}")


def build_spec(cfg):
    _require(cfg, "model", "lam")
    model, lam = cfg["model"], float(cfg["lam"])
    init = tuple(_parse_floats(cfg["init"])) if cfg.get("init") else None
    try:
        if model == "stdmap":
            return OperatorSpec.stdmap(lam, init=init)
        if model == "skewshift":
            return OperatorSpec.skewshift(
                lam, dim=int(cfg["dim"]),
                rotation_alpha=float(cfg["rotation_alpha"]), init=init)
        if model == "iid":
            return OperatorSpec.iid_uniform(lam, float(cfg["dist_lo"]),
                                            float(cfg["dist_hi"]))
        if model == "constant":
            return OperatorSpec.constant(lam, float(cfg["value"]))
        if model == "periodic":
            return OperatorSpec.periodic(lam,
                                         tuple(_parse_floats(cfg["values"])))
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(str(exc))
    raise ConfigurationError(f"unknown model {cfg['model']!r}")


def _energy_grid(cfg):
    if cfg.get("energy") is not None and int(cfg.get("e_count") or 1) <= 1:
        return [float(cfg["energy"])]
    _require(cfg, "e_min", "e_max", "e_count")
    count = int(cfg["e_count"])
    if count < 1:
        raise ConfigurationError("e_count must be >= 1")
    if count == 1:
        return [0.5 * (float(cfg["e_min"]) + float(cfg["e_max"]))]
    return list(np.linspace(float(cfg["e_min"]), float(cfg["e_max"]), count))


def _default_edges(spec, cfg):
    if cfg.get("e_min") is not None and cfg.get("e_max") is not None:
        lo, hi = float(cfg["e_min"]), float(cfg["e_max"])
    else:
        vlo, vhi = spec.potential_range()
        pad = 2.0 / spec.lam
        lo, hi = vlo - pad, vhi + pad
    return np.linspace(lo, hi, int(cfg["bins"]) + 1)


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _write_summary(path, subcommand, cfg, aggregates, wall_time):
    doc = {
        "subcommand": subcommand,
        "config": cfg,
        "aggregates": aggregates,
        "wall_time_s": wall_time,
        "version": __version__,
        "seed": cfg.get("seed", 0),
    }
    with open(path, "w") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


# --- subcommand handlers: return (header, rows, aggregates) -------------

def _run_orbit(cfg):
    spec = build_spec(cfg)
    steps = int(cfg["steps"])
    from .lyapunov import initial_state
    state = initial_state(spec, int(cfg["seed"]))
    if spec.kind == "stdmap":
        values = list(dynamics.std_map_orbit(state, spec.lam, steps))
        rows = [(n - 1, x) for n, x in enumerate(values)]
        header = ["n", "x"]
    elif spec.kind == "skewshift":
        rows = [(n, s.coords[-1]) for n, s in enumerate(
            dynamics.skew_shift_orbit(state, spec.rotation_alpha, steps))]
        header = ["n", "omega_last"]
    else:
        raise ConfigurationError(
            "orbit requires a dynamical model (stdmap or skewshift)")
    xs = [r[1] for r in rows]
    agg = {"steps": steps, "x_min": min(xs), "x_max": max(xs)}
    return header, rows, agg


def _run_lyapunov(cfg):
    spec = build_spec(cfg)
    grid = _energy_grid(cfg)
    steps, ensemble = int(cfg["steps"]), int(cfg["ensemble"])
    rows = []
    for e in grid:
        est = lyapunov.lyapunov_avg(spec, e, steps, ensemble,
                                    int(cfg["seed"]))
        rows.append((e, est.gamma, est.stderr, steps, ensemble))
    gammas = [r[1] for r in rows]
    agg = {
        "gamma_min": min(gammas),
        "gamma_max": max(gammas),
        "gamma_mean": float(np.mean(gammas)),
        "upper_bound": lyapunov.upper_bound(spec),
        "ln_lambda": math.log(spec.lam),
    }
    return ["E", "gamma", "stderr", "steps", "ensemble"], rows, agg


def _run_dos(cfg):
    spec = build_spec(cfg)
    edges = _default_edges(spec, cfg)
    h = dos.dos_histogram(spec, int(cfg["window"]), int(cfg["ensemble"]),
                          edges, int(cfg["seed"]))
    rows = [(float(a), float(b), float(m))
            for a, b, m in zip(h.edges[:-1], h.edges[1:], h.mass)]
    agg = {"total_mass": h.total, "coverage_warning": h.coverage_warning}
    return ["bin_lo", "bin_hi", "mass"], rows, agg


def _run_thouless(cfg):
    spec = build_spec(cfg)
    grid = _energy_grid(cfg)
    edges = _default_edges(spec, {**cfg, "e_min": None, "e_max": None})
    rows_t, h = thouless_mod.thouless_scan(
        spec, grid, int(cfg["steps"]), int(cfg["lyap_ensemble"]),
        int(cfg["dos_window"]), int(cfg["dos_ensemble"]), edges,
        int(cfg["seed"]))
    rows = [(r.e, r.gamma_transfer, r.gamma_thouless, r.residual)
            for r in rows_t]
    resid = [abs(r.residual) for r in rows_t]
    agg = {
        "max_abs_residual": max(resid),
        "median_abs_residual": float(np.median(resid)),
        "coverage_warning": h.coverage_warning,
    }
    return (["E", "gamma_transfer", "gamma_thouless", "residual"], rows,
            agg)


def _run_scan(cfg):
    spec = build_spec(cfg)
    grid = _energy_grid(cfg)
    steps, ensemble = int(cfg["steps"]), int(cfg["ensemble"])
    rows = []
    for e in grid:
        est = lyapunov.lyapunov_avg(spec, e, steps, ensemble,
                                    int(cfg["seed"]))
        rows.append((e, est.gamma, est.stderr))
    threshold = float(cfg["threshold_frac"]) * math.log(spec.lam)
    e0 = 0.5 * (grid[0] + grid[-1])
    delta = 0.5 * (grid[-1] - grid[0])
    pairs = [(r[0], r[1]) for r in rows]
    meas = (bounds.measure_low_gamma(pairs, threshold, e0, delta)
            if len(grid) > 1 else 0.0)
    below = sum(1 for _, gamma in pairs if gamma <= threshold)
    agg = {
        "threshold": threshold,
        "meas_Zt": meas,
        "fraction_below": below / len(pairs),
        "gamma_min": min(r[1] for r in rows),
        "ln_lambda": math.log(spec.lam),
    }
    return ["E", "gamma", "stderr"], rows, agg


def _run_bounds(cfg):
    spec = build_spec(cfg)
    ln_lam = math.log(spec.lam)
    t = (float(cfg["t"]) if cfg.get("t") is not None
         else float(cfg["t_frac"]) * ln_lam)
    if cfg.get("delta") is not None:
        delta = float(cfg["delta"])
    elif spec.kind == "stdmap":
        delta = spec.lam ** -2
    else:
        delta = spec.lam ** -float(cfg["ell"])
    xi = float(cfg["xi"])
    e0 = float(cfg["energy"])
    if cfg.get("g") is not None:
        g = float(cfg["g"])
    else:
        edges = _default_edges(spec, {**cfg, "e_min": None, "e_max": None})
        h = dos.dos_histogram(spec, int(cfg["window"]),
                              int(cfg["ensemble"]), edges, int(cfg["seed"]))
        g = dos.empirical_g(h, e0, xi, delta)
    report = bounds.low_gamma_measure_bound(bounds.LowGammaBoundInputs(
        ln_lambda=ln_lam, t=t, xi=xi, delta=delta, g=g))
    row = (e0, ln_lam, t, xi, delta, g, report.raw_bound,
           report.clamped_bound, report.vacuous)
    agg = {
        "raw_bound": report.raw_bound,
        "clamped_bound": report.clamped_bound,
        "vacuous": report.vacuous,
        "g": g,
        "delta": delta,
        "t": t,
    }
    header = ["E0", "ln_lambda", "t", "xi", "delta", "g", "raw_bound",
              "clamped_bound", "vacuous"]
    return header, [row], agg


def _parse_offsets(text):
    out = []
    for tok in str(text).split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok in ("pi", "+pi", "-pi"):
            out.append(math.pi if not tok.startswith("-") else -math.pi)
        else:
            try:
                out.append(float(tok))
            except ValueError as exc:
                raise ConfigurationError(f"bad offset {tok!r}: {exc}")
    return out


def _run_resonance(cfg):
    _require(cfg, "lambdas")
    lams = _parse_floats(cfg["lambdas"])
    offsets = _parse_offsets(cfg["offsets"])
    with_k = bool(cfg["with_k"])
    rows = []
    failures = 0
    for lam in lams:
        cls = resonance.classify_coupling(lam, float(cfg["delta_exp"]),
                                          offsets)
        row = [lam, cls.lambda_bar, cls.resonant]
        if with_k:
            res = resonance.phase_proximity_integral(
                lam, float(cfg["b"]), 0.0, float(cfg["alpha"]),
                tol=float(cfg["k_tol"]))
            row += [res.value, res.converged]
            failures += not res.converged
        rows.append(tuple(row))
    header = ["lambda", "lambda_bar", "resonant"]
    if with_k:
        header += ["k_value", "k_converged"]
    agg = {
        "count": len(rows),
        "resonant_count": sum(1 for r in rows if r[2]),
        "k_failures": failures,
    }
    if with_k and failures:
        raise NumericalFailure(
            f"{failures} phase-proximity integrals did not converge "
            "(expected at resonant couplings)")
    return header, rows, agg


def _run_verify(cfg):
    checks = verify_mod.run_checks(int(cfg["seed"]) or 12345)
    rows = []
    for name, ok, detail in checks:
        status = "pass" if ok else "FAIL"
        line = f"[{status}] {name}"
        if detail:
            line += f" ({detail})"
        print(line)
        rows.append((name, ok, detail))
    n_fail = sum(1 for _, ok, _ in rows if not ok)
    agg = {"checks": len(rows), "failures": n_fail}
    if n_fail:
        raise NumericalFailure(f"{n_fail} invariant check(s) failed")
    return ["check", "passed", "detail"], rows, agg


_HANDLERS = {
    "orbit": _run_orbit,
    "lyapunov": _run_lyapunov,
    "dos": _run_dos,
    "thouless": _run_thouless,
    "scan": _run_scan,
    "bounds": _run_bounds,
    "resonance": _run_resonance,
    "verify": _run_verify,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses status 2 for usage errors; --version/--help use 0
        return 0 if exc.code == 0 else USAGE_ERROR
    start = time.monotonic()
    try:
        cfg = _resolve(args, args.subcommand)
        header, rows, agg = _HANDLERS[args.subcommand](cfg)
        if cfg.get("out"):
            _write_csv(cfg["out"], header, rows)
        summary = cfg.get("summary") or (
            str(cfg["out"]).rsplit(".", 1)[0] + ".json"
            if cfg.get("out") else None)
        if summary:
            _write_summary(summary, args.subcommand, cfg, agg,
                           time.monotonic() - start)
        if not cfg.get("out"):
            for key in sorted(agg):
                print(f"{key} = {agg[key]}")
        return 0
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (NumericalFailure, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
