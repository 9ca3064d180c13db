"""Command-line front end.

Three subcommands:

* ``pdf``         -- nearest-platform distance report: exact and
                     approximate densities on a fine grid plus a simulated
                     histogram, written as CSV with a rendered figure.
* ``pd2d-sweep``  -- D2D-use probability versus platform altitude for every
                     configured (scheme, environment, threshold) series,
                     analytic and Monte Carlo, CSV plus figure.
* ``eval``        -- one-shot scalar evaluations for scripting.

Every output CSV is accompanied by a JSON manifest echoing the fully
resolved configuration (including dBm-to-watt conversions), the tool
version and the seed, so any output can be reproduced bit-exactly.

Exit codes: 0 success, 2 configuration error, 3 numerical convergence
failure.  The default seed may be overridden without editing configs via
the AERIAL_D2D_SEED environment variable (the --seed flag wins over both).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channel import CarrierConfig, EnvironmentProfile, d2d_attenuation, get_environment, los_probability, atg_attenuation
from .config import (
    Config,
    ConfigError,
    dbm_to_watts,
    load_association_probability,
    load_carrier,
    load_deployment,
    load_environments,
    load_powers,
    load_schemes,
)
from .modeselect import (
    PowerConfig,
    Scheme,
    SchemeConfig,
    d2d_probability_rsss,
    d2d_probability_tdds,
    mean_threshold_distance,
    rss_threshold_distance,
)
from .montecarlo import (
    DeploymentConfig,
    ExperimentConfig,
    estimate_d2d_probability,
    nearest_distance_histogram,
)
from .nearestdist import DistancePdfParams, pdf_approx, pdf_exact, pdf_grid_span
from .pointprocess import MhcpParams, mhcp_density
from .specfun import ConvergenceError

_ENV_SEED_VAR = "AERIAL_D2D_SEED"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_manifest(
    out_csv: Path,
    command: str,
    config_path: str | None,
    base_seed: int,
    resolved: dict,
    extra_outputs: list[str],
) -> Path:
    manifest = {
        "tool": "aerial-d2d",
        "tool_version": __version__,
        "command": command,
        "argv": sys.argv[1:],
        "config_path": config_path,
        "base_seed": base_seed,
        "resolved": resolved,
        "outputs": [str(out_csv), *extra_outputs],
    }
    path = Path(str(out_csv) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _resolve_seed(args, cfg: Config) -> int:
    # precedence: --seed flag, then the environment variable, then the
    # config (which is consumed either way so overriding it is not an
    # unrecognized-key error)
    config_seed = cfg.get_int("mc.base_seed", 12345)
    if args.seed is not None:
        return args.seed
    env_seed = os.environ.get(_ENV_SEED_VAR)
    if env_seed is not None:
        try:
            return int(env_seed)
        except ValueError:
            raise ConfigError(f"{_ENV_SEED_VAR}: not an integer: {env_seed!r}") from None
    return config_seed


def _env_dict(env: EnvironmentProfile) -> dict:
    return dataclasses.asdict(env)


def _power_dict(th_dbm: float, power: PowerConfig) -> dict:
    d = dataclasses.asdict(power)
    d["rss_th_dbm"] = th_dbm
    return d


def cmd_pdf(args) -> int:
    cfg = Config.from_file(args.config)
    deployment = load_deployment(cfg)
    n_grid = cfg.get_int("pdf.n_grid", 500)
    n_bins = cfg.get_int("pdf.n_bins", 60)
    n_samples = cfg.get_int("pdf.n_samples", 100_000)
    base_seed = _resolve_seed(args, cfg)
    workers = args.workers if args.workers is not None else cfg.get_int("mc.workers", 1)
    cfg.check_unused()

    params = DistancePdfParams.from_parent(
        deployment.lambda_parent, deployment.delta, deployment.altitude
    )
    lam_b = params.lambda_retained
    lo = deployment.altitude
    hi = lo + pdf_grid_span(lam_b)
    grid = np.linspace(lo, hi, n_grid)
    exact = np.array([pdf_exact(float(r), params) for r in grid])
    approx = np.array([pdf_approx(float(r), lam_b, lo) for r in grid])
    mae = float(np.mean(np.abs(exact - approx)))

    # the histogram engine ignores channel/power/scheme; benign defaults
    exp_cfg = ExperimentConfig(
        deployment=deployment,
        env=get_environment("high_rise_urban"),
        carrier=CarrierConfig(f_c=2.5e9),
        power=PowerConfig(p_dd=1.0, p_ul=1.0, p_dl=1.0, rss_threshold=1e-15),
        scheme=SchemeConfig(
            scheme=Scheme.TDDS,
            association_probability=0.5,
            region_radius=deployment.region_radius,
            altitude=deployment.altitude,
        ),
        n_replicates=n_samples,
        base_seed=base_seed,
        worker_count=workers,
    )
    bins = nearest_distance_histogram(exp_cfg, n_bins)

    header = ["r_m", "pdf_exact", "pdf_approx", "hist_density", "hist_stderr"]
    rows: list[list] = [
        [float(r), float(e), float(a), None, None]
        for r, e, a in zip(grid, exact, approx)
    ]
    for b in bins:
        rows.append(
            [b.center, pdf_exact(b.center, params), pdf_approx(b.center, lam_b, lo), b.density, b.std_error]
        )
    rows.sort(key=lambda row: (row[0], row[3] is None))
    out_csv = Path(args.out)
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    _write_csv(out_csv, header, rows)

    outputs = []
    if not args.no_plot:
        from .plotting import render_pdf_figure

        png = out_csv.with_suffix(".png")
        render_pdf_figure(
            grid,
            exact,
            approx,
            [b.center for b in bins],
            [b.density for b in bins],
            [b.std_error for b in bins],
            png,
        )
        outputs.append(str(png))

    resolved = {
        "deployment": dataclasses.asdict(deployment),
        "lambda_retained": lam_b,
        "grid": {"lo_m": lo, "hi_m": hi, "n_points": n_grid},
        "histogram": {"n_bins": n_bins, "n_samples": n_samples},
        "workers": workers,
        "mean_abs_difference": mae,
    }
    _write_manifest(out_csv, "pdf", str(args.config), base_seed, resolved, outputs)
    print(
        f"pdf-fidelity: mean |exact - approx| over {n_grid} grid points = {mae:.6e} 1/m"
    )
    print(f"wrote {out_csv}")
    return 0


def cmd_pd2d_sweep(args) -> int:
    cfg = Config.from_file(args.config)
    deployment = load_deployment(cfg)
    carrier = load_carrier(cfg)
    environments = load_environments(cfg)
    powers = load_powers(cfg)
    schemes = load_schemes(cfg)
    p_assoc = load_association_probability(cfg)
    l_min = cfg.get_float("sweep.l_min")
    l_max = cfg.get_float("sweep.l_max")
    n_points = cfg.get_int("sweep.n_points")
    replicates = cfg.get_int("mc.replicates", 2000)
    base_seed = _resolve_seed(args, cfg)
    workers = args.workers if args.workers is not None else cfg.get_int("mc.workers", 1)
    cfg.check_unused()

    if l_min <= 0:
        raise ConfigError(f"sweep.l_min: must be positive, got {l_min}")
    if n_points < 2:
        raise ConfigError(f"sweep.n_points: must be >= 2, got {n_points}")
    if l_max < l_min:
        raise ConfigError(f"sweep.l_max: must be >= sweep.l_min, got {l_max}")

    altitudes = np.linspace(l_min, l_max, n_points)
    a_dd = d2d_attenuation(carrier)
    header = [
        "scheme",
        "environment",
        "rss_th_dbm",
        "L_m",
        "p_d2d_analytic",
        "p_d2d_mc_mean",
        "p_d2d_mc_stderr",
        "d_bar_th_m",
        "r_bar_th_m",
    ]
    rows: list[list] = []
    plot_rows: list[dict] = []
    for scheme in schemes:
        for env_name, env in environments:
            for th_dbm, power in powers:
                r_bar = rss_threshold_distance(power, a_dd, env.alpha)
                for L in altitudes:
                    L = float(L)
                    dep = dataclasses.replace(deployment, altitude=L)
                    scheme_cfg = SchemeConfig(
                        scheme=scheme,
                        association_probability=p_assoc,
                        region_radius=dep.region_radius,
                        altitude=L,
                    )
                    d_bar = mean_threshold_distance(
                        power, dep.lambda_retained, L, env, carrier
                    )
                    if scheme is Scheme.TDDS:
                        analytic = d2d_probability_tdds(
                            d_bar, scheme_cfg, power, a_dd, env.alpha
                        )
                    else:
                        analytic = d2d_probability_rsss(scheme_cfg, power, a_dd, env.alpha)
                    estimate = estimate_d2d_probability(
                        ExperimentConfig(
                            deployment=dep,
                            env=env,
                            carrier=carrier,
                            power=power,
                            scheme=scheme_cfg,
                            n_replicates=replicates,
                            base_seed=base_seed,
                            worker_count=workers,
                        )
                    )
                    row = {
                        "scheme": scheme.value,
                        "environment": env_name,
                        "rss_th_dbm": th_dbm,
                        "L_m": L,
                        "p_d2d_analytic": analytic,
                        "p_d2d_mc_mean": estimate.mean,
                        "p_d2d_mc_stderr": estimate.std_error,
                        "d_bar_th_m": d_bar,
                        "r_bar_th_m": r_bar,
                    }
                    plot_rows.append(row)
                    rows.append([row[k] for k in header])

    out_csv = Path(args.out)
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    _write_csv(out_csv, header, rows)

    outputs = []
    if not args.no_plot:
        from .plotting import render_sweep_figure

        png = out_csv.with_suffix(".png")
        render_sweep_figure(plot_rows, png)
        outputs.append(str(png))

    resolved = {
        "deployment": dataclasses.asdict(deployment),
        "lambda_retained": deployment.lambda_retained,
        "carrier": dataclasses.asdict(carrier),
        "environments": {name: _env_dict(env) for name, env in environments},
        "powers": [_power_dict(th, pw) for th, pw in powers],
        "schemes": [s.value for s in schemes],
        "association_probability": p_assoc,
        "sweep": {"l_min": l_min, "l_max": l_max, "n_points": n_points},
        "mc": {"replicates": replicates, "workers": workers},
    }
    _write_manifest(out_csv, "pd2d-sweep", str(args.config), base_seed, resolved, outputs)
    print(f"wrote {out_csv} ({len(rows)} rows)")
    return 0


class _EvalParams:
    """key=value arguments with collective missing-key reporting."""

    def __init__(self, pairs: list[str]):
        self.values: dict[str, str] = {}
        for pair in pairs:
            if "=" not in pair:
                raise ConfigError(f"{pair!r}: expected key=value")
            key, value = pair.split("=", 1)
            self.values[key.strip()] = value.strip()
        self.missing: list[str] = []

    def get(self, key: str, default: float | None = None) -> float:
        if key not in self.values:
            if default is not None:
                return default
            self.missing.append(key)
            return math.nan
        try:
            return float(self.values[key])
        except ValueError:
            raise ConfigError(f"{key}: not a number: {self.values[key]!r}") from None

    def get_str(self, key: str, default: str | None = None) -> str:
        if key not in self.values:
            if default is not None:
                return default
            self.missing.append(key)
            return ""
        return self.values[key]

    def finish(self) -> None:
        if self.missing:
            raise ConfigError(f"missing parameters: {', '.join(self.missing)}")


def _eval_environment(params: _EvalParams) -> EnvironmentProfile:
    if "env" in params.values:
        name = params.get_str("env")
        try:
            return get_environment(name)
        except KeyError as exc:
            raise ConfigError(f"env: {exc.args[0]}") from None
    return EnvironmentProfile(
        a=params.get("a"),
        b=params.get("b"),
        eta_los_db=params.get("eta_los_db"),
        eta_nlos_db=params.get("eta_nlos_db"),
        alpha=params.get("alpha"),
    )


def cmd_eval(args) -> int:
    params = _EvalParams(args.params)
    expr = args.expression

    if expr == "mhcp_density":
        lam = params.get("lambda_parent")
        delta = params.get("delta")
        params.finish()
        value = mhcp_density(MhcpParams(lam, delta))
        unit = "m^-2"
    elif expr == "plos":
        h = params.get("h")
        L = params.get("L")
        env = _eval_environment(params)
        params.finish()
        value = los_probability(h, L, env)
        unit = "dimensionless"
    elif expr == "atg_attenuation":
        h = params.get("h")
        L = params.get("L")
        f_c = params.get("f_c_hz")
        c = params.get("c", 299792458.0)
        env = _eval_environment(params)
        params.finish()
        value = atg_attenuation(h, L, env, CarrierConfig(f_c=f_c, c=c))
        unit = "dimensionless"
    elif expr == "avg_dth":
        lam_b = params.get("lambda_retained")
        L = params.get("L")
        f_c = params.get("f_c_hz")
        c = params.get("c", 299792458.0)
        power = PowerConfig(
            p_dd=dbm_to_watts(params.get("p_dd_dbm")),
            p_ul=dbm_to_watts(params.get("p_ul_dbm")),
            p_dl=dbm_to_watts(params.get("p_dl_dbm")),
            rss_threshold=dbm_to_watts(params.get("rss_th_dbm", -90.0)),
        )
        env = _eval_environment(params)
        params.finish()
        value = mean_threshold_distance(power, lam_b, L, env, CarrierConfig(f_c=f_c, c=c))
        unit = "m"
    elif expr == "p_d2d":
        scheme_name = params.get_str("scheme")
        try:
            scheme = Scheme(scheme_name.upper())
        except ValueError:
            raise ConfigError(
                f"scheme: unknown scheme {scheme_name!r} (expected TDDS or RSSS)"
            ) from None
        R = params.get("region_radius")
        f_c = params.get("f_c_hz")
        c = params.get("c", 299792458.0)
        env = _eval_environment(params)
        if scheme is Scheme.TDDS:
            lam_b = params.get("lambda_retained")
            L = params.get("L")
            p_assoc = params.get("association_probability")
            power = PowerConfig(
                p_dd=dbm_to_watts(params.get("p_dd_dbm")),
                p_ul=dbm_to_watts(params.get("p_ul_dbm")),
                p_dl=dbm_to_watts(params.get("p_dl_dbm")),
                rss_threshold=dbm_to_watts(params.get("rss_th_dbm")),
            )
            params.finish()
            carrier = CarrierConfig(f_c=f_c, c=c)
            scheme_cfg = SchemeConfig(
                scheme=scheme, association_probability=p_assoc, region_radius=R, altitude=L
            )
            d_bar = mean_threshold_distance(power, lam_b, L, env, carrier)
            value = d2d_probability_tdds(
                d_bar, scheme_cfg, power, d2d_attenuation(carrier), env.alpha
            )
        else:
            power = PowerConfig(
                p_dd=dbm_to_watts(params.get("p_dd_dbm")),
                p_ul=1.0,
                p_dl=1.0,
                rss_threshold=dbm_to_watts(params.get("rss_th_dbm")),
            )
            params.finish()
            carrier = CarrierConfig(f_c=f_c, c=c)
            scheme_cfg = SchemeConfig(
                scheme=scheme,
                association_probability=params.get("association_probability", 0.5),
                region_radius=R,
                altitude=params.get("L", 1.0),
            )
            value = d2d_probability_rsss(
                scheme_cfg, power, d2d_attenuation(carrier), env.alpha
            )
        unit = "dimensionless"
    else:
        raise ConfigError(
            f"expression: unknown expression {expr!r} (expected one of "
            "mhcp_density, plos, atg_attenuation, avg_dth, p_d2d)"
        )

    print(f"{value:.10g} {unit}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aerial-d2d",
        description="Mode-selection analytics and Monte Carlo validation for "
        "D2D-enabled aerial networks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="key/value config file")
    common.add_argument("--out", required=True, help="output CSV path")
    common.add_argument("--seed", type=int, default=None, help="override the base seed")
    common.add_argument("--workers", type=int, default=None, help="Monte Carlo worker count")
    common.add_argument(
        "--no-plot", action="store_true", help="skip rendering the companion figure"
    )

    p_pdf = sub.add_parser(
        "pdf", parents=[common], help="nearest-platform distance density report"
    )
    p_pdf.set_defaults(func=cmd_pdf)

    p_sweep = sub.add_parser(
        "pd2d-sweep", parents=[common], help="D2D-use probability vs altitude sweep"
    )
    p_sweep.set_defaults(func=cmd_pd2d_sweep)

    p_eval = sub.add_parser("eval", help="evaluate one scalar expression")
    p_eval.add_argument(
        "expression",
        choices=["mhcp_density", "plos", "atg_attenuation", "avg_dth", "p_d2d"],
    )
    p_eval.add_argument("params", nargs="*", metavar="key=value")
    p_eval.set_defaults(func=cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: numerical convergence failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
