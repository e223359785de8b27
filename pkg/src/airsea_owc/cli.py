"""Command-line front end: ``airsea-owc <command> [options]``.

Every command writes one CSV table (to ``--out`` or stdout) whose ``#``
header records the tool version, the command line, the configuration hash
and the seed, which is enough to re-run it. Exit status is 0 on success,
2 for configuration or input errors and 3 for numerical failures.
"""
from __future__ import annotations

import argparse
import shlex
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .capacity import METHODS, SWEEP_AXES, QuadratureError, capacity_sweep, ergodic_capacity, normalize_axis, \
    normalize_method
from .channel import link_budget
from .config import ConfigError, ResultTable, config_hash, load_config, resolve_config, \
    scenario_from_config
from .eckv import EckvParams, SpectrumQuadratureError, cox_munk_variance, mean_square_slope
from .empirical import EmpiricalPdfError, read_empirical_csv
from .figures import FIGURES, RANGES_M, figure_sweeps
from .fitting import ALL_FAMILIES, BLACK_SEA_WEIBULL_FITS, Family, FitError, FitWarning, \
    RegressionError, mae, rank_families, regress_linear, regress_power
from .surface import make_slope_model

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

SWEEP_COLUMNS = ["axis_value", "c_erg_bpshz", "p_in", "std_err", "method", "seed", "error"]

_AUDIT_UNITS = {
    "Z_m": "m", "K_eff_per_m": "1/m", "K_a_per_m": "1/m", "g": "-", "h_c": "-",
    "phi_FoV_deg": "deg", "phi_FoVr_deg": "deg", "Omega_sr": "sr", "I_b_A": "A",
    "mu": "A*ohm", "alpha": "V^2", "beta": "V^2", "thermal_to_beta": "-",
}


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of numbers, got {text!r}") from None


def _range_list(spec: list[float]) -> list[float]:
    start, stop, step = spec
    if step <= 0 or stop < start:
        raise ConfigError("grid needs START <= STOP and STEP > 0")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [float(start + i * step) for i in range(n)]


def _recorded_command(argv: list[str]) -> str:
    """The command line without the output location, so the header does not depend on it."""
    keep, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("--out", "--outdir"):
            skip = True
            continue
        if tok.startswith(("--out=", "--outdir=")):
            continue
        keep.append(tok)
    return " ".join(shlex.quote(t) for t in ["airsea-owc", *keep])


def _load(args) -> dict:
    return load_config(args.config) if args.config else resolve_config()


def _table(args, columns, cfg=None, seed=None) -> ResultTable:
    prov = {"command": args.recorded}
    if cfg is not None:
        prov["config"] = args.config or "defaults"
        prov["config_sha256"] = config_hash(cfg)
    if seed is not None:
        prov["seed"] = seed
    return ResultTable(list(columns), provenance=prov)


def _emit(table: ResultTable, out):
    if out:
        table.write(out)
    else:
        sys.stdout.write(table.to_csv())


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_slope_pdf(args) -> ResultTable:
    grid = _range_list(args.grid)
    table = _table(args, ["model", "wind_mps", "angle_deg", "density_per_deg"])
    for kind in args.model:
        for u in args.wind:
            model = make_slope_model(kind, u, args.law)
            dens = np.atleast_1d(model.pdf_deg(np.asarray(grid)))
            for a, d in zip(grid, dens):
                table.add(kind.upper(), float(u), a, float(d))
    return table


def cmd_fit(args) -> ResultTable:
    pdf = read_empirical_csv(args.input)
    fams = [Family.parse(f) for f in args.families] if args.families else list(ALL_FAMILIES)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", FitWarning)
        fits = rank_families(pdf, fams, normalize=args.normalize)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if not fits:
        raise FitError("no family could be fitted")
    table = _table(args, ["family", "param1", "param2", "mse", "rank"])
    for rank, fit in enumerate(fits, start=1):
        p = list(fit.params) + [None] * (2 - len(fit.params))
        table.add(fit.family.value, p[0], p[1], fit.mse, rank)
    return table


def _read_regression_points(path) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#") or line.lower().startswith("u"):
            continue
        try:
            rows.append([float(t) for t in line.split(",")])
        except ValueError:
            raise ConfigError(f"{path}: line {lineno}: expected numbers U,k,lambda") from None
        if len(rows[-1]) != 3:
            raise ConfigError(f"{path}: line {lineno}: expected three columns U,k,lambda")
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    return np.asarray(rows)


def cmd_regress(args) -> ResultTable:
    data = _read_regression_points(args.input) if args.input else np.asarray(BLACK_SEA_WEIBULL_FITS)
    u = data[:, 0]
    table = _table(args, ["parameter", "law", "a", "b", "mae"])
    for col, name in ((1, "k"), (2, "lambda")):
        pts = np.column_stack([u, data[:, col]])
        for law, model in (("linear", regress_linear(pts)), ("power", regress_power(pts, space=args.power_space))):
            table.add(name, law, model.a, model.b, mae(data[:, col], model.predict(u)))
    return table


def cmd_link_budget(args) -> ResultTable:
    cfg = _load(args)
    sc = scenario_from_config(cfg)
    table = _table(args, ["quantity", "value", "unit"], cfg)
    for key, value in link_budget(sc.geometry, sc.tx, sc.rx, sc.env).items():
        table.add(key, float(value), _AUDIT_UNITS.get(key, ""))
    return table


def _sweep_table(args, cfg, points, method) -> ResultTable:
    seed = args.seed if method == "monte_carlo" else None
    table = _table(args, SWEEP_COLUMNS, cfg, seed=seed)
    for pt in points:
        est = pt.estimate
        if est is None:
            table.add(pt.value, None, None, None, method, seed, pt.error.replace(",", ";"))
        else:
            table.add(pt.value, est.c_erg, est.p_in, est.std_error, method, seed, "")
    return table


def _run_sweep(args, method, axis, values) -> ResultTable:
    cfg = _load(args)
    template = scenario_from_config(cfg)
    points = capacity_sweep(template, axis, values, method, n=args.samples, seed=args.seed, workers=args.workers)
    table = _sweep_table(args, cfg, points, method)
    failed = [p for p in points if p.error]
    if failed:
        args.partial_failure = f"{len(failed)} of {len(points)} sweep points failed"
    return table


def cmd_capacity(args) -> ResultTable:
    method = normalize_method(args.method)
    cfg = _load(args)
    sc = scenario_from_config(cfg)
    est = ergodic_capacity(sc, method, n=args.samples, seed=args.seed, workers=args.workers)
    for note in est.warnings:
        print(f"warning: {note}", file=sys.stderr)
    seed = args.seed if method == "monte_carlo" else None
    table = _table(args, SWEEP_COLUMNS, cfg, seed=seed)
    table.add(sc.geometry.range_m, est.c_erg, est.p_in, est.std_error, method, seed, "")
    return table


def _sweep_values(args) -> list[float]:
    if args.values is not None and args.range is not None:
        raise ConfigError("give either --values or --range, not both")
    if args.values is not None:
        return args.values
    if args.range is not None:
        return _range_list(args.range)
    if normalize_axis(args.axis) == "Z":
        return list(RANGES_M)
    raise ConfigError("--values or --range is required for this axis")


def cmd_sweep(args) -> ResultTable:
    return _run_sweep(args, normalize_method(args.method), args.axis, _sweep_values(args))


def cmd_mc(args) -> ResultTable:
    if args.values is None and args.range is None:
        return cmd_capacity(argparse.Namespace(**{**vars(args), "method": "monte_carlo"}))
    return _run_sweep(args, "monte_carlo", args.axis, _sweep_values(args))


def cmd_eckv_mss(args) -> ResultTable:
    table = _table(args, ["U10", "mss", "cox_munk_sigma2", "ratio"])
    for u in args.wind:
        mss = mean_square_slope(EckvParams(u, inverse_wave_age=args.inverse_wave_age))
        cm = cox_munk_variance(u)
        table.add(float(u), mss, cm, mss / cm)
    return table


def cmd_reproduce_figures(args) -> ResultTable:
    """Write one CSV per study into ``--outdir`` and return an index table."""
    method = normalize_method(args.method)
    cfg = _load(args)
    outdir = Path(args.outdir)
    seed = args.seed if method == "monte_carlo" else None
    index = _table(args, ["figure", "file", "curves", "rows", "failed"], cfg, seed=seed)
    failed_total = 0
    for name in args.figures or list(FIGURES):
        table = _table(args, ["curve", *SWEEP_COLUMNS], cfg, seed=seed)
        curves = figure_sweeps(name, cfg, method=method, n=args.samples, seed=args.seed, workers=args.workers)
        failed = 0
        for label, points in curves:
            sub = _sweep_table(args, cfg, points, method)
            for row in sub.rows:
                table.add(label, *row)
            failed += sum(1 for p in points if p.error)
        path = outdir / f"capacity_{name}.csv"
        table.write(path)
        index.add(name, path.name, len(curves), len(table.rows), failed)
        failed_total += failed
    if failed_total:
        args.partial_failure = f"{failed_total} figure points failed"
    return index


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario JSON file (keys as in DEFAULTS; missing keys take defaults)")
    common.add_argument("--out", help="output CSV path (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="Monte-Carlo master seed (default 0)")
    common.add_argument("--samples", type=int, default=10**6, help="Monte-Carlo sample count (default 1e6)")
    common.add_argument("--workers", type=int, default=1,
                        help="Monte-Carlo worker threads; results do not depend on it")

    parser = argparse.ArgumentParser(prog="airsea-owc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("slope-pdf", parents=[common], help="tilt-angle densities on an angle grid")
    p.add_argument("--model", nargs="+", default=["MW", "CM"], help="slope models (MW, CM)")
    p.add_argument("--wind", type=float, nargs="+", default=[6.0, 10.0, 14.0], help="wind speeds in m/s")
    p.add_argument("--grid", type=float, nargs=3, default=[0.0, 89.5, 0.5], metavar=("START", "STOP", "STEP"),
                   help="angle grid in degrees, STOP inclusive")
    p.add_argument("--law", default="linear", choices=["linear", "power"], help="MW wind-speed law")
    p.set_defaults(func=cmd_slope_pdf)

    p = sub.add_parser("fit", parents=[common], help="fit and rank candidate families to an empirical PDF")
    p.add_argument("input", help="CSV with header angle_deg,density_per_deg")
    p.add_argument("--families", nargs="+", help="subset of families (default: all six)")
    p.add_argument("--normalize", action="store_true", help="rescale the table to unit area before fitting")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("regress", parents=[common], help="regress Weibull parameters on wind speed")
    p.add_argument("input", nargs="?", help="CSV of U,k,lambda rows (default: built-in Black Sea fits)")
    p.add_argument("--power-space", default="linear", choices=["linear", "log"],
                   help="residual space of the power-law fit")
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("link-budget", parents=[common], help="audit table of the deterministic link budget")
    p.set_defaults(func=cmd_link_budget)

    method_help = f"one of {', '.join(METHODS)}"
    p = sub.add_parser("capacity", parents=[common], help="ergodic capacity of one scenario")
    p.add_argument("--method", default="angle_quadrature", help=method_help)
    p.set_defaults(func=cmd_capacity)

    for name, helptext, func in (("sweep", "capacity over one swept parameter", cmd_sweep),
                                 ("mc", "Monte-Carlo capacity, single point or sweep", cmd_mc)):
        p = sub.add_parser(name, parents=[common], help=helptext)
        if name == "sweep":
            p.add_argument("--method", default="angle_quadrature", help=method_help)
        p.add_argument("--axis", default="Z", help=f"swept parameter, one of {', '.join(SWEEP_AXES)}")
        p.add_argument("--values", type=_float_list, help="comma or space separated values")
        p.add_argument("--range", type=float, nargs=3, metavar=("START", "STOP", "STEP"))
        p.set_defaults(func=func)

    p = sub.add_parser("eckv-mss", parents=[common], help="mean square slope of the wave spectrum")
    p.add_argument("--wind", type=float, nargs="+", default=[5.0, 8.0, 12.0], help="U10 values in m/s")
    p.add_argument("--inverse-wave-age", type=float, default=0.84)
    p.set_defaults(func=cmd_eckv_mss)

    p = sub.add_parser("reproduce-figures", parents=[common], help="regenerate all capacity curve families")
    p.add_argument("--outdir", default="figures", help="directory for the per-study CSV files")
    p.add_argument("--figures", nargs="+", choices=list(FIGURES), help="subset of studies")
    p.add_argument("--method", default="angle_quadrature", help=method_help)
    p.set_defaults(func=cmd_reproduce_figures)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.recorded = _recorded_command(argv)
    args.partial_failure = None
    try:
        if args.samples < 1000:
            raise ConfigError("--samples must be at least 1000")
        table = args.func(args)
        _emit(table, args.out)
    except (ConfigError, EmpiricalPdfError, RegressionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, FitError, SpectrumQuadratureError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.partial_failure:
        print(f"numerical failure: {args.partial_failure}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
