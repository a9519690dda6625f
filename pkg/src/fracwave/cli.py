"""Command-line entry point: ``fracwave <subcommand> CONFIG [-o OUTDIR]``.

Every run writes its data (CSV), a JSON report, and ``manifest.json``. The
manifest holds the fully resolved configuration and can be passed back as
CONFIG to regenerate the outputs byte for byte.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, diagnostics, dispersion
from .config import ConfigError, build_grid, build_models, load_config
from .fracop import multiplier, nonlocality_contrast
from .io import write_csv, write_json, write_manifest
from .model import WaveModel
from .synth import green_spatial, pressure_spatial

log = logging.getLogger("fracwave")

SUBCOMMANDS = ("dispersion", "green", "pressure", "nonlocal", "front-speed", "nonsmooth", "pw-probe", "compare")
OUTPUT_ENV = "FRACWAVE_OUTPUT_DIR"
UNITS = "c0-lengths per unit time (c0 = 1 unless configured)"


def _single_model(cfg) -> tuple[str, WaveModel]:
    models = build_models(cfg)
    if len(models) != 1:
        raise ConfigError(f"expected exactly one [model] section, found {len(models)}")
    return next(iter(models.items()))


def _taper_modes(cfg, args) -> list[bool]:
    if args.no_taper:
        return [False]
    mode = cfg["grid"]["taper"]
    return [True, False] if mode == "both" else [mode == "true"]


def _field_rows(fld):
    err = fld.error if fld.error is not None else np.zeros_like(fld.values)
    return zip(fld.r, fld.values, err)


def run_dispersion(cfg, args, out: Path) -> list[Path]:
    name, model = _single_model(cfg)
    d = cfg["dispersion"]
    k = np.linspace(d["k_min"], d["k_max"], d["n_k"])
    spec = dispersion.sample_spectrum(k, d["t"], model)
    header = {"model": model.to_dict(), "t": d["t"], "units": UNITS}
    csv = write_csv(
        out / "dispersion.csv",
        ["k", "mu", "theta_sq", "G_hat", "dG_hat_dt"],
        zip(spec.k, spec.mu, spec.theta_sq, spec.G_hat, spec.dG_hat_dt),
        header,
    )
    overdamped = spec.theta_sq < 0
    report = {
        "schema": "fracwave.dispersion/1",
        "model": model.to_dict(),
        "t": d["t"],
        "n_k": int(k.size),
        "overdamped_fraction": float(np.mean(overdamped)),
        "overdamped_k_range": [float(k[overdamped].min()), float(k[overdamped].max())] if overdamped.any() else None,
    }
    return [csv, write_json(out / "dispersion.json", report)]


def _run_field(kind, cfg, args, out: Path) -> list[Path]:
    name, model = _single_model(cfg)
    t = cfg["synth"]["t"]
    r_max = cfg["grid"]["r_max"] or None
    synth = green_spatial if kind == "green" else pressure_spatial
    files = []
    for taper in _taper_modes(cfg, args):
        grid = build_grid(cfg, taper=taper, workers=args.threads)
        fld = synth(model, t, grid, r_max=r_max)
        suffix = "" if taper else "_notaper"
        header = {"model": model.to_dict(), "t": t, "taper": fld.meta["taper"], "units": UNITS}
        files.append(write_csv(out / f"{kind}{suffix}.csv", ["r", "value", "trunc_err"], _field_rows(fld), header))
        meta = {"schema": f"fracwave.{kind}/1", "meta": fld.meta}
        files.append(write_json(out / f"{kind}{suffix}.json", meta))
        if cfg["synth"]["gnuplot"]:
            files.append(write_csv(out / f"{kind}{suffix}.dat", ["# r", "value"], zip(fld.r, fld.values)))
    return files


def run_green(cfg, args, out):
    return _run_field("green", cfg, args, out)


def run_pressure(cfg, args, out):
    return _run_field("pressure", cfg, args, out)


def run_nonlocal(cfg, args, out: Path) -> list[Path]:
    n = cfg["nonlocal"]
    res = nonlocality_contrast(
        bump_width=n["bump_width"],
        gammas=n["gammas"],
        radii=n["radii"],
        r_max=n["r_max"],
        n=n["n"],
        control_gamma=n["control_gamma"],
    )
    rows = []
    for g in res.gammas:
        for R, m, e, c, ce in zip(res.radii, res.tail_mass[g], res.trunc_err[g], res.control_tail_mass, res.control_trunc_err):
            rows.append((g, R, m, e, c, ce))
    csv = write_csv(
        out / "nonlocal.csv",
        ["gamma", "R", "tail_mass", "trunc_err", "control_tail_mass", "control_trunc_err"],
        rows,
        {"bump_width": n["bump_width"], "control_gamma": res.control_gamma, "grid": res.grid},
    )
    summary = {
        "schema": "fracwave.nonlocal/1",
        "bump_width": n["bump_width"],
        "control_gamma": res.control_gamma,
        "grid": res.grid,
        "contrast": {f"{g:g}": dict(zip([f"{R:g}" for R in res.radii], res.contrast(g))) for g in res.gammas},
    }
    return [csv, write_json(out / "nonlocal.json", summary)]


def _sweep_rows(report, label=None):
    for e in report.entries:
        row = (e.c_F, e.tau, e.trunc_err, e.control_tau, e.control_trunc_err, e.ratio, int(report.taper))
        yield ((label,) + row) if label is not None else row


_SWEEP_COLS = ["c_F", "tau", "trunc_err", "control_tau", "control_trunc_err", "ratio", "taper"]


def run_front_speed(cfg, args, out: Path) -> list[Path]:
    name, model = _single_model(cfg)
    fs = cfg["front_speed"]
    reports = []
    for taper in _taper_modes(cfg, args):
        grid = build_grid(cfg, taper=taper, workers=args.threads)
        reports.append(diagnostics.front_speed_sweep(model, fs["t"], fs["c_f"], grid, quantity=fs["quantity"]))
    rows = [row for rep in reports for row in _sweep_rows(rep)]
    csv = write_csv(out / "front_speed.csv", _SWEEP_COLS, rows, {"model": model.to_dict(), "t": fs["t"], "quantity": fs["quantity"]})
    payload = {"schema": diagnostics.SCHEMA_FRONT_SPEED, "reports": [r.to_dict() for r in reports]}
    return [csv, write_json(out / "front_speed.json", payload)]


def run_compare(cfg, args, out: Path) -> list[Path]:
    models = build_models(cfg)
    if not models:
        raise ConfigError("compare needs at least one [model.<name>] section")
    fs = cfg["front_speed"]
    rows, reports = [], []
    for taper in _taper_modes(cfg, args):
        grid = build_grid(cfg, taper=taper, workers=args.threads)
        for label, model in models.items():
            rep = diagnostics.front_speed_sweep(model, fs["t"], fs["c_f"], grid, quantity=fs["quantity"])
            reports.append(dict(rep.to_dict(), label=label))
            rows.extend(_sweep_rows(rep, label))
    csv = write_csv(out / "compare.csv", ["model"] + _SWEEP_COLS, rows, {"t": fs["t"], "quantity": fs["quantity"]})
    return [csv, write_json(out / "compare.json", {"schema": "fracwave.compare/1", "reports": reports})]


def run_nonsmooth(cfg, args, out: Path) -> list[Path]:
    ns = cfg["nonsmooth"]
    if ns["target"] == "symbol":
        func = lambda k: multiplier(k, ns["gamma"])
        rep = diagnostics.nonsmoothness_probe(ns["gamma"], ns["order"], ns["h_list"])
    elif ns["target"] == "green":
        name, model = _single_model(cfg)
        func = diagnostics.green_target(model, ns["t"])
        label = f"G_hat(|k1|, t={ns['t']:g}) of {diagnostics.model_id(model)}"
        rep = diagnostics.nonsmoothness_probe(None, ns["order"], ns["h_list"], target=func, label=label)
    else:
        raise ConfigError(f"invalid value for 'target' in [nonsmooth]: {ns['target']!r} (symbol|green)")
    # the rounding bound of each difference is its error companion
    noise = [diagnostics.centered_difference(func, rep.order, h)[1] for h in rep.h]
    rows = zip(rep.h, rep.estimates, noise)
    csv = write_csv(out / "nonsmooth.csv", ["h", "estimate", "trunc_err"], rows, {"target": rep.target, "order": rep.order})
    return [csv, write_json(out / "nonsmooth.json", rep.to_dict())]


def run_pw_probe(cfg, args, out: Path) -> list[Path]:
    name, model = _single_model(cfg)
    p = cfg["pw_probe"]
    reports, rows = [], []
    for t in p["t"]:
        k1 = None
        if p["k1_max"] > 0:
            k1 = np.geomspace(p["k1_min"] or p["k1_max"] / 10.0, p["k1_max"], p["n_k1"])
        rep = diagnostics.pw_growth_probe(model, t, k1)
        reports.append(rep.to_dict())
        fit = diagnostics.growth_model(np.asarray(rep.k1), rep.coefficient, rep.exponent, rep.offset, rep.log_coefficient)
        rows.extend((t, k, y, abs(y - f)) for k, y, f in zip(rep.k1, rep.log_abs, fit))
    csv = write_csv(out / "pw_probe.csv", ["t", "k1", "log_abs", "fit_residual"], rows, {"model": model.to_dict()})
    summary = {"schema": diagnostics.SCHEMA_PW_PROBE, "reports": reports}
    if len(reports) > 1:
        t0, c0 = reports[0]["t"], reports[0]["coefficient"]
        summary["coefficient_per_t"] = [r["coefficient"] / r["t"] for r in reports]
        summary["coefficient_ratio"] = [r["coefficient"] / c0 for r in reports]
        summary["t_ratio"] = [r["t"] / t0 for r in reports]
    return [csv, write_json(out / "pw_probe.json", summary)]


RUNNERS = {
    "dispersion": run_dispersion,
    "green": run_green,
    "pressure": run_pressure,
    "nonlocal": run_nonlocal,
    "front-speed": run_front_speed,
    "nonsmooth": run_nonsmooth,
    "pw-probe": run_pw_probe,
    "compare": run_compare,
}


def run(subcommand: str, config_path, output_dir=None, no_taper: bool = False, threads: int = 1) -> int:
    """Execute one subcommand; returns the process exit status."""
    if subcommand not in RUNNERS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    cfg = load_config(config_path)
    if no_taper:
        cfg["grid"]["taper"] = "false"
    out = Path(output_dir or os.environ.get(OUTPUT_ENV) or "fracwave-out")
    out.mkdir(parents=True, exist_ok=True)
    args = argparse.Namespace(no_taper=no_taper, threads=max(1, int(threads)))
    files = RUNNERS[subcommand](cfg, args, out)
    write_manifest(out, subcommand, cfg, files, __version__, {"units": UNITS})
    log.info("wrote %d files to %s", len(files) + 1, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracwave", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("config", type=Path, help="INI config or a previous run's manifest.json")
        p.add_argument("-o", "--output-dir", type=Path, default=None, help=f"defaults to ${OUTPUT_ENV} or ./fracwave-out")
        p.add_argument("--no-taper", action="store_true", help="sharp k-space cutoff instead of raised cosine")
        p.add_argument("--threads", type=int, default=1, help="worker threads for quadrature")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return run(args.command, args.config, args.output_dir, args.no_taper, args.threads)
    except ConfigError as exc:
        print(f"fracwave: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fracwave: I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
