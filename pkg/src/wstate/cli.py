"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import (
    ConfigError,
    RunConfig,
    config_to_dict,
    parse_config,
    parse_config_dict,
    resolved_scenario_dict,
)
from .dynamics import IntegrationError
from .experiments import (
    FIG6_MODES,
    FIG6_MODES_FULL,
    SCENARIO_IDS,
    calibrate_pulse,
    calibration_template,
    get_scenario,
    run_mode_family,
    run_scenario,
    sweep2d,
    sweep_axes,
)
from .model import ModelError
from .output import emission_table, population_table, write_csv, write_json, write_table
from .units import CONVENTIONS

SUBCOMMANDS = ("simulate", "emit", "sweep", "calibrate", "invariance", "catalog", "list")


def _common(p):
    p.add_argument("--scenario", help="catalog scenario id")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--out", help="output directory")
    p.add_argument("--rtol", type=float)
    p.add_argument("--atol", type=float)
    p.add_argument("--workers", type=int, help="worker processes (default $WSTATE_WORKERS or 1)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--modes", help="mode count M for the fig6 families "
                                   "(comma-separated list for 'invariance')")
    p.add_argument("--full", action="store_true", help="fig6 families with M = 1..20")
    p.add_argument("--convention", choices=CONVENTIONS)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wstate",
        description="Qutrit-resonator W-state simulator.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("simulate", "run a scenario and write populations"),
        ("emit", "run an open-system scenario and write emission rates"),
        ("sweep", "2-D parameter sweep (fig5e_sweep, fig5f_sweep)"),
        ("calibrate", "grid-search a linear ramp pulse"),
        ("invariance", "mode-number invariance of the fig6 families"),
    ]:
        p = sub.add_parser(name, help=help_)
        _common(p)
        if name == "sweep":
            p.add_argument("--points", type=int, default=None,
                           help="grid points per axis (default 31)")
        if name == "calibrate":
            p.add_argument("--budget", type=int, default=None)
    p = sub.add_parser("catalog", help="print every scenario with resolved parameters")
    p.add_argument("--convention", choices=CONVENTIONS, default="angular")
    sub.add_parser("list", help="print scenario ids")
    return parser


def _parse_modes(text):
    try:
        modes = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--modes: expected integers, got {text!r}") from None
    if not modes or any(m < 1 for m in modes):
        raise ConfigError("--modes: mode counts must be positive")
    return modes


def resolve_config(args) -> RunConfig:
    """Merge --config and command-line flags into a RunConfig."""
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"--config: cannot read {args.config}: {exc}") from None
        parse_config(text)          # syntax/semantic errors with positions
        data = json.loads(text)
    else:
        data = {}
    if args.scenario:
        if "scenario" in data and data["scenario"] != args.scenario:
            raise ConfigError("scenario: --scenario conflicts with the config file")
        data["scenario"] = args.scenario
    if "scenario" not in data:
        raise ConfigError("scenario: give --scenario or --config")
    if args.convention:
        data["convention"] = args.convention
    if args.modes and args.command != "invariance":
        data["modes"] = _parse_modes(args.modes)[0]
    integ = dict(data.get("integrator") or {})
    if args.rtol is not None:
        integ["rtol"] = args.rtol
    if args.atol is not None:
        integ["atol"] = args.atol
    if integ:
        data["integrator"] = integ
    output = dict(data.get("output") or {})
    if args.out:
        output["dir"] = args.out
    if args.format:
        output["formats"] = [args.format]
    if output:
        data["output"] = output
    if args.workers is not None:
        data["workers"] = args.workers
    return parse_config_dict(data)


def _out_dir(cfg):
    out = Path(cfg.out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _meta(cfg, extra=None):
    meta = {
        "version": __version__,
        "config": config_to_dict(cfg),
        "scenario": resolved_scenario_dict(cfg.scenario),
    }
    meta.update(extra or {})
    return meta


def cmd_simulate(cfg, args, require_open=False):
    s = cfg.scenario
    if require_open and s.mode != "open":
        raise ConfigError(f"scenario: {s.id} is a closed-system scenario; use 'simulate'")
    result = run_scenario(s, cfg.settings)
    out = _out_dir(cfg)
    header, rows = population_table(result)
    write_table(out, "populations", header, rows, cfg.formats)
    if result.emission is not None:
        header, rows = emission_table(result.emission)
        write_table(out, "emission", header, rows, cfg.formats)
    summary = result.summary()
    write_json(out / "summary.json", summary)
    write_json(out / "meta.json", _meta(cfg))
    print(json.dumps(summary, indent=2))
    return 0


def cmd_sweep(cfg, args):
    s = cfg.scenario
    if s.id not in ("fig5e_sweep", "fig5f_sweep"):
        raise ConfigError(f"scenario: {s.id} is not a sweep scenario "
                          "(fig5e_sweep, fig5f_sweep)")
    points = args.points or s.metadata.get("points", 31)
    if points < 1:
        raise ConfigError("--points must be >= 1")
    a1, a2 = sweep_axes(s.id, points)
    grid = sweep2d(s, a1, a2, "emission_probability", cfg.settings, cfg.workers)
    out = _out_dir(cfg)
    rows = list(grid.long_rows())
    if "csv" in cfg.formats:
        write_csv(out / "sweep.csv", ["axis1", "axis2", "objective"], rows)
    if "json" in cfg.formats:
        write_json(out / "sweep.json", {"axis1": a1.values, "axis2": a2.values,
                                        "objective": grid.objective})
    i, j, best = grid.argmax
    summary = {
        "scenario": s.id, "convention": s.convention,
        "axis1": {"name": a1.name, "unit": a1.unit},
        "axis2": {"name": a2.name, "unit": a2.unit},
        "objective": grid.objective_name,
        "argmax": {"i": i, "j": j, "axis1": a1.values[i], "axis2": a2.values[j],
                   "value": best},
        "failed_cells": len(grid.failures),
    }
    write_json(out / "summary.json", summary)
    write_json(out / "meta.json", _meta(cfg, {"points": points}))
    print(json.dumps(summary, indent=2))
    return 0


def cmd_calibrate(cfg, args):
    s = cfg.scenario
    template = calibration_template(s.id, cfg.convention)
    kwargs = {}
    if args.budget is not None:
        kwargs["budget"] = args.budget
    res = calibrate_pulse(template, settings=cfg.settings, workers=cfg.workers, **kwargs)
    out = _out_dir(cfg)
    summary = {
        "scenario": s.id, "convention": cfg.convention,
        "omega_max_over_2pi_MHz": res.omega_max_over_2pi_MHz,
        "omega_max_rad_per_ns": res.pulse.omega_max,
        "t_f_ns": res.t_f_ns,
        "objective": res.objective,
        "evaluations": res.evaluations,
    }
    write_json(out / "calibration.json", dict(summary, history=res.history))
    write_json(out / "meta.json", _meta(cfg))
    print(json.dumps(summary, indent=2))
    return 0


def cmd_invariance(cfg, args):
    s = cfg.scenario
    if s.id not in ("fig6a_fidelity", "fig6b_emission"):
        raise ConfigError(f"scenario: {s.id} is not a mode family "
                          "(fig6a_fidelity, fig6b_emission)")
    if args.full:
        modes = FIG6_MODES_FULL
    elif args.modes:
        modes = _parse_modes(args.modes)
    else:
        modes = FIG6_MODES
    fam = run_mode_family(s.id, modes, cfg.convention, cfg.settings, with_scaling=True)
    out = _out_dir(cfg)
    name = "final_fidelity" if s.id == "fig6a_fidelity" else "total_emission_probability"
    header = ["modes", name, "per_mode_probability", "max_cu_deviation",
              "max_ce_deviation", "max_ratio_deviation", "max_total_rate_deviation"]
    rows = []
    for m in fam.modes:
        rep = fam.scaling[m]
        per_mode = float(fam.per_mode[m][0]) if m in fam.per_mode else float("nan")
        rows.append([m, fam.values[m], per_mode, rep.max_cu_deviation,
                     rep.max_ce_deviation, rep.max_ratio_deviation,
                     rep.max_total_rate_deviation])
    write_table(out, "invariance", header, rows, cfg.formats)
    summary = {"scenario": s.id, "convention": cfg.convention, "modes": list(fam.modes),
               name: {str(m): v for m, v in fam.values.items()},
               "max_pairwise_difference": fam.spread}
    write_json(out / "summary.json", summary)
    write_json(out / "meta.json", _meta(cfg, {"modes": list(fam.modes)}))
    print(json.dumps(summary, indent=2))
    return 0


def cmd_catalog(args):
    payload = {sid: resolved_scenario_dict(get_scenario(sid, args.convention))
               for sid in SCENARIO_IDS}
    print(json.dumps(payload, indent=2))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list":
            print("\n".join(SCENARIO_IDS))
            return 0
        if args.command == "catalog":
            return cmd_catalog(args)
        cfg = resolve_config(args)
        if args.command == "simulate":
            return cmd_simulate(cfg, args)
        if args.command == "emit":
            return cmd_simulate(cfg, args, require_open=True)
        if args.command == "sweep":
            return cmd_sweep(cfg, args)
        if args.command == "calibrate":
            return cmd_calibrate(cfg, args)
        if args.command == "invariance":
            return cmd_invariance(cfg, args)
    except (ConfigError, ModelError, KeyError) as exc:
        print(f"wstate: error: {exc}", file=sys.stderr)
        return 1
    except IntegrationError as exc:
        print(f"wstate: numerical failure: {exc}", file=sys.stderr)
        return 2
    parser.error(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
