"""Plot-ready tables. Floats are written with 17 significant digits so that
reading a file back reproduces the in-memory values exactly."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

FLOAT_FORMAT = "{:.17g}"


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT.format(float(value))
    return str(value)


def write_csv(path, header, rows):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def read_csv(path):
    """Return ``(header, float array)``."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = [[float(v) for v in row] for row in reader]
    return header, np.array(data)


def write_json(path, payload):
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n",
                    encoding="utf-8")
    return path


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def population_table(result):
    """Header and rows: t_ns, P_u, P_e, P_mode_1..N, [P_sink], omega_rad_per_ns."""
    traj = result.trajectory
    n = result.scenario.params.n_modes
    pops = traj.populations
    header = ["t_ns", "P_u", "P_e"] + [f"P_mode_{i}" for i in range(1, n + 1)]
    if result.scenario.mode == "open":
        header.append("P_sink")
    header.append("omega_rad_per_ns")
    rows = np.column_stack([traj.times, pops, traj.pulse_values])
    return header, rows


def emission_table(report):
    """Header and rows: t_ns, rate_1..N_per_ns, cumP_1..N, cumP_total."""
    n = report.per_mode_rates.shape[1]
    header = (["t_ns"] + [f"rate_{i}_per_ns" for i in range(1, n + 1)]
              + [f"cumP_{i}" for i in range(1, n + 1)] + ["cumP_total"])
    rows = np.column_stack([report.times, report.per_mode_rates,
                            report.per_mode_probabilities, report.cumulative_total])
    return header, rows


def write_table(out_dir, stem, header, rows, formats):
    out_dir = Path(out_dir)
    written = []
    if "csv" in formats:
        written.append(write_csv(out_dir / f"{stem}.csv", header, rows))
    if "json" in formats:
        cols = np.asarray(rows, dtype=float).T if len(rows) else [[] for _ in header]
        written.append(write_json(out_dir / f"{stem}.json",
                                  {h: list(map(float, c)) for h, c in zip(header, cols)}))
    return written
