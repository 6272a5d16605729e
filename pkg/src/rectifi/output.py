"""CSV and sidecar-metadata writers for sweep results.

Data files are deterministic: shortest round-trip decimal formatting, fixed
column order, no timestamps. Provenance (versions, timestamp, spec echo)
goes to a sidecar file with the same basename and a ``.meta`` suffix.
"""

import csv
import dataclasses
import json
import platform
import sys
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from . import sweep as sw
from .errors import ConfigError

__all__ = ["write_csv", "write_meta", "write_result_files", "write_preset_files",
           "format_number"]

# Short column-suffix tags for swept parameters in wide layout.
AXIS_TAGS = {
    "omega0": "w", "eps_d": "ed", "eps_a": "ea",
    "mu_L": "muL", "mu_R": "muR", "T_L": "TL", "T_R": "TR",
    "gamma_hyb": "g", "gamma_L": "gL", "gamma_R": "gR",
    "gamma_DA": "gDA", "gamma_AD": "gAD", "gamma0": "g0",
    "t_vib": "Tv", "lambda": "lam",
}

_COMP_UNITS = {"I": "eV^-2", "I_opt": "eV^-2"}


def format_number(value):
    """Shortest decimal that round-trips to the same float."""
    return repr(float(value))


def _units_line(columns, time_unit):
    parts = []
    for col in columns:
        if col == "status":
            continue
        if col in ("t", "t_opt"):
            unit = time_unit
        elif col == "I" or col == "I_opt" or col.startswith("I_"):
            unit = "eV^-2"
        elif col.startswith("p"):
            unit = "dimensionless"
        else:
            unit = "eV"   # swept physical parameters
        parts.append(f"{col} [{unit}]")
    return "# units: " + "; ".join(parts)


def _wide_table(result, time_display):
    spec = result.spec
    if spec.axis2 is not None:
        raise ConfigError("wide layout supports one sweep axis only")
    if not sw.is_time_resolved(spec):
        raise ConfigError("wide layout requires a time-resolved observable")
    comps = sw.component_names(spec)
    axis = spec.axis1
    bad = [(i, result.status[i, 0]) for i in range(len(axis.values))
           if result.status[i, 0] != "ok"]
    if bad:
        i, status = bad[0]
        raise ConfigError(
            f"wide layout requires every cell ok; cell {axis.param} = "
            f"{axis.values[i]} failed with: {status}")
    tag = AXIS_TAGS.get(axis.param, axis.param)
    header = ["t"]
    for v in axis.values:
        suffix = "" if len(axis.values) == 1 else f"_{tag}{format_number(v)}"
        header.extend(f"{c}{suffix}" for c in comps)
    times = time_display if time_display is not None else spec.time_grid
    rows = []
    for k, t in enumerate(times):
        row = [format_number(t)]
        for i in range(len(axis.values)):
            row.extend(format_number(x) for x in result.values[i, 0, k, :])
        rows.append(row)
    return header, rows


def _long_table(result, time_display):
    spec = result.spec
    comps = sw.component_names(spec)
    time_resolved = sw.is_time_resolved(spec)
    header = [spec.axis1.param]
    if spec.axis2 is not None:
        header.append(spec.axis2.param)
    if time_resolved:
        header.append("t")
    header.extend(comps)
    header.append("status")
    times = time_display if time_display is not None else spec.time_grid
    if not time_resolved:
        times = (None,)
    n2 = len(spec.axis2.values) if spec.axis2 is not None else 1
    rows = []
    for i, v1 in enumerate(spec.axis1.values):
        for j in range(n2):
            status = result.status[i, j]
            for k, t in enumerate(times):
                row = [format_number(v1)]
                if spec.axis2 is not None:
                    row.append(format_number(spec.axis2.values[j]))
                if time_resolved:
                    row.append(format_number(t))
                row.extend(format_number(x) for x in result.values[i, j, k, :])
                row.append(status)
                rows.append(row)
    return header, rows


def write_csv(stream, result, layout="long", time_display=None,
              time_unit="1/eV"):
    """Write a sweep result as CSV with a leading ``# units:`` comment.

    Wide layout (one column group per axis value) needs a 1-D time-resolved
    sweep with every cell ok; long layout handles everything and carries a
    status column.
    """
    if layout == "wide":
        header, rows = _wide_table(result, time_display)
    elif layout == "long":
        header, rows = _long_table(result, time_display)
    else:
        raise ConfigError(f"unknown layout {layout!r}; valid: wide, long")
    stream.write(_units_line(header, time_unit) + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _spec_echo(spec):
    echo = {
        "model_id": spec.model_id,
        "base_params": dataclasses.asdict(spec.base_params),
        "axis1": {"param": spec.axis1.param, "values": list(spec.axis1.values)},
        "axis2": None if spec.axis2 is None else
                 {"param": spec.axis2.param, "values": list(spec.axis2.values)},
        "observable": dataclasses.asdict(spec.observable),
        "time_grid": None if spec.time_grid is None else
                     {"min": spec.time_grid[0], "max": spec.time_grid[-1],
                      "count": len(spec.time_grid)},
        "p0": None if spec.p0 is None else list(spec.p0),
        "diff_step": spec.diff_step,
        "p_floor": spec.p_floor,
    }
    return echo


def write_meta(path, result, preset_id=None, description=None):
    """Sidecar provenance: spec echo, versions, timestamp."""
    meta = {
        "preset": preset_id,
        "description": description,
        "spec": _spec_echo(result.spec),
        "provenance": result.provenance,
        "versions": {
            "rectifi": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    }
    Path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def write_result_files(out_path, result, layout="long", time_display=None,
                       time_unit="1/eV", preset_id=None, description=None):
    """Write ``<out>`` as CSV and ``<out stem>.meta`` as provenance JSON."""
    out_path = Path(out_path)
    with out_path.open("w", encoding="utf-8", newline="") as stream:
        write_csv(stream, result, layout=layout, time_display=time_display,
                  time_unit=time_unit)
    write_meta(out_path.with_suffix(".meta"), result, preset_id=preset_id,
               description=description)
    return out_path


def run_preset(preset, threads=1):
    """Evaluate a preset's sweep."""
    return sw.run_sweep(preset.spec, threads=threads)


def write_preset_files(preset, out_path, threads=1):
    """Run a preset and write its CSV plus sidecar."""
    result = sw.run_sweep(preset.spec, threads=threads)
    return write_result_files(
        out_path, result, layout=preset.layout,
        time_display=preset.time_display, time_unit=preset.time_unit,
        preset_id=preset.id, description=preset.description)
