"""Flat key-value configuration files for sweeps.

Format: one ``section.key = value`` per line, ``#`` comments, UTF-8.
Unknown keys are hard errors (with a nearest-match suggestion); every
physical quantity is in eV. The full key registry:

    model.id             tls | multilevel                        (required)
    model.eps_d          donor energy                            (required)
    model.eps_a          acceptor energy                         (required)
    model.gamma_hyb      two-level rate prefactor      [tls]     (default 0.7)
    model.gamma_L/_R     lead hybridizations           [5-state] (default 1.0)
    model.gamma_DA/_AD   transfer prefactors           [5-state] (default 1.0)
    model.p0             initial distribution, comma list        (model default)
    leads.mu_L           left chemical potential                 (default 1.0)
    leads.mu_R           right chemical potential                (default -1.0)
    leads.T_L            left temperature                        (default 2.0)
    leads.T_R            right temperature                       (default 1.0)
    vibration.omega0     mode energy                             (required)
    vibration.lambda     polaron displacement          [5-state] (default 0.0)
    vibration.gamma0     vibrational relaxation        [5-state] (default 0.5)
    vibration.t_vib      phonon bath temperature       [5-state] (default T_L)
    sweep.axis1          "<param> <min> <max> <count> [log]"
                         or "<param> list v1,v2,..."             (required)
    sweep.axis2          second axis, same format                (optional)
    observable.kind      populations | steady_state | fisher | optimal_time
                                                                 (required)
    observable.theta     target parameter (fisher / optimal_time)
    observable.at_time   evaluate fisher at one time             (optional)
    time.min/max/count   uniform time grid in 1/eV
    time.list            explicit time grid, comma list
    numerics.fd_step     finite-difference step override
    numerics.p_floor     positivity floor               (default 1e-12)
    numerics.saturation_slope
                         saturating-series classifier   (default 1e-3)

The six required keys form a minimal valid file; everything else has the
documented default (lead defaults are the reference junction's).
"""

import difflib
import math
from pathlib import Path

import numpy as np

from .distributions import Reservoir
from .errors import ConfigError, DomainError
from .multilevel import MultilevelParams
from .sweep import Observable, SweepAxis, SweepSpec
from .tls import JunctionParams

__all__ = ["load_config", "parse_config", "build_spec", "serialize_config"]

_FLOAT_KEYS = {
    "model.eps_d", "model.eps_a", "model.gamma_hyb", "model.gamma_L",
    "model.gamma_R", "model.gamma_DA", "model.gamma_AD",
    "leads.mu_L", "leads.mu_R", "leads.T_L", "leads.T_R",
    "vibration.omega0", "vibration.lambda", "vibration.gamma0",
    "vibration.t_vib", "observable.at_time", "time.min", "time.max",
    "numerics.fd_step", "numerics.p_floor", "numerics.saturation_slope",
}
_INT_KEYS = {"time.count"}
_LIST_KEYS = {"model.p0", "time.list"}
_STR_KEYS = {"model.id", "observable.kind", "observable.theta"}
_AXIS_KEYS = {"sweep.axis1", "sweep.axis2"}

ALL_KEYS = sorted(_FLOAT_KEYS | _INT_KEYS | _LIST_KEYS | _STR_KEYS | _AXIS_KEYS)

REQUIRED_KEYS = ("model.id", "model.eps_d", "model.eps_a",
                 "vibration.omega0", "sweep.axis1", "observable.kind")

_TLS_ONLY = {"model.gamma_hyb"}
_ML_ONLY = {"model.gamma_L", "model.gamma_R", "model.gamma_DA",
            "model.gamma_AD", "vibration.lambda", "vibration.gamma0",
            "vibration.t_vib"}


def parse_config(text):
    """Parse the raw key-value syntax; returns {key: (raw value, line number)}."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in ALL_KEYS:
            hint = difflib.get_close_matches(key, ALL_KEYS, n=1)
            suffix = f"; did you mean {hint[0]!r}?" if hint else ""
            raise ConfigError(f"line {lineno}: unknown key {key!r}{suffix}")
        if key in entries:
            raise ConfigError(
                f"line {lineno}: duplicate key {key!r} "
                f"(first set on line {entries[key][1]})")
        if not value:
            raise ConfigError(f"line {lineno}: key {key!r} has no value")
        entries[key] = (value, lineno)
    return entries


def _typed(entries):
    values = {}
    for key, (raw, lineno) in entries.items():
        try:
            if key in _FLOAT_KEYS:
                values[key] = float(raw)
            elif key in _INT_KEYS:
                values[key] = int(raw)
            elif key in _LIST_KEYS:
                values[key] = tuple(float(v) for v in raw.split(","))
            elif key in _AXIS_KEYS:
                values[key] = _parse_axis(raw)
            else:
                values[key] = raw
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: key {key}: {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: key {key}: {exc}") from exc
    return values


def _parse_axis(raw):
    tokens = raw.split()
    if len(tokens) >= 2 and tokens[1] == "list":
        if len(tokens) != 3:
            raise ConfigError(
                f"axis {raw!r}: expected '<param> list v1,v2,...' "
                "(values comma-joined, no spaces)")
        return SweepAxis(tokens[0], tuple(float(v) for v in tokens[2].split(",")))
    if len(tokens) not in (4, 5):
        raise ConfigError(
            f"axis {raw!r}: expected '<param> <min> <max> <count> [log]' "
            "or '<param> list v1,v2,...'")
    param, lo, hi, count = tokens[0], float(tokens[1]), float(tokens[2]), tokens[3]
    count = int(count)
    log = False
    if len(tokens) == 5:
        if tokens[4] != "log":
            raise ConfigError(f"axis {raw!r}: trailing token must be 'log'")
        log = True
    if count < 1:
        raise ConfigError(f"axis {raw!r}: count must be >= 1")
    if count == 1:
        if lo != hi:
            raise ConfigError(f"axis {raw!r}: count 1 requires min == max")
        return SweepAxis(param, (lo,))
    if not lo < hi:
        raise ConfigError(f"axis {raw!r}: min must be < max")
    if log:
        if lo <= 0:
            raise ConfigError(f"axis {raw!r}: log spacing requires min > 0")
        values = tuple(np.geomspace(lo, hi, count))
    else:
        values = tuple(np.linspace(lo, hi, count))
    return SweepAxis(param, values)


def build_spec(values):
    """Assemble a validated SweepSpec from typed config values."""
    missing = [k for k in REQUIRED_KEYS if k not in values]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    model_id = values["model.id"]
    if model_id not in ("tls", "multilevel"):
        raise ConfigError(f"model.id must be tls or multilevel, got {model_id!r}")
    wrong = _ML_ONLY if model_id == "tls" else _TLS_ONLY
    for key in sorted(wrong & values.keys()):
        raise ConfigError(f"key {key} is not valid for model.id = {model_id}")

    def reservoir(side, mu_default, t_default):
        mu = values.get(f"leads.mu_{side}", mu_default)
        temp = values.get(f"leads.T_{side}", t_default)
        try:
            return Reservoir(mu, temp)
        except DomainError as exc:
            raise ConfigError(f"leads.T_{side}/leads.mu_{side}: {exc}") from exc

    left = reservoir("L", 1.0, 2.0)
    right = reservoir("R", -1.0, 1.0)
    try:
        if model_id == "tls":
            params = JunctionParams(
                eps_d=values["model.eps_d"], eps_a=values["model.eps_a"],
                omega0=values["vibration.omega0"],
                gamma_hyb=values.get("model.gamma_hyb", 0.7),
                left=left, right=right)
        else:
            params = MultilevelParams(
                eps_d=values["model.eps_d"], eps_a=values["model.eps_a"],
                omega0=values["vibration.omega0"], left=left, right=right,
                gamma_L=values.get("model.gamma_L", 1.0),
                gamma_R=values.get("model.gamma_R", 1.0),
                gamma_DA=values.get("model.gamma_DA", 1.0),
                gamma_AD=values.get("model.gamma_AD", 1.0),
                gamma0=values.get("vibration.gamma0", 0.5),
                lam=values.get("vibration.lambda", 0.0),
                t_vib=values.get("vibration.t_vib"))
    except DomainError as exc:
        raise ConfigError(f"model parameters: {exc}") from exc

    time_grid = None
    if "time.list" in values:
        if any(k in values for k in ("time.min", "time.max", "time.count")):
            raise ConfigError("time.list conflicts with time.min/max/count")
        time_grid = values["time.list"]
    else:
        given = [k for k in ("time.min", "time.max", "time.count") if k in values]
        if given and len(given) != 3:
            raise ConfigError("time.min, time.max and time.count go together; "
                              f"got only {', '.join(given)}")
        if given:
            if values["time.count"] < 1:
                raise ConfigError("time.count must be >= 1")
            time_grid = tuple(np.linspace(values["time.min"], values["time.max"],
                                          values["time.count"]))

    observable = Observable(
        kind=values["observable.kind"],
        theta=values.get("observable.theta"),
        at_time=values.get("observable.at_time"))
    return SweepSpec(
        model_id=model_id,
        base_params=params,
        axis1=values["sweep.axis1"],
        axis2=values.get("sweep.axis2"),
        observable=observable,
        time_grid=time_grid,
        p0=values.get("model.p0"),
        diff_step=values.get("numerics.fd_step"),
        p_floor=values.get("numerics.p_floor", 1e-12),
        saturation_slope=values.get("numerics.saturation_slope", 1e-3),
    )


def load_config(path):
    """Read, parse and validate a sweep configuration file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ConfigError(f"config {path} is not valid UTF-8: {exc}") from exc
    return build_spec(_typed(parse_config(text)))


def _fmt(value):
    return repr(float(value))


def serialize_config(spec):
    """Emit a config that reloads to a bit-identical sweep.

    Axis and time grids are written as explicit value lists, so arbitrary
    grids round-trip exactly.
    """
    params = spec.base_params
    lines = [f"model.id = {spec.model_id}",
             f"model.eps_d = {_fmt(params.eps_d)}",
             f"model.eps_a = {_fmt(params.eps_a)}"]
    if spec.model_id == "tls":
        lines.append(f"model.gamma_hyb = {_fmt(params.gamma_hyb)}")
    else:
        lines.append(f"model.gamma_L = {_fmt(params.gamma_L)}")
        lines.append(f"model.gamma_R = {_fmt(params.gamma_R)}")
        lines.append(f"model.gamma_DA = {_fmt(params.gamma_DA)}")
        lines.append(f"model.gamma_AD = {_fmt(params.gamma_AD)}")
    if spec.p0 is not None:
        lines.append("model.p0 = " + ",".join(_fmt(v) for v in spec.p0))
    lines.append(f"leads.mu_L = {_fmt(params.left.mu)}")
    lines.append(f"leads.mu_R = {_fmt(params.right.mu)}")
    lines.append(f"leads.T_L = {_fmt(params.left.temperature)}")
    lines.append(f"leads.T_R = {_fmt(params.right.temperature)}")
    lines.append(f"vibration.omega0 = {_fmt(params.omega0)}")
    if spec.model_id == "multilevel":
        lines.append(f"vibration.lambda = {_fmt(params.lam)}")
        lines.append(f"vibration.gamma0 = {_fmt(params.gamma0)}")
        lines.append(f"vibration.t_vib = {_fmt(params.t_vib)}")
    for name, axis in (("sweep.axis1", spec.axis1), ("sweep.axis2", spec.axis2)):
        if axis is not None:
            joined = ",".join(_fmt(v) for v in axis.values)
            lines.append(f"{name} = {axis.param} list {joined}")
    lines.append(f"observable.kind = {spec.observable.kind}")
    if spec.observable.theta is not None:
        lines.append(f"observable.theta = {spec.observable.theta}")
    if spec.observable.at_time is not None:
        lines.append(f"observable.at_time = {_fmt(spec.observable.at_time)}")
    if spec.time_grid is not None:
        lines.append("time.list = " + ",".join(_fmt(t) for t in spec.time_grid))
    if spec.diff_step is not None:
        lines.append(f"numerics.fd_step = {_fmt(spec.diff_step)}")
    lines.append(f"numerics.p_floor = {_fmt(spec.p_floor)}")
    lines.append(f"numerics.saturation_slope = {_fmt(spec.saturation_slope)}")
    return "\n".join(lines) + "\n"
