"""Declarative 1-D and 2-D parameter sweeps over either model.

A sweep substitutes grid values into a base parameter set and evaluates one
observable per cell. Cells are independent work items: evaluation order
(including thread scheduling) cannot affect the result tensor, and a cell
that fails with a domain error carries an error status without poisoning
its neighbors.
"""

import concurrent.futures
import datetime
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from . import fisher as fi
from .errors import ConfigError, RectifiError

__all__ = [
    "SweepAxis",
    "Observable",
    "SweepSpec",
    "SweepResult",
    "Extremum",
    "run_sweep",
    "evaluate_cell",
    "locate_extremum",
    "OMEGA0_FLOOR",
]

# Grids that formally reach omega0 = 0 are evaluated at this floor instead;
# the Bose occupation diverges at zero.
OMEGA0_FLOOR = 1e-6

_SCALAR_KINDS = ("fisher", "optimal_time")
_ALL_KINDS = ("populations", "steady_state", "fisher", "optimal_time")


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter and its grid (strictly increasing)."""

    param: str
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) == 0:
            raise ConfigError(f"axis {self.param}: grid must be nonempty")
        if any(not math.isfinite(v) for v in self.values):
            raise ConfigError(f"axis {self.param}: grid values must be finite")
        if len(self.values) > 1 and any(
            b <= a for a, b in zip(self.values, self.values[1:])
        ):
            raise ConfigError(f"axis {self.param}: grid must be strictly increasing")


@dataclass(frozen=True)
class Observable:
    """What to evaluate per cell.

    kind:
      populations   time trace of the population vector (needs time_grid)
      steady_state  stationary population vector
      fisher        I(theta): time-resolved with a time grid, at one time
                    with ``at_time``, in the steady state with neither
      optimal_time  (t*, I*) of the I(theta) series, or its saturating flag
                    (needs time_grid)
    """

    kind: str
    theta: Optional[str] = None
    at_time: Optional[float] = None

    def __post_init__(self):
        if self.kind not in _ALL_KINDS:
            raise ConfigError(
                f"observable.kind {self.kind!r} unknown; valid: {', '.join(_ALL_KINDS)}"
            )
        if self.kind in ("fisher", "optimal_time") and not self.theta:
            raise ConfigError(f"observable.kind = {self.kind} requires observable.theta")
        if self.kind not in ("fisher",) and self.at_time is not None:
            raise ConfigError("observable.at_time is only meaningful for fisher")


@dataclass(frozen=True)
class SweepSpec:
    """A complete, self-contained sweep description."""

    model_id: str
    base_params: object
    axis1: SweepAxis
    observable: Observable
    axis2: Optional[SweepAxis] = None
    time_grid: Optional[tuple] = None
    p0: Optional[tuple] = None
    diff_step: Optional[float] = None
    p_floor: float = fi.DEFAULT_P_FLOOR
    saturation_slope: float = 1e-3

    def __post_init__(self):
        if self.time_grid is not None:
            object.__setattr__(
                self, "time_grid", tuple(float(t) for t in self.time_grid))
        if self.p0 is not None:
            object.__setattr__(self, "p0", tuple(float(v) for v in self.p0))
        if self.p_floor is None:
            object.__setattr__(self, "p_floor", fi.DEFAULT_P_FLOOR)
        validate_spec(self)


def validate_spec(spec):
    """Reject an inconsistent spec before any evaluation, naming the field."""
    if spec.model_id not in ("tls", "multilevel"):
        raise ConfigError(f"model_id {spec.model_id!r} unknown; valid: tls, multilevel")
    if fi.model_id_of(spec.base_params) != spec.model_id:
        raise ConfigError(
            f"base_params is a {fi.model_id_of(spec.base_params)} parameter set, "
            f"but model_id = {spec.model_id}"
        )
    valid_names = fi.param_names(spec.model_id)
    for label, axis in (("axis1", spec.axis1), ("axis2", spec.axis2)):
        if axis is None:
            continue
        if axis.param not in valid_names:
            raise ConfigError(
                f"{label}.param {axis.param!r} is not a {spec.model_id} parameter; "
                f"valid: {', '.join(valid_names)}"
            )
    obs = spec.observable
    if obs.theta is not None and obs.theta not in valid_names:
        raise ConfigError(
            f"observable.theta {obs.theta!r} is not a {spec.model_id} parameter; "
            f"valid: {', '.join(valid_names)}"
        )
    time_resolved = (obs.kind == "populations"
                     or (obs.kind == "fisher" and obs.at_time is None
                         and spec.time_grid is not None))
    needs_grid = obs.kind in ("populations", "optimal_time")
    if needs_grid and spec.time_grid is None:
        raise ConfigError(f"observable.kind = {obs.kind} requires a time grid")
    if obs.kind == "fisher" and obs.at_time is not None and spec.time_grid is not None:
        raise ConfigError(
            "observable.at_time conflicts with a time grid; use one or the other")
    if spec.time_grid is not None:
        grid = spec.time_grid
        if len(grid) == 0:
            raise ConfigError("time_grid must be nonempty")
        if any(t < 0 for t in grid):
            raise ConfigError("time_grid must be nonnegative")
        if len(grid) > 1 and any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("time_grid must be strictly increasing")
    if spec.axis2 is not None and (time_resolved or obs.kind == "steady_state"):
        raise ConfigError(
            "axis2: 2-D sweeps require a scalar observable "
            "(fisher at a fixed time, steady-state fisher, or optimal_time)"
        )
    if spec.observable.at_time is not None and spec.observable.at_time < 0:
        raise ConfigError("observable.at_time must be >= 0")


def component_names(spec):
    """Column names of one cell's value vector."""
    kind = spec.observable.kind
    if kind in ("populations", "steady_state"):
        if spec.model_id == "tls":
            return ("p1", "p2")
        return ("p0", "pD0", "pD1", "pA0", "pA1")
    if kind == "fisher":
        return ("I",)
    return ("t_opt", "I_opt")


def is_time_resolved(spec):
    return (spec.observable.kind == "populations"
            or (spec.observable.kind == "fisher"
                and spec.observable.at_time is None
                and spec.time_grid is not None))


def _cell_params(spec, i, j):
    params = spec.base_params
    value = spec.axis1.values[i]
    if spec.axis1.param == "omega0":
        value = max(value, OMEGA0_FLOOR)
    params = fi.with_param(params, spec.axis1.param, value)
    if spec.axis2 is not None:
        value = spec.axis2.values[j]
        if spec.axis2.param == "omega0":
            value = max(value, OMEGA0_FLOOR)
        params = fi.with_param(params, spec.axis2.param, value)
    return params


def evaluate_cell(spec, i, j=0):
    """Evaluate one cell exactly as :func:`run_sweep` would.

    Returns ``(values, status)`` where values has shape (nt, ncomp).
    """
    ncomp = len(component_names(spec))
    nt = len(spec.time_grid) if is_time_resolved(spec) else 1
    try:
        params = _cell_params(spec, i, j)
        obs = spec.observable
        if obs.kind == "populations":
            curve = fi._curve(params)
            p0 = np.array(spec.p0) if spec.p0 is not None else fi.default_p0(params)
            values = np.stack([curve.populations(p0, t) for t in spec.time_grid])
            return values, "ok"
        if obs.kind == "steady_state":
            values = fi._curve(params).steady().reshape(1, ncomp)
            return values, "ok"
        if obs.kind == "fisher":
            if spec.time_grid is not None:
                series = fi.fisher_series(
                    params, obs.theta, np.array(spec.time_grid), spec.p0,
                    diff_step=spec.diff_step, p_floor=spec.p_floor)
                return series.values.reshape(nt, 1), "ok"
            if obs.at_time is not None:
                value = fi.fisher_at_time(
                    params, obs.theta, obs.at_time, spec.p0,
                    diff_step=spec.diff_step, p_floor=spec.p_floor)
            else:
                value = fi.fisher_steady_state(
                    params, obs.theta,
                    diff_step=spec.diff_step, p_floor=spec.p_floor)
            return np.array([[value]]), "ok"
        # optimal_time
        series = fi.fisher_series(
            params, obs.theta, np.array(spec.time_grid), spec.p0,
            diff_step=spec.diff_step, p_floor=spec.p_floor)
        opt = fi.find_optimal_time(series, saturation_slope=spec.saturation_slope)
        if opt.saturating:
            return np.array([[math.nan, opt.value]]), "saturating"
        return np.array([[opt.time, opt.value]]), "ok"
    except RectifiError as exc:
        return np.full((nt, ncomp), math.nan), f"{type(exc).__name__}: {exc}"


@dataclass
class SweepResult:
    """Result tensor plus spec echo and provenance.

    ``values`` has shape (n1, n2, nt, ncomp); missing axes are kept as
    singleton dimensions so positions are unambiguous. ``status`` has shape
    (n1, n2) and holds "ok", "saturating", or an error code; a cell is never
    silently NaN. Provenance is descriptive only and not part of equality.
    """

    spec: SweepSpec
    values: np.ndarray
    status: np.ndarray
    provenance: dict = field(compare=False)

    @property
    def shape(self):
        return self.values.shape

    def ok_mask(self):
        return np.isin(self.status, ("ok", "saturating"))


def run_sweep(spec, threads=1):
    """Evaluate every cell of the sweep; deterministic for any thread count.

    Results are reduced positionally, so scheduling cannot reorder them,
    and each cell equals its standalone :func:`evaluate_cell` bit for bit.
    """
    n1 = len(spec.axis1.values)
    n2 = len(spec.axis2.values) if spec.axis2 is not None else 1
    ncomp = len(component_names(spec))
    nt = len(spec.time_grid) if is_time_resolved(spec) else 1
    values = np.full((n1, n2, nt, ncomp), math.nan)
    status = np.full((n1, n2), "", dtype=object)
    cells = [(i, j) for i in range(n1) for j in range(n2)]
    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda c: evaluate_cell(spec, *c), cells))
    else:
        outcomes = [evaluate_cell(spec, i, j) for i, j in cells]
    for (i, j), (cell_values, cell_status) in zip(cells, outcomes):
        values[i, j] = cell_values
        status[i, j] = cell_status
    provenance = {
        "code_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "deterministic": True,   # no RNG, positional reduction, thread-count free
        "threads": threads,
    }
    return SweepResult(spec=spec, values=values, status=status,
                       provenance=provenance)


@dataclass(frozen=True)
class Extremum:
    """Location of the maximal finite cell of a scalar sweep."""

    coords: dict
    indices: tuple
    value: float
    refined_coord: float
    refined_value: float


def locate_extremum(result, axis, component=None):
    """Find the maximal ok cell and refine along one named sweep axis.

    The observable must be scalar per cell (a single component, or one
    selected by name). Ties break to the lowest flat index. Refinement fits
    a parabola through the cell and its two neighbors along ``axis`` (when
    both exist and are ok) and returns the vertex.
    """
    spec = result.spec
    comps = component_names(spec)
    if is_time_resolved(spec):
        raise ConfigError("locate_extremum requires a scalar observable")
    if component is None:
        if len(comps) != 1:
            raise ConfigError(
                f"observable has components {comps}; pass component= to select one")
        ci = 0
    else:
        if component not in comps:
            raise ConfigError(f"component {component!r} not in {comps}")
        ci = comps.index(component)
    axes = {spec.axis1.param: 0}
    if spec.axis2 is not None:
        axes[spec.axis2.param] = 1
    if axis not in axes:
        raise ConfigError(f"axis {axis!r} is not swept; swept: {list(axes)}")
    field2d = result.values[:, :, 0, ci]
    ok = result.ok_mask() & np.isfinite(field2d)
    if not ok.any():
        raise ConfigError("all sweep cells failed; no extremum exists")
    masked = np.where(ok, field2d, -math.inf)
    flat = int(np.argmax(masked))
    i, j = np.unravel_index(flat, masked.shape)
    value = float(field2d[i, j])
    coords = {spec.axis1.param: spec.axis1.values[i]}
    if spec.axis2 is not None:
        coords[spec.axis2.param] = spec.axis2.values[j]
    ax_index = axes[axis]
    grid = spec.axis1.values if ax_index == 0 else spec.axis2.values
    k = i if ax_index == 0 else j
    refined_coord, refined_value = float(grid[k]), value
    if 0 < k < len(grid) - 1:
        if ax_index == 0:
            neighbors_ok = ok[k - 1, j] and ok[k + 1, j]
            vs = field2d[k - 1:k + 2, j]
        else:
            neighbors_ok = ok[i, k - 1] and ok[i, k + 1]
            vs = field2d[i, k - 1:k + 2]
        if neighbors_ok:
            t_hat, v_hat = fi._parabolic_peak(np.asarray(grid[k - 1:k + 2]), vs)
            refined_coord, refined_value = t_hat, v_hat
    return Extremum(coords=coords, indices=(int(i), int(j)), value=value,
                    refined_coord=refined_coord, refined_value=refined_value)
