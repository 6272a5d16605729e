"""Classical Fisher information of the population distribution.

For a target parameter theta, ``I(theta) = sum_i (d p_i / d theta)^2 / p_i``
over the populations at a given time (or in the steady state). Derivatives
are taken with the initial distribution held fixed: the information is
carried entirely by the dynamics, not by the preparation.

The default differentiation is a central finite difference of the full
propagation, with the model rebuilt at theta +/- h. For the two-level model
a closed-form chain-rule evaluation is available as an independent oracle
and fast path.
"""

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import multilevel as ml
from . import tls
from .distributions import Reservoir
from .errors import DomainError, RectifiError, SmallProbabilityError

__all__ = [
    "FisherSeries",
    "OptimalTime",
    "fisher_at_time",
    "fisher_steady_state",
    "fisher_series",
    "find_optimal_time",
    "model_id_of",
    "param_names",
    "get_param",
    "with_param",
    "default_p0",
]

DEFAULT_P_FLOOR = 1e-12
# Optimal finite-difference step for a roughly unit-curvature quotient.
FD_STEP_SCALE = float(np.finfo(float).eps) ** (1.0 / 3.0)
# Parameters that must stay positive; the step is capped to half the value.
_POSITIVE_PARAMS = frozenset(
    {"omega0", "T_L", "T_R", "gamma_hyb", "gamma_L", "gamma_R",
     "gamma_DA", "gamma_AD", "gamma0", "t_vib"}
)

_RESERVOIR_PARAMS = {
    "mu_L": ("left", "mu"),
    "T_L": ("left", "temperature"),
    "mu_R": ("right", "mu"),
    "T_R": ("right", "temperature"),
}


def model_id_of(params):
    """Short identifier of the model a parameter set belongs to."""
    if isinstance(params, tls.JunctionParams):
        return "tls"
    if isinstance(params, ml.MultilevelParams):
        return "multilevel"
    raise DomainError(f"not a model parameter set: {type(params).__name__}")


def param_names(model_id):
    """Valid Fisher target names for a model."""
    if model_id == "tls":
        return tls.TLS_PARAM_NAMES
    if model_id == "multilevel":
        return ml.MULTILEVEL_PARAM_NAMES
    raise DomainError(f"unknown model id {model_id!r}; valid: tls, multilevel")


def _check_theta(params, theta):
    names = param_names(model_id_of(params))
    if theta not in names:
        raise DomainError(
            f"parameter {theta!r} is not a {model_id_of(params)} parameter; "
            f"valid: {', '.join(names)}"
        )


def _attr_of(theta):
    return "lam" if theta == "lambda" else theta


def get_param(params, theta):
    """Read a named physical parameter, reaching into the reservoirs."""
    _check_theta(params, theta)
    if theta in _RESERVOIR_PARAMS:
        res_name, attr = _RESERVOIR_PARAMS[theta]
        return getattr(getattr(params, res_name), attr)
    return getattr(params, _attr_of(theta))


def with_param(params, theta, value):
    """A copy of ``params`` with one named parameter replaced."""
    _check_theta(params, theta)
    if theta in _RESERVOIR_PARAMS:
        res_name, attr = _RESERVOIR_PARAMS[theta]
        res = getattr(params, res_name)
        new_res = Reservoir(**{**{"mu": res.mu, "temperature": res.temperature},
                               attr: value})
        return dataclasses.replace(params, **{res_name: new_res})
    return dataclasses.replace(params, **{_attr_of(theta): value})


def default_p0(params):
    """Model default initial distribution (electron on the donor / empty)."""
    if model_id_of(params) == "tls":
        return np.array(tls.DEFAULT_P0_TLS)
    return np.array(ml.DEFAULT_P0_MULTILEVEL)


def default_step(params, theta):
    """Central-difference step: cbrt(eps) * max(|theta|, 1 eV), kept feasible.

    For positivity-constrained parameters the step is capped at half the
    current value so theta - h stays in the domain.
    """
    value = get_param(params, theta)
    h = FD_STEP_SCALE * max(abs(value), 1.0)
    if theta in _POSITIVE_PARAMS and value > 0:
        h = min(h, 0.5 * value)
    return h


# --------------------------------------------------------------------------
# per-model propagation handles (one rate construction each)

class _TwoLevelCurve:
    def __init__(self, params):
        rates = tls.tls_rates(params)
        self.pss = tls.tls_steady_state(rates)
        self.geff = tls.tls_decay_rate(rates, params.gamma_hyb)

    def populations(self, p0, t):
        return tls.relax_populations(self.pss, self.geff, p0, t)

    def steady(self):
        return self.pss


class _FiveStateCurve:
    def __init__(self, params):
        self.gen = ml.multilevel_generator(ml.multilevel_rates(params))
        self._steady = None

    def populations(self, p0, t):
        return ml.propagate_multilevel(p0, t, self.gen)

    def steady(self):
        if self._steady is None:
            self._steady = ml.multilevel_steady_state(self.gen)
        return self._steady


def _curve(params):
    if model_id_of(params) == "tls":
        return _TwoLevelCurve(params)
    return _FiveStateCurve(params)


def _rate_scale(params):
    if model_id_of(params) == "tls":
        return params.gamma_hyb
    return max(params.gamma_L, params.gamma_R, params.gamma_DA,
               params.gamma_AD, params.gamma0, 1e-300)


# --------------------------------------------------------------------------
# assembly of the information quotient

def _quotient(p_mid, deriv, p_floor):
    """Sum of squared derivatives over populations, with a positivity floor.

    Components whose derivative vanishes identically contribute zero without
    dividing (their limit), so structurally empty states are harmless; a
    nonzero derivative over a sub-floor population raises instead.
    """
    total = 0.0
    for i in range(len(p_mid)):
        d = deriv[i]
        if d == 0.0:
            continue
        p = p_mid[i]
        if p < p_floor:
            raise SmallProbabilityError(i, p, p_floor)
        total += d * d / p
    return total


class _CentralDifference:
    """I(theta) evaluator sharing three model builds across a time grid."""

    def __init__(self, params, theta, p0, h, p_floor):
        self.base = _curve(params)
        value = get_param(params, theta)
        self.plus = _curve(with_param(params, theta, value + h))
        self.minus = _curve(with_param(params, theta, value - h))
        self.h = h
        self.p0 = p0
        self.p_floor = p_floor

    def at_time(self, t):
        if t == 0.0:
            return 0.0
        p_mid = self.base.populations(self.p0, t)
        dp = (self.plus.populations(self.p0, t)
              - self.minus.populations(self.p0, t)) / (2.0 * self.h)
        return _quotient(p_mid, dp, self.p_floor)

    def at_steady_state(self):
        dp = (self.plus.steady() - self.minus.steady()) / (2.0 * self.h)
        return _quotient(self.base.steady(), dp, self.p_floor)


class _AnalyticChain:
    """Closed-form I(theta) for the two-level model.

    Differentiates p(t) = p_ss + (p(0) - p_ss) e^{-geff t} through the four
    rate factors, using the analytic Fermi derivatives.
    """

    def __init__(self, params, theta, p0, p_floor):
        if model_id_of(params) != "tls":
            raise DomainError(
                "the analytic chain is only available for the two-level model"
            )
        rates = tls.tls_rates(params)
        dr = tls.tls_rates_derivative(params, theta)
        sigma = rates.total
        down = rates.downward
        self.pss = tls.tls_steady_state(rates)
        self.geff = tls.tls_decay_rate(rates, params.gamma_hyb)
        dsigma = sum(dr)
        ddown = dr[2] + dr[3]
        self.dp1ss = (ddown * sigma - down * dsigma) / sigma**2
        if theta == "gamma_hyb":
            self.dgeff = sigma
        else:
            self.dgeff = params.gamma_hyb * dsigma
        self.p0 = p0
        self.p_floor = p_floor

    def _dp1(self, t):
        decay = math.exp(-self.geff * t)
        return (self.dp1ss * (1.0 - decay)
                - (self.p0[0] - self.pss[0]) * t * self.dgeff * decay)

    def at_time(self, t):
        if t == 0.0:
            return 0.0
        p_mid = tls.relax_populations(self.pss, self.geff, self.p0, t)
        dp1 = self._dp1(t)
        return _quotient(p_mid, (dp1, -dp1), self.p_floor)

    def at_steady_state(self):
        return _quotient(self.pss, (self.dp1ss, -self.dp1ss), self.p_floor)


def _evaluator(params, theta, p0, diff_step, method, p_floor):
    _check_theta(params, theta)
    if p_floor is None:
        p_floor = DEFAULT_P_FLOOR
    if p0 is None:
        p0 = default_p0(params)
    else:
        p0 = np.asarray(p0, dtype=float)
        n = 2 if model_id_of(params) == "tls" else 5
        if p0.shape != (n,):
            raise DomainError(f"p0 must have {n} components, got shape {p0.shape}")
        if abs(p0.sum() - 1.0) > 1e-12 or np.any(p0 < -1e-12):
            raise DomainError(f"p0 is not a probability distribution: {p0}")
    if method is None:
        method = "central_fd"
    if method == "central_fd":
        h = diff_step if diff_step is not None else default_step(params, theta)
        if h <= 0:
            raise DomainError(f"diff_step must be > 0, got {h}")
        return _CentralDifference(params, theta, p0, h, p_floor), h
    if method == "analytic_chain":
        return _AnalyticChain(params, theta, p0, p_floor), 0.0
    raise DomainError(
        f"unknown differentiation method {method!r}; "
        "valid: central_fd, analytic_chain"
    )


def fisher_at_time(params, theta, t, p0=None, *, diff_step=None,
                   method=None, p_floor=DEFAULT_P_FLOOR):
    """Classical Fisher information of the populations at one time.

    ``t`` is in 1/eV. At ``t = 0`` the result is exactly zero: the initial
    distribution is held independent of theta. Units of the result are
    1/theta-units^2 (1/eV^2 for every supported theta).
    """
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    ev, _ = _evaluator(params, theta, p0, diff_step, method, p_floor)
    return ev.at_time(t)


def fisher_steady_state(params, theta, *, diff_step=None, method=None,
                        p_floor=DEFAULT_P_FLOOR):
    """Fisher information of the stationary populations.

    Equals the long-time limit of :func:`fisher_at_time`.
    """
    ev, _ = _evaluator(params, theta, None, diff_step, method, p_floor)
    return ev.at_steady_state()


@dataclass
class FisherSeries:
    """I(theta) on a time grid, with the metadata needed to interpret it.

    ``times`` are in 1/eV. ``diff_step`` is the finite-difference step used
    (0.0 for the analytic chain). The attached evaluator allows continuous
    refinement between grid points; it is not part of the value semantics.
    """

    model_id: str
    theta: str
    times: np.ndarray
    values: np.ndarray
    diff_step: float
    method: str
    unit: str = "eV^-2"
    time_unit: str = "1/eV"
    time_tolerance: float = 1e-4
    evaluator: Optional[Callable[[float], float]] = field(
        default=None, repr=False, compare=False)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.ndim != 1 or len(self.times) == 0:
            raise DomainError("time grid must be a nonempty 1-d array")
        if len(self.times) != len(self.values):
            raise DomainError("times and values must have equal length")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise DomainError("time grid must be strictly increasing")
        if np.any(self.values < 0):
            raise DomainError("Fisher information values must be nonnegative")


def fisher_series(params, theta, times, p0=None, *, diff_step=None,
                  method=None, p_floor=DEFAULT_P_FLOOR):
    """Evaluate I(theta) on a time grid.

    The model is built once per theta perturbation (three builds for the
    central difference, one for the analytic chain) and shared across the
    whole grid. Errors are annotated with the failing grid index.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise DomainError("time grid must be a nonempty 1-d array")
    if np.any(times < 0):
        raise DomainError("time grid must be nonnegative")
    if len(times) > 1 and not np.all(np.diff(times) > 0):
        raise DomainError("time grid must be strictly increasing")
    ev, h = _evaluator(params, theta, p0, diff_step, method, p_floor)
    values = np.empty_like(times)
    for i, t in enumerate(times):
        try:
            values[i] = ev.at_time(t)
        except RectifiError as exc:
            exc.args = (f"{exc} [series index {i}, t = {t}]",)
            raise
    return FisherSeries(
        model_id=model_id_of(params),
        theta=theta,
        times=times,
        values=values,
        diff_step=h,
        method="analytic_chain" if isinstance(ev, _AnalyticChain) else "central_fd",
        time_tolerance=1e-4 / _rate_scale(params),
        evaluator=ev.at_time,
    )


@dataclass(frozen=True)
class OptimalTime:
    """Outcome of the optimal-measurement-time search.

    ``saturating`` marks a series that rises monotonically into a plateau
    (best measured in the steady state); ``time`` is then None and ``value``
    the plateau level. Otherwise ``(time, value)`` locate the maximum.
    """

    saturating: bool
    time: Optional[float]
    value: float


def _golden_max(f, a, b, tol):
    """Deterministic golden-section maximizer; returns the best point seen."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    invphi2 = (3.0 - math.sqrt(5.0)) / 2.0
    dist = b - a
    if dist <= tol:
        t = 0.5 * (a + b)
        return t, f(t)
    n = int(math.ceil(math.log(tol / dist) / math.log(invphi)))
    c = a + invphi2 * dist
    d = a + invphi * dist
    yc, yd = f(c), f(d)
    best_t, best_v = (c, yc) if yc >= yd else (d, yd)
    for _ in range(max(n - 1, 0)):
        if yc >= yd:
            b, d, yd = d, c, yc
            dist *= invphi
            c = a + invphi2 * dist
            yc = f(c)
            if yc > best_v:
                best_t, best_v = c, yc
        else:
            a, c, yc = c, d, yd
            dist *= invphi
            d = a + invphi * dist
            yd = f(d)
            if yd > best_v:
                best_t, best_v = d, yd
    return best_t, best_v


def find_optimal_time(series, *, saturation_slope=1e-3):
    """Locate the best measurement time of a Fisher series.

    A series is classified as saturating when its relative change over the
    last decade (the trailing 10% of the time span) is below
    ``saturation_slope`` and the final value sits within the same tolerance
    of the grid maximum; round-off ties on the plateau therefore do not
    masquerade as interior peaks. A genuine interior argmax is refined by
    golden-section search on the continuous evaluator, bracketed by the
    neighboring grid points; the refined value never falls below the grid
    value.
    """
    t = series.times
    v = series.values
    k = int(np.argmax(v))
    scale = max(float(v.max()), 1e-300)
    span = t[-1] - t[0]
    tail = v[t >= t[0] + 0.9 * span] if span > 0 else v[-1:]
    tail_flat = (tail.max() - tail.min()) / scale < saturation_slope
    if tail_flat and (v[k] - v[-1]) / scale < saturation_slope:
        return OptimalTime(saturating=True, time=None, value=float(v[-1]))
    if k == len(t) - 1:
        return OptimalTime(saturating=False, time=float(t[-1]), value=float(v[-1]))
    if k == 0:
        return OptimalTime(saturating=False, time=float(t[0]), value=float(v[0]))
    if series.evaluator is not None:
        t_ref, v_ref = _golden_max(
            series.evaluator, t[k - 1], t[k + 1], series.time_tolerance)
    else:
        t_ref, v_ref = _parabolic_peak(t[k - 1:k + 2], v[k - 1:k + 2])
    if v_ref >= v[k]:
        return OptimalTime(saturating=False, time=float(t_ref), value=float(v_ref))
    return OptimalTime(saturating=False, time=float(t[k]), value=float(v[k]))


def _parabolic_peak(ts, vs):
    """Vertex of the parabola through three points; falls back to the middle."""
    t0, t1, t2 = ts
    v0, v1, v2 = vs
    denom = (t1 - t0) * (v1 - v2) - (t1 - t2) * (v1 - v0)
    if denom == 0:
        return float(t1), float(v1)
    t_hat = t1 - 0.5 * ((t1 - t0) ** 2 * (v1 - v2)
                        - (t1 - t2) ** 2 * (v1 - v0)) / denom
    if not (min(t0, t2) <= t_hat <= max(t0, t2)):
        return float(t1), float(v1)
    # quadratic fit value at the vertex
    coeffs = np.polyfit(ts, vs, 2)
    v_hat = float(np.polyval(coeffs, t_hat))
    return float(t_hat), max(v_hat, float(v1))