import math

import numpy as np
import pytest

from conftest import random_multilevel_params, random_tls_params
from rectifi import fisher as fi
from rectifi.distributions import Reservoir
from rectifi.errors import DomainError, SmallProbabilityError
from rectifi.fisher import FisherSeries, find_optimal_time
from rectifi.multilevel import MultilevelParams
from rectifi.tls import JunctionParams


def tls_params(omega0=0.196, mu_L=1.0, mu_R=-1.0, T_L=2.0, T_R=1.0):
    return JunctionParams(eps_d=-5.4, eps_a=-3.8, omega0=omega0, gamma_hyb=0.7,
                          left=Reservoir(mu_L, T_L), right=Reservoir(mu_R, T_R))


def ml_params(temperature=1.0, omega0=0.091):
    return MultilevelParams(eps_d=-5.4, eps_a=-3.8, omega0=omega0,
                            left=Reservoir(3.8, temperature),
                            right=Reservoir(-3.8, temperature))


# ---------------------------------------------------------------- plumbing

def test_param_roundtrip_both_models():
    p = tls_params()
    for name in fi.param_names("tls"):
        bumped = fi.with_param(p, name, fi.get_param(p, name) + 0.01)
        assert fi.get_param(bumped, name) == fi.get_param(p, name) + 0.01
    m = ml_params()
    for name in fi.param_names("multilevel"):
        value = fi.get_param(m, name)
        bumped = fi.with_param(m, name, value + 0.01)
        assert fi.get_param(bumped, name) == value + 0.01


def test_selector_rejects_cross_model_names():
    with pytest.raises(DomainError, match="gamma_L.*not a tls"):
        fi.fisher_at_time(tls_params(), "gamma_L", 1.0)
    with pytest.raises(DomainError, match="valid:"):
        fi.fisher_at_time(ml_params(), "gamma_hyb", 1.0)


def test_default_p0():
    assert np.array_equal(fi.default_p0(tls_params()), [1.0, 0.0])
    assert np.array_equal(fi.default_p0(ml_params()), [1.0, 0, 0, 0, 0])


def test_p0_validation():
    with pytest.raises(DomainError):
        fi.fisher_at_time(tls_params(), "eps_a", 1.0, p0=[1.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        fi.fisher_at_time(tls_params(), "eps_a", 1.0, p0=[0.7, 0.7])


# ------------------------------------------------------------- point values

def test_zero_information_at_t_zero():
    assert fi.fisher_at_time(tls_params(), "eps_a", 0.0) == 0.0
    assert fi.fisher_at_time(tls_params(), "eps_a", 0.0,
                             method="analytic_chain") == 0.0
    assert fi.fisher_at_time(ml_params(), "omega0", 0.0) == 0.0


def test_negative_time_rejected():
    with pytest.raises(DomainError):
        fi.fisher_at_time(tls_params(), "eps_a", -1.0)


def test_bad_method_and_step():
    with pytest.raises(DomainError, match="unknown differentiation method"):
        fi.fisher_at_time(tls_params(), "eps_a", 1.0, method="secant")
    with pytest.raises(DomainError):
        fi.fisher_at_time(tls_params(), "eps_a", 1.0, diff_step=0.0)
    with pytest.raises(DomainError, match="two-level"):
        fi.fisher_at_time(ml_params(), "omega0", 1.0, method="analytic_chain")


def test_nonnegative_everywhere():
    rng = np.random.default_rng(71)
    for _ in range(100):
        p = random_tls_params(rng)
        theta = str(rng.choice(fi.param_names("tls")))
        t = float(rng.uniform(0.0, 15.0))
        assert fi.fisher_at_time(p, theta, t) >= 0.0


def test_finite_difference_agrees_with_analytic_chain():
    # smaller sibling of the acceptance criterion, all eight parameters;
    # quotients below 1e-9 are central-difference noise by construction and
    # are pinned by the saturated-tail test instead
    rng = np.random.default_rng(73)
    for _ in range(40):
        p = random_tls_params(rng)
        t = float(rng.uniform(0.3, 12.0))
        for theta in fi.param_names("tls"):
            a = fi.fisher_at_time(p, theta, t, method="analytic_chain")
            if a < 1e-9:
                continue
            b = fi.fisher_at_time(p, theta, t, method="central_fd")
            assert b == pytest.approx(a, rel=1e-5)


def test_step_robustness():
    rng = np.random.default_rng(79)
    for _ in range(40):
        p = random_tls_params(rng)
        t = float(rng.uniform(0.3, 12.0))
        theta = str(rng.choice(fi.param_names("tls")))
        h = fi.default_step(p, theta)
        base = fi.fisher_at_time(p, theta, t, diff_step=h)
        for factor in (0.5, 2.0):
            other = fi.fisher_at_time(p, theta, t, diff_step=h * factor)
            assert other == pytest.approx(base, rel=1e-4)


def test_steady_state_is_long_time_limit():
    p = tls_params()
    from rectifi.tls import tls_decay_rate, tls_rates
    geff = tls_decay_rate(tls_rates(p), p.gamma_hyb)
    for theta in ("eps_a", "omega0", "T_R"):
        tail = fi.fisher_at_time(p, theta, 30.0 / geff)
        ss = fi.fisher_steady_state(p, theta)
        assert tail == pytest.approx(ss, rel=1e-6)
    m = ml_params()
    tail = fi.fisher_at_time(m, "omega0", 12.0)
    assert tail == pytest.approx(fi.fisher_steady_state(m, "omega0"), rel=1e-6)


def test_saturated_tails_carry_no_information():
    # every Fermi factor more than 50 thermal widths from its edge
    p = JunctionParams(eps_d=-60.0, eps_a=55.0, omega0=0.01, gamma_hyb=1.0,
                       left=Reservoir(0.0, 1.0), right=Reservoir(0.0, 1.0))
    assert fi.fisher_steady_state(p, "eps_d") < 1e-40
    assert fi.fisher_at_time(p, "eps_d", 3.0) < 1e-40
    assert fi.fisher_steady_state(p, "eps_d", method="analytic_chain") < 1e-40


def test_acceptor_shift_invariance_exact():
    # eps_a and mu_R enter I(eps_a) only through their difference; with
    # dyadic values the shifted evaluation is bit-identical
    base = JunctionParams(eps_d=-5.5, eps_a=-3.75, omega0=0.25, gamma_hyb=0.7,
                          left=Reservoir(1.0, 2.0), right=Reservoir(-1.0, 1.0))
    delta = 0.5
    shifted = JunctionParams(eps_d=-5.5, eps_a=-3.75 + delta, omega0=0.25,
                             gamma_hyb=0.7, left=Reservoir(1.0, 2.0),
                             right=Reservoir(-1.0 + delta, 1.0))
    for t in (0.8, 3.0, 12.0):
        a = fi.fisher_at_time(base, "eps_a", t, method="analytic_chain")
        b = fi.fisher_at_time(shifted, "eps_a", t, method="analytic_chain")
        assert a == b
        a_fd = fi.fisher_at_time(base, "eps_a", t, diff_step=1e-5)
        b_fd = fi.fisher_at_time(shifted, "eps_a", t, diff_step=1e-5)
        assert b_fd == pytest.approx(a_fd, rel=1e-12)


def test_acceptor_shift_invariance_generic():
    delta = 0.37
    a = fi.fisher_at_time(tls_params(), "eps_a", 2.5)
    shifted = tls_params(mu_R=-1.0 + delta)
    shifted = fi.with_param(shifted, "eps_a", -3.8 + delta)
    b = fi.fisher_at_time(shifted, "eps_a", 2.5)
    assert b == pytest.approx(a, rel=1e-9)


def _starved_params():
    # cold junction with both orbitals above the chemical potentials: the
    # occupied states are exponentially starved but keep an eps_d derivative
    return MultilevelParams(eps_d=1.0, eps_a=1.0, omega0=0.3,
                            left=Reservoir(0.0, 0.07),
                            right=Reservoir(0.0, 0.07))


def test_small_probability_error_carries_index():
    with pytest.raises(SmallProbabilityError) as info:
        fi.fisher_steady_state(_starved_params(), "eps_d", p_floor=1e-6)
    assert info.value.state_index in (1, 2, 3, 4)
    assert info.value.probability < 1e-6


def test_zero_derivative_components_bypass_the_floor():
    # fully frozen sidebands have bit-identical perturbed populations; their
    # 0/0 quotient contributes zero instead of tripping the floor
    p = ml_params(temperature=0.05, omega0=2.0)
    assert fi.fisher_steady_state(p, "omega0") >= 0.0


def test_p_floor_override():
    assert fi.fisher_steady_state(_starved_params(), "eps_d",
                                  p_floor=1e-300) >= 0.0


# ------------------------------------------------------------------ series

def test_series_single_point_matches_at_time():
    p = tls_params()
    s = fi.fisher_series(p, "eps_a", [2.0])
    assert s.values[0] == fi.fisher_at_time(p, "eps_a", 2.0)
    assert s.model_id == "tls" and s.theta == "eps_a"
    assert s.unit == "eV^-2"


def test_series_grid_validation():
    p = tls_params()
    with pytest.raises(DomainError):
        fi.fisher_series(p, "eps_a", [])
    with pytest.raises(DomainError):
        fi.fisher_series(p, "eps_a", [0.0, 0.0, 1.0])
    with pytest.raises(DomainError):
        fi.fisher_series(p, "eps_a", [-1.0, 0.0])


def test_series_error_annotates_grid_index():
    with pytest.raises(SmallProbabilityError, match=r"series index 1"):
        fi.fisher_series(_starved_params(), "eps_d", [0.0, 20.0, 30.0],
                         p_floor=1e-6)


def test_series_shares_three_model_builds(monkeypatch):
    import rectifi.tls as tls_mod
    calls = {"n": 0}
    original = tls_mod.tls_rates

    def counting(params):
        calls["n"] += 1
        return original(params)

    monkeypatch.setattr(tls_mod, "tls_rates", counting)
    fi.fisher_series(tls_params(), "eps_a", np.linspace(0.0, 10.0, 200))
    assert calls["n"] == 3


def test_series_single_build_for_analytic_chain(monkeypatch):
    import rectifi.tls as tls_mod
    calls = {"n": 0}
    original = tls_mod.tls_rates

    def counting(params):
        calls["n"] += 1
        return original(params)

    monkeypatch.setattr(tls_mod, "tls_rates", counting)
    fi.fisher_series(tls_params(), "eps_a", np.linspace(0.0, 10.0, 200),
                     method="analytic_chain")
    assert calls["n"] == 1


def test_series_multilevel_shares_builds(monkeypatch):
    import rectifi.multilevel as ml_mod
    calls = {"n": 0}
    original = ml_mod.multilevel_rates

    def counting(params):
        calls["n"] += 1
        return original(params)

    monkeypatch.setattr(ml_mod, "multilevel_rates", counting)
    fi.fisher_series(ml_params(), "omega0", np.linspace(0.0, 3.0, 40))
    assert calls["n"] == 3


def test_series_metadata():
    s_fd = fi.fisher_series(tls_params(), "omega0", [1.0, 2.0])
    assert s_fd.method == "central_fd" and s_fd.diff_step > 0
    s_an = fi.fisher_series(tls_params(), "omega0", [1.0, 2.0],
                            method="analytic_chain")
    assert s_an.method == "analytic_chain" and s_an.diff_step == 0.0
    assert s_an.time_tolerance == pytest.approx(1e-4 / 0.7)


def test_series_values_validated():
    with pytest.raises(DomainError):
        FisherSeries(model_id="tls", theta="eps_a", times=[0.0, 1.0],
                     values=[0.1, -0.2], diff_step=0.0, method="central_fd")
    with pytest.raises(DomainError):
        FisherSeries(model_id="tls", theta="eps_a", times=[1.0, 1.0],
                     values=[0.1, 0.2], diff_step=0.0, method="central_fd")


def test_interior_maximum_of_acceptor_information():
    # I(eps_a) rises to a single interior peak, then relaxes to its plateau
    s = fi.fisher_series(tls_params(omega0=0.196), "eps_a",
                         np.linspace(0.0, 60.0, 601))
    diffs = np.diff(s.values)
    k = int(np.argmax(s.values))
    assert 0 < k < len(s.values) - 1
    assert np.all(diffs[:k] > 0) and np.all(diffs[k + 1:] < 0)


# ------------------------------------------------------------ optimal time

def _series(times, values, evaluator=None, tol=1e-4):
    return FisherSeries(model_id="tls", theta="omega0",
                        times=np.asarray(times), values=np.asarray(values),
                        diff_step=0.0, method="central_fd",
                        time_tolerance=tol, evaluator=evaluator)


def test_optimal_time_saturating_series():
    t = np.linspace(0.0, 10.0, 101)
    s = _series(t, 1.0 - np.exp(-2.0 * t))
    opt = find_optimal_time(s)
    assert opt.saturating and opt.time is None
    assert opt.value == s.values[-1]


def test_optimal_time_noisy_plateau_still_saturates():
    t = np.linspace(0.0, 10.0, 101)
    v = 1.0 - np.exp(-2.0 * t)
    v[60] += 1e-9   # round-off tie just before the plateau end
    assert find_optimal_time(_series(t, v)).saturating


def test_optimal_time_interior_peak_refined():
    f = lambda x: x * math.exp(-x)
    t = np.linspace(0.0, 8.0, 21)
    s = _series(t, [f(x) for x in t], evaluator=f, tol=1e-4)
    opt = find_optimal_time(s)
    assert not opt.saturating
    assert opt.value >= s.values.max()
    assert opt.time == pytest.approx(1.0, abs=1e-3)
    assert opt.value == pytest.approx(math.exp(-1.0), rel=1e-6)


def test_optimal_time_decreasing_series():
    t = np.linspace(0.0, 5.0, 20)
    opt = find_optimal_time(_series(t, np.exp(-t)))
    assert not opt.saturating
    assert opt.time == 0.0 and opt.value == 1.0


def test_optimal_time_still_rising():
    t = np.linspace(0.0, 5.0, 20)
    opt = find_optimal_time(_series(t, t.copy()))
    assert not opt.saturating
    assert opt.time == 5.0


def test_optimal_time_parabolic_fallback():
    # no evaluator attached: refinement interpolates the three grid points
    t = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    v = -(t - 1.7) ** 2 + 9.0
    opt = find_optimal_time(_series(t, v))
    assert not opt.saturating
    assert opt.time == pytest.approx(1.7, abs=1e-12)
    assert opt.value == pytest.approx(9.0, rel=1e-12)


# ----------------------------------------------------- multilevel phenomena

def test_multilevel_information_decays_with_mode_energy():
    grid = np.linspace(0.3, 2.0, 18)
    vals = [fi.fisher_steady_state(ml_params(temperature=0.5, omega0=w), "omega0")
            for w in grid]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-2 * vals[0]


def test_multilevel_colder_is_better_near_the_peak():
    # the low-frequency information grows as the common temperature drops
    for w in (0.02, 0.05, 0.1):
        cold = fi.fisher_steady_state(ml_params(temperature=0.1, omega0=w), "omega0")
        hot = fi.fisher_steady_state(ml_params(temperature=0.2, omega0=w), "omega0")
        assert cold > hot
