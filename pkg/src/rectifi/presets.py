"""Scenario presets: one self-contained sweep per reference figure panel.

Each preset freezes every physical parameter and grid needed to regenerate
one panel's data; running it requires no further input. Two-level panels
use the reference junction (donor -5.4 eV, acceptor -3.8 eV, prefactor
0.7 eV, left lead 1 eV / 2 eV, right lead -1 eV / 1 eV unless the panel
varies them) and report time in units of the 0.7 eV prefactor, i.e. the
printed t column is (physical time) * 0.7. Five-state panels use 1 eV
hybridizations and report time in 1/eV directly.

Panels whose captions leave a value unstated get a documented choice here:
the 0.091 eV mode is used wherever a single vibrational energy is needed,
contour panels c-e/f-h use lead temperatures 0.05/0.5 eV, and the
five-state panels compare temperatures 0.2 and 0.1 eV.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distributions import Reservoir
from .multilevel import MultilevelParams
from .sweep import Observable, SweepAxis, SweepSpec
from .tls import JunctionParams

__all__ = ["ScenarioPreset", "PRESETS", "get_preset"]

GAMMA_REF = 0.7          # two-level rate prefactor (eV); also the time unit
_MODES = (0.091, 0.139, 0.196)   # vibrational energies compared throughout


@dataclass(frozen=True)
class ScenarioPreset:
    """A frozen sweep plus the formatting that turns it into a data file."""

    id: str
    description: str
    spec: SweepSpec
    layout: str                       # "wide" or "long"
    time_display: Optional[tuple]     # printed t column (None: no time axis)
    time_unit: str


def _tls(omega0=0.091, mu_L=1.0, mu_R=-1.0, T_L=2.0, T_R=1.0):
    return JunctionParams(
        eps_d=-5.4, eps_a=-3.8, omega0=omega0, gamma_hyb=GAMMA_REF,
        left=Reservoir(mu_L, T_L), right=Reservoir(mu_R, T_R))


def _ml(temperature, omega0=0.091):
    # High-bias five-state junction; phonon bath at the lead temperature.
    return MultilevelParams(
        eps_d=-5.4, eps_a=-3.8, omega0=omega0,
        left=Reservoir(3.8, temperature), right=Reservoir(-3.8, temperature))


def _tau_grid(t_max, count):
    """Time grid in prefactor units, with its physical counterpart."""
    tau = np.linspace(0.0, t_max, count)
    return tuple(tau), tuple(tau / GAMMA_REF)


def _tls_time_series(pid, description, observable, params, tau_max, count):
    tau, phys = _tau_grid(tau_max, count)
    return ScenarioPreset(
        id=pid, description=description,
        spec=SweepSpec(model_id="tls", base_params=params,
                       axis1=SweepAxis("omega0", _MODES),
                       observable=observable, time_grid=phys),
        layout="wide", time_display=tau, time_unit="1/Gamma")


def _tls_contour(pid, description, axis, params, tau_max=30.0, count=121):
    tau, phys = _tau_grid(tau_max, count)
    return ScenarioPreset(
        id=pid, description=description,
        spec=SweepSpec(model_id="tls", base_params=params, axis1=axis,
                       observable=Observable("fisher", theta="omega0"),
                       time_grid=phys),
        layout="long", time_display=tau, time_unit="1/Gamma")


def _build_presets():
    presets = []

    presets.append(_tls_time_series(
        "fig1b",
        "population relaxation of the two-level junction for the three "
        "vibrational modes at the reference bias",
        Observable("populations"), _tls(), tau_max=30.0, count=301))

    for pid, mu, desc in (
        ("fig1c", (1.0, -1.0), "mid bias"),
        ("fig1d", (0.1, -0.1), "low bias"),
        ("fig2a", (3.0, -3.0), "high bias"),
    ):
        presets.append(_tls_time_series(
            pid,
            f"acceptor-energy information I(eps_a) over time, three modes, {desc}",
            Observable("fisher", theta="eps_a"),
            _tls(mu_L=mu[0], mu_R=mu[1]), tau_max=40.0, count=401))

    for pid, mu, desc in (
        ("fig2b", (1.0, -1.0), "mid bias"),
        ("fig2c", (0.1, -0.1), "low bias"),
        ("fig2d", (3.0, -3.0), "high bias"),
    ):
        presets.append(_tls_time_series(
            pid,
            f"donor-energy information I(eps_d) over time, three modes, {desc}",
            Observable("fisher", theta="eps_d"),
            _tls(mu_L=mu[0], mu_R=mu[1]), tau_max=40.0, count=401))

    for pid, temp in (("fig3a", 1.0), ("fig3b", 0.5), ("fig3c", 0.1),
                      ("fig3d", 0.05)):
        presets.append(_tls_time_series(
            pid,
            "vibrational-energy information I(omega0) over time at bias 7.6 eV, "
            f"equal lead temperatures {temp} eV",
            Observable("fisher", theta="omega0"),
            _tls(mu_L=3.8, mu_R=-3.8, T_L=temp, T_R=temp),
            tau_max=40.0, count=401))

    # Contours of time-dependent I(omega0) against a second parameter.
    # The omega0 self-sweep starts at 0, which the sweep clamps to 1e-6 eV.
    for pid, temp in (("fig4a", 1.0), ("fig4b", 2.0)):
        presets.append(_tls_contour(
            pid,
            "time-dependent I(omega0) while sweeping the mode energy itself, "
            f"bias 7.6 eV, equal lead temperatures {temp} eV",
            SweepAxis("omega0", tuple(np.linspace(0.0, 1.0, 51))),
            _tls(mu_L=3.8, mu_R=-3.8, T_L=temp, T_R=temp)))

    mu_R_axis = SweepAxis("mu_R", tuple(np.linspace(-4.5, -3.0, 76)))
    for pid, w0, temp in (
        ("fig4c", 0.091, 0.05), ("fig4d", 0.139, 0.05), ("fig4e", 0.196, 0.05),
        ("fig4f", 0.091, 0.5), ("fig4g", 0.139, 0.5), ("fig4h", 0.196, 0.5),
    ):
        presets.append(_tls_contour(
            pid,
            f"time-dependent I(omega0) at omega0 = {w0} eV while sweeping the "
            f"right-lead chemical potential, equal lead temperatures {temp} eV",
            mu_R_axis,
            _tls(omega0=w0, mu_L=3.8, T_L=temp, T_R=temp)))

    temp_axis = tuple(np.linspace(0.5, 3.0, 26))
    presets.append(ScenarioPreset(
        id="fig4i",
        description="steady-state I(omega0) over the lead-temperature plane "
                    "at bias 7.6 eV",
        spec=SweepSpec(model_id="tls",
                       base_params=_tls(mu_L=3.8, mu_R=-3.8),
                       axis1=SweepAxis("T_L", temp_axis),
                       axis2=SweepAxis("T_R", temp_axis),
                       observable=Observable("fisher", theta="omega0")),
        layout="long", time_display=None, time_unit="1/Gamma"))

    presets.append(_tls_contour(
        "fig4j",
        "time-dependent I(omega0) while sweeping the left-lead temperature "
        "at fixed right-lead temperature 1 eV, bias 7.6 eV",
        SweepAxis("T_L", temp_axis),
        _tls(mu_L=3.8, mu_R=-3.8, T_R=1.0)))

    t_grid = tuple(np.linspace(0.0, 10.0, 201))
    w_grid = SweepAxis("omega0", tuple(np.linspace(0.01, 2.0, 200)))
    for pop_id, fis_id, temp in (("fig5a", "fig5b", 0.2),
                                 ("fig5c", "fig5d", 0.1)):
        presets.append(ScenarioPreset(
            id=pop_id,
            description="five-state population dynamics from the empty state "
                        f"at high bias, temperature {temp} eV",
            spec=SweepSpec(model_id="multilevel", base_params=_ml(temp),
                           axis1=SweepAxis("omega0", (0.091,)),
                           observable=Observable("populations"),
                           time_grid=t_grid),
            layout="wide", time_display=t_grid, time_unit="1/eV"))
        presets.append(ScenarioPreset(
            id=fis_id,
            description="five-state steady-state I(omega0) against the mode "
                        f"energy at high bias, temperature {temp} eV",
            spec=SweepSpec(model_id="multilevel", base_params=_ml(temp),
                           axis1=w_grid,
                           observable=Observable("fisher", theta="omega0")),
            layout="long", time_display=None, time_unit="1/eV"))

    return {p.id: p for p in presets}


PRESETS = _build_presets()


def get_preset(preset_id):
    if preset_id not in PRESETS:
        from .errors import DomainError
        raise DomainError(
            f"unknown preset {preset_id!r}; valid: {', '.join(sorted(PRESETS))}")
    return PRESETS[preset_id]
