"""Two-level rectifier: lead-dressed rates, 2x2 generator, exact relaxation.

The junction reduces to a classical two-state population dynamics whose
upward (state 1 -> 2) and downward (state 2 -> 1) rates are products of
Fermi factors of the two leads, evaluated at the donor/acceptor energies
shifted by the vibrational quantum. Everything downstream (steady state,
time evolution, parameter derivatives) is closed form.
"""

import math
from dataclasses import dataclass

import numpy as np

from .distributions import Reservoir, fermi, fermi_denergy, _logistic_weight
from .errors import DegenerateSteadyStateError, DomainError

__all__ = [
    "JunctionParams",
    "RateSet2",
    "tls_rates",
    "tls_rates_derivative",
    "tls_generator",
    "tls_steady_state",
    "tls_decay_rate",
    "tls_propagate",
    "relax_populations",
    "TLS_PARAM_NAMES",
    "DEFAULT_P0_TLS",
]

# Parameters a Fisher derivative may target for this model.
TLS_PARAM_NAMES = (
    "eps_d", "eps_a", "omega0", "mu_L", "mu_R", "T_L", "T_R", "gamma_hyb",
)

# Electron initially on the donor unless the caller says otherwise.
DEFAULT_P0_TLS = (1.0, 0.0)


@dataclass(frozen=True)
class JunctionParams:
    """Physical parameters of the two-level junction.

    eps_d, eps_a : donor / acceptor orbital energies (eV)
    omega0       : vibrational quantum (eV), > 0
    gamma_hyb    : overall rate prefactor of the generator (eV), > 0
    left, right  : the two electronic reservoirs
    """

    eps_d: float
    eps_a: float
    omega0: float
    gamma_hyb: float
    left: Reservoir
    right: Reservoir

    def __post_init__(self):
        for name in ("eps_d", "eps_a"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not (math.isfinite(self.omega0) and self.omega0 > 0):
            raise DomainError(f"omega0 must be > 0, got {self.omega0}")
        if not (math.isfinite(self.gamma_hyb) and self.gamma_hyb > 0):
            raise DomainError(f"gamma_hyb must be > 0, got {self.gamma_hyb}")


@dataclass(frozen=True)
class RateSet2:
    """The four dimensionless rate factors of the two-level generator.

    Each is a product of a source-occupation and a target-vacancy Fermi
    factor, so each lies in (0, 1) for finite arguments (saturation can
    round to the endpoints at extreme bias or temperature).
    """

    a_da_plus: float
    a_ad_plus: float
    a_da_minus: float
    a_ad_minus: float

    def __post_init__(self):
        for name in ("a_da_plus", "a_ad_plus", "a_da_minus", "a_ad_minus"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise DomainError(f"rate factor {name} out of [0, 1]: {v}")

    @property
    def upward(self):
        """Total 1 -> 2 rate factor."""
        return self.a_da_plus + self.a_ad_plus

    @property
    def downward(self):
        """Total 2 -> 1 rate factor."""
        return self.a_da_minus + self.a_ad_minus

    @property
    def total(self):
        """Sum of all four factors; the dimensionless decay rate."""
        return self.upward + self.downward


def tls_rates(params):
    """Compose the four inelastic-tunneling rate factors from Fermi factors.

    The ``+`` processes excite the vibration (target energy shifted up by
    omega0), the ``-`` processes de-excite it. ``da`` moves the electron
    donor -> acceptor, ``ad`` the reverse.
    """
    fL = fermi(params.eps_d, params.left)
    fR = fermi(params.eps_a, params.right)
    fRp = fermi(params.eps_a + params.omega0, params.right)
    fRm = fermi(params.eps_a - params.omega0, params.right)
    fLp = fermi(params.eps_d + params.omega0, params.left)
    fLm = fermi(params.eps_d - params.omega0, params.left)
    return RateSet2(
        a_da_plus=fL * (1.0 - fRp),
        a_ad_plus=fR * (1.0 - fLp),
        a_da_minus=fL * (1.0 - fRm),
        a_ad_minus=fR * (1.0 - fLm),
    )


def _fermi_dparam(energy, res, which):
    """d fermi(energy, res) / d(param) for param in {mu, T} of that reservoir."""
    if which == "mu":
        return -fermi_denergy(energy, res)
    # temperature: df/dT = f(1-f) (energy-mu)/T^2
    x = (energy - res.mu) / res.temperature
    return _logistic_weight(x) * x / res.temperature


def tls_rates_derivative(params, name):
    """Analytic derivative of each rate factor with respect to one parameter.

    Returns a 4-tuple ordered (a_da_plus, a_ad_plus, a_da_minus, a_ad_minus).
    ``gamma_hyb`` does not enter the factors, so its derivative is zero here;
    it acts only through the generator prefactor.
    """
    if name not in TLS_PARAM_NAMES:
        raise DomainError(
            f"unknown two-level parameter {name!r}; valid: {TLS_PARAM_NAMES}"
        )
    left, right = params.left, params.right
    ed, ea, w0 = params.eps_d, params.eps_a, params.omega0

    fL = fermi(ed, left)
    fR = fermi(ea, right)
    fRp = fermi(ea + w0, right)
    fRm = fermi(ea - w0, right)
    fLp = fermi(ed + w0, left)
    fLm = fermi(ed - w0, left)

    if name == "gamma_hyb":
        return (0.0, 0.0, 0.0, 0.0)
    if name == "eps_d":
        dfL = fermi_denergy(ed, left)
        return (
            dfL * (1.0 - fRp),
            fR * -fermi_denergy(ed + w0, left),
            dfL * (1.0 - fRm),
            fR * -fermi_denergy(ed - w0, left),
        )
    if name == "eps_a":
        dfR = fermi_denergy(ea, right)
        return (
            fL * -fermi_denergy(ea + w0, right),
            dfR * (1.0 - fLp),
            fL * -fermi_denergy(ea - w0, right),
            dfR * (1.0 - fLm),
        )
    if name == "omega0":
        return (
            fL * -fermi_denergy(ea + w0, right),
            fR * -fermi_denergy(ed + w0, left),
            fL * +fermi_denergy(ea - w0, right),
            fR * +fermi_denergy(ed - w0, left),
        )
    if name == "mu_L":
        dfL = _fermi_dparam(ed, left, "mu")
        return (
            dfL * (1.0 - fRp),
            fR * -_fermi_dparam(ed + w0, left, "mu"),
            dfL * (1.0 - fRm),
            fR * -_fermi_dparam(ed - w0, left, "mu"),
        )
    if name == "mu_R":
        dfR = _fermi_dparam(ea, right, "mu")
        return (
            fL * -_fermi_dparam(ea + w0, right, "mu"),
            dfR * (1.0 - fLp),
            fL * -_fermi_dparam(ea - w0, right, "mu"),
            dfR * (1.0 - fLm),
        )
    if name == "T_L":
        dfL = _fermi_dparam(ed, left, "T")
        return (
            dfL * (1.0 - fRp),
            fR * -_fermi_dparam(ed + w0, left, "T"),
            dfL * (1.0 - fRm),
            fR * -_fermi_dparam(ed - w0, left, "T"),
        )
    # T_R
    dfR = _fermi_dparam(ea, right, "T")
    return (
        fL * -_fermi_dparam(ea + w0, right, "T"),
        dfR * (1.0 - fLp),
        fL * -_fermi_dparam(ea - w0, right, "T"),
        dfR * (1.0 - fLm),
    )


def tls_generator(rates, gamma_hyb):
    """Assemble the 2x2 population generator.

    Columns sum to zero exactly (each off-diagonal entry reuses the float
    that was negated on the diagonal), so probability is conserved.
    """
    up = gamma_hyb * rates.upward
    dn = gamma_hyb * rates.downward
    return np.array([[-up, dn], [up, -dn]])


def tls_steady_state(rates):
    """Stationary populations from the closed-form ratio.

    p1 = downward/total, p2 = upward/total; exact kernel of the generator.
    """
    sigma = rates.total
    if sigma <= 0.0:
        raise DegenerateSteadyStateError(
            "all four rate factors vanish; the two-level generator is zero "
            "and every distribution is stationary"
        )
    return np.array([rates.downward / sigma, rates.upward / sigma])


def tls_decay_rate(rates, gamma_hyb):
    """Effective relaxation rate of the generator, ``gamma_hyb * total``.

    This is the magnitude of the nonzero eigenvalue of the 2x2 generator;
    the bare factor sum alone would be off by the prefactor.
    """
    return gamma_hyb * rates.total


def relax_populations(pss, geff, p0, t):
    """Exact single-exponential relaxation toward ``pss`` at rate ``geff``.

    Normalization is exact by construction (``p2 = 1 - p1``); the first
    component is clamped to [0, 1] against last-ulp rounding.
    """
    p1 = pss[0] + (p0[0] - pss[0]) * math.exp(-geff * t)
    p1 = min(max(p1, 0.0), 1.0)
    return np.array([p1, 1.0 - p1])


def tls_propagate(p0, t, params):
    """Evolve a two-state distribution for a time ``t`` (in 1/eV).

    Uses the exact single-exponential solution
    ``p(t) = p_ss + (p(0) - p_ss) exp(-gamma_eff t)``, which coincides with
    ``expm(L t) @ p0`` for the generator L of :func:`tls_generator`.
    """
    if t < 0:
        raise DomainError(f"propagation time must be >= 0, got {t}")
    p0 = np.asarray(p0, dtype=float)
    if p0.shape != (2,):
        raise DomainError(f"p0 must have two components, got shape {p0.shape}")
    if abs(p0.sum() - 1.0) > 1e-12 or np.any(p0 < -1e-12):
        raise DomainError(f"p0 is not a probability distribution: {p0}")
    rates = tls_rates(params)
    pss = tls_steady_state(rates)
    geff = tls_decay_rate(rates, params.gamma_hyb)
    return relax_populations(pss, geff, p0, t)
