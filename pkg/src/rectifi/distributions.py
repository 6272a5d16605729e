"""Fermi-Dirac and Bose-Einstein occupations and their analytic derivatives.

All energies, chemical potentials and temperatures are in eV with
``hbar = k_B = 1``, so temperature enters directly as an energy scale.
"""

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "Reservoir",
    "fermi",
    "fermi_denergy",
    "bose",
]


@dataclass(frozen=True)
class Reservoir:
    """An electronic lead held at fixed chemical potential and temperature.

    Parameters
    ----------
    mu : float
        Chemical potential in eV.
    temperature : float
        Absolute temperature in energy units (eV).
    """

    mu: float
    temperature: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise DomainError(f"reservoir mu must be finite, got {self.mu}")
        if not (math.isfinite(self.temperature) and self.temperature > 0):
            raise DomainError(
                f"reservoir temperature must be > 0, got {self.temperature}"
            )


def _logistic(x):
    # 1/(e^x + 1) without ever exponentiating a large positive argument.
    if x <= 0.0:
        return 1.0 / (math.exp(x) + 1.0)
    ex = math.exp(-x)
    return ex / (1.0 + ex)


def _logistic_weight(x):
    # f(1-f) = e^{-|x|} / (1 + e^{-|x|})^2, stable for any x.
    ex = math.exp(-abs(x))
    return ex / (1.0 + ex) ** 2


def fermi(energy, res):
    """Fermi-Dirac occupation of a reservoir state.

    Parameters
    ----------
    energy : float
        Single-particle energy in eV.
    res : Reservoir
        Lead supplying the chemical potential and temperature.

    Returns
    -------
    float
        Occupation in (0, 1); exactly 1/2 at ``energy == res.mu``.
    """
    if not math.isfinite(energy):
        raise DomainError(f"energy must be finite, got {energy}")
    return _logistic((energy - res.mu) / res.temperature)


def fermi_denergy(energy, res):
    """Derivative of :func:`fermi` with respect to energy.

    Equals ``-f(1-f)/T`` exactly; always negative. Serves as the analytic
    building block for chain-rule parameter derivatives (mu enters with the
    opposite sign, temperature via the reduced argument).

    Returns
    -------
    float
        Derivative in 1/eV.
    """
    if not math.isfinite(energy):
        raise DomainError(f"energy must be finite, got {energy}")
    x = (energy - res.mu) / res.temperature
    return -_logistic_weight(x) / res.temperature


def bose(omega, temperature):
    """Bose-Einstein occupation ``1/(e^{omega/T} - 1)``.

    Parameters
    ----------
    omega : float
        Mode energy in eV; must be positive. Sweeps that formally reach
        ``omega = 0`` must clamp to a small positive floor before calling
        (the occupation diverges like ``T/omega``).
    temperature : float
        Bath temperature in eV; must be positive.

    Returns
    -------
    float
        Mean occupation, positive and increasing in temperature.
    """
    if not (math.isfinite(omega) and omega > 0):
        raise DomainError(f"bose requires omega > 0, got {omega}")
    if not (math.isfinite(temperature) and temperature > 0):
        raise DomainError(f"bose requires temperature > 0, got {temperature}")
    x = omega / temperature
    if x > 700.0:
        # expm1 overflows; the Boltzmann tail is exact to double precision.
        return math.exp(-x)
    return 1.0 / math.expm1(x)
