"""Donor-acceptor vibrational rectifier models and their Fisher information.

Two reduced models of a biased molecular junction whose electron transfer
is mediated by an anharmonic vibration: a two-level population dynamics
with lead-dressed rates (closed form throughout), and a five-state vibronic
extension with explicit phonon sidebands. On top of both sits the classical
Fisher information of the populations for any physical parameter, plus
declarative parameter sweeps and a CLI that reproduces the reference
figures as CSV data.
"""

__version__ = "0.1.0"

from .distributions import Reservoir, bose, fermi, fermi_denergy
from .errors import (
    ConfigError,
    DegenerateSteadyStateError,
    DomainError,
    RectifiError,
    SmallProbabilityError,
)
from .fisher import (
    FisherSeries,
    OptimalTime,
    find_optimal_time,
    fisher_at_time,
    fisher_series,
    fisher_steady_state,
)
from .multilevel import (
    MultilevelParams,
    RateSet5,
    franck_condon,
    multilevel_generator,
    multilevel_rates,
    multilevel_steady_state,
    propagate_multilevel,
)
from .sweep import (
    Observable,
    SweepAxis,
    SweepSpec,
    locate_extremum,
    run_sweep,
)
from .tls import (
    JunctionParams,
    RateSet2,
    tls_generator,
    tls_propagate,
    tls_rates,
    tls_steady_state,
)

__all__ = [
    "__version__",
    "Reservoir", "fermi", "fermi_denergy", "bose",
    "RectifiError", "DomainError", "DegenerateSteadyStateError",
    "SmallProbabilityError", "ConfigError",
    "JunctionParams", "RateSet2", "tls_rates", "tls_generator",
    "tls_steady_state", "tls_propagate",
    "MultilevelParams", "RateSet5", "franck_condon", "multilevel_rates",
    "multilevel_generator", "multilevel_steady_state", "propagate_multilevel",
    "FisherSeries", "OptimalTime", "fisher_at_time", "fisher_steady_state",
    "fisher_series", "find_optimal_time",
    "SweepAxis", "Observable", "SweepSpec", "run_sweep", "locate_extremum",
]
