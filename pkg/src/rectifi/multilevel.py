"""Five-state vibronic rectifier: vacuum, donor and acceptor with 0/1 phonons.

Basis order is (|0>, |D0>, |D1>, |A0>, |A1>): empty junction, occupied donor
or acceptor with the vibration in its ground or first excited level. Lead
tunneling feeds the donor sidebands and the acceptor ground sideband only;
donor-acceptor transfer and pure vibrational relaxation are mediated by a
thermal phonon bath at temperature ``t_vib``.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.csgraph

from .distributions import Reservoir, bose, fermi
from .errors import DegenerateSteadyStateError, DomainError

__all__ = [
    "MultilevelParams",
    "RateSet5",
    "franck_condon",
    "multilevel_rates",
    "multilevel_generator",
    "multilevel_steady_state",
    "multilevel_steady_state_eigen",
    "propagate_multilevel",
    "STATE_LABELS",
    "MULTILEVEL_PARAM_NAMES",
    "DEFAULT_P0_MULTILEVEL",
]

STATE_LABELS = ("0", "D0", "D1", "A0", "A1")

MULTILEVEL_PARAM_NAMES = (
    "eps_d", "eps_a", "omega0", "mu_L", "mu_R", "T_L", "T_R",
    "gamma_L", "gamma_R", "gamma_DA", "gamma_AD", "gamma0", "t_vib", "lambda",
)

# Empty junction with a cold mode unless the caller says otherwise.
DEFAULT_P0_MULTILEVEL = (1.0, 0.0, 0.0, 0.0, 0.0)

_CLAMP_NEGATIVE = 1e-13   # linear-algebra noise tolerated below zero
_PROPAGATE_TOL = 1e-10    # trace / positivity drift tolerated by expm


@dataclass(frozen=True)
class MultilevelParams:
    """Parameters of the five-state model.

    ``gamma_L``/``gamma_R`` are the lead hybridizations, ``gamma_DA``/
    ``gamma_AD`` the donor-acceptor transfer prefactors, ``gamma0`` the
    vibrational relaxation prefactor (all eV). ``lam`` is the polaron
    displacement; at the default ``lam = 0`` every Franck-Condon weight is
    taken as 1, which keeps both vibrational channels open. ``t_vib`` is
    the phonon bath temperature and defaults to the left lead's.
    """

    eps_d: float
    eps_a: float
    omega0: float
    left: Reservoir
    right: Reservoir
    gamma_L: float = 1.0
    gamma_R: float = 1.0
    gamma_DA: float = 1.0
    gamma_AD: float = 1.0
    gamma0: float = 0.5
    lam: float = 0.0
    t_vib: float = None

    def __post_init__(self):
        if self.t_vib is None:
            object.__setattr__(self, "t_vib", self.left.temperature)
        for name in ("eps_d", "eps_a", "lam"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not (math.isfinite(self.omega0) and self.omega0 > 0):
            raise DomainError(f"omega0 must be > 0, got {self.omega0}")
        if not (math.isfinite(self.t_vib) and self.t_vib > 0):
            raise DomainError(f"t_vib must be > 0, got {self.t_vib}")
        prefactors = ("gamma_L", "gamma_R", "gamma_DA", "gamma_AD", "gamma0")
        for name in prefactors:
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise DomainError(f"{name} must be >= 0, got {v}")
        if all(getattr(self, name) == 0 for name in prefactors):
            raise DomainError("at least one rate prefactor must be positive")


@dataclass(frozen=True)
class RateSet5:
    """All transition rates of the five-state generator, in eV.

    Indexed tuples run over the vibrational level n = 0, 1. ``up``/``down``
    are the phonon-bath excitation/relaxation rates; detailed balance of
    that bath makes ``down > up`` whenever the prefactor is positive.
    """

    gL_plus: tuple
    gL_minus: tuple
    gR_plus: tuple
    gR_minus: tuple
    k_DA: tuple
    k_AD: tuple
    up: float
    down: float

    def __post_init__(self):
        for name in ("gL_plus", "gL_minus", "gR_plus", "gR_minus", "k_DA", "k_AD"):
            pair = getattr(self, name)
            if len(pair) != 2 or any(not (math.isfinite(v) and v >= 0) for v in pair):
                raise DomainError(f"rates {name} must be two nonnegative reals")
        for name in ("up", "down"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise DomainError(f"rate {name} must be >= 0, got {v}")

    def as_dict(self):
        """Flat name -> value view, for printing and serialization."""
        out = {}
        for n in (0, 1):
            out[f"gL_plus[{n}]"] = self.gL_plus[n]
            out[f"gL_minus[{n}]"] = self.gL_minus[n]
            out[f"gR_plus[{n}]"] = self.gR_plus[n]
            out[f"gR_minus[{n}]"] = self.gR_minus[n]
            out[f"k_DA[{n}]"] = self.k_DA[n]
            out[f"k_AD[{n}]"] = self.k_AD[n]
        out["up"] = self.up
        out["down"] = self.down
        return out


def franck_condon(n, lam, omega0):
    """Vibrational overlap weight |<n| displaced vacuum >|^2, truncated at n = 1.

    With ``g = lam/omega0``: F0 = exp(-g^2), F1 = g^2 exp(-g^2). Note the
    rate builder replaces these by 1 when ``lam == 0`` (the weights are
    neglected in that regime); call this directly for the bare overlap.
    """
    if n not in (0, 1):
        raise DomainError(f"vibrational level must be 0 or 1, got {n}")
    if not (math.isfinite(omega0) and omega0 > 0):
        raise DomainError(f"omega0 must be > 0, got {omega0}")
    g2 = (lam / omega0) ** 2
    if n == 0:
        return math.exp(-g2)
    return g2 * math.exp(-g2)


def multilevel_rates(params):
    """Build every transition rate of the five-state model.

    Lead rates carry a Fermi factor at the sideband energy; the acceptor
    couples to its lead only in the vibrational ground state. Transfer and
    relaxation rates carry Bose factors of the phonon bath.
    """
    if params.lam == 0.0:
        fc = (1.0, 1.0)
    else:
        fc = (franck_condon(0, params.lam, params.omega0),
              franck_condon(1, params.lam, params.omega0))
    nb = bose(params.omega0, params.t_vib)
    fL = tuple(fermi(params.eps_d + n * params.omega0, params.left) for n in (0, 1))
    fR = fermi(params.eps_a, params.right)
    return RateSet5(
        gL_plus=tuple(params.gamma_L * fc[n] * fL[n] for n in (0, 1)),
        gL_minus=tuple(params.gamma_L * fc[n] * (1.0 - fL[n]) for n in (0, 1)),
        gR_plus=(params.gamma_R * fR, 0.0),
        gR_minus=(params.gamma_R * (1.0 - fR), 0.0),
        k_DA=tuple(params.gamma_DA * fc[n] * (1.0 + nb) for n in (0, 1)),
        k_AD=tuple(params.gamma_AD * fc[n] * nb for n in (0, 1)),
        up=params.gamma0 * nb,
        down=params.gamma0 * (1.0 + nb),
    )


def multilevel_generator(rates):
    """Assemble the 5x5 population generator in basis (|0>, |D0>, |D1>, |A0>, |A1>).

    Off-diagonal entry (i, j) is the rate j -> i; each diagonal entry is
    minus the total escape rate of its column, so columns sum to zero (to
    rounding) and off-diagonals are nonnegative.
    """
    gLp, gLm = rates.gL_plus, rates.gL_minus
    gRp, gRm = rates.gR_plus, rates.gR_minus
    kDA, kAD = rates.k_DA, rates.k_AD
    up, down = rates.up, rates.down
    return np.array([
        [-(gLp[0] + gLp[1] + gRp[0] + gRp[1]), gLm[0], gLm[1], gRm[0], gRm[1]],
        [gLp[0], -(gLm[0] + kDA[0] + up), down, kAD[0], 0.0],
        [gLp[1], up, -(gLm[1] + kDA[1] + down), 0.0, kAD[1]],
        [gRp[0], kDA[0], 0.0, -(gRm[0] + kAD[0] + up), down],
        [gRp[1], 0.0, kDA[1], up, -(gRm[1] + kAD[1] + down)],
    ])


def _closed_blocks(gen):
    """Strongly connected components with no escape, i.e. the stationary blocks."""
    n = gen.shape[0]
    adjacency = (gen.T > 0.0) & ~np.eye(n, dtype=bool)
    ncomp, labels = scipy.sparse.csgraph.connected_components(
        scipy.sparse.csr_matrix(adjacency), directed=True, connection="strong"
    )
    closed = []
    for c in range(ncomp):
        members = np.flatnonzero(labels == c)
        outside = np.flatnonzero(labels != c)
        if not adjacency[np.ix_(members, outside)].any():
            closed.append(members)
    return closed


def _block_names(members, n):
    if n == len(STATE_LABELS):
        return "{" + ", ".join(STATE_LABELS[i] for i in members) + "}"
    return "{" + ", ".join(str(i) for i in members) + "}"


def multilevel_steady_state(gen):
    """Unique stationary distribution of a connected generator.

    Solves the rank-completed linear system (last row replaced by the
    normalization constraint). A rate graph with more than one closed
    block has no unique steady state and raises, naming the blocks.
    """
    gen = np.asarray(gen, dtype=float)
    n = gen.shape[0]
    if gen.shape != (n, n):
        raise DomainError(f"generator must be square, got shape {gen.shape}")
    closed = _closed_blocks(gen)
    if len(closed) != 1:
        blocks = " and ".join(_block_names(b, n) for b in closed)
        raise DegenerateSteadyStateError(
            f"stationary distribution is not unique: closed blocks {blocks} "
            "do not communicate"
        )
    a = gen.copy()
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        rho = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise DegenerateSteadyStateError(
            f"steady-state solve failed on a connected generator: {exc}"
        ) from exc
    return _clean_distribution(rho, gen)


def multilevel_steady_state_eigen(gen):
    """Stationary distribution via the kernel eigenvector.

    Independent cross-check route for :func:`multilevel_steady_state`;
    picks the eigenvalue closest to zero and normalizes its eigenvector.
    """
    gen = np.asarray(gen, dtype=float)
    closed = _closed_blocks(gen)
    if len(closed) != 1:
        blocks = " and ".join(_block_names(b, gen.shape[0]) for b in closed)
        raise DegenerateSteadyStateError(
            f"stationary distribution is not unique: closed blocks {blocks} "
            "do not communicate"
        )
    eigvals, eigvecs = np.linalg.eig(gen)
    k = np.argmin(np.abs(eigvals))
    vec = np.real(eigvecs[:, k])
    total = vec.sum()
    if abs(total) < 1e-300:
        raise DegenerateSteadyStateError("kernel eigenvector has zero total weight")
    return _clean_distribution(vec / total, gen)


def _clean_distribution(rho, gen):
    scale = np.abs(gen).max()
    worst = rho.min()
    if worst < -_CLAMP_NEGATIVE:
        raise DegenerateSteadyStateError(
            f"stationary solve produced component {worst:.3e} below the "
            f"clamping band; generator may be near-degenerate (scale {scale:.3e})"
        )
    rho = np.clip(rho, 0.0, None)
    return rho / rho.sum()


def propagate_multilevel(rho0, t, gen):
    """Evolve a five-state distribution by ``expm(gen * t)``.

    Scaling-and-squaring Pade is exact to rounding at this size; trace and
    positivity are checked to a 1e-10 band and then clamped.
    """
    if t < 0:
        raise DomainError(f"propagation time must be >= 0, got {t}")
    gen = np.asarray(gen, dtype=float)
    rho0 = np.asarray(rho0, dtype=float)
    n = gen.shape[0]
    if rho0.shape != (n,):
        raise DomainError(f"rho0 must have {n} components, got shape {rho0.shape}")
    if abs(rho0.sum() - 1.0) > 1e-12 or np.any(rho0 < -1e-12):
        raise DomainError(f"rho0 is not a probability distribution: {rho0}")
    rho = scipy.linalg.expm(gen * t) @ rho0
    if abs(rho.sum() - 1.0) > _PROPAGATE_TOL:
        raise DomainError(
            f"propagation lost normalization: sum = {rho.sum():.15f} at t = {t}"
        )
    if rho.min() < -_PROPAGATE_TOL or rho.max() > 1.0 + _PROPAGATE_TOL:
        raise DomainError(
            f"propagation left the probability simplex at t = {t}: {rho}"
        )
    rho = np.clip(rho, 0.0, 1.0)
    return rho / rho.sum()
