"""Shared deterministic instance samplers for the test suite.

All randomized tests draw from seeded generators so the suite is exactly
reproducible; Fermi arguments are kept within a few thermal widths so rates
stay far from double-precision saturation unless a test wants otherwise.
"""

import numpy as np

from rectifi.distributions import Reservoir
from rectifi.multilevel import MultilevelParams
from rectifi.tls import JunctionParams


def random_reservoir(rng, t_lo=0.5, t_hi=2.0):
    return Reservoir(mu=float(rng.uniform(-1.0, 1.0)),
                     temperature=float(rng.uniform(t_lo, t_hi)))


def random_tls_params(rng):
    left = random_reservoir(rng)
    right = random_reservoir(rng)
    return JunctionParams(
        eps_d=left.mu + float(rng.uniform(-3.0, 3.0)) * left.temperature,
        eps_a=right.mu + float(rng.uniform(-3.0, 3.0)) * right.temperature,
        omega0=float(rng.uniform(0.05, 0.4)),
        gamma_hyb=float(rng.uniform(0.3, 1.5)),
        left=left, right=right)


def random_multilevel_params(rng, lam_max=0.0):
    left = random_reservoir(rng)
    right = random_reservoir(rng)
    omega0 = float(rng.uniform(0.2, 1.0))
    lam = float(rng.uniform(0.0, lam_max)) if lam_max > 0 else 0.0
    return MultilevelParams(
        eps_d=left.mu + float(rng.uniform(-2.5, 2.5)) * left.temperature,
        eps_a=right.mu + float(rng.uniform(-2.5, 2.5)) * right.temperature,
        omega0=omega0,
        left=left, right=right,
        gamma_L=float(rng.uniform(0.3, 1.5)),
        gamma_R=float(rng.uniform(0.3, 1.5)),
        gamma_DA=float(rng.uniform(0.3, 1.5)),
        gamma_AD=float(rng.uniform(0.3, 1.5)),
        gamma0=float(rng.uniform(0.3, 1.5)),
        lam=lam,
        t_vib=float(rng.uniform(0.5, 2.0)))


def random_distribution(rng, n):
    weights = rng.uniform(0.05, 1.0, size=n)
    p = weights / weights.sum()
    # exact unit sum, matching what the propagators demand
    p[-1] = 1.0 - p[:-1].sum()
    return np.asarray(p)
