"""Closed-form relaxation of Gaussian states in a thermal channel.

Weak damping at rate gamma toward bath occupation nbar leaves the state
Gaussian; the moments obey

    <a>(t) = <a>(0) exp(-(i omega + gamma/2) t),
    V(t)   = (V(0) - f) exp(-gamma t) + f,          f = nbar + 1/2,
    M(t)   = M(0) exp(-(gamma + 2 i omega) t),

so the full covariance evolution is the solution of the diagonal-drift
Lyapunov equation dC/dt = L C + C L+ + gamma f I.  Every recorded observable
(energies, ergotropy and its split, entropy, effective squeezed-thermal
parameters) follows in closed form; the dimensionless time tau = gamma t is
used for trajectory grids.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .factory import SqueezingParameter, ThermalOccupation, _occupation, _squeezing
from .states import GaussianState, SystemBathSpec

__all__ = [
    "EffectiveParameters",
    "Trajectory",
    "ErgotropyRate",
    "evolve_analytic",
    "effective_parameters",
    "sample_trajectory",
    "ergotropy_rate",
]

LOG_PI_PLUS_ONE = math.log(math.pi) + 1.0


@dataclass(frozen=True)
class EffectiveParameters:
    """Squeezed-thermal parameterization of a relaxing covariance.

    Any evolved single-mode covariance is again of squeezed-thermal form;
    these are its thermal scale f_beta_t = sqrt(det cov), squeezing magnitude
    r_t, rotating phase theta_t = theta - 2 omega t, and the purely thermal
    relaxation scale delta_beta = (f_pi - f) exp(-gamma t) + f.
    """

    f_beta_t: float
    r_t: float
    theta_t: float
    delta_beta: float


@dataclass(frozen=True)
class Trajectory:
    """Observables sampled along a relaxation, indexed by tau = gamma t."""

    tau: np.ndarray
    e_state: np.ndarray
    e_passive: np.ndarray
    ergotropy: np.ndarray
    erg_v: np.ndarray
    erg_theta: np.ndarray
    wigner_entropy: np.ndarray
    f_beta_t: np.ndarray
    r_t: np.ndarray

    def __len__(self):
        return int(self.tau.size)


class ErgotropyRate(NamedTuple):
    """d ergotropy/dt split into energy-flux and entropy contributions."""

    rate: float
    flux: float
    entropy_term: float


def evolve_analytic(state0: GaussianState, spec: SystemBathSpec, t: float) -> GaussianState:
    """State after damping for time t >= 0 (closed form, semigroup exact)."""
    if not math.isfinite(t) or t < 0.0:
        raise ValueError("evolution time must be finite and nonnegative")
    f = spec.f_beta
    decay = math.exp(-spec.gamma * t)
    v = state0.alpha_mean * cmath.exp(-(1j * spec.omega + 0.5 * spec.gamma) * t)
    # convex combination: exact at t = 0 and in the t -> infinity limit
    a = state0.symmetric_variance * decay + f * (1.0 - decay)
    m = state0.anomalous_variance * cmath.exp(-(spec.gamma + 2j * spec.omega) * t)
    return GaussianState.from_moments(v, a, m)


def effective_parameters(occ, z, spec: SystemBathSpec, t: float) -> EffectiveParameters:
    """Time-dependent (f_beta_t, r_t, theta_t, delta_beta) of a squeezed thermal seed.

    Consistent with evolve_analytic: the evolved covariance has
    det cov = f_beta_t^2 and V = f_beta_t cosh(2 r_t).
    """
    if not math.isfinite(t) or t < 0.0:
        raise ValueError("evolution time must be finite and nonnegative")
    o: ThermalOccupation = _occupation(occ)
    zz: SqueezingParameter = _squeezing(z)
    f_pi, f = o.f_beta_pi, spec.f_beta
    x = math.exp(-spec.gamma * t)
    delta_beta = f_pi * x + f * (1.0 - x)
    sinh_sq = math.sinh(zz.r) ** 2
    f_t = math.sqrt(delta_beta ** 2 + 4.0 * f_pi * f * x * (1.0 - x) * sinh_sq)
    cosh_2rt = (delta_beta + 2.0 * f_pi * x * sinh_sq) / f_t
    r_t = 0.5 * math.acosh(max(1.0, cosh_2rt))
    theta_t = zz.theta - 2.0 * spec.omega * t
    return EffectiveParameters(f_t, r_t, theta_t, delta_beta)


def sample_trajectory(state0: GaussianState, spec: SystemBathSpec, tau_grid) -> Trajectory:
    """Sample the relaxation of state0 on a dimensionless tau = gamma t grid.

    The grid must start at 0 and increase strictly; every record satisfies
    e_state - e_passive = ergotropy and erg_v + erg_theta = ergotropy up to
    roundoff.
    """
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or tau.size == 0:
        raise ValueError("tau grid must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(tau)):
        raise ValueError("tau grid must be finite")
    if tau[0] != 0.0:
        raise ValueError("tau grid must start at 0")
    if tau.size > 1 and not np.all(np.diff(tau) > 0.0):
        raise ValueError("tau grid must be strictly increasing")

    omega, f = spec.omega, spec.f_beta
    x = np.exp(-tau)
    a = state0.symmetric_variance * x + f * (1.0 - x)
    abs_m = abs(state0.anomalous_variance) * x
    v_sq = abs(state0.alpha_mean) ** 2 * x
    f_t = np.sqrt(a * a - abs_m * abs_m)

    e_state = omega * (a + v_sq)
    e_passive = omega * f_t
    erg = e_state - e_passive
    erg_v = omega * v_sq
    erg_theta = np.maximum(omega * (a - f_t), 0.0)
    entropy = LOG_PI_PLUS_ONE + np.log(f_t)
    r_t = 0.5 * np.arccosh(np.maximum(a / f_t, 1.0))
    return Trajectory(tau, e_state, e_passive, erg, erg_v, erg_theta, entropy, f_t, r_t)


def ergotropy_rate(state0: GaussianState, spec: SystemBathSpec, t: float) -> ErgotropyRate:
    """Instantaneous discharge rate at time t, with its two contributions.

    Returns (rate, flux, entropy_term) where flux = -dE/dt is the energy
    outflow, entropy_term = omega sqrt(det cov) dS/dt equals the passive
    energy drift (minus the passive-state flux), and
    rate = -flux - entropy_term.  All derivatives are with respect to the
    raw time t and evaluated from the closed-form solution.
    """
    state = evolve_analytic(state0, spec, t)
    omega, gamma, f = spec.omega, spec.gamma, spec.f_beta
    a = state.symmetric_variance
    f_t = math.sqrt(state.cov_det)
    flux = gamma * omega * (a + abs(state.alpha_mean) ** 2 - f)
    entropy_term = gamma * omega * (f * a / f_t - f_t)
    return ErgotropyRate(-flux - entropy_term, flux, entropy_term)
