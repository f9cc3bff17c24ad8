"""Finite spin bath: spectrum, multiplicities, partition function, thermal weights.

The bath is N independent spin-1/2 with total z-projection S_z.  Its free
Hamiltonian alpha*S_z has levels nu_m = alpha*(m - N/2) with multiplicity
C(N, m), where m = 0..N counts the up spins; the operator coupling to the
system, S_z + N/2, has spectrum m on those same levels.

Unit convention: hbar = 1, energies in ns^-1, times and inverse temperature
beta in ns.  The level splitting alpha is stored in ns^-1 (the CLI accepts the
experimental ps^-1 scale and multiplies by 1000).  Thermal weights are
accumulated in log space so binomial coefficients never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

__all__ = [
    "KB_OVER_HBAR_NS_INV_PER_K",
    "SpinBath",
    "beta_from_temperature",
    "thermal_weights",
]

# CODATA: k_B = 1.380649e-23 J/K (exact), hbar = 1.054572e-34 J*s.
# Their ratio converts Kelvin to ns^-1: ~130.92 ns^-1 per K.
KB_JOULE_PER_K = 1.380649e-23
HBAR_JOULE_S = 1.054572e-34
KB_OVER_HBAR_NS_INV_PER_K = KB_JOULE_PER_K / HBAR_JOULE_S * 1e-9


def beta_from_temperature(temperature_k: float) -> float:
    """Inverse temperature beta (ns) for a temperature in Kelvin."""
    if not temperature_k > 0.0:
        raise ValueError(f"temperature must be positive, got {temperature_k} K")
    return 1.0 / (KB_OVER_HBAR_NS_INV_PER_K * temperature_k)


@dataclass(frozen=True)
class SpinBath:
    """Bath of ``n_spins`` spin-1/2 with level splitting ``alpha`` at inverse temperature ``beta``.

    ``temperature_k`` is informational metadata retained by
    :meth:`from_temperature`; the physics depends on beta only.
    """

    n_spins: int
    alpha: float
    beta: float
    temperature_k: float | None = None

    def __post_init__(self):
        if not (isinstance(self.n_spins, int) and self.n_spins >= 1):
            raise ValueError(f"n_spins must be a positive integer, got {self.n_spins}")
        if not self.beta >= 0.0:
            raise ValueError(f"beta must be non-negative, got {self.beta}")

    @classmethod
    def from_temperature(cls, n_spins: int, alpha: float, temperature_k: float) -> "SpinBath":
        return cls(
            n_spins=n_spins,
            alpha=alpha,
            beta=beta_from_temperature(temperature_k),
            temperature_k=temperature_k,
        )

    @property
    def beta_alpha(self) -> float:
        """Dimensionless thermal parameter beta*alpha."""
        return self.beta * self.alpha

    def occupations(self) -> np.ndarray:
        """Eigenvalues m = 0..N of the system-coupled bath operator S_z + N/2."""
        return np.arange(self.n_spins + 1)

    def level_energies(self) -> np.ndarray:
        """Bath level energies nu_m = alpha*(m - N/2) in ns^-1."""
        return self.alpha * (self.occupations() - 0.5 * self.n_spins)

    def log_weights(self) -> np.ndarray:
        """Unnormalized log thermal weights log C(N, m) - beta*alpha*m."""
        n = self.n_spins
        m = np.arange(n + 1, dtype=float)
        log_binom = gammaln(n + 1.0) - gammaln(m + 1.0) - gammaln(n - m + 1.0)
        return log_binom - self.beta_alpha * m

    def log_partition(self) -> float:
        """log Z with Z = sum_m C(N, m) e^{-beta*alpha*m}."""
        return float(logsumexp(self.log_weights()))

    def mean_occupation(self) -> float:
        """Thermal mean of m, i.e. the expected number of up spins."""
        weights = thermal_weights(self)
        return float(np.dot(self.occupations(), weights))


def thermal_weights(bath: SpinBath) -> np.ndarray:
    """Normalized thermal weights p_m = C(N, m) e^{-beta*alpha*m} / Z, m = 0..N."""
    logw = bath.log_weights()
    return np.exp(logw - logsumexp(logw))
