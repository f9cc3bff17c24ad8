"""Ideal three-level Lambda-system physics: states, propagators, and the holonomic gate.

Everything works in the fixed basis {|0>, |1>, |e>} (indices 0, 1, 2), with
hbar = 1, frequencies in ns^-1 and times in ns.  A square pulse pair with Rabi
amplitude ``omega``, common detuning ``delta``, amplitude mixing angle
``theta`` and relative phase ``phi`` couples the excited level |e> to exactly
one superposition of the qubit levels (the bright state); the orthogonal
combination (the dark state) never couples to the drive.

Propagators are evaluated in closed form on the 2x2 {bright, excited} block;
dense matrix exponentials live in :mod:`holobath.reference` and are used only
to cross-validate this module.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "KET_E",
    "LambdaParams",
    "DiagonalizationParams",
    "bright_dark_states",
    "sub_hamiltonian",
    "propagator",
    "bright_survival_amplitude",
    "diagonalization_params",
    "ideal_gate",
]

TWO_PI = 2.0 * math.pi

# Auxiliary (excited) level in the fixed basis ordering.
KET_E = np.array([0.0, 0.0, 1.0], dtype=complex)


def wrap_phase(x: float) -> float:
    """Reduce an angle to [0, 2*pi); x % (2*pi) alone can round up to 2*pi."""
    out = x % TWO_PI
    return 0.0 if out >= TWO_PI else out


@dataclass(frozen=True)
class LambdaParams:
    """Control parameters of the simultaneous square pulse pair.

    The two drive amplitudes are Omega_0 = omega * e^{i phi} * sin(theta/2)
    and Omega_1 = -omega * cos(theta/2); ``delta`` is the common detuning of
    both transitions.
    """

    omega: float
    delta: float
    theta: float = math.pi / 2
    phi: float = 0.0

    def __post_init__(self):
        if not self.omega > 0.0:
            raise ValueError(f"Rabi amplitude omega must be positive, got {self.omega}")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"mixing angle theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi", wrap_phase(self.phi))

    @property
    def delta0(self) -> float:
        """Gap sqrt(delta^2 + 4 omega^2) of the {bright, excited} block."""
        return math.hypot(self.delta, 2.0 * self.omega)

    @property
    def tau0(self) -> float:
        """Cyclic pulse duration 2*pi/delta0 (ns)."""
        return TWO_PI / self.delta0

    @property
    def chi(self) -> float:
        """Dynamical phase delta*tau0/2 acquired by the bright state over one cycle."""
        return 0.5 * self.delta * self.tau0

    @property
    def rabi_pair(self) -> tuple[complex, complex]:
        """Complex drive amplitudes (Omega_0, Omega_1) on the |0>-|e> and |1>-|e> legs."""
        half = 0.5 * self.theta
        return (
            self.omega * cmath.exp(1j * self.phi) * math.sin(half),
            -self.omega * math.cos(half),
        )


@dataclass(frozen=True)
class DiagonalizationParams:
    """Diagonalization data of one {bright, excited} block.

    ``eta`` is the block mixing angle taken in (0, pi) so that
    cos(eta) = D/big_delta holds for effective detunings D of either sign,
    ``sigma`` = D/2 is the mean phase rate and ``big_delta`` the block gap.
    """

    eta: float
    sigma: float
    big_delta: float


def bright_dark_states(p: LambdaParams) -> tuple[np.ndarray, np.ndarray]:
    """Return (dark, bright) unit kets of the pulse pair.

    dark   = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
    bright = e^{-i phi} sin(theta/2)|0> - cos(theta/2)|1>
    """
    half = 0.5 * p.theta
    s, c = math.sin(half), math.cos(half)
    # One shared phase factor so that <bright|dark> cancels exactly in floats.
    phase = cmath.exp(1j * p.phi)
    dark = np.array([c, phase * s, 0.0], dtype=complex)
    bright = np.array([phase.conjugate() * s, -c, 0.0], dtype=complex)
    return dark, bright


def sub_hamiltonian(p: LambdaParams, effective_detuning: float) -> np.ndarray:
    """Drive Hamiltonian D|e><e| + omega(|e><b| + |b><e|) for one bath level.

    ``effective_detuning`` is the bare detuning shifted by the bath,
    D = delta + gamma*m.  Built from outer products of the bright state so the
    dark state is annihilated to machine precision.
    """
    bright = bright_dark_states(p)[1]
    coupling = np.outer(KET_E, bright.conj())
    projector_e = np.outer(KET_E, KET_E.conj())
    return effective_detuning * projector_e + p.omega * (coupling + coupling.conj().T)


def propagator(p: LambdaParams, effective_detuning: float, t: float) -> np.ndarray:
    """Closed-form propagator exp(-i H_D t) of :func:`sub_hamiltonian`.

    Identity on the dark state; the {bright, excited} block is exponentiated
    analytically via its Pauli decomposition, so no numerical matrix
    exponential is involved.
    """
    dark, bright = bright_dark_states(p)
    D = effective_detuning
    big = math.hypot(D, 2.0 * p.omega)
    half_angle = 0.5 * big * t
    mean_phase = cmath.exp(-0.5j * D * t)
    cos_r = math.cos(half_angle)
    sin_r = math.sin(half_angle)
    u_bb = mean_phase * (cos_r + 1j * (D / big) * sin_r)
    u_ee = mean_phase * (cos_r - 1j * (D / big) * sin_r)
    u_be = mean_phase * (-1j * (2.0 * p.omega / big) * sin_r)
    return (
        np.outer(dark, dark.conj())
        + u_bb * np.outer(bright, bright.conj())
        + u_ee * np.outer(KET_E, KET_E.conj())
        + u_be * (np.outer(bright, KET_E.conj()) + np.outer(KET_E, bright.conj()))
    )


def diagonalization_params(omega_eff: float, effective_detuning: float) -> DiagonalizationParams:
    """Block diagonalization angles for drive amplitude omega_eff and detuning D.

    The branch eta in (0, pi) is fixed by atan2(2 omega_eff, D), which keeps
    cos(eta) = D/big_delta valid for negative D and has no singularity at D = 0.
    """
    if not omega_eff > 0.0:
        raise ValueError(f"omega_eff must be positive, got {omega_eff}")
    D = effective_detuning
    return DiagonalizationParams(
        eta=math.atan2(2.0 * omega_eff, D),
        sigma=0.5 * D,
        big_delta=math.hypot(D, 2.0 * omega_eff),
    )


def bright_survival_amplitude(omega_eff, effective_detuning, tau0: float, delta0: float):
    """Bright-state survival amplitude <b|exp(-i H_D tau0)|b> in closed form.

    Valid under the cyclic-time convention tau0 = 2*pi/delta0, where delta0 is
    the gap of the *ideal* block.  ``effective_detuning`` may be a scalar or an
    array (one entry per bath level); the result matches elementwise.
    """
    if not omega_eff > 0.0:
        raise ValueError(f"omega_eff must be positive, got {omega_eff}")
    if not delta0 > 0.0:
        raise ValueError(f"delta0 must be positive, got {delta0}")
    D = np.asarray(effective_detuning, dtype=float)
    big = np.hypot(D, 2.0 * omega_eff)
    angle = np.pi * big / delta0
    # cos(eta) = D/big, sigma = D/2
    out = np.exp(-0.5j * D * tau0) * (np.cos(angle) + 1j * (D / big) * np.sin(angle))
    if np.ndim(effective_detuning) == 0:
        return complex(out[()])
    return out


def ideal_gate(p: LambdaParams) -> np.ndarray:
    """Holonomic gate |d><d| - e^{-i chi}|b><b| after one cyclic pulse.

    Only the action on Span{|0>, |1>} is physically meaningful; the |e> level
    carries the phase -e^{-i chi} so the operator is unitary on all three
    levels and coincides with the error-free cyclic propagator.
    """
    dark, bright = bright_dark_states(p)
    bright_phase = -cmath.exp(-1j * p.chi)
    return np.outer(dark, dark.conj()) + bright_phase * (
        np.outer(bright, bright.conj()) + np.outer(KET_E, KET_E.conj())
    )
