"""Single-mode Gaussian states as 2x2 covariance matrices and the channel
actions on them.

Convention: quadratures (Q, P) with vacuum covariance = I, so a thermal
state with mean photon number N has covariance (2N+1)I.  In this
convention the thermal noise channel acts as

    Gamma -> lam*Gamma + (1-lam)(2*N_E+1) I

and the phase-insensitive amplifier of gain G as

    Gamma -> G*Gamma + (G-1) I.

Every thermal channel factors as amplifier(G) o pure_loss(lam/G) with
G = (1-lam)*N_E + 1; `decompose` returns that pair.  Only zero-mean
states are represented here: all the entropic quantities downstream are
displacement-invariant, and first moments are handled by the Fock-space
oracle where they matter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

__all__ = [
    "ChannelParams",
    "AmplifierParams",
    "Decomposition",
    "CovarianceMatrix",
    "apply_thermal",
    "apply_amplifier",
    "decompose",
    "thermal_covariance",
    "mean_photons",
    "random_covariance",
]

# det(Gamma) >= 1 is the single-mode uncertainty relation; allow roundoff.
PHYSICALITY_TOL = 1e-9
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    """Thermal noise channel: transmissivity in (0, 1], environment photons >= 0.

    transmissivity = 0 is excluded: that channel ignores its input entirely
    (capacity 0) and would make the pure-loss factor of `decompose` degenerate.
    """

    transmissivity: float
    environment_photons: float

    def __post_init__(self):
        lam = self.transmissivity
        n_env = self.environment_photons
        if not (math.isfinite(lam) and 0.0 < lam <= 1.0):
            raise ValueError(f"transmissivity must be in (0, 1], got {lam}")
        if not (math.isfinite(n_env) and n_env >= 0.0):
            raise ValueError(f"environment_photons must be >= 0, got {n_env}")


@dataclass(frozen=True)
class AmplifierParams:
    """Phase-insensitive amplifier with gain >= 1."""

    gain: float

    def __post_init__(self):
        if not (math.isfinite(self.gain) and self.gain >= 1.0):
            raise ValueError(f"gain must be >= 1, got {self.gain}")


@dataclass(frozen=True)
class Decomposition:
    """Amplifier-after-pure-loss factorization of a thermal channel."""

    gain: float
    pure_loss_transmissivity: float

    def __post_init__(self):
        if not (math.isfinite(self.gain) and self.gain >= 1.0):
            raise ValueError(f"gain must be >= 1, got {self.gain}")
        lam = self.pure_loss_transmissivity
        if not (math.isfinite(lam) and 0.0 < lam <= 1.0):
            raise ValueError(
                f"pure_loss_transmissivity must be in (0, 1], got {lam}"
            )


@dataclass(frozen=True)
class CovarianceMatrix:
    """2x2 real symmetric quadrature covariance matrix, vacuum = I.

    Physicality (Gamma + i*Omega >= 0) reduces for one mode to
    det(Gamma) >= 1 with positive trace; checked at construction with a
    1e-9 tolerance for roundoff.
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (2, 2):
            raise ValueError(f"covariance matrix must be 2x2, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("covariance matrix entries must be finite")
        if abs(m[0, 1] - m[1, 0]) > SYMMETRY_TOL * max(1.0, abs(m[0, 1])):
            raise ValueError(f"covariance matrix must be symmetric, got {m}")
        m[0, 1] = m[1, 0] = 0.5 * (m[0, 1] + m[1, 0])
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        trace = m[0, 0] + m[1, 1]
        if det < 1.0 - PHYSICALITY_TOL or trace <= 0.0:
            raise ValueError(
                f"unphysical covariance matrix: det={det}, trace={trace}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def det(self) -> float:
        m = self.matrix
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]

    @property
    def trace(self) -> float:
        return self.matrix[0, 0] + self.matrix[1, 1]

    @classmethod
    def identity(cls) -> "CovarianceMatrix":
        return cls(np.eye(2))


def apply_thermal(params: ChannelParams, gamma: CovarianceMatrix) -> CovarianceMatrix:
    """Covariance action of the thermal noise channel.

    lam*Gamma + (1-lam)(2*N_E+1) I; maps physical states to physical states.
    """
    lam = params.transmissivity
    noise = (1.0 - lam) * (2.0 * params.environment_photons + 1.0)
    return CovarianceMatrix(lam * gamma.matrix + noise * np.eye(2))


def apply_amplifier(params: AmplifierParams, gamma: CovarianceMatrix) -> CovarianceMatrix:
    """Covariance action of the amplifier: G*Gamma + (G-1) I."""
    g = params.gain
    return CovarianceMatrix(g * gamma.matrix + (g - 1.0) * np.eye(2))


def decompose(params: ChannelParams) -> Decomposition:
    """Factor the thermal channel as amplifier(G) after pure loss(lam/G).

    G = (1-lam)*N_E + 1.  Composing `apply_amplifier(G)` with
    `apply_thermal((lam/G, 0))` reproduces `apply_thermal(params)` exactly:
    G*(lt*Gamma + (1-lt)I) + (G-1)I = lam*Gamma + (1-lam)(2*N_E+1)I.
    """
    gain = (1.0 - params.transmissivity) * params.environment_photons + 1.0
    return Decomposition(gain=gain, pure_loss_transmissivity=params.transmissivity / gain)


def thermal_covariance(n_mean: float) -> CovarianceMatrix:
    """Covariance (2N+1) I of the thermal state with mean photon number N."""
    if not (math.isfinite(n_mean) and n_mean >= 0.0):
        raise ValueError(f"mean photon number must be >= 0, got {n_mean}")
    return CovarianceMatrix((2.0 * n_mean + 1.0) * np.eye(2))


def mean_photons(gamma: CovarianceMatrix) -> float:
    """Mean photon number of a zero-mean state: (trace(Gamma) - 2) / 4."""
    return (gamma.trace - 2.0) / 4.0


def random_covariance(rng: np.random.Generator,
                      max_thermal: float = 5.0,
                      max_squeezing: float = 1.0) -> CovarianceMatrix:
    """Random physical covariance: rotated squeezed thermal state.

    Gamma = (2N+1) R(theta) diag(e^{2r}, e^{-2r}) R(theta)^T with
    N ~ U[0, max_thermal], r ~ U[-max_squeezing, max_squeezing],
    theta ~ U[0, pi).  det(Gamma) = (2N+1)^2 >= 1, so always physical,
    and generically anisotropic.
    """
    n = rng.uniform(0.0, max_thermal)
    r = rng.uniform(-max_squeezing, max_squeezing)
    theta = rng.uniform(0.0, math.pi)
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    core = np.diag([math.exp(2.0 * r), math.exp(-2.0 * r)])
    return CovarianceMatrix((2.0 * n + 1.0) * rot @ core @ rot.T)
