"""System topology, parameters, index conventions, and free-chain dispersion.

Two identical tight-binding waveguides (hopping 1, the energy unit) run in
parallel; sites 1..N_a of both are side-coupled, with strength g, to a chain
of three-level atoms whose e-s transition is driven by a classical field.
Everything downstream of this module works in units where the hopping and
hbar are both 1, so energies are dimensionless and velocities are sites per
unit time.

Site index convention for each waveguide: n runs over [-N+1, N+N_a].
The left channel is n in [-N+1, 0], the junction region is n in [1, N_a]
(atom j sits at site n=j), and the right channel is n in [N_a+1, N+N_a].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class OutOfBandError(ValueError):
    """Energy outside the open band (-2, 2)."""


@dataclass(frozen=True)
class SystemParams:
    """Static model parameters.

    N is the site count of each left/right channel, N_a the atom count,
    g the atom-waveguide coupling, delta_e / delta_s the detunings of the
    excited and metastable levels. Defaults give the reference geometry.
    """

    N: int = 1000
    N_a: int = 12
    g: float = 0.5
    delta_e: float = 0.0
    delta_s: float = 0.0

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.N_a < 1:
            raise ValueError(f"N_a must be >= 1, got {self.N_a}")


@dataclass(frozen=True)
class SystemSpec:
    """Validated system descriptor with the derived index layout.

    Each waveguide holds S = 2N + N_a sites stored left to right, so a site
    index n maps to array offset n + N - 1. The full state vector is the
    concatenation [alpha | beta | u | v] with dimension 2S + 2 N_a.
    """

    params: SystemParams

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def N_a(self) -> int:
        return self.params.N_a

    @property
    def g(self) -> float:
        return self.params.g

    @property
    def delta_e(self) -> float:
        return self.params.delta_e

    @property
    def delta_s(self) -> float:
        return self.params.delta_s

    @property
    def sites_per_channel(self) -> int:
        return 2 * self.params.N + self.params.N_a

    @property
    def dimension(self) -> int:
        return 2 * self.sites_per_channel + 2 * self.params.N_a

    @property
    def n_min(self) -> int:
        return -self.params.N + 1

    @property
    def n_max(self) -> int:
        return self.params.N + self.params.N_a

    def offset(self, n: int) -> int:
        """Array offset of waveguide site n within one channel block."""
        if not self.n_min <= n <= self.n_max:
            raise ValueError(f"site index {n} outside [{self.n_min}, {self.n_max}]")
        return n + self.params.N - 1

    @property
    def left(self) -> slice:
        """Channel slice for n in [-N+1, 0]."""
        return slice(0, self.params.N)

    @property
    def junction(self) -> slice:
        """Channel slice for n in [1, N_a]; atom j couples at offset N+j-1."""
        return slice(self.params.N, self.params.N + self.params.N_a)

    @property
    def right(self) -> slice:
        """Channel slice for n in [N_a+1, N+N_a]."""
        return slice(self.params.N + self.params.N_a, self.sites_per_channel)

    @property
    def sites(self) -> np.ndarray:
        """Site indices n for one channel block, in storage order."""
        return np.arange(self.n_min, self.n_max + 1)


def build_system(params: SystemParams) -> SystemSpec:
    """Validate params and return the system descriptor."""
    if not isinstance(params, SystemParams):
        params = SystemParams(**params)
    return SystemSpec(params)


def dispersion(k):
    """Free-chain dispersion E(k) = -2 cos k."""
    return -2.0 * np.cos(k)


def wavevector_for_energy(E: float) -> float:
    """Inverse of `dispersion` on [0, pi]: k = arccos(-E/2).

    Raises OutOfBandError for |E| >= 2 (no propagating mode).
    """
    if abs(E) >= 2.0:
        raise OutOfBandError(f"|E| must be < 2 for a propagating mode, got E={E}")
    return float(np.arccos(-E / 2.0))


def group_velocity(k):
    """Group velocity dE/dk = 2 sin k, in sites per unit time."""
    return 2.0 * np.sin(k)
