"""Stationary single-photon scattering at fixed energy.

Plane-wave ansatz for a wave incoming in channel A from the left:

    alpha_n = e^{ikn} + r_A e^{-ikn}   (n <= 0)
    beta_n  =           r_B e^{-ikn}   (n <= 0)
    alpha_n = t_A e^{ikn},  beta_n = t_B e^{ikn}   (n >= N_a+1)

with k = arccos(-E/2). Substituting into the bulk equations at sites
0..N_a+1 plus the atomic equations gives a dense linear system of dimension
4 N_a + 4 whose unknowns are the interior amplitudes alpha_j, beta_j, u_j,
v_j and the four scattering amplitudes.

An independent reduced path eliminates the atoms: in the symmetric channel
s = (alpha+beta)/sqrt2 each atom site acquires the energy-dependent on-site
potential 2 chi(E) with chi = g^2 E / (E^2 - Omega^2) (the factor 2 because
both waveguides feed the same atom), while the antisymmetric channel is
free. At E = +-Omega chi diverges: the symmetric channel sees a hard wall
(amplitude pinned to zero at the first atom site), which yields exactly
t_s = 0, r_s = -e^{2ik} and hence all four probabilities 1/4. The solver
switches to that closed form when |E^2 - Omega^2| < 1e-12; the naive
elimination and the full linear system are both singular there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SystemSpec, wavevector_for_energy

DEFAULT_GRID = np.linspace(-1.8, 1.8, 1201)

_POLE_TOL = 1e-12


class PoleError(ValueError):
    """Self-energy evaluated at the divergent point E = +-Omega."""


class SingularSystemError(RuntimeError):
    """Stationary linear system is rank-deficient away from the handled poles."""


@dataclass(frozen=True)
class ScatteringResult:
    """Scattering amplitudes and probabilities at one energy."""

    E: float
    k: float
    t_A: complex
    t_B: complex
    r_A: complex
    r_B: complex
    T_AR: float
    T_BR: float
    R_AL: float
    R_BL: float

    @property
    def unitarity_defect(self) -> float:
        return abs(1.0 - (self.T_AR + self.T_BR + self.R_AL + self.R_BL))

    @classmethod
    def from_amplitudes(cls, E, k, t_A, t_B, r_A, r_B) -> "ScatteringResult":
        return cls(
            E=float(E), k=float(k),
            t_A=complex(t_A), t_B=complex(t_B),
            r_A=complex(r_A), r_B=complex(r_B),
            T_AR=abs(t_A) ** 2, T_BR=abs(t_B) ** 2,
            R_AL=abs(r_A) ** 2, R_BL=abs(r_B) ** 2,
        )


def atomic_self_energy(E: float, omega: float, g: float) -> float:
    """Effective atom potential chi(E) = g^2 E / (E^2 - Omega^2).

    This is the per-waveguide elimination of one atom's u, v pair at zero
    detuning; the symmetric channel of the two-waveguide junction sees
    2 chi at each atom site. Raises PoleError at E = +-Omega, where the
    junction acts as a hard wall instead.
    """
    denom = E * E - omega * omega
    if abs(denom) < _POLE_TOL:
        raise PoleError(
            f"self-energy pole at E={E}, Omega={omega}; use the hard-wall limit"
        )
    return g * g * E / denom


def _hard_wall_result(E: float, k: float) -> ScatteringResult:
    # symmetric channel reflects off a node at the first atom site,
    # antisymmetric channel is free: every probability is exactly 1/4
    t_s = 0.0
    r_s = -np.exp(2j * k)
    t_d, r_d = 1.0, 0.0
    return ScatteringResult.from_amplitudes(
        E, k,
        t_A=(t_s + t_d) / 2.0, t_B=(t_s - t_d) / 2.0,
        r_A=(r_s + r_d) / 2.0, r_B=(r_s - r_d) / 2.0,
    )


def _solve_full(
    E: float, k: float, system: SystemSpec, omega: float, incoming_b: bool = False
) -> ScatteringResult:
    Na = system.N_a
    g = system.g
    de = system.delta_e
    ds = system.delta_s
    eik = np.exp(1j * k)
    emik = np.exp(-1j * k)

    dim = 4 * Na + 4
    M = np.zeros((dim, dim), dtype=np.complex128)
    rhs = np.zeros(dim, dtype=np.complex128)
    ia = lambda j: j - 1            # alpha_1..alpha_Na
    ib = lambda j: Na + j - 1
    iu = lambda j: 2 * Na + j - 1
    iv = lambda j: 3 * Na + j - 1
    irA, irB, itA, itB = 4 * Na, 4 * Na + 1, 4 * Na + 2, 4 * Na + 3

    row = 0
    for (i_in, i_r, i_t, incoming) in (
        (ia, irA, itA, not incoming_b),
        (ib, irB, itB, incoming_b),
    ):
        # site n=0: E psi_0 + psi_-1 + psi_1 = 0 with the ansatz substituted
        M[row, i_in(1)] = 1.0
        M[row, i_r] = E + eik
        rhs[row] = -(E + emik) if incoming else 0.0
        row += 1
        # junction sites: E psi_j + psi_{j-1} + psi_{j+1} - g u_j = 0
        for j in range(1, Na + 1):
            M[row, i_in(j)] = E
            M[row, iu(j)] = -g
            if j > 1:
                M[row, i_in(j - 1)] = 1.0
            else:
                M[row, i_r] = 1.0
                if incoming:
                    rhs[row] = -1.0
            if j < Na:
                M[row, i_in(j + 1)] = 1.0
            else:
                M[row, i_t] = np.exp(1j * k * (Na + 1))
            row += 1
        # site n=Na+1
        M[row, i_in(Na)] = 1.0
        M[row, i_t] = E * np.exp(1j * k * (Na + 1)) + np.exp(1j * k * (Na + 2))
        row += 1
    for j in range(1, Na + 1):
        M[row, iu(j)] = de - E
        M[row, ia(j)] = g
        M[row, ib(j)] = g
        M[row, iv(j)] = omega
        row += 1
        M[row, iv(j)] = de - ds - E
        M[row, iu(j)] = omega
        row += 1

    try:
        x = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"stationary system singular at E={E}: {exc}") from exc
    residual = np.linalg.norm(M @ x - rhs)
    if residual > 1e-8 * max(1.0, np.linalg.norm(rhs)):
        raise SingularSystemError(
            f"stationary solve ill-conditioned at E={E}: residual {residual:.2e}"
        )
    return ScatteringResult.from_amplitudes(
        E, k, t_A=x[itA], t_B=x[itB], r_A=x[irA], r_B=x[irB]
    )


def _solve_chain(E: float, k: float, Na: int, potential: complex):
    """Transmission through Na sites carrying a uniform on-site potential."""
    eik = np.exp(1j * k)
    emik = np.exp(-1j * k)
    dim = Na + 2
    M = np.zeros((dim, dim), dtype=np.complex128)
    rhs = np.zeros(dim, dtype=np.complex128)
    i_r, i_t = Na, Na + 1

    M[0, 0] = 1.0
    M[0, i_r] = E + eik
    rhs[0] = -(E + emik)
    row = 1
    for j in range(1, Na + 1):
        M[row, j - 1] = E - potential
        if j > 1:
            M[row, j - 2] = 1.0
        else:
            M[row, i_r] = 1.0
            rhs[row] = -1.0
        if j < Na:
            M[row, j] = 1.0
        else:
            M[row, i_t] = np.exp(1j * k * (Na + 1))
        row += 1
    M[row, Na - 1] = 1.0
    M[row, i_t] = E * np.exp(1j * k * (Na + 1)) + np.exp(1j * k * (Na + 2))

    x = np.linalg.solve(M, rhs)
    return x[i_t], x[i_r]


def _solve_reduced(E: float, k: float, system: SystemSpec, omega: float) -> ScatteringResult:
    if system.delta_e != 0.0 or system.delta_s != 0.0:
        raise ValueError("reduced solver assumes zero detuning")
    chi = atomic_self_energy(E, omega, system.g)
    t_s, r_s = _solve_chain(E, k, system.N_a, 2.0 * chi)
    t_d, r_d = 1.0, 0.0
    return ScatteringResult.from_amplitudes(
        E, k,
        t_A=(t_s + t_d) / 2.0, t_B=(t_s - t_d) / 2.0,
        r_A=(r_s + r_d) / 2.0, r_B=(r_s - r_d) / 2.0,
    )


def _swap_channels(r: ScatteringResult) -> ScatteringResult:
    return ScatteringResult.from_amplitudes(
        r.E, r.k, t_A=r.t_B, t_B=r.t_A, r_A=r.r_B, r_B=r.r_A
    )


def solve_stationary(
    E: float, system: SystemSpec, omega: float, method: str = "full",
    incoming: str = "A",
) -> ScatteringResult:
    """Scattering amplitudes and probabilities at energy E.

    method 'full' solves the 4 N_a + 4 linear system with all interior
    amplitudes; 'reduced' eliminates the atoms via the self-energy (zero
    detuning only) and serves as an independent cross-check. Both switch
    to the exact hard-wall closed form at E = +-Omega. `incoming` selects
    which waveguide carries the unit-amplitude incident wave; the reported
    t_A/t_B/r_A/r_B always refer to waveguides A and B themselves.
    """
    if incoming not in ("A", "B"):
        raise ValueError(f"incoming must be 'A' or 'B', got {incoming!r}")
    k = wavevector_for_energy(E)
    if abs(E * E - omega * omega) < _POLE_TOL:
        res = _hard_wall_result(E, k)
        return _swap_channels(res) if incoming == "B" else res
    if method == "full":
        return _solve_full(E, k, system, omega, incoming_b=incoming == "B")
    if method == "reduced":
        res = _solve_reduced(E, k, system, omega)
        return _swap_channels(res) if incoming == "B" else res
    raise ValueError(f"unknown method {method!r}")


def transmission_spectrum(
    E_grid, system: SystemSpec, omega: float, method: str = "full"
) -> list[ScatteringResult]:
    """One ScatteringResult per grid energy, in grid order."""
    return [solve_stationary(float(E), system, omega, method=method) for E in E_grid]
