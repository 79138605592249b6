"""Derived quantities: channel probabilities, occupations, pulses, velocities.

Channel probabilities split the norm into the four outer channel sums, the
atomic occupation P_C (u and v levels only), and the small junction-region
waveguide remainder P_Cwg, so the six fields always add up to the norm.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .model import group_velocity
from .dynamics import State


class NoPulseError(RuntimeError):
    """No qualifying window in the occupation time series."""


@dataclass(frozen=True)
class ProbabilitySummary:
    P_AL: float
    P_AR: float
    P_BL: float
    P_BR: float
    P_C: float
    P_Cwg: float

    @property
    def total(self) -> float:
        return self.P_AL + self.P_AR + self.P_BL + self.P_BR + self.P_C + self.P_Cwg


def integrated_probabilities(state: State) -> ProbabilitySummary:
    """Integrated probability in each region; fields sum to norm(state)."""
    sysm = state.system
    a = np.abs(state.alpha) ** 2
    b = np.abs(state.beta) ** 2
    atoms = float(np.sum(np.abs(state.u) ** 2) + np.sum(np.abs(state.v) ** 2))
    return ProbabilitySummary(
        P_AL=float(a[sysm.left].sum()),
        P_AR=float(a[sysm.right].sum()),
        P_BL=float(b[sysm.left].sum()),
        P_BR=float(b[sysm.right].sum()),
        P_C=atoms,
        P_Cwg=float(a[sysm.junction].sum() + b[sysm.junction].sum()),
    )


def atomic_occupations(state: State) -> np.ndarray:
    """Array of shape (N_a, 2); row j-1 holds (|u_j|^2, |v_j|^2)."""
    return np.stack([np.abs(state.u) ** 2, np.abs(state.v) ** 2], axis=1)


@dataclass(frozen=True)
class PulseEvent:
    """One contiguous density lump in a channel snapshot."""

    region: str
    centroid: float
    mass: float
    width: float
    start: int
    stop: int
    classification: str = "unknown"


def detect_pulses(
    density: np.ndarray,
    threshold: float = 0.02,
    region: str = "",
    origin: int = 0,
) -> list[PulseEvent]:
    """Contiguous runs with density >= threshold * max(density), as events.

    Each event reports its mass (plain sum over the run), centroid, and RMS
    width, all in site units with density[0] at site index `origin`. Events
    come out sorted by centroid. An all-quiet region (max below the 1e-9
    absolute floor) yields an empty list.
    """
    density = np.asarray(density, dtype=float)
    if threshold <= 0:
        raise ValueError(f"threshold must be > 0, got {threshold}")
    if density.size and density.min() < 0:
        raise ValueError("density must be non-negative")
    if density.size == 0 or density.max() < 1e-9:
        return []
    mask = density >= threshold * density.max()
    events = []
    i = 0
    n = density.size
    while i < n:
        if not mask[i]:
            i += 1
            continue
        j = i
        while j < n and mask[j]:
            j += 1
        seg = density[i:j]
        mass = float(seg.sum())
        x = np.arange(i, j, dtype=float) + origin
        centroid = float((x * seg).sum() / mass)
        width = float(np.sqrt(((x - centroid) ** 2 * seg).sum() / mass))
        events.append(PulseEvent(
            region=region, centroid=centroid, mass=mass, width=width,
            start=i + origin, stop=j + origin,
        ))
        i = j
    return events


def classify_pulses(events: list[PulseEvent], outward: int = 1) -> list[PulseEvent]:
    """Label the earliest-arriving event primary, the rest secondary.

    outward is +1 for a right-moving channel (largest centroid arrived
    first) and -1 for a left-moving one. Returns new events, still sorted
    by centroid.
    """
    if outward not in (1, -1):
        raise ValueError("outward must be +1 or -1")
    if not events:
        return []
    lead = max(events, key=lambda e: outward * e.centroid)
    return [
        replace(e, classification="primary" if e is lead else "secondary")
        for e in events
    ]


def pulse_delay(primary: PulseEvent, secondary: PulseEvent, k0: float) -> float:
    """Centroid gap between secondary and primary over the group velocity."""
    return abs(primary.centroid - secondary.centroid) / group_velocity(k0)


@dataclass(frozen=True)
class VelocityFit:
    """Least-squares slope of the v-occupation centroid over the window."""

    slope: float
    residual: float
    t_start: float
    t_end: float


def estimate_in_junction_velocity(
    times: np.ndarray,
    v_occupations: np.ndarray,
    min_total: float = 0.1,
) -> VelocityFit:
    """Slope, in atoms per unit time, of the stored-excitation centroid.

    v_occupations has shape (len(times), N_a) with |v_j|^2 per atom. The
    fit runs over the longest contiguous stretch of times where the summed
    occupation exceeds min_total; the centroid is sum_j j |v_j|^2 / sum_j
    |v_j|^2 with j = 1..N_a. Raises NoPulseError if no sample qualifies.
    """
    times = np.asarray(times, dtype=float)
    occ = np.asarray(v_occupations, dtype=float)
    if occ.shape[0] != times.size:
        raise ValueError("times and v_occupations lengths differ")
    total = occ.sum(axis=1)
    qualifying = total > min_total
    if not qualifying.any():
        raise NoPulseError(f"summed v occupation never exceeds {min_total}")

    # longest contiguous qualifying run
    best_len, best_start = 0, 0
    i = 0
    n = qualifying.size
    while i < n:
        if not qualifying[i]:
            i += 1
            continue
        j = i
        while j < n and qualifying[j]:
            j += 1
        if j - i > best_len:
            best_len, best_start = j - i, i
        i = j
    sel = slice(best_start, best_start + best_len)

    j_idx = np.arange(1, occ.shape[1] + 1, dtype=float)
    centroid = (occ[sel] * j_idx).sum(axis=1) / total[sel]
    t = times[sel]
    if t.size < 2:
        raise NoPulseError("qualifying window has fewer than two samples")
    coeffs, res = np.polyfit(t, centroid, 1, full=True)[:2]
    rms = float(np.sqrt(res[0] / t.size)) if res.size else 0.0
    return VelocityFit(
        slope=float(coeffs[0]), residual=rms,
        t_start=float(t[0]), t_end=float(t[-1]),
    )
