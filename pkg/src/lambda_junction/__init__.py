"""Single-photon transport through a pair of waveguides bridged by driven atoms.

Two tight-binding photonic channels are side-coupled to a chain of
three-level atoms whose second transition is driven by a classical control
field. Tuning that single knob routes a photon between the channels, splits
it into four equal parts, slows it down, or stores it in the atomic chain.
"""

__version__ = "0.1.0"

from .model import (
    OutOfBandError,
    SystemParams,
    SystemSpec,
    build_system,
    dispersion,
    group_velocity,
    wavevector_for_energy,
)
from .dynamics import (
    BoundaryContaminationWarning,
    ControlSchedule,
    NormDriftError,
    PacketTruncationWarning,
    ProbeConfig,
    State,
    Trajectory,
    WavePacketSpec,
    build_hamiltonian,
    make_gaussian_packet,
    norm,
    propagate,
    recompose_channels,
    rhs,
    symmetric_antisymmetric_decompose,
)
from .scattering import (
    DEFAULT_GRID,
    PoleError,
    ScatteringResult,
    SingularSystemError,
    atomic_self_energy,
    solve_stationary,
    transmission_spectrum,
)
from .observables import (
    NoPulseError,
    ProbabilitySummary,
    PulseEvent,
    VelocityFit,
    atomic_occupations,
    classify_pulses,
    detect_pulses,
    estimate_in_junction_velocity,
    integrated_probabilities,
    pulse_delay,
)
from .experiments import (
    ExperimentConfig,
    SpectrumGrid,
    UnknownPresetError,
    config_from_dict,
    config_to_dict,
    load_config,
    preset,
    run_experiment,
)
