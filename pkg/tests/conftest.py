"""Shared fixtures: full-geometry reference runs, computed once per session."""

from __future__ import annotations

import warnings

import numpy as np
import pytest

from lambda_junction import (
    BoundaryContaminationWarning,
    ControlSchedule,
    PacketTruncationWarning,
    SystemParams,
    build_system,
    make_gaussian_packet,
    preset,
    propagate,
    recompose_channels,
)


def run_quiet(config, schedule=None, t_end=None):
    """Run a dynamics config, suppressing the expected benign warnings.

    The reference packet placement leaves ~1e-5 of Gaussian mass outside
    the chain (truncation warning) and the long delay runs let the prompt
    pulse reach the right wall (boundary warning); both are inherent to
    the reference geometry, not test failures.
    """
    system = build_system(config.system)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PacketTruncationWarning)
        warnings.simplefilter("ignore", BoundaryContaminationWarning)
        state0 = make_gaussian_packet(config.packet, system)
        return propagate(
            state0,
            schedule if schedule is not None else config.schedule,
            t_end if t_end is not None else config.t_end,
            config.dt,
        )


@pytest.fixture(scope="session")
def default_system():
    return build_system(SystemParams())


@pytest.fixture(scope="session")
def routing_off_traj():
    return run_quiet(preset("routing_off"))


@pytest.fixture(scope="session")
def routing_on_traj():
    return run_quiet(preset("routing_on"))


@pytest.fixture(scope="session")
def splitting_traj():
    return run_quiet(preset("splitting"))


@pytest.fixture(scope="session")
def delay12_traj():
    return run_quiet(preset("delay_storage_12"))


@pytest.fixture(scope="session")
def delay08_traj():
    return run_quiet(preset("delay_storage_08"))


@pytest.fixture(scope="session")
def storage_traj():
    # delay run with the control field switched off on [450, 700]
    schedule = ControlSchedule(values=(0.12, 0.0, 0.12), breakpoints=(450.0, 700.0))
    return run_quiet(preset("delay_storage_12"), schedule=schedule)


@pytest.fixture(scope="session")
def antisym_traj(default_system):
    # packet with beta = -alpha: pure antisymmetric channel
    sysm = default_system
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PacketTruncationWarning)
        ref = make_gaussian_packet(preset("routing_off").packet, sysm)
    zeros = np.zeros(sysm.N_a, dtype=np.complex128)
    state0 = recompose_channels(
        s=np.zeros(sysm.sites_per_channel, dtype=np.complex128),
        d=ref.alpha.copy(), u=zeros, v=zeros, system=sysm,
    )
    return propagate(state0, ControlSchedule.constant(0.5), t_end=600.0, dt=0.02)
