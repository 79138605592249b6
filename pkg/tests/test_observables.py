import math

import numpy as np
import pytest

from lambda_junction import (
    NoPulseError,
    State,
    SystemParams,
    WavePacketSpec,
    atomic_occupations,
    build_system,
    classify_pulses,
    detect_pulses,
    estimate_in_junction_velocity,
    integrated_probabilities,
    make_gaussian_packet,
    norm,
    pulse_delay,
)


def small_system(N=50, N_a=4):
    return build_system(SystemParams(N=N, N_a=N_a))


def gaussian_density(n, center, width, mass):
    d = np.exp(-((np.arange(n) - center) ** 2) / (2.0 * width ** 2))
    return d * (mass / d.sum())


# ---------------- probability summary ----------------

def test_fresh_packet_summary():
    sysm = small_system(N=300)
    st = make_gaussian_packet(WavePacketSpec(n0=-150, sigma=30.0, k0=1.0), sysm)
    s = integrated_probabilities(st)
    assert s.P_AL == pytest.approx(1.0, abs=1e-12)
    for x in (s.P_AR, s.P_BL, s.P_BR, s.P_C, s.P_Cwg):
        assert x <= 1e-12


def test_summary_sum_rule():
    sysm = small_system()
    rng = np.random.default_rng(3)
    psi = rng.normal(size=sysm.dimension) + 1j * rng.normal(size=sysm.dimension)
    st = State(sysm, psi)
    s = integrated_probabilities(st)
    assert s.total == pytest.approx(norm(st), abs=1e-12)


def test_atomic_occupations_order():
    sysm = small_system(N_a=5)
    psi = np.zeros(sysm.dimension, dtype=np.complex128)
    S = sysm.sites_per_channel
    psi[2 * S + 2] = 1.0  # u_3
    occ = atomic_occupations(State(sysm, psi))
    assert occ.shape == (5, 2)
    np.testing.assert_allclose(occ[2], [1.0, 0.0], atol=1e-15)
    assert occ.sum() == pytest.approx(1.0)


# ---------------- pulse detection ----------------

# a relative threshold th clips the Gaussian tails beyond
# sigma*sqrt(2 ln(1/th)); the surviving fraction is erf(sqrt(ln(1/th)))
CLIPPED_02 = math.erf(math.sqrt(math.log(1.0 / 0.02)))


def test_single_gaussian_event():
    d = gaussian_density(1000, 400.0, 40.0, mass=0.5)
    events = detect_pulses(d, threshold=0.02)
    assert len(events) == 1
    e = events[0]
    assert e.mass == pytest.approx(0.5 * CLIPPED_02, abs=2e-4)
    assert e.centroid == pytest.approx(400.0, abs=0.5)
    assert e.classification == "unknown"


def test_two_gaussians_resolved():
    d = gaussian_density(1000, 300.0, 30.0, 0.25) + gaussian_density(
        1000, 600.0, 30.0, 0.25
    )
    events = detect_pulses(d, threshold=0.02)
    assert len(events) == 2
    assert events[0].centroid < events[1].centroid  # sorted by centroid
    for e in events:
        assert e.mass == pytest.approx(0.25 * CLIPPED_02, abs=2e-4)
    assert events[1].centroid - events[0].centroid == pytest.approx(300.0, abs=1.0)


def test_width_matches_gaussian_sigma():
    d = gaussian_density(2000, 900.0, 55.0, 1.0)
    (e,) = detect_pulses(d, threshold=1e-6)
    assert e.width == pytest.approx(55.0, rel=0.01)


def test_scale_equivariance():
    d = gaussian_density(800, 200.0, 25.0, 0.3) + gaussian_density(
        800, 500.0, 35.0, 0.4
    )
    base = detect_pulses(d, threshold=0.05)
    scaled = detect_pulses(3.7 * d, threshold=0.05)
    assert len(base) == len(scaled) == 2
    for b, s in zip(base, scaled):
        assert s.mass == pytest.approx(3.7 * b.mass, rel=1e-12)
        assert s.centroid == pytest.approx(b.centroid, abs=1e-9)
        assert s.width == pytest.approx(b.width, abs=1e-9)


def test_events_disjoint_and_mass_bounded():
    rng = np.random.default_rng(11)
    d = np.zeros(600)
    for c, w, m in ((80, 12, 0.2), (250, 30, 0.35), (470, 8, 0.1)):
        d += gaussian_density(600, c, w, m)
    d += 1e-6 * rng.random(600)
    events = detect_pulses(d, threshold=0.03)
    spans = sorted((e.start, e.stop) for e in events)
    for (a0, a1), (b0, b1) in zip(spans, spans[1:]):
        assert a1 <= b0
    assert sum(e.mass for e in events) <= d.sum() + 1e-9


def test_quiet_region_empty():
    assert detect_pulses(np.full(100, 1e-10)) == []
    assert detect_pulses(np.zeros(0)) == []


def test_detect_validation():
    with pytest.raises(ValueError):
        detect_pulses(np.ones(10), threshold=0.0)
    with pytest.raises(ValueError):
        detect_pulses(np.array([0.1, -0.2, 0.3]))


def test_origin_shifts_centroids():
    d = gaussian_density(400, 100.0, 20.0, 1.0)
    (base,) = detect_pulses(d, threshold=0.02)
    (shifted,) = detect_pulses(d, threshold=0.02, origin=13)
    assert shifted.centroid == pytest.approx(base.centroid + 13, abs=1e-9)
    assert shifted.start == base.start + 13


# ---------------- classification and delay ----------------

def test_classify_right_moving():
    d = gaussian_density(1000, 300.0, 30.0, 0.25) + gaussian_density(
        1000, 700.0, 40.0, 0.25
    )
    events = classify_pulses(detect_pulses(d, 0.02), outward=1)
    assert [e.classification for e in events] == ["secondary", "primary"]
    events_left = classify_pulses(detect_pulses(d, 0.02), outward=-1)
    assert [e.classification for e in events_left] == ["primary", "secondary"]


def test_classify_validation_and_empty():
    assert classify_pulses([]) == []
    with pytest.raises(ValueError):
        classify_pulses([], outward=0)


def test_pulse_delay_from_gap():
    d = gaussian_density(1000, 300.0, 30.0, 0.25) + gaussian_density(
        1000, 600.0, 30.0, 0.25
    )
    sec, prim = classify_pulses(detect_pulses(d, 0.02), outward=1)
    assert pulse_delay(prim, sec, k0=np.pi / 2) == pytest.approx(150.0, abs=1.0)


# ---------------- in-junction velocity ----------------

def synthetic_occupations(slope, n_atoms=12, t_max=200.0, dt=1.0, amp=0.4):
    times = np.arange(0.0, t_max + dt, dt)
    occ = np.zeros((times.size, n_atoms))
    for i, t in enumerate(times):
        c = 1.0 + slope * t
        j = np.arange(1, n_atoms + 1)
        occ[i] = amp * np.exp(-((j - c) ** 2) / 2.0)
    return times, occ


def test_velocity_recovers_synthetic_slope():
    times, occ = synthetic_occupations(slope=0.04)
    fit = estimate_in_junction_velocity(times, occ)
    assert fit.slope == pytest.approx(0.04, rel=0.05)
    assert fit.residual >= 0.0


def test_velocity_zero_for_static_occupation():
    times = np.arange(0.0, 100.0, 1.0)
    occ = np.tile(
        0.3 * np.exp(-((np.arange(1, 13) - 6.0) ** 2) / 8.0), (times.size, 1)
    )
    fit = estimate_in_junction_velocity(times, occ)
    assert abs(fit.slope) <= 1e-6


def test_velocity_uses_longest_qualifying_window():
    times, occ = synthetic_occupations(slope=0.03, t_max=300.0)
    # a short spurious early window plus a long real one
    occ[:3] *= 5.0
    occ[3:80] *= 0.0
    fit = estimate_in_junction_velocity(times, occ)
    assert fit.t_start >= times[80]


def test_velocity_no_pulse_error():
    times = np.arange(0.0, 50.0, 1.0)
    occ = np.full((times.size, 12), 1e-4)
    with pytest.raises(NoPulseError):
        estimate_in_junction_velocity(times, occ)


def test_velocity_shape_mismatch():
    with pytest.raises(ValueError):
        estimate_in_junction_velocity(np.arange(5.0), np.zeros((4, 12)))
