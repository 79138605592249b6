import numpy as np
import pytest

from lambda_junction import (
    OutOfBandError,
    PoleError,
    SystemParams,
    atomic_self_energy,
    build_system,
    solve_stationary,
    transmission_spectrum,
)


def system_with(N_a=12, g=0.5, **kw):
    # N is irrelevant to the stationary problem (semi-infinite ansatz)
    return build_system(SystemParams(N=10, N_a=N_a, g=g, **kw))


def probs(r):
    return np.array([r.T_AR, r.T_BR, r.R_AL, r.R_BL])


# ---------------- self-energy ----------------

def test_self_energy_values():
    assert atomic_self_energy(1.0, 0.0, 0.5) == pytest.approx(0.25, abs=1e-15)
    assert atomic_self_energy(0.0, 0.5, 0.5) == 0.0
    assert atomic_self_energy(0.3, 0.5, 0.5) == pytest.approx(
        0.25 * 0.3 / (0.09 - 0.25), abs=1e-15
    )


@pytest.mark.parametrize("E,omega", [(0.5, 0.5), (-0.5, 0.5), (0.0, 0.0)])
def test_self_energy_pole(E, omega):
    with pytest.raises(PoleError):
        atomic_self_energy(E, omega, 0.5)


# ---------------- single-point solves ----------------

def test_decoupled_junction_transparent():
    sysm = system_with(g=0.0)
    r = solve_stationary(-0.7, sysm, omega=0.4)
    assert r.T_AR == pytest.approx(1.0, abs=1e-12)
    assert abs(r.t_B) < 1e-12 and abs(r.r_A) < 1e-12 and abs(r.r_B) < 1e-12


@pytest.mark.parametrize("omega", [0.3, 0.5, 0.85])
@pytest.mark.parametrize("N_a", [1, 12])
@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_exact_quarter_point(omega, N_a, sign):
    r = solve_stationary(sign * omega, system_with(N_a=N_a), omega)
    np.testing.assert_allclose(probs(r), 0.25, atol=1e-10)


def test_quarter_point_continuity_across_branch():
    # the hard-wall branch at |E^2-Omega^2| < 1e-12 must join smoothly
    # onto the generic solve: approach the pole from 1e-7 away
    sysm = system_with()
    near = solve_stationary(0.5 + 1e-7, sysm, 0.5)
    at = solve_stationary(0.5, sysm, 0.5)
    assert np.abs(probs(near) - probs(at)).max() < 1e-4


def test_routing_point_values():
    sysm = system_with()
    off = solve_stationary(-0.48, sysm, omega=0.0)
    assert off.T_AR > 0.95 and off.T_BR < 0.05
    on = solve_stationary(-0.48, sysm, omega=0.85)
    assert on.T_BR > 0.95 and on.T_AR < 0.05


def test_out_of_band():
    with pytest.raises(OutOfBandError):
        solve_stationary(2.3, system_with(), 0.5)


def test_unknown_method_and_channel():
    with pytest.raises(ValueError):
        solve_stationary(0.1, system_with(), 0.5, method="magic")
    with pytest.raises(ValueError):
        solve_stationary(0.1, system_with(), 0.5, incoming="C")


# ---------------- invariants over grids ----------------

GRID = np.linspace(-1.5, 1.5, 101)


@pytest.mark.parametrize("omega", [0.0, 0.5, 0.85])
def test_unitarity(omega):
    for r in transmission_spectrum(GRID, system_with(), omega):
        assert r.unitarity_defect <= 1e-10
        assert np.all(probs(r) >= 0) and np.all(probs(r) <= 1 + 1e-12)


@pytest.mark.parametrize("omega", [0.0, 0.5, 0.85])
def test_chiral_symmetry(omega):
    res = transmission_spectrum(GRID, system_with(), omega)
    fwd = np.array([probs(r) for r in res])
    # the grid is symmetric around E=0, so reversal negates the energy
    np.testing.assert_allclose(fwd, fwd[::-1], atol=1e-10)


def test_a_b_symmetry():
    sysm = system_with()
    for E in (-0.9, -0.48, 0.2, 1.1):
        a = solve_stationary(E, sysm, 0.6, incoming="A")
        b = solve_stationary(E, sysm, 0.6, incoming="B")
        assert b.t_B == pytest.approx(a.t_A, abs=1e-12)
        assert b.t_A == pytest.approx(a.t_B, abs=1e-12)
        assert b.r_B == pytest.approx(a.r_A, abs=1e-12)
        assert b.r_A == pytest.approx(a.r_B, abs=1e-12)


@pytest.mark.parametrize("N_a", [1, 2, 3])
@pytest.mark.parametrize("omega", [0.0, 0.35, 0.8])
def test_full_solve_matches_self_energy_reduction(N_a, omega):
    sysm = system_with(N_a=N_a)
    for E in GRID:
        if abs(E * E - omega * omega) < 1e-3:
            continue  # skip the pole neighborhood, handled separately
        full = solve_stationary(float(E), sysm, omega, method="full")
        red = solve_stationary(float(E), sysm, omega, method="reduced")
        assert abs(full.t_A - red.t_A) <= 1e-10
        assert abs(full.t_B - red.t_B) <= 1e-10
        assert abs(full.r_A - red.r_A) <= 1e-10
        assert abs(full.r_B - red.r_B) <= 1e-10


def test_reduced_requires_zero_detuning():
    sysm = system_with(delta_e=0.1)
    with pytest.raises(ValueError):
        solve_stationary(0.3, sysm, 0.5, method="reduced")


def test_flat_plateau_near_quarter_points():
    sysm = system_with()
    for E in (0.48, 0.52, -0.48, -0.52):
        r = solve_stationary(E, sysm, omega=0.5)
        np.testing.assert_allclose(probs(r), 0.25, atol=0.01)


def test_spectrum_grid_order_and_errors():
    sysm = system_with()
    res = transmission_spectrum([-0.5, 0.1, 0.9], sysm, 0.3)
    assert [r.E for r in res] == [-0.5, 0.1, 0.9]
    with pytest.raises(OutOfBandError, match="2.4"):
        transmission_spectrum([0.1, 2.4], sysm, 0.3)
