"""Split one photon into four equal quarters.

When the packet's carrier energy matches the drive strength (E^2 equals
Omega^2), the atom chain acts as a hard wall for the symmetric channel
while the antisymmetric channel passes freely. The outcome is a quarter
of the probability in each of the four ports. The stationary solver
shows the same point is exact for a plane wave. Saves
02_quarter_splitting.png.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lambda_junction import (
    ControlSchedule,
    SystemParams,
    WavePacketSpec,
    build_system,
    make_gaussian_packet,
    propagate,
    solve_stationary,
)


def main():
    system = build_system(SystemParams())

    # plane-wave check first: exactly 1/4 per port at E = -Omega
    r = solve_stationary(-0.48, system, 0.48)
    print("stationary at E = -0.48, drive 0.48:")
    print(f"  T_AR = {r.T_AR}  T_BR = {r.T_BR}  R_AL = {r.R_AL}  R_BL = {r.R_BL}")

    packet = make_gaussian_packet(WavePacketSpec(), system)
    traj = propagate(packet, ControlSchedule.constant(0.48), t_end=1000.0)
    print("wave packet finals:")
    for name in ("P_AL", "P_AR", "P_BL", "P_BR"):
        print(f"  {name} = {getattr(traj, name)[-1]:.4f}")

    # final snapshot: four outgoing quarter pulses
    fin = traj.final_state
    fig, ax = plt.subplots(figsize=(9, 4))
    ax.plot(system.sites, np.abs(fin.alpha) ** 2, label="waveguide A")
    ax.plot(system.sites, np.abs(fin.beta) ** 2, label="waveguide B")
    ax.axvspan(1, system.N_a, color="0.85", label="atom chain")
    ax.set_xlabel("site n")
    ax.set_ylabel("probability density")
    ax.legend()
    fig.tight_layout()
    out = Path(__file__).with_suffix(".png")
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
