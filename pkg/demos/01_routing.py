"""Route a single photon between two waveguides with a classical drive.

A Gaussian packet is launched in waveguide A toward the atom chain. With
the drive off, the chain is nearly transparent and the packet stays in A.
With a strong drive on, the packet is handed over to waveguide B almost
completely. Saves 01_routing.png next to this script.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from lambda_junction import (
    ControlSchedule,
    SystemParams,
    WavePacketSpec,
    build_system,
    make_gaussian_packet,
    propagate,
)


def run(omega: float):
    system = build_system(SystemParams())
    packet = make_gaussian_packet(WavePacketSpec(), system)
    return propagate(packet, ControlSchedule.constant(omega), t_end=1000.0)


def main():
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, omega in zip(axes, (0.0, 0.85)):
        traj = run(omega)
        for name in ("P_AR", "P_BR", "P_AL", "P_BL"):
            ax.plot(traj.times, getattr(traj, name), label=name)
        ax.plot(traj.times, traj.P_C, "k:", label="P_C")
        ax.set_title(f"drive = {omega}")
        ax.set_xlabel("t (units of 1/J)")
        print(f"drive {omega}: final P_AR = {traj.P_AR[-1]:.4f}, "
              f"P_BR = {traj.P_BR[-1]:.4f}")
    axes[0].set_ylabel("probability")
    axes[1].legend(loc="center left")
    fig.tight_layout()
    out = Path(__file__).with_suffix(".png")
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
