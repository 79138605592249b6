"""Stationary transmission spectra of the driven atom chain.

Scans plane-wave energy across the band for several drive strengths and
plots the four outgoing probabilities. The chain is opaque near band
center when undriven, becomes a near-perfect cross-router under strong
drive, and pins all four ports to exactly 1/4 where the energy matches
the drive. Saves 04_spectra.png.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lambda_junction import (
    DEFAULT_GRID,
    SystemParams,
    build_system,
    transmission_spectrum,
)


def main():
    system = build_system(SystemParams())
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.6), sharey=True)
    for ax, omega in zip(axes, (0.0, 0.5, 0.85)):
        results = transmission_spectrum(DEFAULT_GRID, system, omega)
        table = np.array([[r.T_AR, r.T_BR, r.R_AL, r.R_BL] for r in results])
        for col, name in enumerate(("T_AR", "T_BR", "R_AL", "R_BL")):
            ax.plot(DEFAULT_GRID, table[:, col], label=name)
        if omega > 0:
            ax.axvline(omega, color="0.6", lw=0.8, ls=":")
            ax.axvline(-omega, color="0.6", lw=0.8, ls=":")
        defect = max(r.unitarity_defect for r in results)
        ax.set_title(f"drive = {omega} (unitarity defect {defect:.1e})")
        ax.set_xlabel("energy E")
        print(f"drive {omega}: max unitarity defect {defect:.2e}")
    axes[0].set_ylabel("probability")
    axes[-1].legend(loc="center right", fontsize=8)
    fig.tight_layout()
    out = Path(__file__).with_suffix(".png")
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
