"""Config-driven experiment runner: presets, data artifacts, manifest.

A dynamics experiment propagates a Gaussian packet under a control schedule
and emits CSV/binary data files; a spectrum experiment tabulates stationary
scattering over an energy grid for one or more control-field values. Every
run writes a manifest.json embedding the fully resolved config and a sha256
checksum per artifact. Identical configs produce byte-identical artifacts:
nothing here depends on wall-clock time or randomness.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .model import SystemParams, build_system
from .dynamics import (
    ControlSchedule,
    ProbeConfig,
    Trajectory,
    WavePacketSpec,
    make_gaussian_packet,
    propagate,
)
from .observables import classify_pulses, detect_pulses, pulse_delay
from .scattering import transmission_spectrum


class UnknownPresetError(ValueError):
    """Preset name not recognized."""


@dataclass(frozen=True)
class SpectrumGrid:
    """Energy grid and control-field values for a spectrum experiment."""

    omegas: tuple[float, ...] = (0.0, 0.5, 0.85)
    e_min: float = -1.8
    e_max: float = 1.8
    n_points: int = 1201


DYNAMICS_OUTPUTS = ("probabilities", "density_map", "occupation_map", "pulse_report")


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str = "dynamics"  # dynamics | spectrum
    system: SystemParams = SystemParams()
    packet: WavePacketSpec = WavePacketSpec()
    schedule: ControlSchedule = ControlSchedule.constant(0.0)
    t_end: float = 1000.0
    dt: float = 0.02
    record_interval: float = 1.0
    snapshot_interval: float = 5.0
    outputs: tuple[str, ...] = DYNAMICS_OUTPUTS
    spectrum: SpectrumGrid | None = None
    pulse_threshold: float = 0.02

    def __post_init__(self):
        if self.mode not in ("dynamics", "spectrum"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")
        if self.mode == "spectrum" and self.spectrum is None:
            raise ValueError("spectrum mode requires a spectrum grid")


_PRESET_NAMES = (
    "routing_off",
    "routing_on",
    "splitting",
    "delay_storage_12",
    "delay_storage_08",
    "spectrum",
)


def preset(name: str) -> ExperimentConfig:
    """Named reference configuration.

    routing_off/routing_on/splitting send a k0=1.3284 packet at the
    junction under Omega = 0 / 0.85 / 0.5; delay_storage_12/_08 send a
    band-center (k0=pi/2) packet under Omega = 0.12 / 0.08, where the
    junction transmits half the density promptly and re-emits the stored
    half as delayed secondary pulses. spectrum tabulates the stationary
    probabilities for all three routing/splitting field values.
    """
    routing_packet = WavePacketSpec(n0=-700, k0=1.3284, sigma=100.0, channel="A")
    center_packet = WavePacketSpec(n0=-700, k0=math.pi / 2, sigma=100.0, channel="A")
    if name == "routing_off":
        return ExperimentConfig(
            packet=routing_packet, schedule=ControlSchedule.constant(0.0),
            t_end=1000.0,
        )
    if name == "routing_on":
        return ExperimentConfig(
            packet=routing_packet, schedule=ControlSchedule.constant(0.85),
            t_end=1000.0,
        )
    if name == "splitting":
        return ExperimentConfig(
            packet=routing_packet, schedule=ControlSchedule.constant(0.5),
            t_end=1000.0,
        )
    if name == "delay_storage_12":
        return ExperimentConfig(
            packet=center_packet, schedule=ControlSchedule.constant(0.12),
            t_end=1500.0,
        )
    if name == "delay_storage_08":
        return ExperimentConfig(
            packet=center_packet, schedule=ControlSchedule.constant(0.08),
            t_end=1500.0,
        )
    if name == "spectrum":
        return ExperimentConfig(
            mode="spectrum", spectrum=SpectrumGrid(), outputs=("spectrum",),
        )
    raise UnknownPresetError(
        f"unknown preset {name!r}; valid names: {', '.join(_PRESET_NAMES)}"
    )


def config_to_dict(config: ExperimentConfig) -> dict:
    d = {
        "mode": config.mode,
        "system": {
            "N": config.system.N, "N_a": config.system.N_a, "g": config.system.g,
            "delta_e": config.system.delta_e, "delta_s": config.system.delta_s,
        },
        "packet": {
            "n0": config.packet.n0, "k0": config.packet.k0,
            "sigma": config.packet.sigma, "channel": config.packet.channel,
        },
        "schedule": {
            "values": list(config.schedule.values),
            "breakpoints": list(config.schedule.breakpoints),
        },
        "t_end": config.t_end,
        "dt": config.dt,
        "record_interval": config.record_interval,
        "snapshot_interval": config.snapshot_interval,
        "outputs": list(config.outputs),
        "pulse_threshold": config.pulse_threshold,
        "spectrum": None,
    }
    if config.spectrum is not None:
        d["spectrum"] = {
            "omegas": list(config.spectrum.omegas),
            "e_min": config.spectrum.e_min,
            "e_max": config.spectrum.e_max,
            "n_points": config.spectrum.n_points,
        }
    return d


def config_from_dict(d: dict) -> ExperimentConfig:
    spec_grid = None
    if d.get("spectrum") is not None:
        s = d["spectrum"]
        spec_grid = SpectrumGrid(
            omegas=tuple(s.get("omegas", (0.0, 0.5, 0.85))),
            e_min=s.get("e_min", -1.8), e_max=s.get("e_max", 1.8),
            n_points=s.get("n_points", 1201),
        )
    defaults = ExperimentConfig()
    sys_d = d.get("system", {})
    pk_d = d.get("packet", {})
    sch_d = d.get("schedule", {})
    return ExperimentConfig(
        mode=d.get("mode", "dynamics"),
        system=SystemParams(
            N=sys_d.get("N", 1000), N_a=sys_d.get("N_a", 12),
            g=sys_d.get("g", 0.5),
            delta_e=sys_d.get("delta_e", 0.0), delta_s=sys_d.get("delta_s", 0.0),
        ),
        packet=WavePacketSpec(
            n0=pk_d.get("n0", -700), k0=pk_d.get("k0", 1.3284),
            sigma=pk_d.get("sigma", 100.0), channel=pk_d.get("channel", "A"),
        ),
        schedule=ControlSchedule(
            values=tuple(sch_d.get("values", (0.0,))),
            breakpoints=tuple(sch_d.get("breakpoints", ())),
        ),
        t_end=d.get("t_end", defaults.t_end),
        dt=d.get("dt", defaults.dt),
        record_interval=d.get("record_interval", defaults.record_interval),
        snapshot_interval=d.get("snapshot_interval", defaults.snapshot_interval),
        outputs=tuple(d.get("outputs", DYNAMICS_OUTPUTS)),
        spectrum=spec_grid,
        pulse_threshold=d.get("pulse_threshold", 0.02),
    )


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh))


def _fmt(x: float) -> str:
    # repr of a python float is the shortest round-trip decimal
    return repr(float(x))


def _write_probabilities_csv(path: Path, traj: Trajectory):
    lines = ["t,P_AL,P_AR,P_BL,P_BR,P_C,P_Cwg,norm"]
    for i, t in enumerate(traj.times):
        lines.append(",".join([
            _fmt(t),
            _fmt(traj.P_AL[i]), _fmt(traj.P_AR[i]),
            _fmt(traj.P_BL[i]), _fmt(traj.P_BR[i]),
            _fmt(traj.P_C[i]), _fmt(traj.P_Cwg[i]),
            _fmt(traj.norms[i]),
        ]))
    path.write_text("\n".join(lines) + "\n")


def _write_density_map(bin_path: Path, sidecar_path: Path, traj: Trajectory):
    # rows are sites in region order A_L, C, A_R (alpha) then B_L, C, B_R
    # (beta); the junction waveguide sites appear once per channel
    sysm = traj.system
    data = np.concatenate([traj.alpha_density.T, traj.beta_density.T], axis=0)
    data = np.ascontiguousarray(data, dtype=np.float64)
    bin_path.write_bytes(data.tobytes())
    S = sysm.sites_per_channel
    regions = []
    for ch, base in (("A", 0), ("B", S)):
        regions.extend([
            {"region": f"{ch}_L", "first_row": base,
             "sites": [sysm.n_min, 0]},
            {"region": "C", "first_row": base + sysm.params.N,
             "sites": [1, sysm.N_a]},
            {"region": f"{ch}_R", "first_row": base + sysm.params.N + sysm.N_a,
             "sites": [sysm.N_a + 1, sysm.n_max]},
        ])
    sidecar = {
        "dtype": "float64",
        "order": "row-major",
        "rows": int(data.shape[0]),
        "cols": int(data.shape[1]),
        "row_regions": regions,
        "times": [float(t) for t in traj.snapshot_times],
    }
    sidecar_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def _write_occupation_map(bin_path: Path, sidecar_path: Path, traj: Trajectory):
    # rows organized in couples: u_1, v_1, u_2, v_2, ...
    n_rec, Na, _ = traj.occupations.shape
    data = traj.occupations.transpose(1, 2, 0).reshape(2 * Na, n_rec)
    data = np.ascontiguousarray(data, dtype=np.float64)
    bin_path.write_bytes(data.tobytes())
    sidecar = {
        "dtype": "float64",
        "order": "row-major",
        "rows": int(2 * Na),
        "cols": int(n_rec),
        "row_labels": [f"{kind}_{j}" for j in range(1, Na + 1) for kind in ("u", "v")],
        "times": [float(t) for t in traj.times],
    }
    sidecar_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def _pulse_report(traj: Trajectory, threshold: float, k0: float) -> dict:
    sysm = traj.system
    channels = {
        "A_L": (traj.alpha_density, sysm.left, sysm.n_min, -1),
        "A_R": (traj.alpha_density, sysm.right, sysm.N_a + 1, 1),
        "B_L": (traj.beta_density, sysm.left, sysm.n_min, -1),
        "B_R": (traj.beta_density, sysm.right, sysm.N_a + 1, 1),
    }
    snapshots = []
    for i, t in enumerate(traj.snapshot_times):
        per_channel = {}
        for name, (dens, sl, first_site, outward) in channels.items():
            events = detect_pulses(
                dens[i, sl], threshold=threshold, region=name, origin=first_site,
            )
            events = classify_pulses(events, outward=outward)
            delay = None
            prim = [e for e in events if e.classification == "primary"]
            sec = [e for e in events if e.classification == "secondary"]
            if prim and sec:
                big_sec = max(sec, key=lambda e: e.mass)
                delay = pulse_delay(prim[0], big_sec, k0)
            per_channel[name] = {
                "events": [
                    {
                        "region": e.region, "centroid": e.centroid, "mass": e.mass,
                        "width": e.width, "start": e.start, "stop": e.stop,
                        "classification": e.classification,
                    }
                    for e in events
                ],
                "delay": delay,
            }
        snapshots.append({"t": float(t), "channels": per_channel})
    return {"threshold": threshold, "snapshots": snapshots}


def _write_spectrum_csv(path: Path, results):
    lines = ["E,k,T_AR,T_BR,R_AL,R_BL,unitarity_defect"]
    for r in results:
        lines.append(",".join([
            _fmt(r.E), _fmt(r.k),
            _fmt(r.T_AR), _fmt(r.T_BR), _fmt(r.R_AL), _fmt(r.R_BL),
            _fmt(r.unitarity_defect),
        ]))
    path.write_text("\n".join(lines) + "\n")


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def run_experiment(config: ExperimentConfig, out_dir) -> dict[str, Path]:
    """Run the experiment and write its artifacts under out_dir.

    Returns a mapping from artifact filename to path; always includes
    manifest.json. Raises on invalid config; I/O errors carry the path.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}

    if config.mode == "dynamics":
        system = build_system(config.system)
        state0 = make_gaussian_packet(config.packet, system)
        probes = ProbeConfig(
            record_interval=config.record_interval,
            snapshot_interval=config.snapshot_interval,
        )
        traj = propagate(state0, config.schedule, config.t_end, config.dt, probes)
        if "probabilities" in config.outputs:
            p = out / "probabilities.csv"
            _write_probabilities_csv(p, traj)
            written[p.name] = p
        if "density_map" in config.outputs:
            b, s = out / "density_map.bin", out / "density_map.json"
            _write_density_map(b, s, traj)
            written[b.name] = b
            written[s.name] = s
        if "occupation_map" in config.outputs:
            b, s = out / "occupation_map.bin", out / "occupation_map.json"
            _write_occupation_map(b, s, traj)
            written[b.name] = b
            written[s.name] = s
        if "pulse_report" in config.outputs:
            p = out / "pulse_report.json"
            report = _pulse_report(traj, config.pulse_threshold, config.packet.k0)
            p.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
            written[p.name] = p
    else:
        system = build_system(config.system)
        grid = np.linspace(
            config.spectrum.e_min, config.spectrum.e_max, config.spectrum.n_points
        )
        for omega in config.spectrum.omegas:
            results = transmission_spectrum(grid, system, omega)
            p = out / f"spectrum_omega_{omega:g}.csv"
            _write_spectrum_csv(p, results)
            written[p.name] = p

    manifest = {
        "package": {"name": "lambda-junction", "version": __version__},
        "config": config_to_dict(config),
        "units": "hopping = 1 (energy), hbar = 1; time in hbar/hopping, lengths in sites",
        "artifacts": {
            name: {"sha256": _sha256(path), "bytes": path.stat().st_size}
            for name, path in sorted(written.items())
        },
    }
    mpath = out / "manifest.json"
    mpath.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    written[mpath.name] = mpath
    return written
