"""Command-line entry point: run experiments, tabulate spectra, list presets."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .dynamics import ControlSchedule
from .experiments import (
    ExperimentConfig,
    SpectrumGrid,
    load_config,
    preset,
    run_experiment,
)


def parse_omega_schedule(text: str) -> ControlSchedule:
    """Parse 't0:v0,t1:v1,...' (t0 must be 0) into a control schedule."""
    pairs = []
    for chunk in text.split(","):
        t_str, _, v_str = chunk.partition(":")
        if not _:
            raise ValueError(f"bad schedule entry {chunk!r}, expected t:value")
        pairs.append((float(t_str), float(v_str)))
    if not pairs or pairs[0][0] != 0.0:
        raise ValueError("schedule must start at t=0")
    return ControlSchedule(
        values=tuple(v for _, v in pairs),
        breakpoints=tuple(t for t, _ in pairs[1:]),
    )


def parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"bad grid {text!r}, expected lo:hi:n")
    return float(parts[0]), float(parts[1]), int(parts[2])


def _cmd_run(args) -> int:
    if args.preset:
        config = preset(args.preset)
        default_out = args.preset
    elif args.config:
        config = load_config(args.config)
        default_out = args.config.rsplit("/", 1)[-1].rsplit(".", 1)[0]
    else:
        raise ValueError("need a config file or --preset NAME")
    if args.dt is not None:
        config = replace(config, dt=args.dt)
    if args.t_end is not None:
        config = replace(config, t_end=args.t_end)
    if args.omega_schedule is not None:
        config = replace(config, schedule=parse_omega_schedule(args.omega_schedule))
    out = args.out or default_out
    written = run_experiment(config, out)
    for name in sorted(written):
        print(written[name])
    return 0


def _cmd_spectrum(args) -> int:
    lo, hi, n = parse_grid(args.grid) if args.grid else (-1.8, 1.8, 1201)
    config = ExperimentConfig(
        mode="spectrum",
        outputs=("spectrum",),
        spectrum=SpectrumGrid(omegas=(args.omega,), e_min=lo, e_max=hi, n_points=n),
    )
    written = run_experiment(config, args.out or "spectrum")
    for name in sorted(written):
        print(written[name])
    return 0


def _cmd_presets(_args) -> int:
    for name in (
        "routing_off", "routing_on", "splitting",
        "delay_storage_12", "delay_storage_08", "spectrum",
    ):
        print(name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambda-junction",
        description="Photon routing, splitting, delay, and storage in a "
        "two-waveguide junction of driven three-level atoms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a dynamics or spectrum experiment")
    run_p.add_argument("config", nargs="?", help="JSON config file")
    run_p.add_argument("--preset", help="named preset instead of a config file")
    run_p.add_argument("--out", help="output directory (default: run name)")
    run_p.add_argument("--dt", type=float, help="override time step")
    run_p.add_argument("--t-end", type=float, dest="t_end", help="override end time")
    run_p.add_argument(
        "--omega-schedule",
        help="piecewise-constant control field, 't0:v0,t1:v1,...' with t0=0",
    )
    run_p.set_defaults(func=_cmd_run)

    spec_p = sub.add_parser("spectrum", help="tabulate stationary scattering")
    spec_p.add_argument("--omega", type=float, required=True, help="control field value")
    spec_p.add_argument("--grid", help="energy grid lo:hi:n (default -1.8:1.8:1201)")
    spec_p.add_argument("--out", help="output directory (default: spectrum)")
    spec_p.set_defaults(func=_cmd_spectrum)

    pre_p = sub.add_parser("presets", help="list preset names")
    pre_p.set_defaults(func=_cmd_presets)
    return parser


def _fuse_dash_values(argv: list[str]) -> list[str]:
    # let values like -1.8:1.8:1201 follow their flag without being read
    # as an option themselves
    fused = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok in ("--grid", "--omega-schedule") and i + 1 < len(argv):
            fused.append(f"{tok}={argv[i + 1]}")
            skip = True
        else:
            fused.append(tok)
    return fused


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(_fuse_dash_values(list(argv)))
    try:
        return args.func(args)
    except Exception as exc:  # surface a clean diagnostic, not a traceback
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
