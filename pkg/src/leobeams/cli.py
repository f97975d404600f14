"""Command-line front end.

Every run resolves its configuration (file, then --set overrides, then
dedicated flags), builds the scene, writes the requested outputs, and ends
with manifest.txt: the resolved configuration echoed as key = value lines
plus a sha256 digest comment per output file. The manifest is itself a valid
config file, so re-feeding it reproduces the run byte for byte.

Exit code 0 on success; nonzero with a single-line `error: ...` on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys

import numpy as np

from . import __version__
from .codebook import cycle_table, phase_table
from .config import (SceneConfig, apply_overrides, build_scene, format_config,
                     load_config, resolve_dt)
from .fields import write_cdf_set
from .link import rician_sample
from .simulate import (coverage_map, dominance_violations, handover_map,
                       pass_timeseries, sinr_cdf)


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="path to a key = value config file")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override one config key")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for the stochastic channel draw")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leobeams",
        description="Moving-satellite beam codebook simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codebook", help="write the beam cycle tables")
    _common(p)
    p.add_argument("--phases", action="store_true",
                   help="also write per-element precoder phases")
    p.add_argument("--channel-check", action="store_true",
                   help="also draw one seeded channel sample and record norms")

    p = sub.add_parser("map", help="write a coverage map (CSV + PPM)")
    _common(p)
    p.add_argument("--metric", choices=("snr", "sinr", "cell"), default="sinr")
    p.add_argument("--mode", choices=("hex", "dft"), default="hex")
    p.add_argument("--iter", dest="iteration", type=int, default=0)
    p.add_argument("--grid-step", type=float, default=None,
                   metavar="M", help="override grid_step_m")

    p = sub.add_parser("cdf", help="write coverage CDF curves")
    _common(p)
    p.add_argument("--modes", default="hex,dft",
                   help="comma-separated codebook modes (hex, dft)")
    p.add_argument("--iter", dest="iteration", type=int, default=0)
    p.add_argument("--grid-step", type=float, default=None,
                   metavar="M", help="override grid_step_m")

    p = sub.add_parser("timeseries", help="write one ground point's pass series")
    _common(p)
    p.add_argument("--x", type=float, required=True, help="ground x [m]")
    p.add_argument("--y", type=float, required=True, help="ground y [m]")
    p.add_argument("--mode", choices=("static", "dynamic", "dft"),
                   default="dynamic")
    p.add_argument("--duration", type=float, default=None, help="seconds")
    p.add_argument("--t-start", type=float, default=0.0, help="seconds")
    p.add_argument("--dt", type=float, default=None,
                   metavar="S", help="override dt_s")

    p = sub.add_parser("handover", help="write a handover-count map")
    _common(p)
    p.add_argument("--mode", choices=("static", "dynamic", "dft"),
                   default="dynamic")
    p.add_argument("--grid-step", type=float, default=None,
                   metavar="M", help="override handover_grid_step_m")
    return parser


def _resolve_config(args) -> SceneConfig:
    cfg = load_config(args.config) if args.config else SceneConfig()
    cfg = apply_overrides(cfg, args.overrides)
    # dedicated flags win over --set and the file; fold them into the config
    # so the manifest records the effective values
    flags = []
    if args.seed is not None:
        flags.append(f"seed={args.seed}")
    if getattr(args, "grid_step", None) is not None:
        key = ("handover_grid_step_m" if args.command == "handover"
               else "grid_step_m")
        flags.append(f"{key}={args.grid_step}")
    if getattr(args, "dt", None) is not None:
        flags.append(f"dt_s={args.dt}")
    return apply_overrides(cfg, flags)


class _Emitter:
    """Tracks written outputs and finishes with the manifest."""

    def __init__(self, out_dir: str, cfg: SceneConfig):
        self.out_dir = out_dir
        self.cfg = cfg
        self.records: list[tuple[str, str]] = []
        os.makedirs(out_dir, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def done(self, name: str) -> None:
        with open(self.path(name), "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
        self.records.append((name, digest))

    def write_manifest(self) -> None:
        with open(self.path("manifest.txt"), "w") as fh:
            fh.write(f"# leobeams {__version__} resolved configuration\n")
            fh.write(format_config(self.cfg))
            for name, digest in self.records:
                fh.write(f"# output {name} sha256={digest}\n")


def _write_rows(path, header: str, rows, fmt) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(fmt(row) + "\n")


def _run_codebook(args, cfg, scene, emit: _Emitter) -> None:
    _write_rows(emit.path("cycle.csv"),
                "iteration,beam_id,rf_chain,target_x_m,target_y_m",
                cycle_table(scene.cycle),
                lambda r: f"{r[0]},{r[1]},{r[2]},{r[3]:.3f},{r[4]:.3f}")
    emit.done("cycle.csv")
    _write_rows(emit.path("dft_grid.csv"),
                "beam_id,rf_chain,target_x_m,target_y_m",
                [(b.beam_id, b.rf_chain, b.target[0], b.target[1])
                 for b in scene.dft_beams],
                lambda r: f"{r[0]},{r[1]},{r[2]:.3f},{r[3]:.3f}")
    emit.done("dft_grid.csv")
    if args.phases:
        rows = []
        for k, beams in enumerate(scene.cycle.iterations):
            for b in beams:
                for idx, phase in phase_table(b, scene.geometry):
                    rows.append((k, b.beam_id, idx, phase))
        _write_rows(emit.path("phases.csv"),
                    "iteration,beam_id,element_index,phase_radians", rows,
                    lambda r: f"{r[0]},{r[1]},{r[2]},{r[3]:.9f}")
        emit.done("phases.csv")
    if args.channel_check:
        rng = np.random.default_rng(cfg.seed)
        sample = rician_sample((0.0, 0.0), scene.geometry, scene.h_sat,
                               scene.link, rng)
        _write_rows(emit.path("channel_check.csv"),
                    "seed,matrix_fro,los_fro,scatter_fro",
                    [(cfg.seed,
                      np.linalg.norm(sample.matrix),
                      np.linalg.norm(sample.los_part),
                      np.linalg.norm(sample.rician_part))],
                    lambda r: f"{r[0]},{r[1]:.9e},{r[2]:.9e},{r[3]:.9e}")
        emit.done("channel_check.csv")


def _run_map(args, cfg, scene, emit: _Emitter) -> None:
    fmap = coverage_map(scene, metric=args.metric, mode=args.mode,
                        iteration=args.iteration, step=cfg.grid_step_m)
    stem = f"map_{args.mode}_{args.metric}"
    fmap.to_csv(emit.path(stem + ".csv"))
    emit.done(stem + ".csv")
    fmap.to_ppm(emit.path(stem + ".ppm"))
    emit.done(stem + ".ppm")


def _run_cdf(args, cfg, scene, emit: _Emitter) -> None:
    modes = tuple(m.strip() for m in args.modes.split(",") if m.strip())
    for m in modes:
        if m not in ("hex", "dft"):
            raise ValueError(f"unknown codebook mode '{m}'")
    if not modes:
        raise ValueError("--modes needs at least one of hex, dft")
    curves = sinr_cdf(scene, modes=modes, iteration=args.iteration,
                      step=cfg.grid_step_m)
    write_cdf_set(emit.path("cdf.csv"), curves)
    emit.done("cdf.csv")


def _run_timeseries(args, cfg, scene, emit: _Emitter) -> None:
    series = pass_timeseries(scene, (args.x, args.y), mode=args.mode,
                             duration=args.duration, dt=resolve_dt(cfg, scene),
                             t_start=args.t_start)
    name = f"timeseries_{args.mode}.csv"
    series.to_csv(emit.path(name))
    emit.done(name)


def _run_handover(args, cfg, scene, emit: _Emitter) -> None:
    step = cfg.handover_grid_step_m
    dt = resolve_dt(cfg, scene)
    hmap = handover_map(scene, mode=args.mode, step=step, dt=dt)
    stem = f"handover_{args.mode}"
    hmap.to_csv(emit.path(stem + ".csv"))
    emit.done(stem + ".csv")
    hmap.to_ppm(emit.path(stem + ".ppm"))
    emit.done(stem + ".ppm")
    if args.mode == "dynamic":
        smap = handover_map(scene, mode="static", step=step, dt=dt)
        smap.to_csv(emit.path("handover_static.csv"))
        emit.done("handover_static.csv")
        smap.to_ppm(emit.path("handover_static.ppm"))
        emit.done("handover_static.ppm")
        bad = dominance_violations(hmap, smap)
        _write_rows(emit.path("dominance_violations.csv"),
                    "x_m,y_m,dynamic,static", bad,
                    lambda r: f"{r[0]:.3f},{r[1]:.3f},{int(r[2])},{int(r[3])}")
        emit.done("dominance_violations.csv")
        if len(bad):
            print(f"warning: {len(bad)} grid cells hand over more often "
                  f"dynamically than statically (see dominance_violations.csv)",
                  file=sys.stderr)


_RUNNERS = {
    "codebook": _run_codebook,
    "map": _run_map,
    "cdf": _run_cdf,
    "timeseries": _run_timeseries,
    "handover": _run_handover,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        scene = build_scene(cfg)
        emit = _Emitter(args.out, cfg)
        _RUNNERS[args.command](args, cfg, scene, emit)
        emit.write_manifest()
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
