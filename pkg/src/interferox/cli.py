"""Command-line frontend.

Subcommands: gha, bggp, afshar, bohm, measure, duality, all.  Defaults
reproduce the bench values (650 nm light, 250 um pinholes 2 mm apart,
fringe plane 4 m downstream, 3 cm lens at 4.2 m, image plane 1.38 m
behind the lens, six 100 um wires).  A flat key=value config file with
one section per scenario may override any default; command-line flags
override both.  Identical invocations yield byte-identical data files.
"""

import argparse
import configparser
import dataclasses
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import experiments as exp
from .errors import InterferoxError

_ERROR_MODULES = {
    "LosslessnessViolation": "fock_optics", "CutoffExceeded": "fock_optics",
    "GridTooNarrow": "wave_field", "NoExtrema": "wave_field",
    "ZeroFlux": "wave_field", "InvalidIntensities": "duality_analysis",
    "WrongArity": "duality_analysis", "GridMismatch": "duality_analysis",
    "OutOfRange": "duality_analysis", "NodeEncountered": "bohmian_dynamics",
    "NodeProximity": "bohmian_dynamics", "NeverSeparates": "measurement_model",
    "AmbiguousRegion": "measurement_model",
    "OrthogonalPostSelection": "measurement_model",
    "MissingData": "experiments",
}

_CONFIG_TYPES = {
    "gha": exp.GhaConfig, "bggp": exp.BggpConfig, "afshar": exp.AfsharConfig,
    "bohm": exp.BohmConfig, "measure": exp.MeasureConfig,
}


def _coerce(value: str, target_type):
    if target_type is tuple:
        return tuple(float(part) for part in value.split(",") if part.strip())
    if target_type is bool:
        return value.strip().lower() in ("1", "true", "yes", "on")
    return target_type(value)


def _load_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    with open(path) as fh:
        parser.read_file(fh)
    return {section: dict(parser.items(section))
            for section in parser.sections()}


def _build_config(name: str, file_overrides: dict, flag_overrides: dict):
    cls = _CONFIG_TYPES[name]
    base = cls()
    fields = {f.name: f for f in dataclasses.fields(cls)}
    values = {}
    for source in (file_overrides.get(name, {}), flag_overrides):
        for key, raw in source.items():
            if key not in fields or raw is None:
                continue
            if isinstance(raw, str):
                raw = _coerce(raw, type(getattr(base, key)))
            values[key] = raw
    return dataclasses.replace(base, **values)


def _out_dir(args, default_leaf: str) -> str:
    if args.out:
        return args.out
    root = os.environ.get("INTERFEROX_OUT", "runs")
    return os.path.join(root, default_leaf)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="interferox",
        description="Single-photon beam-splitter statistics, two-pinhole "
                    "grid-and-lens interference, duality metrics, pilot-wave "
                    "trajectories, and pointer-measurement models.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file with one "
                                         "section per scenario")
    common.add_argument("--out", help="output directory (fallback: "
                                      "$INTERFEROX_OUT/<scenario>)")
    common.add_argument("--seed", type=int, help="RNG seed (default 42)")
    common.add_argument("--shots", type=int,
                        help="Monte Carlo shots (default 100000; 10000 for "
                             "measure)")
    common.add_argument("--grid-points", type=int, dest="grid_points",
                        help="field samples, power of two (default 16384)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gha", parents=[common],
                       help="prism-gap tunneling splitter, single photons "
                            "(default: 10 gaps spanning 0..2 wavelengths)")
    p.add_argument("--gaps", help="comma-separated gap list in meters")

    p = sub.add_parser("bggp", parents=[common],
                       help="birefringent-crystal splitter (default "
                            "polarization angle pi/4)")
    p.add_argument("--theta", type=float, help="input polarization angle, rad")

    p = sub.add_parser("afshar", parents=[common],
                       help="two-pinhole bench: 650 nm, b=250 um, a=2 mm, "
                            "fringes at 4 m, lens at 4.2 m, image at 1.38 m")
    p.add_argument("--stage", required=True, choices=["1", "2", "3", "3a"],
                   help="1 fringe metrology, 2 open imaging, 3 wire grid + "
                        "lens with one-pinhole control, 3a photon counters")
    p.add_argument("--wire-width", type=float, dest="wire_width",
                   help="wire width in meters (default 100e-6)")

    p = sub.add_parser("bohm", parents=[common],
                       help="two-slit trajectory ensemble (default 2000 "
                            "electrons, slits 100 um apart, sigma0=10 um)")
    p.add_argument("--particles", type=int, help="ensemble size")
    p.add_argument("--steps", type=int, help="time steps")
    p.add_argument("--backend", choices=["numba", "numpy"],
                   help="kernel backend override")

    p = sub.add_parser("measure", parents=[common],
                       help="pointer-measurement models")
    p.add_argument("mode", choices=["impulsive", "weak"],
                   help="impulsive: spin-1 pointer run; weak: pre/post-"
                        "selected value, post-selection angle pi/4-0.1")

    p = sub.add_parser("duality", parents=[common],
                       help="duality report from a stored scenario manifest")
    p.add_argument("--from", dest="manifest", required=True,
                   help="path to a stage-3/3a manifest.json")

    p = sub.add_parser("all", parents=[common],
                       help="run every scenario into per-scenario subdirs")
    p.add_argument("--parallel", action="store_true",
                   help="run scenarios in separate processes")
    return parser


def _flag_overrides(args) -> dict:
    mapping = {"seed": getattr(args, "seed", None),
               "shots": getattr(args, "shots", None),
               "grid_samples": getattr(args, "grid_points", None),
               "theta": getattr(args, "theta", None),
               "wire_width": getattr(args, "wire_width", None),
               "n_particles": getattr(args, "particles", None),
               "n_steps": getattr(args, "steps", None),
               "backend": getattr(args, "backend", None)}
    if getattr(args, "gaps", None):
        mapping["gaps"] = tuple(float(g) for g in args.gaps.split(","))
    return {k: v for k, v in mapping.items() if v is not None}


def _run_named(name: str, file_overrides: dict, flag_overrides: dict,
               out_dir: str):
    if name == "gha":
        return exp.run_gha(_build_config("gha", file_overrides,
                                         flag_overrides), out_dir)
    if name == "bggp":
        return exp.run_bggp(_build_config("bggp", file_overrides,
                                          flag_overrides), out_dir)
    if name.startswith("afshar"):
        stage = name.removeprefix("afshar")
        cfg = _build_config("afshar", file_overrides, flag_overrides)
        return exp.run_afshar(stage, cfg, out_dir)
    if name == "bohm":
        return exp.run_bohm(_build_config("bohm", file_overrides,
                                          flag_overrides), out_dir)
    if name == "measure_impulsive":
        return exp.run_measure_impulsive(
            _build_config("measure", file_overrides, flag_overrides), out_dir)
    if name == "measure_weak":
        return exp.run_measure_weak(
            _build_config("measure", file_overrides, flag_overrides), out_dir)
    raise ValueError(f"unknown scenario {name!r}")


_ALL_SCENARIOS = ("gha", "bggp", "afshar1", "afshar2", "afshar3", "afshar3a",
                  "bohm", "measure_impulsive", "measure_weak")


def _print_summary(result):
    print(f"[{result.scenario}] wrote {len(result.files)} files")
    for key, val in result.metrics.items():
        if isinstance(val, (int, float, bool, str)):
            print(f"  {key} = {val}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    file_overrides = _load_config_file(args.config) if args.config else {}
    flags = _flag_overrides(args)
    try:
        if args.command == "duality":
            with open(args.manifest) as fh:
                manifest = json.load(fh)
            report = exp.duality_summary(manifest)
            out = _out_dir(args, "duality")
            os.makedirs(out, exist_ok=True)
            path = os.path.join(out, "duality.json")
            exp.write_json(path, report.to_json())
            print(f"[duality] wrote {path}")
            for key, val in report.to_json().items():
                print(f"  {key} = {val}")
            return 0
        if args.command == "all":
            root = args.out or os.environ.get("INTERFEROX_OUT", "runs")
            results = []
            if args.parallel:
                with ProcessPoolExecutor() as pool:
                    futures = [
                        pool.submit(_run_named, name, file_overrides, flags,
                                    os.path.join(root, name))
                        for name in _ALL_SCENARIOS]
                    results = [f.result() for f in futures]
            else:
                for name in _ALL_SCENARIOS:
                    results.append(_run_named(name, file_overrides, flags,
                                              os.path.join(root, name)))
            for result in results:
                _print_summary(result)
            return 0
        if args.command == "measure":
            name = f"measure_{args.mode}"
        elif args.command == "afshar":
            name = f"afshar{args.stage}"
        else:
            name = args.command
        leaf = name if args.command != "afshar" else f"afshar{args.stage}"
        result = _run_named(name, file_overrides, flags, _out_dir(args, leaf))
        _print_summary(result)
        return 0
    except InterferoxError as exc:
        module = _ERROR_MODULES.get(type(exc).__name__, "interferox")
        print(f"error: {module} precondition violated "
              f"({type(exc).__name__}): {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
