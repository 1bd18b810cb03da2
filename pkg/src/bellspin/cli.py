"""Command-line front end.

Exit codes: 0 success, 1 invalid configuration, 2 parse error (pulse
program, CSV or command line), 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .core import BELL_KINDS, bell_state, deviation, deviation_fidelity, equilibrium_state
from .relax import FitDomainError, RateMatrixError, fit_initial_exponential, read_curve_csv, simulate_decay, write_curve_csv
from .seq import ProgramError, builtin_program, execute, parse
from .spectra import NyquistError, SpectralRangeError, antisymmetric_component, spectrum_of_state, write_fid_csv, write_spectrum_csv
from .tomo import prepare_ensemble, simulate_tomography, tomogram_dict

EXIT_OK, EXIT_CONFIG, EXIT_PARSE, EXIT_NUMERIC = 0, 1, 2, 3


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _write_with(writer, obj, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    os.close(fd)
    try:
        writer(obj, tmp)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _matrix_json(m: np.ndarray) -> dict:
    return {"basis": ["uu", "ud", "du", "dd"], "re": np.real(m).tolist(), "im": np.imag(m).tolist()}


def cmd_prepare(args, cfg: RunConfig) -> int:
    sys_ = cfg.spin_system()
    trace = execute(builtin_program(args.kind), sys_, equilibrium_state(sys_))
    err = cfg.rf_error()
    final = prepare_ensemble(args.kind, sys_, err) if cfg.rf_spread > 0 else trace.final
    fid = deviation_fidelity(final, bell_state(args.kind, "z"))
    out = Path(args.out)
    atomic_write(out / f"trace_{args.kind}.json", trace.to_json())
    atomic_write(out / f"deviation_{args.kind}.json", json.dumps(_matrix_json(deviation(final)), indent=1))
    report = {"kind": args.kind, "fidelity": fid, "rf_spread": cfg.rf_spread, "ensemble_size": err.ensemble_size, "seed": cfg.seed}
    atomic_write(out / f"report_{args.kind}.json", json.dumps(report, indent=1))
    print(f"{args.kind}: deviation fidelity {fid:.6f}")
    return EXIT_OK


def cmd_tomo(args, cfg: RunConfig) -> int:
    res = simulate_tomography(args.kind, cfg.spin_system(), cfg.rf_error())
    atomic_write(Path(args.out) / f"tomogram_{args.kind}.json", json.dumps(tomogram_dict(res), indent=1))
    print(f"{args.kind}: tomogram fidelity {res.fidelity:.6f}, residual {res.residual:.2e}")
    return EXIT_OK


def cmd_spectrum(args, cfg: RunConfig) -> int:
    sys_ = cfg.spin_system()
    rho = equilibrium_state(sys_)
    if args.kind != "eq":
        rho = execute(builtin_program(args.kind), sys_, rho).final
    spec = spectrum_of_state(rho, sys_, 1, cfg.points, cfg.dwell)
    ga = antisymmetric_component(spec)
    out = Path(args.out)
    _write_with(write_spectrum_csv, spec, out / f"spectrum_{args.kind}.csv")
    atomic_write(out / f"ga_{args.kind}.json", json.dumps({"kind": args.kind, "G_a": ga}, indent=1))
    print(f"{args.kind}: G_a = {ga:.6e}")
    return EXIT_OK


def cmd_relax(args, cfg: RunConfig) -> int:
    taus = np.arange(0.0, cfg.tau_max + cfg.tau_step / 2, cfg.tau_step)
    curve = simulate_decay(args.kind, cfg.rate_matrix(), cfg.spin_system(), taus, cfg.points, cfg.dwell)
    _write_with(write_curve_csv, curve, Path(args.out) / f"decay_{args.kind}.csv")
    tau, rms = fit_initial_exponential(curve, cfg.window)
    print(f"{args.kind}: {len(taus)} delays, initial tau {tau:.4f} s")
    return EXIT_OK


def cmd_fit(args, cfg: RunConfig) -> int:
    window = args.window if args.window is not None else cfg.window
    try:
        curve = read_curve_csv(args.curve_file)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read {args.curve_file}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    tau, rms = fit_initial_exponential(curve, window)
    print(f"tau_init = {tau!r} s")
    print(f"residual = {rms!r}")
    return EXIT_OK


def cmd_run(args, cfg: RunConfig) -> int:
    text = Path(args.program_file).read_text(encoding="utf-8")
    try:
        prog = parse(text)
    except ProgramError as exc:
        print(f"{args.program_file}:{exc.line}:{exc.column}: {exc.message}", file=sys.stderr)
        return EXIT_PARSE
    sys_ = cfg.spin_system()
    trace = execute(prog, sys_, equilibrium_state(sys_))
    out = Path(args.out)
    stem = Path(args.program_file).stem
    atomic_write(out / f"trace_{stem}.json", trace.to_json())
    for i, fid in enumerate(trace.acquisitions):
        _write_with(write_fid_csv, fid, out / f"fid_{stem}_{i}.csv")
    print(f"{stem}: {len(prog)} instructions, {len(trace.acquisitions)} acquisitions")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--seed", type=int, help="random seed (overrides config)")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--rf-spread", type=float, dest="rf_spread", help="relative rf amplitude spread")

    parser = argparse.ArgumentParser(prog="bellspin", description="Bell-state preparation and relaxation of a 1H-13C pair")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", parents=[common], help="run a built-in Bell-state preparation")
    p.add_argument("kind", choices=BELL_KINDS)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("tomo", parents=[common], help="simulated state tomography")
    p.add_argument("kind", choices=BELL_KINDS)
    p.set_defaults(func=cmd_tomo)

    p = sub.add_parser("spectrum", parents=[common], help="1H spectrum and G_a of a prepared state")
    p.add_argument("kind", choices=BELL_KINDS + ("eq",))
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("relax", parents=[common], help="G_a decay curve")
    p.add_argument("kind", choices=BELL_KINDS)
    p.set_defaults(func=cmd_relax)

    p = sub.add_parser("fit", parents=[common], help="initial exponential fit of a decay CSV")
    p.add_argument("curve_file")
    p.add_argument("--window", type=float, help="fit window in seconds")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("run", parents=[common], help="execute a pulse-program file")
    p.add_argument("program_file")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        overrides = {k: v for k, v in (("seed", args.seed), ("rf_spread", args.rf_spread)) if v is not None}
        cfg = replace(cfg, **overrides).validate()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args, cfg)
    except (FitDomainError, RateMatrixError, NyquistError, SpectralRangeError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
