"""Command-line front end: ``dwelltime {eigen,fig1,fig2,verify}``.

Exit codes: 0 success, 1 configuration error, 2 numerical failure (or a
failed verification check).  Output files are written atomically, so a
failing run never leaves a partial CSV behind.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, SweepConfig, load_config
from .errors import DwellTimeError
from .operational import CONVENTIONS
from .sweeps import eigen_sweep, fig1_sweep, fig2_sweep, implied_gamma
from .verification import run_checks

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2


def fmt(x) -> str:
    """12 significant digits, scientific notation."""
    return f"{float(x):.11e}"


def render_csv(meta: list[str], columns: list[tuple[str, str]], rows) -> str:
    """``#`` header lines (metadata, then ``name [unit]`` list) and data rows."""
    out = [f"# {line}" for line in meta]
    out.append("# columns: " + ", ".join(f"{n} [{u}]" for n, u in columns))
    out.append("# " + ",".join(n for n, _ in columns))
    for row in rows:
        out.append(",".join(fmt(x) for x in row))
    return "\n".join(out) + "\n"


def _config_meta(cfg: SweepConfig, convention: str) -> list[str]:
    return [
        f"units={cfg.units} species={cfg.species} mass={fmt(cfg.mass)} kg "
        f"region_length={fmt(cfg.region_length)} m barrier_height={fmt(cfg.barrier_height)} J",
        f"hbar={fmt(cfg.hbar)} J s gamma={fmt(cfg.gamma)} 1/s convention={convention}",
    ]


def _vel_unit(cfg):
    return "natural" if cfg.units == "natural" else cfg.grid_units


def build_eigen(cfg: SweepConfig, convention: str) -> str:
    s = eigen_sweep(cfg)
    si = cfg.units == "si"
    tu = "s" if si else "natural"
    cols = [
        ("velocity", _vel_unit(cfg)),
        ("momentum", "kg m/s" if si else "natural"),
        ("t_plus", tu), ("t_minus", tu), ("average", tu), ("splitting_ratio", "1"),
    ]
    data = [s.velocity / cfg.velocity_scale, s.momentum, s.t_plus, s.t_minus,
            s.average, s.splitting_ratio]
    if si:
        cols += [("t_plus", "1/gamma"), ("t_minus", "1/gamma"), ("average", "1/gamma")]
        data += [s.t_plus * cfg.gamma, s.t_minus * cfg.gamma, s.average * cfg.gamma]
    meta = ["dwelltime eigen: on-shell dwell-time eigenvalues, sorted t_plus >= t_minus"]
    meta += _config_meta(cfg, convention)
    meta.append(f"max t_plus={fmt(np.max(s.t_plus))} {tu}")
    return render_csv(meta, cols, zip(*data))


def build_fig1(cfg: SweepConfig, convention: str) -> str:
    s = fig1_sweep(cfg, convention)
    g = cfg.gamma
    cols = [("velocity", _vel_unit(cfg)), ("exact_dwell", "s")]
    data = [s.velocity / cfg.velocity_scale, s.exact_dwell]
    for j in range(len(s.lasers)):
        cols.append((f"tau_approx_{j + 1}", "s"))
        data.append(s.tau_approx[:, j])
    cols.append(("exact_dwell", "1/gamma"))
    data.append(s.exact_dwell * g)
    for j in range(len(s.lasers)):
        n = j + 1
        cols += [
            (f"tau_approx_{n}", "1/gamma"),
            (f"absorption_{n}", "1"),
            (f"relative_error_{n}", "1"),
            (f"dwell_over_delay_{n}", "1"),
        ]
        data += [s.tau_approx[:, j] * g, s.absorption[:, j], s.relative_error[:, j],
                 s.dwell_over_delay[:, j]]
    meta = ["dwelltime fig1: exact average dwell and tau_approx per laser setting"]
    meta += _config_meta(cfg, convention)
    for j, ((d, o), vi) in enumerate(zip(cfg.lasers, s.v_imag)):
        meta.append(
            f"laser {j + 1}: delta={d:g} gamma omega={o:g} gamma V_I={fmt(vi)} J"
        )
    meta.append(
        f"peak of exact_dwell at velocity={fmt(s.peak_velocity / cfg.velocity_scale)} "
        f"{_vel_unit(cfg)}"
    )
    if convention == "barrier-is-lightshift":
        meta.append(f"gamma implied by barrier = light shift of laser 1: {fmt(implied_gamma(cfg))} 1/s")
    else:
        meta.append("exact_dwell column uses the light shift of laser 1")
    return render_csv(meta, cols, zip(*data))


def build_fig2(cfg: SweepConfig, convention: str) -> str:
    s = fig2_sweep(cfg, convention)
    g = cfg.gamma
    cols = [
        ("absorption", "1"), ("relative_error", "1"), ("dwell_over_delay", "1"),
        ("v_imag", "J"), ("delta", "gamma"), ("omega", "gamma"),
        ("tau_approx", "s"), ("tau_approx", "1/gamma"),
    ]
    data = [s.absorption, s.relative_error, s.dwell_over_delay, s.v_imag,
            s.delta_over_gamma, s.omega_over_gamma, s.tau_approx, s.tau_approx * g]
    meta = ["dwelltime fig2: estimator error versus absorption at the dwell peak"]
    meta += _config_meta(cfg, convention)
    meta.append(
        f"velocity={fmt(s.velocity / cfg.velocity_scale)} {_vel_unit(cfg)} "
        f"exact_dwell={fmt(s.exact_dwell)} s = {fmt(s.exact_dwell * g)} 1/gamma"
    )
    return render_csv(meta, cols, zip(*data))


def write_atomic(text: str, path) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out) -> None:
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        write_atomic(text, out)


BUILDERS = {"eigen": build_eigen, "fig1": build_fig1, "fig2": build_fig2}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dwelltime",
        description="Quantum dwell-time spectra and absorption-based dwell measurement.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eigen": "dwell-time eigenvalues over the velocity grid",
        "fig1": "exact average dwell and tau_approx for each laser setting",
        "fig2": "relative error and dwell/delay versus absorption at the dwell peak",
        "verify": "run the self-check suite",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--config", type=Path, help="key = value configuration file")
        p.add_argument("--out", type=Path, help="output path (default: stdout)")
        p.add_argument("--convention", choices=CONVENTIONS, default=None,
                       help="how the barrier relates to the laser light shift")
        if name == "verify":
            p.add_argument("--hbar-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config) if args.config else SweepConfig()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    convention = args.convention or cfg.convention

    if args.command == "verify":
        results = run_checks(hbar_scale=args.hbar_scale)
        text = "".join(r.line() + "\n" for r in results)
        failed = sum(not r.passed for r in results)
        text += f"{'PASS' if not failed else 'FAIL'} summary: {len(results) - failed}/{len(results)} checks passed\n"
        _emit(text, args.out)
        return EXIT_OK if not failed else EXIT_NUMERICAL

    try:
        text = BUILDERS[args.command](cfg, convention)
    except DwellTimeError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
