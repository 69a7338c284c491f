"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 out-of-regime, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .errors import (BoundaryError, DomainError, InsufficientDataError, MagflowError,
                     NotFoundError, NumericalError, OutOfRegimeError)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_REGIME = 3
EXIT_NUMERIC = 4

SCHEMA_VERSION = 1
CSV_COLUMNS = ("t", "re", "im", "p_x", "p_y", "energy", "k_g")
DEFAULT_START = "0.1,0.05"
DEFAULT_ANGLE = 0.3


class UsageError(Exception):
    pass


def _point(text: str) -> complex:
    try:
        re_, im_ = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'RE,IM', got {text!r}") from None
    return complex(re_, im_)


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _positive(name: str, value: float):
    if not (value > 0 and math.isfinite(value)):
        raise UsageError(f"{name} must be positive and finite, got {value}")


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _fmt(v: float) -> str:
    return "%.17g" % v


# --- simulate ----------------------------------------------------------------

def simulate_records(E, z0, angle, total_time, dt, quotient, s=1.0, stride=1):
    """Rows ``(t, re, im, p_x, p_y, energy, k_g)`` of a simulated orbit."""
    from .flow import FieldStrength, curvature_profile, integrate, state_from_energy
    from .fuchsian import (default_group, integrate_on_quotient, quotient_curvature_profile,
                           reduce_state)

    st = state_from_energy(E, z0, angle)
    if quotient:
        group = default_group()
        st0, _ = reduce_state(st, group)
        traj, _ = integrate_on_quotient(st0, total_time, dt, group, s, stride=stride)
        kg = quotient_curvature_profile(traj, group, ends=True)
    else:
        traj = integrate(st, total_time, dt, FieldStrength(s), stride=stride)
        kg = curvature_profile(traj, ends=True)
    e = traj.energies()
    return np.column_stack([traj.times, traj.states, e, kg])


def records_csv(rows: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def records_json(rows: np.ndarray, meta: dict) -> str:
    doc = {"schema_version": SCHEMA_VERSION, **meta,
           "records": [dict(zip(CSV_COLUMNS, map(float, r))) for r in rows]}
    return json.dumps(doc, indent=1) + "\n"


def cmd_simulate(a) -> int:
    _positive("E", a.energy)
    _positive("total-time", a.total_time)
    _positive("dt", a.dt)
    if a.dt > a.total_time:
        raise UsageError("dt must not exceed total-time")
    if a.stride < 1:
        raise UsageError("stride must be >= 1")
    if (a.total_time / a.dt) / a.stride < 2:
        raise UsageError("need at least three stored samples")
    rows = simulate_records(a.energy, a.z0, a.direction, a.total_time, a.dt, a.quotient,
                            a.field, a.stride)
    if a.format == "csv":
        text = records_csv(rows)
    else:
        meta = {"E": a.energy, "dt": a.dt, "seed": a.seed, "total_time": a.total_time,
                "field": a.field, "quotient": a.quotient,
                "z0": [a.z0.real, a.z0.imag], "direction": a.direction}
        text = records_json(rows, meta)
    _emit(text, a.out)
    return EXIT_OK


# --- classify / conserve -----------------------------------------------------

def cmd_classify(a) -> int:
    from .curves import classify_by_energy, curvature_for_energy

    _positive("E", a.energy)
    k = curvature_for_energy(a.energy)
    _emit(f"{classify_by_energy(a.energy).value}, k_g = {k:.12g}\n", a.out)
    return EXIT_OK


def _conserve_one(E, z0, angle, total_time, dt, obs):
    from .fuchsian import default_group
    from .flow import integrate, state_from_energy
    from .integrals import OBSERVABLES, conservation_report

    f = OBSERVABLES[obs]().on_surface(default_group())
    traj = integrate(state_from_energy(E, z0, angle), total_time, dt)
    every = max(1, len(traj) // 400)
    return conservation_report(traj, f, every=every)


def cmd_conserve(a) -> int:
    from .curves import _require_subcritical, period_for_energy
    from .integrals import observed_order

    _positive("E", a.energy)
    _require_subcritical(a.energy)
    T = a.total_time if a.total_time is not None else a.periods * period_for_energy(a.energy)
    _positive("total-time", T)
    lines = []
    if a.dt_sweep:
        dts = sorted(a.dt_sweep, reverse=True)
        for dt in dts:
            _positive("dt", dt)
        reps = [_conserve_one(a.energy, a.z0, a.direction, T, dt, a.observable) for dt in dts]
        lines.append(f"{'dt':>12} {'centre drift':>14} {'I_f drift':>12} {'energy drift':>13}")
        for r in reps:
            lines.append(f"{r.dt:12.4e} {r.center_drift:14.6e} {r.integral_drift:12.6e} "
                         f"{r.energy_drift:13.6e}")
        errs = [r.center_drift for r in reps]
        if len(dts) >= 2 and all(e > 0 for e in errs):
            lines.append(f"observed order (centre drift): {observed_order(dts, errs):.3f}")
    else:
        _positive("dt", a.dt)
        r = _conserve_one(a.energy, a.z0, a.direction, T, a.dt, a.observable)
        lines += [f"E = {r.energy:.12g}", f"dt = {r.dt:.6g}", f"total_time = {r.total_time:.12g}",
                  f"observable = {r.observable}", f"centre drift = {r.center_drift:.6e}",
                  f"I_f drift = {r.integral_drift:.6e}", f"energy drift = {r.energy_drift:.6e}"]
    _emit("\n".join(lines) + "\n", a.out)
    return EXIT_OK


# --- diagnostics ---------------------------------------------------------------

def cmd_lyapunov(a) -> int:
    from .chaos import lyapunov_top
    from .flow import state_from_energy

    _positive("E", a.energy)
    _positive("total-time", a.total_time)
    st = state_from_energy(a.energy, a.z0, a.direction)
    est = lyapunov_top(st, a.energy, a.total_time, method=a.method, s=a.field, seed=a.seed)
    text = (f"lambda = {est.lambda_:.10g}\nstderr = {est.stderr:.6g}\n"
            f"windows = {est.n_windows}\nmethod = {est.method}\n")
    _emit(text, a.out)
    return EXIT_OK


def cmd_coverage(a) -> int:
    from .chaos import coverage
    from .flow import state_from_energy

    _positive("E", a.energy)
    _positive("total-time", a.total_time)
    if a.grid_n < 1 or a.records < 1:
        raise UsageError("grid-n and records must be positive")
    st = state_from_energy(a.energy, a.z0, a.direction)
    rep = coverage(st, a.energy, a.total_time, a.grid_n, n_records=a.records)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("t", "fraction"))
    for t, fr in rep.time_series:
        w.writerow((_fmt(t), _fmt(fr)))
    _emit(buf.getvalue(), a.out)
    return EXIT_OK


def cmd_report(a) -> int:
    from .chaos import ReportSettings, format_report, regime_report

    for E in a.energies:
        _positive("E", E)
    settings = ReportSettings(lyapunov_time=a.lyapunov_time, coverage_time=a.coverage_time,
                              grid_n=a.grid_n, seed=a.seed)
    _emit(format_report(regime_report(a.energies, settings)) + "\n", a.out)
    return EXIT_OK


# --- svg -----------------------------------------------------------------------

def _load_trajectory(path: str) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        return np.array([[r[c] for c in CSV_COLUMNS] for r in doc["records"]], dtype=float)
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise UsageError(f"{path}: not a trajectory file")
    return np.array(rows[1:], dtype=float)


def cmd_export_svg(a) -> int:
    from . import svg
    from .curves import euclidean_representation
    from .flow import PhaseState, Trajectory, state_from_energy
    from .fuchsian import default_group, seam_transitions

    curves, polylines = [], []
    if a.trajectory:
        rows = _load_trajectory(a.trajectory)
        if len(rows) < 2:
            raise UsageError("trajectory file has fewer than two samples")
        traj = Trajectory(rows[:, 0], np.ascontiguousarray(rows[:, 1:5]), float(rows[1, 0] - rows[0, 0]))
        breaks = [i + 1 for i in seam_transitions(traj, default_group())]
        polylines.append((traj.positions, breaks))
        if not a.no_orbit:
            st = PhaseState.from_array(rows[0, 1:5])
            curves.append(euclidean_representation(st))
    elif a.energy is not None:
        _positive("E", a.energy)
        curves.append(euclidean_representation(state_from_energy(a.energy, a.z0, a.direction)))
    group = None if a.no_domain else default_group()
    _emit(svg.render(group=group, curves=curves, polylines=polylines), a.out)
    return EXIT_OK


# --- parser --------------------------------------------------------------------

def _add_start(p):
    p.add_argument("--z0", type=_point, default=_point(DEFAULT_START),
                   help="initial position 'RE,IM' (default %(default)s)")
    p.add_argument("--direction", type=float, default=DEFAULT_ANGLE,
                   help="initial direction, radians in the Euclidean chart")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="magflow",
                                 description="Magnetic geodesic flow on the hyperbolic disk "
                                             "and a genus-2 surface.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate one orbit and write its samples")
    p.add_argument("--energy", "-E", type=float, required=True)
    _add_start(p)
    p.add_argument("--total-time", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--field", type=float, default=1.0)
    p.add_argument("--quotient", action="store_true", help="reduce to the genus-2 octagon")
    p.add_argument("--seed", type=int, default=0, help="recorded in JSON metadata")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("classify", help="curve class and k_g for an energy")
    p.add_argument("--energy", "-E", type=float, required=True)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("conserve", help="drift of the centre integral (E < 1/2)")
    p.add_argument("--energy", "-E", type=float, required=True)
    _add_start(p)
    p.add_argument("--total-time", type=float, default=None)
    p.add_argument("--periods", type=float, default=10.0,
                   help="run length in orbit periods when --total-time is absent")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--dt-sweep", type=_float_list, default=None,
                   help="comma-separated step sizes; prints a drift table and order")
    p.add_argument("--observable", choices=("re", "im", "dist"), default="re")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_conserve)

    p = sub.add_parser("lyapunov", help="top Lyapunov exponent on the surface")
    p.add_argument("--energy", "-E", type=float, required=True)
    _add_start(p)
    p.add_argument("--total-time", type=float, default=200.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field", type=float, default=1.0)
    p.add_argument("--method", choices=("clone", "variational"), default="clone")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_lyapunov)

    p = sub.add_parser("coverage", help="visited fraction of the octagon over time")
    p.add_argument("--energy", "-E", type=float, required=True)
    _add_start(p)
    p.add_argument("--total-time", type=float, default=400.0)
    p.add_argument("--grid-n", type=int, default=50)
    p.add_argument("--records", type=int, default=100)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("report", help="regime table over a list of energies")
    p.add_argument("energies", type=_float_list, nargs="?", default=[0.125, 0.5, 2.0])
    p.add_argument("--lyapunov-time", type=float, default=200.0)
    p.add_argument("--coverage-time", type=float, default=400.0)
    p.add_argument("--grid-n", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("export-svg", help="draw the disk, octagon and curves")
    p.add_argument("--trajectory", help="CSV or JSON written by 'simulate'")
    p.add_argument("--energy", "-E", type=float, help="draw the exact orbit through --z0")
    _add_start(p)
    p.add_argument("--no-domain", action="store_true", help="omit the octagon")
    p.add_argument("--no-orbit", action="store_true",
                   help="with --trajectory, omit the exact orbit circle")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_export_svg)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, InsufficientDataError, OSError) as exc:
        code, msg = EXIT_USAGE, str(exc)
    except OutOfRegimeError as exc:
        code, msg = EXIT_REGIME, str(exc)
    except (NumericalError, BoundaryError, NotFoundError, FloatingPointError) as exc:
        code, msg = EXIT_NUMERIC, str(exc)
    except (DomainError, MagflowError) as exc:
        code, msg = EXIT_USAGE, str(exc)
    print(f"magflow {args.command}: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
