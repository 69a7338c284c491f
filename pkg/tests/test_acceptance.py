"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances and runtime budgets are the published ones; nothing is loosened
here.  Run ``pytest tests/test_acceptance.py -v`` and read the
"acceptance criteria" section at the end of the report.
"""
import math
import subprocess
import sys
import time

import numpy as np

from magflow.chaos import COVERAGE_REGRESSION_TIME, coverage, lyapunov_top
from magflow.curves import (
    CurveClass, circle_orbit, euclidean_representation, hyperbolic_center, orbit_positions,
    orbit_state, period_for_energy,
)
from magflow.flow import integrate, relative_energy_drift, state_from_energy, step
from magflow.fuchsian import (
    default_group, integrate_on_quotient, project_trajectory, quotient_curvature_profile,
    reduce, reduce_state, seam_transitions,
)
from magflow.hyperbolic import (
    distance, gaussian_curvature_check, identity, mobius_compose, mobius_distance,
    mobius_inverse, random_disk_point, random_mobius,
)
from magflow.integrals import (
    conservation_report, distance_to_origin, find_centers, hamiltonian, imag_part,
    integral_energy_dependence, observed_order, phase_observable,
    poisson_bracket, real_part, spike_ratios,
)

G = default_group()
START = 0.1 + 0.05j
ANGLE = 0.3


def _check(record, n, title, conditions, detail, t0, budget):
    secs = time.perf_counter() - t0
    ok = all(conditions) and secs < budget
    record(n, title, ok, detail, secs)
    assert all(conditions), detail
    assert secs < budget, f"took {secs:.1f} s, budget {budget} s"


def test_c01_isometries_and_group(record):
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240601)
    worst_d = 0.0
    worst_g = 0.0
    for _ in range(1000):
        m = random_mobius(rng)
        z, w = random_disk_point(rng, 0.9), random_disk_point(rng, 0.9)
        d = distance(z, w)
        worst_d = max(worst_d, abs(distance(m(z), m(w)) - d) / max(1.0, d))
        a, b = random_mobius(rng), random_mobius(rng)
        scale = abs(m.a) * abs(a.a) * abs(b.a)
        assoc = mobius_distance(mobius_compose(mobius_compose(m, a), b),
                                mobius_compose(m, mobius_compose(a, b))) / scale
        inv = mobius_distance(mobius_compose(m, mobius_inverse(m)), identity())
        unit = mobius_distance(mobius_compose(identity(), m), m) / abs(m.a)
        worst_g = max(worst_g, assoc, inv, unit)
    _check(record, 1, "isometries preserve distance; group axioms",
           [worst_d < 1e-12, worst_g < 1e-12],
           f"max rel. distance error {worst_d:.1e}, max axiom residual {worst_g:.1e} (< 1e-12)",
           t0, 1.0)


def test_c02_curvature_normalization(record):
    t0 = time.perf_counter()
    xs = np.linspace(-0.63, 0.63, 20)
    err = max(abs(gaussian_curvature_check(complex(x, y)) + 1.0) for x in xs for y in xs)
    _check(record, 2, "Gaussian curvature = -1 on 20x20 grid", [err < 1e-6],
           f"max |K + 1| = {err:.1e} (< 1e-6)", t0, 1.0)


def test_c03_integrator(record):
    t0 = time.perf_counter()
    s0 = state_from_energy(0.125, START, ANGLE)
    drift_cover = relative_energy_drift(integrate(s0, 100.0, 1e-3))
    q0, _ = reduce_state(state_from_energy(2.0, START, ANGLE), G)
    drift_quot = relative_energy_drift(integrate_on_quotient(q0, 100.0, 1e-3, G)[0])
    dts = [1e-2, 5e-3, 2.5e-3]
    errs = []
    for dt in dts:
        a = integrate(s0, 10.0, dt).states[-1]
        b = integrate(s0, 10.0, dt / 10).states[-1]
        errs.append(np.linalg.norm(a - b) / np.linalg.norm(b))
    order = observed_order(dts, errs)
    _check(record, 3, "energy drift and convergence order",
           [drift_cover < 1e-8, drift_quot < 1e-8, abs(order - 4.0) <= 0.3],
           f"drift E=1/8 {drift_cover:.1e}, E=2 quotient {drift_quot:.1e} (< 1e-8); "
           f"order {order:.3f} (4 +- 0.3)", t0, 30.0)


def test_c04_curvature_law(record):
    t0 = time.perf_counter()
    worst = 0.0
    for E in (0.125, 0.5, 2.0):
        q0, _ = reduce_state(state_from_energy(E, START, ANGLE), G)
        traj, _ = integrate_on_quotient(q0, 10.0, 1e-3, G)
        k = quotient_curvature_profile(traj, G)
        worst = max(worst, float(np.max(np.abs(k - 1.0 / math.sqrt(2 * E)))))
    _check(record, 4, "k_g = 1/sqrt(2E) at E = 1/8, 1/2, 2", [worst < 1e-5],
           f"max |k_g - 1/sqrt(2E)| = {worst:.1e} (< 1e-5)", t0, 10.0)


def test_c05_integrability(record):
    t0 = time.perf_counter()
    E = 0.125
    s0 = state_from_energy(E, START, ANGLE)
    T = 10 * period_for_energy(E)
    f = real_part().on_surface(G)
    rep = conservation_report(integrate(s0, T, 1e-3), f, every=20)
    dts = [0.02, 0.01, 0.005]
    drifts = [conservation_report(integrate(s0, T, dt), f, every=10).center_drift for dt in dts]
    order = observed_order(dts, drifts)
    rng = np.random.default_rng(7)
    F = phase_observable(real_part())
    worst = 0.0
    for _ in range(100):
        st = state_from_energy(rng.uniform(0.02, 0.45), random_disk_point(rng, 0.6),
                               rng.uniform(-math.pi, math.pi))
        worst = max(worst, abs(poisson_bracket(hamiltonian, F, st)))
    _check(record, 5, "centre integral conserved (E = 1/8)",
           [rep.center_drift < 1e-7, rep.integral_drift < 1e-7,
            abs(order - 4.0) <= 0.3, worst < 1e-6],
           f"centre drift {rep.center_drift:.1e}, I_f drift {rep.integral_drift:.1e} (< 1e-7); "
           f"dt order {order:.2f}; max |{{H, I_f}}| {worst:.1e} (< 1e-6)", t0, 60.0)


def _first_return(s0, T_guess, dt=1e-3):
    traj = integrate(s0, 1.2 * T_guess, dt)
    z0, v0 = s0.position, s0.velocity
    g = ((traj.positions - z0) * np.conj(v0)).real
    idx = np.nonzero((g[:-1] < 0) & (g[1:] >= 0) & (traj.times[:-1] > 0.5 * T_guess))[0][0]
    st = traj.state(idx)
    lo, hi = 0.0, dt
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if ((step(st, mid).position - z0) * np.conj(v0)).real < 0:
            lo = mid
        else:
            hi = mid
    return traj.times[idx] + lo


def test_c06_closed_orbits(record):
    t0 = time.perf_counter()
    E = 0.125
    exact_T = 4 * math.pi / math.sqrt(3)
    s0 = state_from_energy(E, START, ANGLE)
    T = _first_return(s0, exact_T)
    rel = abs(T - exact_T) / exact_T
    orb = circle_orbit(hyperbolic_center(s0), E, 0.0)
    # phase that puts the exact orbit through the starting point
    w0 = (s0.position - orb.center) / (1 - np.conj(orb.center) * s0.position)
    orb = circle_orbit(orb.center, E, float(np.angle(w0)))
    traj = integrate(orbit_state(orb, 0.0), orb.period, 1e-3)
    gap = float(np.max(np.abs(orbit_positions(orb, traj.times) - traj.positions)))
    _check(record, 6, "first return = 4 pi / sqrt 3; exact orbit tracks numerics",
           [rel < 1e-5, gap < 1e-6, abs(orb.period - exact_T) < 1e-12],
           f"T = {T:.10f} (rel. err {rel:.1e} < 1e-5); pointwise gap {gap:.1e} (< 1e-6)",
           t0, 10.0)


def test_c07_classification(record):
    t0 = time.perf_counter()
    expected = {0.125: (0, CurveClass.HYPERBOLIC_CIRCLE), 0.5: (1, CurveClass.HOROCYCLE),
                2.0: (2, CurveClass.HYPERCYCLE)}
    conds, parts = [], []
    for E, (contacts, cls) in expected.items():
        s0 = state_from_energy(E, START, ANGLE)
        rep = euclidean_representation(s0, E)
        traj = integrate(s0, 2.0, 1e-3)
        resid = float(np.max(np.abs(np.abs(traj.positions - rep.center) - rep.radius)))
        if E == 0.5:
            resid = max(resid, rep.tangency_residual)
        conds += [rep.boundary_contacts == contacts, rep.curve_class is cls, resid < 1e-9]
        parts.append(f"E={E}: {rep.curve_class.value}/{rep.boundary_contacts} resid {resid:.0e}")
    _check(record, 7, "curve classes touch the boundary 0 / 1 / 2 times", conds, "; ".join(parts), t0, 1.0)


def test_c08_genus_two_group(record):
    t0 = time.perf_counter()
    res = G.relator_residual()
    max_steps, idem = 0, 0.0
    for th in np.linspace(0, 2 * math.pi, 360, endpoint=False):
        red = reduce(0.999 * complex(math.cos(th), math.sin(th)), G)
        max_steps = max(max_steps, red.steps)
        idem = max(idem, abs(reduce(red.representative, G).representative - red.representative))
    s0 = state_from_energy(0.5, START, ANGLE)
    cover = integrate(s0, 20.0, 1e-3)
    proj = project_trajectory(cover, G)
    z, zc = proj.positions, cover.positions
    jumps = seam_transitions(proj, G)
    seam = max(abs(distance(complex(z[i]), T(complex(z[i + 1])))
                   - distance(complex(zc[i]), complex(zc[i + 1]))) for i, T in jumps.items())
    _check(record, 8, "relator, reduction, seam continuity",
           [res < 1e-10, max_steps < 200, idem < 1e-12, seam < 1e-9, len(jumps) > 0],
           f"relator {res:.1e}; max steps at |z|=0.999: {max_steps}; idempotence {idem:.0e}; "
           f"seam error {seam:.1e} over {len(jumps)} crossings", t0, 10.0)


def test_c09_regimes(record):
    t0 = time.perf_counter()
    cal = lyapunov_top(state_from_energy(0.5, START, ANGLE), 0.5, 200.0, G, s=0.0)
    hot = lyapunov_top(state_from_energy(2.0, START, ANGLE), 2.0, 200.0, G)
    cold = lyapunov_top(state_from_energy(0.125, START, ANGLE), 0.125, 200.0, G)
    crit = coverage(state_from_energy(0.5, START, ANGLE), 0.5, COVERAGE_REGRESSION_TIME, 50, G)
    low = coverage(state_from_energy(0.125, START, ANGLE), 0.125, COVERAGE_REGRESSION_TIME, 50, G)
    _check(record, 9, "Lyapunov and coverage regimes",
           [abs(cal.lambda_ - 1) <= 0.05, hot.lambda_ - 3 * hot.stderr > 0,
            abs(cold.lambda_) < 0.01, crit.visited_fraction > 0.9, low.visited_fraction < 0.2],
           f"calibration {cal.lambda_:.4f}; E=2 {hot.lambda_:.4f} +- {hot.stderr:.1e}; "
           f"E=1/8 {cold.lambda_:+.4f}; coverage E=1/2 {crit.visited_fraction:.3f} "
           f"(0.9 at t={crit.time_to_reach(0.9):.0f}), E=1/8 {low.visited_fraction:.3f}",
           t0, 600.0)


def test_c10_noncommuting_integrals(record):
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    Fr, Fi = phase_observable(real_part()), phase_observable(imag_part())
    brackets = []
    for _ in range(10):
        st = state_from_energy(rng.uniform(0.05, 0.4), random_disk_point(rng, 0.5),
                               rng.uniform(-math.pi, math.pi))
        brackets.append(poisson_bracket(Fr, Fi, st))
    c = 0.23 - 0.17j
    search = find_centers(c.real, c.imag, real_part(), imag_part(), group=G, grid=24)
    unique = len(search.roots) == 1 and abs(search.roots[0] - c) < 1e-8
    _check(record, 10, "Re and Im integrals do not commute; isolated closed orbit",
           [min(abs(b) for b in brackets) > 1e-4, unique, search.spread < 1e-8],
           f"min |{{I_re, I_im}}| {min(abs(b) for b in brackets):.3f} (> 1e-4); "
           f"{len(search.roots)} root from {search.converged} starts, spread {search.spread:.0e}",
           t0, 60.0)


def test_c11_smooth_energy_dependence(record):
    t0 = time.perf_counter()
    E = np.linspace(0.05, 0.45, 401)   # spacing 1e-3
    worst = 0.0
    for f in (real_part(), imag_part(), distance_to_origin()):
        vals = integral_energy_dependence(lambda e: state_from_energy(e, START, ANGLE), f, E)
        worst = max(worst, float(np.max(spike_ratios(vals))))
    _check(record, 11, "I_f smooth in E on (0.05, 0.45)", [worst < 10],
           f"max second-difference / rolling median = {worst:.2f} (< 10)", t0, 30.0)


RUNNER = r"""
import contextlib, io, sys
from magflow.cli import main
sim = ["simulate", "-E", "0.5", "--total-time", "2", "--quotient", "--seed", "5"]
out = sys.argv[1]
main(sim + ["-o", out + ".csv"])
main(sim + ["--format", "json", "-o", out + ".json"])
main(["export-svg", "--trajectory", out + ".csv", "-o", out + ".svg"])
"""


def test_c12_cli_determinism(record, tmp_path):
    t0 = time.perf_counter()
    # two fresh interpreters, each running the three writers once
    for rep in (0, 1):
        subprocess.run([sys.executable, "-c", RUNNER, str(tmp_path / f"run{rep}")], check=True)
    same = {}
    for ext in ("csv", "json", "svg"):
        a = (tmp_path / f"run0.{ext}").read_bytes()
        b = (tmp_path / f"run1.{ext}").read_bytes()
        same[ext] = a == b and len(a) > 0
    _check(record, 12, "CLI byte-identical reruns", list(same.values()),
           ", ".join(f"{k} {'identical' if ok else 'DIFFER'}" for k, ok in same.items()),
           t0, 10.0)
