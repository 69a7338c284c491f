"""Hot loops of the magnetic geodesic flow.

Phase states are float64 arrays ``(x, y, p_x, p_y)``.  Group generators are
passed as two complex arrays ``ga, gb`` holding the SU(1,1) entries of the
side pairings followed by their inverses.

Every kernel is plain scalar Python; :func:`magflow._accel.njit` compiles it
with numba unless ``MAGFLOW_DISABLE_NUMBA`` is set.
"""
import math

import numpy as np

from ._accel import njit

# Orientation constant shared with the exact-curve construction: the
# magnetic term rotates velocity clockwise (F_12 = +s lam^2).
ORIENTATION = -1.0


@njit
def energy(x, y, px, py):
    q = 1.0 - (x * x + y * y)
    return 0.125 * q * q * (px * px + py * py)


@njit
def rhs(x, y, px, py, s):
    q = 1.0 - (x * x + y * y)
    g = 0.25 * q * q
    half_pp = 0.5 * (px * px + py * py) * q
    return (
        g * px,
        g * py,
        half_pp * x + s * py,
        half_pp * y - s * px,
    )


@njit
def jacobian(x, y, px, py, s, out):
    """Analytic 4x4 Jacobian of :func:`rhs`, written into ``out``."""
    q = 1.0 - (x * x + y * y)
    pp = px * px + py * py
    out[0, 0] = -x * q * px
    out[0, 1] = -y * q * px
    out[0, 2] = 0.25 * q * q
    out[0, 3] = 0.0
    out[1, 0] = -x * q * py
    out[1, 1] = -y * q * py
    out[1, 2] = 0.0
    out[1, 3] = 0.25 * q * q
    out[2, 0] = 0.5 * pp * (q - 2.0 * x * x)
    out[2, 1] = -pp * x * y
    out[2, 2] = px * x * q
    out[2, 3] = py * x * q + s
    out[3, 0] = -pp * x * y
    out[3, 1] = 0.5 * pp * (q - 2.0 * y * y)
    out[3, 2] = px * y * q - s
    out[3, 3] = py * y * q


@njit
def rk4(x, y, px, py, dt, s):
    k1 = rhs(x, y, px, py, s)
    h = 0.5 * dt
    k2 = rhs(x + h * k1[0], y + h * k1[1], px + h * k1[2], py + h * k1[3], s)
    k3 = rhs(x + h * k2[0], y + h * k2[1], px + h * k2[2], py + h * k2[3], s)
    k4 = rhs(x + dt * k3[0], y + dt * k3[1], px + dt * k3[2], py + dt * k3[3], s)
    w = dt / 6.0
    return (
        x + w * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y + w * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        px + w * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        py + w * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]),
    )


@njit
def project_energy(x, y, px, py, target):
    e = energy(x, y, px, py)
    if e <= 0.0:
        return px, py
    c = math.sqrt(target / e)
    return px * c, py * c


@njit
def apply_isometry(a, b, x, y, px, py):
    """Push a phase point forward by ``z -> (a z + b) / (conj(b) z + conj(a))``.

    Momentum is a covector: ``p -> p / conj(m'(z))`` with ``m'(z) = den**-2``.
    """
    z = complex(x, y)
    p = complex(px, py)
    den = b.conjugate() * z + a.conjugate()
    zn = (a * z + b) / den
    pn = p * (den * den).conjugate()
    return zn.real, zn.imag, pn.real, pn.imag


@njit
def apply_isometry_tangent(a, b, x, y, px, py, dx, dy, dpx, dpy):
    """Tangent map of :func:`apply_isometry` applied to ``(dx, dy, dpx, dpy)``."""
    z = complex(x, y)
    p = complex(px, py)
    dz = complex(dx, dy)
    dp = complex(dpx, dpy)
    den = b.conjugate() * z + a.conjugate()
    dzn = dz / (den * den)
    # p_new = p * conj(den)^2, d(conj(den)) = conj(conj(b) dz)
    dden_c = (b.conjugate() * dz).conjugate()
    dpn = dp * (den * den).conjugate() + 2.0 * p * den.conjugate() * dden_c
    return dzn.real, dzn.imag, dpn.real, dpn.imag


@njit
def compose(a1, b1, a2, b2):
    """Entries of ``m1 o m2`` renormalized onto SU(1,1)."""
    a = a1 * a2 + b1 * b2.conjugate()
    b = a1 * b2 + b1 * a2.conjugate()
    det = abs(a) ** 2 - abs(b) ** 2
    s = math.sqrt(det)
    return a / s, b / s


@njit
def reduce_point(x, y, px, py, ga, gb, r_inner, max_iter, word):
    """Greedy Dirichlet descent towards the origin.

    Applies the generator that most decreases ``|z|`` until none does.  Ties
    go to the lowest generator index.  The applied generator indices are
    written into ``word`` (if it is long enough).  Returns the reduced state,
    the composite isometry ``(A, B)`` and the number of applied generators;
    a negative count means ``max_iter`` was exhausted.
    """
    A = complex(1.0, 0.0)
    B = complex(0.0, 0.0)
    n = 0
    ng = ga.shape[0]
    while True:
        z = complex(x, y)
        r = abs(z)
        if r < r_inner:
            return x, y, px, py, A, B, n
        best = -1
        best_r = r * (1.0 - 1e-14)
        for k in range(ng):
            a = ga[k]
            b = gb[k]
            rk = abs((a * z + b) / (b.conjugate() * z + a.conjugate()))
            if rk < best_r:
                best_r = rk
                best = k
        if best < 0:
            return x, y, px, py, A, B, n
        if n >= max_iter:
            return x, y, px, py, A, B, -1
        x, y, px, py = apply_isometry(ga[best], gb[best], x, y, px, py)
        A, B = compose(ga[best], gb[best], A, B)
        if n < word.shape[0]:
            word[n] = best
        n += 1


@njit
def integrate(y0, dt, nsteps, s, stride, project, target):
    """RK4 on the cover.  Returns ``(samples, n_valid)``.

    ``n_valid < len(samples)`` signals that the orbit reached the boundary
    shell and integration stopped.
    """
    nsamp = nsteps // stride + 1
    out = np.empty((nsamp, 4))
    x, y, px, py = y0[0], y0[1], y0[2], y0[3]
    out[0, 0] = x
    out[0, 1] = y
    out[0, 2] = px
    out[0, 3] = py
    j = 1
    for i in range(1, nsteps + 1):
        x, y, px, py = rk4(x, y, px, py, dt, s)
        if project:
            px, py = project_energy(x, y, px, py, target)
        if not (x * x + y * y < (1.0 - 1e-12) ** 2):
            return out, j
        if i % stride == 0:
            out[j, 0] = x
            out[j, 1] = y
            out[j, 2] = px
            out[j, 3] = py
            j += 1
    return out, j


@njit
def integrate_quotient(y0, dt, nsteps, s, stride, project, target, ga, gb, r_inner):
    """RK4 with a Dirichlet reduction after every step.

    Returns ``(samples, jumps)`` where ``jumps`` counts side-pairing moves.
    """
    nsamp = nsteps // stride + 1
    out = np.empty((nsamp, 4))
    word = np.empty(0, dtype=np.int64)
    x, y, px, py, A, B, n = reduce_point(y0[0], y0[1], y0[2], y0[3], ga, gb, r_inner, 10000, word)
    out[0, 0] = x
    out[0, 1] = y
    out[0, 2] = px
    out[0, 3] = py
    jumps = 0
    j = 1
    for i in range(1, nsteps + 1):
        x, y, px, py = rk4(x, y, px, py, dt, s)
        if project:
            px, py = project_energy(x, y, px, py, target)
        x, y, px, py, A, B, n = reduce_point(x, y, px, py, ga, gb, r_inner, 64, word)
        jumps += n
        if i % stride == 0:
            out[j, 0] = x
            out[j, 1] = y
            out[j, 2] = px
            out[j, 3] = py
            j += 1
    return out, jumps


@njit
def reduce_many(states, ga, gb, r_inner, max_iter, max_word):
    """Reduce each row of ``states``; returns states, (A, B), word table, counts."""
    n = states.shape[0]
    out = np.empty_like(states)
    A_out = np.empty(n, dtype=np.complex128)
    B_out = np.empty(n, dtype=np.complex128)
    words = -np.ones((n, max_word), dtype=np.int64)
    counts = np.empty(n, dtype=np.int64)
    for i in range(n):
        x, y, px, py, A, B, c = reduce_point(
            states[i, 0], states[i, 1], states[i, 2], states[i, 3],
            ga, gb, r_inner, max_iter, words[i],
        )
        out[i, 0] = x
        out[i, 1] = y
        out[i, 2] = px
        out[i, 3] = py
        A_out[i] = A
        B_out[i] = B
        counts[i] = c
    return out, A_out, B_out, words, counts


@njit
def _sasaki_at_origin(dx, dy, dpx, dpy):
    # lam(0) = 2: |dz|_g = 2|dz|, |dp|_{g*} = |dp| / 2
    return math.sqrt(4.0 * (dx * dx + dy * dy) + 0.25 * (dpx * dpx + dpy * dpy))


@njit
def lyapunov_clone(y0, d0_dir, dt, steps_per_window, n_windows, s, target, sep,
                   ga, gb, r_inner):
    """Two-trajectory (cloning) estimate of the top Lyapunov exponent.

    The base orbit runs on the quotient; the clone is carried along by the
    same reducing isometries.  After each window both are moved to the chart
    centred at the base point, where the separation is measured in the
    Sasaki norm, rescaled to ``sep`` and put back on the energy level.
    Returns the log stretch factor of each window.
    """
    logs = np.empty(n_windows)
    word = np.empty(0, dtype=np.int64)
    bx, by, bpx, bpy, A, B, n = reduce_point(y0[0], y0[1], y0[2], y0[3], ga, gb, r_inner, 10000, word)
    # seed the clone in the base-centred chart
    z0 = complex(bx, by)
    na = 1.0 / math.sqrt(1.0 - abs(z0) ** 2)
    nb = -z0 * na
    ox, oy, opx, opy = apply_isometry(complex(na, 0.0), nb, bx, by, bpx, bpy)
    nrm = _sasaki_at_origin(d0_dir[0], d0_dir[1], d0_dir[2], d0_dir[3])
    f = sep / nrm
    cx, cy = ox + f * d0_dir[0], oy + f * d0_dir[1]
    cpx, cpy = opx + f * d0_dir[2], opy + f * d0_dir[3]
    cpx, cpy = project_energy(cx, cy, cpx, cpy, target)
    cx, cy, cpx, cpy = apply_isometry(complex(na, 0.0), -nb, cx, cy, cpx, cpy)
    for w in range(n_windows):
        for i in range(steps_per_window):
            bx, by, bpx, bpy = rk4(bx, by, bpx, bpy, dt, s)
            cx, cy, cpx, cpy = rk4(cx, cy, cpx, cpy, dt, s)
            bx, by, bpx, bpy, A, B, n = reduce_point(bx, by, bpx, bpy, ga, gb, r_inner, 64, word)
            if n > 0:
                cx, cy, cpx, cpy = apply_isometry(A, B, cx, cy, cpx, cpy)
        z0 = complex(bx, by)
        na = 1.0 / math.sqrt(1.0 - abs(z0) ** 2)
        nb = -z0 * na
        ox, oy, opx, opy = apply_isometry(complex(na, 0.0), nb, bx, by, bpx, bpy)
        qx, qy, qpx, qpy = apply_isometry(complex(na, 0.0), nb, cx, cy, cpx, cpy)
        dx, dy, dpx, dpy = qx - ox, qy - oy, qpx - opx, qpy - opy
        d = _sasaki_at_origin(dx, dy, dpx, dpy)
        logs[w] = math.log(d / sep)
        f = sep / d
        cx, cy = ox + f * dx, oy + f * dy
        cpx, cpy = opx + f * dpx, opy + f * dpy
        cpx, cpy = project_energy(cx, cy, cpx, cpy, target)
        cx, cy, cpx, cpy = apply_isometry(complex(na, 0.0), -nb, cx, cy, cpx, cpy)
    return logs


@njit
def _variational_rhs(x, s, J, out):
    f = rhs(x[0], x[1], x[2], x[3], s)
    jacobian(x[0], x[1], x[2], x[3], s, J)
    for i in range(4):
        out[i] = f[i]
        out[4 + i] = J[i, 0] * x[4] + J[i, 1] * x[5] + J[i, 2] * x[6] + J[i, 3] * x[7]


@njit
def _recentre_tangent(x):
    """Move the base point of the 8-vector ``x`` to 0; returns the tangent norm."""
    z0 = complex(x[0], x[1])
    na = complex(1.0 / math.sqrt(1.0 - abs(z0) ** 2), 0.0)
    nb = -z0 * na.real
    t = apply_isometry_tangent(na, nb, x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7])
    x[0], x[1], x[2], x[3] = apply_isometry(na, nb, x[0], x[1], x[2], x[3])
    d = _sasaki_at_origin(t[0], t[1], t[2], t[3])
    for i in range(4):
        x[4 + i] = t[i] / d
    return d


@njit
def lyapunov_variational(y0, v0, dt, steps_per_window, n_windows, s):
    """Tangent-vector estimate using the analytic variational equations.

    Runs on the cover.  After each window the base point is moved back to the
    origin by a transvection, the tangent vector is pushed forward with it,
    measured in the Sasaki norm and renormalized to unit length.
    """
    logs = np.empty(n_windows)
    J = np.empty((4, 4))
    x = np.empty(8)
    k1 = np.empty(8)
    k2 = np.empty(8)
    k3 = np.empty(8)
    k4 = np.empty(8)
    tmp = np.empty(8)
    for i in range(4):
        x[i] = y0[i]
        x[4 + i] = v0[i]
    _recentre_tangent(x)
    for w in range(n_windows):
        for it in range(steps_per_window):
            _variational_rhs(x, s, J, k1)
            for i in range(8):
                tmp[i] = x[i] + 0.5 * dt * k1[i]
            _variational_rhs(tmp, s, J, k2)
            for i in range(8):
                tmp[i] = x[i] + 0.5 * dt * k2[i]
            _variational_rhs(tmp, s, J, k3)
            for i in range(8):
                tmp[i] = x[i] + dt * k3[i]
            _variational_rhs(tmp, s, J, k4)
            for i in range(8):
                x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        logs[w] = math.log(_recentre_tangent(x))
    return logs


@njit
def coverage_first_visit(y0, dt, nsteps, s, ga, gb, r_inner, lo, cell, n):
    """First time each cell of an ``n x n`` grid is visited by the reduced orbit.

    The grid spans ``[lo, lo + n * cell]`` in both coordinates; unvisited
    cells hold ``inf``.
    """
    first = np.full((n, n), np.inf)
    word = np.empty(0, dtype=np.int64)
    x, y, px, py, A, B, c = reduce_point(y0[0], y0[1], y0[2], y0[3], ga, gb, r_inner, 10000, word)
    for i in range(nsteps + 1):
        if i > 0:
            x, y, px, py = rk4(x, y, px, py, dt, s)
            x, y, px, py, A, B, c = reduce_point(x, y, px, py, ga, gb, r_inner, 64, word)
        ix = int(math.floor((x - lo) / cell))
        iy = int(math.floor((y - lo) / cell))
        if 0 <= ix < n and 0 <= iy < n:
            if first[iy, ix] == np.inf:
                first[iy, ix] = i * dt
    return first
