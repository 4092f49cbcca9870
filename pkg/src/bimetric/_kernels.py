"""Hot numerical kernels: lattice stepping and signal-front marching.

Each kernel exists twice: a loop form compiled with numba (the default) and
a pure-numpy/python fallback.  Set ``BIMETRIC_NUMBA=0`` in the environment
before import to force the fallback; ``benchmarks/benchmark_kernels.py``
times the two paths against each other.
"""

from __future__ import annotations

import math
import os

import numpy as np

_flag = os.environ.get("BIMETRIC_NUMBA", "1").strip().lower()
NUMBA_ENABLED = _flag not in {"0", "false", "off", "no"}
if NUMBA_ENABLED:
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False


# ---------------------------------------------------------------------------
# Scalar-field leapfrog (kick-drift-kick, second-order central differences)
# ---------------------------------------------------------------------------

def _kg_evolve_loops(phi, pi, msq, dvc, inv_dx2, c0sq, dt, kappa, periodic,
                     n_steps, amp_limit, probe_idx, probe_w, probe_cutoff,
                     probe_max):
    """Advance ``n_steps`` leapfrog steps in place.

    Returns -1 on success, else the step index at which max|phi| passed
    ``amp_limit`` (or went non-finite).  ``kappa`` is the outgoing-wave edge
    coefficient (c0*dt - dx)/(c0*dt + dx), used only when not periodic; edge
    sites then follow the one-way closure instead of the leapfrog kicks.
    ``probe_max`` accumulates the running maximum of phi interpolated at the
    probe sites while the step index is below the probe's cutoff.
    """
    n = phi.shape[0]
    nd = dvc.shape[0]
    acc = np.empty(n)

    _kg_accel_loops(phi, msq, dvc, inv_dx2, c0sq, periodic, acc)

    for s in range(n_steps):
        if periodic:
            for j in range(n):
                pi[j] += 0.5 * dt * acc[j]
            for j in range(n):
                phi[j] += dt * pi[j]
        else:
            for j in range(1, n - 1):
                pi[j] += 0.5 * dt * acc[j]
            p0 = phi[0]
            p1 = phi[1]
            pm2 = phi[n - 2]
            pm1 = phi[n - 1]
            for j in range(n):
                phi[j] += dt * pi[j]
            phi[0] = p1 + kappa * (phi[1] - p0)
            phi[n - 1] = pm2 + kappa * (phi[n - 2] - pm1)
            pi[0] = (phi[0] - p0) / dt
            pi[n - 1] = (phi[n - 1] - pm1) / dt

        _kg_accel_loops(phi, msq, dvc, inv_dx2, c0sq, periodic, acc)
        if periodic:
            for j in range(n):
                pi[j] += 0.5 * dt * acc[j]
        else:
            for j in range(1, n - 1):
                pi[j] += 0.5 * dt * acc[j]

        peak = 0.0
        for j in range(n):
            a = abs(phi[j])
            if a > peak:
                peak = a
        if (amp_limit > 0.0 and peak > amp_limit) or peak != peak:
            return s

        for p in range(probe_idx.shape[0]):
            if s < probe_cutoff[p]:
                v = ((1.0 - probe_w[p]) * phi[probe_idx[p]]
                     + probe_w[p] * phi[probe_idx[p] + 1])
                if v > probe_max[p]:
                    probe_max[p] = v
    return -1


def _accel_numpy(phi, msq, dvc, inv_dx2, c0sq, periodic, out):
    if periodic:
        lap = (np.roll(phi, 1) - 2.0 * phi + np.roll(phi, -1)) * inv_dx2
    else:
        lap = np.zeros_like(phi)
        lap[1:-1] = (phi[:-2] - 2.0 * phi[1:-1] + phi[2:]) * inv_dx2
    vp = msq * phi
    if dvc.size:
        vp = vp + np.polynomial.polynomial.polyval(phi, dvc)
    np.multiply(lap - vp, c0sq, out=out)
    if not periodic:
        # edge sites follow the one-way closure, not the leapfrog kicks
        out[0] = 0.0
        out[-1] = 0.0


def _kg_evolve_numpy(phi, pi, msq, dvc, inv_dx2, c0sq, dt, kappa, periodic,
                     n_steps, amp_limit, probe_idx, probe_w, probe_cutoff,
                     probe_max):
    """Vectorized twin of :func:`_kg_evolve_loops` (identical contract)."""
    acc = np.empty_like(phi)
    _accel_numpy(phi, msq, dvc, inv_dx2, c0sq, periodic, acc)
    for s in range(n_steps):
        if periodic:
            pi += 0.5 * dt * acc
            phi += dt * pi
        else:
            pi[1:-1] += 0.5 * dt * acc[1:-1]
            p0 = phi[0]
            p1 = phi[1]
            pm2 = phi[-2]
            pm1 = phi[-1]
            phi += dt * pi
            phi[0] = p1 + kappa * (phi[1] - p0)
            phi[-1] = pm2 + kappa * (phi[-2] - pm1)
            pi[0] = (phi[0] - p0) / dt
            pi[-1] = (phi[-1] - pm1) / dt
        _accel_numpy(phi, msq, dvc, inv_dx2, c0sq, periodic, acc)
        if periodic:
            pi += 0.5 * dt * acc
        else:
            pi[1:-1] += 0.5 * dt * acc[1:-1]

        peak = float(np.max(np.abs(phi)))
        if (amp_limit > 0.0 and peak > amp_limit) or peak != peak:
            return s

        if probe_idx.size:
            live = s < probe_cutoff
            if live.any():
                vals = ((1.0 - probe_w) * phi[probe_idx]
                        + probe_w * phi[probe_idx + 1])
                np.maximum(probe_max, np.where(live, vals, -np.inf),
                           out=probe_max)
    return -1


# ---------------------------------------------------------------------------
# Signal-front marching (adaptive-step RK4 on dx/dt = +/- c(x, t))
# ---------------------------------------------------------------------------

def _field_sample(table, times, j, w, t, hint):
    """Bilinear sample of a (snapshots x sites) table; returns (value, hint)."""
    n_snap = table.shape[0]
    if n_snap == 1:
        return (1.0 - w) * table[0, j] + w * table[0, j + 1], hint
    last = n_snap - 1
    if t <= times[0]:
        return (1.0 - w) * table[0, j] + w * table[0, j + 1], 0
    if t >= times[last]:
        return (1.0 - w) * table[last, j] + w * table[last, j + 1], last - 1
    i = hint
    if i < 0:
        i = 0
    if i > last - 1:
        i = last - 1
    while times[i + 1] < t:
        i += 1
    while times[i] > t:
        i -= 1
    f = (t - times[i]) / (times[i + 1] - times[i])
    lo = (1.0 - w) * table[i, j] + w * table[i, j + 1]
    hi = (1.0 - w) * table[i + 1, j] + w * table[i + 1, j + 1]
    return (1.0 - f) * lo + f * hi, i


def _ray_velocity(gx, pdot, times, dx, x, t, beta, c0, mode, direction, hint):
    """Signed dx/dt of a null signal at (x, t).

    mode 0: static spatial profile; mode 1: time-varying field rate;
    mode 2: full light-cone quadratic (toward-target root).  The ok flag is
    False where beta * (spatial gradient)^2 >= 1.
    """
    n_sites = gx.shape[1]
    u = x / dx
    j = int(math.floor(u))
    if j < 0:
        j = 0
    if j > n_sites - 2:
        j = n_sites - 2
    w = u - j
    if w < 0.0:
        w = 0.0
    if w > 1.0:
        w = 1.0

    if mode == 1:
        pd, hint = _field_sample(pdot, times, j, w, t, hint)
        return (direction * c0 * math.sqrt(1.0 + beta * pd * pd / (c0 * c0)),
                True, hint)

    g1, hint = _field_sample(gx, times, j, w, t, hint)
    b = beta * g1 * g1
    if b >= 1.0:
        return 0.0, False, hint
    if mode == 0:
        return direction * c0 / math.sqrt(1.0 - b), True, hint

    pd, hint = _field_sample(pdot, times, j, w, t, hint)
    g0 = pd / c0
    a = beta * g0 * g0
    q01 = beta * g0 * g1
    root = math.sqrt(1.0 + a - b)
    return c0 * (q01 + direction * root) / (1.0 - b), True, hint


def _rk4_position(gx, pdot, times, dx, x, t, h, beta, c0, mode, direction,
                  hint):
    k1, ok1, hint = _ray_velocity(gx, pdot, times, dx, x, t,
                                  beta, c0, mode, direction, hint)
    k2, ok2, hint = _ray_velocity(gx, pdot, times, dx, x + 0.5 * h * k1,
                                  t + 0.5 * h, beta, c0, mode, direction, hint)
    k3, ok3, hint = _ray_velocity(gx, pdot, times, dx, x + 0.5 * h * k2,
                                  t + 0.5 * h, beta, c0, mode, direction, hint)
    k4, ok4, hint = _ray_velocity(gx, pdot, times, dx, x + h * k3,
                                  t + h, beta, c0, mode, direction, hint)
    ok = ok1 and ok2 and ok3 and ok4
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), ok, hint


def _ray_march(gx, pdot, times, dx, x_start, x_target, t_start, beta, c0,
               mode, step_fraction, t_budget, out_t, out_x, out_c):
    """March a null signal from x_start toward x_target.

    Fills (out_t, out_x, out_c) with samples, the last one exactly at the
    target.  Returns (count, status) with status 0 = arrived, 1 = time
    budget exceeded, 2 = sample capacity exhausted, 3 = constraint violated.
    """
    direction = 1.0 if x_target >= x_start else -1.0
    cap = out_t.shape[0]
    hint = 0
    x = x_start
    t = t_start
    count = 0
    while True:
        v, ok, hint = _ray_velocity(gx, pdot, times, dx, x, t,
                                    beta, c0, mode, direction, hint)
        if not ok:
            return count, 3
        if count >= cap - 1:
            return count, 2
        out_t[count] = t
        out_x[count] = x
        out_c[count] = abs(v)
        count += 1

        speed = abs(v)
        if speed <= 0.0:
            return count, 1
        h = step_fraction * dx / speed
        if (t - t_start) + h > t_budget:
            h = t_budget - (t - t_start)
            if h <= 0.0:
                return count, 1
        x_new, ok, hint = _rk4_position(gx, pdot, times, dx, x, t, h,
                                        beta, c0, mode, direction, hint)
        if not ok:
            return count, 3
        if (x_new - x_target) * direction >= 0.0:
            lo = 0.0
            hi = h
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                x_mid, ok, hint = _rk4_position(gx, pdot, times, dx, x, t,
                                                mid, beta, c0, mode,
                                                direction, hint)
                if not ok:
                    return count, 3
                if (x_mid - x_target) * direction >= 0.0:
                    hi = mid
                else:
                    lo = mid
            t_arr = t + hi
            v_arr, ok, hint = _ray_velocity(gx, pdot, times, dx, x_target,
                                            t_arr, beta, c0, mode, direction,
                                            hint)
            out_t[count] = t_arr
            out_x[count] = x_target
            out_c[count] = abs(v_arr)
            count += 1
            return count, 0
        x = x_new
        t = t + h


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

kg_evolve_numpy = _kg_evolve_numpy
ray_march_python = _ray_march

if NUMBA_ENABLED:
    _jit = numba.njit(cache=True)
    _field_sample = _jit(_field_sample)
    _ray_velocity = _jit(_ray_velocity)
    _rk4_position = _jit(_rk4_position)
    kg_evolve_numba = _jit(_kg_evolve_loops)
    ray_march_numba = _jit(_ray_march)
    kg_evolve = kg_evolve_numba
    ray_march = ray_march_numba
else:
    kg_evolve_numba = None
    ray_march_numba = None
    kg_evolve = _kg_evolve_numpy
    ray_march = _ray_march
