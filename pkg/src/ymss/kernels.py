"""Hot loops: right-hand sides and an adaptive Dormand-Prince 5(4) stepper.

The system code selects which second-order ODE is integrated as the
first-order system (u, v = u'):

    INTERIOR    y^2(1-y^2) u'' + ((d-3)y - 2y^3) u' + (d-2) u(1-u^2) = 0
    EXTERIOR    (1-x^2) u'' + (d-5) x u' - (d-2) u(1-u^2) = 0
    AUTONOMOUS  U'' + (d-4) U' + (d-2) U(1-U^2) = 0
"""
from __future__ import annotations

import numpy as np

from ._accel import maybe_njit

INTERIOR = 0
EXTERIOR = 1
AUTONOMOUS = 2

# status codes returned by dopri5
OK = 0
MAX_STEPS = 1
STEP_UNDERFLOW = 2
CAP_EXCEEDED = 3


@maybe_njit
def second_derivative(kind, d, t, u, v):
    f = (d - 2.0) * u * (1.0 - u * u)
    if kind == INTERIOR:
        # (1-t)(1+t) keeps full relative accuracy next to t = 1
        return -(((d - 3.0) * t - 2.0 * t * t * t) * v + f) / (t * t * (1.0 - t) * (1.0 + t))
    if kind == EXTERIOR:
        return (f - (d - 5.0) * t * v) / ((1.0 - t) * (1.0 + t))
    return -(d - 4.0) * v - f


@maybe_njit
def dopri5(kind, d, t0, t1, u0, v0, rtol, atol, h0, max_steps, cap):
    """Integrate from t0 to t1 (either direction). Returns (n, t, u, v, status)."""
    ts = np.empty(max_steps + 1)
    us = np.empty(max_steps + 1)
    vs = np.empty(max_steps + 1)
    ts[0], us[0], vs[0] = t0, u0, v0
    direction = 1.0 if t1 >= t0 else -1.0
    span = abs(t1 - t0)
    h = h0 if h0 > 0.0 else 1e-3 * span
    h = min(h, span)
    t, u, v = t0, u0, v0
    ku1 = v
    kv1 = second_derivative(kind, d, t, u, v)
    n = 0
    status = OK
    while direction * (t1 - t) > 0.0:
        if n >= max_steps:
            status = MAX_STEPS
            break
        remaining = abs(t1 - t)
        last = h >= remaining
        if last:
            h = remaining
        if h <= 1e-15 * max(1.0, abs(t)):
            status = STEP_UNDERFLOW
            break
        s = direction * h
        ku2 = v + s * (kv1 / 5.0)
        kv2 = second_derivative(kind, d, t + s / 5.0, u + s * (ku1 / 5.0), ku2)
        ua = u + s * (3.0 / 40.0 * ku1 + 9.0 / 40.0 * ku2)
        ku3 = v + s * (3.0 / 40.0 * kv1 + 9.0 / 40.0 * kv2)
        kv3 = second_derivative(kind, d, t + 0.3 * s, ua, ku3)
        ua = u + s * (44.0 / 45.0 * ku1 - 56.0 / 15.0 * ku2 + 32.0 / 9.0 * ku3)
        ku4 = v + s * (44.0 / 45.0 * kv1 - 56.0 / 15.0 * kv2 + 32.0 / 9.0 * kv3)
        kv4 = second_derivative(kind, d, t + 0.8 * s, ua, ku4)
        ua = u + s * (19372.0 / 6561.0 * ku1 - 25360.0 / 2187.0 * ku2
                      + 64448.0 / 6561.0 * ku3 - 212.0 / 729.0 * ku4)
        ku5 = v + s * (19372.0 / 6561.0 * kv1 - 25360.0 / 2187.0 * kv2
                       + 64448.0 / 6561.0 * kv3 - 212.0 / 729.0 * kv4)
        kv5 = second_derivative(kind, d, t + 8.0 / 9.0 * s, ua, ku5)
        ua = u + s * (9017.0 / 3168.0 * ku1 - 355.0 / 33.0 * ku2 + 46732.0 / 5247.0 * ku3
                      + 49.0 / 176.0 * ku4 - 5103.0 / 18656.0 * ku5)
        ku6 = v + s * (9017.0 / 3168.0 * kv1 - 355.0 / 33.0 * kv2 + 46732.0 / 5247.0 * kv3
                       + 49.0 / 176.0 * kv4 - 5103.0 / 18656.0 * kv5)
        t_new = t1 if last else t + s
        kv6 = second_derivative(kind, d, t + s, ua, ku6)
        u_new = u + s * (35.0 / 384.0 * ku1 + 500.0 / 1113.0 * ku3 + 125.0 / 192.0 * ku4
                         - 2187.0 / 6784.0 * ku5 + 11.0 / 84.0 * ku6)
        v_new = v + s * (35.0 / 384.0 * kv1 + 500.0 / 1113.0 * kv3 + 125.0 / 192.0 * kv4
                         - 2187.0 / 6784.0 * kv5 + 11.0 / 84.0 * kv6)
        ku7 = v_new
        kv7 = second_derivative(kind, d, t_new, u_new, v_new)
        eu = s * (71.0 / 57600.0 * ku1 - 71.0 / 16695.0 * ku3 + 71.0 / 1920.0 * ku4
                  - 17253.0 / 339200.0 * ku5 + 22.0 / 525.0 * ku6 - 1.0 / 40.0 * ku7)
        ev = s * (71.0 / 57600.0 * kv1 - 71.0 / 16695.0 * kv3 + 71.0 / 1920.0 * kv4
                  - 17253.0 / 339200.0 * kv5 + 22.0 / 525.0 * kv6 - 1.0 / 40.0 * kv7)
        sc_u = atol + rtol * max(abs(u), abs(u_new))
        sc_v = atol + rtol * max(abs(v), abs(v_new))
        err = np.sqrt(0.5 * ((eu / sc_u) ** 2 + (ev / sc_v) ** 2))
        if err <= 1.0 and np.isfinite(err):
            t, u, v = t_new, u_new, v_new
            ku1, kv1 = ku7, kv7
            n += 1
            ts[n], us[n], vs[n] = t, u, v
            if abs(u) > cap:
                status = CAP_EXCEEDED
                break
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            h = h * fac
        else:
            if not np.isfinite(err):
                h = 0.1 * h
            else:
                h = h * max(0.2, 0.9 * err ** -0.2)
    return n + 1, ts[:n + 1], us[:n + 1], vs[:n + 1], status


@maybe_njit
def batch_second_derivative(kind, d, t, u, v):
    out = np.empty(t.shape[0])
    for i in range(t.shape[0]):
        out[i] = second_derivative(kind, d, t[i], u[i], v[i])
    return out
