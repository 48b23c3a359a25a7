"""Adaptive Dormand-Prince 5(4) integrator for u'' = Q(x) u with a
complex polynomial Q, compiled with numba.

This is the single hot loop of the package: a shooting run from the
anchor radius down to the origin accumulates thousands of e-folds of
exponential growth, so the stepper renormalizes the state whenever it
exceeds a magnitude threshold and tracks the removed factor as a log
scale (only the projective point (u : u') matters to callers).

The error norm weighs the u-component by sqrt(|Q|) + 1 so that u and
u' are compared in the same units.
"""

import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


# status codes returned by the stepper
OK = 0
STEP_UNDERFLOW = 1
MAX_STEPS = 2

RENORM_THRESHOLD = 1e100
_LOG_RENORM = math.log(RENORM_THRESHOLD)


@njit(cache=True, nogil=True)
def _polyval(coeffs, x):
    q = coeffs[0]
    for i in range(1, coeffs.shape[0]):
        q = q * x + coeffs[i]
    return q


@njit(cache=True, nogil=True)
def dp54_linear2(coeffs, x0, x1, u0, du0, rtol, atol, max_steps):
    """Integrate (u, u')' = (u', Q(x) u) from x0 to x1.

    coeffs: Q polynomial coefficients, descending powers, complex128.
    Returns (u, du, log_scale, status, n_steps); the true solution at
    x1 is (u, du) * exp(log_scale).
    """
    direction = 1.0 if x1 >= x0 else -1.0
    x = x0
    u = u0
    v = du0
    log_scale = 0.0

    w0 = math.sqrt(abs(_polyval(coeffs, x0))) + 1.0
    h = direction * min(abs(x1 - x0), 0.1 / w0)
    if h == 0.0:
        return u, v, log_scale, OK, 0

    # first stage (FSAL across accepted steps)
    k1u = v
    k1v = _polyval(coeffs, x) * u

    n_steps = 0
    while direction * (x1 - x) > 0.0:
        if direction * (x + h - x1) > 0.0:
            h = x1 - x
        if abs(h) < 1e-15 * (1.0 + abs(x)):
            return u, v, log_scale, STEP_UNDERFLOW, n_steps
        if n_steps >= max_steps:
            return u, v, log_scale, MAX_STEPS, n_steps

        yu = u + h * (0.2 * k1u)
        yv = v + h * (0.2 * k1v)
        k2u = yv
        k2v = _polyval(coeffs, x + 0.2 * h) * yu

        yu = u + h * (3.0 / 40.0 * k1u + 9.0 / 40.0 * k2u)
        yv = v + h * (3.0 / 40.0 * k1v + 9.0 / 40.0 * k2v)
        k3u = yv
        k3v = _polyval(coeffs, x + 0.3 * h) * yu

        yu = u + h * (44.0 / 45.0 * k1u - 56.0 / 15.0 * k2u + 32.0 / 9.0 * k3u)
        yv = v + h * (44.0 / 45.0 * k1v - 56.0 / 15.0 * k2v + 32.0 / 9.0 * k3v)
        k4u = yv
        k4v = _polyval(coeffs, x + 0.8 * h) * yu

        yu = u + h * (
            19372.0 / 6561.0 * k1u
            - 25360.0 / 2187.0 * k2u
            + 64448.0 / 6561.0 * k3u
            - 212.0 / 729.0 * k4u
        )
        yv = v + h * (
            19372.0 / 6561.0 * k1v
            - 25360.0 / 2187.0 * k2v
            + 64448.0 / 6561.0 * k3v
            - 212.0 / 729.0 * k4v
        )
        k5u = yv
        k5v = _polyval(coeffs, x + 8.0 / 9.0 * h) * yu

        yu = u + h * (
            9017.0 / 3168.0 * k1u
            - 355.0 / 33.0 * k2u
            + 46732.0 / 5247.0 * k3u
            + 49.0 / 176.0 * k4u
            - 5103.0 / 18656.0 * k5u
        )
        yv = v + h * (
            9017.0 / 3168.0 * k1v
            - 355.0 / 33.0 * k2v
            + 46732.0 / 5247.0 * k3v
            + 49.0 / 176.0 * k4v
            - 5103.0 / 18656.0 * k5v
        )
        k6u = yv
        k6v = _polyval(coeffs, x + h) * yu

        # 5th order solution (b-row; b2 = b7 = 0)
        un = u + h * (
            35.0 / 384.0 * k1u
            + 500.0 / 1113.0 * k3u
            + 125.0 / 192.0 * k4u
            - 2187.0 / 6784.0 * k5u
            + 11.0 / 84.0 * k6u
        )
        vn = v + h * (
            35.0 / 384.0 * k1v
            + 500.0 / 1113.0 * k3v
            + 125.0 / 192.0 * k4v
            - 2187.0 / 6784.0 * k5v
            + 11.0 / 84.0 * k6v
        )

        qn = _polyval(coeffs, x + h)
        k7u = vn
        k7v = qn * un

        # embedded 4th-order error: h * sum (b_i - bhat_i) k_i
        eu = h * (
            (35.0 / 384.0 - 5179.0 / 57600.0) * k1u
            + (500.0 / 1113.0 - 7571.0 / 16695.0) * k3u
            + (125.0 / 192.0 - 393.0 / 640.0) * k4u
            + (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k5u
            + (11.0 / 84.0 - 187.0 / 2100.0) * k6u
            - 1.0 / 40.0 * k7u
        )
        ev = h * (
            (35.0 / 384.0 - 5179.0 / 57600.0) * k1v
            + (500.0 / 1113.0 - 7571.0 / 16695.0) * k3v
            + (125.0 / 192.0 - 393.0 / 640.0) * k4v
            + (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k5v
            + (11.0 / 84.0 - 187.0 / 2100.0) * k6v
            - 1.0 / 40.0 * k7v
        )

        wgt = math.sqrt(abs(qn)) + 1.0
        big = max(max(abs(u) * wgt, abs(v)), max(abs(un) * wgt, abs(vn)))
        den = rtol * big + atol
        err = max(abs(eu) * wgt, abs(ev)) / den

        n_steps += 1
        if err <= 1.0:
            x = x + h
            u = un
            v = vn
            k1u = k7u
            k1v = k7v
            s = max(abs(u), abs(v))
            if s > RENORM_THRESHOLD:
                u /= s
                v /= s
                k1u /= s
                k1v /= s
                log_scale += math.log(s)
            if err == 0.0:
                fac = 5.0
            else:
                fac = min(5.0, max(0.2, 0.9 * err ** (-0.2)))
        else:
            fac = max(0.2, 0.9 * err ** (-0.2))
        h = h * fac

    return u, v, log_scale, OK, n_steps


def warmup() -> None:
    """Trigger JIT compilation on a tiny problem (idempotent)."""
    coeffs = np.array([1.0 + 0j, 0j, -1.0 + 0j])
    dp54_linear2(coeffs, 2.0, 0.0, 1.0 + 0j, -2.0 + 0j, 1e-10, 1e-250, 100000)
