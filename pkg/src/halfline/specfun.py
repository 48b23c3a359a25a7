"""Real gamma/beta helpers and branch-disciplined complex powers.

Every module in the package funnels its special-function needs through
here so the branch convention is fixed in exactly one place: principal
argument in (-pi, pi], cut along the negative real axis.
"""

from __future__ import annotations

import cmath
import math


def lngamma(x: float) -> float:
    """ln Gamma(x) for real x > 0 (relative error below 1e-13)."""
    if x <= 0.0:
        raise ValueError(f"lngamma requires x > 0, got {x}")
    return math.lgamma(x)


def beta(x: float, y: float) -> float:
    """Euler beta function B(x, y) = Gamma(x)Gamma(y)/Gamma(x+y), x, y > 0."""
    if x <= 0.0 or y <= 0.0:
        raise ValueError(f"beta requires x, y > 0, got ({x}, {y})")
    return math.exp(lngamma(x) + lngamma(y) - lngamma(x + y))


def gen_binomial(s: float, k: int) -> float:
    """Generalized binomial coefficient C(s, k) = s(s-1)...(s-k+1)/k!.

    s may be any real; k must be a nonnegative integer.  C(s, 0) = 1.
    """
    if k < 0:
        raise ValueError(f"gen_binomial requires k >= 0, got {k}")
    out = 1.0
    for i in range(k):
        out *= (s - i) / (i + 1)
    return out


def cpow(z: complex, s: float) -> complex:
    """Principal-branch complex power z**s with arg(z) in (-pi, pi].

    The cut sits on the negative real axis and negative reals take
    arg = +pi.  z = 0 is allowed only for s > 0 (giving 0).
    """
    z = complex(z)
    if z == 0:
        if s > 0:
            return 0j
        raise ValueError(f"cpow(0, s) undefined for s <= 0 (s={s})")
    if s == 1.0:
        return z
    if z.imag == 0.0:
        if z.real > 0.0:
            return complex(math.pow(z.real, s))
        # force arg = +pi on the negative real axis (cmath would give
        # -pi for a negative-zero imaginary part)
        z = complex(z.real, 0.0)
    return cmath.exp(s * cmath.log(z))
