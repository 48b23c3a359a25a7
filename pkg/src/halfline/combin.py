"""Multi-index combinatorics and the coefficient polynomials of the
square-root expansion of the potential.

For a monic degree-m potential x^m + P(x), P(x) = a_1 x^(m-1) + ... +
a_(m-1) x, the large-x expansion

    sqrt(x^m + P(x)) = x^(m/2) * (1 + sum_j b_j(a) x^(-j) + ...)

has coefficients b_j(a) = sum_k b_{j,k}(a), where

    b_{j,k}(a) = C(1/2, k) * sum_{|xi|=k, xi.eta=j} (k!/xi!) a^xi,

the sum running over multi-indices xi in Z_{>=0}^(m-1) with weight
vector eta = (1, 2, ..., m-1).  These polynomials feed every
asymptotic constant downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .specfun import gen_binomial


@dataclass(frozen=True)
class PotentialSpec:
    """Monic polynomial potential x^m + a_1 x^(m-1) + ... + a_(m-1) x.

    a must have length m-1 exactly; callers zero-pad short coefficient
    lists themselves.
    """

    m: int
    a: tuple

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 3:
            raise ValueError(f"degree m must be an integer >= 3, got {self.m}")
        a = tuple(complex(v) for v in self.a)
        if len(a) != self.m - 1:
            raise ValueError(
                f"need exactly m-1 = {self.m - 1} coefficients, got {len(a)}"
            )
        object.__setattr__(self, "a", a)

    @property
    def is_real(self) -> bool:
        return all(v.imag == 0.0 for v in self.a)


def multi_indices(m: int, k: int, j: int) -> list:
    """All xi in Z_{>=0}^(m-1) with |xi| = k and xi.eta = j.

    Equivalently: partitions of j into exactly k parts, each part at
    most m-1, encoded as part-count vectors.  Generated recursively
    over part sizes (the full lattice would explode for large m).
    Returns an empty list when infeasible (j < k or j > k(m-1)).
    """
    if m < 3 or k < 0 or j < 0:
        raise ValueError(f"need m >= 3, k >= 0, j >= 0, got ({m}, {k}, {j})")
    out: list = []
    xi = [0] * (m - 1)

    def rec(i: int, rk: int, rj: int) -> None:
        # parts of size 1..i remain to be chosen; rk parts, weight rj
        if rk == 0:
            if rj == 0:
                out.append(tuple(xi))
            return
        if rj < rk or rj > rk * i:
            return
        if i == 1:
            xi[0] = rk
            out.append(tuple(xi))
            xi[0] = 0
            return
        for c in range(min(rk, rj // i), -1, -1):
            xi[i - 1] = c
            rec(i - 1, rk - c, rj - c * i)
        xi[i - 1] = 0

    rec(m - 1, k, j)
    return out


def multinomial(k: int, xi) -> int:
    """Exact k!/xi! for a multi-index xi with |xi| = k."""
    denom = 1
    for c in xi:
        if c > 1:
            denom *= math.factorial(c)
    return math.factorial(k) // denom


def _a_power(a, xi) -> complex:
    """a^xi, skipping zero exponents so unused coefficients never
    touch the result (bit-level independence)."""
    out = 1.0 + 0j
    for av, c in zip(a, xi):
        if c:
            out *= av**c
    return out


def b_jk(p: PotentialSpec, j: int, k: int) -> complex:
    """b_{j,k}(a) = C(1/2, k) * sum_{|xi|=k, xi.eta=j} (k!/xi!) a^xi."""
    if not (1 <= k <= j and 2 * j <= p.m + 2):
        raise ValueError(
            f"b_jk needs 1 <= k <= j <= (m+2)/2, got j={j}, k={k}, m={p.m}"
        )
    s = 0j
    for xi in multi_indices(p.m, k, j):
        s += multinomial(k, xi) * _a_power(p.a, xi)
    return gen_binomial(0.5, k) * s


def b_j(p: PotentialSpec, j: int) -> complex:
    """b_j(a) = sum_{k=1}^{j} b_{j,k}(a)."""
    if not (1 <= j and 2 * j <= p.m + 2):
        raise ValueError(f"b_j needs 1 <= j <= (m+2)/2, got j={j}, m={p.m}")
    return sum(b_jk(p, j, k) for k in range(1, j + 1))


def nu(p: PotentialSpec) -> complex:
    """The logarithmic-term coefficient: 0 for odd m, b_{m/2+1}(a) for even m."""
    if p.m % 2 == 1:
        return 0j
    return b_j(p, p.m // 2 + 1)
