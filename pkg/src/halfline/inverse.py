"""Recovery of potential coefficients from an eigenvalue tail.

The expansion E_n = E_{n,0} + sum_j e_j(a) E_{n,0}^(1-j/m) is linear in
the unknown e_j once the indices n are known, so a window of
eigenvalues determines e_1..e_J by complex least squares (the truncated
higher-order terms act as noise; averaging over a window suppresses
them).  Each e_k(a) is a nonconstant *linear* function of a_k and does
not depend on a_{k+1}.., so the coefficients unwind sequentially:
evaluate e_k at a_k = 0 and a_k = 1 (lower coefficients already
recovered, higher ones irrelevant) and solve the affine relation.

Recovery depth is capped at J <= (m+1)/2: the closing coefficient of
even m is entangled with the unknown number of eigenvalues near zero
and cannot be recovered this way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .asym import BoundaryCondition, En0, build_e, depth
from .combin import PotentialSpec
from .errors import IllConditionedError, NumericsError

#: design matrices above this 2-norm condition number are rejected
COND_LIMIT = 1e12
#: a two-point slope below this signals a broken e_k evaluation
SLOPE_LIMIT = 1e-12


@dataclass(frozen=True)
class InverseProblem:
    """Eigenvalue data for coefficient recovery.

    eigs is a sequence of (n, E) pairs with consecutive indices; the
    window must be longer than J + 3.
    """

    m: int
    bc: BoundaryCondition
    eigs: tuple
    J: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 3:
            raise ValueError(f"degree m must be an integer >= 3, got {self.m}")
        if not (1 <= self.J and 2 * self.J <= self.m + 1):
            raise ValueError(
                f"recovery depth must satisfy 1 <= J <= (m+1)/2, got J={self.J}"
            )
        eigs = tuple((int(n), complex(E)) for n, E in self.eigs)
        ns = [n for n, _ in eigs]
        if ns != list(range(ns[0], ns[0] + len(ns))):
            raise ValueError("eigenvalue indices must be consecutive")
        if len(eigs) < self.J + 3:
            raise ValueError(
                f"window of {len(eigs)} eigenvalues too short for J={self.J}"
            )
        object.__setattr__(self, "eigs", eigs)


def fit_e(ip: InverseProblem, weighted: bool = False) -> tuple:
    """Least-squares estimates (e_1..e_J) from the eigenvalue window.

    Fits E_n - E_{n,0} against the columns E_{n,0}^(1-j/m) for every
    structurally known order j = 1..floor((m+2)/2), then returns the
    first J coefficients.  Fitting only J columns would fold the known
    higher orders into a systematic bias of several tens of percent;
    carrying them as nuisance columns leaves only the genuinely
    unmodeled tail as noise.  The weighted variant scales rows by
    E_{n,0}^(J/m) to equalize the influence of that tail.  Returns
    (e_hat, diag) where diag carries the rms residual, per-coefficient
    standard errors and the design condition number.
    """
    m = ip.m
    n_cols = depth(m)
    ns = np.array([n for n, _ in ip.eigs])
    Es = np.array([E for _, E in ip.eigs])
    base = np.array([En0(int(n), m, ip.bc) for n in ns])
    A = np.column_stack([base ** (1.0 - j / m) for j in range(1, n_cols + 1)]).astype(
        complex
    )
    y = Es - base
    if weighted:
        w = base ** (ip.J / m)
        A = A * w[:, None]
        y = y * w
    cond = np.linalg.cond(A)
    if cond > COND_LIMIT:
        raise IllConditionedError(
            f"design matrix condition number {cond:.3e} exceeds {COND_LIMIT:.0e}; "
            "window too short or too low"
        )
    e_hat, _, _, _ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ e_hat
    dof = max(len(y) - n_cols, 1)
    rms = float(np.sqrt(np.sum(np.abs(resid) ** 2) / dof))
    cov = np.linalg.inv(A.conj().T @ A)
    sigma = rms * np.sqrt(np.abs(np.diag(cov)))
    diag = {
        "rms_residual": rms,
        "sigma": tuple(float(s) for s in sigma[: ip.J]),
        "condition": float(cond),
    }
    return tuple(complex(v) for v in e_hat[: ip.J]), diag


def recover_a(m: int, bc: BoundaryCondition, e_hat) -> tuple:
    """Sequentially invert e_hat = (e_1..e_J) into coefficients a_1..a_J.

    For k = 1..J: with a_1..a_{k-1} already fixed, e_k is affine in a_k,
    so two evaluations (a_k = 0 and a_k = 1, zeros above) give intercept
    and slope.  A vanishing slope contradicts the linearity structure
    and signals an implementation bug, never a valid input.
    """
    e_hat = tuple(complex(v) for v in e_hat)
    J = len(e_hat)
    if not (1 <= J and 2 * J <= m + 1):
        raise ValueError(f"need 1 <= J <= (m+1)/2, got J={J} for m={m}")
    a = [0j] * (m - 1)
    for k in range(1, J + 1):
        a[k - 1] = 0j
        c0 = build_e(PotentialSpec(m, tuple(a)), k)[k - 1]
        a[k - 1] = 1.0 + 0j
        c1 = build_e(PotentialSpec(m, tuple(a)), k)[k - 1]
        slope = c1 - c0
        if abs(slope) <= SLOPE_LIMIT:
            raise NumericsError(
                f"degenerate slope {slope} for coefficient {k}; e_{k} must be a "
                "nonconstant linear function of a_{k}"
            )
        a[k - 1] = (e_hat[k - 1] - c0) / slope
    return tuple(a[:J])
