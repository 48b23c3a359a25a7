"""Independent numerical eigenvalue solver for
-u'' + (x^m + P(x)) u = E u on [0, inf) with alpha*u(0) + beta*u'(0) = 0.

Strategy: the positive real axis lies inside the Stokes sector where the
physical solution decays, so integrating the rewritten equation
u'' = (x^m + P(x) - E) u *inward* from a large anchor radius R is
stable -- anchor errors ride the solution that decays toward the
origin and are suppressed by thousands of e-folds.  The anchor data is
the first-order Liouville-Green logarithmic derivative

    u(R) = 1,   u'(R)/u(R) = -sqrt(Q(R)) - Q'(R)/(4 Q(R)),

i.e. the log-derivative of Q^(-1/4) exp(-int sqrt(Q)).  Eigenvalues are
the complex zeros of W(E) = alpha*u_E(0) + beta*u_E'(0), found by
Newton iteration with a central finite-difference derivative, seeded
from the asymptotic expansion and indexed by rounding the counting
relation (absolute indexing from the origin is unreliable because the
number of eigenvalues near zero is not known a priori).
"""

from __future__ import annotations

import cmath
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from . import _rk
from .asym import AsymptoticModel, BoundaryCondition, build_model, counting_residual, eval_asym_E
from .combin import PotentialSpec
from .errors import (
    ConvergenceError,
    CoverageWarning,
    IndexCollisionError,
    QuadratureError,
)

#: at the anchor, R^m must dominate the remaining terms of Q by this factor
DOMINANCE_FACTOR = 10.0
_MAX_STEPS = 20_000_000


@dataclass(frozen=True)
class ShootingProblem:
    p: PotentialSpec
    bc: BoundaryCondition


@dataclass(frozen=True)
class ShootingConfig:
    """Solver knobs.

    R = None lets the solver pick the anchor radius per eigenvalue:
    the smallest R with R >= 3 |lambda|^(1/m) and
    R^m >= DOMINANCE_FACTOR * (|lambda| + sum |a_j| R^(m-j)).
    fd_step and newton_tol are relative: the actual finite-difference
    step is fd_step*(1+|E|) and convergence requires a Newton step
    below newton_tol*(1+|E|).
    """

    R: float | None = None
    ode_rel_tol: float = 1e-12
    ode_abs_tol: float = 1e-250
    newton_tol: float = 1e-10
    max_newton_iter: int = 40
    fd_step: float = 1e-5


@dataclass(frozen=True)
class EigenvalueRecord:
    """One accepted eigenvalue.

    residual is the relative Newton defect |step|/(1+|E|) at acceptance
    (the scale-free stand-in for |W(E)|, whose raw magnitude is only
    defined up to the solver's renormalization); counting_value is the
    counting relation evaluated at E, and n = round(Re(counting_value)
    - offset) is the inferred index.
    """

    n: int
    E: complex
    residual: float
    counting_value: complex
    method: str  # "asymptotic" | "numeric"


def q_eval(x: float, p: PotentialSpec, lam: complex) -> complex:
    """Q(x) = x^m + P(x) + lambda by Horner evaluation."""
    acc = 1.0 + 0j
    for c in p.a:
        acc = acc * x + c
    return acc * x + lam


def _q_coeffs(p: PotentialSpec, lam: complex) -> np.ndarray:
    """Descending-power coefficient vector of Q(x) = x^m + P(x) + lambda."""
    return np.array([1.0 + 0j] + list(p.a) + [complex(lam)], dtype=np.complex128)


def select_R(p: PotentialSpec, lam: complex, R: float | None = None) -> float:
    """Anchor radius: caller-provided (validated) or the smallest R
    satisfying R >= 3|lambda|^(1/m) and the dominance rule."""
    abs_a = [abs(v) for v in p.a]

    def dominated(r: float) -> bool:
        rest = abs(lam) + sum(av * r ** (p.m - j) for j, av in enumerate(abs_a, 1))
        return r**p.m >= DOMINANCE_FACTOR * rest

    if R is not None:
        if R <= 0 or not dominated(R):
            raise ValueError(
                f"anchor R = {R} violates the dominance rule "
                f"R^m >= {DOMINANCE_FACTOR} * (|lambda| + sum |a_j| R^(m-j))"
            )
        return float(R)
    r = max(1.0, 3.0 * abs(lam) ** (1.0 / p.m))
    while not dominated(r):
        r *= 1.1
    return r


def wkb_init(p: PotentialSpec, lam: complex, R: float) -> tuple:
    """Liouville-Green anchor data for the solution decaying as x -> inf.

    Returns (u, du) = (1, -sqrt(Q) - Q'/(4Q)) at x = R, principal
    square root (positive real part).
    """
    Q = q_eval(R, p, lam)
    if Q.imag == 0.0 and Q.real <= 0.0:
        raise ValueError(f"Q(R) = {Q} lies on (-inf, 0]; enlarge R")
    dQ = p.m * R ** (p.m - 1)
    for j, a in enumerate(p.a, start=1):
        k = p.m - j
        if k >= 1:
            dQ += a * k * R ** (k - 1)
    return 1.0 + 0j, -cmath.sqrt(Q) - dQ / (4.0 * Q)


def _propagate(
    p: PotentialSpec,
    lam: complex,
    x_from: float,
    x_to: float,
    y: tuple,
    cfg: ShootingConfig,
) -> tuple:
    """Advance (u, u') from x_from to x_to; returns (u, du, log_scale)."""
    coeffs = _q_coeffs(p, lam)
    u, du, ls, status, _ = _rk.dp54_linear2(
        coeffs,
        float(x_from),
        float(x_to),
        complex(y[0]),
        complex(y[1]),
        cfg.ode_rel_tol,
        cfg.ode_abs_tol,
        _MAX_STEPS,
    )
    if status == _rk.STEP_UNDERFLOW:
        raise ConvergenceError("ODE step size underflow")
    if status == _rk.MAX_STEPS:
        raise ConvergenceError("ODE step budget exhausted")
    return u, du, ls


def _shoot(
    p: PotentialSpec, lam: complex, cfg: ShootingConfig, R: float | None = None
) -> tuple:
    """Integrate the decaying solution from the anchor down to x = 0.

    Returns (u0, du0, log_scale, R): the renormalized boundary pair,
    the accumulated log scale, and the anchor actually used.  R, when
    given, overrides selection (used by Newton, which must keep the
    anchor *fixed* while differencing in E: a moving anchor changes the
    u(R) = 1 normalization and corrupts the derivative).
    """
    if R is None:
        R = select_R(p, lam, cfg.R)
    y = wkb_init(p, lam, R)
    u0, du0, ls = _propagate(p, lam, R, 0.0, y, cfg)
    return u0, du0, ls, R


def integrate(p: PotentialSpec, lam: complex, cfg: ShootingConfig) -> tuple:
    """Boundary values (u(0), u'(0)) of the decaying solution, up to the
    (positive real) renormalization scale."""
    u0, du0, _, _ = _shoot(p, lam, cfg)
    return u0, du0


def boundary_fn(prob: ShootingProblem, E: complex, cfg: ShootingConfig) -> complex:
    """W(E) = alpha*u(0) + beta*u'(0), defined up to a nonzero scalar."""
    u0, du0, _, _ = _shoot(prob.p, -complex(E), cfg)
    return prob.bc.alpha * u0 + prob.bc.beta * du0


def _w_scaled(
    prob: ShootingProblem,
    E: complex,
    cfg: ShootingConfig,
    R: float | None = None,
) -> tuple:
    u0, du0, ls, _ = _shoot(prob.p, -complex(E), cfg, R=R)
    return prob.bc.alpha * u0 + prob.bc.beta * du0, ls


@lru_cache(maxsize=64)
def _model_for(p: PotentialSpec, bc: BoundaryCondition) -> AsymptoticModel:
    return build_model(p, bc)


def asymptotic_record(model: AsymptoticModel, n: int) -> EigenvalueRecord:
    """Eigenvalue record carrying the expansion value instead of a
    numerically refined one (method tag "asymptotic", zero defect)."""
    E = eval_asym_E(model, n)
    return EigenvalueRecord(
        n=n,
        E=E,
        residual=0.0,
        counting_value=counting_residual(model, E),
        method="asymptotic",
    )


def newton_refine(
    prob: ShootingProblem,
    E0: complex,
    cfg: ShootingConfig,
    model: AsymptoticModel | None = None,
    trace: list | None = None,
) -> EigenvalueRecord:
    """Refine a seed E0 to a zero of the boundary functional.

    The derivative is a central finite difference in E; because the
    solver renormalizes mid-flight, the three evaluations carry their
    own log scales and are recombined at a common scale before
    differencing.  Convergence: |step| <= newton_tol*(1+|E|).
    """
    if model is None:
        model = _model_for(prob.p, prob.bc)
    E = complex(E0)
    # one anchor for the whole refinement, with headroom for E to move
    R = cfg.R if cfg.R is not None else select_R(prob.p, 1.25 * (1.0 + abs(E0)))
    for _ in range(cfg.max_newton_iter):
        if trace is not None:
            trace.append(E)
        h = cfg.fd_step * (1.0 + abs(E))
        w0, s0 = _w_scaled(prob, E, cfg, R=R)
        wp, sp = _w_scaled(prob, E + h, cfg, R=R)
        wm, sm = _w_scaled(prob, E - h, cfg, R=R)
        mid = 0.5 * (sp + sm)
        der = (wp * math.exp(sp - mid) - wm * math.exp(sm - mid)) / (2.0 * h)
        if der == 0 or not cmath.isfinite(der):
            raise ConvergenceError("boundary-function derivative underflow")
        step = -w0 * math.exp(s0 - mid) / der
        E = E + step
        if abs(step) <= cfg.newton_tol * (1.0 + abs(E)):
            if trace is not None:
                trace.append(E)
            cv = counting_residual(model, E)
            n = int(round((cv.real - prob.bc.offset())))
            return EigenvalueRecord(
                n=n,
                E=E,
                residual=abs(step) / (1.0 + abs(E)),
                counting_value=cv,
                method="numeric",
            )
    raise ConvergenceError(
        f"Newton did not converge from seed {E0} in {cfg.max_newton_iter} iterations"
    )


def scan(
    prob: ShootingProblem,
    model: AsymptoticModel,
    n_lo: int,
    n_hi: int,
    cfg: ShootingConfig,
    workers: int = 1,
) -> list:
    """Refine asymptotic seeds for n = n_lo..n_hi into eigenvalue records.

    Deduplicates converged zeros (|E - E'| <= newton_tol*(1+|E|)),
    requires the inferred indices to be distinct and consecutive, and
    returns records sorted by |E|.
    """
    if n_hi < n_lo:
        raise ValueError(f"empty window {n_lo}..{n_hi}")
    ns = list(range(n_lo, n_hi + 1))

    def one(n: int) -> EigenvalueRecord:
        return newton_refine(prob, eval_asym_E(model, n), cfg, model=model)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            recs = list(pool.map(one, ns))
    else:
        recs = [one(n) for n in ns]

    recs.sort(key=lambda r: abs(r.E))
    unique: list = []
    for r in recs:
        if unique and abs(r.E - unique[-1].E) <= cfg.newton_tol * (1.0 + abs(r.E)):
            continue
        unique.append(r)
    _validate_indices(unique)
    return unique


def _validate_indices(records: list) -> None:
    """Inferred indices of distinct eigenvalues must be consecutive."""
    for prev, cur in zip(records, records[1:]):
        if cur.n == prev.n:
            raise IndexCollisionError(
                f"two distinct eigenvalues ({prev.E}, {cur.E}) share index {cur.n}; "
                "seeds are outside the asymptotic regime"
            )
        if cur.n != prev.n + 1:
            raise IndexCollisionError(
                f"inferred indices jump from {prev.n} to {cur.n}; scan window "
                "has a gap"
            )


def N_numeric(records: list, t: float) -> int:
    """Number of scanned eigenvalues with |E| <= t.

    Meaningful only when the records cover every eigenvalue below t;
    warns if t reaches beyond the scanned window.
    """
    if records and t > max(abs(r.E) for r in records):
        warnings.warn(
            f"t = {t} exceeds the largest scanned |E|; count is a lower bound",
            CoverageWarning,
            stacklevel=2,
        )
    return sum(1 for r in records if abs(r.E) <= t)


def _poly_derivs(p: PotentialSpec):
    """V(x) = x^m + P(x) and its first two derivatives (real a)."""
    a = [v.real for v in p.a]
    m = p.m

    def V(x: float) -> float:
        acc = 1.0
        for c in a:
            acc = acc * x + c
        return acc * x

    def V1(x: float) -> float:
        acc = float(m)
        for j, c in enumerate(a, start=1):
            acc = acc * x + (m - j) * c
        return acc

    def V2(x: float) -> float:
        acc = float(m * (m - 1))
        for j, c in enumerate(a[:-1], start=1):
            acc = acc * x + (m - j) * (m - j - 1) * c
        return acc

    return V, V1, V2


def titchmarsh_count(p: PotentialSpec, t: float) -> float:
    """Phase-space eigenvalue count (1/pi) int_0^x0 sqrt(t - V(x)) dx for
    real potentials V = x^m + P increasing and convex on [0, inf),
    with x0 the positive root of V(x) = t."""
    if not p.is_real:
        raise ValueError("titchmarsh_count requires real coefficients")
    if t <= 0.0:
        raise ValueError(f"requires t > 0, got {t}")
    V, V1, V2 = _poly_derivs(p)

    # bracket and solve V(x0) = t by Newton with bisection fallback
    lo, hi = 0.0, max(1.0, t ** (1.0 / p.m))
    while V(hi) < t:
        hi *= 2.0
    x = hi
    for _ in range(200):
        f = V(x) - t
        if f > 0:
            hi = x
        else:
            lo = x
        d = V1(x)
        step_ok = d > 0
        if step_ok:
            xn = x - f / d
            step_ok = lo < xn < hi
        if not step_ok:
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 1e-14 * (1.0 + abs(x)):
            x = xn
            break
        x = xn
    else:
        raise ConvergenceError("root finding for V(x0) = t stalled")
    x0 = x

    xs = np.linspace(x0 / 400.0, x0, 400)
    if any(V1(xi) <= 0.0 for xi in xs) or any(V2(xi) < -1e-12 for xi in xs):
        raise ValueError("potential must be increasing and convex on [0, x0]")

    def f(s: float) -> float:
        val = t - V(x0 * (1.0 - s * s))
        return 2.0 * x0 * s * math.sqrt(max(val, 0.0))

    tol = 1e-10 * (1.0 + t ** (0.5 + 1.0 / p.m))
    val, err = quad(f, 0.0, 1.0, epsabs=tol, epsrel=1e-11, limit=200)
    if err > 10.0 * tol:
        raise QuadratureError(f"phase-space integral error {err:.3e} too large")
    return val / math.pi
