"""Command-line front end.

Commands
--------
asym     asymptotic eigenvalues E_n for an index window
shoot    numerically refined eigenvalues (per-n Newton, parallelized)
compare  shooting vs asymptotics, with counting-relation residuals
count    eigenvalue counts: numeric vs smooth vs phase-space integral
invert   recover potential coefficients from an eigenvalue file
check-k  closed form vs quadrature for the universal constants
check-l  action integral: quadrature vs truncated series

Output is JSON ({"version", "spec", "rows"}) or CSV (one versioned
header comment line, then fixed columns).  Complex numbers travel as
separate re/im fields so files round-trip losslessly into `invert`.
Exit codes: 0 ok, 2 bad input, 3 numerical failure, 4 count requested
beyond the scanned window.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import __version__
from .asym import (
    BoundaryCondition,
    K_closed,
    K_quad,
    L_quad,
    L_series,
    N_asym,
    build_model,
    eval_asym_E,
)
from .combin import PotentialSpec
from .errors import NumericsError
from .inverse import InverseProblem, fit_e, recover_a
from .shoot import (
    N_numeric,
    ShootingConfig,
    ShootingProblem,
    scan,
    titchmarsh_count,
)


class _CoverageExit(Exception):
    pass


def _parse_complex(s: str) -> complex:
    try:
        return complex(s.strip().replace("i", "j"))
    except ValueError:
        raise ValueError(f"cannot parse complex number {s!r}")


def _parse_a(s: str) -> tuple:
    if not s.strip():
        return ()
    return tuple(_parse_complex(tok) for tok in s.split(","))


def _parse_window(s: str) -> tuple:
    try:
        lo, hi = s.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise ValueError(f"index window must look like LO:HI, got {s!r}")


def _parse_reals(s: str) -> tuple:
    return tuple(float(tok) for tok in s.split(","))


def _workers() -> int:
    env = os.environ.get("HALFLINE_THREADS")
    if env is not None:
        n = int(env)
        if n < 1:
            raise ValueError(f"HALFLINE_THREADS must be >= 1, got {env}")
        return n
    return os.cpu_count() or 1


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _emit(spec: dict, rows: list, columns: list, fmt: str, out_path: str | None) -> None:
    if fmt == "json":
        text = json.dumps(
            {"version": __version__, "spec": spec, "rows": rows}, indent=1
        )
        text += "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# halfline {__version__}\n")
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: _fmt(v) for k, v in row.items()})
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _problem(ns) -> tuple:
    p = PotentialSpec(ns.m, _parse_a(ns.a))
    bc = BoundaryCondition(_parse_complex(ns.alpha), _parse_complex(ns.beta))
    return p, bc


def _spec_echo(ns, **extra) -> dict:
    d = {"command": ns.command}
    for key in ("m", "a", "alpha", "beta", "n", "t", "depth", "input", "lam"):
        if hasattr(ns, key) and getattr(ns, key) is not None:
            d[key] = getattr(ns, key)
    d.update(extra)
    return d


def _cmd_asym(ns) -> tuple:
    p, bc = _problem(ns)
    lo, hi = _parse_window(ns.n)
    model = build_model(p, bc)
    rows = []
    for n in range(lo, hi + 1):
        E = eval_asym_E(model, n)
        rows.append({"n": n, "re": E.real, "im": E.imag})
    return rows, ["n", "re", "im"]


def _scan(ns):
    p, bc = _problem(ns)
    lo, hi = _parse_window(ns.n)
    model = build_model(p, bc)
    prob = ShootingProblem(p, bc)
    recs = scan(prob, model, lo, hi, ShootingConfig(), workers=_workers())
    return p, bc, model, recs


def _cmd_shoot(ns) -> tuple:
    _, _, _, recs = _scan(ns)
    rows = [
        {
            "n": r.n,
            "re": r.E.real,
            "im": r.E.imag,
            "residual": r.residual,
            "counting_re": r.counting_value.real,
            "counting_im": r.counting_value.imag,
        }
        for r in recs
    ]
    return rows, ["n", "re", "im", "residual", "counting_re", "counting_im"]


def _cmd_compare(ns) -> tuple:
    _, bc, model, recs = _scan(ns)
    rows = []
    for r in recs:
        Ea = eval_asym_E(model, r.n)
        err = abs(r.E - Ea)
        rows.append(
            {
                "n": r.n,
                "shoot_re": r.E.real,
                "shoot_im": r.E.imag,
                "asym_re": Ea.real,
                "asym_im": Ea.imag,
                "abs_err": err,
                "rel_err": err / abs(r.E),
                "r_n": abs(r.counting_value - (r.n + bc.offset())),
            }
        )
    return rows, [
        "n",
        "shoot_re",
        "shoot_im",
        "asym_re",
        "asym_im",
        "abs_err",
        "rel_err",
        "r_n",
    ]


def _cmd_count(ns) -> tuple:
    p, _, model, recs = _scan(ns)
    ts = _parse_reals(ns.t)
    top = max(abs(r.E) for r in recs)
    for t in ts:
        if t > top:
            raise _CoverageExit(
                f"t = {t:g} exceeds the largest scanned |E| = {top:g}"
            )
    rows = []
    for t in ts:
        rows.append(
            {
                "t": t,
                "n_numeric": N_numeric(recs, t),
                "n_asym": N_asym(model, t),
                "titchmarsh": titchmarsh_count(p, t),
            }
        )
    return rows, ["t", "n_numeric", "n_asym", "titchmarsh"]


def _cmd_invert(ns) -> tuple:
    bc = BoundaryCondition(_parse_complex(ns.alpha), _parse_complex(ns.beta))
    with open(ns.input) as fh:
        data = json.load(fh)
    eigs = tuple(sorted((int(d["n"]), complex(d["re"], d["im"])) for d in data))
    ip = InverseProblem(ns.m, bc, eigs, ns.depth)
    e_hat, diag = fit_e(ip)
    a_hat = recover_a(ns.m, bc, e_hat)
    rows = []
    for k, (ak, ek, sk) in enumerate(zip(a_hat, e_hat, diag["sigma"]), start=1):
        rows.append(
            {
                "k": k,
                "a_re": ak.real,
                "a_im": ak.imag,
                "e_re": ek.real,
                "e_im": ek.imag,
                "sigma": sk,
                "rms_residual": diag["rms_residual"],
                "condition": diag["condition"],
            }
        )
    return rows, [
        "k",
        "a_re",
        "a_im",
        "e_re",
        "e_im",
        "sigma",
        "rms_residual",
        "condition",
    ]


def _legal_jk(m: int):
    yield 0, 0
    for j in range(1, (m + 1) // 2 + 1):
        for k in range(1, j + 1):
            yield j, k
    if m % 2 == 0:
        j = m // 2 + 1
        for k in range(1, j + 1):
            yield j, k


def _cmd_check_k(ns) -> tuple:
    rows = []
    for j, k in _legal_jk(ns.m):
        c = K_closed(ns.m, j, k)
        q = K_quad(ns.m, j, k)
        rows.append(
            {"m": ns.m, "j": j, "k": k, "closed": c, "quad": q, "diff": abs(c - q)}
        )
    return rows, ["m", "j", "k", "closed", "quad", "diff"]


def _cmd_check_l(ns) -> tuple:
    p = PotentialSpec(ns.m, _parse_a(ns.a))
    rows = []
    for lam_s in ns.lam.split(","):
        lam = _parse_complex(lam_s)
        lq = L_quad(p, lam)
        ls = L_series(p, lam)
        rows.append(
            {
                "lam_re": lam.real,
                "lam_im": lam.imag,
                "quad_re": lq.real,
                "quad_im": lq.imag,
                "series_re": ls.real,
                "series_im": ls.imag,
                "diff": abs(lq - ls),
            }
        )
    return rows, [
        "lam_re",
        "lam_im",
        "quad_re",
        "quad_im",
        "series_re",
        "series_im",
        "diff",
    ]


_COMMANDS = {
    "asym": _cmd_asym,
    "shoot": _cmd_shoot,
    "compare": _cmd_compare,
    "count": _cmd_count,
    "invert": _cmd_invert,
    "check-k": _cmd_check_k,
    "check-l": _cmd_check_l,
}


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="halfline",
        description="Eigenvalue asymptotics and shooting for half-line "
        "polynomial potentials x^m + P(x).",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(sp, a=True, bc=True, window=False):
        sp.add_argument("--m", type=int, required=True, help="potential degree m >= 3")
        if a:
            sp.add_argument(
                "--a",
                default="",
                help="comma-separated coefficients a_1..a_{m-1} (re or re+imi)",
            )
        if bc:
            sp.add_argument("--alpha", default="1", help="boundary alpha (default 1)")
            sp.add_argument("--beta", default="0", help="boundary beta (default 0)")
        if window:
            sp.add_argument("--n", required=True, help="index window LO:HI")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--output", default=None, help="write to file instead of stdout")

    common(sub.add_parser("asym", help="asymptotic eigenvalues"), window=True)
    common(sub.add_parser("shoot", help="shooting eigenvalues"), window=True)
    common(sub.add_parser("compare", help="shooting vs asymptotics"), window=True)
    sp = sub.add_parser("count", help="eigenvalue counting functions")
    common(sp, window=True)
    sp.add_argument("--t", required=True, help="comma-separated count thresholds")
    sp = sub.add_parser("invert", help="recover coefficients from eigenvalues")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--alpha", default="1")
    sp.add_argument("--beta", default="0")
    sp.add_argument("--depth", type=int, required=True, help="recovery depth J")
    sp.add_argument("--input", required=True, help="JSON array of {n, re, im}")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--output", default=None)
    sp = sub.add_parser("check-k", help="K constants: closed form vs quadrature")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--output", default=None)
    sp = sub.add_parser("check-l", help="action integral: quadrature vs series")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--a", default="")
    sp.add_argument("--lam", default="100,1000,10000", help="comma-separated lambdas")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--output", default=None)
    return top


def main(argv=None) -> int:
    ns = _build_parser().parse_args(argv)
    try:
        rows, columns = _COMMANDS[ns.command](ns)
    except _CoverageExit as ex:
        print(f"halfline: error: coverage: {ex}", file=sys.stderr)
        return 4
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as ex:
        print(f"halfline: error: input: {ex}", file=sys.stderr)
        return 2
    except NumericsError as ex:
        print(f"halfline: error: numerical: {ex}", file=sys.stderr)
        return 3
    _emit(_spec_echo(ns), rows, columns, ns.format, ns.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
