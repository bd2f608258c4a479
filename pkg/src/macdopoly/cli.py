"""Command-line surface: evaluate kernels, build tables, run verification
suites, emit machine-readable reports.

Exit codes: 0 success / all residuals pass, 1 verification or numerical
failure, 2 usage or domain error.  All numbers are serialized as decimal
strings; reports have a fixed field order so identical configurations yield
byte-identical output.  Wallclock timing is included only on request, since
it would break that reproducibility.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import mpmath as mp

from . import calculus, composition, kernels, opoly
from .precision import PrecisionContext, Params, DomainError, working_precision

SUITES = (
    "kernel", "lemma1", "lemma2", "thm2", "thm3", "cor1", "cor3",
    "thm4", "thm5", "quasi", "section4", "all",
)

DEFAULTS = {
    "alpha": "0.5", "nu": "1.5", "lam": "1", "t": "1",
    "n": 4, "N": 8, "digits": 120, "tol": None,
    "format": "json",
}


def _dec(v, digits: int) -> str:
    return mp.nstr(mp.mpf(v), digits)


def _ctx(cfg) -> PrecisionContext:
    digits = cfg["digits"]
    tol = cfg["tol"] if cfg["tol"] is not None else 10.0 ** (-digits // 2)
    return PrecisionContext(digits, float(tol), max(2 * digits, 240))


def _params(cfg) -> Params:
    return Params(cfg["alpha"], cfg["nu"], cfg["lam"], cfg["t"])


def _params_dict(p: Params, digits: int) -> dict:
    return {
        "alpha": _dec(p.alpha, digits),
        "nu": _dec(p.nu, digits),
        "lambda": _dec(p.lam, digits),
        "t": _dec(p.t, digits),
    }


# ---------------------------------------------------------------------------
# suite runners: each returns a list of residual entries


def _entry(identity, n, m, value, tol, ok, digits=12):
    return {
        "identity": identity,
        "n": n,
        "m": m,
        "value": _dec(abs(value), digits) if value is not None else None,
        "tol": _dec(tol, digits),
        "pass": bool(ok),
    }


def _from_report(rep, n) -> list:
    out = []
    for det in rep.details:
        out.append(_entry(rep.identity, n, det["term"], det["value"], det["tol"],
                          det["pass"]))
    return out


def _suite_kernel(cfg) -> list:
    ctx = _ctx(cfg)
    p = _params(cfg)
    out = []
    tol = mp.mpf(10) ** (20 - cfg["digits"])
    with working_precision(ctx):
        for nu in (mp.mpf("0.5"), p.nu, mp.mpf(3)):
            for x in (mp.mpf("0.5"), mp.mpf(2)):
                ra = kernels.rho_eval(nu, x, ctx, route="laplace-integral")
                rb = kernels.rho_eval(nu, x, ctx, route="bessel-k")
                resid = abs(ra - rb) / max(abs(rb), mp.mpf(1))
                out.append(_entry("1.4 route-agreement",
                                  None, f"nu={mp.nstr(nu, 4)},x={mp.nstr(x, 4)}",
                                  resid, tol, resid <= tol))
                rr = kernels.rho_recurrence_residual(nu, x, ctx)
                out.append(_entry("1.5", None,
                                  f"nu={mp.nstr(nu, 4)},x={mp.nstr(x, 4)}",
                                  abs(rr), tol, abs(rr) <= tol))
        for order in (1, 2, 3):
            dtol = mp.mpf(10) ** (-2 * cfg["digits"] // (order + 2) + 8)
            dr = kernels.rho_derivative_check(p.nu + 1, order, mp.mpf(1), ctx)
            out.append(_entry("1.6", None, f"order={order}", abs(dr), dtol,
                              abs(dr) <= dtol))
        for nu in (mp.mpf(0), mp.mpf("0.5"), mp.mpf(1)):
            for x in (mp.mpf("0.5"), mp.mpf(1), mp.mpf(4)):
                lhs, rhs = kernels.ismail_quotient_check(nu, x)
                resid = abs(lhs - rhs) / abs(rhs)
                out.append(_entry("1.9", None,
                                  f"nu={mp.nstr(nu, 4)},x={mp.nstr(x, 4)}",
                                  resid, mp.mpf("1e-6"), resid <= mp.mpf("1e-6")))
        small = PrecisionContext(min(cfg["digits"], 40), 1e-18, 240)
        for nn in (0, 1, 2):
            lp = kernels.laguerre_product_check(p.nu, nn, mp.mpf(1), small)
            ltol = mp.mpf("1e-18")
            out.append(_entry("1.10", nn, None, abs(lp), ltol, abs(lp) <= ltol))
        fr = kernels.fractional_integral_check(p.nu, mp.mpf("0.8"), mp.mpf(1), small)
        out.append(_entry("1.12", None, None, abs(fr), mp.mpf("1e-18"),
                          abs(fr) <= mp.mpf("1e-18")))
        tm = composition.theta_monomial_check(3, mp.mpf("2.5"), ctx)
        out.append(_entry("3.1", None, "m=3", abs(tm), tol, abs(tm) <= tol))
        rd = composition.rodrigues_check(4, p.nu, ["0.3", "1", "4"], ctx)
        out.append(_entry("3.12", None, "m=4", abs(rd), tol, abs(rd) <= tol))
        if p.t > 0:
            bf = composition.base_function_check(p, ["0.3", "1", "4"], ctx)
            out.append(_entry("3.13", None, None, abs(bf), tol, abs(bf) <= tol))
    return out


def _suite_lemma1(cfg) -> list:
    ctx = _ctx(cfg)
    base = _params(cfg)
    out = []
    grid = [
        base,
        Params("0.25", "2.5", "2", "0.5"),
        Params("1.5", "0.75", "0.5", "2"),
    ]
    with working_precision(ctx):
        tol_rel = max(ctx.tol_mp(), mp.mpf(10) ** (20 - cfg["digits"]))
        for p in grid:
            for x in (mp.mpf("0.5"), mp.mpf(1), mp.mpf(2)):
                resid = kernels.weight_ode_residual(p, x, ctx)
                scale = kernels.weight_ode_scale(p, x, ctx)
                tol = tol_rel * scale
                out.append(_entry(
                    "1.19", None,
                    f"alpha={mp.nstr(p.alpha, 4)},x={mp.nstr(x, 4)}",
                    abs(resid), tol, abs(resid) <= tol))
    return out


def _suite_lemma2(cfg) -> list:
    ctx = _ctx(cfg)
    p = _params(cfg)
    out = []
    for n in range(min(cfg["n"], 4) + 1):
        out += _from_report(calculus.check_lemma2(p, n, ctx), n)
        if p.t > 0:
            out += _from_report(calculus.check_2_36_2_37(p, n, ctx), n)
    return out


def _suite_thm2(cfg) -> list:
    ctx = _ctx(cfg)
    p = _params(cfg)
    out = []
    N = cfg["n"] + 1
    for n in range(1, cfg["n"] + 1):
        if p.lam > 0:
            out += _from_report(calculus.check_thm2_lambda(p, n, ctx, N=N), n)
        if p.t > 0:
            out += _from_report(calculus.check_thm2_t(p, n, ctx, N=N), n)
    return out


def _suite_thm3(cfg) -> list:
    ctx = _ctx(cfg)
    p = _params(cfg)
    out = []
    N = cfg["n"] + 1
    for n in range(cfg["n"] + 1):
        out += _from_report(calculus.check_thm3(p, n, ctx, N=N), n)
    return out


def _suite_cor1(cfg) -> list:
    ctx = _ctx(cfg)
    p = _params(cfg)
    out = []
    N = cfg["n"] + 2
    for n in range(1, cfg["n"] + 1):
        out += _from_report(calculus.check_corollary1(p, n, ctx, N=N), n)
    return out


def _suite_cor3(cfg) -> list:
    ctx = _ctx(cfg)
    p = _params(cfg)
    out = []
    N = max(cfg["n"], 1)
    for n in range(cfg["n"] + 1):
        out += _from_report(calculus.check_cor3(p, n, ctx, N=N), n)
        out += _from_report(calculus.check_2_30(p, n, ctx, N=N), n)
    return out


def _suite_thm4(cfg) -> list:
    p = _params(cfg)
    out = []
    xs = ["0.5", "1", "2"]
    n_max = min(cfg["n"], 3)
    for n in range(1, n_max + 1):
        out += _from_report(calculus.check_thm4_lambda(p, n, xs, N=n_max + 1), n)
        out += _from_report(calculus.check_thm4_t(p, n, xs, N=n_max + 1), n)
    return out


def _suite_thm5(cfg) -> list:
    ctx = _ctx(cfg)
    p = _params(cfg)
    out = []
    nmax = min(cfg["n"], 6)
    rec = opoly.cached_recurrence(p, max(nmax + 1, 2), ctx)
    tol = mp.mpf("1e-30")
    with working_precision(ctx):
        for n in range(1, nmax + 1):
            r = composition.composition_orthogonality_check(rec, n, ctx)
            out.append(_entry("3.10", n, "m<n", r["zero"], tol, r["zero"] <= tol))
            out.append(_entry("3.10", n, "m=n", r["diag"], tol, r["diag"] <= tol))
            out.append(_entry("3.10", n, "moment-route", r["cross"], tol,
                              r["cross"] <= tol))
    return out


def _suite_quasi(cfg) -> list:
    ctx = _ctx(cfg)
    p = _params(cfg)
    out = []
    for n in range(2, max(cfg["n"], 2) + 1):
        out += _from_report(calculus.check_quasi_orthogonality(p, n, ctx), n)
    return out


def _suite_section4(cfg) -> list:
    ctx = _ctx(cfg)
    p = _params(cfg)
    out = []
    for n in range(1, min(cfg["n"], 3) + 1):
        rep = calculus.check_section4("0.5", n, ctx, alpha=p.alpha, nu=p.nu)
        out += _from_report(rep, n)
    ends = calculus.path_endpoint_residuals(1, ctx, alpha=p.alpha, nu=p.nu)
    with working_precision(ctx):
        tol = mp.mpf("1e-6")
        for key, val in ends.items():
            out.append(_entry("4.1 endpoint", 1, key, val, tol, val <= tol))
    return out


_SUITE_FN = {
    "kernel": _suite_kernel,
    "lemma1": _suite_lemma1,
    "lemma2": _suite_lemma2,
    "thm2": _suite_thm2,
    "thm3": _suite_thm3,
    "cor1": _suite_cor1,
    "cor3": _suite_cor3,
    "thm4": _suite_thm4,
    "thm5": _suite_thm5,
    "quasi": _suite_quasi,
    "section4": _suite_section4,
}


# ---------------------------------------------------------------------------
# commands


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def cmd_rho(cfg) -> int:
    ctx = PrecisionContext(cfg["digits"], 10.0 ** (-cfg["digits"] // 2),
                           max(2 * cfg["digits"], 240))
    with working_precision(ctx):
        x = mp.mpf(cfg["x"])
        if x < 0:
            raise DomainError("rho requires x >= 0")
        if x == 0:
            nu = mp.mpf(cfg["nu"])
            if nu <= 0:
                raise DomainError("rho at x = 0 requires nu > 0")
            value = mp.gamma(nu)
        else:
            value = kernels.rho_eval(mp.mpf(cfg["nu"]), x, ctx,
                                     route=cfg.get("route", "laplace-integral"))
        print(_dec(value, cfg["digits"]))
    return 0


def _table_csv(d: dict) -> str:
    lines = ["section,index,value"]
    for key in ("moments", "a", "b", "d", "a_const", "B"):
        for i, v in enumerate(d[key]):
            lines.append(f"{key},{i},{v}")
    for i, v in enumerate(d["A"]):
        lines.append(f"A,{i},{'' if v is None else v}")
    for n, row in enumerate(d["coefficients"]):
        for k, v in enumerate(row):
            lines.append(f"coeff[{n}],{k},{v}")
    return "\n".join(lines) + "\n"


def cmd_table(cfg) -> int:
    ctx = _ctx(cfg)
    p = _params(cfg)
    rec = opoly.build_recurrence(p, cfg["N"], ctx)
    d = opoly.table_to_dict(rec)
    if cfg["format"] == "csv":
        _emit(_table_csv(d), cfg.get("out"))
    else:
        _emit(json.dumps(d, indent=2, sort_keys=False) + "\n", cfg.get("out"))
    return 0


def cmd_quadrule(cfg) -> int:
    ctx = _ctx(cfg)
    p = _params(cfg)
    rec = opoly.build_recurrence(p, cfg["N"], ctx)
    rule = opoly.gauss_rule(rec, cfg["N"], ctx)
    d = opoly.rule_to_dict(rule)
    if cfg["format"] == "csv":
        lines = ["node,weight"]
        for x, w in zip(d["nodes"], d["weights"]):
            lines.append(f"{x},{w}")
        _emit("\n".join(lines) + "\n", cfg.get("out"))
    else:
        _emit(json.dumps(d, indent=2, sort_keys=False) + "\n", cfg.get("out"))
    return 0


def cmd_verify(cfg) -> int:
    suite = cfg["suite"]
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}")
    _params(cfg)  # validate domain before any computation
    ids = list(SUITES[:-1]) if suite == "all" else [suite]
    t0 = time.time()
    suites_out = []
    all_pass = True
    for sid in ids:
        residuals = _SUITE_FN[sid](cfg)
        ok = all(r["pass"] for r in residuals)
        all_pass = all_pass and ok
        suites_out.append({
            "id": sid,
            "params": _params_dict(_params(cfg), 30),
            "residuals": residuals,
        })
    report = {
        "config": {
            "alpha": cfg["alpha"],
            "nu": cfg["nu"],
            "lambda": cfg["lam"],
            "t": cfg["t"],
            "n": cfg["n"],
            "N": cfg["N"],
            "digits": cfg["digits"],
            "tol": None if cfg["tol"] is None else str(cfg["tol"]),
            "suite": suite,
        },
        "suites": suites_out,
        "pass": bool(all_pass),
    }
    if cfg.get("timing"):
        report["wallclock"] = round(time.time() - t0, 3)
    _emit(json.dumps(report, indent=2, sort_keys=False) + "\n", cfg.get("out"))
    return 0 if all_pass else 1


# ---------------------------------------------------------------------------
# argument handling


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="macdopoly",
        description="Orthogonal polynomials for the weight "
                    "x^alpha e^(-lambda x) rho_nu(x t): tables, quadrature "
                    "rules, and identity verification suites.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(sp, with_params=True):
        sp.add_argument("--digits", type=int)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--config", help="JSON file with defaults for any flag")
        sp.add_argument("--out", help="output path (default stdout)")
        if with_params:
            sp.add_argument("--alpha")
            sp.add_argument("--nu")
            sp.add_argument("--lambda", dest="lam")
            sp.add_argument("--t")

    sp = sub.add_parser("rho", help="evaluate rho_nu(x)")
    sp.add_argument("--nu", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--route", choices=["laplace-integral", "bessel-k", "recurrence"],
                    default="laplace-integral")
    add_common(sp, with_params=False)

    sp = sub.add_parser("table", help="build a recurrence table")
    add_common(sp)
    sp.add_argument("--N", type=int)
    sp.add_argument("--format", choices=["json", "csv"])

    sp = sub.add_parser("quadrule", help="build a Gauss quadrature rule")
    add_common(sp)
    sp.add_argument("--N", type=int)
    sp.add_argument("--format", choices=["json", "csv"])

    sp = sub.add_parser("verify", help="run a verification suite")
    add_common(sp)
    sp.add_argument("--suite", required=True, choices=SUITES)
    sp.add_argument("--n", type=int, help="maximal degree per suite")
    sp.add_argument("--N", type=int)
    sp.add_argument("--timing", action="store_true",
                    help="include wallclock in the report (breaks "
                         "byte-for-byte reproducibility)")
    return ap


def _resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    env_digits = os.environ.get("MACDOPOLY_DIGITS")
    if env_digits:
        cfg["digits"] = int(env_digits)
    if getattr(args, "config", None):
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        for key, val in file_cfg.items():
            key = "lam" if key == "lambda" else key
            if key not in cfg and key not in ("x", "route", "suite", "out",
                                              "timing", "format"):
                raise DomainError(f"unknown config key {key!r}")
            cfg[key] = val
    for key, val in vars(args).items():
        if key in ("command", "config"):
            continue
        if val is not None and val is not False:
            cfg[key] = val
    cfg["n"] = int(cfg["n"])
    cfg["N"] = int(cfg["N"])
    cfg["digits"] = int(cfg["digits"])
    if cfg["digits"] < 30 or cfg["digits"] > 1000:
        raise DomainError("digits must lie in [30, 1000]")
    return cfg


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        if args.command == "rho":
            return cmd_rho(cfg)
        if args.command == "table":
            return cmd_table(cfg)
        if args.command == "quadrule":
            return cmd_quadrule(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        raise DomainError(f"unknown command {args.command!r}")
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
