"""Command-line entry point: ``wpflow <command> [options]``.

Every command writes ``<out>/<command>.json`` (a run manifest) and, with
``--format csv``, ``<out>/<command>.csv`` holding the same rows. Exit codes:
0 all rows pass, 1 some row failed, 2 bad input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings

import numpy as np

from . import flow as fl
from . import functions as fn
from . import reich as rc
from . import semmes as se
from . import suites
from . import wpmap as wp
from .errors import InvalidInputError, SpecParseError, WPFlowError
from .manifest import SUITES, ConfigSpec, RunManifest

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


def _read_spec(text, cfg, X=None, n=None):
    """Function literal from JSON text, ``@path`` or a bare builtin name."""
    X = cfg["line"]["X"] if X is None else X
    n = cfg["line"]["n"] if n is None else n
    M = cfg["circle"]["M"]
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    stripped = text.strip()
    if stripped[:1] in ("{", "["):
        return fn.parse_function(stripped, M=M, X=X, n=n)
    return fn.parse_function({"type": "builtin", "name": stripped}, M=M, X=X, n=n)


def _read_field(text, cfg):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
        if isinstance(obj, dict) and "time_knots" in obj:
            return fl.parse_field(obj)
        f = fn.parse_function(obj, M=cfg["circle"]["M"], X=cfg["line"]["X"], n=cfg["line"]["n"])
    else:
        f = _read_spec(stripped, cfg)
    return fl.TimeDependentField.autonomous(f)


def _emit(man: RunManifest, args, name):
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, f"{name}.json"), "w") as fh:
        fh.write(man.to_json())
    if args.format == "csv":
        with open(os.path.join(args.out, f"{name}.csv"), "w") as fh:
            fh.write(man.rows_csv())
    for r in man.rows:
        flag = "PASS" if r["pass"] else "FAIL"
        if r["residual"] is None:
            print(f"{flag}  {r['suite']:<10} {r['check']:<32} value={json.dumps(r['value'], sort_keys=True)}")
        else:
            print(f"{flag}  {r['suite']:<10} {r['check']:<32} residual={_short(r['residual'])} "
                  f"tol={_short(r['tolerance'])}")
    return EXIT_OK if man.passed else EXIT_FAIL


def _short(v):
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def _row(suite, check, op, inp, value, residual=None, tol=None, passed=None):
    if passed is None:
        passed = True if tol is None else bool(residual <= tol)
    return {"suite": suite, "check": check, "operation": op, "input": inp, "value": value,
            "residual": residual, "tolerance": tol, "pass": bool(passed)}


# --------------------------------------------------------------------------


def cmd_norm(args, cfg):
    u = _read_spec(args.spec, cfg)
    man = RunManifest(cfg, "norm")
    if args.which == "h12":
        rep = fn.h12_circle(u) if isinstance(u, fn.CircleFunction) else fn.h12_line(u)
    elif args.which == "h32":
        rep = fn.h32_norm(u)
    else:
        if isinstance(u, fn.CircleFunction):
            raise InvalidInputError("bmo is implemented for line functions")
        rep = fn.bmo_norm(u, cfg["line"]["bmo_depth"])
    man.append(_row("functions", args.which, rep.method, args.spec, rep.to_row()))
    return _emit(man, args, "norm")


def _logistic(x, t):
    return x * math.exp(t) / (1 + x * (math.exp(t) - 1))


def cmd_flow(args, cfg):
    fld = _read_field(args.field, cfg)
    t_end = fld.T if args.t_end is None else args.t_end
    steps = args.steps or cfg["flow"]["steps"]
    P = cfg["flow"]["particles"]
    parts = fl.default_particles(fld.domain, P)
    knots = args.knots or cfg["flow"]["snapshots"]
    snaps = np.linspace(0.0, t_end, knots + 1)
    if steps % knots:
        raise InvalidInputError("--steps must be a multiple of --knots")
    try:
        curve = fl.integrate_flow(fld, steps, parts, snaps, t_end=t_end)
    except WPFlowError as exc:
        raise type(exc)(f"{exc}; try more --steps") from exc
    os.makedirs(args.out, exist_ok=True)
    curve.to_csv(os.path.join(args.out, "flow.csv"))
    man = RunManifest(cfg, "flow")
    r = fl.check_logderiv_ode(curve, fld)
    tol = cfg.tol("logderiv_circle" if fld.domain == "circle" else "logderiv_logistic")
    man.append(_row("flow", "logderiv_ode", "check_logderiv_ode", args.field, r, r["sup"], tol))
    if args.oracle != "none":
        last = curve.maps[-1]
        if args.oracle == "logistic":
            expect = _logistic(last.xs, t_end)
            tol = cfg.tol("logistic_oracle")
        else:
            speed = fld.fields[0]
            c = float(np.mean(speed.samples)) if isinstance(speed, fn.CircleFunction) else float("nan")
            expect = last.xs + c * t_end
            tol = 1e-10
        err = float(np.max(np.abs(last.ys - expect)))
        man.append(_row("flow", f"oracle_{args.oracle}", "integrate_flow", args.field, err, err, tol))
    return _emit(man, args, "flow")


def cmd_extend(args, cfg):
    u = _read_spec(args.spec, cfg)
    if not isinstance(u, fn.LineFunction):
        raise InvalidInputError("extend expects a line function")
    grid = se.HalfPlaneGrid(**cfg["grid"])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", se.SemmesRegimeWarning)
        mu = se.beltrami(u, grid, delta=cfg["semmes"]["delta"])
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    rep = se.wp_energy(mu)
    os.makedirs(args.out, exist_ok=True)
    mu.to_matrix(os.path.join(args.out, "mu_abs.dat"))
    if args.format == "csv":
        mu.to_csv(os.path.join(args.out, "mu.csv"))
    man = RunManifest(cfg, "extend")
    man.append(_row("semmes", "wp_energy", "wp_energy", args.spec, rep.to_row()))
    man.append(_row("semmes", "sup_mu_below_one", "beltrami", args.spec, rep.sup_mu, rep.sup_mu, 1.0,
                    passed=rep.sup_mu < 1))
    return _emit(man, args, "extend")


def cmd_dpsi_check(args, cfg):
    u = _read_spec(args.spec, cfg)
    v = _read_spec(args.direction, cfg)
    if not isinstance(u, fn.LineFunction) or not isinstance(v, fn.LineFunction):
        raise InvalidInputError("dpsi-check expects line functions")
    H = wp.psi(u)
    dv = wp.d_psi(u, v).representative.values
    errs = []
    for eps in (1e-2, 5e-3):
        ue = u.with_values(u.values + eps * v.values, slopes=u.slopes + eps * v.slopes)
        errs.append(float(np.max(np.abs(wp.psi(ue).ys - H.ys - eps * dv))))
    p = math.log2(errs[0] / errs[1]) if errs[1] > 0 else float("inf")
    man = RunManifest(cfg, "dpsi-check")
    man.append(_row("wpmap", "dpsi_richardson", "d_psi", f"{args.spec}; {args.direction}", p, abs(p - 2),
                    cfg.tol("richardson")))
    back = wp.d_psi_inv(u, wp.d_psi(u, v)).representative.values
    e = float(np.max(np.abs(back - wp.SobolevClass(v).canonical().representative.values)))
    man.append(_row("wpmap", "roundtrip_inverse_of_dpsi", "d_psi_inv", args.direction, e, e, cfg.tol("roundtrip")))
    return _emit(man, args, "dpsi-check")


def cmd_reich_check(args, cfg):
    f = _read_spec(args.spec, cfg, X=cfg["reich"]["X"], n=cfg["reich"]["n"])
    if not isinstance(f, fn.LineFunction):
        raise InvalidInputError("reich-check expects a line function")
    bf = rc.BoundaryFunction(f)
    grid = se.HalfPlaneGrid(**cfg["grid"])
    fld = rc.reich_H(bf, grid)
    r = rc.check_dbar_identity(bf, grid, field=fld)
    man = RunManifest(cfg, "reich-check")
    man.append(_row("reich", "dbar_identity", "check_dbar_identity", args.spec, r, r["sup"],
                    max(cfg.tol("dbar_identity_floor"), 20 * grid.hx ** 2)))
    a3 = rc.a3_energy(rc.reich_A3_grid(bf, grid))
    q = rc.qd_energy(fld, grid)
    const = cfg.tol("chain_constant")
    man.append(_row("reich", "chain", "qd_energy", args.spec, {"lhs": a3, "qd_energy": q},
                    a3 / q if q > 0 else 0.0, const, passed=a3 <= const * q + 1e-14))
    os.makedirs(args.out, exist_ok=True)
    fld.dbar.to_matrix(os.path.join(args.out, "dbar_abs.dat"))
    return _emit(man, args, "reich-check")


def cmd_verify(args, cfg):
    name = args.suite or cfg["suite"]
    man = RunManifest(cfg, f"verify {name}")
    man.extend(suites.run(name, cfg))
    code = _emit(man, args, "manifest")
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "manifest.csv"), "w") as fh:
        fh.write(man.rows_csv())
    failed = [r["check"] for r in man.rows if not r["pass"]]
    print(f"{len(man.rows) - len(failed)}/{len(man.rows)} rows pass")
    if failed:
        print("failing: " + ", ".join(failed))
    return code


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (all keys optional)")
    common.add_argument("--out", default="wpflow_out", help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default="json")

    p = argparse.ArgumentParser(prog="wpflow", description="Weil-Petersson flow numerics toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("norm", parents=[common], help="H^1/2, H^3/2 or BMO seminorm of a function")
    s.add_argument("spec", help="JSON literal, @file, or builtin name")
    s.add_argument("--which", choices=("h12", "h32", "bmo"), default="h12")
    s.set_defaults(func=cmd_norm)

    s = sub.add_parser("flow", parents=[common], help="integrate a time-dependent field")
    s.add_argument("field", help="field literal, function literal, @file, or builtin name")
    s.add_argument("--t-end", type=float, default=None)
    s.add_argument("--steps", type=int, default=None)
    s.add_argument("--knots", type=int, default=None, help="number of snapshot intervals (default: config)")
    s.add_argument("--oracle", choices=("logistic", "rotation", "none"), default="none")
    s.set_defaults(func=cmd_flow)

    s = sub.add_parser("extend", parents=[common], help="Beltrami coefficient and energy of the extension")
    s.add_argument("spec")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("dpsi-check", parents=[common], help="Richardson and round-trip checks of dPsi")
    s.add_argument("spec")
    s.add_argument("--direction", default="sine_window")
    s.set_defaults(func=cmd_dpsi_check)

    s = sub.add_parser("reich-check", parents=[common], help="dbar identity and chain inequality")
    s.add_argument("spec", nargs="?", default="gauss_bump")
    s.set_defaults(func=cmd_reich_check)

    s = sub.add_parser("verify", parents=[common], help="run verification suites")
    s.add_argument("--suite", choices=SUITES + ("all",), default=None)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = ConfigSpec.load(args.config)
        return args.func(args, cfg)
    except (InvalidInputError, OSError) as exc:
        print(f"wpflow: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except WPFlowError as exc:
        print(f"wpflow: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
