"""Verification battery: one function per module, each returning manifest rows."""
from __future__ import annotations

import math

import numpy as np

from . import flow as fl
from . import functions as fn
from . import mollifier as mo
from . import reich as rc
from . import semmes as se
from . import wpmap as wp
from .manifest import SUITES, ConfigSpec


def _row(suite, check, op, inp, value, residual, tol, passed=None):
    if passed is None:
        passed = bool(residual <= tol)
    return {"suite": suite, "check": check, "operation": op, "input": inp, "value": value,
            "residual": residual, "tolerance": tol, "pass": bool(passed)}


def _rel(a, b):
    return abs(a - b) / abs(b)


def _line(cfg, name, params=None):
    return fn.builtin(name, params, X=cfg["line"]["X"], n=cfg["line"]["n"])


def _grid(cfg, **over):
    g = dict(cfg["grid"])
    g.update(over)
    return se.HalfPlaneGrid(**g)


# --------------------------------------------------------------------------


def suite_functions(cfg: ConfigSpec):
    S = "functions"
    rows = []
    M = cfg["circle"]["M"]
    cos = fn.builtin("cos", {"M": M})
    f = fn.h12_circle(cos).value
    g = fn.h12_circle(cos, "gagliardo").value
    rows.append(_row(S, "circle_fourier_cos", "h12_circle", "cos", f, abs(f - 0.5), cfg.tol("circle_exact")))
    rows.append(_row(S, "circle_gagliardo_vs_fourier", "h12_circle", "cos", g, _rel(g, f), cfg.tol("circle_cross")))
    mix = fn.CircleFunction.from_callable(lambda t: np.cos(t) + np.sin(2 * t), M=M)
    v = fn.h12_circle(mix).value
    rows.append(_row(S, "circle_cos_sin2", "h12_circle", "cos+sin2", v, abs(v - 1.5), cfg.tol("circle_exact")))
    rng = np.random.default_rng(12345)
    c = rng.normal(size=8) + 1j * rng.normal(size=8)
    coeffs = np.concatenate((np.conj(c[::-1]), [0.3], c))
    band = fn.CircleFunction.from_coeffs(coeffs, M=M)
    a, b = fn.h12_circle(band).value, fn.h12_circle(band, "gagliardo").value
    rows.append(_row(S, "circle_bandlimited_cross", "h12_circle", "random N=8", b, _rel(b, a), cfg.tol("circle_cross")))
    for name, expect in (("sin", 0.5), ("sin+cos", 1.0)):
        lam = fn.CircleFunction.from_callable(
            (lambda t: np.sin(t)) if name == "sin" else (lambda t: np.sin(t) + np.cos(t)), M=M)
        v = fn.h32_norm(lam).value
        rows.append(_row(S, f"h32_{name}", "h32_norm", name, v, abs(v - expect), cfg.tol("h32_exact")))

    gauss = _line(cfg, "gauss_bump")
    v = fn.h12_line(gauss).value
    rows.append(_row(S, "line_gauss_closed_form", "h12_line", "gauss_bump", v, _rel(v, 1 / (2 * math.pi)),
                     cfg.tol("gauss_closed_form")))
    for lam in (0.5, 2.0):
        d = fn.LineFunction.from_callable(lambda x: np.exp(-(lam * x) ** 2), X=cfg["line"]["X"], n=cfg["line"]["n"])
        vd = fn.h12_line(d).value
        rows.append(_row(S, f"dilation_{lam}", "h12_line", "gauss_bump", vd, _rel(vd, v), cfg.tol("dilation")))
    const = _line(cfg, "constant", {"c": 3.0})
    rows.append(_row(S, "line_constant_zero", "h12_line", "constant", fn.h12_line(const).value,
                     fn.h12_line(const).value, cfg.tol("circle_exact")))

    depth = cfg["line"]["bmo_depth"]
    sw = _line(cfg, "sine_window")
    base = fn.bmo_norm(sw, depth).value
    scaled = fn.bmo_norm(sw.with_values(-2.5 * sw.values), depth).value
    rows.append(_row(S, "bmo_homogeneity", "bmo_norm", "sine_window, t=-2.5", scaled,
                     abs(scaled - 2.5 * base) / (2.5 * base), cfg.tol("bmo_homogeneity")))
    seq = [fn.bmo_norm(sw, d).value for d in range(1, depth + 1)]
    rows.append(_row(S, "bmo_depth_monotone", "bmo_norm", "sine_window", seq[-1],
                     max(0.0, -min(np.diff(seq))), 0.0))
    tri = fn.builtin("triangle", {"X": 2.0, "n": 129})
    dy, br = fn.bmo_norm(tri, 6).value, fn.bmo_bruteforce(tri)
    rows.append(_row(S, "bmo_triangle_vs_bruteforce", "bmo_norm", "triangle", {"dyadic": dy, "brute": br},
                     dy / br, 1.0, passed=bool(br / 2 <= dy <= br * (1 + 1e-12))))

    lin = fn.LineFunction.from_callable(lambda x: x, X=2.0, n=129, tail="affine")
    for p, expect in ((1, 0.25), (2, 1 / 12)):
        v = fn.jn_moment(lin, (0.0, 1.0), p)
        rows.append(_row(S, f"jn_moment_p{p}", "jn_moment", "x on [0,1]", v, abs(v - expect), cfg.tol("jn_closed_form")))
    cs = []
    for eps in (0.4, 0.2, 0.1, 0.05):
        u = _line(cfg, "gauss_bump", {"amp": eps})
        cs.append(fn.jn_moment(u, (-1.0, 1.0), variant="exp") / eps)
    rows.append(_row(S, "jn_exp_linear_in_eps", "jn_moment", "eps*gauss_bump on [-1,1]", cs,
                     max(cs) / min(cs), cfg.tol("jn_stability")))

    g = fn.tangential_field(fn.builtin("normalized_sin", {"M": M}))
    line = fn.cayley_pull(g, "vectorfield")
    back = fn.cayley_push(line, "vectorfield", M=M)
    th = g.thetas
    xs = fn.cayley_inverse_angle(np.where(th > 0, th, math.pi))
    inside = (th > 0) & (np.abs(xs) <= line.b)
    err = float(np.max(np.abs(back.samples[inside] - g.samples[inside])))
    rows.append(_row(S, "cayley_roundtrip", "cayley_pull", "normalized_sin field", err, err, cfg.tol("cayley_roundtrip")))
    rot = fn.CircleFunction(1j * np.exp(1j * th), is_real=False)
    rl = fn.cayley_pull(rot, "vectorfield")
    expect = np.real(1j * fn.cayley(rl.grid) / fn.cayley_prime(rl.grid))
    err = float(np.max(np.abs(rl.values - expect) / (1 + rl.grid ** 2)))
    rows.append(_row(S, "cayley_rotation_field", "cayley_pull", "i*zeta", err, err, cfg.tol("cayley_roundtrip")))
    return rows


def suite_mollifier(cfg: ConfigSpec):
    S = "mollifier"
    rows = []
    phi, psi = mo.make_phi(), mo.make_psi()
    al, be = mo.derive_alpha_beta(phi, psi)
    t = cfg.tol("mollifier_moments")
    rows.append(_row(S, "phi_mass", "make_phi", "", phi.moments[0], abs(phi.moments[0] - 1), t))
    rows.append(_row(S, "psi_first_moment", "make_psi", "", psi.moments[1], abs(psi.moments[1] - 1), t))
    rows.append(_row(S, "alpha_mass", "derive_alpha_beta", "", al.moments[0], abs(al.moments[0]), t))
    rows.append(_row(S, "beta_mass", "derive_alpha_beta", "", be.moments[0], abs(be.moments[0] - 1), t))
    lin = _line(cfg, "linear")
    v = mo.convolve_scaled(psi, 0.5, lin, 0.3)
    rows.append(_row(S, "psi_linear_moment", "convolve_scaled", "f(t)=t, y=0.5", v, abs(v + 0.5), t))
    g = _line(cfg, "gauss_bump")
    errs = [abs(mo.convolve_scaled(phi, y, g, 0.3) - math.exp(-0.09)) for y in (0.2, 0.1)]
    rows.append(_row(S, "phi_second_order", "convolve_scaled", "gauss_bump", errs, abs(errs[0] / errs[1] - 4), 0.5))

    xs = np.linspace(-4, 4, 64)
    ys = np.geomspace(2.0 ** -6, 2.0, 32)
    bound = cfg.tol("comparability_bound")
    for eps in (0.1, 0.2):
        u = _line(cfg, "gauss_bump", {"amp": eps})
        b = fn.bmo_norm(u, cfg["line"]["bmo_depth"]).value
        r = mo.comparability_ratios(u, xs, ys, phi)
        lo, hi = float(r.min()), float(r.max())
        rows.append(_row(S, f"comparability_eps{eps}", "convolve_scaled", f"{eps}*gauss_bump, bmo={b:.4g}",
                         {"min": lo, "max": hi, "bmo": b}, max(hi, 1 / lo), bound,
                         passed=bool(b <= 0.1 and 1 / bound <= lo and hi <= bound)))
    cs = []
    for eps in (0.025, 0.05, 0.1):
        u = _line(cfg, "gauss_bump", {"amp": eps})
        cs.append(mo.mean_deviation_constant(u, xs, ys[::4], phi))
    rows.append(_row(S, "mean_deviation_constant", "convolve_scaled", "eps*gauss_bump", cs,
                     max(cs) / min(cs), cfg.tol("mean_deviation_stability")))
    return rows


def suite_semmes(cfg: ConfigSpec):
    S = "semmes"
    rows = []
    grid = _grid(cfg)
    zero = _line(cfg, "zero")
    rho = se.rho_extension(zero, grid).values
    z = grid.xs[None, :] + 1j * grid.ys[:, None]
    e = float(np.max(np.abs(rho - z)))
    rows.append(_row(S, "rho_identity", "rho_extension", "u=0", e, e, cfg.tol("rho_identity")))
    cst = _line(cfg, "constant", {"c": 0.7})
    e = float(np.max(np.abs(se.rho_extension(cst, grid).values - z)))
    rows.append(_row(S, "rho_constant", "rho_extension", "u=0.7", e, e, cfg.tol("rho_identity")))

    u = _line(cfg, "gauss_bump", {"amp": 0.1})
    k = se.wirtinger(u, grid, "kernels")
    d = se.wirtinger(u, grid, "finite_difference")
    tol = max(cfg.tol("wirtinger_gate"), 10 * grid.hx ** 2)
    for i, name in enumerate(("dbar", "d")):
        err = float(np.max(np.abs(k[i].values - d[i].values)[1:-1, 1:-1]))
        rows.append(_row(S, f"wirtinger_gate_{name}", "wirtinger", "0.1*gauss_bump", err, err, tol))

    eps = np.array([0.025, 0.05, 0.1, 0.2])
    energies, sups, consts = [], [], []
    for ep in eps:
        uu = _line(cfg, "gauss_bump", {"amp": float(ep)})
        mu = se.beltrami(uu, grid, delta=cfg["semmes"]["delta"])
        rep = se.wp_energy(mu)
        energies.append(rep.value)
        sups.append(rep.sup_mu)
        consts.append(se.pointwise_bound_constant(uu, mu))
    slope = float(np.polyfit(np.log(eps), np.log(energies), 1)[0])
    rows.append(_row(S, "energy_exponent", "wp_energy", "eps*gauss_bump", slope, abs(slope - 2),
                     cfg.tol("energy_exponent")))
    rows.append(_row(S, "sup_mu_below_one", "beltrami", "eps*gauss_bump", sups, max(sups), 1.0,
                     passed=max(sups) < 1))
    lin = float(np.polyfit(eps, sups, 1)[0])
    rows.append(_row(S, "sup_mu_linear", "beltrami", "eps*gauss_bump", lin, max(sups) / eps[-1] / lin - 1, 0.05))
    rows.append(_row(S, "pointwise_bound_constant", "beltrami", "eps*gauss_bump", consts,
                     max(consts) / min(consts), cfg.tol("pointwise_stability")))

    ratios = []
    for name in ("gauss_bump", "sine_window"):
        uu = _line(cfg, name)
        lhs, rhs = se.fubini_check(uu)
        rows.append(_row(S, f"fubini_{name}", "fubini_check", name, {"lhs": lhs, "rhs": rhs}, _rel(lhs, rhs),
                         cfg.tol("fubini")))
        ratios.append(lhs / fn.h12_line(uu).value)
    rows.append(_row(S, "fubini_ratio_constant", "fubini_check", "gauss_bump, sine_window", ratios,
                     _rel(ratios[0], ratios[1]), cfg.tol("fubini_ratio")))

    # energy increments shrink as Y grows
    uu = _line(cfg, "gauss_bump", {"amp": 0.1})
    vals = []
    for Y in (1.0, 2.0, 4.0):
        ny = int(round(cfg["grid"]["ny"] * math.log(Y / grid.y_min) / math.log(grid.Y / grid.y_min)))
        gY = _grid(cfg, Y=Y, ny=max(ny, 8))
        vals.append(se.wp_energy(se.beltrami(uu, gY)).value)
    inc = np.diff(vals)
    rows.append(_row(S, "energy_Y_tail", "wp_energy", "0.1*gauss_bump, Y=1,2,4", vals, float(inc[1] / inc[0]), 1.0,
                     passed=bool(inc[0] > 0 and inc[1] >= 0 and inc[1] < inc[0])))
    return rows


def _logistic_oracle(x, t):
    return x * math.exp(t) / (1 + x * (math.exp(t) - 1))


def suite_flow(cfg: ConfigSpec):
    S = "flow"
    rows = []
    steps = cfg["flow"]["steps"]
    P = cfg["flow"]["particles"]
    nsnap = cfg["flow"]["snapshots"]
    F = fl.TimeDependentField.autonomous(_line(cfg, "logistic"))
    parts = np.linspace(0.0, 1.0, P + 1)
    snaps = np.linspace(0.0, 1.0, nsnap + 1)
    curve = fl.integrate_flow(F, steps, parts, snaps)
    x = curve.maps[-1].xs
    err = float(np.max(np.abs(curve.maps[-1].ys - _logistic_oracle(x, 1.0))))
    rows.append(_row(S, "logistic_oracle", "integrate_flow", "logistic", err, err, cfg.tol("logistic_oracle")))
    errs = []
    for n in (8, 16):
        c = fl.integrate_flow(F, n, parts, [0.0, 1.0])
        errs.append(float(np.max(np.abs(c.maps[-1].ys - _logistic_oracle(x, 1.0)))))
    fac = errs[0] / errs[1]
    rows.append(_row(S, "self_convergence", "integrate_flow", "logistic, 8 vs 16 steps", fac, fac, 20.0,
                     passed=bool(12 <= fac <= 20)))
    L = fl.flow_log_derivative(curve)[-1]
    e = float(np.max(np.abs(L.values - (1 - 2 * np.log(1 + x * (math.e - 1))))))
    rows.append(_row(S, "logderiv_closed_form", "flow_log_derivative", "logistic", e, e, cfg.tol("logderiv_closed_form")))
    r = fl.check_logderiv_ode(curve, F)
    rows.append(_row(S, "logderiv_ode_logistic", "check_logderiv_ode", "logistic", r, r["sup"],
                     cfg.tol("logderiv_logistic")))
    ends = max(float(np.max(np.abs(m.ys[[0, -1]] - [0.0, 1.0]))) for m in curve.maps)
    rows.append(_row(S, "normalization_preserved", "integrate_flow", "logistic", ends, ends, cfg.tol("normalization")))
    half = fl.integrate_flow(F, steps // 2, parts, [0.0, 0.5], t_end=0.5)
    rest = fl.integrate_flow(F, steps // 2, half.maps[-1].ys, [0.5, 1.0], t_start=0.5, t_end=1.0)
    e = float(np.max(np.abs(rest.maps[-1].ys - curve.maps[-1].ys)))
    rows.append(_row(S, "semigroup", "integrate_flow", "logistic, [0,.5]+[.5,1]", e, e, cfg.tol("semigroup")))

    pivot = fl.integrate_flow(F, steps, parts, np.linspace(0.0, 1.0, 5))
    e = max(float(np.max(np.abs(wp.psi(m.log_derivative())(m.xs) - m.ys))) for m in pivot.maps)
    rows.append(_row(S, "pivot_psi_logderiv", "integrate_flow", "logistic, 5 knots", e, e, cfg.tol("pivot")))
    probe = fl.smoothness_probe(curve)
    dev = max(abs(q - 1) for q in probe["ratios"])
    rows.append(_row(S, "smoothness_probe", "smoothness_probe", "logistic",
                     {"ratios": probe["ratios"], "max_jump": probe["max_jump"]}, dev, cfg.tol("probe_ratio")))

    M = cfg["circle"]["M"]
    C = fl.TimeDependentField.autonomous(fn.builtin("sin", {"M": M}))
    cc = fl.integrate_flow(C, steps, fl.default_particles("circle", P), snaps)
    r = fl.check_logderiv_ode(cc, C)
    rows.append(_row(S, "logderiv_ode_circle_sin", "check_logderiv_ode", "sin", r, r["sup"], cfg.tol("logderiv_circle")))
    per = max(float(m(m.xs[0] + 2 * math.pi) - m.ys[0] - 2 * math.pi) for m in cc.maps)
    rows.append(_row(S, "circle_increment_2pi", "integrate_flow", "sin", per, abs(per), 1e-10))
    rot = fl.TimeDependentField.autonomous(fn.builtin("constant_circle", {"M": M}))
    rc_ = fl.integrate_flow(rot, 10, fl.default_particles("circle", 16), [0.0, 1.0])
    e = float(np.max(np.abs(rc_.maps[-1].ys - rc_.maps[-1].xs - 1.0)))
    rows.append(_row(S, "rigid_rotation", "integrate_flow", "lambda=1", e, e, 1e-12))

    N = fl.TimeDependentField.autonomous(fn.builtin("normalized_sin", {"M": M}), normalized=True)
    Lf = fl.conjugate_circle_to_line(N)
    xp = np.linspace(-2.0, 3.0, P + 1)
    hl = fl.integrate_flow(Lf, steps, xp, snaps)
    r = fl.check_logderiv_ode(hl, Lf)
    rows.append(_row(S, "logderiv_ode_conjugated", "check_logderiv_ode", "normalized_sin via Cayley", r, r["sup"],
                     cfg.tol("logderiv_circle")))
    gc = fl.integrate_flow(N, steps, fn.cayley_angle(xp), [0.0, 0.5, 1.0])
    e = max(float(np.max(np.abs(fn.cayley_inverse_angle(gc.maps[k].ys) - hl.maps[j].ys)))
            for k, j in ((1, nsnap // 2), (2, nsnap)))
    rows.append(_row(S, "conjugation_commutes", "conjugate_circle_to_line", "normalized_sin", e, e,
                     cfg.tol("commutation")))
    return rows


def suite_wpmap(cfg: ConfigSpec):
    S = "wpmap"
    rows = []
    u = _line(cfg, "gauss_bump", {"amp": 0.5})
    v = _line(cfg, "sine_window")
    H = wp.psi(u)
    e = float(np.max(np.abs(H(np.array([0.0, 1.0])) - [0.0, 1.0])))
    rows.append(_row(S, "psi_fixes_0_1", "psi", "0.5*gauss_bump", e, e, cfg.tol("psi_fixed_points")))
    e = float(np.max(np.abs(wp.psi(u.with_values(u.values + 5.0, slopes=u.slopes)).ys - H.ys)))
    rows.append(_row(S, "quotient_invariance", "psi", "u+5", e, e, cfg.tol("quotient_invariance")))
    errs = []
    for eps in (1e-2, 5e-3):
        ue = u.with_values(u.values + eps * v.values, slopes=u.slopes + eps * v.slopes)
        errs.append(float(np.max(np.abs(wp.psi(ue).ys - H.ys - eps * wp.d_psi(u, v).representative.values))))
    p = math.log2(errs[0] / errs[1])
    rows.append(_row(S, "dpsi_richardson", "d_psi", "u=0.5 gauss, v=sine_window", p, abs(p - 2), cfg.tol("richardson")))
    tri = _line(cfg, "triangle")
    a = wp.d_psi(u, v.with_values(2 * v.values - 3 * tri.values, slopes=2 * v.slopes - 3 * tri.slopes))
    b = 2 * wp.d_psi(u, v).representative.values - 3 * wp.d_psi(u, tri).representative.values
    e = float(np.max(np.abs(a.representative.values - b)))
    rows.append(_row(S, "dpsi_linearity", "d_psi", "2v-3w", e, e, cfg.tol("linearity")))
    w = wp.d_psi(u, tri).representative
    e = float(np.max(np.abs(wp.d_psi(u, wp.d_psi_inv(u, w)).representative.values - w.values)))
    rows.append(_row(S, "roundtrip_dpsi_of_inverse", "d_psi_inv", "w=dPsi(triangle)", e, e, cfg.tol("roundtrip")))
    e = float(np.max(np.abs(wp.d_psi_inv(u, wp.d_psi(u, v)).representative.values
                            - wp.SobolevClass(v).canonical().representative.values)))
    rows.append(_row(S, "roundtrip_inverse_of_dpsi", "d_psi_inv", "v=sine_window", e, e, cfg.tol("roundtrip")))

    u0 = _line(cfg, "gauss_bump")
    h0 = wp.psi(u0)
    r = wp.translations(h0, v)
    rows.append(_row(S, "intertwining_generic", "translations", "u0=gauss_bump, u=sine_window", r, r["sup"],
                     cfg.tol("intertwining")))
    r = wp.translations(h0, u0)
    rows.append(_row(S, "intertwining_self", "translations", "u=u0", r, r["sup"], cfg.tol("intertwining_self")))

    full = wp.interpolation_family(H, 1.0)
    half = wp.interpolation_family(H, 0.5)
    base = fn.h12_line(H.log_derivative()).norm
    lin = fn.h12_line(half.log_derivative()).norm
    e = max(abs(lin - 0.5 * base) / base, float(np.max(np.abs(full.ys - H.ys))))
    rows.append(_row(S, "interpolation_family", "interpolation_family", "t=0.5, 1", {"ratio": lin / base}, e,
                     cfg.tol("interpolation_linearity")))

    x = u.grid
    aff = fn.IncreasingMap(x, 2 * x + 0.3, np.full_like(x, 2.0))
    fam = [_line(cfg, "gauss_bump", {"width": 3.0}), _line(cfg, "sine_window", {"half_width": 6.0})]
    r = wp.pullback_probe(aff, fam)
    e = max(abs(q - 1) for q in r["ratios"])
    rows.append(_row(S, "pullback_affine", "pullback_probe", "x->2x+0.3", r["ratios"], e, cfg.tol("pullback_affine")))
    hp = wp.psi(u0)
    small = [_line(cfg, "gauss_bump", {"center": c}) for c in (-1.0, 0.0, 1.0)]
    large = small + [_line(cfg, "gauss_bump", {"center": c, "width": w}) for c in (-2.0, 2.0) for w in (0.5, 2.0)]
    m1, m2 = wp.pullback_probe(hp, small)["max_ratio"], wp.pullback_probe(hp, large)["max_ratio"]
    rows.append(_row(S, "pullback_stability", "pullback_probe", "Psi(gauss_bump)", [m1, m2], _rel(m2, m1),
                     cfg.tol("pullback_stability")))
    return rows


def suite_reich(cfg: ConfigSpec):
    S = "reich"
    rows = []
    X, n = cfg["reich"]["X"], cfg["reich"]["n"]
    grid = _grid(cfg)

    def bf(name, params=None):
        return rc.BoundaryFunction.builtin(name, params, X=X, n=n)

    g = bf("gauss_bump")
    fld = rc.reich_H(g, grid)
    a3 = rc.reich_A3_grid(g, grid)
    r = rc.check_dbar_identity(g, grid, field=fld)
    tol = max(cfg.tol("dbar_identity_floor"), 20 * grid.hx ** 2)
    rows.append(_row(S, "dbar_identity_gauss", "check_dbar_identity", "gauss_bump", r, r["sup"], tol))
    for name, params in (("constant", {"c": 2.0}), ("linear", {})):
        b = bf(name, params)
        r = rc.check_dbar_identity(b, grid)
        rows.append(_row(S, f"dbar_identity_{name}", "check_dbar_identity", name, r, r["sup"], cfg.tol("reich_exact")))
        zz = np.array([0.3 + 0.7j, -1.0 + 0.1j, 2.0 + 3.0j])
        h = rc.reich_H_at(b, zz)
        expect = 2.0 + 0 * zz if name == "constant" else zz
        e = float(np.max(np.abs(h - expect)))
        rows.append(_row(S, f"H_reproduces_{name}", "reich_H", name, e, e, cfg.tol("reich_exact")))
        e = float(np.max(np.abs(rc.reich_A3(b, zz))))
        rows.append(_row(S, f"A3_vanishes_{name}", "reich_A3", name, e, e, cfg.tol("reich_exact")))

    z0, hs = 0.3 + 0.7j, 1e-2
    A = rc.reich_A(g, z0 + hs * np.array([2, 1, -1, -2]))
    fd3 = (A[0] - 2 * A[1] + 2 * A[2] - A[3]) / (2 * hs ** 3)
    a3z = complex(rc.reich_A3(g, z0))
    e = abs(fd3 - a3z)
    rows.append(_row(S, "A3_vs_third_difference", "reich_A3", "gauss_bump, z=0.3+0.7i", e, e, cfg.tol("reich_fd_third")))
    errs = []
    for eps in (0.04, 0.02):
        av = rc.reich_A(g, np.array([0.3 + 1j * eps]))[0]
        errs.append(abs(av.real - math.exp(-0.09)))
    rows.append(_row(S, "A_boundary_recovery", "reich_A", "gauss_bump, x=0.3", errs, abs(errs[0] / errs[1] - 2), 0.5))

    q_fine = rc.qd_energy(fld, grid)
    coarse = _grid(cfg, nx=(grid.nx - 1) // 2 + 1, ny=grid.ny // 2)
    q_coarse = rc.qd_energy(rc.reich_H(g, coarse), coarse)
    rows.append(_row(S, "qd_energy_refinement", "qd_energy", "gauss_bump", [q_coarse, q_fine],
                     _rel(q_coarse, q_fine), cfg.tol("qd_refinement")))

    const = cfg.tol("chain_constant")
    lhs = rc.a3_energy(a3)
    rows.append(_row(S, "chain_gauss_bump", "qd_energy", "gauss_bump", {"lhs": lhs, "qd": q_fine},
                     lhs / q_fine, const))
    for label, name, params in (("gauss_shifted", "gauss_bump", {"center": 1.0, "width": 0.7}),
                                ("sine_window", "sine_window", {})):
        r = rc.chain_check(bf(name, params), grid, constant=const)
        rows.append(_row(S, f"chain_{label}", "qd_energy", f"{name} {params}", r, r["ratio"], const))

    lhs, rhs = rc.dirichlet_equiv(2)
    rows.append(_row(S, "dirichlet_lhs", "dirichlet_equiv", "k=2", lhs, _rel(lhs, math.pi / 4), cfg.tol("dirichlet")))
    rows.append(_row(S, "dirichlet_rhs", "dirichlet_equiv", "k=2", rhs, _rel(rhs, math.pi / 8), cfg.tol("dirichlet")))
    for k in (3, 4):
        l_, r_ = rc.dirichlet_equiv(k)
        rows.append(_row(S, f"dirichlet_ratio_k{k}", "dirichlet_equiv", f"k={k}", l_ / r_, l_ / r_, 10.0,
                         passed=bool(0.1 <= l_ / r_ <= 10)))
    d, rep = rc.reproducing_check(2, 2j)
    rows.append(_row(S, "reproducing_formula", "reproducing_check", "k=2, z=2i", {"direct": d, "reproduced": rep},
                     abs(rep - d) / abs(d), cfg.tol("reproducing")))
    l8, r8 = rc.check_area_formula(g, 1j)
    rows.append(_row(S, "a3_area_formula", "check_area_formula", "gauss_bump, z=i", {"lhs": l8, "rhs": r8},
                     abs(l8 - r8) / abs(l8), cfg.tol("area_formula")))
    gfield = fn.tangential_field(fn.builtin("normalized_sin", {"M": cfg["circle"]["M"]}))
    r = rc.cayley_transfer_check(gfield)
    rows.append(_row(S, "cayley_transfer", "cayley_transfer_check", "normalized_sin", r, r["sup"],
                     cfg.tol("cayley_transfer")))
    return rows


SUITE_FUNCS = {
    "functions": suite_functions,
    "mollifier": suite_mollifier,
    "semmes": suite_semmes,
    "flow": suite_flow,
    "wpmap": suite_wpmap,
    "reich": suite_reich,
}


def run(name, cfg: ConfigSpec):
    names = SUITES if name == "all" else (name,)
    rows = []
    for s in names:
        rows.extend(SUITE_FUNCS[s](cfg))
    return rows
