"""Flows of time-dependent vector fields on the circle and the line.

Circle fields are real angular speeds a(t, theta) (the complex field is
i w a); line fields are real functions omega(t, x). Particles follow
d eta / dt = field(t, eta) under classical RK4.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .errors import (InvalidInputError, MonotonicityError, OutOfDomainError,
                     SpecParseError, StepSizeError)
from .functions import (TWO_PI, CircleFunction, IncreasingMap, LineFunction,
                        angular_speed, cayley_angle, h12_circle, h12_line,
                        parse_function)

NORMALIZATION_ANGLES = (0.0, math.pi, 1.5 * math.pi)  # images of infinity, 0 and 1


class _Spatial:
    """Fast value/derivative evaluation of one knot function."""

    def __init__(self, f):
        self.f = f
        if isinstance(f, CircleFunction):
            th = np.append(f.thetas, TWO_PI)
            self.spl = CubicSpline(th, np.append(f.samples, f.samples[0]), bc_type="periodic")
            self.circle = True
        else:
            self.spl = CubicHermiteSpline(f.grid, f.values, f.slopes, extrapolate=False)
            self.circle = False
            self.lo, self.hi = f.a, f.b

    def __call__(self, x, nu=0):
        if self.circle:
            return self.spl(np.mod(x, TWO_PI), nu)
        return self.spl(x, nu)


class TimeDependentField:
    """Knot functions on [0, T] with linear or cubic interpolation in time.

    Parameters
    ----------
    knots : array
        Strictly increasing, starting at 0.
    fields : list of CircleFunction (real angular speeds) or LineFunction
    interp : {'linear', 'cubic'}
    normalized : bool
        For circle fields, require vanishing at the three normalization angles.
    """

    def __init__(self, knots, fields, interp="linear", normalized=False, tol=1e-8):
        knots = np.asarray(knots, dtype=float)
        if knots.ndim != 1 or knots.size < 2 or knots[0] != 0.0 or np.any(np.diff(knots) <= 0):
            raise InvalidInputError("time knots must be strictly increasing and start at 0")
        if len(fields) != knots.size:
            raise InvalidInputError("one field per time knot is required")
        if interp not in ("linear", "cubic"):
            raise InvalidInputError("interp must be 'linear' or 'cubic'")
        fields = list(fields)
        kinds = {type(f) for f in fields}
        if len(kinds) != 1 or not kinds <= {CircleFunction, LineFunction}:
            raise InvalidInputError("fields must all be CircleFunction or all LineFunction")
        self.domain = "circle" if isinstance(fields[0], CircleFunction) else "line"
        if self.domain == "circle":
            fields = [f if f.is_real else angular_speed(f) for f in fields]
        else:
            if any(f.is_complex for f in fields):
                raise InvalidInputError("line fields must be real")
            for f in fields:
                scale = max(1.0, float(np.max(np.abs(f.values))))
                if abs(f(np.array([0.0]))[0]) > tol * scale or abs(f(np.array([1.0]))[0]) > tol * scale:
                    raise InvalidInputError("line fields must vanish at 0 and 1")
        if normalized and self.domain == "circle":
            for f in fields:
                scale = max(1.0, float(np.max(np.abs(f.samples))))
                if np.max(np.abs(f(np.array(NORMALIZATION_ANGLES)))) > tol * scale:
                    raise InvalidInputError("circle field violates the three-point normalization")
        self.knots = knots
        self.fields = fields
        self.interp = interp
        self.normalized = bool(normalized)
        self._sp = [_Spatial(f) for f in fields]

    @property
    def T(self):
        return float(self.knots[-1])

    @classmethod
    def autonomous(cls, f, T=1.0, **kw):
        return cls([0.0, T], [f, f], **kw)

    def _weights(self, t):
        k = self.knots
        if t < k[0] - 1e-12 or t > k[-1] + 1e-12:
            raise OutOfDomainError(f"time {t} outside [0, {k[-1]}]")
        if self.interp == "linear" or k.size < 3:
            j = int(np.clip(np.searchsorted(k, t, side="right") - 1, 0, k.size - 2))
            s = (t - k[j]) / (k[j + 1] - k[j])
            return [(j, 1.0 - s), (j + 1, s)]
        # cubic: Lagrange weights through four neighbouring knots
        j = int(np.clip(np.searchsorted(k, t, side="right") - 2, 0, k.size - 4))
        idx = range(j, min(j + 4, k.size))
        out = []
        for a in idx:
            w = 1.0
            for b in idx:
                if b != a:
                    w *= (t - k[b]) / (k[a] - k[b])
            out.append((a, w))
        return out

    def __call__(self, t, x, nu=0):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for j, w in self._weights(t):
            if w != 0.0:
                out = out + w * self._sp[j](x, nu)
        return out

    def derivative(self, t, x):
        return self(t, x, nu=1)

    def in_window(self, x):
        if self.domain == "circle":
            return True
        sp = self._sp[0]
        return bool(np.all((x >= sp.lo) & (x <= sp.hi)))


@dataclass
class FlowCurve:
    """Snapshots of a flow: ``maps[k]`` sends initial positions to positions at ``times[k]``."""

    times: np.ndarray
    maps: list
    domain: str
    meta: dict = field(default_factory=dict)

    def to_csv(self, path):
        logs = flow_log_derivative(self)
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["t", "x", "h", "dh", "log_dh"])
            for t, m, lg in zip(self.times, self.maps, logs):
                vals = lg.samples if isinstance(lg, CircleFunction) else lg.values
                for x, y, d, l in zip(m.xs, m.ys, m.dys, vals):
                    wr.writerow([repr(float(t)), repr(float(x)), repr(float(y)), repr(float(d)), repr(float(l))])


def default_particles(domain, n=512):
    if domain == "circle":
        return TWO_PI * np.arange(n) / n
    return np.linspace(0.0, 1.0, n + 1)


def _snapshot(x0, y, domain):
    if domain == "circle":
        # g(theta) - theta is periodic: spline it periodically
        per = y - x0
        th = np.append(x0, x0[0] + TWO_PI)
        spl = CubicSpline(th, np.append(per, per[0]), bc_type="periodic")
        dy = 1.0 + spl(x0, 1)
        if not (y[-1] - y[0] < TWO_PI):
            raise StepSizeError("circle snapshot lost monotonicity; refine the step size")
    else:
        dy = CubicSpline(x0, y)(x0, 1)
    if np.any(np.diff(y) <= 0) or np.any(dy <= 0):
        raise StepSizeError("snapshot is not strictly increasing; refine the step size")
    return IncreasingMap(x0, y, dy, domain=domain)


def integrate_flow(fld: TimeDependentField, n_steps, particles=None, snapshot_times=None,
                   t_start=0.0, t_end=None) -> FlowCurve:
    """RK4 integration of each particle from ``t_start`` to ``t_end``.

    ``n_steps`` uniform steps span [t_start, t_end]; every snapshot time must
    fall on a step boundary. Snapshot k maps the starting positions to the
    positions at ``snapshot_times[k]``.
    """
    n_steps = int(n_steps)
    if n_steps < 1:
        raise InvalidInputError("n_steps must be >= 1")
    t_end = fld.T if t_end is None else float(t_end)
    if not t_end > t_start:
        raise InvalidInputError("t_end must exceed t_start")
    x0 = default_particles(fld.domain) if particles is None else np.asarray(particles, dtype=float)
    if x0.ndim != 1 or x0.size < 4 or np.any(np.diff(x0) <= 0):
        raise InvalidInputError("particles must be strictly increasing (at least 4)")
    if not fld.in_window(x0):
        raise OutOfDomainError("particles start outside the field window")
    dt = (t_end - t_start) / n_steps
    if snapshot_times is None:
        snapshot_times = [t for t in fld.knots if t_start - 1e-12 <= t <= t_end + 1e-12]
        if not snapshot_times or snapshot_times[0] > t_start:
            snapshot_times = [t_start] + list(snapshot_times)
    steps_at = {}
    for t in snapshot_times:
        k = (t - t_start) / dt
        if abs(k - round(k)) > 1e-7 or round(k) < 0 or round(k) > n_steps:
            raise InvalidInputError(f"snapshot time {t} is not a step boundary")
        steps_at[int(round(k))] = float(t)
    eta = x0.copy()
    maps, times = [], []
    if 0 in steps_at:
        maps.append(_snapshot(x0, eta.copy(), fld.domain))
        times.append(steps_at[0])
    for k in range(n_steps):
        t = t_start + k * dt
        k1 = fld(t, eta)
        k2 = fld(t + dt / 2, eta + dt / 2 * k1)
        k3 = fld(t + dt / 2, eta + dt / 2 * k2)
        k4 = fld(t + dt, eta + dt * k3)
        eta = eta + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(eta)) or not fld.in_window(eta):
            raise OutOfDomainError("a particle left the field window")
        if k + 1 in steps_at:
            maps.append(_snapshot(x0, eta.copy(), fld.domain))
            times.append(steps_at[k + 1])
    return FlowCurve(np.array(times), maps, fld.domain,
                     {"step": dt, "order": 4, "n_steps": n_steps, "t_start": t_start, "t_end": t_end})


def flow_log_derivative(curve: FlowCurve):
    """log h'(t, .) per snapshot (CircleFunction or LineFunction on the particles)."""
    out = []
    for m in curve.maps:
        if np.any(m.dys <= 0):
            raise MonotonicityError("nonpositive derivative in a snapshot")
        if curve.domain == "circle":
            out.append(CircleFunction(np.log(m.dys)))
        else:
            out.append(m.log_derivative())
    return out


def check_logderiv_ode(curve: FlowCurve, fld: TimeDependentField):
    """Residual of d/dt log h' = field'(t, h) at interior snapshots (centred differences)."""
    if len(curve.times) < 3:
        raise InvalidInputError("need at least 3 snapshots")
    logs = [np.log(m.dys) for m in curve.maps]
    res = []
    for k in range(1, len(curve.times) - 1):
        lhs = (logs[k + 1] - logs[k - 1]) / (curve.times[k + 1] - curve.times[k - 1])
        rhs = fld.derivative(curve.times[k], curve.maps[k].ys)
        res.append(np.abs(lhs - rhs))
    res = np.array(res)
    return {"sup": float(res.max()), "mean": float(res.mean()), "knots": int(res.shape[0])}


def conjugate_circle_to_line(fld: TimeDependentField, X=16.0, n=2049) -> TimeDependentField:
    """Line field omega(t, x) = a(t, theta(x)) (1 + x^2) / 2 of a normalized circle field."""
    if fld.domain != "circle":
        raise InvalidInputError("conjugation expects a circle field")
    if not fld.normalized:
        # validate the normalization even if the caller did not flag it
        TimeDependentField(fld.knots, fld.fields, fld.interp, normalized=True)
    xs = np.linspace(-X, X, n)
    th = cayley_angle(xs)
    out = []
    for f in fld.fields:
        sp = _Spatial(f)
        vals = sp(th) * (1.0 + xs * xs) / 2.0
        slopes = sp(th, 1) + sp(th) * xs  # theta'(x) = 2 / (1 + x^2)
        out.append(LineFunction(-X, 2 * X / (n - 1), vals, tail="none", slopes=slopes, decay_exponent=1.0))
    return TimeDependentField(fld.knots, out, fld.interp)


def smoothness_probe(curve: FlowCurve, base=None, refinements=(4, 2, 1)):
    """Seminorms of log h'(t, .) per snapshot and difference-quotient ratios.

    Line snapshots use the seminorm over the particle interval. Quotients
    ``||L(t+D) - L(t)|| / D`` use snapshot offsets ``refinements`` from
    snapshot ``base`` (default: the first); snapshots must be uniform in time.
    """
    if len(curve.times) < 3:
        raise InvalidInputError("need at least 3 snapshots")
    logs = flow_log_derivative(curve)

    def semi(f):
        return h12_circle(f).norm if isinstance(f, CircleFunction) else h12_line(f).norm

    def diff(f, g):
        if isinstance(f, CircleFunction):
            return CircleFunction(f.samples - g.samples)
        return f.with_values(f.values - g.values, slopes=f.slopes - g.slopes)

    seminorms = [semi(f) for f in logs]
    jumps = np.abs(np.diff(seminorms))
    base = 0 if base is None else int(base)
    quotients = []
    for r in refinements:
        if base + r >= len(logs):
            continue
        D = curve.times[base + r] - curve.times[base]
        quotients.append(semi(diff(logs[base + r], logs[base])) / D)
    ratios = [quotients[i + 1] / quotients[i] for i in range(len(quotients) - 1) if quotients[i] > 0]
    return {"seminorms": seminorms, "max_jump": float(jumps.max()) if jumps.size else 0.0,
            "quotients": quotients, "ratios": ratios}


def parse_field(spec, **kw) -> TimeDependentField:
    """``{"time_knots": [...], "fields": [literal, ...], "interp": "linear", "normalized": false}``."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(spec, dict) or "time_knots" not in spec or "fields" not in spec:
        raise SpecParseError("field literal needs 'time_knots' and 'fields'")
    knots, fields = spec["time_knots"], spec["fields"]
    if not isinstance(knots, list) or not isinstance(fields, list):
        raise SpecParseError("'time_knots' and 'fields' must be lists")
    fs = [parse_function(f) for f in fields]
    return TimeDependentField(knots, fs, spec.get("interp", "linear"), bool(spec.get("normalized", False)), **kw)
