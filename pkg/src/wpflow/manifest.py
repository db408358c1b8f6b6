"""Run configuration and the append-only run manifest."""
from __future__ import annotations

import copy
import csv
import datetime as _dt
import hashlib
import io
import json
import math
import platform
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, SpecParseError

DEFAULT_TOLERANCES = {
    # functions
    "circle_cross": 1e-3,
    "circle_exact": 1e-12,
    "h32_exact": 1e-10,
    "gauss_closed_form": 1e-3,
    "dilation": 1e-2,
    "bmo_homogeneity": 1e-12,
    "jn_closed_form": 1e-8,
    "jn_stability": 2.0,
    "cayley_roundtrip": 1e-6,
    # mollifier
    "mollifier_moments": 1e-8,
    "comparability_bound": 1.5,
    "mean_deviation_stability": 1.5,
    # semmes
    "rho_identity": 1e-8,
    "wirtinger_gate": 1e-4,
    "energy_exponent": 0.1,
    "fubini": 1e-2,
    "fubini_ratio": 1e-2,
    "pointwise_stability": 1.5,
    # flow
    "logistic_oracle": 1e-6,
    "logderiv_closed_form": 1e-5,
    "logderiv_logistic": 1e-4,
    "logderiv_circle": 1e-3,
    "commutation": 1e-4,
    "semigroup": 1e-10,
    "normalization": 1e-10,
    "pivot": 1e-4,
    "probe_ratio": 0.1,
    # wpmap
    "psi_fixed_points": 1e-12,
    "quotient_invariance": 1e-10,
    "richardson": 0.1,
    "roundtrip": 1e-6,
    "linearity": 1e-12,
    "intertwining": 1e-4,
    "intertwining_self": 1e-6,
    "interpolation_linearity": 1e-12,
    "pullback_affine": 1e-3,
    "pullback_stability": 0.1,
    # reich
    "dbar_identity_floor": 1e-3,
    "reich_exact": 1e-8,
    "reich_fd_third": 1e-3,
    "qd_refinement": 0.02,
    "dirichlet": 0.03,
    "reproducing": 0.01,
    "chain_constant": 9.5,
    "area_formula": 0.02,
    "cayley_transfer": 1e-3,
}

DEFAULTS = {
    "grid": {"X": 8.0, "nx": 257, "y_min": 2.0 ** -7, "Y": 4.0, "ny": 128},
    "line": {"X": 16.0, "n": 2049, "bmo_depth": 10},
    "circle": {"M": 1024},
    "flow": {"steps": 1000, "particles": 512, "snapshots": 100},
    "reich": {"X": 16.0, "n": 2 ** 14 + 1},
    "semmes": {"delta": 0.3},
    "tolerances": DEFAULT_TOLERANCES,
    "suite": "all",
}

SUITES = ("functions", "mollifier", "semmes", "flow", "wpmap", "reich")

_INT_KEYS = {("grid", "nx"), ("grid", "ny"), ("line", "n"), ("line", "bmo_depth"), ("circle", "M"),
             ("flow", "steps"), ("flow", "particles"), ("flow", "snapshots"), ("reich", "n")}


@dataclass
class ConfigSpec:
    data: dict = field(default_factory=lambda: copy.deepcopy(DEFAULTS))

    @classmethod
    def from_dict(cls, user: dict | None):
        data = copy.deepcopy(DEFAULTS)
        for key, val in (user or {}).items():
            if key not in data:
                raise InvalidInputError(f"unknown config section {key!r}")
            if isinstance(data[key], dict):
                if not isinstance(val, dict):
                    raise InvalidInputError(f"config section {key!r} must be an object")
                for k, v in val.items():
                    if k not in data[key]:
                        raise InvalidInputError(f"unknown config key {key}.{k}")
                    data[key][k] = v
            else:
                data[key] = val
        cfg = cls(data)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path):
        if path is None:
            return cls.from_dict({})
        with open(path) as fh:
            text = fh.read()
        try:
            user = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid config JSON: {exc.msg}", exc.lineno, exc.colno) from exc
        if not isinstance(user, dict):
            raise SpecParseError("config must be a JSON object")
        return cls.from_dict(user)

    def validate(self):
        for sec, vals in self.data.items():
            if sec in ("tolerances",) or not isinstance(vals, dict):
                continue
            for k, v in vals.items():
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
                    raise InvalidInputError(f"config value {sec}.{k} must be a positive number")
                if (sec, k) in _INT_KEYS:
                    if int(v) != v:
                        raise InvalidInputError(f"config value {sec}.{k} must be an integer")
                    vals[k] = int(v)
                else:
                    vals[k] = float(v)
        for k, v in self.data["tolerances"].items():
            # zero is accepted: it forces the corresponding rows to fail
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v < 0:
                raise InvalidInputError(f"tolerance {k} must be a finite number >= 0")
            self.data["tolerances"][k] = float(v)
        if self.data["suite"] not in SUITES + ("all",):
            raise InvalidInputError(f"suite must be one of {SUITES + ('all',)}")

    def __getitem__(self, key):
        return self.data[key]

    def tol(self, name):
        return self.data["tolerances"][name]

    def canonical_json(self):
        return json.dumps(self.data, sort_keys=True, separators=(",", ":"))

    def hash(self):
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def _plain(v):
    """JSON-safe, deterministic conversion of numpy scalars/arrays."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        f = float(v)
        return f if math.isfinite(f) else repr(f)
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    return v


ROW_FIELDS = ("suite", "check", "operation", "input", "value", "residual", "tolerance", "pass")


class RunManifest:
    """Ordered check rows plus run metadata; rows are only ever appended."""

    def __init__(self, config: ConfigSpec, command="verify"):
        self.timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat()
        self.config = config
        self.command = command
        self._rows = []

    @property
    def rows(self):
        return tuple(self._rows)

    def append(self, row: dict):
        missing = [k for k in ROW_FIELDS if k not in row]
        if missing:
            raise InvalidInputError(f"manifest row lacks {missing}")
        self._rows.append(_plain(row))

    def extend(self, rows):
        for r in rows:
            self.append(r)

    @property
    def passed(self):
        return all(r["pass"] for r in self._rows)

    def environment(self):
        import scipy

        from . import kernels
        return {"python": platform.python_version(), "numpy": np.__version__, "scipy": scipy.__version__,
                "backend": kernels.backend_name(), "workers": kernels.n_workers()}

    def as_dict(self):
        return {"timestamp": self.timestamp, "command": self.command, "config_hash": self.config.hash(),
                "config": self.config.data, "environment": self.environment(),
                "all_pass": self.passed, "rows": list(self._rows)}

    def to_json(self):
        return json.dumps(_plain(self.as_dict()), sort_keys=True, indent=1)

    def rows_csv(self):
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(ROW_FIELDS)
        for r in self._rows:
            wr.writerow([json.dumps(r[k], sort_keys=True) if isinstance(r[k], (dict, list)) else r[k]
                         for k in ROW_FIELDS])
        return buf.getvalue()
