"""Compiled vs pure-Python kernel timings.

Usage::

    python benchmarks/bench_kernels.py            # full sizes
    python benchmarks/bench_kernels.py --quick    # small sizes, smoke run

Each case is timed for both backends (best of ``--repeat`` runs) and the
outputs are compared, so a speedup never hides a disagreement.
"""
import argparse
import time

import numpy as np

from wpflow import kernels, mollifier


def _best(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(quick):
    n_line = 2049 if quick else 16385
    n_shift = 1024 if quick else 8192
    x = np.linspace(-16, 16, n_line)
    v, s = np.exp(-x ** 2), -2 * x * np.exp(-x ** 2)
    dx = x[1] - x[0]
    xs = np.linspace(-8, 8, 65 if quick else 257)
    rng = np.random.default_rng(0)
    u = rng.normal(size=n_shift) + 1j * rng.normal(size=n_shift)
    phi, psi = mollifier.make_phi(), mollifier.make_psi()
    r, w = phi.weights(129)
    _, w2 = psi.weights(129)
    wr = np.vstack((w, w2))
    return {
        "shift_sums": lambda impl: kernels.shift_sums(u, True, impl=impl),
        "hermite_conv": lambda impl: kernels.hermite_conv(v, s, x[0], dx, xs, 0.5, r, wr, impl=impl),
        "line_integral_H": lambda impl: kernels.line_integral(v, s, x[0], dx, xs, 0.05, kernels.KIND_H, impl=impl),
        "line_integral_A3": lambda impl: kernels.line_integral(v, s, x[0], dx, xs, 0.05, kernels.KIND_A3, impl=impl),
    }


def run(quick=False, repeat=3):
    rows = []
    for name, fn in cases(quick).items():
        tp, op = _best(lambda: fn("python"), repeat)
        if kernels.compiled_available():
            tc, oc = _best(lambda: fn("c"), repeat)
            diff = float(np.max(np.abs(np.asarray(op) - np.asarray(oc)) / (1 + np.abs(np.asarray(op)))))
        else:
            tc, diff = float("nan"), float("nan")
        rows.append((name, tp, tc, tp / tc, diff))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args()
    print(f"{'kernel':<18}{'python [s]':>12}{'c [s]':>12}{'speedup':>10}{'max rel diff':>15}")
    for name, tp, tc, sp, diff in run(a.quick, a.repeat):
        print(f"{name:<18}{tp:>12.4f}{tc:>12.4f}{sp:>10.1f}{diff:>15.2e}")


if __name__ == "__main__":
    main()
