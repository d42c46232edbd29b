"""Compare the compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N] [--json]``.
Each kernel is timed on the same inputs for both backends and the best of
``--repeat`` runs is reported, together with the speedup and the largest
relative disagreement between the two results.
"""

from __future__ import annotations

import argparse
import json
import sys
import timeit
from dataclasses import asdict, dataclass

import numpy as np

from meanbounds._kernels import _fallback

try:
    from meanbounds._kernels import _core
except ImportError:
    _core = None


@dataclass
class Row:
    kernel: str
    size: int
    python_s: float
    compiled_s: float | None
    speedup: float | None
    max_rel_diff: float | None


def _cases(rng: np.random.Generator):
    xs, ys = 10.0 ** rng.uniform(-3, 3, (2, 20_000))
    re, im = rng.normal(size=(2, 256))
    t = rng.normal(scale=3.0, size=50_000)
    n = 801
    w = rng.uniform(0.1, 1.0, n)
    g = rng.uniform(0.5, 2.0, n)
    tt = rng.normal(scale=0.2, size=n)
    u, v = g * np.exp(tt), g * np.exp(-tt)
    return [
        ("power_mean_many", xs.size, lambda m: m.power_mean_many(2.5, xs, ys)),
        ("rado_mean_many", xs.size, lambda m: m.rado_mean_many(0.0, xs, ys)),
        ("dft_direct", re.size, lambda m: np.concatenate(m.dft_direct(re, im))),
        ("log_ratio_step", t.size, lambda m: m.log_ratio_step(1.0, t)),
        ("pair_gap", n, lambda m: m.pair_gap(w, g, tt, u, v)),
        ("theta3_sum", 1, lambda m: m.theta3_sum(0.0, 0.999, 1e-17)),
    ]


def _best(fn, repeat: int) -> float:
    number = 1
    # grow the loop count until one batch takes at least 20 ms
    while timeit.timeit(fn, number=number) < 0.02 and number < 10_000:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def run(repeat: int = 5, seed: int = 0) -> list:
    rows = []
    for name, size, call in _cases(np.random.default_rng(seed)):
        py = _best(lambda: call(_fallback), repeat)
        if _core is None:
            rows.append(Row(name, size, py, None, None, None))
            continue
        cc = _best(lambda: call(_core), repeat)
        a = np.atleast_1d(np.asarray(call(_fallback), dtype=float))
        b = np.atleast_1d(np.asarray(call(_core), dtype=float))
        scale = np.maximum(np.abs(a), np.finfo(float).tiny)
        rows.append(Row(name, size, py, cc, py / cc, float(np.max(np.abs(a - b) / scale))))
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rows = run(args.repeat, args.seed)
    if args.json:
        print(json.dumps([asdict(r) for r in rows], indent=2))
        return 0
    if _core is None:
        print("compiled extension not available; timing the fallback only", file=sys.stderr)
    print(f"{'kernel':<16} {'size':>7} {'python':>11} {'compiled':>11} {'speedup':>8} {'rel diff':>9}")
    for r in rows:
        cc = f"{r.compiled_s * 1e3:9.3f}ms" if r.compiled_s is not None else "        n/a"
        sp = f"{r.speedup:7.1f}x" if r.speedup is not None else "     n/a"
        dd = f"{r.max_rel_diff:9.1e}" if r.max_rel_diff is not None else "      n/a"
        print(f"{r.kernel:<16} {r.size:>7} {r.python_s * 1e3:9.3f}ms {cc} {sp} {dd}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
