"""Timings for the two transform paths and the two kernel backends.

    python3 benchmarks/bench_paths.py [--sizes 64,128,256,512] [--out benchmarks/results.csv]

Transform rows compare forward (direct quadrature) with forward_fast (FFT).
Backend rows time the hot kernels once with numba and once in a child process
started with SLICEFT_DISABLE_JIT=1.
"""
import argparse
import csv
import json
import os
import subprocess
import sys
import time
from pathlib import Path


KERNEL_BENCH = r"""
import json, sys, time
from sliceft import _accel
from sliceft.convolution import translate_convolve
from sliceft.hermite import random_span_field
from sliceft.multivector import Params, cayley
from sliceft.slicefield import GridSpec

def best(fn, repeats):
    fn()
    out = []
    for _ in range(repeats):
        t = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t)
    return min(out)

repeats = int(sys.argv[1])
rng = np.random.default_rng(0)
params = Params(2, 0.5)
idx, sign = cayley(3)
A = rng.normal(size=(256 * 256, 8)) + 0j
B = rng.normal(size=(256 * 256, 8)) + 0j
grid = GridSpec(12.0, 32, 12.0, 16)
f = random_span_field(grid, params, rng)
g = random_span_field(grid, params, rng)
print(json.dumps({
    "backend": _accel.backend(),
    "gp_rows_65536": best(lambda: _accel.gp_rows(A, B, idx, sign), repeats),
    "translate_conv_32x16": best(lambda: translate_convolve(f, g), repeats),
}))
"""


def kernel_rows(repeats):
    rows = []
    for disable in ("0", "1"):
        env = dict(os.environ, SLICEFT_DISABLE_JIT=disable)
        res = subprocess.run([sys.executable, "-c", KERNEL_BENCH, str(repeats)], env=env,
                             capture_output=True, text=True, check=True)
        doc = json.loads(res.stdout)
        for name in ("gp_rows_65536", "translate_conv_32x16"):
            rows.append({"benchmark": name, "size": "", "variant": doc["backend"], "wall_time_s": doc[name]})
    return rows


def transform_rows(sizes, repeats):
    from sliceft import _accel
    from sliceft.multivector import Params
    from sliceft.selftest import time_paths

    return [{"benchmark": "transform", "size": n, "variant": path, "wall_time_s": t, "backend": _accel.backend()}
            for n, path, t in time_paths(Params(2, 0.5), sizes, repeats)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="64,128,256,512")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--out", default=str(Path(__file__).with_name("results.csv")))
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    t = time.perf_counter()
    rows = transform_rows(sizes, args.repeats) + kernel_rows(args.repeats)
    fields = ["benchmark", "size", "variant", "wall_time_s", "backend"]
    with open(args.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, restval="")
        w.writeheader()
        w.writerows(rows)
    by = {(r["size"], r["variant"]): r["wall_time_s"] for r in rows if r["benchmark"] == "transform"}
    cross = next((n for n in sizes if by[(n, "fast")] < by[(n, "direct")]), None)
    for r in rows:
        print(f"{r['benchmark']:>22} {str(r['size']):>5} {r['variant']:>7} {r['wall_time_s']:.4f}s")
    print(f"fast path first wins at N={cross}; total {time.perf_counter() - t:.1f}s -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
