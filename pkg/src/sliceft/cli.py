"""Command-line front end.

    sliceft hermite --j 1 --k 2 --out psi12.csv
    sliceft transform --in psi12.csv --out F.csv [--fast | --direct] [--verify]
    sliceft transform --bench --sizes 64,128,256 --out bench.csv
    sliceft inverse --in F.csv --out back.csv
    sliceft kernel --x 0,0 --y 0,0
    sliceft mustard --in f.csv --in2 g.csv --path spatial --out h.csv --report r.json
    sliceft translate --in f.csv --y 0.75,0.375 --out t.csv
    sliceft selftest --m 2 --c 0.5

Exit status: 0 on success, 1 on a tolerance failure, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import _accel
from .hermite import SlicePoint, hermite_field
from .multivector import Multivector, Params
from .slicefield import GridSpec, dumps_csv, read_csv, read_json, rel_error, write_csv, write_json

DEFAULTS = {"m": 2, "c": 0.5, "grid": "256x256", "extent": None, "fast": True, "tol": None, "threads": None}


class InputError(Exception):
    """Bad configuration or unreadable input (exit status 2)."""


@dataclass
class RunConfig:
    mode: str
    params: Params
    grid: GridSpec
    fast: bool = True
    tol: float | None = None
    threads: int | None = None
    inputs: list = field(default_factory=list)
    output: str | None = None
    options: dict = field(default_factory=dict)
    echo: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _pair(text, kind, conv):
    try:
        a, b = text.lower().split("x")
        return conv(a), conv(b)
    except ValueError:
        raise InputError(f"{kind} must look like AxB, got {text!r}") from None


def parse_point(text: str, params: Params) -> SlicePoint:
    """``x0,r`` or ``x0,r,w1,...,wm`` (omega defaults to e1, and is normalised)."""
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise InputError(f"bad point {text!r}") from None
    if len(vals) == 2:
        omega = Multivector.blade(params.dim, 1)
    elif len(vals) == 2 + params.m:
        w = vals[2:]
        n = sum(v * v for v in w) ** 0.5
        if n == 0:
            raise InputError(f"omega in {text!r} is zero")
        omega = Multivector.vector(params.dim, [0.0] + [v / n for v in w])
    else:
        raise InputError(f"point {text!r} needs 2 or {2 + params.m} components")
    try:
        return SlicePoint(vals[0], vals[1], omega)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=None, help="algebra parameter m >= 2")
    common.add_argument("--c", type=float, default=None, help="transform scale c > 0")
    common.add_argument("--grid", default=None, help="point counts N0xNr (default 256x256)")
    common.add_argument("--extent", default=None, help="half-widths LxR (default 12 sqrt(2c) each)")
    path = common.add_mutually_exclusive_group()
    path.add_argument("--fast", dest="fast", action="store_true", default=None, help="FFT path (default)")
    path.add_argument("--direct", dest="fast", action="store_false", help="direct quadrature path")
    common.add_argument("--tol", type=float, default=None, help="tolerance for --verify / reports")
    common.add_argument("--threads", type=int, default=None, help="kernel parallelism (numba only)")
    common.add_argument("--config", default=None, help="JSON config file; flags override it")
    common.add_argument("--in", dest="inp", default=None, help="input field (.csv or .json)")
    common.add_argument("--out", default=None, help="output path (.csv or .json); stdout if omitted")

    p = argparse.ArgumentParser(prog="sliceft", description="Slice Fourier transform toolkit")
    sub = p.add_subparsers(dest="mode", required=True)

    s = sub.add_parser("hermite", parents=[common], help="sample psi_{j,k}")
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--normalized", action="store_true")

    for name in ("transform", "inverse"):
        s = sub.add_parser(name, parents=[common], help=("forward" if name == "transform" else "inverse") + " slice Fourier transform")
        s.add_argument("--verify", action="store_true", help="also run the other path and compare")
        if name == "transform":
            s.add_argument("--bench", action="store_true", help="time direct vs fast; CSV output")
            s.add_argument("--sizes", default="32,64,128,256", help="grid sizes for --bench")
            s.add_argument("--repeats", type=int, default=3)

    s = sub.add_parser("kernel", parents=[common], help="evaluate K(x, y) on points")
    s.add_argument("--x", action="append", default=[], help="x0,r[,omega...] (repeatable)")
    s.add_argument("--y", action="append", default=[], help="y0,g[,eta...] (repeatable)")
    s.add_argument("--points", default=None, help="JSON file: list of [x, y] string pairs")

    s = sub.add_parser("mustard", parents=[common], help="Mustard convolution of two fields")
    s.add_argument("--in2", required=True, help="second field g")
    s.add_argument("--path", choices=("spectral", "spatial", "translate"), default="spectral")
    s.add_argument("--report", default=None, help="write the ConvolutionReport JSON here")

    s = sub.add_parser("translate", parents=[common], help="generalised translation T_y f")
    s.add_argument("--y", required=True, help="y0,g[,eta...]")
    s.add_argument("--path", choices=("spatial", "spectral"), default="spatial")

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", default=None, help="comma-separated criterion ids")
    return p


def resolve(args) -> RunConfig:
    """Merge defaults, the optional JSON config and explicit flags (in that order)."""
    conf = dict(DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise InputError("config file must hold a JSON object")
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        conf.update(loaded)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            conf[key] = val
    try:
        params = Params(conf["m"], conf["c"])
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    n0, nr = _pair(str(conf["grid"]), "--grid", int)
    if conf["extent"] is None:
        ext = 12.0 * (2 * params.c) ** 0.5
        L, R = ext, ext
    else:
        L, R = _pair(str(conf["extent"]), "--extent", float)
    try:
        grid = GridSpec(L, n0, R, nr)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    opts = {k: v for k, v in vars(args).items() if k not in DEFAULTS and k not in ("mode", "config", "inp", "out")}
    inputs = [x for x in (args.inp, getattr(args, "in2", None)) if x]
    echo = dict(conf, mode=args.mode, options=opts, inputs=inputs, output=args.out)
    return RunConfig(args.mode, params, grid, bool(conf["fast"]), conf["tol"], conf["threads"],
                     inputs, args.out, opts, echo)


# ---------------------------------------------------------------------------
# I/O helpers
# ---------------------------------------------------------------------------

def _read_field(path):
    try:
        if str(path).endswith(".json"):
            return read_json(path)
        return read_csv(path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read field {path}: {exc}") from None


def _write_field(fld, cfg: RunConfig, out=None):
    fld.meta = dict(fld.meta, config=cfg.echo)
    out = out or cfg.output
    if out is None:
        sys.stdout.write(dumps_csv(fld))
        return
    if str(out).endswith(".json"):
        write_json(fld, out)
    else:
        write_csv(fld, out)


def _emit_json(doc, path=None):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _need_input(cfg: RunConfig, n=1):
    if len(cfg.inputs) < n:
        raise InputError(f"{cfg.mode} needs --in")
    return [_read_field(p) for p in cfg.inputs[:n]]


# ---------------------------------------------------------------------------
# modes
# ---------------------------------------------------------------------------

def _run_hermite(cfg):
    j, k = cfg.options["j"], cfg.options["k"]
    if j < 0 or k < 0:
        raise InputError("--j and --k must be >= 0")
    fld = hermite_field(j, k, cfg.grid, cfg.params, normalized=cfg.options["normalized"])
    fld.meta = {"hermite": [j, k], "normalized": cfg.options["normalized"]}
    _write_field(fld, cfg)
    return 0


def _run_bench(cfg):
    from .selftest import time_paths

    try:
        sizes = [int(s) for s in cfg.options["sizes"].split(",")]
    except ValueError:
        raise InputError(f"bad --sizes {cfg.options['sizes']!r}") from None
    rows = time_paths(cfg.params, sizes, repeats=cfg.options["repeats"])
    lines = ["grid_size,path,wall_time_s,backend"]
    lines += [f"{n},{p},{t!r},{_accel.backend()}" for n, p, t in rows]
    text = "\n".join(lines) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _run_transform(cfg, inv=False):
    from .transform import forward, forward_fast, inverse

    if not inv and cfg.options.get("bench"):
        return _run_bench(cfg)
    (f,) = _need_input(cfg)

    def run(fast):
        if inv:
            return inverse(f, fast=fast)
        return forward_fast(f) if fast else forward(f)

    out = run(cfg.fast)
    status = 0
    if cfg.options.get("verify"):
        dev = rel_error(run(not cfg.fast), out)
        tol = 1e-8 if cfg.tol is None else cfg.tol
        out.meta["verify"] = {"rel_deviation": dev, "tol": tol}
        status = 0 if dev <= tol else 1
    _write_field(out, cfg)
    return status


def _run_kernel(cfg):
    from .transform import kernel_closed

    pairs = list(zip(cfg.options["x"], cfg.options["y"]))
    if len(cfg.options["x"]) != len(cfg.options["y"]):
        raise InputError("--x and --y must be given the same number of times")
    if cfg.options["points"]:
        try:
            extra = json.loads(Path(cfg.options["points"]).read_text())
            pairs += [(str(a), str(b)) for a, b in extra]
        except (OSError, ValueError, TypeError) as exc:
            raise InputError(f"cannot read points: {exc}") from None
    if not pairs:
        raise InputError("kernel needs at least one --x/--y pair")
    rows = []
    for xs, ys in pairs:
        x, y = parse_point(xs, cfg.params), parse_point(ys, cfg.params)
        K = kernel_closed(x, y, cfg.params)
        rows.append({"x": xs, "y": ys, "K": [[float(v.real), float(v.imag)] for v in K.coeffs]})
    _emit_json({"config": cfg.echo, "kernel": rows}, cfg.output)
    return 0


def _run_mustard(cfg):
    from .convolution import convolve

    f, g = _need_input(cfg, 2)
    rep = convolve(f, g, cfg.options["path"], fast=cfg.fast)
    status = 0
    doc = dict(rep.to_dict(), config=cfg.echo)
    if cfg.tol is not None:
        doc["tol"] = cfg.tol
        status = 0 if rep.deviation <= cfg.tol else 1
    if cfg.options["report"]:
        _emit_json(doc, cfg.options["report"])
    _write_field(rep.spatial_result, cfg)
    return status


def _run_translate(cfg):
    from .convolution import generalized_translate

    (f,) = _need_input(cfg)
    y = parse_point(cfg.options["y"], f.params)
    try:
        out = generalized_translate(f, y, cfg.options["path"], fast=cfg.fast)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _write_field(out, cfg)
    return 0


def _run_selftest(cfg):
    from .selftest import run_suite

    only = None
    if cfg.options.get("only"):
        try:
            only = {int(v) for v in cfg.options["only"].split(",")}
        except ValueError:
            raise InputError(f"bad --only {cfg.options['only']!r}") from None
    grid = None if cfg.echo.get("grid") == DEFAULTS["grid"] and cfg.echo.get("extent") is None else cfg.grid
    results = run_suite(cfg.params, grid, only, echo=lambda s: print(s, file=sys.stderr))
    ok = all(r.passed for r in results)
    _emit_json({"passed": ok, "backend": _accel.backend(), "config": cfg.echo,
                "criteria": [r.to_dict() for r in results]}, cfg.output)
    return 0 if ok else 1


RUNNERS = {
    "hermite": _run_hermite,
    "transform": _run_transform,
    "inverse": lambda cfg: _run_transform(cfg, inv=True),
    "kernel": _run_kernel,
    "mustard": _run_mustard,
    "translate": _run_translate,
    "selftest": _run_selftest,
}


def run(cfg: RunConfig) -> int:
    _accel.set_threads(cfg.threads)
    return RUNNERS[cfg.mode](cfg)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        return run(cfg)
    except InputError as exc:
        print(f"sliceft: error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # output piped into e.g. head; not an error
        sys.stderr.close()
        return 0


if __name__ == "__main__":
    sys.exit(main())
