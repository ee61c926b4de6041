"""The acceptance suite, shared by ``sliceft selftest`` and tests/test_acceptance.py.

Each check returns a :class:`CheckResult`; ``run_suite`` collects them.
Defaults: m = 2, c = 1/2, 256 x 256 grid with extent 12 sqrt(2c).
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .convolution import (
    calibrate_kappa,
    default_kappa,
    max_rel_gap,
    mustard_spatial,
    mustard_spectral,
    translate_convolve,
)
from .hermite import HermiteIndex, SlicePoint, eigenvalue, hermite_field, norm_A, random_span_field, raising_apply
from .multivector import Multivector, Params, eta_sandwich, gp, grades, sphere_area, sphere_sandwich_oracle
from .slicefield import GridSpec, apply_D0, inner_product, rel_error
from .transform import forward, forward_fast, inverse, kernel_pde_residual, mehler_check, property_checks

# coarse grid for the O(N0^2 Nr^2) translate quadrature
TRANSLATE_GRID = dict(L=12.0, N0=64, R=12.0, Nr=32)


@dataclass
class CheckResult:
    id: int
    name: str
    passed: bool
    values: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        vals = ", ".join(f"{k}={_fmt(v)}" for k, v in self.values.items())
        return f"[{status}] criterion {self.id}: {self.name} ({vals}; {self.seconds:.1f}s)"

    def to_dict(self):
        return {
            "id": self.id,
            "name": self.name,
            "passed": self.passed,
            "values": self.values,
            "tolerances": self.tolerances,
            "seconds": round(self.seconds, 3),
        }


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _grid(params, grid):
    return grid or GridSpec.default(params)


@_timed
def check_eigenfunctions(params=None, grid=None, tol=1e-6, max_seconds=30.0):
    params = params or Params()
    grid = _grid(params, grid)
    fg = grid.frequency_grid(params.c)
    worst = 0.0
    t = time.perf_counter()
    for j in range(4):
        for k in range(4):
            psi = hermite_field(j, k, grid, params)
            expect = hermite_field(j, k, fg, params) * eigenvalue(j, k)
            worst = max(worst, rel_error(forward_fast(psi), expect))
    dt = time.perf_counter() - t
    ok = worst <= tol and dt <= max_seconds
    return CheckResult(1, "eigenfunctions", ok, {"max_rel_error": worst, "runtime_s": dt},
                       {"max_rel_error": tol, "runtime_s": max_seconds})


@_timed
def check_inverse(params=None, grid=None, tol=1e-6):
    params = params or Params()
    grid = _grid(params, grid)
    worst = 0.0
    for j in range(4):
        for k in range(4):
            psi = hermite_field(j, k, grid, params)
            worst = max(worst, rel_error(inverse(forward_fast(psi)), psi))
    return CheckResult(2, "inverse", worst <= tol, {"max_rel_error": worst}, {"max_rel_error": tol})


@_timed
def check_orthogonality(params=None, grid=None, tol_diag=1e-6, tol_off=1e-8):
    params = params or Params()
    grid = _grid(params, grid)
    idx = [(j, k) for j in range(4) for k in range(4)]
    fields = [hermite_field(j, k, grid, params) for j, k in idx]
    A = [norm_A(HermiteIndex(j, k), params) for j, k in idx]
    diag = off = 0.0
    for a in range(len(idx)):
        for b in range(len(idx)):
            ip = inner_product(fields[a], fields[b])
            if a == b:
                diag = max(diag, abs(ip - A[a]) / A[a])
            else:
                off = max(off, abs(ip) / math.sqrt(A[a] * A[b]))
    ok = diag <= tol_diag and off <= tol_off
    return CheckResult(3, "orthogonality", ok, {"diag_rel": diag, "offdiag_scaled": off},
                       {"diag_rel": tol_diag, "offdiag_scaled": tol_off})


def time_paths(params, sizes=(64, 128, 256, 512), repeats=3, seed=0):
    """Best-of-``repeats`` wall times of forward and forward_fast per grid size."""
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        grid = GridSpec.default(params, n, n)
        f = random_span_field(grid, params, rng)
        for name, fn in (("direct", forward), ("fast", forward_fast)):
            fn(f)
            best = math.inf
            for _ in range(repeats):
                t = time.perf_counter()
                fn(f)
                best = min(best, time.perf_counter() - t)
            rows.append((n, name, best))
    return rows


@_timed
def check_dual_path(params=None, grid=None, tol=1e-8, n_fields=20, seed=4, sizes=(64, 128, 256, 512)):
    params = params or Params()
    grid = _grid(params, grid)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_fields):
        f = random_span_field(grid, params, rng)
        worst = max(worst, rel_error(forward_fast(f), forward(f)))
    rows = time_paths(params, sizes)
    t = {(n, p): s for n, p, s in rows}
    lo, hi = sizes[0], sizes[-1]
    growth_direct = t[hi, "direct"] / t[lo, "direct"]
    growth_fast = t[hi, "fast"] / t[lo, "fast"]
    crossover = next((n for n in sizes if t[n, "fast"] < t[n, "direct"]), None)
    ok = worst <= tol and growth_direct > growth_fast
    return CheckResult(4, "dual path", ok, {
        "max_rel_deviation": worst,
        "direct_growth": growth_direct,
        "fast_growth": growth_fast,
        "crossover_N": crossover,
    }, {"max_rel_deviation": tol, "direct_growth": "> fast_growth"})


@_timed
def check_kernel_pde(params=None, h=0.01, band=(3.5, 4.5)):
    params = params or Params()
    r1a, r2a = kernel_pde_residual(params, h)
    r1b, r2b = kernel_pde_residual(params, h / 2)
    q1, q2 = r1a / r1b, r2a / r2b
    ok = all(band[0] <= q <= band[1] for q in (q1, q2))
    return CheckResult(5, "kernel PDE", ok, {"ratio_eq1": q1, "ratio_eq2": q2}, {"ratio": list(band)})


def random_ball_point(params: Params, rng, radius: float = 2.0) -> SlicePoint:
    while True:
        x0, r = rng.uniform(-radius, radius), rng.uniform(0, radius)
        if x0 * x0 + r * r <= radius * radius:
            break
    v = rng.normal(size=params.m)
    v /= np.linalg.norm(v)
    return SlicePoint(float(x0), float(r), Multivector.vector(params.dim, [0.0, *v]))


@_timed
def check_mehler(params=None, tol=1e-4, n_points=50, seed=11):
    params = params or Params()
    rng = np.random.default_rng(seed)
    xs = [random_ball_point(params, rng) for _ in range(n_points)]
    ys = [random_ball_point(params, rng) for _ in range(n_points)]
    err = mehler_check(xs, ys, params, n_max=59, rho=0.999)
    return CheckResult(6, "Mehler series", float(err.max()) <= tol, {"max_rel_error": float(err.max())},
                       {"max_rel_error": tol})


@_timed
def check_properties(params=None, grid=None, tol=1e-6, seed=5):
    params = params or Params()
    grid = _grid(params, grid)
    f = random_span_field(grid, params, np.random.default_rng(seed))
    rep = property_checks(f, 16 * grid.h0).as_dict()
    psi11 = hermite_field(1, 1, grid, params)
    rep["twofold_psi11"] = rel_error(forward_fast(forward_fast(psi11)), -psi11)
    ok = all(v <= tol for v in rep.values())
    return CheckResult(7, "basic properties", ok, rep, {"each": tol})


@_timed
def check_convolution(params=None, grid=None, tol_spatial=1e-5, tol_translate=1e-4, n_pairs=10, seed=8):
    params = params or Params()
    grid = _grid(params, grid)
    rng = np.random.default_rng(seed)
    kappa = calibrate_kappa(params, grid)
    kappa_gap = abs(kappa - default_kappa(params)) / abs(default_kappa(params))
    spatial = 0.0
    for _ in range(n_pairs):
        f = random_span_field(grid, params, rng)
        g = random_span_field(grid, params, rng)
        spatial = max(spatial, max_rel_gap(mustard_spatial(f, g, kappa), mustard_spectral(f, g)))
    coarse = GridSpec(**TRANSLATE_GRID)
    trans = 0.0
    for _ in range(n_pairs):
        f = random_span_field(coarse, params, rng)
        g = random_span_field(coarse, params, rng)
        trans = max(trans, max_rel_gap(translate_convolve(f, g), mustard_spectral(f, g)))
    ok = spatial <= tol_spatial and trans <= tol_translate and kappa_gap <= 1e-8
    return CheckResult(8, "convolution equivalence", ok, {
        "spatial_vs_spectral": spatial,
        "translate_vs_spectral": trans,
        "kappa": [kappa.real, kappa.imag],
        "kappa_rel_gap_to_-i/4pi_c": kappa_gap,
    }, {"spatial_vs_spectral": tol_spatial, "translate_vs_spectral": tol_translate, "kappa_rel_gap": 1e-8})


def _lemma_exact(m: int) -> bool:
    """sum_i e_i a e_i = (-1)^k (2k - m) a for every e0-free blade a of Cl_m."""
    dim = m + 1
    g = grades(dim)
    for blade in range(0, 1 << dim, 2):
        a = Multivector.blade(dim, *[i for i in range(dim) if blade >> i & 1])
        total = Multivector(dim)
        for i in range(1, dim):
            ei = Multivector.blade(dim, i)
            total = total + ei * a * ei
        k = int(g[blade])
        if not total.close_to(a * ((-1) ** k * (2 * k - m)), atol=0.0):
            return False
    return True


@_timed
def check_sphere(tol2=1e-10, tol3=1e-6, n_random=50, seed=9):
    rng = np.random.default_rng(seed)
    worst = {}
    for m, npts in ((2, 512), (3, 512)):
        dim = m + 1
        area = sphere_area(m)
        err = 0.0
        for _ in range(n_random):
            a = Multivector(dim, rng.normal(size=1 << dim) + 1j * rng.normal(size=1 << dim))
            q = sphere_sandwich_oracle(a, m, npts) / area
            err = max(err, (q - eta_sandwich(a, m)).norm_inf() / a.norm_inf())
        worst[m] = err
    lemma = _lemma_exact(2) and _lemma_exact(3)
    ok = worst[2] <= tol2 and worst[3] <= tol3 and lemma
    return CheckResult(9, "sphere sandwich", ok, {"m2": worst[2], "m3": worst[3], "lemma_exact": lemma},
                       {"m2": tol2, "m3": tol3})


def _interior(step):
    return (slice(2 * step, -2 * step, step), slice(0, -2 * step, step))


def ode_residual(j, k, params, n, extent=8.0, coarse=64):
    """Max residual of (c D0^2 + |x|^2/4c - (j+k+1)) psi on the coarse interior nodes."""
    g = GridSpec(extent, n, extent, n // 2)
    f = hermite_field(j, k, g, params)
    X0, R = g.mesh()
    s = ((X0 ** 2 + R ** 2) / (4 * params.c))[..., None]
    d = apply_D0(apply_D0(f))
    sl = _interior(n // coarse)
    r1 = params.c * d.f1 + (s - (j + k + 1)) * f.f1
    r2 = params.c * d.f2 + (s - (j + k + 1)) * f.f2
    return float(max(np.abs(r1[sl]).max(), np.abs(r2[sl]).max()))


def raising_residual(j, k, params, n, extent=8.0, coarse=64):
    """Max residual of psi_{j,k} - (x/2 - c D0) psi_{j-1,k}, j >= 1."""
    g = GridSpec(extent, n, extent, n // 2)
    d = hermite_field(j, k, g, params) - raising_apply(hermite_field(j - 1, k, g, params))
    sl = _interior(n // coarse)
    return float(max(np.abs(d.f1[sl]).max(), np.abs(d.f2[sl]).max()))


@_timed
def check_ode(params=None, band=(3.5, 4.5), sizes=(128, 256)):
    params = params or Params()
    ratios = {}
    for j in range(3):
        for k in range(3):
            a, b = (ode_residual(j, k, params, n) for n in sizes)
            ratios[f"ode_{j}{k}"] = a / b
            if j:
                a, b = (raising_residual(j, k, params, n) for n in sizes)
                ratios[f"raise_{j}{k}"] = a / b
    ok = all(band[0] <= q <= band[1] for q in ratios.values())
    vals = {"min_ratio": min(ratios.values()), "max_ratio": max(ratios.values())}
    return CheckResult(10, "scalar ODE and raising", ok, vals, {"ratio": list(band)})


CHECKS = {
    1: check_eigenfunctions,
    2: check_inverse,
    3: check_orthogonality,
    4: check_dual_path,
    5: check_kernel_pde,
    6: check_mehler,
    7: check_properties,
    8: check_convolution,
    9: check_sphere,
    10: check_ode,
}


def run_suite(params=None, grid=None, only=None, echo=None):
    """Run the selected criteria; returns the list of results."""
    params = params or Params()
    results = []
    for cid, fn in CHECKS.items():
        if only and cid not in only:
            continue
        if cid == 9:
            res = fn()
        elif cid in (5, 6, 10):
            res = fn(params)
        else:
            res = fn(params, grid)
        results.append(res)
        if echo:
            echo(res.line())
    return results
