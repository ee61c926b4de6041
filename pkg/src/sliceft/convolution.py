"""Mustard convolution and generalised translation for slice fields.

Transforms are split fields F1 + eta F2.  The pointwise product of two such
values depends on eta in a way that is not of split form; only its two sphere
moments survive the inverse transform, so products are taken as

    (A1, A2) * (B1, B2) = (A1 B1 + S(A2) B2, A2 B1 - S(A1) B2)

with S the sphere-averaged sandwich a -> mean(eta a eta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .hermite import SlicePoint, hermite_field
from .multivector import Params, cayley, gp, sandwich_array
from .slicefield import GridSpec, SliceField, even_extension, inner_product, odd_extension
from .transform import forward, forward_fast, inverse, kernel_constant

__all__ = [
    "slice_product",
    "mustard_spectral",
    "mustard_spatial",
    "default_kappa",
    "calibrate_kappa",
    "generalized_translate",
    "translate_kernel_field",
    "translate_convolve",
    "ConvolutionReport",
    "convolve",
    "max_rel_gap",
]


def slice_product(A: SliceField, B: SliceField) -> SliceField:
    """Sphere-projected pointwise product of two split fields (A on the left)."""
    A.check_compatible(B)
    m, dim = A.params.m, A.params.dim
    h1 = gp(A.f1, B.f1, dim) + gp(sandwich_array(A.f2, m), B.f2, dim)
    h2 = gp(A.f2, B.f1, dim) - gp(sandwich_array(A.f1, m), B.f2, dim)
    return A._like(h1, h2)


def _transforms(fast):
    return (forward_fast, lambda h: inverse(h, fast=True)) if fast else (forward, lambda h: inverse(h, fast=False))


def mustard_spectral(f: SliceField, g: SliceField, fast: bool = True) -> SliceField:
    """f *_S g = F^{-1}(F(f) F(g)), F(f) right-multiplied by F(g)."""
    f.check_compatible(g)
    fwd, inv = _transforms(fast)
    out = inv(slice_product(fwd(f), fwd(g)))
    out.meta = {"operation": "mustard", "path": "spectral"}
    return out


def default_kappa(params: Params) -> complex:
    """-i / (4 pi c): the spatial constant for the plain 2D convolution integral."""
    return -1j / (4 * math.pi * params.c)


def _conv_parts(f: SliceField, g: SliceField):
    """Unscaled spatial parts f1+ * g1+ + S f2- * g2-  and  f2- * g1+ - S f1+ * g2-.

    Linear 2D convolutions over the extended plane, by zero-padded FFTs; the
    geometric product is applied to the blade spectra.
    """
    f.check_compatible(g)
    grid = f.grid
    N0, Nr = grid.N0, grid.Nr
    m, dim = f.params.m, f.params.dim
    shape = (2 * N0, 4 * Nr)

    def spec(a):
        return np.fft.fft2(a, s=shape, axes=(0, 1))

    F1 = even_extension(f)
    F2 = odd_extension(f)
    SF1 = spec(sandwich_array(F1, m))
    SF2 = spec(sandwich_array(F2, m))
    F1 = spec(F1)
    F2 = spec(F2)
    G1 = spec(even_extension(g))
    G2 = spec(odd_extension(g))
    H1 = np.fft.ifft2(gp(F1, G1, dim) + gp(SF2, G2, dim), axes=(0, 1))
    H2 = np.fft.ifft2(gp(F2, G1, dim) - gp(SF1, G2, dim), axes=(0, 1))
    # x0 + x0' = -2L + (n + n') h0 and r + r' = (q + q' - 2 Nr) hr
    rows = slice(N0 // 2, N0 // 2 + N0)
    cols = slice(2 * Nr, 3 * Nr)
    scale = grid.h0 * grid.hr
    return H1[rows, cols] * scale, H2[rows, cols] * scale


def mustard_spatial(f: SliceField, g: SliceField, kappa: complex | None = None) -> SliceField:
    """Explicit convolution form, kappa defaults to :func:`default_kappa`."""
    kappa = default_kappa(f.params) if kappa is None else kappa
    h1, h2 = _conv_parts(f, g)
    out = f._like(kappa * h1, kappa * h2)
    out.meta = {"operation": "mustard", "path": "spatial", "kappa": [kappa.real, kappa.imag]}
    return out


def calibrate_kappa(params: Params, grid: GridSpec | None = None) -> complex:
    """Least-squares constant matching the spatial form to the spectral one on (psi00, psi00)."""
    grid = grid or GridSpec.default(params)
    psi = hermite_field(0, 0, grid, params)
    ref = mustard_spectral(psi, psi)
    h1, h2 = _conv_parts(psi, psi)
    raw = psi._like(h1, h2)
    return complex(inner_product(raw, ref) / inner_product(raw, raw))


# ---------------------------------------------------------------------------
# generalised translation
# ---------------------------------------------------------------------------

def _snap(f: SliceField, y: SlicePoint):
    grid = f.grid
    if y.dim != f.params.dim:
        raise ValueError("point dimension does not match field params")
    if not (-grid.L <= y.x0 < grid.L and 0 <= y.r < grid.R):
        raise ValueError(f"translation point ({y.x0}, {y.r}) lies outside the grid extent")
    k0 = int(round(y.x0 / grid.h0))
    kg = int(round(y.r / grid.hr))
    return k0, kg, SlicePoint(k0 * grid.h0, kg * grid.hr, y.omega)


def translate_kernel_field(y: SlicePoint, grid: GridSpec, params: Params) -> SliceField:
    """K(y, z) as a split field in z = z0 e0 + n zeta, sampled on ``grid``.

    K(y, z) = 2C exp(-i y0 z0 / 2c)(cos(g n / 2c) + i zeta eta sin(g n / 2c)),
    so the parts are (alpha, beta eta) with eta the direction of y.
    """
    C = kernel_constant(params)
    Z0, N = grid.mesh()
    c2 = 2 * params.c
    ph = 2 * C * np.exp(-1j * y.x0 * Z0 / c2)
    alpha = ph * np.cos(y.r * N / c2)
    beta = 1j * ph * np.sin(y.r * N / c2)
    eta = y.omega.coeffs
    f1 = np.zeros((*grid.shape, params.nblades), dtype=np.complex128)
    f1[..., 0] = alpha
    f2 = beta[..., None] * eta
    return SliceField(grid, params, f1, f2)


def generalized_translate(f: SliceField, y: SlicePoint, path: str = "spatial", fast: bool = True) -> SliceField:
    """T_y f, with y snapped to the nearest grid node.

    ``path="spectral"`` evaluates F^{-1}(F(f)(z) K(y, z)); ``path="spatial"``
    uses the explicit form with shifted copies of the even/odd extensions:

        h1 = C[f1(r-g) + f1(r+g) + (S f2(r+g) - S f2(r-g)) eta]
        h2 = C[f2(r-g) + f2(r+g) + (S f1(r-g) - S f1(r+g)) eta]

    all at x0 - y0; arguments past the grid edge read as zero.
    """
    k0, kg, ys = _snap(f, y)
    params = f.params
    meta = {"operation": "translate", "path": path, "y": [ys.x0, ys.r], "eta": ys.omega.to_json()}
    if path == "spectral":
        fwd, inv = _transforms(fast)
        Ff = fwd(f)
        K = translate_kernel_field(ys, Ff.grid, params)
        out = inv(slice_product(Ff, K))
        out.meta = meta
        return out
    if path != "spatial":
        raise ValueError(f"unknown path {path!r}")
    shifted = f.shift_x0(k0)
    N0, Nr = f.grid.shape
    m, dim = params.m, params.dim
    C = kernel_constant(params)

    def pad(a):
        return np.concatenate([a, np.zeros_like(a)], axis=1)

    E1 = pad(even_extension(shifted))
    O2 = pad(odd_extension(shifted))
    q = np.arange(Nr) + Nr
    minus, plus = q - kg, q + kg

    def pm(a):
        return a[:, minus], a[:, plus]

    e1m, e1p = pm(E1)
    o2m, o2p = pm(O2)
    eta = ys.omega.coeffs
    h1 = e1m + e1p + gp(sandwich_array(o2p - o2m, m), eta, dim)
    h2 = o2m + o2p + gp(sandwich_array(e1m - e1p, m), eta, dim)
    return SliceField(f.grid, params, C * h1, C * h2, meta)


def translate_convolve(f: SliceField, g: SliceField) -> SliceField:
    """Quadrature of T_y(f)(x) g(y) over y, with the eta integral done analytically.

    The eta-linear terms drop out and eta b eta-terms leave -b, giving
    Area C [(a1 g1 - b1 g2) + omega (a2 g1 - b2 g2)] with Area C = -i / 4 pi c.
    Cost is O(N0^2 Nr^2), so this is meant for coarse grids.
    """
    f.check_compatible(g)
    params = f.params
    grid = f.grid
    m, dim = params.m, params.dim
    F1 = even_extension(f)
    F2 = odd_extension(f)
    SF1 = sandwich_array(F1, m)
    SF2 = sandwich_array(F2, m)
    idx, sign = cayley(dim)
    args = [np.ascontiguousarray(a) for a in (F1, F2, SF1, SF2, g.f1, g.f2)]
    out1, out2 = _accel.translate_conv(*args, 1.0, grid.r_weights(), grid.h0, grid.hr, idx, sign)
    k = -1j / (4 * math.pi * params.c)
    return SliceField(grid, params, k * out1, k * out2, {"operation": "mustard", "path": "translate"})


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def max_rel_gap(a: SliceField, b: SliceField) -> float:
    """max |a - b| / max |b| over all nodes, parts and blades."""
    a.check_compatible(b)
    ref = b.max_abs()
    gap = (a - b).max_abs()
    return gap / ref if ref > 0 else gap


@dataclass
class ConvolutionReport:
    spectral_result: SliceField
    spatial_result: SliceField
    deviation: float
    path: str = "spatial"

    def to_dict(self):
        return {"path": self.path, "deviation": self.deviation}


def convolve(f: SliceField, g: SliceField, path: str = "spectral", fast: bool = True) -> ConvolutionReport:
    """Run one convolution path alongside the spectral reference."""
    ref = mustard_spectral(f, g, fast=fast)
    if path == "spectral":
        other = ref
    elif path == "spatial":
        other = mustard_spatial(f, g)
    elif path == "translate":
        other = translate_convolve(f, g)
    else:
        raise ValueError(f"unknown path {path!r}")
    return ConvolutionReport(ref, other, max_rel_gap(other, ref), path)
