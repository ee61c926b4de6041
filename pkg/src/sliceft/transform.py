"""Slice Fourier transform: closed kernel, Mehler series, direct and FFT paths.

A field f = f1 + omega f2 maps to G1 + eta G2 with, blade by blade,

    G1(y0, g) = (-i / 2 pi c) int int exp(-i x0 y0 / 2c) cos(r g / 2c) f1 dx0 dr
    G2(y0, g) = -(1 / 2 pi c) int int exp(-i x0 y0 / 2c) sin(r g / 2c) f2 dx0 dr

over x0 in R, r >= 0.  These follow from the kernel after the sphere
integral: the omega-linear terms vanish and eta omega omega f2 = -eta f2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hermite import SlicePoint, hermite_split
from .multivector import Multivector, Params, conj_array, gp
from .slicefield import GridSpec, SliceField, apply_D0, e0_left, even_extension, odd_extension, rel_error
from .specfun import gamma_value

__all__ = [
    "kernel_constant",
    "kernel_closed",
    "kernel_trig",
    "mehler_series",
    "mehler_coefficients",
    "mehler_extrapolated",
    "mehler_check",
    "forward",
    "forward_fast",
    "inverse",
    "apply_D0",
    "kernel_pde_residual",
    "kernel_pde_terms",
    "property_checks",
    "PropertyReport",
]


def kernel_constant(params: Params) -> complex:
    """-i Gamma(m/2) / (8 c pi^{m/2 + 1}), the prefactor of the kernel."""
    return -1j * gamma_value(params.m / 2) / (8 * params.c * math.pi ** (params.m / 2 + 1))


def _check_points(x: SlicePoint, y: SlicePoint, params: Params):
    if x.dim != params.dim or y.dim != params.dim:
        raise ValueError("point dimension does not match params")


def kernel_closed(x: SlicePoint, y: SlicePoint, params: Params) -> Multivector:
    """Two-exponential form of K(x, y); omega from x, eta from y."""
    _check_points(x, y, params)
    C = kernel_constant(params)
    c2 = 2 * params.c
    eo = y.omega * x.omega
    ep = np.exp(-1j * (x.x0 * y.x0 - x.r * y.r) / c2)
    em = np.exp(-1j * (x.x0 * y.x0 + x.r * y.r) / c2)
    return ((eo + 1) * ep + (1 - eo) * em) * C


def kernel_trig(x: SlicePoint, y: SlicePoint, params: Params) -> Multivector:
    """Same kernel via Euler: 2C exp(-i x0 y0 / 2c)(cos(rg/2c) + i eta omega sin(rg/2c))."""
    _check_points(x, y, params)
    C = kernel_constant(params)
    c2 = 2 * params.c
    ph = 2 * C * np.exp(-1j * x.x0 * y.x0 / c2)
    arg = x.r * y.r / c2
    return (y.omega * x.omega * (1j * math.sin(arg)) + math.cos(arg)) * ph


# ---------------------------------------------------------------------------
# Mehler series
# ---------------------------------------------------------------------------

def _psi_values(points, params: Params, n_j: int, n_k: int) -> np.ndarray:
    """psi_{j,k}(p) / sqrt(A(j,k)) at each point; shape (n_j, n_k, npts, nb)."""
    dim = params.dim
    x0 = np.array([p.x0 for p in points], dtype=np.float64)
    r = np.array([p.r for p in points], dtype=np.float64)
    omega = np.array([p.omega.coeffs for p in points])
    out = np.empty((n_j, n_k, len(points), params.nblades), dtype=np.complex128)
    for j in range(n_j):
        for k in range(n_k):
            f1, f2 = hermite_split(j, k, x0, r, params, normalized=True)
            out[j, k] = f1 + gp(omega, f2, dim)
    return out


def _mehler_terms(xs, ys, params, j_max, k_max):
    """psi(y) conj(psi(x)) / A for every (j, k) and point pair; shape (j_max+1, k_max+1, npts, nb)."""
    if j_max < 0 or k_max < 0:
        raise ValueError("j_max and k_max must be >= 0")
    for x, y in zip(xs, ys):
        _check_points(x, y, params)
    vals = _psi_values(list(ys) + list(xs), params, j_max + 1, k_max + 1)
    n = len(ys)
    return gp(vals[:, :, :n], conj_array(vals[:, :, n:], params.dim), params.dim)


def mehler_series(x: SlicePoint, y: SlicePoint, params: Params, j_max: int, k_max: int,
                  abel_rho: float = 1.0) -> Multivector:
    """Abel-damped partial sum of sum_{j,k} (-i)(-i rho)^{j+k} psi(y) conj(psi(x)) / A."""
    if not 0 < abel_rho <= 1:
        raise ValueError("abel_rho must lie in (0, 1]")
    terms = _mehler_terms([x], [y], params, j_max, k_max)[:, :, 0]
    n = np.add.outer(np.arange(j_max + 1), np.arange(k_max + 1))
    w = -1j * (-1j * abel_rho) ** n
    return Multivector(params.dim, np.einsum("jk,jkb->b", w, terms))


def mehler_coefficients(xs, ys, params: Params, n_max: int) -> np.ndarray:
    """a_n = sum_{j+k=n} psi(y) conj(psi(x)) / A for n <= n_max.

    ``xs``/``ys`` are equal-length sequences of points (or single points);
    the result has shape (n_max+1, npts, nb), or (n_max+1, nb) for single
    points.  The series then reads -i sum_n a_n (-i rho)^n.
    """
    single = isinstance(xs, SlicePoint)
    if single:
        xs, ys = [xs], [ys]
    if len(xs) != len(ys):
        raise ValueError("xs and ys must have the same length")
    terms = _mehler_terms(xs, ys, params, n_max, n_max)
    out = np.zeros((n_max + 1, *terms.shape[2:]), dtype=np.complex128)
    for j in range(n_max + 1):
        out[j:] += terms[j, : n_max + 1 - j]
    return out[:, 0] if single else out


def _euler_sum(b: np.ndarray, u: float) -> np.ndarray:
    """sum_n b_n u^n by the Euler transform: (1/(1-u)) sum_k (u/(1-u))^k (Delta^k b)_0."""
    w = u / (1 - u)
    total = np.zeros(b.shape[1:], dtype=np.complex128)
    diff = b.copy()
    p = 1.0
    for _ in range(len(b)):
        total += p * diff[0]
        diff = diff[1:] - diff[:-1]
        p *= w
    return total / (1 - u)


def _series_at(a: np.ndarray, rho: float) -> np.ndarray:
    # split into even and odd n; both become power series in u = -rho^2
    u = -rho * rho
    n_even = (len(a) + 1) // 2
    n_odd = len(a) // 2
    even = _euler_sum(a[0::2][:n_even], u)
    odd = _euler_sum(a[1::2][:n_odd], u)
    return -1j * (even + (-1j * rho) * odd)


def mehler_extrapolated(x: SlicePoint, y: SlicePoint, params: Params, n_max: int = 59,
                        rho: float = 0.999, coeffs: np.ndarray | None = None) -> Multivector:
    """Mehler oracle: Abel sum at rho and 2 rho - 1, Richardson-extrapolated to rho = 1.

    The n-sums are accelerated with an Euler transform in u = -rho^2 (the
    generating function is singular only at rho = +-i, so this converges
    geometrically even at rho = 1).  The Abel error is smooth in (1 - rho),
    so the two-point linear extrapolation leaves an O((1 - rho)^2) error.
    """
    if not 0 < rho < 1:
        raise ValueError("rho must lie in (0, 1) for extrapolation")
    a = mehler_coefficients(x, y, params, n_max) if coeffs is None else coeffs
    return Multivector(params.dim, _extrapolate(a, rho))


def _extrapolate(a, rho):
    return 2 * _series_at(a, rho) - _series_at(a, 2 * rho - 1)


def mehler_check(xs, ys, params: Params, n_max: int = 59, rho: float = 0.999) -> np.ndarray:
    """Relative max-coefficient gap between the extrapolated series and the closed kernel."""
    a = mehler_coefficients(list(xs), list(ys), params, n_max)
    out = []
    for i, (x, y) in enumerate(zip(xs, ys)):
        K = kernel_closed(x, y, params)
        out.append((Multivector(params.dim, _extrapolate(a[:, i], rho)) - K).norm_inf() / K.norm_inf())
    return np.array(out)


# ---------------------------------------------------------------------------
# forward / inverse transforms
# ---------------------------------------------------------------------------

def _result(field: SliceField, grid: GridSpec, G1, G2, **meta) -> SliceField:
    return SliceField(grid, field.params, G1, G2, dict(meta))


def _direct(field: SliceField, sign: int):
    g = field.grid
    c = field.params.c
    fg = g.frequency_grid(c)
    E = np.exp(sign * -1j * np.outer(fg.x0, g.x0) / (2 * c)) * g.h0
    arg = np.outer(fg.r, g.r) / (2 * c)
    w = g.r_weights() * g.hr
    Cm = np.cos(arg) * w
    Sm = np.sin(arg) * w
    # (p, n) x (n, q, b) x (s, q) -> (p, s, b)
    I1 = np.einsum("pn,nqb,sq->psb", E, field.f1, Cm, optimize=True)
    I2 = np.einsum("pn,nqb,sq->psb", E, field.f2, Sm, optimize=True)
    pre = -1j * sign / (2 * math.pi * c)
    return fg, pre * I1, -I2 / (2 * math.pi * c)


def forward(field: SliceField) -> SliceField:
    """Direct quadrature on the induced frequency grid."""
    fg, G1, G2 = _direct(field, 1)
    return _result(field, fg, G1, G2, transform="forward", path="direct")


def _fft_parts(field: SliceField):
    """FT of F = f1 (even ext.) + f2 (odd ext.) on the frequency grid, split by parity in g.

    With x0 = -L + n h0, y0 = -L' + p dy0, r = (q - Nr) hr, g = s dg one has
    x0 y0 / 2c = pi N0/2 - pi (n + p) + 2 pi n p / N0 and r g / 2c = -pi s + 2 pi q s / 2Nr,
    so the continuous phase is a plain DFT phase up to signs.
    """
    g = field.grid
    N0, Nr = g.N0, g.Nr
    F = even_extension(field) + odd_extension(field)
    alt = np.where(np.arange(N0) % 2, -1.0, 1.0)
    D = np.fft.fft2(F * alt[:, None, None], axes=(0, 1))
    s = np.arange(Nr)
    Dp = D[:, s]
    Dm = D[:, (-s) % (2 * Nr)]
    ph = alt[:, None, None] * np.where(s % 2, -1.0, 1.0)[None, :, None]
    ph = ph * (-1j) ** (N0 % 4) * g.h0 * g.hr / (2 * math.pi)
    return ph * 0.5 * (Dp + Dm), ph * 0.5 * (Dp - Dm)


def forward_fast(field: SliceField) -> SliceField:
    """2D-DFT reduction: (-i/2c)(FT(F)^+ + eta FT(F)^-) with F = f1^+ + f2^-.

    Falls back to :func:`forward` (flagged in ``meta``) unless N0 and 2 Nr
    are powers of two.
    """
    g = field.grid
    if not g.fft_friendly():
        out = forward(field)
        out.meta["fallback"] = "grid is not a power of two; used direct quadrature"
        return out
    even, odd = _fft_parts(field)
    pre = -1j / (2 * field.params.c)
    return _result(field, g.frequency_grid(field.params.c), pre * even, pre * odd,
                   transform="forward", path="fast")


def inverse(field: SliceField, fast: bool = True) -> SliceField:
    """Inverse transform; its kernel is the complex conjugate of K.

    Blade by blade this is conj o forward o conj (complex conjugation of the
    coefficients), which is how both paths evaluate it.
    """
    fwd = forward_fast if fast else forward
    out = fwd(field.conj()).conj()
    out.meta = dict(out.meta, transform="inverse")
    return out


# ---------------------------------------------------------------------------
# kernel PDE system
# ---------------------------------------------------------------------------

def kernel_pde_terms(x: SlicePoint, y: SlicePoint, params: Params, h: float, kernel=None):
    """Residual multivectors of both kernel equations at one (x, y) pair.

    Equation 1: D0^y K + (i/2c) K x = 0.   Equation 2: i y K + 2c [K D0^x] = 0,
    with [K D0^x] = dK/dx0 e0 + dK/dr omega.  Derivatives are central
    differences with step ``h`` (needs r, g > h).
    """
    kernel = kernel or kernel_closed
    if x.r <= h or y.r <= h:
        raise ValueError("centres must satisfy r, g > h")
    e0 = Multivector.blade(params.dim, 0)
    c2 = 2 * params.c
    K = kernel(x, y, params)

    def ky(dy0, dg):
        return kernel(x, SlicePoint(y.x0 + dy0, y.r + dg, y.omega), params)

    def kx(dx0, dr):
        return kernel(SlicePoint(x.x0 + dx0, x.r + dr, x.omega), y, params)

    dKy0 = (ky(h, 0) - ky(-h, 0)) / (2 * h)
    dKg = (ky(0, h) - ky(0, -h)) / (2 * h)
    dKx0 = (kx(h, 0) - kx(-h, 0)) / (2 * h)
    dKr = (kx(0, h) - kx(0, -h)) / (2 * h)
    res1 = e0 * dKy0 + y.omega * dKg + K * x.vector() * (1j / c2)
    res2 = y.vector() * K * 1j + (dKx0 * e0 + dKr * x.omega) * c2
    return res1, res2


def kernel_pde_residual(params: Params, h: float, centers=None, kernel=None):
    """Max-norm residuals (eq1, eq2) over ``centers``, a list of (x, y) SlicePoint pairs.

    ``kernel`` defaults to :func:`kernel_closed` and may be any callable
    (x, y, params) -> Multivector.
    """
    if centers is None:
        centers = default_pde_centers(params)
    r1 = r2 = 0.0
    for x, y in centers:
        a, b = kernel_pde_terms(x, y, params, h, kernel)
        r1 = max(r1, a.norm_inf())
        r2 = max(r2, b.norm_inf())
    return r1, r2


def default_pde_centers(params: Params, count: int = 6, seed: int = 7):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        pts = []
        for _ in range(2):
            v = rng.normal(size=params.m)
            v /= np.linalg.norm(v)
            omega = Multivector.vector(params.dim, np.concatenate([[0.0], v]))
            pts.append(SlicePoint(float(rng.uniform(-1.5, 1.5)), float(rng.uniform(0.3, 1.5)), omega))
        out.append(tuple(pts))
    return out


# ---------------------------------------------------------------------------
# basic properties
# ---------------------------------------------------------------------------

@dataclass
class PropertyReport:
    translation: float
    reflection: float
    conjugation: float
    e0_commutation: float
    twofold: float

    def as_dict(self):
        return dict(self.__dict__)

    def worst(self) -> float:
        return max(self.as_dict().values())


def _rel(a: SliceField, b: SliceField) -> float:
    return rel_error(a, b)


def property_checks(field: SliceField, a: float, fast: bool = True) -> PropertyReport:
    """Relative deviations of the five basic identities for ``field``.

    ``a`` must be an integer number of x0 cells; reflection is n -> N0 - n
    on the grid (the x0 = -L row maps to itself).
    """
    g = field.grid
    cells = a / g.h0
    if abs(cells - round(cells)) > 1e-9 or abs(round(cells)) >= g.N0:
        raise ValueError(f"shift a={a!r} is not a whole number of grid cells (h0={g.h0!r})")
    cells = int(round(cells))
    fwd = forward_fast if fast else forward
    Ff = fwd(field)
    c = field.params.c

    shifted = fwd(field.shift_x0(cells))
    phase = np.exp(-1j * (cells * g.h0) * Ff.grid.x0 / (2 * c))[:, None, None]
    expect = Ff._like(Ff.f1 * phase, Ff.f2 * phase)
    t = _rel(shifted, expect)

    s = _rel(fwd(field.reflect()), Ff.reflect())

    lhs = fwd(field.conj())
    cj = _rel(lhs, -(Ff.reflect().conj()))

    e0f = field._like(e0_left(field.f1), -e0_left(field.f2))
    e0F = Ff._like(e0_left(Ff.f1), -e0_left(Ff.f2))
    e0c = _rel(fwd(e0f), e0F)

    tw = _rel(fwd(Ff), -field.reflect())
    return PropertyReport(t, s, cj, e0c, tw)
