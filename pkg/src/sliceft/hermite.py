"""Clifford-Hermite polynomials and functions psi_{j,k} on the slice.

psi_{j,k} = (x - c D0)^j m_k(x) exp(-|x|^2 / 4c) with m_k = (e0 - 1)(x0 + x_)^k.
The primary evaluation path is the Laguerre closed form; the operator form
is only used (by finite differences) as a cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .multivector import Multivector, Params, gp, sphere_area
from .slicefield import GridSpec, SliceField, apply_D0, e0_left, multiply_x, sample
from .specfun import gamma_value, gaussian_weight, laguerre

__all__ = [
    "HermiteIndex",
    "SlicePoint",
    "monomial_m_k",
    "coefficient_C",
    "hermite_function",
    "hermite_split",
    "hermite_field",
    "norm_A",
    "eigenvalue",
    "raising_apply",
    "random_span_field",
]


@dataclass(frozen=True)
class HermiteIndex:
    j: int
    k: int

    def __post_init__(self):
        if self.j < 0 or self.k < 0:
            raise ValueError(f"indices must be non-negative, got ({self.j}, {self.k})")

    @property
    def t(self) -> int:
        return self.j // 2


@dataclass(frozen=True)
class SlicePoint:
    """x = x0 e0 + r omega with omega a unit vector in span{e1..e_m}."""

    x0: float
    r: float
    omega: Multivector

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("r must be non-negative")
        c = self.omega.coeffs
        vec = [1 << i for i in range(1, self.omega.dim)]
        if np.any(np.abs(np.delete(c, vec)) > 1e-12):
            raise ValueError("omega must be a 1-vector in span{e1..e_m}")
        if abs(np.sum(np.abs(c[vec]) ** 2) - 1.0) > 1e-12:
            raise ValueError("omega must have unit norm")

    @property
    def dim(self) -> int:
        return self.omega.dim

    def vector(self) -> Multivector:
        return Multivector.blade(self.dim, 0, value=self.x0) + self.omega * self.r

    def paravector(self) -> Multivector:
        """x0 + r omega (no e0)."""
        return self.omega * self.r + self.x0

    def mirrored(self) -> "SlicePoint":
        return SlicePoint(-self.x0, self.r, -self.omega)

    @property
    def abs2(self) -> float:
        return self.x0 ** 2 + self.r ** 2


def _e0_minus_one(dim):
    return Multivector.blade(dim, 0) - 1.0


def monomial_m_k(p: SlicePoint, k: int) -> Multivector:
    """m_k(x) = (e0 - 1)(x0 + r omega)^k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out = _e0_minus_one(p.dim)
    z = p.paravector()
    for _ in range(k):
        out = out * z
    return out


def coefficient_C(j: int, k: int) -> float:
    t, odd = divmod(j, 2)
    return float(-2 * (k + t + 1)) if odd else float(-2 * t)


def eigenvalue(j: int, k: int) -> complex:
    """(-i)^(j + k + 1), exact."""
    return (1, -1j, -1, 1j)[(j + k + 1) % 4]


def norm_A(idx: HermiteIndex, params: Params) -> float:
    """Squared norm <psi_{j,k}, psi_{j,k}>."""
    j, k = idx.j, idx.k
    t, odd = divmod(j, 2)
    c2 = 2 * params.c
    tail = math.pi ** (params.m / 2 + 1) / gamma_value(params.m / 2)
    if odd:
        return 2 * c2 ** (2 * t + k + 2) * math.factorial(t) * math.factorial(k + t + 1) * tail
    return 2 * c2 ** (2 * t + k + 1) * math.factorial(t) * math.factorial(k + t) * tail


def hermite_function(idx: HermiteIndex, p: SlicePoint, params: Params) -> Multivector:
    """psi_{j,k} at a single point, via the Laguerre closed form."""
    if p.dim != params.dim:
        raise ValueError("point dimension does not match params")
    t, odd = divmod(idx.j, 2)
    c = params.c
    s = p.abs2 / (2 * c)
    pref = (2 * c) ** t * math.factorial(t) * float(gaussian_weight(p.x0, p.r, c))
    mk = monomial_m_k(p, idx.k)
    if odd:
        return p.vector() * mk * (pref * laguerre(t, idx.k + 1, s))
    return mk * (pref * laguerre(t, idx.k, s))


def hermite_split(j: int, k: int, X0, R, params: Params, normalized: bool = False):
    """Split parts (f1, f2) of psi_{j,k} on arrays of (x0, r).

    With (x0 + i r)^k = P + i Q one has m_k = (e0 - 1) P - omega (e0 + 1) Q,
    and x h = (x0 e0 h1 - r h2) + omega (r h1 - x0 e0 h2).  ``normalized``
    divides by sqrt(norm_A) using log-factorials so large indices do not overflow.
    """
    X0 = np.asarray(X0, dtype=np.float64)
    R = np.asarray(R, dtype=np.float64)
    nb = params.nblades
    c = params.c
    t, odd = divmod(j, 2)
    s = (X0 ** 2 + R ** 2) / (2 * c)
    if normalized:
        # (2c)^t t! / sqrt(A) with (x0 + i r)^k rescaled by (2c)^{-k/2}
        log_a = (math.log(2) + (2 * t + k + 1 + odd) * math.log(2 * c) + math.lgamma(t + 1)
                 + math.lgamma(k + t + 1 + odd) + math.log(math.pi ** (params.m / 2 + 1) / gamma_value(params.m / 2)))
        lpref = t * math.log(2 * c) + math.lgamma(t + 1) - 0.5 * log_a + 0.5 * k * math.log(2 * c)
        z = ((X0 + 1j * R) / math.sqrt(2 * c)) ** k
    else:
        lpref = None
        z = (X0 + 1j * R) ** k
    P, Q = z.real, z.imag
    lag = laguerre(t, k + odd, s)
    scal = lag * np.exp(-(X0 ** 2 + R ** 2) / (4 * c))
    scal = scal * (math.exp(lpref) if normalized else (2 * c) ** t * math.factorial(t))
    f1 = np.zeros((*X0.shape, nb), dtype=np.complex128)
    f2 = np.zeros((*X0.shape, nb), dtype=np.complex128)
    # (e0 - 1) P and -(e0 + 1) Q
    f1[..., 0] = -P
    f1[..., 1] = P
    f2[..., 0] = -Q
    f2[..., 1] = -Q
    if odd:
        X = X0[..., None]
        Rr = R[..., None]
        f1, f2 = X * e0_left(f1) - Rr * f2, Rr * f1 - X * e0_left(f2)
    return f1 * scal[..., None], f2 * scal[..., None]


def hermite_field(j: int, k: int, grid: GridSpec, params: Params, normalized: bool = False) -> SliceField:
    return sample(lambda X0, R: hermite_split(j, k, X0, R, params, normalized), grid, params)


def raising_apply(field: SliceField, params: Params | None = None) -> SliceField:
    """Raising operator x/2 - c D0 applied by finite differences."""
    params = params or field.params
    g = field.grid
    if g.N0 < 3 or g.Nr < 3:
        raise ValueError("raising_apply needs at least 3 points per axis")
    return multiply_x(field) * 0.5 - apply_D0(field) * params.c


def random_span_field(grid: GridSpec, params: Params, rng, max_index: int = 3) -> SliceField:
    """Random right-linear combination sum psi_{j,k} a_{j,k} of normalised psi, j, k <= max_index.

    The coefficients a_{j,k} are full complex multivectors with standard normal parts.
    """
    nb = params.nblades
    X0, R = grid.mesh()
    dim = params.dim
    f1 = np.zeros((*grid.shape, nb), dtype=np.complex128)
    f2 = np.zeros_like(f1)
    for j in range(max_index + 1):
        for k in range(max_index + 1):
            a = rng.normal(size=nb) + 1j * rng.normal(size=nb)
            p1, p2 = hermite_split(j, k, X0, R, params, normalized=True)
            f1 += gp(p1, a, dim)
            f2 += gp(p2, a, dim)
    return SliceField(grid, params, f1, f2)
