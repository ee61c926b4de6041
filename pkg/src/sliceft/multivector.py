"""Dense complexified Clifford algebra Cl(m+1) with e_i^2 = -1.

A multivector over ``dim`` generators e0..e_{dim-1} is stored as ``2**dim``
complex coefficients.  Coefficient index is the blade bitmask: bit i set means
the blade contains e_i, factors in increasing index order.

Most of the numerics works on plain arrays whose last axis holds the blade
coefficients; :class:`Multivector` wraps a single value for the pointwise API.
"""
from __future__ import annotations

import json
import math
from functools import lru_cache

import numpy as np

from . import _accel

__all__ = [
    "Multivector",
    "Params",
    "geometric_product",
    "clifford_conjugate",
    "grade_project",
    "scalar_part",
    "eta_sandwich",
    "sphere_sandwich_oracle",
    "blade_label",
    "parse_blade_label",
    "gp",
    "conj_array",
    "sandwich_array",
]


class Params:
    """Algebra parameter ``m`` (generators e1..e_m besides e0) and scale ``c``."""

    __slots__ = ("m", "c")

    def __init__(self, m: int = 2, c: float = 0.5):
        if int(m) != m or m < 2:
            raise ValueError(f"m must be an integer >= 2, got {m!r}")
        if not (c > 0 and math.isfinite(c)):
            raise ValueError(f"c must be positive, got {c!r}")
        self.m = int(m)
        self.c = float(c)

    @property
    def dim(self) -> int:
        return self.m + 1

    @property
    def nblades(self) -> int:
        return 1 << (self.m + 1)

    def __eq__(self, other):
        return isinstance(other, Params) and self.m == other.m and self.c == other.c

    def __hash__(self):
        return hash((self.m, self.c))

    def __repr__(self):
        return f"Params(m={self.m}, c={self.c!r})"


# ---------------------------------------------------------------------------
# blade tables
# ---------------------------------------------------------------------------

def _reorder_sign(a: int, b: int) -> int:
    """Sign of e_A e_B -> +-e_{A^B} for bitmasks A, B with e_i^2 = -1."""
    swaps = 0
    bb = b
    j = 0
    while bb:
        if bb & 1:
            swaps += bin(a >> (j + 1)).count("1")
        bb >>= 1
        j += 1
    sign = -1 if swaps & 1 else 1
    if bin(a & b).count("1") & 1:
        sign = -sign
    return sign


@lru_cache(maxsize=None)
def cayley(dim: int):
    """Index and sign tables: e_i e_j = sign[i, j] * e_{idx[i, j]}."""
    n = 1 << dim
    idx = np.empty((n, n), dtype=np.int64)
    sign = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(n):
            idx[i, j] = i ^ j
            sign[i, j] = _reorder_sign(i, j)
    idx.setflags(write=False)
    sign.setflags(write=False)
    return idx, sign


@lru_cache(maxsize=None)
def grades(dim: int) -> np.ndarray:
    g = np.array([bin(i).count("1") for i in range(1 << dim)], dtype=np.int64)
    g.setflags(write=False)
    return g


@lru_cache(maxsize=None)
def _conj_signs(dim: int) -> np.ndarray:
    k = grades(dim)
    # reversal (-1)^{k(k-1)/2} combined with negation of every generator
    s = np.where(((k * (k - 1) // 2) + k) % 2 == 0, 1.0, -1.0)
    s.setflags(write=False)
    return s


@lru_cache(maxsize=None)
def sandwich_factors(m: int) -> np.ndarray:
    """Diagonal of the sphere-averaged sandwich a -> mean_eta(eta a eta).

    Grades count e1..e_m only; blades carrying e0 pick up an extra sign since
    eta e0 = -e0 eta.
    """
    dim = m + 1
    out = np.empty(1 << dim)
    for blade in range(1 << dim):
        k = bin(blade >> 1).count("1")
        f = (-1) ** k * (2 * k - m) / m
        out[blade] = -f if blade & 1 else f
    out.setflags(write=False)
    return out


def blade_label(blade: int) -> str:
    if blade == 0:
        return "1"
    return "".join(f"e{i}" for i in range(blade.bit_length()) if blade >> i & 1)


def parse_blade_label(label: str) -> int:
    label = label.strip()
    if label == "1":
        return 0
    if not label.startswith("e"):
        raise ValueError(f"bad blade label {label!r}")
    blade = 0
    last = -1
    for part in label[1:].split("e"):
        i = int(part)
        if i <= last:
            raise ValueError(f"blade label {label!r} not in canonical order")
        blade |= 1 << i
        last = i
    return blade


# ---------------------------------------------------------------------------
# array-level operations (last axis = blades)
# ---------------------------------------------------------------------------

def gp(a, b, dim: int) -> np.ndarray:
    """Geometric product of (broadcastable) coefficient arrays."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    n = 1 << dim
    if a.shape[-1] != n or b.shape[-1] != n:
        raise ValueError(f"expected last axis {n}, got {a.shape[-1]} and {b.shape[-1]}")
    shape = np.broadcast_shapes(a.shape, b.shape)
    A = np.ascontiguousarray(np.broadcast_to(a, shape)).reshape(-1, n)
    B = np.ascontiguousarray(np.broadcast_to(b, shape)).reshape(-1, n)
    idx, sign = cayley(dim)
    return _accel.gp_rows(A, B, idx, sign).reshape(shape)


def conj_array(a, dim: int) -> np.ndarray:
    return np.conj(a) * _conj_signs(dim)


def sandwich_array(a, m: int) -> np.ndarray:
    return np.asarray(a) * sandwich_factors(m)


def sphere_area(m: int) -> float:
    """Area of the unit sphere S^{m-1} in R^m."""
    from .specfun import gamma_value

    return 2.0 * math.pi ** (m / 2) / gamma_value(m / 2)


# ---------------------------------------------------------------------------
# Multivector value type
# ---------------------------------------------------------------------------

class Multivector:
    """Single element of complexified Cl(dim)."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs=None):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        n = 1 << dim
        if coeffs is None:
            coeffs = np.zeros(n, dtype=np.complex128)
        else:
            coeffs = np.array(coeffs, dtype=np.complex128).reshape(-1)
            if coeffs.size != n:
                raise ValueError(f"need {n} coefficients for dim={dim}, got {coeffs.size}")
        self.dim = dim
        self.coeffs = coeffs

    # constructors -----------------------------------------------------------
    @classmethod
    def scalar(cls, dim, value=1.0):
        mv = cls(dim)
        mv.coeffs[0] = value
        return mv

    @classmethod
    def blade(cls, dim, *indices, value=1.0):
        """Product e_{i1} e_{i2} ... of generators, in the order given."""
        out = cls.scalar(dim, value)
        for i in indices:
            if not 0 <= i < dim:
                raise ValueError(f"generator e{i} out of range for dim={dim}")
            e = cls(dim)
            e.coeffs[1 << i] = 1.0
            out = out * e
        return out

    @classmethod
    def vector(cls, dim, components):
        components = list(components)
        if len(components) != dim:
            raise ValueError("need one component per generator")
        mv = cls(dim)
        for i, v in enumerate(components):
            mv.coeffs[1 << i] = v
        return mv

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Multivector):
            if other.dim != self.dim:
                raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other
        if np.isscalar(other):
            return Multivector.scalar(self.dim, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.dim, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.dim, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Multivector(self.dim, -self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return Multivector(self.dim, self.coeffs * other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return geometric_product(self, other)

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.dim, self.coeffs * other)
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return Multivector(self.dim, self.coeffs / other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def close_to(self, other, atol=1e-12) -> bool:
        other = self._coerce(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs), initial=0.0) <= atol)

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def conj(self):
        return clifford_conjugate(self)

    def grade(self, k):
        return grade_project(self, k)

    @property
    def scalar_part(self):
        return self.coeffs[0]

    def __repr__(self):
        terms = []
        for b, v in enumerate(self.coeffs):
            if v != 0:
                terms.append(f"({v:.6g})*{blade_label(b)}")
        return "Multivector(" + (" + ".join(terms) or "0") + ")"

    # serialisation -----------------------------------------------------------
    def to_json(self) -> str:
        return json.dumps([[float(v.real), float(v.imag)] for v in self.coeffs])

    @classmethod
    def from_json(cls, text: str):
        pairs = json.loads(text)
        n = len(pairs)
        dim = n.bit_length() - 1
        if n == 0 or 1 << dim != n:
            raise ValueError(f"coefficient count {n} is not a power of two")
        return cls(dim, [complex(re, im) for re, im in pairs])


# ---------------------------------------------------------------------------
# pointwise operations
# ---------------------------------------------------------------------------

def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    idx, sign = cayley(a.dim)
    out = np.zeros_like(a.coeffs)
    for i in np.flatnonzero(a.coeffs):
        np.add.at(out, idx[i], sign[i] * a.coeffs[i] * b.coeffs)
    return Multivector(a.dim, out)


def clifford_conjugate(a: Multivector) -> Multivector:
    return Multivector(a.dim, conj_array(a.coeffs, a.dim))


def grade_project(a: Multivector, k: int) -> Multivector:
    if not 0 <= k <= a.dim:
        raise ValueError(f"grade {k} out of range 0..{a.dim}")
    return Multivector(a.dim, np.where(grades(a.dim) == k, a.coeffs, 0))


def scalar_part(a: Multivector) -> complex:
    return complex(a.coeffs[0])


def eta_sandwich(a: Multivector, m: int) -> Multivector:
    """Sphere average of eta * a * eta over unit vectors eta in span{e1..e_m}.

    Writing a = b + e0 c with b, c free of e0, the result is
    sum_k (-1)^k (2k - m)/m (b^(k) - e0 c^(k)), grades counted over e1..e_m.
    """
    if a.dim != m + 1:
        raise ValueError(f"multivector dim {a.dim} does not match m + 1 = {m + 1}")
    return Multivector(a.dim, sandwich_array(a.coeffs, m))


def _unit_vectors(m: int, n_points: int):
    """Quadrature nodes and weights on S^{m-1} (weights sum to the area)."""
    if m == 2:
        theta = 2 * np.pi * np.arange(n_points) / n_points
        nodes = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        weights = np.full(n_points, 2 * np.pi / n_points)
        return nodes, weights
    if m == 3:
        n_z = max(2, int(round(math.sqrt(n_points / 2))))
        n_phi = max(4, n_points // n_z)
        z, wz = np.polynomial.legendre.leggauss(n_z)
        phi = 2 * np.pi * np.arange(n_phi) / n_phi
        Z, PHI = np.meshgrid(z, phi, indexing="ij")
        s = np.sqrt(1 - Z ** 2)
        nodes = np.stack([s * np.cos(PHI), s * np.sin(PHI), Z], axis=-1).reshape(-1, 3)
        weights = (wz[:, None] * np.full(n_phi, 2 * np.pi / n_phi)[None, :]).reshape(-1)
        return nodes, weights
    raise ValueError(f"sphere quadrature only implemented for m in (2, 3), got m={m}")


def sphere_sandwich_oracle(a: Multivector, m: int, n_points: int = 512) -> Multivector:
    """Direct quadrature of the integral of eta a eta over S^{m-1}."""
    if n_points < 64:
        raise ValueError("n_points must be >= 64")
    if a.dim != m + 1:
        raise ValueError(f"multivector dim {a.dim} does not match m + 1 = {m + 1}")
    nodes, weights = _unit_vectors(m, n_points)
    eta = np.zeros((len(nodes), 1 << a.dim), dtype=np.complex128)
    for i in range(m):
        eta[:, 1 << (i + 1)] = nodes[:, i]
    vals = gp(gp(eta, a.coeffs, a.dim), eta, a.dim)
    return Multivector(a.dim, weights @ vals)
