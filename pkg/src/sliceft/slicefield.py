"""Sampled slice functions f = f1(x0, r) + omega f2(x0, r) on uniform grids."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .multivector import (
    Multivector,
    Params,
    blade_label,
    conj_array,
    gp,
    parse_blade_label,
    sphere_area,
)

__all__ = [
    "GridSpec",
    "SliceField",
    "sample",
    "sample_pointwise",
    "even_extension",
    "odd_extension",
    "inner_product",
    "norm",
    "rel_error",
    "apply_D0",
    "multiply_x",
    "e0_left",
    "write_csv",
    "dumps_csv",
    "read_csv",
    "write_json",
    "read_json",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid: x0 in [-L, L) with N0 points, r in [0, R) with Nr points."""

    L: float
    N0: int
    R: float
    Nr: int

    def __post_init__(self):
        if not (self.L > 0 and self.R > 0):
            raise ValueError("grid extents must be positive")
        if self.N0 < 8 or self.N0 % 2:
            raise ValueError(f"N0 must be even and >= 8, got {self.N0}")
        if self.Nr < 4:
            raise ValueError(f"Nr must be >= 4, got {self.Nr}")

    @classmethod
    def default(cls, params: Params, N0: int = 256, Nr: int = 256, scale: float = 12.0):
        ext = scale * math.sqrt(2 * params.c)
        return cls(ext, N0, ext, Nr)

    @property
    def h0(self) -> float:
        return 2 * self.L / self.N0

    @property
    def hr(self) -> float:
        return self.R / self.Nr

    @property
    def x0(self) -> np.ndarray:
        return -self.L + self.h0 * np.arange(self.N0)

    @property
    def r(self) -> np.ndarray:
        return self.hr * np.arange(self.Nr)

    @property
    def shape(self):
        return (self.N0, self.Nr)

    def mesh(self):
        return np.meshgrid(self.x0, self.r, indexing="ij")

    def r_weights(self) -> np.ndarray:
        """Half-line trapezoid weights in r (the r = 0 node counts half)."""
        w = np.ones(self.Nr)
        w[0] = 0.5
        return w

    def frequency_grid(self, c: float) -> "GridSpec":
        """Grid on which the transform of a field on this grid is sampled.

        Spacings are dy0 = 2*pi*2c / (N0 h0) and dg = 2*pi*2c / (2 Nr hr), which
        makes exp(-i x0 y0 / 2c) an exact DFT phase.  Applying this twice gives
        back the original grid.
        """
        dy0 = 4 * math.pi * c / (self.N0 * self.h0)
        dg = 4 * math.pi * c / (2 * self.Nr * self.hr)
        return GridSpec(self.N0 * dy0 / 2, self.N0, self.Nr * dg, self.Nr)

    def fft_friendly(self) -> bool:
        def pow2(n):
            return n > 0 and n & (n - 1) == 0

        return pow2(self.N0) and pow2(2 * self.Nr)

    def to_dict(self):
        return {"L": self.L, "N0": self.N0, "R": self.R, "Nr": self.Nr}


@dataclass
class SliceField:
    """A slice function sampled on ``grid``; ``f1``/``f2`` have shape (N0, Nr, 2**(m+1))."""

    grid: GridSpec
    params: Params
    f1: np.ndarray
    f2: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        shape = (*self.grid.shape, self.params.nblades)
        self.f1 = np.asarray(self.f1, dtype=np.complex128)
        self.f2 = np.asarray(self.f2, dtype=np.complex128)
        if self.f1.shape != shape or self.f2.shape != shape:
            raise ValueError(f"component arrays must have shape {shape}, got {self.f1.shape} / {self.f2.shape}")

    @classmethod
    def zeros(cls, grid: GridSpec, params: Params):
        shape = (*grid.shape, params.nblades)
        return cls(grid, params, np.zeros(shape, complex), np.zeros(shape, complex))

    def _like(self, f1, f2, **meta):
        return SliceField(self.grid, self.params, f1, f2, dict(meta))

    def check_compatible(self, other: "SliceField"):
        if self.grid != other.grid:
            raise ValueError(f"grid mismatch: {self.grid} vs {other.grid}")
        if self.params != other.params:
            raise ValueError(f"params mismatch: {self.params} vs {other.params}")

    def __add__(self, other):
        self.check_compatible(other)
        return self._like(self.f1 + other.f1, self.f2 + other.f2)

    def __sub__(self, other):
        self.check_compatible(other)
        return self._like(self.f1 - other.f1, self.f2 - other.f2)

    def __neg__(self):
        return self._like(-self.f1, -self.f2)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return self._like(self.f1 * scalar, self.f2 * scalar)

    __rmul__ = __mul__

    def right_mul(self, a) -> "SliceField":
        """Pointwise f(x) * a for a constant multivector a."""
        a = a.coeffs if isinstance(a, Multivector) else np.asarray(a)
        dim = self.params.dim
        return self._like(gp(self.f1, a, dim), gp(self.f2, a, dim))

    def conj(self) -> "SliceField":
        """Complex conjugate of all coefficients (not the Clifford conjugate)."""
        return self._like(np.conj(self.f1), np.conj(self.f2))

    def reflect(self) -> "SliceField":
        """(x0, r, omega) -> (-x0, r, -omega), with the grid index n -> N0 - n."""
        rev = (-np.arange(self.grid.N0)) % self.grid.N0
        return self._like(self.f1[rev], -self.f2[rev])

    def shift_x0(self, cells: int) -> "SliceField":
        """Translation f(x0 - a) with a = cells * h0; vacated rows are zero."""
        f1 = np.zeros_like(self.f1)
        f2 = np.zeros_like(self.f2)
        if cells >= 0:
            f1[cells:] = self.f1[: self.grid.N0 - cells]
            f2[cells:] = self.f2[: self.grid.N0 - cells]
        else:
            f1[:cells] = self.f1[-cells:]
            f2[:cells] = self.f2[-cells:]
        return self._like(f1, f2)

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.f1)), np.max(np.abs(self.f2))))

    def value(self, n: int, q: int, omega: Multivector) -> Multivector:
        """Full multivector f1 + omega f2 at grid node (n, q)."""
        dim = self.params.dim
        return Multivector(dim, self.f1[n, q] + gp(omega.coeffs, self.f2[n, q], dim))


# ---------------------------------------------------------------------------
# sampling and extensions
# ---------------------------------------------------------------------------

def sample(evaluator, grid: GridSpec, params: Params) -> SliceField:
    """Tabulate a split evaluator ``(X0, R) -> (f1, f2)`` on the grid nodes.

    ``X0`` and ``R`` are (N0, Nr) meshes; the evaluator returns arrays of shape
    (N0, Nr, 2**(m+1)), or anything broadcastable to that.
    """
    X0, R = grid.mesh()
    f1, f2 = evaluator(X0, R)
    shape = (*grid.shape, params.nblades)
    f1 = np.broadcast_to(np.asarray(f1, dtype=np.complex128), shape).copy()
    f2 = np.broadcast_to(np.asarray(f2, dtype=np.complex128), shape).copy()
    return SliceField(grid, params, f1, f2)


def sample_pointwise(fn, grid: GridSpec, params: Params, omega: Multivector | None = None) -> SliceField:
    """Tabulate a pointwise evaluator ``fn(x0, r, omega) -> Multivector``.

    The split parts follow from evaluating at omega and -omega:
    f1 = (f(w) + f(-w)) / 2 and f2 = -w (f(w) - f(-w)) / 2.
    """
    dim = params.dim
    if omega is None:
        omega = Multivector.blade(dim, 1)
    out = SliceField.zeros(grid, params)
    for n, x0 in enumerate(grid.x0):
        for q, r in enumerate(grid.r):
            fp = fn(x0, r, omega).coeffs
            fm = fn(x0, r, -omega).coeffs
            out.f1[n, q] = 0.5 * (fp + fm)
            out.f2[n, q] = -0.5 * gp(omega.coeffs, fp - fm, dim)
    return out


def even_extension(field: SliceField) -> np.ndarray:
    """f1 extended evenly to r in [-R, R); shape (N0, 2 Nr, nb).

    Row ``Nr + q`` holds r = q hr.  Row 0 (r = -R, not sampled) is zero.
    """
    return _extend(field.f1, parity=1)


def odd_extension(field: SliceField) -> np.ndarray:
    """f2 extended oddly to r in [-R, R); the r = 0 row is forced to zero."""
    return _extend(field.f2, parity=-1)


def _extend(a: np.ndarray, parity: int) -> np.ndarray:
    N0, Nr = a.shape[:2]
    out = np.zeros((N0, 2 * Nr, *a.shape[2:]), dtype=a.dtype)
    out[:, Nr:] = a
    out[:, 1:Nr] = parity * a[:, :0:-1]
    if parity < 0:
        out[:, Nr] = 0
    return out


# ---------------------------------------------------------------------------
# inner product
# ---------------------------------------------------------------------------

def inner_product(f: SliceField, g: SliceField) -> complex:
    """<f, g> = [integral of conj(f) g]_0 over x0, r and the sphere.

    The sphere integral is done analytically: cross terms are linear in omega
    and vanish, leaving Area(S^{m-1}) times the (x0, r) integral of
    [conj(f1) g1 + conj(f2) g2]_0.  Since conj(e_A) e_A = 1 for every blade,
    that scalar part is the plain Hermitian dot product of coefficients.
    """
    f.check_compatible(g)
    grid = f.grid
    w = grid.r_weights()[None, :]
    dens = np.sum(np.conj(f.f1) * g.f1 + np.conj(f.f2) * g.f2, axis=-1)
    return complex(sphere_area(f.params.m) * grid.h0 * grid.hr * np.sum(w * dens))


def norm(f: SliceField) -> float:
    return math.sqrt(max(inner_product(f, f).real, 0.0))


def rel_error(a: SliceField, b: SliceField) -> float:
    """||a - b|| / ||b|| in the L^2 norm of the inner product."""
    nb = norm(b)
    return norm(a - b) / nb if nb > 0 else norm(a - b)


# ---------------------------------------------------------------------------
# differential and multiplication operators
# ---------------------------------------------------------------------------

def e0_left(a: np.ndarray) -> np.ndarray:
    """Left multiplication by e0 on a coefficient array."""
    nb = a.shape[-1]
    blades = np.arange(nb)
    sign = np.where(blades & 1, -1.0, 1.0)
    out = np.empty_like(a)
    out[..., blades ^ 1] = a * sign
    return out


def _d_axis(a: np.ndarray, h: float, axis: int, parity: int | None = None) -> np.ndarray:
    """Second-order derivative along ``axis``: central inside, one-sided at edges.

    With ``parity`` given, the lower edge (r = 0) uses the mirror ghost value
    parity * a[1] instead of a one-sided stencil.
    """
    a = np.moveaxis(a, axis, 0)
    d = np.empty_like(a)
    d[1:-1] = (a[2:] - a[:-2]) / (2 * h)
    if parity is None:
        d[0] = (-3 * a[0] + 4 * a[1] - a[2]) / (2 * h)
    else:
        d[0] = (a[1] - parity * a[1]) / (2 * h)
    d[-1] = (3 * a[-1] - 4 * a[-2] + a[-3]) / (2 * h)
    return np.moveaxis(d, 0, axis)


def apply_D0(field: SliceField, parity: bool = True) -> SliceField:
    """Slice Dirac operator D0 = e0 d/dx0 + omega d/dr by finite differences.

    D0 f = (e0 f1_x0 - f2_r) + omega (f1_r - e0 f2_x0).  With ``parity`` the r = 0
    row uses the even/odd symmetry of f1/f2 rather than a one-sided stencil.
    """
    g = field.grid
    if g.N0 < 3 or g.Nr < 3:
        raise ValueError("apply_D0 needs at least 3 points per axis")
    p1, p2 = (1, -1) if parity else (None, None)
    f1_x0 = _d_axis(field.f1, g.h0, 0)
    f2_x0 = _d_axis(field.f2, g.h0, 0)
    f1_r = _d_axis(field.f1, g.hr, 1, p1)
    f2_r = _d_axis(field.f2, g.hr, 1, p2)
    return field._like(e0_left(f1_x0) - f2_r, f1_r - e0_left(f2_x0))


def multiply_x(field: SliceField) -> SliceField:
    """Left multiplication by x = x0 e0 + r omega, in split form."""
    X0, R = field.grid.mesh()
    X0 = X0[..., None]
    R = R[..., None]
    f1, f2 = field.f1, field.f2
    return field._like(X0 * e0_left(f1) - R * f2, R * f1 - X0 * e0_left(f2))


# ---------------------------------------------------------------------------
# I/O: CSV/JSON with columns x0, r, part, blade, re, im
# ---------------------------------------------------------------------------

COLUMNS = ["x0", "r", "part", "blade", "re", "im"]


def _header(field: SliceField) -> dict:
    return {"m": field.params.m, "c": field.params.c, "grid": field.grid.to_dict(), "meta": field.meta}


def _rows(field: SliceField):
    g = field.grid
    x0, r = g.x0, g.r
    nb = field.params.nblades
    labels = [blade_label(b) for b in range(nb)]
    for n in range(g.N0):
        for q in range(g.Nr):
            for part, arr in (("f1", field.f1), ("f2", field.f2)):
                vals = arr[n, q]
                for b in range(nb):
                    v = vals[b]
                    yield (float(x0[n]), float(r[q]), part, labels[b], float(v.real), float(v.imag))


def _from_rows(header: dict | None, rows) -> SliceField:
    rows = list(rows)
    if header is None:
        header = _infer_header(rows)
    params = Params(header["m"], header["c"])
    gd = header["grid"]
    grid = GridSpec(float(gd["L"]), int(gd["N0"]), float(gd["R"]), int(gd["Nr"]))
    out = SliceField.zeros(grid, params)
    out.meta = dict(header.get("meta") or {})
    x_index = {float(v): i for i, v in enumerate(grid.x0)}
    r_index = {float(v): i for i, v in enumerate(grid.r)}
    for x0, r, part, blade, re, im in rows:
        n = x_index.get(float(x0))
        q = r_index.get(float(r))
        if n is None or q is None:
            raise ValueError(f"node ({x0}, {r}) does not lie on the grid {grid}")
        target = out.f1 if part == "f1" else out.f2 if part == "f2" else None
        if target is None:
            raise ValueError(f"unknown part {part!r}")
        target[n, q, parse_blade_label(blade)] = complex(float(re), float(im))
    return out


def _infer_header(rows) -> dict:
    xs = sorted({float(r[0]) for r in rows})
    rs = sorted({float(r[1]) for r in rows})
    top = max(parse_blade_label(r[3]) for r in rows)
    dim = max(top.bit_length(), 3)
    return {
        "m": dim - 1,
        "c": 0.5,
        "grid": {"L": -xs[0], "N0": len(xs), "R": rs[1] * len(rs), "Nr": len(rs)},
    }


def dumps_csv(field: SliceField) -> str:
    """CSV text: a ``# sliceft {json}`` header line, the column row, then the data."""
    fh = io.StringIO()
    fh.write("# sliceft " + json.dumps(_header(field), sort_keys=True) + "\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in _rows(field):
        # repr gives the shortest string that round-trips
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return fh.getvalue()


def write_csv(field: SliceField, path) -> None:
    Path(path).write_text(dumps_csv(field))


def read_csv(path) -> SliceField:
    text = Path(path).read_text()
    header = None
    lines = text.splitlines()
    if lines and lines[0].startswith("#"):
        header = json.loads(lines[0].split(" ", 2)[2])
        lines = lines[1:]
    reader = csv.reader(io.StringIO("\n".join(lines)))
    cols = next(reader)
    if cols != COLUMNS:
        raise ValueError(f"unexpected CSV header {cols}")
    rows = ((float(a), float(b), p, bl, float(re), float(im)) for a, b, p, bl, re, im in reader)
    return _from_rows(header, rows)


def write_json(field: SliceField, path) -> None:
    doc = dict(_header(field), columns=COLUMNS, rows=[list(r) for r in _rows(field)])
    Path(path).write_text(json.dumps(doc))


def read_json(path) -> SliceField:
    doc = json.loads(Path(path).read_text())
    if doc.get("columns") != COLUMNS:
        raise ValueError("unexpected JSON columns")
    return _from_rows(doc, (tuple(r) for r in doc["rows"]))
