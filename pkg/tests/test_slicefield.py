import math

import numpy as np
import pytest

from sliceft.hermite import random_span_field
from sliceft.multivector import Multivector, Params, conj_array, gp
from sliceft.slicefield import (
    GridSpec,
    SliceField,
    apply_D0,
    dumps_csv,
    even_extension,
    inner_product,
    norm,
    odd_extension,
    read_csv,
    read_json,
    rel_error,
    sample,
    write_csv,
    write_json,
)


@pytest.fixture
def field(params, rng):
    return random_span_field(GridSpec(8.0, 16, 8.0, 12), params, rng, max_index=2)


def test_inner_product_matches_full_quadrature(params, rng):
    # brute force over (x0, r, theta) with full Clifford products at each node
    grid = GridSpec(8.0, 24, 8.0, 16)
    f = random_span_field(grid, params, rng, 2)
    g = random_span_field(grid, params, rng, 2)
    n_theta = 12
    total = 0j
    w = grid.r_weights()
    for th in 2 * np.pi * np.arange(n_theta) / n_theta:
        omega = np.zeros(8, complex)
        omega[2], omega[4] = np.cos(th), np.sin(th)
        fv = f.f1 + gp(omega, f.f2, 3)
        gv = g.f1 + gp(omega, g.f2, 3)
        prod = gp(conj_array(fv, 3), gv, 3)[..., 0]
        total += np.sum(prod * w[None, :]) * grid.h0 * grid.hr * 2 * np.pi / n_theta
    assert abs(inner_product(f, g) - total) < 1e-12 * abs(total)


def test_inner_product_hermitian(field, params, rng):
    g = random_span_field(field.grid, params, rng, 2)
    assert inner_product(field, g) == pytest.approx(np.conj(inner_product(g, field)), rel=1e-13)
    assert inner_product(field, field).imag == pytest.approx(0, abs=1e-12 * norm(field) ** 2)


def test_rel_error(field):
    assert rel_error(field, field) == 0
    assert rel_error(field * 1.5, field) == pytest.approx(0.5)


def test_extensions(field):
    Nr = field.grid.Nr
    E = even_extension(field)
    O = odd_extension(field)
    assert E.shape == (field.grid.N0, 2 * Nr, 8)
    assert np.all(E[:, 0] == 0) and np.all(O[:, 0] == 0)
    assert np.all(O[:, Nr] == 0)
    for q in range(1, Nr):
        assert np.array_equal(E[:, Nr + q], field.f1[:, q])
        assert np.array_equal(E[:, Nr - q], field.f1[:, q])
        assert np.array_equal(O[:, Nr + q], field.f2[:, q])
        assert np.array_equal(O[:, Nr - q], -field.f2[:, q])


def test_D0_of_constant_is_zero(params):
    grid = GridSpec(2.0, 8, 2.0, 6)
    c = np.arange(8) + 1j
    f = sample(lambda X0, R: (np.broadcast_to(c, (*X0.shape, 8)), 0), grid, params)
    d = apply_D0(f)
    assert d.max_abs() == 0


def test_reflect_and_shift(field):
    r = field.reflect()
    assert np.array_equal(r.reflect().f1, field.f1)
    assert np.array_equal(r.f2[3], -field.f2[field.grid.N0 - 3])
    s = field.shift_x0(2)
    assert np.array_equal(s.f1[2:], field.f1[:-2])
    assert np.all(s.f1[:2] == 0)
    assert np.array_equal(field.shift_x0(-3).f2[:-3], field.f2[3:])


def test_value_recombines(field):
    omega = Multivector.blade(3, 2)
    v = field.value(3, 4, omega)
    expect = Multivector(3, field.f1[3, 4]) + omega * Multivector(3, field.f2[3, 4])
    assert v.close_to(expect, 1e-15)


def test_frequency_grid_is_an_involution(params):
    for g in (GridSpec.default(params), GridSpec(5.0, 48, 3.0, 20)):
        back = g.frequency_grid(params.c).frequency_grid(params.c)
        assert back.N0 == g.N0 and back.Nr == g.Nr
        assert back.L == pytest.approx(g.L, rel=1e-14) and back.R == pytest.approx(g.R, rel=1e-14)


def test_frequency_grid_spacing(params):
    g = GridSpec.default(params)
    fg = g.frequency_grid(params.c)
    assert fg.h0 == pytest.approx(2 * math.pi * 2 * params.c / (g.N0 * g.h0))
    assert fg.hr == pytest.approx(2 * math.pi * 2 * params.c / (2 * g.Nr * g.hr))


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(0, 8, 1, 8)
    with pytest.raises(ValueError):
        GridSpec(1, 7, 1, 8)
    with pytest.raises(ValueError):
        GridSpec(1, 8, 1, 2)
    assert GridSpec(1, 64, 1, 32).fft_friendly()
    assert not GridSpec(1, 48, 1, 32).fft_friendly()


def test_field_validation(params):
    g = GridSpec(1, 8, 1, 4)
    with pytest.raises(ValueError):
        SliceField(g, params, np.zeros((8, 4, 4)), np.zeros((8, 4, 4)))
    a = SliceField.zeros(g, params)
    b = SliceField.zeros(GridSpec(2, 8, 1, 4), params)
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        a - SliceField.zeros(g, Params(2, 1.0))


def test_csv_round_trip_exact(field, tmp_path):
    field.meta = {"note": "x"}
    p = tmp_path / "f.csv"
    write_csv(field, p)
    back = read_csv(p)
    assert back.grid == field.grid and back.params == field.params
    assert np.array_equal(back.f1, field.f1) and np.array_equal(back.f2, field.f2)
    assert back.meta == {"note": "x"}
    assert dumps_csv(back) == p.read_text()


def test_json_round_trip_exact(field, tmp_path):
    p = tmp_path / "f.json"
    write_json(field, p)
    back = read_json(p)
    assert np.array_equal(back.f1, field.f1) and np.array_equal(back.f2, field.f2)


def test_csv_without_header_line(field, tmp_path):
    p = tmp_path / "f.csv"
    write_csv(field, p)
    lines = p.read_text().splitlines()[1:]
    q = tmp_path / "g.csv"
    q.write_text("\n".join(lines) + "\n")
    back = read_csv(q)
    assert back.grid.N0 == field.grid.N0 and back.params.m == 2
    assert np.array_equal(back.f1, field.f1)


def test_csv_rejects_bad_input(field, tmp_path):
    p = tmp_path / "f.csv"
    write_csv(field, p)
    text = p.read_text().replace("x0,r,part,blade,re,im", "a,b,c,d,e,f")
    p.write_text(text)
    with pytest.raises(ValueError):
        read_csv(p)
    write_csv(field, p)
    lines = p.read_text().splitlines()
    lines[2] = "0.123," + lines[2].split(",", 1)[1]
    p.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError):
        read_csv(p)
