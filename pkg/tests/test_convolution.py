import json
from pathlib import Path

import numpy as np
import pytest

from sliceft.convolution import (
    calibrate_kappa,
    convolve,
    default_kappa,
    generalized_translate,
    max_rel_gap,
    mustard_spatial,
    mustard_spectral,
    slice_product,
    translate_convolve,
)
from sliceft.hermite import SlicePoint, hermite_field, random_span_field
from sliceft.multivector import Multivector, Params
from sliceft.slicefield import GridSpec, SliceField, norm
from sliceft.transform import forward_fast, kernel_constant

FIXTURES = Path(__file__).parent / "fixtures"
COARSE = GridSpec(12.0, 64, 12.0, 32)


def test_psi00_square_spectrum(small_grid, params):
    psi = hermite_field(0, 0, small_grid, params)
    F = forward_fast(psi)
    prod = slice_product(F, F)
    # F(psi00) = -i psi00 = -i G (e0 - 1), squared under the projected product
    G = -1j * F.f1[..., 0]
    expect = np.zeros_like(prod.f1)
    expect[..., 1] = 2 * G ** 2
    assert np.allclose(prod.f1, expect, atol=1e-14)
    assert np.abs(prod.f2).max() <= 1e-14


def test_zero_inputs(small_grid, params, rng):
    f = random_span_field(small_grid, params, rng)
    z = SliceField.zeros(small_grid, params)
    assert mustard_spectral(f, z).max_abs() == 0
    assert mustard_spatial(z, f).max_abs() == 0


def test_no_omega_part_from_scalar_like_inputs(small_grid, params, rng):
    f = random_span_field(small_grid, params, rng)
    g = random_span_field(small_grid, params, rng)
    f.f2[:] = 0
    g.f2[:] = 0
    out = mustard_spatial(f, g)
    assert np.abs(out.f2).max() <= 1e-12 * out.max_abs()


def test_not_commutative(small_grid, params, rng):
    f = random_span_field(small_grid, params, rng)
    g = random_span_field(small_grid, params, rng)
    assert max_rel_gap(mustard_spectral(f, g), mustard_spectral(g, f)) > 1e-3


def test_convolution_theorem(small_grid, params, rng):
    f = random_span_field(small_grid, params, rng)
    g = random_span_field(small_grid, params, rng)
    lhs = forward_fast(mustard_spectral(f, g))
    rhs = slice_product(forward_fast(f), forward_fast(g))
    assert norm(lhs - rhs) <= 1e-6 * norm(f) * norm(g)


def test_linear_in_each_argument(small_grid, params, rng):
    f, g, h = (random_span_field(small_grid, params, rng) for _ in range(3))
    a = 0.7 - 0.2j
    lhs = mustard_spatial(f * a + h, g)
    rhs = mustard_spatial(f, g) * a + mustard_spatial(h, g)
    assert max_rel_gap(lhs, rhs) <= 1e-12


@pytest.mark.parametrize("fast", [False, True])
def test_spatial_matches_spectral(fast, small_grid, params, rng):
    for _ in range(3):
        f = random_span_field(small_grid, params, rng)
        g = random_span_field(small_grid, params, rng)
        assert max_rel_gap(mustard_spatial(f, g), mustard_spectral(f, g, fast=fast)) <= 1e-5


def test_kappa_fixture():
    data = json.loads((FIXTURES / "kappa.json").read_text())
    params = Params(data["m"], data["c"])
    expect = complex(*data["kappa"])
    assert abs(default_kappa(params) - expect) <= 1e-15
    got = calibrate_kappa(params, GridSpec(**data["grid"]))
    assert abs(got - expect) <= 1e-10


def test_kappa_other_params():
    params = Params(3, 1.0)
    got = calibrate_kappa(params, GridSpec.default(params, 128, 128))
    assert abs(got - default_kappa(params)) <= 1e-8 * abs(default_kappa(params))


def test_translate_at_origin_scales(small_grid, params, rng):
    f = random_span_field(small_grid, params, rng)
    y = SlicePoint(0.0, 0.0, Multivector.blade(3, 1))
    C = kernel_constant(params)
    for path in ("spatial", "spectral"):
        assert max_rel_gap(generalized_translate(f, y, path), f * (2 * C)) <= 1e-10


@pytest.mark.parametrize("m", [2, 3])
def test_translate_paths_agree(m, small_grid, rng):
    params = Params(m, 0.5)
    f = random_span_field(small_grid, params, rng)
    v = rng.normal(size=m)
    y = SlicePoint(8 * small_grid.h0, 8 * small_grid.hr, Multivector.vector(m + 1, [0, *(v / np.linalg.norm(v))]))
    a = generalized_translate(f, y, "spatial")
    b = generalized_translate(f, y, "spectral")
    assert max_rel_gap(a, b) <= 1e-5
    assert a.meta["path"] == "spatial"


def test_translate_rejects_bad_input(small_grid, params):
    f = hermite_field(0, 0, small_grid, params)
    with pytest.raises(ValueError):
        generalized_translate(f, SlicePoint(100.0, 0.0, Multivector.blade(3, 1)))
    with pytest.raises(ValueError):
        generalized_translate(f, SlicePoint(0.0, 0.0, Multivector.blade(3, 1)), path="nope")


def test_translate_convolve_matches(params, rng):
    f = random_span_field(COARSE, params, rng)
    g = random_span_field(COARSE, params, rng)
    assert max_rel_gap(translate_convolve(f, g), mustard_spectral(f, g)) <= 1e-4


def test_convolve_report(small_grid, params, rng):
    f = random_span_field(small_grid, params, rng)
    rep = convolve(f, f, "spatial")
    assert rep.deviation <= 1e-5
    assert rep.to_dict()["path"] == "spatial"
    assert convolve(f, f, "spectral").deviation == 0
    with pytest.raises(ValueError):
        convolve(f, f, "other")

