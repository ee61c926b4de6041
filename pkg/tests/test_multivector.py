import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sliceft.multivector import (
    Multivector,
    Params,
    blade_label,
    clifford_conjugate,
    eta_sandwich,
    geometric_product,
    grade_project,
    parse_blade_label,
    scalar_part,
    sphere_area,
    sphere_sandwich_oracle,
)


def brute_product(a_bits, b_bits):
    """Multiply basis blades by writing out generator strings and bubble-sorting.

    Each adjacent swap of distinct generators flips the sign; equal neighbours
    e_i e_i contract to -1.
    """
    word = [i for i in range(8) if a_bits >> i & 1] + [i for i in range(8) if b_bits >> i & 1]
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                word[i], word[i + 1] = word[i + 1], word[i]
                sign = -sign
                changed = True
                break
            if word[i] == word[i + 1]:
                del word[i:i + 2]
                sign = -sign
                changed = True
                break
    bits = 0
    for i in word:
        bits |= 1 << i
    return sign, bits


def rand_mv(rng, dim):
    n = 1 << dim
    return Multivector(dim, rng.normal(size=n) + 1j * rng.normal(size=n))


complex_st = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def mv_st(dim):
    return st.lists(complex_st, min_size=1 << dim, max_size=1 << dim).map(lambda c: Multivector(dim, c))


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_product_signs_match_string_sorting(dim):
    for a in range(1 << dim):
        for b in range(1 << dim):
            sign, bits = brute_product(a, b)
            prod = Multivector(dim, np.eye(1 << dim)[a]) * Multivector(dim, np.eye(1 << dim)[b])
            expect = np.zeros(1 << dim, complex)
            expect[bits] = sign
            assert np.array_equal(prod.coeffs, expect), (a, b)


def test_product_examples():
    e0 = Multivector.blade(3, 0)
    e1 = Multivector.blade(3, 1)
    assert e0 * e0 == Multivector.scalar(3, -1)
    a = Multivector(3, np.arange(8) + 1j)
    assert (Multivector.scalar(3) * a) == a
    assert (Multivector.blade(3, 0, 1) * e1).close_to(-e0, 0)


def test_anticommutation():
    dim = 4
    for i in range(dim):
        for j in range(dim):
            ei, ej = Multivector.blade(dim, i), Multivector.blade(dim, j)
            assert (ei * ej + ej * ei).close_to(Multivector.scalar(dim, -2.0 * (i == j)), 0)


@settings(max_examples=60, deadline=None)
@given(mv_st(3), mv_st(3), mv_st(3))
def test_associativity(a, b, c):
    scale = max(a.norm_inf(), 1) * max(b.norm_inf(), 1) * max(c.norm_inf(), 1)
    assert ((a * b) * c).close_to(a * (b * c), 1e-13 * scale * 8)


@settings(max_examples=60, deadline=None)
@given(mv_st(3), mv_st(3))
def test_conjugate_reverses_products(a, b):
    lhs = clifford_conjugate(a * b)
    rhs = clifford_conjugate(b) * clifford_conjugate(a)
    assert lhs.close_to(rhs, 1e-12 * max(1, a.norm_inf() * b.norm_inf()) * 8)


@settings(max_examples=30, deadline=None)
@given(mv_st(4))
def test_conjugate_involution(a):
    assert clifford_conjugate(clifford_conjugate(a)) == a


def test_conjugate_examples():
    lam = Multivector.scalar(3, 2 + 3j)
    assert clifford_conjugate(lam) == Multivector.scalar(3, 2 - 3j)
    for i in range(3):
        assert clifford_conjugate(Multivector.blade(3, i)) == -Multivector.blade(3, i)
    assert clifford_conjugate(Multivector.blade(3, 0, 1)) == -Multivector.blade(3, 0, 1)


def test_grade_projection():
    a = Multivector.scalar(3, 3) + Multivector.blade(3, 1) + Multivector.blade(3, 1, 2)
    assert grade_project(a, 1) == Multivector.blade(3, 1) * 1
    tri = Multivector.blade(3, 0, 1, 2)
    assert grade_project(tri, 3) == tri
    b = rand_mv(np.random.default_rng(0), 4)
    total = sum((grade_project(b, k) for k in range(5)), Multivector(4))
    assert total == b
    with pytest.raises(ValueError):
        grade_project(b, 5)
    with pytest.raises(ValueError):
        grade_project(b, -1)


def test_scalar_part_examples():
    assert scalar_part(Multivector.scalar(3, 5) + Multivector.blade(3, 0, value=2)) == 5
    assert scalar_part(Multivector.blade(3, 1, 2)) == 0
    a = Multivector.blade(3, 0) + Multivector.blade(3, 1)
    assert scalar_part(clifford_conjugate(a) * a) == 2


def test_conjugate_product_scalar_part_is_hermitian_dot():
    rng = np.random.default_rng(3)
    a, b = rand_mv(rng, 3), rand_mv(rng, 3)
    assert abs(scalar_part(clifford_conjugate(a) * b) - np.vdot(a.coeffs, b.coeffs)) < 1e-12


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        geometric_product(Multivector(3), Multivector(4))
    with pytest.raises(ValueError):
        Multivector(3, [1, 2, 3])


def test_eta_sandwich_examples():
    for m in (2, 3, 4):
        one = Multivector.scalar(m + 1)
        assert eta_sandwich(one, m) == -one
    assert eta_sandwich(Multivector.blade(3, 1), 2) == Multivector(3)
    e0 = Multivector.blade(3, 0)
    assert eta_sandwich(e0, 2) == e0


def test_sphere_oracle_examples():
    assert sphere_sandwich_oracle(Multivector.scalar(3), 2).close_to(Multivector.scalar(3, -2 * math.pi), 1e-12)
    e12 = Multivector.blade(3, 1, 2)
    assert sphere_sandwich_oracle(e12, 2).close_to(e12 * (2 * math.pi), 1e-12)
    with pytest.raises(ValueError):
        sphere_sandwich_oracle(e12, 2, 32)
    with pytest.raises(ValueError):
        sphere_sandwich_oracle(Multivector(5), 4)


@pytest.mark.parametrize("m,tol", [(2, 1e-12), (3, 1e-12)])
def test_sandwich_matches_oracle(m, tol):
    rng = np.random.default_rng(m)
    for _ in range(20):
        a = rand_mv(rng, m + 1)
        q = sphere_sandwich_oracle(a, m) / sphere_area(m)
        assert (q - eta_sandwich(a, m)).norm_inf() <= tol * a.norm_inf() * 10


def test_sphere_area():
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
    assert sphere_area(4) == pytest.approx(2 * math.pi ** 2)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_lemma_sum_over_generators(m):
    dim = m + 1
    for blade in range(0, 1 << dim, 2):
        idx = [i for i in range(dim) if blade >> i & 1]
        a = Multivector.blade(dim, *idx)
        total = Multivector(dim)
        for i in range(1, dim):
            ei = Multivector.blade(dim, i)
            total = total + ei * a * ei
        k = len(idx)
        assert total == a * ((-1) ** k * (2 * k - m))


def test_unit_vector_squares_to_minus_one():
    rng = np.random.default_rng(9)
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    w = Multivector.vector(4, [0, *v])
    assert (w * w).close_to(Multivector.scalar(4, -1), 1e-14)


def test_labels_and_json_round_trip():
    assert blade_label(0) == "1"
    assert blade_label(0b101) == "e0e2"
    for b in range(16):
        assert parse_blade_label(blade_label(b)) == b
    a = rand_mv(np.random.default_rng(2), 3)
    assert Multivector.from_json(a.to_json()) == a


def test_params_validation():
    with pytest.raises(ValueError):
        Params(1, 0.5)
    with pytest.raises(ValueError):
        Params(2, 0.0)
    assert Params(3, 1.0).nblades == 16
