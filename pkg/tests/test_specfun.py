import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sliceft.specfun import gamma_value, gaussian_weight, laguerre, log_factorial


def laguerre_series(t, k, x):
    """Explicit sum L_t^k(x) = sum_i (-1)^i C(t + k, t - i) x^i / i!."""
    return sum((-1) ** i * math.comb(t + k, t - i) * x ** i / math.factorial(i) for i in range(t + 1))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 12), st.integers(0, 8), st.floats(0, 20))
def test_recurrence_matches_series(t, k, x):
    ref = laguerre_series(t, k, x)
    assert laguerre(t, k, x) == pytest.approx(ref, rel=1e-9, abs=1e-9 * max(1.0, x) ** t)


def test_low_order_closed_forms():
    x = np.linspace(0, 5, 11)
    assert np.allclose(laguerre(0, 3, x), 1)
    assert np.allclose(laguerre(1, 2, x), 3 - x)
    assert np.allclose(laguerre(2, 0, x), 0.5 * (x ** 2 - 4 * x + 2))


@pytest.mark.parametrize("t,k", [(3, 0), (3, 2), (5, 1), (6, 4)])
def test_laguerre_ode_residual(t, k):
    # x y'' + (k + 1 - x) y' + t y = 0, central differences at O(h^2)
    x = np.linspace(0.5, 6, 23)

    def res(h):
        y = laguerre(t, k, x)
        yp = (laguerre(t, k, x + h) - laguerre(t, k, x - h)) / (2 * h)
        ypp = (laguerre(t, k, x + h) - 2 * y + laguerre(t, k, x - h)) / h ** 2
        return np.max(np.abs(x * ypp + (k + 1 - x) * yp + t * y))

    a, b = res(1e-2), res(5e-3)
    assert 3.5 < a / b < 4.5


def test_laguerre_errors():
    with pytest.raises(ValueError):
        laguerre(-1, 0, 1.0)
    with pytest.raises(ValueError):
        laguerre(1.5, 0, 1.0)


def test_laguerre_shapes():
    assert isinstance(laguerre(3, 1, 0.2), float)
    assert laguerre(3, 1, np.zeros((2, 3))).shape == (2, 3)


@pytest.mark.parametrize("s", [0.5, 1, 1.5, 2, 2.5, 3, 7, 9.5])
def test_gamma_against_math(s):
    assert gamma_value(s) == pytest.approx(math.gamma(s), rel=1e-14)


def test_gamma_rejects_other_arguments():
    for s in (0, -1, 0.3, 2.25):
        with pytest.raises(ValueError):
            gamma_value(s)


def test_gaussian_weight():
    assert gaussian_weight(0, 0, 0.5) == 1
    assert gaussian_weight(1, 1, 0.5) == pytest.approx(math.exp(-1))
    with pytest.raises(ValueError):
        gaussian_weight(1, 1, 0)


def test_log_factorial():
    assert log_factorial(10) == pytest.approx(math.log(math.factorial(10)))
