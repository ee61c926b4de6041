"""Scalar special functions used by the Hermite eigenbasis."""
import math

import numpy as np

__all__ = ["laguerre", "gamma_value", "gaussian_weight", "log_factorial"]


def laguerre(t: int, k: int, x):
    """Generalised Laguerre polynomial L_t^k(x) by the three-term recurrence.

    (n + 1) L_{n+1} = (2n + 1 + k - x) L_n - (n + k) L_{n-1}

    ``x`` may be a scalar or an array; the result has the same shape.
    """
    if t < 0 or k < 0 or int(t) != t or int(k) != k:
        raise ValueError(f"need integers t, k >= 0, got t={t!r}, k={k!r}")
    x = np.asarray(x, dtype=np.float64)
    prev = np.ones_like(x)
    if t == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + k - x
    for n in range(1, t):
        prev, cur = cur, ((2 * n + 1 + k - x) * cur - (n + k) * prev) / (n + 1)
    return cur if cur.ndim else float(cur)


def gamma_value(s: float) -> float:
    """Gamma at positive integers and half-integers, from Gamma(1) and Gamma(1/2)."""
    twice = 2 * s
    if s <= 0 or twice != int(twice):
        raise ValueError(f"gamma_value supports positive integers and half-integers, got {s!r}")
    twice = int(twice)
    if twice % 2 == 0:
        val, cur = 1.0, 1.0
    else:
        val, cur = math.sqrt(math.pi), 0.5
    while cur < s:
        val *= cur
        cur += 1.0
    return val


def gaussian_weight(x0, r, c):
    """exp(-(x0^2 + r^2) / 4c)."""
    if not c > 0:
        raise ValueError("c must be positive")
    return np.exp(-(np.asarray(x0) ** 2 + np.asarray(r) ** 2) / (4.0 * c))


def log_factorial(n: int) -> float:
    return math.lgamma(n + 1)
