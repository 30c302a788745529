"""Real-argument cylinder functions and their first derivatives.

Values come from scipy.special (AMOS/Cephes). This module adds the
argument checks the mode solvers rely on and the derivative recurrences

    Z'_m = (Z_{m-1} - Z_{m+1}) / 2       for Z = J, Y, H^(1), H^(2)
    I'_m = (I_{m-1} + I_{m+1}) / 2
    K'_m = -(K_{m-1} + K_{m+1}) / 2

All functions accept scalars or numpy arrays for ``x`` and broadcast.
"""

from __future__ import annotations

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "bessel_j",
    "bessel_j_prime",
    "bessel_y",
    "bessel_y_prime",
    "bessel_i",
    "bessel_i_prime",
    "bessel_k",
    "bessel_k_prime",
    "hankel1",
    "hankel1_prime",
    "hankel2",
    "hankel2_prime",
]


def _finite(name, x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name}: non-finite argument")
    return x


def _positive(name, x):
    x = _finite(name, x)
    if np.any(x <= 0.0):
        raise DomainError(f"{name}: argument must be > 0, got min {np.min(x)!r}")
    return x


def _out(v):
    return v.item() if np.ndim(v) == 0 else v


def bessel_j(m: int, x):
    """J_m(x)."""
    x = _finite("bessel_j", x)
    return _out(special.jv(m, x))


def bessel_j_prime(m: int, x):
    x = _finite("bessel_j_prime", x)
    return _out(0.5 * (special.jv(m - 1, x) - special.jv(m + 1, x)))


def bessel_y(m: int, x):
    x = _positive("bessel_y", x)
    return _out(special.yv(m, x))


def bessel_y_prime(m: int, x):
    x = _positive("bessel_y_prime", x)
    return _out(0.5 * (special.yv(m - 1, x) - special.yv(m + 1, x)))


def bessel_i(m: int, x):
    x = _finite("bessel_i", x)
    return _out(special.iv(m, x))


def bessel_i_prime(m: int, x):
    x = _finite("bessel_i_prime", x)
    return _out(0.5 * (special.iv(m - 1, x) + special.iv(m + 1, x)))


def bessel_k(m: int, x):
    """K_m(x) for x > 0; always positive."""
    x = _positive("bessel_k", x)
    return _out(special.kv(m, x))


def bessel_k_prime(m: int, x):
    x = _positive("bessel_k_prime", x)
    return _out(-0.5 * (special.kv(m - 1, x) + special.kv(m + 1, x)))


def hankel1(m: int, x):
    """H_m^(1)(x) = J_m(x) + i Y_m(x)."""
    x = _positive("hankel1", x)
    return _out(special.hankel1(m, x))


def hankel1_prime(m: int, x):
    x = _positive("hankel1_prime", x)
    return _out(0.5 * (special.hankel1(m - 1, x) - special.hankel1(m + 1, x)))


def hankel2(m: int, x):
    """H_m^(2)(x), taken as the exact conjugate of H_m^(1)(x) for real x."""
    return np.conj(hankel1(m, x))


def hankel2_prime(m: int, x):
    return np.conj(hankel1_prime(m, x))
