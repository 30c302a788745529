"""Radiation modes nu = (omega, beta, m, l) of a step-index nanofiber.

Modes are normalized to N_nu = 1 in the delta(omega - omega') sense,
with SI field units. Every function here is vectorized over ``beta`` so
that a whole quadrature grid can be built in one call; scalar ``beta``
gives scalar fields.

Hankel functions of large order at small argument overflow double
precision. All exterior coefficients are therefore computed with
H_m(qa) divided by its modulus; only field ratios H_m(qr)/H_m(qa) are
ever formed. Grid nodes where H_m(qa) itself is not representable are
flagged in ``valid`` and carry zero fields (their coupling to any atom
outside the fiber is below double-precision resolution).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.constants import c as C_LIGHT
from scipy.constants import epsilon_0 as EPS0
from scipy.constants import mu_0 as MU0

from .errors import DomainError
from .guided import FiberSpec

MIN_QA = 1e-8


@dataclass(frozen=True, eq=False)
class RadiationModeSolution:
    fiber: FiberSpec
    omega: float
    beta: np.ndarray
    m: int
    l: int
    k: float
    h: np.ndarray
    q: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C1: np.ndarray
    C2: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    eta: np.ndarray
    # coefficients of (B4) with H(qa) scaled to unit modulus
    V: tuple
    M: tuple
    L: tuple
    valid: np.ndarray
    # exterior coefficients on (J_m(qr), Y_m(qr)) for e_z and the D part
    ext_c: tuple = (0.0, 0.0)
    ext_d: tuple = (0.0, 0.0)

    @property
    def C(self):
        return (self.C1, self.C2)

    @property
    def D(self):
        return (self.D1, self.D2)


def _scalarize(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def build_radiation_mode(fiber: FiberSpec, omega: float, beta, m: int, l: int) -> RadiationModeSolution:
    """Coefficients of the normalized radiation mode(s).

    ``beta`` may be a scalar or an array of propagation constants with
    |beta| < n2 k.
    """
    if l not in (1, -1):
        raise DomainError(f"polarization l must be +1 or -1, got {l!r}")
    m = int(m)
    k = omega / C_LIGHT
    a, n1sq, n2sq = fiber.a, fiber.n1**2, fiber.n2**2
    beta = np.asarray(beta, dtype=float)
    if np.any(np.abs(beta) >= fiber.n2 * k):
        raise DomainError("radiation modes need |beta| < n2 k")
    h = np.sqrt(k**2 * n1sq - beta**2)
    q = np.sqrt(k**2 * n2sq - beta**2)
    u, w = h * a, q * a
    if np.any(w < MIN_QA):
        raise DomainError(f"q a below {MIN_QA:g}: too close to the light line")

    jm = special.jv(m, u)
    jmp = 0.5 * (special.jv(m - 1, u) - special.jv(m + 1, u))
    with np.errstate(invalid="ignore", over="ignore"):
        hm = special.hankel1(m, w)
        hmp = 0.5 * (special.hankel1(m - 1, w) - special.hankel1(m + 1, w))
        valid = np.isfinite(hm) & np.isfinite(hmp)
        scale = np.where(valid, np.abs(hm), 1.0)
        hm = np.where(valid, hm, 0.0) / scale
        hmp = np.where(valid, hmp, 0.0) / scale

    def vml(z, zp):
        v = m * k * beta / (a * h**2 * q**2) * (n2sq - n1sq) * jm * z
        return v, jmp * z / h - jm * zp / q, n1sq * jmp * z / h - n2sq * jm * zp / q

    # H^(1)* = H^(2) and H^(2)* = H^(1) for real argument
    V, M, L = zip(vml(np.conj(hm), np.conj(hmp)), vml(hm, hmp))

    with np.errstate(invalid="ignore", divide="ignore"):
        eta = EPS0 * C_LIGHT * np.sqrt(
            (n2sq * np.abs(V[0]) ** 2 + np.abs(L[0]) ** 2) / (np.abs(V[0]) ** 2 + n2sq * np.abs(M[0]) ** 2)
        )
    eta = np.where(valid, eta, EPS0 * C_LIGHT)
    pre_c = 1j * np.pi * q**2 * a / (4 * n2sq)
    pre_d = 1j * np.pi * q**2 * a / 4

    # all coefficients are linear in A: normalize with A = 1 first
    A1, B1 = 1.0, 1j * l * eta

    def p_c(v, l_):
        return A1 * l_ + 1j * MU0 * C_LIGHT * B1 * v

    def p_d(v, m_):
        return 1j * EPS0 * C_LIGHT * A1 * v - B1 * m_

    C = tuple((-1) ** j * pre_c * p_c(V[j - 1], L[j - 1]) for j in (1, 2))
    D = tuple((-1) ** (j - 1) * pre_d * p_d(V[j - 1], M[j - 1]) for j in (1, 2))
    n_hat = 8 * np.pi * omega / q**2 * (n2sq * np.abs(C[0]) ** 2 + MU0 / EPS0 * np.abs(D[0]) ** 2)
    n_hat = np.where(valid, n_hat, 1.0)
    norm = np.where(valid, 1.0 / np.sqrt(n_hat), 0.0)
    C = tuple(c * norm for c in C)
    D = tuple(d * norm for d in D)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        A = np.where(valid, norm / scale, 0.0)
    B = 1j * l * eta * A

    # Exterior fields in the J/Y basis: C1 H1 + C2 H2 = cJ J + cY Y, so the
    # large Y_m(qa) never multiplies the large Y_m(qr) and nothing cancels.
    with np.errstate(invalid="ignore", over="ignore"):
        jw = np.where(valid, special.jv(m, w), 0.0) / scale
        jwp = np.where(valid, 0.5 * (special.jv(m - 1, w) - special.jv(m + 1, w)), 0.0) / scale
        yw = np.where(valid, special.yv(m, w), 0.0) / scale
        ywp = np.where(valid, 0.5 * (special.yv(m - 1, w) - special.yv(m + 1, w)), 0.0) / scale
    vJ, mJ, lJ = vml(jw, jwp)
    vY, mY, lY = vml(yw, ywp)
    cJ = 2j * pre_c * p_c(vY, lY) * norm
    cY = -2j * pre_c * p_c(vJ, lJ) * norm
    dJ = -2j * pre_d * p_d(vY, mY) * norm
    dY = 2j * pre_d * p_d(vJ, mJ) * norm

    return RadiationModeSolution(
        fiber=fiber,
        omega=omega,
        beta=_scalarize(beta),
        m=m,
        l=l,
        k=k,
        h=_scalarize(h),
        q=_scalarize(q),
        A=_scalarize(A),
        B=_scalarize(B),
        C1=_scalarize(C[0]),
        C2=_scalarize(C[1]),
        D1=_scalarize(D[0]),
        D2=_scalarize(D[1]),
        eta=_scalarize(eta),
        V=tuple(map(_scalarize, V)),
        M=tuple(map(_scalarize, M)),
        L=tuple(map(_scalarize, L)),
        valid=_scalarize(valid),
        ext_c=(_scalarize(cJ), _scalarize(cY)),
        ext_d=(_scalarize(dJ), _scalarize(dY)),
    )


def normalization_constant(mode: RadiationModeSolution, j: int = 1):
    """N_nu recomputed from the stored coefficients using C_j, D_j."""
    C = (mode.C1, mode.C2)[j - 1]
    D = (mode.D1, mode.D2)[j - 1]
    n2sq = mode.fiber.n2**2
    return 8 * np.pi * mode.omega / mode.q**2 * (n2sq * np.abs(C) ** 2 + MU0 / EPS0 * np.abs(D) ** 2)


def _j_over_r(m, x, r, h):
    # J_m(h r) / r, finite at r = 0
    with np.errstate(invalid="ignore", divide="ignore"):
        out = special.jv(m, x) / r
    if r == 0:
        out = np.full_like(np.asarray(x, dtype=float), 0.5 * np.sign(m) * h if abs(m) == 1 else 0.0)
    return out


def eval_rad_profile(mode: RadiationModeSolution, r: float, phi: float = 0.0):
    """Cylindrical components (e_r, e_phi, e_z) at radius ``r``.

    Like the guided profile, the components are independent of ``phi``;
    the factor exp(i m phi) belongs to the coupling coefficient. Returns
    an array of shape (3,) + shape(beta).
    """
    r = float(r)
    if not (np.isfinite(r) and r >= 0):
        raise DomainError("radius must be finite and >= 0")
    a = mode.fiber.a
    m, om = mode.m, mode.omega
    beta, h, q = np.asarray(mode.beta), np.asarray(mode.h), np.asarray(mode.q)
    A, B = np.asarray(mode.A), np.asarray(mode.B)
    if r < a:
        x = h * r
        jm = special.jv(m, x)
        jmp = 0.5 * (special.jv(m - 1, x) - special.jv(m + 1, x))
        jr = _j_over_r(m, x, r, h)
        er = 1j / h**2 * (beta * h * A * jmp + 1j * m * om * MU0 * B * jr)
        ephi = 1j / h**2 * (1j * m * beta * A * jr - h * om * MU0 * B * jmp)
        ez = A * jm
    else:
        x = q * r
        jr, yr = special.jv(m, x), special.yv(m, x)
        jrp = 0.5 * (special.jv(m - 1, x) - special.jv(m + 1, x))
        yrp = 0.5 * (special.yv(m - 1, x) - special.yv(m + 1, x))
        (cj, cy), (dj, dy) = mode.ext_c, mode.ext_d
        with np.errstate(invalid="ignore"):
            zc = np.nan_to_num(cj * jr + cy * yr)
            zcp = np.nan_to_num(cj * jrp + cy * yrp)
            zd = np.nan_to_num(dj * jr + dy * yr)
            zdp = np.nan_to_num(dj * jrp + dy * yrp)
        er = 1j / q**2 * (beta * q * zcp + 1j * m * om * MU0 / r * zd)
        ephi = 1j / q**2 * (1j * m * beta / r * zc - q * om * MU0 * zdp)
        ez = zc
    return np.array([er, ephi, ez], dtype=complex)
