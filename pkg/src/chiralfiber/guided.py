"""HE11 guided modes of a step-index nanofiber.

The eigenvalue equation is solved in the dimensionless variables
u = h a and w = q a, with h = sqrt(n1^2 k^2 - beta^2) and
q = sqrt(beta^2 - n2^2 k^2). The mode profile is the quasicircular
combination (f, l) of the fundamental mode, normalized so that

    2 pi * int_0^inf n_ref(r)^2 |e(r)|^2 r dr = 1.

Lengths are in meters and frequencies in rad/s throughout.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate, optimize, special
from scipy.constants import c as C_LIGHT

from . import specialfn as sf
from .errors import ConvergenceError, DomainError, MultimodeError, NoRootError

# first zero of J0: cutoff of the TE01/TM01 modes
SINGLE_MODE_V = 2.404825557695773

# relative offset of the search bracket from n2 k and n1 k
BRACKET_EPS = 1e-9
SCAN_POINTS = 2048
# exterior quadrature is truncated at r = a + TAIL_DECAY_LENGTHS / q
TAIL_DECAY_LENGTHS = 12.0


@dataclass(frozen=True)
class FiberSpec:
    a: float
    n1: float
    n2: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.a) and self.a > 0):
            raise DomainError(f"fiber radius must be positive, got {self.a!r}")
        if not self.n2 >= 1.0:
            raise DomainError(f"cladding index must be >= 1, got {self.n2!r}")
        # n1 == n2 is allowed here so the solver can report the missing root
        if not self.n1 >= self.n2:
            raise DomainError(f"need n1 >= n2, got n1={self.n1!r}, n2={self.n2!r}")

    def v_number(self, omega: float) -> float:
        k = omega / C_LIGHT
        return k * self.a * np.sqrt(self.n1**2 - self.n2**2)


@dataclass(frozen=True)
class GuidedModeIndex:
    """Propagation direction f and polarization circulation l, each +1 or -1."""

    f: int
    l: int

    def __post_init__(self):
        if self.f not in (1, -1) or self.l not in (1, -1):
            raise DomainError(f"f and l must be +1 or -1, got f={self.f}, l={self.l}")

    @staticmethod
    def all():
        return [GuidedModeIndex(f, l) for f in (1, -1) for l in (1, -1)]


@dataclass(frozen=True)
class GuidedModeSolution:
    fiber: FiberSpec
    omega: float
    k: float
    beta: float
    h: float
    q: float
    s: float
    beta_prime: Optional[float] = None
    norm_C: Optional[float] = None

    @property
    def neff(self) -> float:
        return self.beta / self.k

    @property
    def V(self) -> float:
        return self.fiber.v_number(self.omega)

    @property
    def group_index(self) -> float:
        return self.beta_prime * C_LIGHT


def omega_from_wavelength(wavelength: float) -> float:
    return 2.0 * np.pi * C_LIGHT / wavelength


def _k1_log_derivative(w):
    # K1'(w) / K1(w) with exponentially scaled K to avoid underflow
    return -0.5 * (special.kve(0, w) + special.kve(2, w)) / special.kve(1, w)


def eigen_residual(fiber: FiberSpec, omega: float, beta) -> np.ndarray:
    """Left minus right side of the HE11 eigenvalue equation.

    Dimensionless; zero at the propagation constant. Vectorized in beta.
    """
    k = omega / C_LIGHT
    n1sq, n2sq = fiber.n1**2, fiber.n2**2
    beta = np.asarray(beta, dtype=float)
    u = fiber.a * np.sqrt(n1sq * k**2 - beta**2)
    w = fiber.a * np.sqrt(beta**2 - n2sq * k**2)
    kk = _k1_log_derivative(w) / w
    root = np.sqrt(
        ((n1sq - n2sq) / (2 * n1sq) * kk) ** 2
        + beta**2 / (n1sq * k**2) * (1 / w**2 + 1 / u**2) ** 2
    )
    lhs = special.j0(u) / (u * special.j1(u))
    rhs = -(n1sq + n2sq) / (2 * n1sq) * kk + 1 / u**2 - root
    return lhs - rhs


def solve_eigenvalue(fiber: FiberSpec, omega: float) -> GuidedModeSolution:
    """Propagation constant and transverse parameters of the HE11 mode.

    The returned solution has ``beta_prime`` and ``norm_C`` unset; use
    :func:`solve_mode` for a fully populated one.
    """
    if not (np.isfinite(omega) and omega > 0):
        raise DomainError(f"omega must be positive, got {omega!r}")
    V = fiber.v_number(omega)
    if V >= SINGLE_MODE_V:
        raise MultimodeError(f"V = {V:.4f} >= {SINGLE_MODE_V:.4f}: fiber is not single-mode")
    k = omega / C_LIGHT
    lo = fiber.n2 * (1 + BRACKET_EPS)
    hi = fiber.n1 * (1 - BRACKET_EPS)
    if not lo < hi:
        raise NoRootError("no index contrast: guided-mode bracket is empty")

    def F(x):
        return eigen_residual(fiber, omega, x * k)

    xs = np.linspace(lo, hi, SCAN_POINTS)
    fs = F(xs)
    flips = np.nonzero(np.isfinite(fs[:-1]) & np.isfinite(fs[1:]) & (np.sign(fs[:-1]) != np.sign(fs[1:])))[0]
    roots = []
    for i in flips:
        x = optimize.brentq(F, xs[i], xs[i + 1], xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)
        # reject sign flips that come from poles rather than zeros
        if abs(F(x)) < 1e-8:
            roots.append(x)
    if not roots:
        raise NoRootError(f"no HE11 root in ({lo:.6g} k, {hi:.6g} k)")
    # the fundamental mode has the largest effective index
    x = max(roots)
    beta = x * k
    h = np.sqrt(fiber.n1**2 * k**2 - beta**2)
    q = np.sqrt(beta**2 - fiber.n2**2 * k**2)
    u, w = h * fiber.a, q * fiber.a
    s = (1 / u**2 + 1 / w**2) / (
        sf.bessel_j_prime(1, u) / (u * sf.bessel_j(1, u)) + _k1_log_derivative(w) / w
    )
    return GuidedModeSolution(fiber=fiber, omega=omega, k=k, beta=beta, h=h, q=q, s=s)


def beta_derivative(fiber: FiberSpec, omega: float, rel_step: float = 1e-5, check_rtol: float = 1e-6) -> float:
    """d(beta)/d(omega) by a centered difference with a step-halving check."""

    def centered(delta):
        bp = solve_eigenvalue(fiber, omega * (1 + delta)).beta
        bm = solve_eigenvalue(fiber, omega * (1 - delta)).beta
        return (bp - bm) / (2 * omega * delta)

    d1 = centered(rel_step)
    d2 = centered(rel_step / 2)
    if abs(d1 - d2) > check_rtol * abs(d2):
        raise ConvergenceError(f"beta' not stable under step halving: {d1!r} vs {d2!r}")
    return d2


def _profile_unscaled(mode: GuidedModeSolution, r):
    """(e_r, e_phi, e_z) of the (f=+, l=+) mode with C = 1."""
    a, h, q, s, beta = mode.fiber.a, mode.h, mode.q, mode.s, mode.beta
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise DomainError("radius must be finite and >= 0")
    er = np.zeros(r.shape, dtype=complex)
    ephi = np.zeros(r.shape)
    ez = np.zeros(r.shape)
    inside = r < a
    ri, ro = r[inside], r[~inside]
    if ri.size:
        ratio = (q / h) * sf.bessel_k(1, q * a) / sf.bessel_j(1, h * a)
        j0, j1, j2 = special.jv(0, h * ri), special.jv(1, h * ri), special.jv(2, h * ri)
        er[inside] = 1j * ratio * ((1 - s) * j0 - (1 + s) * j2)
        ephi[inside] = -ratio * ((1 - s) * j0 + (1 + s) * j2)
        ez[inside] = ratio * (2 * h / beta) * j1
    if ro.size:
        k0, k1, k2 = sf.bessel_k(0, q * ro), sf.bessel_k(1, q * ro), sf.bessel_k(2, q * ro)
        er[~inside] = 1j * ((1 - s) * k0 + (1 + s) * k2)
        ephi[~inside] = -((1 - s) * k0 - (1 + s) * k2)
        ez[~inside] = (2 * q / beta) * k1
    return er, ephi, ez


def _intensity_integrals(mode: GuidedModeSolution, scale: float = 1.0, cutoff_factor: float = 1.0):
    """Return (inside, outside) parts of the weighted norm integral."""
    fiber = mode.fiber

    def integrand(r):
        er, ephi, ez = _profile_unscaled(mode, r)
        return float((abs(er[0]) ** 2 + ephi[0] ** 2 + ez[0] ** 2) * r) * scale**2

    r_max = fiber.a + cutoff_factor * TAIL_DECAY_LENGTHS / mode.q
    parts = []
    for lo, hi, n in ((0.0, fiber.a, fiber.n1), (fiber.a, r_max, fiber.n2)):
        val, err, info = integrate.quad(
            integrand, lo, hi, epsabs=0.0, epsrel=1e-12, limit=400, full_output=True
        )[:3]
        if err > 1e-9 * abs(val):
            raise ConvergenceError(f"norm quadrature on [{lo:.3g}, {hi:.3g}] m: err {err:.2e}")
        parts.append(2 * np.pi * n**2 * val)
    return parts[0], parts[1]


def normalize(mode: GuidedModeSolution) -> float:
    """Positive normalization constant C of the mode profile."""
    inside, outside = _intensity_integrals(mode)
    return 1.0 / np.sqrt(inside + outside)


def solve_mode(fiber: FiberSpec, omega: float) -> GuidedModeSolution:
    """Eigenvalue, group delay and normalization in one call."""
    mode = solve_eigenvalue(fiber, omega)
    mode = dataclasses.replace(mode, beta_prime=beta_derivative(fiber, omega))
    return dataclasses.replace(mode, norm_C=normalize(mode))


def eval_guided_profile(mode: GuidedModeSolution, idx: GuidedModeIndex, r, phi=0.0) -> np.ndarray:
    """Cylindrical components (e_r, e_phi, e_z) of the normalized mode (f, l).

    The components do not depend on ``phi``; the azimuthal phase
    exp(i l phi) is applied by the coupling code. Returns shape (3,) for
    scalar ``r`` and (3, N) for an array.
    """
    if mode.norm_C is None:
        raise DomainError("mode is not normalized; build it with solve_mode")
    er, ephi, ez = _profile_unscaled(mode, r)
    out = mode.norm_C * np.array([er, idx.l * ephi.astype(complex), idx.f * ez.astype(complex)])
    return out[:, 0] if np.ndim(r) == 0 else out
