"""Decay and dipole-dipole coefficients of two atoms near a nanofiber.

All rates are returned in units of the free-space decay rate
gamma0 = omega0^3 d^2 / (3 pi hbar eps0 c^3). Dipoles are unit complex
Cartesian vectors; the magnitude d and the constants hbar, eps0 drop out
of every normalized quantity. Coupling constants G are reported in units
of sqrt(gamma0), so that gamma_ij = 2 pi sum G_i conj(G_j).
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import special
from scipy.constants import c as C_LIGHT

from .errors import ConvergenceError, DomainError
from .guided import FiberSpec, GuidedModeIndex, GuidedModeSolution, eval_guided_profile, solve_mode
from .radiation import build_radiation_mode, eval_rad_profile

SIGMA_PLUS_Y = np.array([1j, 0.0, -1.0]) / np.sqrt(2.0)

FORWARD, BACKWARD = 1, -1


@dataclass(frozen=True, eq=False)
class AtomSpec:
    """Atom at cylindrical position (r, phi, z) with unit Cartesian dipole."""

    r: float
    phi: float = 0.0
    z: float = 0.0
    dipole: np.ndarray = field(default_factory=lambda: SIGMA_PLUS_Y.copy())

    def __post_init__(self):
        d = np.asarray(self.dipole, dtype=complex).reshape(3)
        object.__setattr__(self, "dipole", d)
        if not (np.isfinite(self.r) and self.r > 0):
            raise DomainError(f"atom radius must be positive, got {self.r!r}")
        if abs(np.linalg.norm(d) - 1.0) > 1e-12:
            raise DomainError(f"dipole must have unit norm, got |d| = {np.linalg.norm(d)!r}")

    @property
    def position(self) -> np.ndarray:
        return np.array([self.r * np.cos(self.phi), self.r * np.sin(self.phi), self.z])

    def cylindrical_dipole(self) -> np.ndarray:
        """(d_r, d_phi, d_z) at the atom's azimuth."""
        dx, dy, dz = self.dipole
        c, s = np.cos(self.phi), np.sin(self.phi)
        return np.array([dx * c + dy * s, -dx * s + dy * c, dz])

    def moved(self, **changes) -> "AtomSpec":
        kw = dict(r=self.r, phi=self.phi, z=self.z, dipole=self.dipole)
        kw.update(changes)
        return AtomSpec(**kw)


def _check_outside(fiber: FiberSpec, atoms):
    for atom in atoms:
        if atom.r < fiber.a * (1 - 1e-12):
            raise DomainError(f"atom at r = {atom.r:.4g} m is inside the fiber (a = {fiber.a:.4g} m)")


@dataclass(frozen=True)
class Numerics:
    beta_nodes: int = 200
    panel_order: int = 20
    rtol_beta: float = 1e-4
    max_beta_nodes: int = 20000
    m_start: int = 5
    m_cap: int = 60
    rtol_m: float = 1e-4


# ---------------------------------------------------------------- guided


def coupling_g_guided(
    mode: GuidedModeSolution,
    idx: GuidedModeIndex,
    atom: AtomSpec,
    omega_ref: Optional[float] = None,
    counter_rotating: bool = False,
) -> complex:
    """Coupling G of ``atom`` to guided mode ``idx`` in units of sqrt(gamma0).

    ``omega_ref`` is the atomic frequency defining gamma0 (defaults to the
    mode frequency). ``counter_rotating`` uses conj(d), giving G-tilde.
    """
    omega_ref = mode.omega if omega_ref is None else omega_ref
    k_ref = omega_ref / C_LIGHT
    pref = np.sqrt(0.75 * (mode.omega / omega_ref) * mode.beta_prime * C_LIGHT / k_ref**2)
    d = atom.cylindrical_dipole()
    if counter_rotating:
        d = np.conj(d)
    e = eval_guided_profile(mode, idx, atom.r, atom.phi)
    phase = np.exp(1j * (idx.f * mode.beta * atom.z + idx.l * atom.phi))
    return complex(pref * (d @ e) * phase)


def guided_matrices(mode: GuidedModeSolution, atoms: Sequence[AtomSpec]) -> dict:
    """Directional guided decay matrices {f: gamma^(g)f_ij}, units of gamma0."""
    out = {}
    for f in (FORWARD, BACKWARD):
        g = np.array([[coupling_g_guided(mode, GuidedModeIndex(f, l), at) for at in atoms] for l in (1, -1)])
        out[f] = 2 * np.pi * np.einsum("li,lj->ij", g, g.conj())
    return out


def gamma_guided(fiber: FiberSpec, omega0: float, atom_i: AtomSpec, atom_j: AtomSpec, mode=None):
    """(gamma_ij^(g), {f: gamma_ij^(g)f}) in units of gamma0."""
    _check_outside(fiber, (atom_i, atom_j))
    mode = solve_mode(fiber, omega0) if mode is None else mode
    mats = guided_matrices(mode, [atom_i, atom_j])
    per = {f: complex(mats[f][0, 1]) for f in mats}
    return per[FORWARD] + per[BACKWARD], per


def omega_from_directional(gamma12_dir: dict, z1: float, z2: float) -> complex:
    """Guided dipole-dipole coefficient Omega_12^(g) from the pole formula.

    For z1 == z2 the limit z2 -> z1 from z2 > z1 is taken.
    """
    z12 = z1 - z2
    sgn = np.sign(z12) if z12 != 0 else -1.0
    return complex(-0.5j * sum(np.sign(f) * sgn * gamma12_dir[f] for f in (FORWARD, BACKWARD)))


def omega_guided(fiber: FiberSpec, omega0: float, atom_1: AtomSpec, atom_2: AtomSpec, mode=None) -> complex:
    _, per = gamma_guided(fiber, omega0, atom_1, atom_2, mode=mode)
    return omega_from_directional(per, atom_1.z, atom_2.z)


def omega_1d_closed_form(gamma_dir: dict, z12: float, omega0: float, v_g: float) -> complex:
    """Dipole-dipole coefficient of the chiral 1D waveguide model, z12 != 0."""
    if z12 == 0:
        raise DomainError("closed form needs z1 != z2")
    return complex(
        -0.5j * sum(np.sign(f * z12) * gamma_dir[f] * np.exp(1j * f * omega0 * z12 / v_g) for f in (FORWARD, BACKWARD))
    )


@functools.lru_cache(maxsize=4096)
def _mode_at(fiber: FiberSpec, omega: float) -> GuidedModeSolution:
    return solve_mode(fiber, omega)


def _pv_integrand(fiber, omega0, atom_1, atom_2, x):
    """Per-direction sum_l G1 conj(G2) at omega = x omega0, plus beta'."""
    mode = _mode_at(fiber, float(x * omega0))
    vals = {}
    for f in (FORWARD, BACKWARD):
        acc = 0j
        for l in (1, -1):
            idx = GuidedModeIndex(f, l)
            g1 = coupling_g_guided(mode, idx, atom_1, omega_ref=omega0)
            g2 = coupling_g_guided(mode, idx, atom_2, omega_ref=omega0)
            acc += g1 * np.conj(g2)
        vals[f] = acc
    return vals, mode.beta_prime


def omega_guided_pv(
    fiber: FiberSpec,
    atom_1: AtomSpec,
    atom_2: AtomSpec,
    omega0: float,
    window: tuple,
    n_nodes: int = 200,
    tails: bool = True,
) -> complex:
    """Principal-value quadrature of the guided dipole-dipole integral.

    Verification route only. The integrand sum_fl G1 conj(G2) / (omega -
    omega0) is integrated with a midpoint grid symmetric about omega0 on
    ``window``; outside the window each direction f is continued with its
    edge amplitude and the local linear phase f beta'(edge) z12, which
    integrates in closed form through E1.
    """
    lo, hi = window
    if not lo < omega0 < hi:
        raise DomainError("window must bracket omega0")
    if atom_1.z == atom_2.z:
        raise DomainError("PV route needs z1 != z2")
    _check_outside(fiber, (atom_1, atom_2))
    x_lo, x_hi = lo / omega0, hi / omega0
    half = min(1 - x_lo, x_hi - 1)
    n_half = max(n_nodes // 2, 1)
    step = half / n_half
    offs = (np.arange(n_half) + 0.5) * step
    total = 0j
    for t in offs:
        fp, _ = _pv_integrand(fiber, omega0, atom_1, atom_2, 1 + t)
        fm, _ = _pv_integrand(fiber, omega0, atom_1, atom_2, 1 - t)
        total += (sum(fp.values()) - sum(fm.values())) / t * step
    # leftover asymmetric part of the window carries no pole
    a_lo, a_hi = (x_lo, 1 - half) if 1 - x_lo > half else (1 + half, x_hi)
    if a_hi - a_lo > 1e-12:
        gx, gw = np.polynomial.legendre.leggauss(max(n_nodes // 4, 8))
        xs = 0.5 * (a_hi - a_lo) * gx + 0.5 * (a_hi + a_lo)
        for x, wgt in zip(xs, 0.5 * (a_hi - a_lo) * gw):
            fv, _ = _pv_integrand(fiber, omega0, atom_1, atom_2, x)
            total += wgt * sum(fv.values()) / (x - 1)
    if tails:
        z12 = atom_1.z - atom_2.z
        f_hi, bp_hi = _pv_integrand(fiber, omega0, atom_1, atom_2, x_hi)
        f_lo, bp_lo = _pv_integrand(fiber, omega0, atom_1, atom_2, x_lo)
        T_hi, T_lo = x_hi - 1, 1 - x_lo
        for f in (FORWARD, BACKWARD):
            kap_hi = f * bp_hi * z12 * omega0
            kap_lo = f * bp_lo * z12 * omega0
            total += f_hi[f] * np.exp(-1j * kap_hi * T_hi) * special.exp1(-1j * kap_hi * T_hi)
            total += -f_lo[f] * np.exp(1j * kap_lo * T_lo) * special.exp1(1j * kap_lo * T_lo)
    return complex(-total)


# ------------------------------------------------------------- radiation


def _gl_panels(n_panels: int, order: int, lo: float, hi: float):
    gx, gw = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    return (mid + half * gx).ravel(), (half * gw).ravel()


@functools.lru_cache(maxsize=2048)
def _radiation_grid_modes(fiber: FiberSpec, omega: float, n_panels: int, order: int, f: int, m: int, l: int):
    """Modes on the half-axis f of the beta quadrature, with weights.

    beta = f k sin(theta), theta in (0, pi/2), so d beta = k cos(theta)
    d theta and the light-line endpoints are never sampled.
    """
    k = omega / C_LIGHT
    theta, wt = _gl_panels(n_panels, order, 0.0, np.pi / 2)
    beta = f * k * np.sin(theta)
    weights = k * np.cos(theta) * wt
    return build_radiation_mode(fiber, omega, beta, m, l), weights


def _radiation_shell(fiber, omega, atoms, n_panels, order, m_values):
    """Contribution of the orders ``m_values`` to {f: gamma^(r)f_ij}."""
    pref = 1.5 * np.pi * C_LIGHT**3 / omega**2
    n = len(atoms)
    out = {f: np.zeros((n, n), dtype=complex) for f in (FORWARD, BACKWARD)}
    dips = [at.cylindrical_dipole() for at in atoms]
    for f in (FORWARD, BACKWARD):
        for m in m_values:
            for l in (1, -1):
                mode, w = _radiation_grid_modes(fiber, omega, n_panels, order, f, m, l)
                g = np.empty((n, w.size), dtype=complex)
                for i, at in enumerate(atoms):
                    e = eval_rad_profile(mode, at.r)
                    g[i] = (dips[i] @ e) * np.exp(1j * (mode.beta * at.z + m * at.phi))
                out[f] += pref * np.einsum("b,ib,jb->ij", w, g, g.conj())
    return out


def _radiation_msum(fiber, omega, atoms, n_panels, numerics: Numerics):
    order = numerics.panel_order
    total = _radiation_shell(fiber, omega, atoms, n_panels, order, range(-numerics.m_start, numerics.m_start + 1))
    small = 0
    m = numerics.m_start
    while small < 2:
        m += 1
        if m > numerics.m_cap:
            raise ConvergenceError(f"radiation m-sum not converged at |m| = {numerics.m_cap}")
        shell = _radiation_shell(fiber, omega, atoms, n_panels, order, (-m, m))
        for f in total:
            total[f] += shell[f]
        scale = np.linalg.norm(total[FORWARD] + total[BACKWARD])
        change = np.linalg.norm(shell[FORWARD] + shell[BACKWARD])
        small = small + 1 if change < numerics.rtol_m * scale else 0
    return total, m


def radiation_matrices(fiber: FiberSpec, omega0: float, atoms: Sequence[AtomSpec], numerics: Numerics = Numerics()):
    """Directional radiation decay matrices {f: gamma^(r)f_ij}, units of gamma0.

    f = +1 integrates beta over (0, k0), f = -1 over (-k0, 0). The node
    count is doubled until the full matrix changes by less than
    ``numerics.rtol_beta`` (Frobenius norm, relative).
    """
    _check_outside(fiber, atoms)
    k = omega0 / C_LIGHT
    order = numerics.panel_order
    zs = [at.z for at in atoms]
    spread = max(zs) - min(zs)
    # resolve exp(i k z12 sin theta): about two panels per oscillation
    n_panels = max(math.ceil(numerics.beta_nodes / order), math.ceil(k * spread / np.pi))
    prev, _ = _radiation_msum(fiber, omega0, atoms, n_panels, numerics)
    while True:
        n_panels *= 2
        if n_panels * order > numerics.max_beta_nodes:
            raise ConvergenceError(f"beta quadrature not converged with {numerics.max_beta_nodes} nodes")
        cur, m_used = _radiation_msum(fiber, omega0, atoms, n_panels, numerics)
        tot_prev = prev[FORWARD] + prev[BACKWARD]
        tot_cur = cur[FORWARD] + cur[BACKWARD]
        if np.linalg.norm(tot_cur - tot_prev) < numerics.rtol_beta * np.linalg.norm(tot_cur):
            return cur
        prev = cur


def gamma_radiation(fiber: FiberSpec, omega0: float, atom_i: AtomSpec, atom_j: AtomSpec, numerics: Numerics = Numerics()):
    """(gamma_ij^(r), {f: gamma_ij^(r)f}) in units of gamma0."""
    mats = radiation_matrices(fiber, omega0, [atom_i, atom_j], numerics)
    per = {f: complex(mats[f][0, 1]) for f in mats}
    return per[FORWARD] + per[BACKWARD], per


# ------------------------------------------------------------ free space


def _vacuum_geometry(atom_i: AtomSpec, atom_j: AtomSpec, omega0: float):
    R = atom_i.position - atom_j.position
    dist = np.linalg.norm(R)
    di, dj = atom_i.dipole, atom_j.dipole
    x = omega0 / C_LIGHT * dist
    if dist == 0:
        return x, np.vdot(dj, di), 0.0
    rhat = R / dist
    dd = di @ dj.conj()
    proj = (di @ rhat) * (dj.conj() @ rhat)
    return x, dd, proj


def gamma_vac(atom_i: AtomSpec, atom_j: AtomSpec, omega0: float) -> complex:
    """Free-space (cross-)decay coefficient in units of gamma0."""
    x, dd, proj = _vacuum_geometry(atom_i, atom_j, omega0)
    if x < 1e-4:
        # small-x series of the radial functions
        near = -1.0 / 3.0 + x**2 / 30.0
        far = 1.0 - x**2 / 6.0
    else:
        near = np.cos(x) / x**2 - np.sin(x) / x**3
        far = np.sin(x) / x
    return complex(1.5 * ((dd - 3 * proj) * near + (dd - proj) * far))


def omega_vac(atom_1: AtomSpec, atom_2: AtomSpec, omega0: float) -> complex:
    """Free-space dipole-dipole coefficient Omega_12 in units of gamma0."""
    x, dd, proj = _vacuum_geometry(atom_1, atom_2, omega0)
    if x == 0:
        raise DomainError("coincident atoms: free-space dipole-dipole coefficient is singular")
    return complex(
        0.75 * ((dd - 3 * proj) * (np.sin(x) / x**2 + np.cos(x) / x**3) - (dd - proj) * np.cos(x) / x)
    )


def omega_radiation_approx(omega_vac12: complex, gamma_r11: float, gamma_r22: float) -> complex:
    """Free-space Omega_12 rescaled by the fiber-modified radiation density."""
    return complex(omega_vac12 * np.sqrt(gamma_r11.real * gamma_r22.real))


# ------------------------------------------------------------ chirality


@dataclass(frozen=True)
class Chirality:
    phi_gamma: float
    phi_omega: float
    omega_tilde: complex
    transfer_fwd: float
    transfer_bwd: float
    phase_defined: bool = True


def chirality_diagnostics(gamma12: complex, omega12: complex) -> Chirality:
    """Phases of gamma_12 and Omega_12 and the two excitation-transfer
    coefficients of the phase-transformed master equation.

    ``transfer_fwd`` multiplies the 1 -> 2 transfer term, ``transfer_bwd``
    the 2 -> 1 term.
    """
    g = abs(gamma12)
    defined = g > 0
    if not defined:
        warnings.warn("gamma_12 = 0: its phase is undefined", RuntimeWarning, stacklevel=2)
    phi_g = float(np.angle(gamma12)) if defined else float("nan")
    phi_o = float(np.angle(omega12)) if omega12 != 0 else 0.0
    om_t = abs(omega12) * np.exp(1j * (phi_o - (phi_g if defined else 0.0)))
    return Chirality(
        phi_gamma=phi_g,
        phi_omega=phi_o,
        omega_tilde=complex(om_t),
        transfer_fwd=float(g + 2 * om_t.imag),
        transfer_bwd=float(g - 2 * om_t.imag),
        phase_defined=defined,
    )


# ---------------------------------------------------------- full ledger


@dataclass(frozen=True, eq=False)
class CouplingCoefficients:
    gamma_g: np.ndarray
    gamma_g_dir: dict
    gamma_r: np.ndarray
    gamma_r_dir: dict
    omega_g12: complex
    omega_r12: complex
    gamma_vac: np.ndarray
    omega_vac12: complex
    n_atoms: int = 2

    @property
    def gamma_total(self) -> np.ndarray:
        return self.gamma_g + self.gamma_r

    @property
    def omega12(self) -> complex:
        return self.omega_g12 + self.omega_r12

    @property
    def omega(self) -> np.ndarray:
        """Off-diagonal dipole-dipole matrix (diagonal shifts neglected)."""
        return np.array([[0, self.omega12], [np.conj(self.omega12), 0]], dtype=complex)

    @property
    def chirality(self) -> Chirality:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return chirality_diagnostics(self.gamma_total[0, 1], self.omega12)

    @property
    def phi_gamma(self) -> float:
        return self.chirality.phi_gamma

    @property
    def phi_omega(self) -> float:
        return self.chirality.phi_omega

    @property
    def transfer_fwd(self) -> float:
        return self.chirality.transfer_fwd

    @property
    def transfer_bwd(self) -> float:
        return self.chirality.transfer_bwd

    def single_atom(self, keep: int = 0) -> "CouplingCoefficients":
        """Copy with every coupling of the other atom set to zero."""
        mask = np.zeros((2, 2))
        mask[keep, keep] = 1.0
        return CouplingCoefficients(
            gamma_g=self.gamma_g * mask,
            gamma_g_dir={f: v * mask for f, v in self.gamma_g_dir.items()},
            gamma_r=self.gamma_r * mask,
            gamma_r_dir={f: v * mask for f, v in self.gamma_r_dir.items()},
            omega_g12=0j,
            omega_r12=0j,
            gamma_vac=self.gamma_vac * mask,
            omega_vac12=0j,
            n_atoms=1,
        )

    def free_space(self) -> "CouplingCoefficients":
        """Coefficients of the same atoms with the fiber removed."""
        zero = np.zeros((2, 2), dtype=complex)
        g = self.gamma_vac
        return CouplingCoefficients(
            gamma_g=zero,
            gamma_g_dir={FORWARD: zero, BACKWARD: zero},
            gamma_r=g,
            gamma_r_dir={FORWARD: g / 2, BACKWARD: g / 2},
            omega_g12=0j,
            omega_r12=self.omega_vac12,
            gamma_vac=g,
            omega_vac12=self.omega_vac12,
            n_atoms=self.n_atoms,
        )

    @classmethod
    def from_matrices(cls, gamma_g_dir, gamma_r_dir, omega_g12=0j, omega_r12=0j, gamma_vac=None, omega_vac12=0j):
        """Assemble from directional 2x2 matrices (used by tests and toy models)."""
        gg = {f: np.asarray(v, dtype=complex) for f, v in gamma_g_dir.items()}
        gr = {f: np.asarray(v, dtype=complex) for f, v in gamma_r_dir.items()}
        return cls(
            gamma_g=gg[FORWARD] + gg[BACKWARD],
            gamma_g_dir=gg,
            gamma_r=gr[FORWARD] + gr[BACKWARD],
            gamma_r_dir=gr,
            omega_g12=complex(omega_g12),
            omega_r12=complex(omega_r12),
            gamma_vac=np.eye(2, dtype=complex) if gamma_vac is None else np.asarray(gamma_vac, dtype=complex),
            omega_vac12=complex(omega_vac12),
        )


def compute_coefficients(
    fiber: FiberSpec,
    omega0: float,
    atoms: Sequence[AtomSpec],
    numerics: Numerics = Numerics(),
    mode: Optional[GuidedModeSolution] = None,
    include_radiation: bool = True,
) -> CouplingCoefficients:
    """Every gamma and Omega coefficient for one or two atoms.

    With one atom the second row and column are zero. For coincident
    atoms the free-space and radiation Omega terms are NaN.
    """
    atoms = list(atoms)
    if len(atoms) not in (1, 2):
        raise DomainError("one or two atoms supported")
    _check_outside(fiber, atoms)
    mode = solve_mode(fiber, omega0) if mode is None else mode

    def pad(mat):
        out = np.zeros((2, 2), dtype=complex)
        n = mat.shape[0]
        out[:n, :n] = mat
        return out

    gg = {f: pad(v) for f, v in guided_matrices(mode, atoms).items()}
    if include_radiation:
        gr = {f: pad(v) for f, v in radiation_matrices(fiber, omega0, atoms, numerics).items()}
    else:
        gr = {f: np.zeros((2, 2), dtype=complex) for f in (FORWARD, BACKWARD)}
    gvac = np.zeros((2, 2), dtype=complex)
    for i, ai in enumerate(atoms):
        for j, aj in enumerate(atoms):
            gvac[i, j] = 1.0 if i == j else gamma_vac(ai, aj, omega0)

    if len(atoms) == 2:
        a1, a2 = atoms
        om_g = omega_from_directional({f: gg[f][0, 1] for f in gg}, a1.z, a2.z)
        if np.allclose(a1.position, a2.position, rtol=0, atol=1e-15):
            # coincident atoms: the decay matrices are fine, Omega is singular
            om_vac = om_r = complex(np.nan, np.nan)
        else:
            om_vac = omega_vac(a1, a2, omega0)
            gr_tot = gr[FORWARD] + gr[BACKWARD]
            om_r = omega_radiation_approx(om_vac, gr_tot[0, 0], gr_tot[1, 1]) if include_radiation else 0j
    else:
        om_g = om_r = om_vac = 0j
    return CouplingCoefficients(
        gamma_g=gg[FORWARD] + gg[BACKWARD],
        gamma_g_dir=gg,
        gamma_r=gr[FORWARD] + gr[BACKWARD],
        gamma_r_dir=gr,
        omega_g12=om_g,
        omega_r12=om_r,
        gamma_vac=gvac,
        omega_vac12=om_vac,
        n_atoms=len(atoms),
    )
