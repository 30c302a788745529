"""Two-atom master equation, photon fluxes, photon numbers and concurrence.

States live in the ordered basis {e, a, b, g} = {|++>, |+->, |-+>, |-->},
where the first sign refers to atom 1 and "+" is the excited level. Time
is measured in units of 1/gamma0 and rates in units of gamma0.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate, linalg

from .coupling import BACKWARD, FORWARD, CouplingCoefficients
from .errors import DomainError, IntegrationError, StructureWarning

E, A, B, G = 0, 1, 2, 3
BASIS_LABELS = ("e", "a", "b", "g")

_SIG = np.array([[0.0, 0.0], [1.0, 0.0]])  # |-><+| on (|+>, |->)
SIGMA = (np.kron(_SIG, np.eye(2)), np.kron(np.eye(2), _SIG))
NUMBER = SIGMA[0].T @ SIGMA[0] + SIGMA[1].T @ SIGMA[1]

TRACE_TOL = 1e-9
PSD_TOL = 1e-9
HERMITIAN_TOL = 1e-12
X_TOL = 1e-8
HALVING_TOL = 1e-6
STEP_SAFETY = 0.01

# entries that vanish for an X-shaped density matrix
_X_ENTRIES = ((E, A), (E, B), (G, A), (G, B))


@dataclass
class TwoAtomState:
    rho: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=complex)
        if self.rho.shape != (4, 4):
            raise DomainError(f"density matrix must be 4x4, got {self.rho.shape}")

    def validate(self, trace_tol: float = TRACE_TOL, psd_tol: float = PSD_TOL):
        rho = self.rho
        if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > trace_tol:
            raise DomainError(f"trace {np.trace(rho).real!r} differs from 1")
        lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
        if lam < -psd_tol:
            raise DomainError(f"density matrix has negative eigenvalue {lam:.3e}")
        return self

    @property
    def populations(self):
        """Excited-state populations (rho_exc_1, rho_exc_2)."""
        d = self.rho.diagonal().real
        return d[E] + d[A], d[E] + d[B]


def build_initial_state(kind: str, phi12: Optional[float] = None, custom=None) -> TwoAtomState:
    """Initial density matrix.

    ``psi1`` = |+->, ``psi2`` = |-+>, ``single_excited`` = |+-> (used with
    single-atom coefficients), ``sym``/``asym`` = (|+-> +/- exp(-i phi12)
    |-+>)/sqrt(2), and ``custom`` takes a validated 4x4 matrix.
    """
    if kind == "custom":
        if custom is None:
            raise DomainError("custom initial state needs a matrix")
        return TwoAtomState(np.array(custom, dtype=complex)).validate()
    psi = np.zeros(4, dtype=complex)
    if kind in ("psi1", "single_excited"):
        psi[A] = 1.0
    elif kind == "psi2":
        psi[B] = 1.0
    elif kind in ("sym", "asym"):
        if phi12 is None or not np.isfinite(phi12):
            raise DomainError(f"{kind} state needs a finite phase phi12")
        sign = 1.0 if kind == "sym" else -1.0
        psi[A] = 1 / np.sqrt(2)
        psi[B] = sign * np.exp(-1j * phi12) / np.sqrt(2)
    else:
        raise DomainError(f"unknown initial state kind {kind!r}")
    return TwoAtomState(np.outer(psi, psi.conj()))


# ---------------------------------------------------------------- generator


def liouvillian(coeffs: CouplingCoefficients) -> np.ndarray:
    """16x16 generator acting on the row-major vectorized density matrix."""
    gam = coeffs.gamma_total
    om = coeffs.omega
    eye = np.eye(4)
    L = np.zeros((16, 16), dtype=complex)
    for i in range(2):
        for j in range(2):
            s = SIGMA[i].T @ SIGMA[j]
            if gam[i, j] != 0:
                L += 0.5 * gam[i, j] * (2 * np.kron(SIGMA[j], SIGMA[i]) - np.kron(s, eye) - np.kron(eye, s.T))
            if i != j and om[i, j] != 0:
                L += -1j * om[i, j] * (np.kron(s, eye) - np.kron(eye, s.T))
    return L


def master_rhs(rho, coeffs: CouplingCoefficients) -> np.ndarray:
    """Time derivative of ``rho`` under the two-atom master equation."""
    rho = np.asarray(rho, dtype=complex)
    return (liouvillian(coeffs) @ rho.reshape(16)).reshape(4, 4)


def max_rate(coeffs: CouplingCoefficients) -> float:
    g = coeffs.gamma_total
    return float(max(g[0, 0].real, g[1, 1].real, 2 * abs(coeffs.omega12)))


# ------------------------------------------------------------ observables


def _quadratic_flux(rho, gam):
    rho = np.asarray(rho)
    d = lambda i: rho[..., i, i].real  # noqa: E731
    return (
        gam[0, 0].real * (d(E) + d(A))
        + gam[1, 1].real * (d(E) + d(B))
        + 2 * np.real(gam[0, 1] * rho[..., B, A])
    )


def guided_flux(rho, coeffs: CouplingCoefficients, f: int) -> np.ndarray:
    """Photon flux into guided modes propagating in direction f."""
    if f not in (FORWARD, BACKWARD):
        raise DomainError(f"direction must be +1 or -1, got {f!r}")
    return _quadratic_flux(rho, coeffs.gamma_g_dir[f])


def radiation_flux(rho, coeffs: CouplingCoefficients) -> np.ndarray:
    return _quadratic_flux(rho, coeffs.gamma_r)


def total_flux(rho, coeffs: CouplingCoefficients) -> np.ndarray:
    return _quadratic_flux(rho, coeffs.gamma_total)


def _x_deviation(rho) -> float:
    return max(abs(rho[i, j]) for i, j in _X_ENTRIES)


def concurrence_x(rho) -> float:
    """Concurrence of an X-shaped two-qubit state."""
    rho = np.asarray(rho)
    d = rho.diagonal().real.clip(min=0.0)
    c1 = 2 * (abs(rho[E, G]) - np.sqrt(d[A] * d[B]))
    c2 = 2 * (abs(rho[A, B]) - np.sqrt(d[E] * d[G]))
    return float(max(0.0, c1, c2))


_SPIN_FLIP = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def concurrence_wootters(rho) -> float:
    """General two-qubit concurrence from the spin-flipped state."""
    rho = np.asarray(rho, dtype=complex)
    rho = 0.5 * (rho + rho.conj().T)
    # sqrt of eigenvalues of rho rho~ = singular values of sqrt(rho) sqrt(rho~)
    w, v = np.linalg.eigh(rho)
    w = np.where(w > 1e-14 * max(w.max(), 1e-300), w, 0.0)
    sq = (v * np.sqrt(w)) @ v.conj().T
    lam = np.linalg.svd(sq @ _SPIN_FLIP @ sq.conj() @ _SPIN_FLIP, compute_uv=False)
    lam = np.sort(lam)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence(rho) -> float:
    """Concurrence, using the closed X-state form when it applies."""
    rho = np.asarray(rho)
    if _x_deviation(rho) > X_TOL:
        warnings.warn("state is not X-shaped; using the general formula", StructureWarning, stacklevel=2)
        return concurrence_wootters(rho)
    return concurrence_x(rho)


# ------------------------------------------------------------- integrator


@dataclass
class Trajectory:
    times: np.ndarray
    rho: np.ndarray
    rho_exc_1: np.ndarray
    rho_exc_2: np.ndarray
    P_plus: np.ndarray
    P_minus: np.ndarray
    P_gyd: np.ndarray
    P_rad: np.ndarray
    P_tot: np.ndarray
    N_plus: np.ndarray
    N_minus: np.ndarray
    N_gyd: np.ndarray
    N_rad: np.ndarray
    N_tot: np.ndarray
    concurrence: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    SERIES = (
        "rho_exc_1",
        "rho_exc_2",
        "P_plus",
        "P_minus",
        "P_gyd",
        "P_rad",
        "P_tot",
        "N_plus",
        "N_minus",
        "N_gyd",
        "N_rad",
        "N_tot",
        "concurrence",
    )

    @property
    def rho_exc(self) -> np.ndarray:
        return self.rho_exc_1 + self.rho_exc_2


def rk4_propagator(L: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step for the linear system d/dt x = L x."""
    hL = dt * L
    P = np.eye(L.shape[0], dtype=complex)
    term = np.eye(L.shape[0], dtype=complex)
    for n in range(1, 5):
        term = term @ hL / n
        P = P + term
    return P


def _propagate(rho0: np.ndarray, P: np.ndarray, n_steps: int, substeps: int, dt: float) -> np.ndarray:
    out = np.empty((n_steps + 1, 4, 4), dtype=complex)
    x = rho0.reshape(16).astype(complex)
    out[0] = rho0
    Pn = np.linalg.matrix_power(P, substeps)
    for k in range(1, n_steps + 1):
        x = Pn @ x
        r = x.reshape(4, 4)
        tr = r.trace().real
        if abs(tr - 1.0) > TRACE_TOL:
            raise IntegrationError(f"step {k} (t = {k * dt:.4g}): trace drift {tr - 1:.3e}")
        lam = np.linalg.eigvalsh(0.5 * (r + r.conj().T)).min()
        if lam < -PSD_TOL:
            raise IntegrationError(f"step {k} (t = {k * dt:.4g}): negative eigenvalue {lam:.3e}")
        out[k] = r
    return out


def observables(times, rhos, coeffs: CouplingCoefficients) -> dict:
    """Populations, fluxes, cumulative photon numbers and concurrence."""
    d = rhos[:, range(4), range(4)].real
    P_plus = guided_flux(rhos, coeffs, FORWARD)
    P_minus = guided_flux(rhos, coeffs, BACKWARD)
    P_rad = radiation_flux(rhos, coeffs)
    out = dict(
        rho_exc_1=d[:, E] + d[:, A],
        rho_exc_2=d[:, E] + d[:, B],
        P_plus=P_plus,
        P_minus=P_minus,
        P_gyd=P_plus + P_minus,
        P_rad=P_rad,
        P_tot=total_flux(rhos, coeffs),
    )
    out.update(photon_numbers(times, out))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", StructureWarning)
        out["concurrence"] = np.array([concurrence(r) for r in rhos])
    if caught:
        warnings.warn(f"{len(caught)} states were not X-shaped", StructureWarning, stacklevel=2)
    return out


def photon_numbers(times, fluxes: dict) -> dict:
    """Cumulative trapezoid integrals of the fluxes."""
    cum = lambda y: integrate.cumulative_trapezoid(y, times, initial=0.0)  # noqa: E731
    n_plus, n_minus = cum(fluxes["P_plus"]), cum(fluxes["P_minus"])
    return dict(
        N_plus=n_plus,
        N_minus=n_minus,
        N_gyd=n_plus + n_minus,
        N_rad=cum(fluxes["P_rad"]),
        N_tot=cum(fluxes["P_tot"]),
    )


def evolve(
    state0: TwoAtomState,
    coeffs: CouplingCoefficients,
    t_end: float = 10.0,
    dt: float = 1e-3,
    check_halving: bool = True,
) -> Trajectory:
    """Fixed-step RK4 integration of the master equation on a uniform grid.

    The trace is never renormalized; every step checks trace drift and
    positivity and raises :class:`IntegrationError` on violation. With
    ``check_halving`` the run is repeated at dt/2 and every series must
    agree to 1e-6.
    """
    if not (dt > 0 and t_end > 0):
        raise DomainError("dt and t_end must be positive")
    if not (np.all(np.isfinite(coeffs.gamma_total)) and np.isfinite(coeffs.omega12)):
        raise DomainError("coupling coefficients are not finite (coincident atoms?)")
    rate = max_rate(coeffs)
    if rate > 0 and dt > STEP_SAFETY / rate * (1 + 1e-12):
        raise DomainError(f"dt = {dt:g} exceeds {STEP_SAFETY}/Gamma_max = {STEP_SAFETY / rate:g}")
    n_steps = int(round(t_end / dt))
    if abs(n_steps * dt - t_end) > 1e-9 * t_end:
        raise DomainError("t_end must be an integer multiple of dt")
    times = np.arange(n_steps + 1) * dt + state0.t
    L = liouvillian(coeffs)
    rhos = _propagate(state0.rho, rk4_propagator(L, dt), n_steps, 1, dt)
    obs = observables(times, rhos, coeffs)
    diag = dict(
        dt=dt,
        max_trace_drift=float(np.abs(np.einsum("tii->t", rhos).real - 1).max()),
        min_eigenvalue=float(min(np.linalg.eigvalsh(0.5 * (r + r.conj().T)).min() for r in rhos)),
        max_x_deviation=float(max(_x_deviation(r) for r in rhos)),
    )
    if check_halving:
        fine = _propagate(state0.rho, rk4_propagator(L, dt / 2), n_steps, 2, dt)
        obs_f = observables(times, fine, coeffs)
        worst = max(float(np.abs(obs[k] - obs_f[k]).max()) for k in ("rho_exc_1", "rho_exc_2", "P_gyd", "P_rad"))
        worst = max(worst, float(np.abs(rhos - fine).max()))
        diag["halving_change"] = worst
        if worst > HALVING_TOL:
            raise IntegrationError(f"halving dt changed the solution by {worst:.2e} > {HALVING_TOL:g}")
    return Trajectory(times=times, rho=rhos, diagnostics=diag, **obs)


# ------------------------------------------------------- long-time limits


_EXC = [E, A, B]


def time_integrated_state(rho0, coeffs: CouplingCoefficients) -> np.ndarray:
    """int_0^inf rho(t) dt restricted to the excited block {e, a, b}.

    That block evolves autonomously, so its integral solves
    L_E X = -rho_E(0). Entries involving g are returned as zero.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    L = liouvillian(coeffs)
    idx = [4 * i + j for i in _EXC for j in _EXC]
    LE = L[np.ix_(idx, idx)]
    rhs = -rho0.reshape(16)[idx]
    # decoupled atoms leave exactly dark directions; the minimum-norm
    # solution is the right one as long as the initial state avoids them
    x, *_ = linalg.lstsq(LE, rhs)
    if np.abs(LE @ x - rhs).max() > 1e-10 * max(1.0, np.abs(rhs).max()):
        raise DomainError("initial state overlaps a non-decaying state; time integrals diverge")
    out = np.zeros((4, 4), dtype=complex)
    out[np.ix_(_EXC, _EXC)] = x.reshape(3, 3)
    return out


def asymptotic_photon_numbers(rho0, coeffs: CouplingCoefficients) -> dict:
    """Photon numbers emitted between t = 0 and t = infinity."""
    X = time_integrated_state(rho0, coeffs)
    n_plus = float(guided_flux(X, coeffs, FORWARD))
    n_minus = float(guided_flux(X, coeffs, BACKWARD))
    return dict(
        N_plus=n_plus,
        N_minus=n_minus,
        N_gyd=n_plus + n_minus,
        N_rad=float(radiation_flux(X, coeffs)),
        N_tot=float(total_flux(X, coeffs)),
    )
