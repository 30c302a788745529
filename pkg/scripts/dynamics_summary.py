"""Headline dynamics numbers at the preset geometries: directional
photon ratio, super/subradiant guided flux and long-range concurrence.
"""

import numpy as np

from chiralfiber.coupling import AtomSpec, compute_coefficients
from chiralfiber.dynamics import asymptotic_photon_numbers, build_initial_state, evolve
from chiralfiber.guided import FiberSpec, omega_from_wavelength

NM = 1e-9
FIBER = FiberSpec(250 * NM, 1.45)
W0 = omega_from_wavelength(852 * NM)


def coeffs(z21_nm, gap_nm=200.0):
    a1 = AtomSpec(FIBER.a + gap_nm * NM)
    return compute_coefficients(FIBER, W0, [a1, a1.moved(z=z21_nm * NM)])


def state(kind, cc):
    return build_initial_state(kind, phi12=float(np.angle(cc.gamma_total[0, 1])))


def main():
    cc = coeffs(150.0)
    for kind in ("psi1", "psi2"):
        n = asymptotic_photon_numbers(state(kind, cc).rho, cc)
        print(f"z21 = 150 nm, {kind}: N+ = {n['N_plus']:.4f}, N- = {n['N_minus']:.4f}, ratio {n['N_plus'] / n['N_minus']:.2f}")
    for z in (125.0, 300.0):
        cc = coeffs(z)
        single = evolve(build_initial_state("single_excited"), cc.single_atom(), t_end=0.01, dt=1e-3)
        line = [f"single P_gyd {single.P_gyd[1]:.4f} P_rad {single.P_rad[1]:.3f}"]
        for kind in ("sym", "asym"):
            tr = evolve(state(kind, cc), cc, t_end=0.01, dt=1e-3)
            line.append(f"{kind} P_gyd {tr.P_gyd[1]:.4f} P_rad {tr.P_rad[1]:.3f}")
        print(f"z21 = {z:.0f} nm, t = 0+: " + "; ".join(line))
    cc = coeffs(100_000.0)
    vac = cc.free_space()
    for kind in ("psi1", "psi2"):
        c_fib = evolve(state(kind, cc), cc, t_end=10.0, dt=1e-3).concurrence.max()
        c_vac = evolve(state(kind, vac), vac, t_end=10.0, dt=1e-3).concurrence.max()
        print(f"z21 = 100 um, {kind}: peak concurrence {c_fib:.4f} (free space {c_vac:.5f})")


if __name__ == "__main__":
    main()
