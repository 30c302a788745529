"""Compare the pole formula for the guided dipole-dipole coefficient with
principal-value quadrature over several frequency windows and separations.

The residual gap at short separation is the non-resonant part of the
frequency integral, which the pole formula drops.
"""

import argparse

import numpy as np

from chiralfiber.coupling import AtomSpec, omega_guided, omega_guided_pv
from chiralfiber.guided import FiberSpec, omega_from_wavelength, solve_mode

NM = 1e-9


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--gap-nm", type=float, default=0.0, help="r - a of both atoms")
    p.add_argument("--z-nm", type=float, nargs="*", default=[300.0, 500.0, 1000.0])
    p.add_argument("--nodes", type=int, default=200)
    args = p.parse_args()
    fiber = FiberSpec(250 * NM, 1.45)
    w0 = omega_from_wavelength(852 * NM)
    mode = solve_mode(fiber, w0)
    a1 = AtomSpec(fiber.a + args.gap_nm * NM)
    windows = [(0.78, 1.22), (0.5, 1.22), (0.3, 1.24)]
    print("z_nm  " + "  ".join(f"[{lo:.2f},{hi:.2f}]" for lo, hi in windows) + "   (relative gap)")
    for z in args.z_nm:
        a2 = a1.moved(z=z * NM)
        pole = omega_guided(fiber, w0, a1, a2, mode=mode)
        gaps = []
        for lo, hi in windows:
            pv = omega_guided_pv(fiber, a1, a2, w0, (lo * w0, hi * w0), n_nodes=args.nodes)
            gaps.append(abs(pv - pole) / abs(pole))
        print(f"{z:6.0f} " + "  ".join(f"{100 * g:11.1f}%" for g in gaps) + f"   pole {pole:.4f}")


if __name__ == "__main__":
    np.set_printoptions(precision=4)
    main()
