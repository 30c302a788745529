"""Total single-atom decay rate against distance from the fiber surface.

Far from the fiber the guided plus radiation rate returns to gamma0.
"""

import argparse

import numpy as np

from chiralfiber.coupling import AtomSpec, compute_coefficients
from chiralfiber.guided import FiberSpec, omega_from_wavelength

NM = 1e-9


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--gaps-nm", type=float, nargs="*", default=[0, 100, 250, 500, 1000, 2000])
    args = p.parse_args()
    fiber = FiberSpec(250 * NM, 1.45)
    w0 = omega_from_wavelength(852 * NM)
    print(" r-a (nm)   gamma_g+   gamma_g-   gamma_r    total")
    for gap in args.gaps_nm:
        cc = compute_coefficients(fiber, w0, [AtomSpec(fiber.a + gap * NM)])
        gp, gm = (cc.gamma_g_dir[f][0, 0].real for f in (1, -1))
        gr = cc.gamma_r[0, 0].real
        print(f"{gap:9.0f}  {gp:9.4f}  {gm:9.4f}  {gr:8.4f}  {gp + gm + gr:8.4f}")


if __name__ == "__main__":
    np.set_printoptions(precision=4)
    main()
