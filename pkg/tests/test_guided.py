import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.constants import c as C_LIGHT

import oracles
from chiralfiber.errors import DomainError, MultimodeError, NoRootError
from chiralfiber.guided import (
    FiberSpec,
    GuidedModeIndex,
    eigen_residual,
    eval_guided_profile,
    omega_from_wavelength,
    solve_eigenvalue,
    solve_mode,
)

# single-mode fibers: radius and index pairs keeping V well below 2.405 at 852 nm
fibers = st.builds(
    FiberSpec,
    a=st.floats(min_value=150e-9, max_value=260e-9),
    n1=st.floats(min_value=1.3, max_value=1.5),
    n2=st.floats(min_value=1.0, max_value=1.1),
)


def test_baseline_eigenvalue(fiber, omega0, mode):
    assert abs(eigen_residual(fiber, omega0, mode.beta)) < 1e-10
    assert 1.0 < mode.neff < 1.45
    ref = oracles.dense_scan_beta(fiber.a, fiber.n1, fiber.n2, omega0)
    assert mode.beta == pytest.approx(ref, rel=1e-10)
    assert oracles.he11_characteristic(fiber.a, fiber.n1, fiber.n2, omega0, mode.beta) == pytest.approx(0, abs=1e-8)


@given(fib=fibers)
def test_root_agrees_with_independent_form(fib):
    omega = omega_from_wavelength(852e-9)
    if fib.v_number(omega) > 2.3 or fib.n1 - fib.n2 < 0.05:
        return
    mode = solve_eigenvalue(fib, omega)
    k = omega / C_LIGHT
    assert fib.n2 * k < mode.beta < fib.n1 * k
    # the product form of the characteristic equation vanishes at the same beta
    scale = abs(oracles.he11_characteristic(fib.a, fib.n1, fib.n2, omega, mode.beta * (1 + 1e-6)))
    assert abs(oracles.he11_characteristic(fib.a, fib.n1, fib.n2, omega, mode.beta)) < 1e-4 * scale


def test_group_index_against_oracle(mode, fiber, omega0):
    ref = oracles.group_index_oracle(fiber.a, fiber.n1, fiber.n2, omega0)
    assert mode.group_index == pytest.approx(ref, rel=1e-6)
    # strong waveguide dispersion pushes the group index past n1 here
    assert mode.group_index > mode.neff


def test_normalization_by_simpson(mode):
    prof = lambda r: eval_guided_profile(mode, GuidedModeIndex(1, 1), r)  # noqa: E731
    total = oracles.guided_norm_simpson(prof, mode.fiber.a, mode.q, mode.fiber.n1, mode.fiber.n2)
    assert total == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("r_over_a", [0.0, 0.3, 0.999, 1.0, 1.7, 4.0])
def test_symmetry_relations(mode, r_over_a):
    r = r_over_a * mode.fiber.a
    e = {(f, l): eval_guided_profile(mode, GuidedModeIndex(f, l), r) for f in (1, -1) for l in (1, -1)}
    for f in (1, -1):
        for l in (1, -1):
            er, ephi, ez = e[(f, l)]
            assert er == e[(-f, l)][0] == e[(f, -l)][0]
            assert ephi == -e[(f, -l)][1] and ephi == e[(-f, l)][1]
            assert ez == -e[(-f, l)][2] and ez == e[(f, -l)][2]
            assert er.real == 0 and ephi.imag == 0 and ez.imag == 0


def test_field_continuity_across_surface(mode):
    a = mode.fiber.a
    e_in = eval_guided_profile(mode, GuidedModeIndex(1, 1), a * (1 - 1e-12))
    e_out = eval_guided_profile(mode, GuidedModeIndex(1, 1), a)
    n1, n2 = mode.fiber.n1, mode.fiber.n2
    # tangential E continuous, normal D continuous
    assert e_in[1] == pytest.approx(e_out[1], rel=1e-9)
    assert e_in[2] == pytest.approx(e_out[2], rel=1e-9)
    assert n1**2 * e_in[0] == pytest.approx(n2**2 * e_out[0], rel=1e-9)


def test_evanescent_decay(mode):
    a = mode.fiber.a
    r = a + np.array([1.0, 2.0]) * 2e-6
    e = eval_guided_profile(mode, GuidedModeIndex(1, 1), r)
    ratio = np.linalg.norm(e[:, 1]) / np.linalg.norm(e[:, 0])
    # K_m(q r) ~ exp(-q r) / sqrt(q r) at large argument
    assert ratio == pytest.approx(np.exp(-mode.q * 2e-6) * np.sqrt(r[0] / r[1]), rel=0.05)


def test_equal_indices_have_no_root(omega0):
    with pytest.raises(NoRootError):
        solve_eigenvalue(FiberSpec(250e-9, 1.0, 1.0), omega0)


def test_vanishing_contrast_has_no_bracketed_root(omega0):
    with pytest.raises(NoRootError):
        solve_eigenvalue(FiberSpec(250e-9, 1.0 + 1e-12, 1.0), omega0)


def test_multimode_rejected(omega0):
    with pytest.raises(MultimodeError):
        solve_eigenvalue(FiberSpec(600e-9, 1.45, 1.0), omega0)


@pytest.mark.parametrize("bad", [dict(a=-1e-9, n1=1.45), dict(a=250e-9, n1=1.2, n2=1.3), dict(a=250e-9, n1=1.45, n2=0.9)])
def test_invalid_fiber(bad):
    with pytest.raises(DomainError):
        FiberSpec(**bad)


def test_invalid_mode_index():
    with pytest.raises(DomainError):
        GuidedModeIndex(0, 1)


def test_unnormalized_profile_rejected(fiber, omega0):
    with pytest.raises(DomainError):
        eval_guided_profile(solve_eigenvalue(fiber, omega0), GuidedModeIndex(1, 1), fiber.a)


def test_solve_mode_is_deterministic(fiber, omega0, mode):
    again = solve_mode(fiber, omega0)
    assert again.beta == mode.beta and again.norm_C == mode.norm_C and again.beta_prime == mode.beta_prime
