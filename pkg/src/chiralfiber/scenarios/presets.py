"""Figure presets: named parameter sets mapped onto commands.

Every preset starts from the baseline fiber (a = 250 nm, n1 = 1.45,
n2 = 1, 852 nm) with sigma+ dipoles; any parameter a preset does not
set explicitly comes from that baseline.
Radial sweeps run to 1200 nm and axial sweeps to 2000 nm. Ids without
a panel letter select panel (a).
"""

from __future__ import annotations

import copy

from ..errors import ConfigError
from .config import AtomConfig, InitialStateConfig, RunConfig, SweepConfig

SWEEP_POINTS = 41

_SURFACE = AtomConfig()
_ONE_ATOM = (_SURFACE,)
_TWO_SURFACE = (_SURFACE, _SURFACE)


def _two_at(r_minus_a, z21):
    a = AtomConfig(r_minus_a_nm=r_minus_a)
    return (a, AtomConfig(r_minus_a_nm=r_minus_a, z_nm=z21))


def _radial(path):
    return SweepConfig(parameter=path, start=0.0, stop=1200.0, n_points=SWEEP_POINTS)


def _axial(path, start=0.0):
    return SweepConfig(parameter=path, start=start, stop=2000.0, n_points=SWEEP_POINTS)


def _dyn(z21, kinds, baseline):
    return RunConfig(atoms=_two_at(200.0, z21), initial_state=InitialStateConfig(kinds=kinds), baseline=baseline)


def _build():
    P = {}
    # single-atom rates
    for fig in (2, 3):
        P[f"fig{fig}a"] = ("rates", RunConfig(atoms=_ONE_ATOM, sweep=_radial("atoms.0.r_minus_a_nm")))
        P[f"fig{fig}b"] = ("rates", RunConfig(atoms=_ONE_ATOM, sweep=_axial("atoms.0.z_nm")))
    # cross-atom rates and dipole-dipole coefficients, atom 1 at the surface
    for fig, cmd in ((4, "rates"), (5, "rates"), (6, "rates"), (7, "rates"), (8, "rates"), (9, "ddi"), (11, "ddi")):
        P[f"fig{fig}a"] = (cmd, RunConfig(atoms=_TWO_SURFACE, sweep=_radial("atoms.1.r_minus_a_nm")))
        P[f"fig{fig}b"] = (cmd, RunConfig(atoms=_TWO_SURFACE, sweep=_axial("atoms.1.z_nm")))
    # free-space coefficient along the axis; z21 = 0 is singular
    P["fig10"] = ("ddi", RunConfig(atoms=_TWO_SURFACE, sweep=_axial("atoms.1.z_nm", start=20.0)))
    # time evolution from |psi1>, |psi2>
    for figs, z21 in (((12, 13, 14), 150.0), ((15, 16), 100.0), ((17, 18), 960.0)):
        for fig in figs:
            P[f"fig{fig}"] = ("dynamics", _dyn(z21, ("psi1", "psi2"), "single"))
    # photon numbers
    for fig, kinds in ((19, ("psi1", "psi2")), (29, ("sym", "asym"))):
        cfg = _dyn(150.0, kinds, "single").replace(sweep=_axial("atoms.1.z_nm", start=25.0))
        P[f"fig{fig}"] = ("dynamics", cfg)
    for fig, kinds in ((20, ("psi1", "psi2")), (30, ("sym", "asym"))):
        cfg = _dyn(150.0, kinds, "single").replace(sweep=_radial("atoms.*.r_minus_a_nm"))
        P[f"fig{fig}"] = ("dynamics", cfg)
    # concurrence against two atoms in free space
    for panel, z21 in (("a", 100.0), ("b", 150.0), ("c", 960.0)):
        P[f"fig21{panel}"] = ("dynamics", _dyn(z21, ("psi1", "psi2"), "free_space"))
    P["fig22"] = ("dynamics", _dyn(100_000.0, ("psi1", "psi2"), "free_space"))
    # symmetric and antisymmetric superpositions
    for figs, z21 in (((23, 24, 25), 125.0), ((26, 27, 28), 300.0)):
        for fig in figs:
            P[f"fig{fig}"] = ("dynamics", _dyn(z21, ("sym", "asym"), "single"))
    return P


PRESETS = None


def presets() -> dict:
    global PRESETS
    if PRESETS is None:
        PRESETS = _build()
    return PRESETS


def resolve_figure(figure_id: str) -> str:
    fid = figure_id.lower().strip()
    table = presets()
    if fid in table:
        return fid
    if fid + "a" in table:
        return fid + "a"
    raise ConfigError(f"unknown figure id {figure_id!r}; known: {', '.join(sorted(table, key=_order))}")


def _order(fid):
    digits = "".join(ch for ch in fid if ch.isdigit())
    return int(digits), fid


def figure_ids() -> list:
    return sorted(presets(), key=_order)


def figure_config(figure_id: str, overrides: dict = None):
    """(command, RunConfig) of a preset, with optional deep-merged overrides."""
    command, cfg = presets()[resolve_figure(figure_id)]
    if overrides:
        merged = _deep_merge(cfg.to_dict(), overrides)
        cfg = RunConfig.from_dict(merged)
    return command, cfg


def _deep_merge(base, extra):
    out = copy.deepcopy(base)
    for key, val in extra.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out
