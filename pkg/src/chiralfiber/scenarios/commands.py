"""Command implementations behind the CLI; each returns a ResultTable."""

from __future__ import annotations

import functools
import json

import numpy as np

from .. import __version__
from ..coupling import BACKWARD, FORWARD, GuidedModeIndex, compute_coefficients
from ..dynamics import Trajectory, asymptotic_photon_numbers, build_initial_state, evolve
from ..errors import ChiralFiberError, ConfigError
from ..guided import eval_guided_profile
from .cache import mode_cache
from .config import NM, RunConfig
from .pool import ordered_map
from .table import ResultTable

TRAJECTORY_COLUMNS = Trajectory.SERIES
PHOTON_COLUMNS = ("N_plus", "N_minus", "N_gyd", "N_rad", "N_tot")


def _metadata(cfg: RunConfig, command: str, **extra) -> dict:
    meta = dict(
        command=command,
        config_hash=cfg.config_hash(),
        engine_version=__version__,
        tolerances=json.dumps(cfg.to_dict()["numerics"], sort_keys=True),
        config=cfg.to_json(sort_keys=True),
    )
    meta.update(extra)
    return meta


def _coefficients(cfg: RunConfig):
    fiber = cfg.fiber_spec()
    mode = mode_cache(fiber, cfg.omega0)
    return compute_coefficients(
        fiber,
        cfg.omega0,
        cfg.atom_specs(),
        numerics=cfg.numerics.to_numerics(),
        mode=mode,
        include_radiation=cfg.include_radiation,
    )


def _sweep_points(cfg: RunConfig):
    if cfg.sweep is None:
        return None, [cfg]
    values = cfg.sweep.values()
    return values, [cfg.with_parameter(cfg.sweep.parameter, float(v)) for v in values]


def _run_rows(cfg: RunConfig, row_fn, names, workers):
    values, cfgs = _sweep_points(cfg)
    rows = ordered_map(functools.partial(_guarded_row, row_fn, len(names)), cfgs, workers)
    cols = ([cfg.sweep.parameter] if values is not None else []) + list(names) + ["ok"]
    out = []
    for i, (row, ok) in enumerate(rows):
        lead = [values[i]] if values is not None else []
        out.append(lead + list(row) + [1.0 if ok else 0.0])
    return cols, out


def _guarded_row(row_fn, n, cfg):
    try:
        return row_fn(cfg), True
    except ChiralFiberError:
        return [np.nan] * n, False


# ------------------------------------------------------------------ modes


MODE_COLUMNS = ("r_nm", "beta", "neff", "group_index", "h", "q", "s", "V", "e_r_imag", "e_phi", "e_z")


def cmd_modes(cfg: RunConfig) -> ResultTable:
    """Guided-mode parameters with the (f = +, l = +) profile sampled in r."""
    fiber = cfg.fiber_spec()
    mode = mode_cache(fiber, cfg.omega0)
    n = cfg.radial_samples
    if n == 0:
        r = np.empty(0)
    elif n == 1:
        r = np.array([fiber.a])
    else:
        r = np.linspace(0.0, 3 * fiber.a, n)
    rows = []
    if r.size:
        e = eval_guided_profile(mode, GuidedModeIndex(1, 1), r)
        for i, ri in enumerate(r):
            rows.append(
                [ri / NM, mode.beta, mode.neff, mode.group_index, mode.h, mode.q, mode.s, mode.V]
                + [e[0, i].imag, e[1, i].real, e[2, i].real]
            )
    return ResultTable.from_rows(MODE_COLUMNS, rows, _metadata(cfg, "modes"))


# ------------------------------------------------------------------ rates


def _rate_names(n_atoms):
    names = []
    for j in range(1, n_atoms + 1):
        names += [f"g{j}{j}_{s}" for s in ("g", "g_plus", "g_minus", "r", "r_plus", "r_minus")]
    if n_atoms == 2:
        for part in ("g", "r", "tot"):
            names += [f"g12_{part}_re", f"g12_{part}_im", f"g12_{part}_abs"]
        names += ["g12_g_plus_abs", "g12_g_minus_abs", "g12_r_plus_abs", "g12_r_minus_abs", "phi12"]
    return names


def _rates_row(cfg: RunConfig):
    cc = _coefficients(cfg)
    n = len(cfg.atoms)
    row = []
    for j in range(n):
        row += [
            cc.gamma_g[j, j].real,
            cc.gamma_g_dir[FORWARD][j, j].real,
            cc.gamma_g_dir[BACKWARD][j, j].real,
            cc.gamma_r[j, j].real,
            cc.gamma_r_dir[FORWARD][j, j].real,
            cc.gamma_r_dir[BACKWARD][j, j].real,
        ]
    if n == 2:
        for g in (cc.gamma_g, cc.gamma_r, cc.gamma_total):
            row += [g[0, 1].real, g[0, 1].imag, abs(g[0, 1])]
        row += [
            abs(cc.gamma_g_dir[FORWARD][0, 1]),
            abs(cc.gamma_g_dir[BACKWARD][0, 1]),
            abs(cc.gamma_r_dir[FORWARD][0, 1]),
            abs(cc.gamma_r_dir[BACKWARD][0, 1]),
            float(np.angle(cc.gamma_total[0, 1])),
        ]
    return row


def cmd_rates(cfg: RunConfig, workers=None) -> ResultTable:
    """Decay coefficients in units of gamma0, optionally over a sweep."""
    names = _rate_names(len(cfg.atoms))
    cols, rows = _run_rows(cfg, _rates_row, names, workers)
    return ResultTable.from_rows(cols, rows, _metadata(cfg, "rates"))


# -------------------------------------------------------------------- ddi


DDI_NAMES = tuple(
    f"{name}_{part}" for name in ("Og", "Or", "Ovac", "O") for part in ("re", "im", "abs", "arg")
) + ("theta12", "phi12", "transfer_fwd", "transfer_bwd")


def _ddi_row(cfg: RunConfig):
    if len(cfg.atoms) != 2:
        raise ConfigError("ddi needs two atoms")
    cc = _coefficients(cfg)
    row = []
    for om in (cc.omega_g12, cc.omega_r12, cc.omega_vac12, cc.omega12):
        row += [om.real, om.imag, abs(om), float(np.angle(om))]
    ch = cc.chirality
    row += [float(np.angle(cc.omega12)), ch.phi_gamma, ch.transfer_fwd, ch.transfer_bwd]
    return row


def cmd_ddi(cfg: RunConfig, workers=None) -> ResultTable:
    """Dipole-dipole coefficients in units of gamma0, optionally over a sweep.

    Rows with coincident atoms carry NaN in the free-space and radiation
    columns, which are singular there.
    """
    if len(cfg.atoms) != 2:
        raise ConfigError("ddi needs two atoms")
    cols, rows = _run_rows(cfg, _ddi_row, DDI_NAMES, workers)
    return ResultTable.from_rows(cols, rows, _metadata(cfg, "ddi"))


# --------------------------------------------------------------- dynamics


def _initial(kind, cfg, cc):
    phi12 = None
    if kind in ("sym", "asym"):
        g12 = cc.gamma_total[0, 1]
        phi12 = float(np.angle(g12))
    return build_initial_state(kind, phi12=phi12, custom=_custom_matrix(cfg))


def _custom_matrix(cfg):
    c = cfg.initial_state.custom
    if c is None:
        return None
    return np.array([[complex(re, im) for re, im in row] for row in c])


def _runs(cfg: RunConfig, cc):
    """(suffix, coefficients, initial state) for every requested run."""
    kinds = cfg.initial_state.kinds
    runs = []
    for kind in kinds:
        runs.append((kind, cc, _initial(kind, cfg, cc)))
    if cfg.baseline == "single":
        runs.append(("single", cc.single_atom(), build_initial_state("single_excited")))
    elif cfg.baseline == "free_space":
        vac = cc.free_space()
        for kind in kinds:
            runs.append((f"{kind}_vac", vac, _initial(kind, cfg, vac)))
    return runs


def _suffix(name, tag, plain):
    return name if plain else f"{name}_{tag}"


def cmd_dynamics(cfg: RunConfig, workers=None) -> ResultTable:
    """Time evolution, or photon numbers emitted up to t = infinity over a sweep.

    Without a sweep the table holds one time series per run. With a sweep
    each row holds the photon numbers of every run, computed in closed form
    from the time-integrated density matrix.
    """
    if len(cfg.atoms) != 2:
        raise ConfigError("dynamics needs two atoms")
    if cfg.sweep is not None:
        return _dynamics_sweep(cfg, workers)
    cc = _coefficients(cfg)
    runs = _runs(cfg, cc)
    plain = len(runs) == 1
    cols = {}
    for tag, coeffs, state in runs:
        traj = evolve(state, coeffs, t_end=cfg.dynamics.t_end, dt=cfg.dynamics.dt)
        if not cols:
            cols["t"] = traj.times
        for name in TRAJECTORY_COLUMNS:
            cols[_suffix(name, tag, plain)] = getattr(traj, name)
    return ResultTable.from_columns(cols, _metadata(cfg, "dynamics"))


def _photon_names(cfg):
    kinds = list(cfg.initial_state.kinds)
    tags = kinds + (["single"] if cfg.baseline == "single" else [])
    tags += [f"{k}_vac" for k in kinds] if cfg.baseline == "free_space" else []
    return [f"{name}_{tag}" for tag in tags for name in PHOTON_COLUMNS]


def _photon_row(cfg: RunConfig):
    cc = _coefficients(cfg)
    row = []
    for _, coeffs, state in _runs(cfg, cc):
        n = asymptotic_photon_numbers(state.rho, coeffs)
        row += [n[k] for k in PHOTON_COLUMNS]
    return row


def _dynamics_sweep(cfg: RunConfig, workers=None) -> ResultTable:
    cols, rows = _run_rows(cfg, _photon_row, _photon_names(cfg), workers)
    return ResultTable.from_rows(cols, rows, _metadata(cfg, "dynamics"))


COMMAND_TABLE = {"modes": cmd_modes, "rates": cmd_rates, "ddi": cmd_ddi, "dynamics": cmd_dynamics}


def run_command(command: str, cfg: RunConfig, workers=None) -> ResultTable:
    if command not in COMMAND_TABLE:
        raise ConfigError(f"unknown command {command!r}")
    if command == "modes":
        return cmd_modes(cfg)
    return COMMAND_TABLE[command](cfg, workers=workers)


def cmd_figure(figure_id: str, overrides: dict = None, workers=None, baseline_single_atom: bool = False) -> ResultTable:
    """Run the preset of a figure and tag the table with its id."""
    from .presets import figure_config, resolve_figure

    fid = resolve_figure(figure_id)
    command, cfg = figure_config(fid, overrides)
    if baseline_single_atom and command == "dynamics":
        cfg = cfg.replace(baseline="single")
    table = run_command(command, cfg, workers=workers)
    table.metadata["figure"] = fid
    return table
