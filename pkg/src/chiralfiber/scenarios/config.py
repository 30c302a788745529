"""Run configuration: a JSON document with lengths in nanometers.

Defaults are the baseline fiber (a = 250 nm, n1 = 1.45, n2 = 1) and
wavelength 852 nm with sigma+ dipoles (i, 0, -1)/sqrt(2).
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ..coupling import SIGMA_PLUS_Y, AtomSpec, Numerics
from ..errors import ConfigError, DomainError
from ..guided import FiberSpec, omega_from_wavelength

NM = 1e-9

DIPOLE_PRESETS = {
    "sigma_plus_y": SIGMA_PLUS_Y,
    "sigma_minus_y": np.conj(SIGMA_PLUS_Y),
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
}

INITIAL_KINDS = ("psi1", "psi2", "sym", "asym", "single_excited", "custom")
BASELINES = (None, "single", "free_space")
COMMANDS = ("modes", "rates", "ddi", "dynamics")


@dataclass(frozen=True)
class FiberConfig:
    a_nm: float = 250.0
    n1: float = 1.45
    n2: float = 1.0

    def to_spec(self) -> FiberSpec:
        return FiberSpec(a=self.a_nm * NM, n1=self.n1, n2=self.n2)


@dataclass(frozen=True)
class AtomConfig:
    r_minus_a_nm: float = 0.0
    phi: float = 0.0
    z_nm: float = 0.0
    dipole: Union[str, tuple] = "sigma_plus_y"

    def dipole_vector(self) -> np.ndarray:
        if isinstance(self.dipole, str):
            try:
                return DIPOLE_PRESETS[self.dipole].astype(complex)
            except KeyError:
                raise ConfigError(f"unknown dipole preset {self.dipole!r}") from None
        comps = np.array([complex(re, im) for re, im in self.dipole])
        norm = np.linalg.norm(comps)
        if comps.shape != (3,) or norm == 0:
            raise ConfigError("dipole must be three [re, im] pairs with nonzero norm")
        return comps / norm

    def to_spec(self, fiber: FiberConfig) -> AtomSpec:
        return AtomSpec(
            r=(fiber.a_nm + self.r_minus_a_nm) * NM,
            phi=self.phi,
            z=self.z_nm * NM,
            dipole=self.dipole_vector(),
        )


@dataclass(frozen=True)
class InitialStateConfig:
    kinds: tuple = ("psi1",)
    custom: Optional[tuple] = None


@dataclass(frozen=True)
class SweepConfig:
    parameter: str
    start: float
    stop: float
    n_points: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.n_points)


@dataclass(frozen=True)
class DynamicsConfig:
    t_end: float = 10.0
    dt: float = 1e-3


@dataclass(frozen=True)
class NumericsConfig:
    beta_nodes: int = 200
    panel_order: int = 20
    rtol_beta: float = 1e-4
    max_beta_nodes: int = 20000
    m_start: int = 5
    m_cap: int = 60
    rtol_m: float = 1e-4

    def to_numerics(self) -> Numerics:
        return Numerics(**dataclasses.asdict(self))


@dataclass(frozen=True)
class OutputConfig:
    path: Optional[str] = None
    format: str = "csv"


@dataclass(frozen=True)
class RunConfig:
    fiber: FiberConfig = FiberConfig()
    wavelength_nm: float = 852.0
    atoms: tuple = (AtomConfig(),)
    initial_state: InitialStateConfig = InitialStateConfig()
    sweep: Optional[SweepConfig] = None
    dynamics: DynamicsConfig = DynamicsConfig()
    numerics: NumericsConfig = NumericsConfig()
    output: OutputConfig = OutputConfig()
    radial_samples: int = 1
    baseline: Optional[str] = None
    include_radiation: bool = True

    def __post_init__(self):
        self.validate()

    # -- derived physics objects

    @property
    def omega0(self) -> float:
        return omega_from_wavelength(self.wavelength_nm * NM)

    def fiber_spec(self) -> FiberSpec:
        try:
            return self.fiber.to_spec()
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    def atom_specs(self) -> list:
        return [at.to_spec(self.fiber) for at in self.atoms]

    # -- validation and (de)serialization

    def validate(self):
        f = self.fiber
        if not (f.a_nm > 0 and self.wavelength_nm > 0):
            raise ConfigError("fiber radius and wavelength must be positive")
        if not (f.n2 >= 1 and f.n1 > f.n2):
            raise ConfigError(f"need n1 > n2 >= 1, got n1={f.n1}, n2={f.n2}")
        if len(self.atoms) not in (1, 2):
            raise ConfigError("one or two atoms are supported")
        for at in self.atoms:
            if not at.r_minus_a_nm >= 0:
                raise ConfigError("atoms must sit outside the fiber (r - a >= 0)")
            at.dipole_vector()
        for kind in self.initial_state.kinds:
            if kind not in INITIAL_KINDS:
                raise ConfigError(f"unknown initial state {kind!r}")
        if "custom" in self.initial_state.kinds and self.initial_state.custom is None:
            raise ConfigError("custom initial state needs a matrix")
        if self.sweep is not None:
            if self.sweep.n_points < 2:
                raise ConfigError("sweep needs n_points >= 2")
            _resolve_path(self, self.sweep.parameter)
        if not (self.dynamics.dt > 0 and self.dynamics.t_end > 0):
            raise ConfigError("dt and t_end must be positive")
        if self.radial_samples < 0:
            raise ConfigError("radial_samples must be >= 0")
        if self.baseline not in BASELINES:
            raise ConfigError(f"baseline must be one of {BASELINES}")
        if self.output.format != "csv":
            raise ConfigError("only csv output is supported")

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["atoms"] = [dataclasses.asdict(a) for a in self.atoms]
        for a in d["atoms"]:
            if not isinstance(a["dipole"], str):
                a["dipole"] = [list(p) for p in a["dipole"]]
        d["initial_state"]["kinds"] = list(self.initial_state.kinds)
        if self.initial_state.custom is not None:
            d["initial_state"]["custom"] = [[list(p) for p in row] for row in self.initial_state.custom]
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        _reject_unknown(d, cls, "config")
        kw = {}
        simple = {"fiber": FiberConfig, "dynamics": DynamicsConfig, "numerics": NumericsConfig, "output": OutputConfig}
        for key, typ in simple.items():
            if key in d:
                _reject_unknown(d[key], typ, key)
                kw[key] = typ(**d[key])
        if "atoms" in d:
            atoms = []
            for a in d["atoms"]:
                _reject_unknown(a, AtomConfig, "atom")
                a = dict(a)
                if "dipole" in a and not isinstance(a["dipole"], str):
                    a["dipole"] = tuple(tuple(float(x) for x in p) for p in a["dipole"])
                atoms.append(AtomConfig(**a))
            kw["atoms"] = tuple(atoms)
        if "initial_state" in d:
            ist = dict(d["initial_state"])
            if "kind" in ist:
                ist["kinds"] = [ist.pop("kind")]
            _reject_unknown(ist, InitialStateConfig, "initial_state")
            custom = ist.get("custom")
            if custom is not None:
                custom = tuple(tuple(tuple(float(x) for x in p) for p in row) for row in custom)
            kw["initial_state"] = InitialStateConfig(kinds=tuple(ist.get("kinds", ("psi1",))), custom=custom)
        if d.get("sweep") is not None:
            _reject_unknown(d["sweep"], SweepConfig, "sweep")
            kw["sweep"] = SweepConfig(**d["sweep"])
        for key in ("wavelength_nm", "radial_samples", "baseline", "include_radiation"):
            if key in d:
                kw[key] = d[key]
        try:
            return cls(**kw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            with open(path) as fh:
                return cls.from_json(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc

    def config_hash(self) -> str:
        """Digest of every physics-relevant field (output settings excluded)."""
        d = self.to_dict()
        d.pop("output")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def with_parameter(self, path: str, value) -> "RunConfig":
        """Copy with the dotted ``path`` (e.g. ``atoms.1.z_nm``, ``atoms.*.phi``) set to ``value``."""
        return _set_path(self, path.split("."), value)


def _reject_unknown(d, typ, where):
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object")
    names = {f.name for f in dataclasses.fields(typ)}
    if typ is InitialStateConfig:
        names.add("kind")
    extra = set(d) - names
    if extra:
        raise ConfigError(f"unknown {where} field(s): {sorted(extra)}")


def _resolve_path(obj, path: str):
    """Value at a dotted path; ``*`` stands for every atom."""
    cur = obj
    for part in path.split("."):
        try:
            if part == "*":
                cur = cur[0]
            else:
                cur = cur[int(part)] if part.isdigit() else getattr(cur, part)
        except (AttributeError, IndexError, TypeError):
            raise ConfigError(f"sweep parameter {path!r} does not exist") from None
    if not isinstance(cur, (int, float)) or isinstance(cur, bool):
        raise ConfigError(f"sweep parameter {path!r} is not numeric")
    return cur


def _set_path(obj, parts, value):
    head, rest = parts[0], parts[1:]
    if head.isdigit() or head == "*":
        items = list(obj)
        targets = range(len(items)) if head == "*" else [int(head)]
        for idx in targets:
            items[idx] = _set_path(items[idx], rest, value) if rest else value
        return tuple(items)
    child = getattr(obj, head)
    new = _set_path(child, rest, value) if rest else value
    return dataclasses.replace(obj, **{head: new})
