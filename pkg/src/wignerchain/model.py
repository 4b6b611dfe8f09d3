"""Chain definition: configuration, validation, and per-trajectory state.

Well indices are 1-based in every user-facing interface, matching the usual
N_1 .. N_n labelling of chain sites; internal arrays are 0-based.  Time is
measured in units of 1/J throughout, so with the default J = 1 the reported
times are the dimensionless product Jt.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace
from enum import Enum

import numpy as np

from .errors import ConfigError, EvenWellCount, NegativeRate, NonPositiveStep


class InitialState(Enum):
    """Quantum state prepared in every initially occupied well."""

    FOCK = "fock"
    COHERENT = "coherent"


#: Defaults applied to keys missing from a JSON config document.
CONFIG_DEFAULTS = {
    "tunnel_j": 1.0,
    "chi": 0.01,
    "gamma": 0.0,
    "atoms_per_well": 200.0,
    "wigner_correction": False,
    "t_final": 30.0,
    "dt": 0.001,
    "sample_stride": 100,
}

#: Keys that must be present in a JSON config document.
REQUIRED_KEYS = ("n_wells", "initial_state", "n_traj", "seed")

ALLOWED_KEYS = frozenset(REQUIRED_KEYS) | frozenset(CONFIG_DEFAULTS)


@dataclass(frozen=True)
class ChainConfig:
    """Full physical and numerical parameterization of one simulation run.

    Attributes
    ----------
    n_wells : int
        Number of wells in the chain (odd, >= 3).
    tunnel_j : float
        Tunneling rate J between neighbouring wells (inverse time).
    chi : float
        Collisional nonlinearity (inverse time).
    gamma : float
        Dephasing rate acting on the middle well (inverse time).
    initial_state : InitialState
        State loaded into every non-middle well; the middle well always
        starts in vacuum.
    atoms_per_well : float
        Mean initial occupation of each non-middle well.
    wigner_correction : bool
        Use ``|alpha|^2 - 1`` instead of ``|alpha|^2`` in the nonlinear
        drift.  All reported observables are insensitive to this switch.
    t_final : float
        Total evolution time (units of 1/J).
    dt : float
        Integrator step (units of 1/J).
    sample_stride : int
        Observables are recorded every ``sample_stride`` steps.
    n_traj : int
        Number of stochastic trajectories.
    seed : int
        64-bit master RNG seed.
    """

    n_wells: int
    tunnel_j: float
    chi: float
    gamma: float
    initial_state: InitialState
    atoms_per_well: float
    wigner_correction: bool
    t_final: float
    dt: float
    sample_stride: int
    n_traj: int
    seed: int

    @property
    def middle(self) -> int:
        """1-based index of the central well."""
        return middle_index(self.n_wells)

    @property
    def n_steps(self) -> int:
        """Number of integrator steps (t_final rounded to whole steps)."""
        return int(round(self.t_final / self.dt))

    @property
    def n_samples(self) -> int:
        """Number of recorded sample times, including t = 0."""
        return self.n_steps // self.sample_stride + 1


@dataclass
class TrajectoryState:
    """Wigner amplitudes of one stochastic realization at time ``t``."""

    amplitudes: np.ndarray  # complex128, shape (n_wells,)
    t: float

    def norm_total(self) -> float:
        """Sum of |alpha_j|^2, conserved along a trajectory."""
        a = self.amplitudes
        return float(np.sum(a.real * a.real + a.imag * a.imag))


def middle_index(n_wells: int) -> int:
    """Return the 1-based index m = (n + 1) / 2 of the central well."""
    return (n_wells + 1) // 2


def validate_config(config: ChainConfig) -> ChainConfig:
    """Check all model invariants, returning the config unchanged.

    Raises
    ------
    EvenWellCount
        If ``n_wells`` is even (no unique middle well).
    NonPositiveStep
        If ``dt <= 0`` or ``t_final < 0``.
    NegativeRate
        If any physical rate is negative or non-finite.
    ConfigError
        For the remaining structural problems (counts below 1, bad seed).
    """
    if config.n_wells % 2 == 0:
        raise EvenWellCount(f"n_wells = {config.n_wells} is even")
    if config.n_wells < 3:
        raise ConfigError(f"n_wells = {config.n_wells} must be >= 3")
    if not (math.isfinite(config.dt) and config.dt > 0):
        raise NonPositiveStep(f"dt = {config.dt} must be > 0")
    if not (math.isfinite(config.t_final) and config.t_final >= 0):
        raise NonPositiveStep(f"t_final = {config.t_final} must be >= 0")
    for field in ("tunnel_j", "chi", "gamma", "atoms_per_well"):
        value = getattr(config, field)
        if not math.isfinite(value) or value < 0:
            raise NegativeRate(f"{field} = {value} must be finite and >= 0")
    if config.sample_stride < 1:
        raise ConfigError(f"sample_stride = {config.sample_stride} must be >= 1")
    if config.n_traj < 1:
        raise ConfigError(f"n_traj = {config.n_traj} must be >= 1")
    if not 0 <= config.seed < 2**64:
        raise ConfigError(f"seed = {config.seed} must fit in 64 bits")
    if not isinstance(config.initial_state, InitialState):
        raise ConfigError(f"initial_state = {config.initial_state!r} is not valid")
    return config


def config_from_dict(raw: dict) -> ChainConfig:
    """Build a ChainConfig from a plain dict, applying the standard defaults."""
    unknown = set(raw) - ALLOWED_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = [k for k in REQUIRED_KEYS if k not in raw]
    if missing:
        raise ConfigError(f"missing required config keys: {missing}")
    merged = {**CONFIG_DEFAULTS, **raw}
    state = merged["initial_state"]
    if isinstance(state, str):
        try:
            state = InitialState(state.lower())
        except ValueError:
            raise ConfigError(
                f"initial_state must be 'fock' or 'coherent', got {state!r}"
            ) from None
    try:
        return ChainConfig(
            n_wells=int(merged["n_wells"]),
            tunnel_j=float(merged["tunnel_j"]),
            chi=float(merged["chi"]),
            gamma=float(merged["gamma"]),
            initial_state=state,
            atoms_per_well=float(merged["atoms_per_well"]),
            wigner_correction=bool(merged["wigner_correction"]),
            t_final=float(merged["t_final"]),
            dt=float(merged["dt"]),
            sample_stride=int(merged["sample_stride"]),
            n_traj=int(merged["n_traj"]),
            seed=int(merged["seed"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config value: {exc}") from None


def config_to_dict(config: ChainConfig) -> dict:
    """Inverse of :func:`config_from_dict` (JSON-serializable)."""
    out = asdict(config)
    out["initial_state"] = config.initial_state.value
    return out


def load_config(path) -> ChainConfig:
    """Read and validate a JSON config file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config document must be a JSON object")
    return validate_config(config_from_dict(raw))


def with_overrides(config: ChainConfig, **overrides) -> ChainConfig:
    """Copy a config with some fields replaced (re-validated)."""
    return validate_config(replace(config, **overrides))


def sample_times(config: ChainConfig) -> np.ndarray:
    """Times at which observables are recorded: k * sample_stride * dt."""
    steps = np.arange(config.n_samples, dtype=np.int64) * config.sample_stride
    return steps.astype(np.float64) * config.dt
