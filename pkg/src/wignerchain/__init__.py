"""Truncated-Wigner simulator for open Bose-Hubbard chains.

An odd chain of bosonic wells with an initially empty, optionally dephased
middle well is integrated as an ensemble of Stratonovich stochastic
trajectories; trajectory averages yield populations, currents, two-mode
correlation functions, and single-particle density-matrix entropies.
"""

__version__ = "0.1.0"

from .backends import available_backends, get_backend
from .dynamics import (
    DriftField,
    NoiseDraw,
    conserved_energy,
    drift,
    integrate_trajectory,
    step_rk4,
)
from .errors import (
    ConfigError,
    DiagonalPair,
    EmptyAccumulator,
    EvenWellCount,
    NegativeRate,
    NonPositiveNorm,
    NonPositiveStep,
    NonzeroChi,
    NumericalBlowup,
    SignificantNegativeEigenvalue,
    TimeMismatch,
    WignerChainError,
)
from .model import (
    ChainConfig,
    InitialState,
    TrajectoryState,
    config_from_dict,
    config_to_dict,
    load_config,
    middle_index,
    sample_times,
    validate_config,
    with_overrides,
)
from .observables import (
    MomentAccumulator,
    ObservableRecord,
    accumulate,
    coherence,
    current_middle,
    merge,
    number_pair,
    population,
    populations,
    sigma,
    tracked_pairs,
    xi,
)
from .oracle import (
    LinearReferenceState,
    compare_tw_to_oracle,
    initial_reference,
    linear_evolve,
)
from .pipeline import SimulationResult, run_simulation
from .sampling import (
    sample_coherent,
    sample_fock,
    sample_initial_chain,
    sample_vacuum,
    trajectory_rng,
)
from .spectral import (
    SpdmMatrix,
    max_equilibrium_entropy,
    pseudo_entropy,
    reduced_middle3,
    reduced_spdm,
)
