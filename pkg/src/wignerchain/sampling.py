"""Initial-state sampling in the Wigner representation.

Every trajectory owns a private counter-based RNG stream derived from
(master seed, trajectory index), so any trajectory can be recomputed in
isolation and results do not depend on how trajectories are distributed
over workers.

The per-trajectory draw order is part of the reproducibility contract:

1. wells in storage order 1..n; the middle well draws two standard
   normals (vacuum), a coherent well draws two standard normals, a Fock
   well draws one uniform;
2. one standard normal per integrator step, drawn as a single block.

Fock states are sampled on the fixed-radius circle sqrt(N + 1/2) e^{i theta}
with theta uniform.  This reproduces the first-order symmetric moments
exactly; its fourth-moment error is O(1) against N^2 and is negligible for
the occupations studied here.  It is an approximation: the exact Wigner
function of a number state takes negative values and cannot be sampled.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.random import Generator, Philox

from .model import ChainConfig, InitialState, TrajectoryState


def trajectory_rng(seed: int, traj_index: int) -> Generator:
    """Private RNG stream for one trajectory.

    Philox is counter-based: stream separation is obtained by placing each
    trajectory 2^128 counter blocks apart, which no realistic trajectory
    can exhaust.
    """
    return Generator(Philox(key=seed, counter=traj_index << 128))


def sample_coherent(alpha0: complex, rng: Generator) -> complex:
    """Draw one Wigner sample of a coherent state centred on ``alpha0``.

    The half-quantum Gaussian cloud gives ensemble means
    <alpha> = alpha0 and <|alpha|^2> = |alpha0|^2 + 1/2.
    """
    nu = rng.standard_normal(2)
    return alpha0 + (nu[0] + 1j * nu[1]) / 2.0


def sample_vacuum(rng: Generator) -> complex:
    """Vacuum sample; identical statistics to a coherent state at 0."""
    return sample_coherent(0j, rng)


def sample_fock(occupation: float, rng: Generator) -> complex:
    """Draw one fixed-radius Wigner sample of a number state.

    Every sample satisfies |alpha|^2 = N + 1/2 exactly; the phase is
    uniform so <alpha> = 0.
    """
    radius = math.sqrt(occupation + 0.5)
    theta = 2.0 * math.pi * rng.random()
    return radius * complex(math.cos(theta), math.sin(theta))


def sample_initial_chain(config: ChainConfig, rng: Generator) -> TrajectoryState:
    """Sample the t = 0 chain: vacuum in the middle, ``initial_state`` elsewhere.

    Coherent wells all share phase 0 (amplitude sqrt(atoms_per_well), real
    and positive).
    """
    n = config.n_wells
    mid0 = config.middle - 1
    amplitudes = np.empty(n, dtype=np.complex128)
    alpha0 = math.sqrt(config.atoms_per_well)
    for j in range(n):
        if j == mid0:
            amplitudes[j] = sample_vacuum(rng)
        elif config.initial_state is InitialState.COHERENT:
            amplitudes[j] = sample_coherent(alpha0, rng)
        else:
            amplitudes[j] = sample_fock(config.atoms_per_well, rng)
    return TrajectoryState(amplitudes=amplitudes, t=0.0)


def trajectory_inputs(config: ChainConfig, traj_index: int):
    """All random inputs of one trajectory: initial amplitudes and step noise.

    Returns
    -------
    alpha0 : ndarray, complex128, shape (n_wells,)
    noise : ndarray, float64, shape (n_steps,)
        Standard normals; step k uses ``noise[k]`` (eta = noise / sqrt(dt)).
    """
    rng = trajectory_rng(config.seed, traj_index)
    state = sample_initial_chain(config, rng)
    noise = rng.standard_normal(config.n_steps)
    return state.amplitudes, noise
