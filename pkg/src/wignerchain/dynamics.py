"""Stratonovich equations of motion and their RK4 integration.

The drift for well j is

    d alpha_j / dt = -2i chi c_j alpha_j
                     + i J (alpha_{j-1} + alpha_{j+1})
                     + delta_{j,m} i sqrt(Gamma) alpha_m eta(t)

with c_j = |alpha_j|^2 (or |alpha_j|^2 - 1 with the Wigner correction) and
missing neighbours contributing zero.  The imaginary unit on the nonlinear
term is required: without it the flow does not conserve the total
occupation sum(|alpha_j|^2), which the drift above preserves exactly
(every term is a local phase rotation or a Hermitian hopping exchange).

eta is white noise, realized per step as eta = w / sqrt(dt) with w a
standard normal.  The draw is frozen across the four RK4 stages; for this
single commutative multiplicative noise the scheme converges to the
Stratonovich solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NumericalBlowup
from .model import ChainConfig, TrajectoryState, sample_times


@dataclass
class NoiseDraw:
    """White-noise value for one step: eta = w / sqrt(dt), w ~ N(0, 1)."""

    eta: float


@dataclass
class DriftField:
    """Time derivative of the amplitudes with the step noise frozen in."""

    derivative: np.ndarray  # complex128, shape (n_wells,)


def drift(state: TrajectoryState, config: ChainConfig, eta: NoiseDraw) -> DriftField:
    """Evaluate the combined drift + frozen-noise field at ``state``."""
    a = state.amplitudes
    c = a.real * a.real + a.imag * a.imag
    if config.wigner_correction:
        c = c - 1.0
    nb = np.zeros_like(a)
    nb[1:] += a[:-1]
    nb[:-1] += a[1:]
    v = config.tunnel_j * nb - (2.0 * config.chi * c) * a
    mid0 = config.middle - 1
    v[mid0] += math.sqrt(config.gamma) * eta.eta * a[mid0]
    return DriftField(derivative=1j * v)


def step_rk4(
    state: TrajectoryState, config: ChainConfig, rng: np.random.Generator
) -> TrajectoryState:
    """Advance one step of size dt with classical RK4 on the frozen field."""
    w = rng.standard_normal()
    eta = NoiseDraw(eta=w / math.sqrt(config.dt))
    a = state.amplitudes
    dt = config.dt

    def field(amps):
        return drift(TrajectoryState(amps, state.t), config, eta).derivative

    k1 = field(a)
    k2 = field(a + 0.5 * dt * k1)
    k3 = field(a + 0.5 * dt * k2)
    k4 = field(a + dt * k3)
    new = a + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(new.view(np.float64))):
        raise NumericalBlowup(traj_index=-1, t=state.t + dt)
    return TrajectoryState(amplitudes=new, t=state.t + dt)


def integrate_trajectory(
    config: ChainConfig,
    traj_index: int,
    sink: Optional[Callable[[TrajectoryState], None]] = None,
    backend: str = "auto",
) -> TrajectoryState:
    """Integrate one trajectory, delivering sampled states to ``sink``.

    The sink is called with the state at t = 0 and after every
    ``sample_stride`` steps.  Fully deterministic given
    (config.seed, traj_index), independent of worker count.

    Returns the final state at t_final.
    """
    from .backends import get_backend

    states, final = get_backend(backend).integrate_single(config, traj_index)
    if sink is not None:
        times = sample_times(config)
        for s, t in enumerate(times):
            sink(TrajectoryState(amplitudes=states[s].copy(), t=float(t)))
    t_end = float(config.n_steps) * config.dt
    return TrajectoryState(amplitudes=final, t=t_end)


def conserved_energy(state: TrajectoryState, config: ChainConfig) -> float:
    """Classical energy function, an exact constant of the Gamma = 0 flow.

    h = chi * sum_j |a_j|^4 - J * sum_j 2 Re(conj(a_j) a_{j+1});
    with the Wigner correction the first sum uses |a_j|^4 - 2 |a_j|^2,
    consistent with the corrected drift.
    """
    a = state.amplitudes
    p = a.real * a.real + a.imag * a.imag
    quartic = np.sum(p * p)
    if config.wigner_correction:
        quartic -= 2.0 * np.sum(p)
    hop = 2.0 * np.sum((np.conj(a[:-1]) * a[1:]).real)
    return float(config.chi * quartic - config.tunnel_j * hop)
