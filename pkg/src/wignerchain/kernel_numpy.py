"""Pure-NumPy stepping kernel, vectorized over the trajectories of a chunk.

Mirrors the Cython kernel operation for operation (same evaluation order,
no fused multiply-adds) so both backends produce the same trajectories to
the last bits; only the moment-accumulation reduction order differs.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NumericalBlowup
from .model import ChainConfig, sample_times
from .sampling import trajectory_inputs


class KernelParams(NamedTuple):
    n: int
    mid0: int  # 0-based middle well
    dt: float
    n_steps: int
    stride: int
    n_samples: int
    twochi: float
    jrate: float
    noise_coef: float  # sqrt(gamma) / sqrt(dt)
    corr: bool


class ChunkMoments(NamedTuple):
    """Per-sample moment sums over one chunk of trajectories.

    first_order[s, i, j] = sum_traj conj(a_i) a_j
    density[s, i, j]     = sum_traj |a_i|^2 |a_j|^2
    coh_re_sq[s, i, j]   = sum_traj Re(conj(a_i) a_j)^2
    """

    first_order: np.ndarray
    density: np.ndarray
    coh_re_sq: np.ndarray
    count: int


def kernel_params(config: ChainConfig) -> KernelParams:
    """Scalar inputs shared verbatim by every kernel implementation."""
    dt = config.dt
    return KernelParams(
        n=config.n_wells,
        mid0=config.middle - 1,
        dt=dt,
        n_steps=config.n_steps,
        stride=config.sample_stride,
        n_samples=config.n_samples,
        twochi=2.0 * config.chi,
        jrate=config.tunnel_j,
        noise_coef=np.sqrt(config.gamma) / np.sqrt(dt),
        corr=config.wigner_correction,
    )


def _drift_batch(p: KernelParams, a, g, out, c, t1, nb):
    """out = i * (J * (a_left + a_right) - 2 chi c a [+ g a at the middle])."""
    np.multiply(a.real, a.real, out=c)
    c += a.imag * a.imag
    if p.corr:
        c -= 1.0
    nb[:, 0] = 0.0
    nb[:, 1:] = a[:, :-1]
    nb[:, : p.n - 1] += a[:, 1:]
    np.multiply(nb, p.jrate, out=out)
    np.multiply(c, p.twochi, out=t1)
    out -= t1 * a
    out[:, p.mid0] += g * a[:, p.mid0]
    np.multiply(out, 1j, out=out)


def _integrate_batch(p: KernelParams, alpha0, noise):
    """Step a batch of trajectories, recording states at sample times.

    Returns (states (B, S, n) complex128, finals (B, n) complex128).
    """
    B = alpha0.shape[0]
    a = alpha0.copy()
    states = np.empty((B, p.n_samples, p.n), dtype=np.complex128)
    states[:, 0, :] = a

    k = np.empty_like(a)
    acc = np.empty_like(a)
    tmp = np.empty_like(a)
    kb = np.empty_like(a)
    c = np.empty((B, p.n), dtype=np.float64)
    t1 = np.empty_like(c)
    nb = np.empty_like(a)

    half_dt = 0.5 * p.dt
    dt6 = p.dt / 6.0
    s_idx = 1

    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, p.n_steps + 1):
            g = p.noise_coef * noise[:, step - 1]

            _drift_batch(p, a, g, k, c, t1, nb)
            acc[:] = k
            np.multiply(k, half_dt, out=tmp)
            tmp += a
            _drift_batch(p, tmp, g, k, c, t1, nb)
            np.multiply(k, 2.0, out=kb)
            acc += kb
            np.multiply(k, half_dt, out=tmp)
            tmp += a
            _drift_batch(p, tmp, g, k, c, t1, nb)
            np.multiply(k, 2.0, out=kb)
            acc += kb
            np.multiply(k, p.dt, out=tmp)
            tmp += a
            _drift_batch(p, tmp, g, k, c, t1, nb)
            acc += k
            np.multiply(acc, dt6, out=acc)
            a += acc

            if step % p.stride == 0 and s_idx < p.n_samples:
                states[:, s_idx, :] = a
                s_idx += 1

    return states, a


def _check_finite(config: ChainConfig, start: int, states):
    # states: (B, S, n); reduce the well axis, keep (B, S)
    B, S = states.shape[0], states.shape[1]
    finite = np.isfinite(states.view(np.float64).reshape(B, S, -1)).all(axis=2)
    if finite.all():
        return
    b, s = np.argwhere(~finite)[0]
    times = sample_times(config)
    raise NumericalBlowup(traj_index=start + int(b), t=float(times[int(s)]))


def integrate_chunk(config: ChainConfig, start: int, count: int) -> ChunkMoments:
    """Integrate trajectories [start, start + count) and accumulate moments."""
    p = kernel_params(config)
    alpha0 = np.empty((count, p.n), dtype=np.complex128)
    noise = np.empty((count, p.n_steps), dtype=np.float64)
    for b in range(count):
        alpha0[b], noise[b] = trajectory_inputs(config, start + b)
    states, _ = _integrate_batch(p, alpha0, noise)
    _check_finite(config, start, states)

    S, n = p.n_samples, p.n
    first = np.empty((S, n, n), dtype=np.complex128)
    density = np.empty((S, n, n), dtype=np.float64)
    re_sq = np.empty((S, n, n), dtype=np.float64)
    for s in range(S):
        a = states[:, s, :]
        ar, ai = a.real, a.imag
        # Split-component products keep first_order exactly Hermitian
        # (NumPy's fused complex multiply would leave last-ulp residues).
        cre = ar[:, :, None] * ar[:, None, :] + ai[:, :, None] * ai[:, None, :]
        cim = ar[:, :, None] * ai[:, None, :] - ai[:, :, None] * ar[:, None, :]
        first[s] = cre.sum(axis=0) + 1j * cim.sum(axis=0)
        re_sq[s] = (cre**2).sum(axis=0)
        pwr = ar * ar + ai * ai
        density[s] = (pwr[:, :, None] * pwr[:, None, :]).sum(axis=0)
    return ChunkMoments(first_order=first, density=density, coh_re_sq=re_sq, count=count)


def integrate_single(config: ChainConfig, traj_index: int):
    """Sampled states and final state of one trajectory.

    Returns (states (S, n) complex128, final (n,) complex128).
    """
    p = kernel_params(config)
    alpha0, noise = trajectory_inputs(config, traj_index)
    states, final = _integrate_batch(p, alpha0[None, :], noise[None, :])
    _check_finite(config, traj_index, states)
    return states[0], final[0]
