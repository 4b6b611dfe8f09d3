"""Exact reference dynamics for the linear regime (chi = 0).

The first-order coherence matrix rho1_{ij} = <a_i^dag a_j> closes on
itself when the interaction is off:

    d(rho1)/dt = -i [K, rho1] - (Gamma/2) M o rho1

with K the tridiagonal hopping matrix (J on the off-diagonals) and the
elementwise dephasing mask M_{ij} = delta_{im} + delta_{jm}
- 2 delta_{im} delta_{jm}: coherences touching the middle well decay at
Gamma/2, populations are untouched.  The sign convention matches the
stochastic drift d alpha/dt = +iJ (neighbours), whose first moments obey
the same equation; for Gamma = 0 the closed form is
rho1(t) = e^{-iKt} rho1(0) e^{+iKt}.

This is evolved exactly (matrix exponential of the vectorized generator),
so deviations of the stochastic pipeline from the oracle are purely
statistical.  No such desk-scale reference exists for chi > 0, where
validation falls back on conservation laws, symmetries, and published
end-state matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import NonzeroChi
from .model import ChainConfig, InitialState, sample_times
from .observables import populations as tw_populations
from .observables import tracked_pairs


@dataclass
class LinearReferenceState:
    """Unnormalized coherence matrix <a_i^dag a_j> (in atoms) at time t."""

    rho1: np.ndarray  # (n, n) complex128
    t: float


def initial_reference(config: ChainConfig) -> LinearReferenceState:
    """The t = 0 coherence matrix implied by the initial-state sampling.

    Fock wells are uncorrelated: diag(N, ..., 0, ..., N).  Coherent wells
    share phase 0, so every occupied-occupied entry equals N.
    """
    n = config.n_wells
    mid0 = config.middle - 1
    N = config.atoms_per_well
    occupied = np.ones(n, dtype=bool)
    occupied[mid0] = False
    if config.initial_state is InitialState.COHERENT:
        amp = np.where(occupied, math.sqrt(N), 0.0)
        rho = np.outer(amp, amp).astype(np.complex128)
    else:
        rho = np.diag(np.where(occupied, N, 0.0)).astype(np.complex128)
    return LinearReferenceState(rho1=rho, t=0.0)


def hopping_matrix(config: ChainConfig) -> np.ndarray:
    """Tridiagonal K with J on the off-diagonals."""
    n = config.n_wells
    K = np.zeros((n, n))
    idx = np.arange(n - 1)
    K[idx, idx + 1] = config.tunnel_j
    K[idx + 1, idx] = config.tunnel_j
    return K


def _generator(config: ChainConfig) -> np.ndarray:
    """Vectorized linear map acting on rho1 flattened in row-major order."""
    n = config.n_wells
    K = hopping_matrix(config)
    mid0 = config.middle - 1
    mask = np.zeros((n, n))
    mask[mid0, :] += 1.0
    mask[:, mid0] += 1.0
    mask[mid0, mid0] = 0.0

    def apply(rho):
        return -1j * (K @ rho - rho @ K) - (config.gamma / 2.0) * mask * rho

    gen = np.empty((n * n, n * n), dtype=np.complex128)
    basis = np.zeros((n, n), dtype=np.complex128)
    for col in range(n * n):
        basis.flat[col] = 1.0
        gen[:, col] = apply(basis).reshape(-1)
        basis.flat[col] = 0.0
    return gen


def linear_evolve(
    initial: LinearReferenceState, config: ChainConfig, t: float
) -> LinearReferenceState:
    """Propagate the coherence matrix exactly by time ``t``.

    Raises NonzeroChi unless config.chi == 0.
    """
    if config.chi != 0:
        raise NonzeroChi(f"linear oracle requires chi = 0, got {config.chi}")
    n = config.n_wells
    prop = scipy.linalg.expm(_generator(config) * t)
    rho = (prop @ initial.rho1.reshape(-1)).reshape(n, n)
    rho = (rho + rho.conj().T) / 2.0
    return LinearReferenceState(rho1=rho, t=initial.t + t)


def evolve_samples(config: ChainConfig) -> list[LinearReferenceState]:
    """Reference states at every sample time of ``config``.

    One exponential of the sample-interval propagator is reused, so the
    cost is independent of the number of samples.
    """
    if config.chi != 0:
        raise NonzeroChi(f"linear oracle requires chi = 0, got {config.chi}")
    n = config.n_wells
    times = sample_times(config)
    out = [initial_reference(config)]
    if len(times) > 1:
        step = scipy.linalg.expm(_generator(config) * (times[1] - times[0]))
        vec = out[0].rho1.reshape(-1).copy()
        for t in times[1:]:
            vec = step @ vec
            rho = vec.reshape(n, n)
            rho = (rho + rho.conj().T) / 2.0
            out.append(LinearReferenceState(rho1=rho, t=float(t)))
    return out


@dataclass
class OracleComparison:
    """Deviation report between the stochastic pipeline and the oracle.

    Deviations are in units of the stochastic standard error wherever an
    error estimate exists (populations and tracked coherence components);
    raw maximum absolute deviations are kept alongside.
    """

    config: ChainConfig
    times: np.ndarray
    max_population_dev: float
    max_population_sigma: float
    max_coherence_dev: float
    max_coherence_sigma: float
    population_sigma: np.ndarray = field(repr=False)  # (S, n)
    coherence_sigma: np.ndarray = field(repr=False)  # (S, 2 pairs, 2 re/im)


def compare_tw_to_oracle(
    config: ChainConfig,
    workers: int = 1,
    backend: str = "auto",
    chunk_size: Optional[int] = None,
) -> OracleComparison:
    """Run the full stochastic pipeline against the exact linear solution."""
    from .pipeline import run_simulation

    if config.chi != 0:
        raise NonzeroChi(f"linear oracle requires chi = 0, got {config.chi}")
    kwargs = {} if chunk_size is None else {"chunk_size": chunk_size}
    result = run_simulation(config, workers=workers, backend=backend, **kwargs)
    reference = evolve_samples(config)
    n = config.n_wells
    S = len(reference)
    pairs = tracked_pairs(n)

    pop_dev = np.empty((S, n))
    pop_sig = np.empty((S, n))
    coh_dev = np.empty((S, 2, 2))
    coh_sig = np.empty((S, 2, 2))
    for s, (acc, ref) in enumerate(zip(result.accumulators, reference)):
        tw_pop = tw_populations(acc)
        ref_pop = np.diag(ref.rho1).real
        se = result.population_stderr(s)
        pop_dev[s] = np.abs(tw_pop - ref_pop)
        with np.errstate(divide="ignore", invalid="ignore"):
            pop_sig[s] = np.where(se > 0, pop_dev[s] / se, 0.0)
        for k, (i, j) in enumerate(pairs):
            tw = acc.first_order[i - 1, j - 1] / acc.count
            ref_c = ref.rho1[i - 1, j - 1]
            se_re, se_im = result.coherence_stderr(s, i, j)
            coh_dev[s, k, 0] = abs(tw.real - ref_c.real)
            coh_dev[s, k, 1] = abs(tw.imag - ref_c.imag)
            coh_sig[s, k, 0] = coh_dev[s, k, 0] / se_re if se_re > 0 else 0.0
            coh_sig[s, k, 1] = coh_dev[s, k, 1] / se_im if se_im > 0 else 0.0

    return OracleComparison(
        config=config,
        times=result.sample_times,
        max_population_dev=float(pop_dev.max()),
        max_population_sigma=float(pop_sig.max()),
        max_coherence_dev=float(coh_dev.max()),
        max_coherence_sigma=float(coh_sig.max()),
        population_sigma=pop_sig,
        coherence_sigma=coh_sig,
    )
