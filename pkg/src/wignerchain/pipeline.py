"""Batch engine: chunked trajectory integration with deterministic reduction.

Trajectories are grouped into fixed-size index chunks (independent of the
worker count), each chunk is integrated by one worker, and the partial
moment sums are merged in chunk order.  Floating-point output therefore
depends only on (config, backend, chunk_size), never on parallelism.

Per-chunk observable records are kept for batch-means standard errors of
the nonlinear statistics (xi, sigma, entropies); the linear statistics
(populations, coherence components) also have exact per-trajectory error
estimates from the accumulated second moments.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import observables as obs
from .backends import get_backend
from .kernel_numpy import ChunkMoments
from .model import ChainConfig, sample_times, validate_config
from .observables import MomentAccumulator, ObservableRecord, tracked_pairs
from .spectral import pseudo_entropy, reduced_middle3, reduced_spdm

#: Trajectory count per reduction chunk.  Fixed so that results are
#: independent of the worker count; also the batch size for batch-means
#: standard errors.
DEFAULT_CHUNK_SIZE = 250


def _chunk_plan(n_traj: int, chunk_size: int):
    """(start, count) pairs covering 0..n_traj in fixed-size blocks."""
    return [
        (start, min(chunk_size, n_traj - start))
        for start in range(0, n_traj, chunk_size)
    ]


def _integrate_chunk_task(args):
    config, backend_name, start, count = args
    backend = get_backend(backend_name)
    return backend.integrate_chunk(config, start, count)


def _accumulator_list(config, times, first, density, count):
    return [
        MomentAccumulator(
            t=float(times[s]),
            count=count,
            first_order=first[s],
            density_pairs=density[s],
        )
        for s in range(len(times))
    ]


def build_record(acc: MomentAccumulator, config: ChainConfig) -> ObservableRecord:
    """Convert one merged accumulator into the reported quantities."""
    (l1, m1), (l2, r2) = tracked_pairs(config.n_wells)
    return ObservableRecord(
        t=acc.t,
        populations=obs.populations(acc),
        current=obs.current_middle(acc, config.middle),
        coh_lm=obs.coherence(acc, l1, m1),
        coh_lr=obs.coherence(acc, l2, r2),
        xi_lm=obs.xi(acc, l1, m1),
        xi_lr=obs.xi(acc, l2, r2),
        sigma_lm=obs.sigma(acc, l1, m1),
        sigma_lr=obs.sigma(acc, l2, r2),
        zeta=pseudo_entropy(reduced_spdm(acc)),
        zeta_r=pseudo_entropy(reduced_middle3(acc)),
    )


@dataclass
class SimulationResult:
    """Everything produced by one batch run."""

    config: ChainConfig
    sample_times: np.ndarray
    accumulators: list  # merged MomentAccumulator per sample time
    coh_re_sq: np.ndarray = field(repr=False)  # (S, n, n) sum of Re(c)^2
    records: list = field(repr=False)  # ObservableRecord per sample time
    chunk_records: list = field(repr=False)  # per full chunk: list of records
    backend: str = "auto"
    workers: int = 1
    chunk_size: int = DEFAULT_CHUNK_SIZE
    wall_time: float = 0.0

    @property
    def n_traj(self) -> int:
        return self.accumulators[0].count

    @property
    def spdm_final(self):
        return reduced_spdm(self.accumulators[-1])

    @property
    def final_record(self) -> ObservableRecord:
        return self.records[-1]

    def population_stderr(self, s: int) -> np.ndarray:
        """Exact per-trajectory standard errors of all populations at sample s."""
        acc = self.accumulators[s]
        return np.array(
            [obs.population_stderr(acc, j) for j in range(1, acc.n_wells + 1)]
        )

    def coherence_stderr(self, s: int, i: int, j: int):
        """Standard errors of (Re, Im) of the coherence estimate (1-based wells).

        Uses the accumulated sums of Re(c)^2; the imaginary second moment
        follows from |c|^2 = Re^2 + Im^2 being the density pair sum.
        """
        acc = self.accumulators[s]
        cnt = acc.count
        c = acc.first_order[i - 1, j - 1] / cnt
        re2 = self.coh_re_sq[s, i - 1, j - 1] / cnt
        im2 = acc.density_pairs[i - 1, j - 1] / cnt - re2
        var_re = max(re2 - c.real * c.real, 0.0)
        var_im = max(im2 - c.imag * c.imag, 0.0)
        return math.sqrt(var_re / cnt), math.sqrt(var_im / cnt)

    def batch_stderr(self, extract) -> np.ndarray:
        """Batch-means standard error of any record statistic.

        ``extract`` maps an ObservableRecord to a float;  the error is the
        scatter of the per-chunk values over the full chunks.  Needs at
        least two full chunks (NaN otherwise).
        """
        n_chunks = len(self.chunk_records)
        S = len(self.sample_times)
        if n_chunks < 2:
            return np.full(S, np.nan)
        vals = np.array(
            [[extract(rec) for rec in chunk] for chunk in self.chunk_records]
        )
        return vals.std(axis=0, ddof=1) / math.sqrt(n_chunks)


def run_simulation(
    config: ChainConfig,
    workers: int = 1,
    backend: str = "auto",
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    chunk_stats: bool = True,
) -> SimulationResult:
    """Integrate all trajectories of ``config`` and reduce the moments."""
    config = validate_config(config)
    resolved = get_backend(backend)
    times = sample_times(config)
    plan = _chunk_plan(config.n_traj, chunk_size)
    tasks = [(config, resolved.name, start, count) for start, count in plan]

    t0 = time.perf_counter()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_integrate_chunk_task, tasks))
    else:
        results = [_integrate_chunk_task(t) for t in tasks]

    n = config.n_wells
    S = config.n_samples
    first = np.zeros((S, n, n), dtype=np.complex128)
    density = np.zeros((S, n, n), dtype=np.float64)
    re_sq = np.zeros((S, n, n), dtype=np.float64)
    count = 0
    chunk_records = []
    for (start, cnt), chunk in zip(plan, results):
        if chunk_stats and cnt == chunk_size:
            accs = _accumulator_list(config, times, chunk.first_order, chunk.density, cnt)
            chunk_records.append([build_record(a, config) for a in accs])
        first += chunk.first_order
        density += chunk.density
        re_sq += chunk.coh_re_sq
        count += chunk.count

    accumulators = _accumulator_list(config, times, first, density, count)
    records = [build_record(a, config) for a in accumulators]
    wall = time.perf_counter() - t0

    return SimulationResult(
        config=config,
        sample_times=times,
        accumulators=accumulators,
        coh_re_sq=re_sq,
        records=records,
        chunk_records=chunk_records,
        backend=resolved.name,
        workers=workers,
        chunk_size=chunk_size,
        wall_time=wall,
    )
