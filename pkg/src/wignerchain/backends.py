"""Kernel backend selection: compiled extension with pure-NumPy fallback.

The compiled kernel is used when the extension built; set the environment
variable ``WIGNERCHAIN_BACKEND`` to ``python`` or ``cython`` (or pass
``backend=`` through the library API) to force a choice.  Both backends
consume identical per-trajectory random streams and step with the same
floating-point operation order; within one backend, results are
bit-reproducible and independent of worker count.
"""

from __future__ import annotations

import os

import numpy as np

from . import kernel_numpy
from .errors import NumericalBlowup, WignerChainError
from .kernel_numpy import ChunkMoments, kernel_params
from .model import ChainConfig, sample_times
from .sampling import trajectory_inputs

try:
    from . import _kernel

    HAVE_CYTHON_KERNEL = True
except ImportError:  # extension not built
    _kernel = None
    HAVE_CYTHON_KERNEL = False


class PythonBackend:
    """Vectorized NumPy kernel (always available)."""

    name = "python"

    @staticmethod
    def integrate_chunk(config: ChainConfig, start: int, count: int) -> ChunkMoments:
        return kernel_numpy.integrate_chunk(config, start, count)

    @staticmethod
    def integrate_single(config: ChainConfig, traj_index: int):
        return kernel_numpy.integrate_single(config, traj_index)


class CythonBackend:
    """Compiled scalar kernel, one trajectory at a time."""

    name = "cython"

    @staticmethod
    def _run_one(config, p, traj_index, sre, sim, fin_re, fin_im):
        alpha0, noise = trajectory_inputs(config, traj_index)
        bad = _kernel.run_one(
            np.ascontiguousarray(alpha0.real),
            np.ascontiguousarray(alpha0.imag),
            noise,
            p.n, p.mid0, p.dt, p.n_steps, p.stride, p.n_samples,
            p.twochi, p.jrate, p.noise_coef, p.corr,
            sre, sim, fin_re, fin_im,
        )
        if bad >= 0:
            t = float(sample_times(config)[bad])
            raise NumericalBlowup(traj_index=traj_index, t=t)

    @staticmethod
    def integrate_chunk(config: ChainConfig, start: int, count: int) -> ChunkMoments:
        p = kernel_params(config)
        S, n = p.n_samples, p.n
        f_re = np.zeros((S, n, n))
        f_im = np.zeros((S, n, n))
        density = np.zeros((S, n, n))
        re_sq = np.zeros((S, n, n))
        sre = np.empty((S, n))
        sim = np.empty((S, n))
        fin_re = np.empty(n)
        fin_im = np.empty(n)
        for b in range(count):
            CythonBackend._run_one(config, p, start + b, sre, sim, fin_re, fin_im)
            _kernel.accumulate_states(sre, sim, f_re, f_im, density, re_sq)
        return ChunkMoments(
            first_order=f_re + 1j * f_im,
            density=density,
            coh_re_sq=re_sq,
            count=count,
        )

    @staticmethod
    def integrate_single(config: ChainConfig, traj_index: int):
        p = kernel_params(config)
        sre = np.empty((p.n_samples, p.n))
        sim = np.empty((p.n_samples, p.n))
        fin_re = np.empty(p.n)
        fin_im = np.empty(p.n)
        CythonBackend._run_one(config, p, traj_index, sre, sim, fin_re, fin_im)
        return sre + 1j * sim, fin_re + 1j * fin_im


def available_backends() -> dict:
    """Name -> backend class for every kernel usable in this environment."""
    out = {"python": PythonBackend}
    if HAVE_CYTHON_KERNEL:
        out["cython"] = CythonBackend
    return out


def get_backend(name: str = "auto"):
    """Resolve a backend by name; ``auto`` prefers the compiled kernel.

    The ``WIGNERCHAIN_BACKEND`` environment variable overrides ``auto``.
    """
    if name == "auto":
        name = os.environ.get("WIGNERCHAIN_BACKEND", "auto")
    if name == "auto":
        name = "cython" if HAVE_CYTHON_KERNEL else "python"
    backends = available_backends()
    if name not in backends:
        raise WignerChainError(
            f"backend {name!r} not available (have: {sorted(backends)})"
        )
    return backends[name]
