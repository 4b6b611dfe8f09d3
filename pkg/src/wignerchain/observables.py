"""Trajectory moment accumulation and symmetric-ordering conversions.

Trajectory averages of Wigner-variable products estimate symmetrically
ordered operator expectations, so every physical quantity needs an
ordering correction applied exactly once.  All corrections live in this
module; accumulators always hold raw symmetric-ordered sums (sums, not
means, so partial results merge exactly).

Well indices in the public functions are 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DiagonalPair, EmptyAccumulator, TimeMismatch
from .model import TrajectoryState


@dataclass
class MomentAccumulator:
    """Running moment sums over trajectories at one sample time.

    ``first_order[i, j]`` is the sum of conj(a_i) a_j (Hermitian by
    construction), ``density_pairs[i, j]`` the sum of |a_i|^2 |a_j|^2
    (symmetric, non-negative diagonal).
    """

    t: float
    count: int
    first_order: np.ndarray  # (n, n) complex128
    density_pairs: np.ndarray  # (n, n) float64

    @classmethod
    def zeros(cls, n_wells: int, t: float) -> "MomentAccumulator":
        return cls(
            t=t,
            count=0,
            first_order=np.zeros((n_wells, n_wells), dtype=np.complex128),
            density_pairs=np.zeros((n_wells, n_wells), dtype=np.float64),
        )

    @property
    def n_wells(self) -> int:
        return self.first_order.shape[0]


def accumulate(acc: MomentAccumulator, state: TrajectoryState) -> MomentAccumulator:
    """Add one trajectory state into the sums (in place; returns ``acc``)."""
    if not math.isclose(state.t, acc.t, rel_tol=1e-9, abs_tol=1e-12):
        raise TimeMismatch(f"state at t = {state.t} into accumulator at t = {acc.t}")
    ar, ai = state.amplitudes.real, state.amplitudes.imag
    # Split-component products keep the sums exactly Hermitian (a fused
    # complex multiply would leave last-ulp residues on the diagonal).
    cre = ar[:, None] * ar[None, :] + ai[:, None] * ai[None, :]
    cim = ar[:, None] * ai[None, :] - ai[:, None] * ar[None, :]
    acc.first_order += cre + 1j * cim
    p = ar * ar + ai * ai
    acc.density_pairs += p[:, None] * p[None, :]
    acc.count += 1
    return acc


def merge(a: MomentAccumulator, b: MomentAccumulator) -> MomentAccumulator:
    """Exact sum of two accumulators for the same sample time."""
    if not math.isclose(a.t, b.t, rel_tol=1e-9, abs_tol=1e-12):
        raise TimeMismatch(f"cannot merge accumulators at t = {a.t} and t = {b.t}")
    return MomentAccumulator(
        t=a.t,
        count=a.count + b.count,
        first_order=a.first_order + b.first_order,
        density_pairs=a.density_pairs + b.density_pairs,
    )


def _require_counts(acc: MomentAccumulator):
    if acc.count <= 0:
        raise EmptyAccumulator("no trajectories accumulated")


def population(acc: MomentAccumulator, j: int) -> float:
    """Physical occupation N_j = <|a_j|^2> - 1/2 (1-based ``j``)."""
    _require_counts(acc)
    return float(acc.first_order[j - 1, j - 1].real) / acc.count - 0.5


def populations(acc: MomentAccumulator) -> np.ndarray:
    """All well occupations as a float array."""
    _require_counts(acc)
    return np.diag(acc.first_order).real / acc.count - 0.5


def coherence(acc: MomentAccumulator, i: int, j: int) -> complex:
    """First-order coherence <a_i^dag a_j> for distinct wells.

    Off-diagonal symmetric ordering needs no correction.
    """
    _require_counts(acc)
    if i == j:
        raise DiagonalPair("use population() for i = j")
    return complex(acc.first_order[i - 1, j - 1]) / acc.count


def number_pair(acc: MomentAccumulator, i: int, j: int) -> float:
    """Occupation-product expectation <n_i n_j> for distinct wells.

    Unpacks the symmetric ordering of |a_i|^2 |a_j|^2:
    <n_i n_j> = <|a_i|^2 |a_j|^2> - (N_i + N_j)/2 - 1/4.
    """
    _require_counts(acc)
    if i == j:
        raise DiagonalPair("number_pair needs two distinct wells")
    raw = acc.density_pairs[i - 1, j - 1] / acc.count
    return float(raw - (population(acc, i) + population(acc, j)) / 2.0 - 0.25)


def xi(acc: MomentAccumulator, i: int, j: int) -> float:
    """Two-mode entanglement witness; a positive value flags entanglement.

    xi_ij = |<a_i^dag a_j>|^2 - <n_i n_j>.
    """
    return sigma(acc, i, j) - number_pair(acc, i, j)


def sigma(acc: MomentAccumulator, i: int, j: int) -> float:
    """Two-mode coherence function |<a_i^dag a_j>|^2 (always >= 0)."""
    return abs(coherence(acc, i, j)) ** 2


def current_middle(acc: MomentAccumulator, m: int) -> float:
    """Atomic current into well ``m`` from its two neighbours.

    I_m = 2 Im<a_{m-1}^dag a_m> + 2 Im<a_{m+1}^dag a_m>, with the sign
    convention dN_m/dt = J I_m (positive while the middle well fills).
    """
    _require_counts(acc)
    return float(
        2.0 * coherence(acc, m - 1, m).imag + 2.0 * coherence(acc, m + 1, m).imag
    )


def population_stderr(acc: MomentAccumulator, j: int) -> float:
    """Standard error of the ensemble population estimate N_j.

    The per-trajectory estimator is |a_j|^2; its second moment is the
    diagonal of ``density_pairs``, so no extra bookkeeping is needed.
    """
    _require_counts(acc)
    mean = acc.first_order[j - 1, j - 1].real / acc.count
    second = acc.density_pairs[j - 1, j - 1] / acc.count
    var = max(second - mean * mean, 0.0)
    return math.sqrt(var / acc.count)


def population_diff_stderr(acc: MomentAccumulator, i: int, j: int) -> float:
    """Standard error of N_i - N_j, including the pair covariance."""
    _require_counts(acc)
    mi = acc.first_order[i - 1, i - 1].real / acc.count
    mj = acc.first_order[j - 1, j - 1].real / acc.count
    vi = acc.density_pairs[i - 1, i - 1] / acc.count - mi * mi
    vj = acc.density_pairs[j - 1, j - 1] / acc.count - mj * mj
    cov = acc.density_pairs[i - 1, j - 1] / acc.count - mi * mj
    var = max(vi + vj - 2.0 * cov, 0.0)
    return math.sqrt(var / acc.count)


def tracked_pairs(n_wells: int):
    """Default reported pairs: (m-1, m) and (m-1, m+1), 1-based."""
    m = (n_wells + 1) // 2
    return (m - 1, m), (m - 1, m + 1)


@dataclass
class ObservableRecord:
    """One sampled time point of every reported quantity.

    ``lm`` is the pair (m-1, m), ``lr`` the pair (m-1, m+1).
    """

    t: float
    populations: np.ndarray
    current: float
    coh_lm: complex
    coh_lr: complex
    xi_lm: float
    xi_lr: float
    sigma_lm: float
    sigma_lr: float
    zeta: float
    zeta_r: float
