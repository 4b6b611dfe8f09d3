"""Reduced single-particle density matrices and their pseudo-entropy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveNorm, SignificantNegativeEigenvalue
from .observables import MomentAccumulator, populations

#: Eigenvalues below this are treated as exact zeros in the entropy sum.
CLAMP_EPS = 1e-12

#: Default tolerance for negative eigenvalues, sized for >= 1e4-trajectory
#: statistics; anything more negative signals corrupted moments.
NEGATIVE_TOL = 1e-3


@dataclass
class SpdmMatrix:
    """Hermitian reduced single-particle density matrix.

    ``entries`` is k x k with k = n (full chain) or 3 (middle-three
    reduction); ``norm_total`` is the full-chain population sum used as
    the normalization denominator, so the middle-three variant has trace
    below one.
    """

    entries: np.ndarray  # (k, k) complex128
    norm_total: float


def _coherence_matrix(acc: MomentAccumulator) -> np.ndarray:
    """Matrix of <a_i^dag a_j> with ordering-corrected diagonal, in atoms."""
    mat = acc.first_order / acc.count
    np.fill_diagonal(mat, np.diag(mat).real - 0.5)
    return mat


def reduced_spdm(acc: MomentAccumulator) -> SpdmMatrix:
    """Full-chain reduced single-particle density matrix (unit trace)."""
    mat = _coherence_matrix(acc)
    total = float(np.trace(mat).real)
    if total <= 0:
        raise NonPositiveNorm(f"total population {total} is not positive")
    mat = mat / total
    mat = (mat + mat.conj().T) / 2.0
    return SpdmMatrix(entries=mat, norm_total=total)


def reduced_middle3(acc: MomentAccumulator) -> SpdmMatrix:
    """Middle-three-well reduction, normalized by the full-chain population.

    The block covers wells (m-1, m, m+1) around the chain centre
    m = (n+1)/2; for n = 3 this equals the full-chain matrix.
    """
    mat = _coherence_matrix(acc)
    total = float(np.trace(mat).real)
    if total <= 0:
        raise NonPositiveNorm(f"total population {total} is not positive")
    c0 = (acc.n_wells + 1) // 2 - 1
    block = mat[c0 - 1 : c0 + 2, c0 - 1 : c0 + 2] / total
    block = (block + block.conj().T) / 2.0
    return SpdmMatrix(entries=block, norm_total=total)


def pseudo_entropy(matrix, negative_tol: float = NEGATIVE_TOL) -> float:
    """Von Neumann entropy -sum(lam ln lam) over the eigenvalues.

    Accepts an :class:`SpdmMatrix` or a bare Hermitian array.  Eigenvalues
    within ``negative_tol`` of zero are clamped (excluded from the sum,
    which also handles x ln x -> 0); more negative ones raise.
    """
    entries = matrix.entries if isinstance(matrix, SpdmMatrix) else np.asarray(matrix)
    herm = (entries + entries.conj().T) / 2.0
    lam = np.linalg.eigvalsh(herm)
    if lam[0] < -negative_tol:
        raise SignificantNegativeEigenvalue(
            f"eigenvalue {lam[0]:.3e} below -{negative_tol:.0e}"
        )
    lam = lam[lam > CLAMP_EPS]
    return float(-np.sum(lam * np.log(lam)))


def max_equilibrium_entropy(n_wells: int) -> float:
    """Entropy ln n of a fully equilibrated, decohered n-well chain."""
    return math.log(n_wells)
