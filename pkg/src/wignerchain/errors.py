"""Exception hierarchy for the simulator."""


class WignerChainError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(WignerChainError):
    """A configuration value violates the model invariants."""


class EvenWellCount(ConfigError):
    """The chain needs an odd number of wells so a unique middle exists."""


class NonPositiveStep(ConfigError):
    """A time quantity (dt, t_final) that must be positive is not."""


class NegativeRate(ConfigError):
    """A physical rate (tunnel_j, chi, gamma, atoms_per_well) is negative."""


class NonzeroChi(ConfigError):
    """The linear reference solver only covers chi = 0."""


class NumericalBlowup(WignerChainError):
    """A trajectory produced a non-finite amplitude.

    The whole run is aborted rather than dropping the trajectory, which
    would bias the ensemble averages.
    """

    def __init__(self, traj_index, t):
        self.traj_index = traj_index
        self.t = t
        super().__init__(
            f"non-finite amplitude in trajectory {traj_index} at t = {t:g}"
        )


class TimeMismatch(WignerChainError):
    """A state was accumulated into a moment bucket for a different time."""


class EmptyAccumulator(WignerChainError):
    """A conversion was requested before any trajectory was accumulated."""


class DiagonalPair(WignerChainError):
    """A two-mode quantity was requested with i = j; use the population."""


class NonPositiveNorm(WignerChainError):
    """The total population used to normalize a density matrix is not positive."""


class SignificantNegativeEigenvalue(WignerChainError):
    """An eigenvalue is negative beyond statistical tolerance.

    Small negative eigenvalues are expected sampling noise and are clamped;
    large ones indicate corrupted moments.
    """
