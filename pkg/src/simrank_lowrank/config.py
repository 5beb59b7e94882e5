"""Solver configuration shared by the exact and low-rank paths."""

from dataclasses import dataclass, replace

from .errors import ConfigError

EIG_ORDERS = ("algebraic_desc", "magnitude_desc")

#: Default cap on n for any code path that materializes an n x n dense matrix
#: (about 512 MiB of float64 at the limit).
DEFAULT_DENSE_LIMIT = 8192


@dataclass(frozen=True)
class SolveConfig:
    """Parameters for SimRank computation.

    c is the decay constant in (0, 1); iterations is the fixed iteration
    count k; rank and oversample only matter for the low-rank solver;
    eig_order picks which eigenpairs a rank-r truncation keeps; tol, when
    set, enables early stopping of the dense iteration once the max
    entrywise change drops below it.
    """

    c: float = 0.6
    iterations: int = 10
    rank: int | None = None
    oversample: int = 0
    seed: int = 42
    eig_order: str = "algebraic_desc"
    dense_limit: int = DEFAULT_DENSE_LIMIT
    tol: float | None = None

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise ConfigError(f"decay c must lie strictly in (0, 1), got {self.c}")
        if self.iterations < 1:
            raise ConfigError(f"iterations must be >= 1, got {self.iterations}")
        if self.rank is not None and self.rank < 1:
            raise ConfigError(f"rank must be >= 1, got {self.rank}")
        if self.oversample < 0:
            raise ConfigError(f"oversample must be >= 0, got {self.oversample}")
        if self.eig_order not in EIG_ORDERS:
            raise ConfigError(
                f"eig_order must be one of {EIG_ORDERS}, got {self.eig_order!r}"
            )
        if self.dense_limit < 1:
            raise ConfigError(f"dense_limit must be >= 1, got {self.dense_limit}")
        if self.tol is not None and self.tol <= 0:
            raise ConfigError(f"tol must be positive when set, got {self.tol}")

    def with_(self, **kwargs) -> "SolveConfig":
        """Copy with the given fields replaced."""
        return replace(self, **kwargs)

    def require_rank(self, n: int) -> int:
        """Validated rank for a graph of n vertices."""
        if self.rank is None:
            raise ConfigError("this operation needs cfg.rank to be set")
        if self.rank > n:
            raise ConfigError(f"rank {self.rank} exceeds vertex count {n}")
        if self.rank + self.oversample > n:
            raise ConfigError(
                f"rank + oversample = {self.rank + self.oversample} exceeds "
                f"vertex count {n}"
            )
        return self.rank

    def check_dense(self, n: int) -> None:
        if n > self.dense_limit:
            raise_msg = (
                f"graph has {n} vertices but dense paths are capped at "
                f"dense_limit={self.dense_limit}; raise the limit explicitly "
                f"to allow an O(n^2) computation"
            )
            from .errors import DenseLimitError

            raise DenseLimitError(raise_msg)
