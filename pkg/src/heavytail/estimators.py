"""Rank-based non-parametric causal tail coefficient estimators.

The one-tailed estimate conditioning on column j and averaging column k is

    (1/k) * sum_i ecdf_k(X[i, k]) * 1{X[i, j] > jth column's (n-k)-th order stat}

where the empirical CDF assigns maximal rank to ties and the divisor stays k
even if ties at the threshold inflate the exceedance count. The two-tailed
variant averages sigma(u) = |2u - 1| over the upper exceedances of the column
and of its negation, each with weight 1 / (2k).

Sums of contributions are accumulated with math.fsum (correctly rounded), so
estimates are bit-identical under row permutations and under strictly
increasing transforms of the columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ValidationError
from .oracle import CoefMatrix


class Dataset:
    """Immutable n x p numeric sample with named columns."""

    def __init__(self, names, values):
        values = np.array(values, dtype=float)
        if values.ndim != 2:
            raise ValidationError("values must be a 2-D array")
        if values.shape[0] < 1:
            raise ValidationError("dataset needs at least one observation")
        if not np.isfinite(values).all():
            raise ValidationError("dataset contains non-finite entries")
        names = tuple(str(s) for s in names)
        if len(names) != values.shape[1]:
            raise ValidationError(f"{len(names)} names for {values.shape[1]} columns")
        if len(set(names)) != len(names):
            raise ValidationError("column names must be unique")
        values.setflags(write=False)
        self.names = names
        self.values = values

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def column(self, j: int) -> np.ndarray:
        if not (0 <= j < self.p):
            raise ValidationError(f"column {j} out of range for p={self.p}")
        return self.values[:, j]

    def column_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError(f"no column named {name!r}") from None

    def __repr__(self):
        return f"Dataset(n={self.n}, p={self.p}, names={self.names})"


@dataclass(frozen=True)
class EstimatorConfig:
    """Exceedance count selection and coefficient kind.

    Exactly one of ``k`` (explicit) or ``k_exponent`` (k = floor(n**e)) is
    used; the exponent path defaults to 0.4 and clamps into [1, n - 1].
    """

    k: int | None = None
    k_exponent: float | None = None
    kind: str = "gamma"

    def __post_init__(self):
        if self.k is not None and self.k_exponent is not None:
            raise ConfigError("give either an explicit k or an exponent, not both")
        if self.k is not None and self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.k_exponent is not None and not (0 < self.k_exponent < 1):
            raise ConfigError(f"k_exponent must lie in (0, 1), got {self.k_exponent}")
        if self.kind not in ("gamma", "psi"):
            raise ConfigError(f"kind must be 'gamma' or 'psi', got {self.kind!r}")


def resolve_k(n: int, config: EstimatorConfig) -> int:
    """Concrete exceedance count for a sample of size n."""
    if n < 2:
        raise ValidationError(f"need n >= 2 to estimate, got {n}")
    if config.k is not None:
        if config.k > n - 1:
            raise ConfigError(f"k={config.k} out of range for n={n} (need k <= n - 1)")
        return config.k
    exponent = config.k_exponent if config.k_exponent is not None else 0.4
    return min(max(int(math.floor(n ** exponent)), 1), n - 1)


def ecdf_values(column: np.ndarray) -> np.ndarray:
    """Empirical CDF of a column evaluated at its own entries (max rank on ties)."""
    column = np.asarray(column, dtype=float)
    sorted_col = np.sort(column)
    return np.searchsorted(sorted_col, column, side="right") / column.size


def empirical_cdf_column(data: Dataset, j: int) -> np.ndarray:
    return ecdf_values(data.column(j))


def _exceedance_mask(column: np.ndarray, k: int) -> np.ndarray:
    # strict exceedance over the (n - k)-th order statistic
    threshold = np.sort(column)[column.size - k - 1]
    return column > threshold


def _tail_sum(weights: np.ndarray, mask: np.ndarray) -> float:
    return math.fsum(weights[mask].tolist())


def gamma_estimate(data: Dataset, j: int, k_col: int, config: EstimatorConfig) -> float:
    """One-tailed coefficient estimate conditioning on column j, averaging column k_col."""
    if j == k_col:
        raise ValidationError("conditioning and averaged columns must differ")
    k = resolve_k(data.n, config)
    cdf_k = ecdf_values(data.column(k_col))
    mask = _exceedance_mask(data.column(j), k)
    return _tail_sum(cdf_k, mask) / k


def psi_estimate(data: Dataset, j: int, k_col: int, config: EstimatorConfig) -> float:
    """Two-tailed coefficient estimate; the lower tail is the upper tail of -X_j."""
    if j == k_col:
        raise ValidationError("conditioning and averaged columns must differ")
    k = resolve_k(data.n, config)
    sig = np.abs(2.0 * ecdf_values(data.column(k_col)) - 1.0)
    col_j = data.column(j)
    upper = _exceedance_mask(col_j, k)
    lower = _exceedance_mask(-col_j, k)
    return math.fsum(np.concatenate([sig[upper], sig[lower]]).tolist()) / (2 * k)


def coefficient_matrix(data: Dataset, config: EstimatorConfig) -> CoefMatrix:
    """All ordered off-diagonal coefficient estimates.

    Ranks are computed once per column and reused across the p * (p - 1)
    pairs; entry [j, k] conditions on column j and averages column k.
    """
    if data.p < 2:
        raise ValidationError("coefficient estimation needs at least two columns")
    k = resolve_k(data.n, config)
    psi = config.kind == "psi"
    cdfs = [ecdf_values(data.column(c)) for c in range(data.p)]
    if psi:
        sigs = [np.abs(2.0 * cdf - 1.0) for cdf in cdfs]
    upper = [_exceedance_mask(data.column(c), k) for c in range(data.p)]
    if psi:
        lower = [_exceedance_mask(-data.column(c), k) for c in range(data.p)]
    values = np.full((data.p, data.p), np.nan)
    for j in range(data.p):
        for c in range(data.p):
            if j == c:
                continue
            if psi:
                total = math.fsum(
                    np.concatenate([sigs[c][upper[j]], sigs[c][lower[j]]]).tolist())
                values[j, c] = total / (2 * k)
            else:
                values[j, c] = _tail_sum(cdfs[c], upper[j]) / k
    return CoefMatrix(values, config.kind, data.names, estimated=True)
