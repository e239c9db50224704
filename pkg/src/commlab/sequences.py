"""Real sequence families: a closed-form power-log family plus explicit
prefixes, shared by the block construction and the summability classifiers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numkit import DomainError


@dataclass(frozen=True)
class PowerLog:
    """Closed form d_n = coeff * n**power * log(n+1)**log_power, n >= 1.

    ``log(n+1)`` rather than ``log n`` keeps the n = 1 term finite and
    nonzero for negative log exponents.  Exponents are signed: growing
    families take positive ``power``, decaying ones negative.
    """

    coeff: float
    power: float = 0.0
    log_power: float = 0.0

    def __post_init__(self):
        if not (self.coeff >= 0.0):
            raise DomainError("PowerLog coefficient must be nonnegative")

    def terms(self, count: int) -> np.ndarray:
        n = np.arange(1, count + 1, dtype=np.float64)
        return self.coeff * n ** self.power * np.log(n + 1.0) ** self.log_power

    # Analytic facts, all by the integral test.

    def is_summable(self) -> bool:
        """Whether sum d_n converges."""
        if self.coeff == 0.0:
            return True
        return self.power < -1.0 or (self.power == -1.0 and self.log_power < -1.0)

    def is_log_weighted_summable(self) -> bool:
        """Whether sum d_n * log(n) converges."""
        if self.coeff == 0.0:
            return True
        return self.power < -1.0 or (self.power == -1.0 and self.log_power < -2.0)

    def ratio_to_index_vanishes(self) -> bool:
        """Whether d_n / n -> 0."""
        if self.coeff == 0.0:
            return True
        return self.power < 1.0 or (self.power == 1.0 and self.log_power < 0.0)

    def cesaro_mean_vanishes(self) -> bool:
        """Whether (1/n) * (d_1 + ... + d_n) -> 0.

        For this regularly-varying family the Cesaro mean vanishes exactly
        when the terms themselves do.
        """
        if self.coeff == 0.0:
            return True
        return self.power < 0.0 or (self.power == 0.0 and self.log_power < 0.0)


@dataclass(frozen=True)
class WeightSequence:
    """A weight family plus a materialized finite prefix d_1..d_N.

    ``family`` is None for purely explicit data.  When ``monotone`` is set
    the prefix must be nonnegative and non-decreasing.
    """

    family: PowerLog | None
    prefix: tuple[float, ...]
    monotone: bool = False

    def __post_init__(self):
        arr = np.asarray(self.prefix, dtype=np.float64)
        if arr.size and not np.isfinite(arr).all():
            raise DomainError("weight prefix contains non-finite values")
        if self.monotone and arr.size:
            if (arr < 0).any() or (np.diff(arr) < 0).any():
                raise DomainError("monotone weights must be nonnegative and non-decreasing")

    @classmethod
    def powerlog(cls, coeff: float, power: float = 0.0, log_power: float = 0.0,
                 count: int = 64, monotone: bool = False) -> "WeightSequence":
        fam = PowerLog(coeff, power, log_power)
        return cls(family=fam, prefix=tuple(fam.terms(count)), monotone=monotone)

    @classmethod
    def explicit(cls, values, monotone: bool = False) -> "WeightSequence":
        vals = tuple(float(x) for x in np.asarray(values, dtype=np.float64).reshape(-1))
        return cls(family=None, prefix=vals, monotone=monotone)

    def values(self, count: int) -> np.ndarray:
        """First ``count`` terms, extending the closed form when available."""
        if count <= len(self.prefix):
            return np.asarray(self.prefix[:count], dtype=np.float64)
        if self.family is None:
            raise DomainError(
                f"explicit prefix has {len(self.prefix)} terms, {count} required"
            )
        return self.family.terms(count)
