import logging
import math
from typing import Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from core.errors import SchemeValidationError


logger = logging.getLogger(__name__)

MU_SUM_TOLERANCE = 1e-12


class ClassMix(BaseModel):
    """
    Class distribution and per-class ring sizes.

    Notes:
    - `mu[i]` is the probability that a node lands in class i+1; every entry is
      strictly positive and the vector sums to one within 1e-12.
    - `K` is nondecreasing, so class 1 always holds the smallest rings.
    - The number of classes is fixed by the length of `mu`.
    """

    model_config = ConfigDict(frozen=True)

    mu: Tuple[float, ...]
    K: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_structure(self) -> "ClassMix":
        if len(self.mu) == 0:
            raise ValueError("class count r must be at least 1")
        if len(self.K) != len(self.mu):
            raise ValueError(
                f"ring size vector has {len(self.K)} entries but mu has {len(self.mu)}"
            )
        if any(not math.isfinite(m) or m <= 0.0 for m in self.mu):
            raise ValueError(f"class probabilities must be strictly positive: {self.mu}")
        total = math.fsum(self.mu)
        if abs(total - 1.0) > MU_SUM_TOLERANCE:
            raise ValueError(f"class probabilities sum to {total!r}, not 1")
        if any(k < 1 for k in self.K):
            raise ValueError(f"ring sizes must be positive integers: {self.K}")
        if any(a > b for a, b in zip(self.K, self.K[1:])):
            raise ValueError(f"ring sizes must be nondecreasing: {self.K}")
        return self

    @property
    def r(self) -> int:
        return len(self.mu)


class SchemeParams(BaseModel):
    """Parameter triple (mu, K, P) of the scheme for one network size."""

    model_config = ConfigDict(frozen=True)

    mix: ClassMix
    P: int

    @model_validator(mode="after")
    def _check_pool(self) -> "SchemeParams":
        if self.P < 2:
            raise ValueError(f"pool size P must be at least 2, got {self.P}")
        if self.mix.K[-1] >= self.P:
            raise ValueError(
                f"largest ring size K[r]={self.mix.K[-1]} must be below pool size P={self.P}"
            )
        return self

    @property
    def r(self) -> int:
        return self.mix.r

    @property
    def mu(self) -> Tuple[float, ...]:
        return self.mix.mu

    @property
    def K(self) -> Tuple[int, ...]:
        return self.mix.K


class RingSizeRv(BaseModel):
    """Ring size of a randomly chosen node: value K[j] with probability mu[j]."""

    model_config = ConfigDict(frozen=True)

    values: Tuple[int, ...]
    probabilities: Tuple[float, ...]

    def mean(self) -> float:
        return float(np.dot(self.probabilities, self.values))

    def variance(self) -> float:
        values = np.asarray(self.values, dtype=float)
        mean = self.mean()
        return float(np.dot(self.probabilities, (values - mean) ** 2))


def ring_size_rv(mix: ClassMix) -> RingSizeRv:
    return RingSizeRv(values=mix.K, probabilities=mix.mu)


def ring_size_mean(mix: ClassMix) -> float:
    """Mean ring size sum_j mu[j] * K[j]."""
    return ring_size_rv(mix).mean()


def _describe(exc: ValidationError) -> str:
    messages = []
    for error in exc.errors():
        message = str(error.get("msg", ""))
        messages.append(message.removeprefix("Value error, "))
    return "; ".join(messages)


def validate_scheme(
    r: int, mu: Sequence[float], K: Sequence[int], P: int
) -> SchemeParams:
    """
    Validate raw scheme parameters and return an immutable SchemeParams.

    Ring sizes are never reordered: a non-monotone K is rejected.
    """
    if r != len(mu) or r != len(K):
        logger.error("Class count r=%s disagrees with mu=%s and K=%s", r, mu, K)
        raise SchemeValidationError(
            f"class count r={r} does not match len(mu)={len(mu)} and len(K)={len(K)}"
        )
    try:
        mix = ClassMix(mu=tuple(mu), K=tuple(K))
        scheme = SchemeParams(mix=mix, P=P)
    except ValidationError as exc:
        message = _describe(exc)
        logger.error("Scheme validation failed: %s", message)
        raise SchemeValidationError(message) from exc
    logger.debug("Validated scheme: mu=%s, K=%s, P=%s", scheme.mu, scheme.K, scheme.P)
    return scheme


__all__ = [
    "ClassMix",
    "SchemeParams",
    "RingSizeRv",
    "ring_size_rv",
    "ring_size_mean",
    "validate_scheme",
]
