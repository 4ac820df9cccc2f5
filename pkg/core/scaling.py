"""
Scaling families theta_n, the critical constant c_n, dimensioning of ring
sizes, and finite-n evaluation of the side conditions of the zero-one laws.

Asymptotic statements (Omega, omega, ~) cannot be decided at finite n; every
report here exposes the raw numbers along an n-grid plus trend indicators.
Logarithms are natural throughout.
"""

import logging
import math
from typing import List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from core.errors import (
    InfeasibleDimensioningError,
    ParameterRangeError,
    SchemeValidationError,
)
from core.exactprob import is_saturated, mean_edge_prob
from core.model import ClassMix, SchemeParams, ring_size_rv, validate_scheme


logger = logging.getLogger(__name__)

PoolRule = Literal["linear", "nlogn", "fixed"]
Trend = Literal["increasing", "decreasing", "flat", "mixed"]

RELAXED_BRANCH_CUTOFF = 0.75


class ScalingPreset(BaseModel):
    """
    Rule mapping a node count n to scheme parameters.

    Notes:
    - `pool_rule` picks P: linear -> ceil(sigma n), nlogn -> ceil(n ln n),
      fixed -> `pool`.
    - `ring_shape` holds multipliers rho with rho[0] = 1; K[j] follows from K1.
    - `target_c` is the constant c the dimensioning step aims for.
    """

    model_config = ConfigDict(frozen=True)

    pool_rule: PoolRule
    sigma: Optional[float] = None
    pool: Optional[int] = None
    ring_shape: Tuple[float, ...]
    mu: Tuple[float, ...]
    target_c: float = Field(gt=0.0)

    @model_validator(mode="after")
    def _check_rule(self) -> "ScalingPreset":
        if self.pool_rule == "linear" and (self.sigma is None or self.sigma <= 0):
            raise ValueError("linear pool rule needs sigma > 0")
        if self.pool_rule == "fixed" and (self.pool is None or self.pool < 2):
            raise ValueError("fixed pool rule needs pool >= 2")
        if len(self.ring_shape) != len(self.mu):
            raise ValueError(
                f"ring_shape has {len(self.ring_shape)} entries but mu has {len(self.mu)}"
            )
        if not self.ring_shape or self.ring_shape[0] != 1.0:
            raise ValueError(f"ring_shape must start with 1, got {self.ring_shape}")
        if any(a > b for a, b in zip(self.ring_shape, self.ring_shape[1:])):
            raise ValueError(f"ring_shape must be nondecreasing: {self.ring_shape}")
        # Class probabilities are checked by ClassMix with unit rings.
        ClassMix(mu=self.mu, K=(1,) * len(self.mu))
        return self


class DimensionResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    K: Tuple[int, ...]
    lambda_1: float
    target_lambda: float
    achieved_c: float


class ConditionRow(BaseModel):
    n: int
    P: int
    K: Tuple[int, ...]
    lambda_1: float
    c_n: float
    p_over_n: float
    n_k1sq_over_p: float
    gap_a: float
    saturated: bool
    pool_linear_ok: bool


class ConditionReport(BaseModel):
    """
    Per-n rows for the connectivity side conditions.

    `pool_linear_ok` says P_n >= sigma n held on every row; `k1sq_growing`
    says n K1^2 / P_n increased strictly along the grid.
    """

    sigma: float
    rows: List[ConditionRow]
    infeasible_n: List[int] = Field(default_factory=list)
    pool_linear_ok: bool
    p_over_n_trend: Trend
    k1sq_trend: Trend
    k1sq_growing: bool


class RelaxedConditionRow(BaseModel):
    n: int
    K1: int
    k1sq_over_p: float
    mu_r: float
    branch: Literal["first", "second"]
    first_threshold: Optional[float]
    first_ok: Optional[bool]
    scaled_lower: float


class RelaxedConditionReport(BaseModel):
    rows: List[RelaxedConditionRow]
    k1_growing: bool
    lower_trend_ok: bool
    holds: bool


class RelatedConditions(BaseModel):
    n: int
    k: int
    P: int
    K: Tuple[int, ...]
    alpha_n: float
    variance_ratio: float
    godehardt_lhs: float


class HomogeneousComparison(BaseModel):
    n: int
    P: int
    K: Tuple[int, ...]
    mean_ring: float
    homogeneous_ring: int
    overhead: float


def _check_n(n: int, minimum: int = 2) -> None:
    if n < minimum:
        logger.error("Node count %s below %s", n, minimum)
        raise ParameterRangeError(f"node count must be at least {minimum}, got {n}")


def _trend(values: Sequence[float]) -> Trend:
    pairs = list(zip(values, values[1:]))
    if all(b == a for a, b in pairs):
        return "flat"
    if all(b > a for a, b in pairs):
        return "increasing"
    if all(b < a for a, b in pairs):
        return "decreasing"
    return "mixed"


def pool_size(preset: ScalingPreset, n: int) -> int:
    if preset.pool_rule == "linear":
        return math.ceil(preset.sigma * n)
    if preset.pool_rule == "nlogn":
        return math.ceil(n * math.log(n))
    return int(preset.pool)


def ring_vector(ring_shape: Sequence[float], K1: int, P: int) -> Tuple[int, ...]:
    """K[j] = max(1, round(rho[j] K1)) with ties rounded up, clipped to P - 1."""
    ring = tuple(
        min(P - 1, max(1, math.floor(rho * K1 + 0.5))) for rho in ring_shape
    )
    if any(a > b for a, b in zip(ring, ring[1:])):
        logger.error("Ring shape %s gives non-monotone rings %s", ring_shape, ring)
        raise SchemeValidationError(f"ring shape {ring_shape} rounds to non-monotone K={ring}")
    return ring


def achieved_c(n: int, theta: SchemeParams) -> float:
    """c_n = lambda_1 * n / ln n."""
    _check_n(n)
    return mean_edge_prob(1, theta) * n / math.log(n)


def dimension_min_ring(
    n: int,
    P: int,
    mu: Sequence[float],
    ring_shape: Sequence[float],
    target_c: float,
) -> DimensionResult:
    """
    Smallest K1 whose ring vector gives lambda_1 >= target_c ln n / n.

    lambda_1 is nondecreasing in K1 for a fixed shape, so an exponential
    probe followed by bisection finds the minimum.
    """
    _check_n(n)
    if P < 2:
        raise ParameterRangeError(f"pool size must be at least 2, got {P}")
    target = target_c * math.log(n) / n

    def scheme_for(K1: int) -> SchemeParams:
        try:
            return SchemeParams(mix=ClassMix(mu=tuple(mu), K=ring_vector(ring_shape, K1, P)), P=P)
        except ValidationError as exc:
            raise SchemeValidationError(str(exc)) from exc

    def lambda_for(K1: int) -> float:
        return mean_edge_prob(1, scheme_for(K1))

    top = P - 1
    low, high = 0, 1
    while lambda_for(high) < target:
        if high == top:
            logger.error(
                "Target c=%s infeasible at n=%s, P=%s (lambda_1 max %.6g < %.6g)",
                target_c, n, P, lambda_for(top), target,
            )
            raise InfeasibleDimensioningError(
                f"target c={target_c} unreachable at n={n}, P={P}: "
                f"lambda_1 at K1={top} is below {target:.9g}"
            )
        low, high = high, min(2 * high, top)

    while high - low > 1:
        middle = (low + high) // 2
        if lambda_for(middle) >= target:
            high = middle
        else:
            low = middle

    theta = scheme_for(high)
    lambda_1 = mean_edge_prob(1, theta)
    result = DimensionResult(
        K=theta.K,
        lambda_1=lambda_1,
        target_lambda=target,
        achieved_c=lambda_1 * n / math.log(n),
    )
    logger.info(
        "Dimensioned n=%s, P=%s, c=%s -> K=%s (c_n=%.6g)",
        n, P, target_c, result.K, result.achieved_c,
    )
    return result


def instantiate(preset: ScalingPreset, n: int) -> SchemeParams:
    _check_n(n)
    P = pool_size(preset, n)
    dimension = dimension_min_ring(n, P, preset.mu, preset.ring_shape, preset.target_c)
    return validate_scheme(len(preset.mu), preset.mu, dimension.K, P)


def scaling_equivalence_gap(n: int, theta: SchemeParams) -> float:
    """|lambda_1 P / (K1 E|Sigma|) - 1|, the distance between the two scaling forms."""
    _check_n(n, minimum=1)
    mean_ring = ring_size_rv(theta.mix).mean()
    return abs(mean_edge_prob(1, theta) * theta.P / (theta.K[0] * mean_ring) - 1.0)


def _any_saturated(theta: SchemeParams) -> bool:
    return any(
        is_saturated(i, j, theta)
        for i in range(1, theta.r + 1)
        for j in range(i, theta.r + 1)
    )


def check_theorem2_conditions(
    preset: ScalingPreset, n_grid: Sequence[int], sigma: float
) -> ConditionReport:
    """Evaluate P_n >= sigma n and the growth of n K1^2 / P_n along n_grid."""
    if not n_grid:
        raise ParameterRangeError("n_grid must be nonempty")
    rows: List[ConditionRow] = []
    infeasible: List[int] = []
    for n in n_grid:
        try:
            theta = instantiate(preset, n)
        except InfeasibleDimensioningError:
            logger.warning("Skipping infeasible grid point n=%s", n)
            infeasible.append(n)
            continue
        lambda_1 = mean_edge_prob(1, theta)
        rows.append(
            ConditionRow(
                n=n,
                P=theta.P,
                K=theta.K,
                lambda_1=lambda_1,
                c_n=lambda_1 * n / math.log(n),
                p_over_n=theta.P / n,
                n_k1sq_over_p=n * theta.K[0] ** 2 / theta.P,
                gap_a=scaling_equivalence_gap(n, theta),
                saturated=_any_saturated(theta),
                pool_linear_ok=theta.P >= sigma * n,
            )
        )
    k1sq = [row.n_k1sq_over_p for row in rows]
    return ConditionReport(
        sigma=sigma,
        rows=rows,
        infeasible_n=infeasible,
        pool_linear_ok=all(row.pool_linear_ok for row in rows),
        p_over_n_trend=_trend([row.p_over_n for row in rows]),
        k1sq_trend=_trend(k1sq),
        k1sq_growing=len(k1sq) > 1 and _trend(k1sq) == "increasing",
    )


def evaluate_relaxed_conditions(
    schemes: Sequence[Tuple[int, SchemeParams]],
    beta: float,
    nu: float,
    epsilon: float,
    M: int,
) -> RelaxedConditionReport:
    """
    Evaluate the relaxed replacement for the K1^2 / P = omega(1/n) condition.

    When mu_r <= 0.75 the first branch compares K1^2 / P against
    (2 ln 2 + ln(1 - mu_r) + epsilon) / (beta nu n); otherwise the second
    branch tracks K1^2 / P * n (ln n)^M, which must not drift to zero.
    K1 must grow in both branches.
    """
    if beta <= 0 or nu <= 0 or epsilon <= 0:
        raise ParameterRangeError("beta, nu and epsilon must be positive")
    if M < 1:
        raise ParameterRangeError(f"M must be a positive integer, got {M}")
    if not schemes:
        raise ParameterRangeError("scheme sequence must be nonempty")

    rows: List[RelaxedConditionRow] = []
    for n, theta in schemes:
        _check_n(n)
        mu_r = theta.mu[-1]
        k1sq_over_p = theta.K[0] ** 2 / theta.P
        first_threshold: Optional[float] = None
        first_ok: Optional[bool] = None
        if mu_r < 1.0:
            numerator = 2 * math.log(2) + math.log1p(-mu_r) + epsilon
            first_threshold = numerator / (beta * nu) / n
            first_ok = k1sq_over_p >= first_threshold
        rows.append(
            RelaxedConditionRow(
                n=n,
                K1=theta.K[0],
                k1sq_over_p=k1sq_over_p,
                mu_r=mu_r,
                branch="first" if mu_r <= RELAXED_BRANCH_CUTOFF else "second",
                first_threshold=first_threshold,
                first_ok=first_ok,
                scaled_lower=k1sq_over_p * n * math.log(n) ** M,
            )
        )

    k1_values = [row.K1 for row in rows]
    k1_growing = k1_values[-1] > k1_values[0] and all(
        b >= a for a, b in zip(k1_values, k1_values[1:])
    )
    lower_trend_ok = _trend([row.scaled_lower for row in rows]) != "decreasing"
    if rows[0].branch == "first":
        holds = k1_growing and all(row.first_ok for row in rows)
    else:
        holds = k1_growing and lower_trend_ok
    return RelaxedConditionReport(
        rows=rows, k1_growing=k1_growing, lower_trend_ok=lower_trend_ok, holds=holds
    )


def check_relaxed_conditions(
    preset: ScalingPreset,
    n_grid: Sequence[int],
    beta: float,
    nu: float,
    epsilon: float,
    M: int,
) -> RelaxedConditionReport:
    schemes = [(n, instantiate(preset, n)) for n in n_grid]
    return evaluate_relaxed_conditions(schemes, beta, nu, epsilon, M)


def related_conditions_for_scheme(n: int, theta: SchemeParams, k: int) -> RelatedConditions:
    """
    Condition arithmetic of the k-connectivity and multi-key connectivity results.

    alpha_n solves n E[|S|]^2 / P = ln n + (k - 1) ln ln n + alpha_n.
    """
    if n <= math.e:
        raise ParameterRangeError(f"ln ln n needs n > e, got {n}")
    if k < 1:
        raise ParameterRangeError(f"connectivity order k must be at least 1, got {k}")
    rv = ring_size_rv(theta.mix)
    mean, variance = rv.mean(), rv.variance()
    log_n = math.log(n)
    unit_mass = theta.mu[0] if theta.K[0] == 1 else 0.0
    return RelatedConditions(
        n=n,
        k=k,
        P=theta.P,
        K=theta.K,
        alpha_n=n * mean**2 / theta.P - log_n - (k - 1) * math.log(log_n),
        variance_ratio=variance * n * log_n**2 / mean**2,
        godehardt_lhs=(n / theta.P) * (mean - unit_mass) - math.log(theta.P),
    )


def related_conditions(preset: ScalingPreset, n: int, k: int) -> RelatedConditions:
    _check_n(n, minimum=3)
    return related_conditions_for_scheme(n, instantiate(preset, n), k)


def homogeneous_overhead(preset: ScalingPreset, n: int) -> HomogeneousComparison:
    """Mean ring size of the preset over the single-class ring size for the same P and c."""
    theta = instantiate(preset, n)
    homogeneous = dimension_min_ring(n, theta.P, (1.0,), (1.0,), preset.target_c)
    mean_ring = ring_size_rv(theta.mix).mean()
    return HomogeneousComparison(
        n=n,
        P=theta.P,
        K=theta.K,
        mean_ring=mean_ring,
        homogeneous_ring=homogeneous.K[0],
        overhead=mean_ring / homogeneous.K[0],
    )


__all__ = [
    "ScalingPreset",
    "DimensionResult",
    "ConditionRow",
    "ConditionReport",
    "RelaxedConditionRow",
    "RelaxedConditionReport",
    "RelatedConditions",
    "HomogeneousComparison",
    "pool_size",
    "ring_vector",
    "achieved_c",
    "dimension_min_ring",
    "instantiate",
    "scaling_equivalence_gap",
    "check_theorem2_conditions",
    "evaluate_relaxed_conditions",
    "check_relaxed_conditions",
    "related_conditions_for_scheme",
    "related_conditions",
    "homogeneous_overhead",
]
