"""
Exact evaluation of the edge, isolation and coverage probabilities of the
inhomogeneous random key graph.

Every ratio of binomial coefficients C(P - a, b) / C(P, b) is evaluated in
product form, prod_{l < min(a, b)} (1 - max(a, b) / (P - l)), as a sum of
log1p terms. Factorials are never formed, so pools of 10**7 keys are safe and
tiny edge probabilities keep full relative precision.
"""

import logging
import math
from sys import float_info
from typing import Tuple

import numpy as np

from core.errors import ParameterRangeError
from core.model import SchemeParams


logger = logging.getLogger(__name__)

NEG_INF = float("-inf")
MAX_LOG = math.log(float_info.max)


def _log_no_overlap(a: int, b: int, P: int) -> float:
    """log C(P - a, b) / C(P, b) for any nonnegative a, b; -inf when a + b > P."""
    if a + b > P:
        return NEG_INF
    short, long_ = (a, b) if a <= b else (b, a)
    if short == 0:
        return 0.0
    ell = np.arange(short, dtype=np.float64)
    return float(np.sum(np.log1p(-long_ / (P - ell))))


def _no_overlap(a: int, b: int, P: int) -> float:
    return math.exp(_log_no_overlap(a, b, P))


def _check_class(index: int, theta: SchemeParams) -> int:
    if not 1 <= index <= theta.r:
        logger.error("Class index %s outside 1..%s", index, theta.r)
        raise ParameterRangeError(f"class index {index} outside 1..{theta.r}")
    return index - 1


def _one_minus_power(prob: float, exponent: int) -> float:
    """(1 - prob) ** exponent in log domain."""
    if exponent == 0:
        return 1.0
    if prob >= 1.0:
        return 0.0
    return math.exp(exponent * math.log1p(-prob))


def log_ratio_no_overlap(Ki: int, Kj: int, P: int) -> float:
    """
    Log-probability that a ring of size Ki and an independent ring of size Kj
    drawn from a pool of P keys are disjoint.

    Returns -inf when Ki + Kj > P.
    """
    if not (1 <= Ki < P and 1 <= Kj < P):
        logger.error("Ring sizes (%s, %s) out of range for pool %s", Ki, Kj, P)
        raise ParameterRangeError(
            f"ring sizes must satisfy 1 <= Ki, Kj < P; got Ki={Ki}, Kj={Kj}, P={P}"
        )
    return _log_no_overlap(Ki, Kj, P)


def is_saturated(i: int, j: int, theta: SchemeParams) -> bool:
    """True when class-i and class-j rings always intersect."""
    a, b = _check_class(i, theta), _check_class(j, theta)
    return theta.K[a] + theta.K[b] > theta.P


def edge_prob(i: int, j: int, theta: SchemeParams) -> float:
    """Probability that a class-i node and a class-j node share a key."""
    a, b = _check_class(i, theta), _check_class(j, theta)
    log_ratio = log_ratio_no_overlap(theta.K[a], theta.K[b], theta.P)
    if log_ratio == NEG_INF:
        return 1.0
    return -math.expm1(log_ratio)


def edge_prob_matrix(theta: SchemeParams) -> np.ndarray:
    r = theta.r
    matrix = np.empty((r, r), dtype=np.float64)
    for i in range(r):
        for j in range(i, r):
            matrix[i, j] = matrix[j, i] = edge_prob(i + 1, j + 1, theta)
    return matrix


def mean_edge_probs(theta: SchemeParams) -> np.ndarray:
    return np.array([mean_edge_prob(i, theta) for i in range(1, theta.r + 1)])


def mean_edge_prob(i: int, theta: SchemeParams) -> float:
    """lambda_i = sum_j mu[j] * p_ij."""
    a = _check_class(i, theta)
    return float(
        math.fsum(theta.mu[b] * edge_prob(a + 1, b + 1, theta) for b in range(theta.r))
    )


def expected_degree(i: int, n: int, theta: SchemeParams) -> float:
    if n < 1:
        raise ParameterRangeError(f"node count must be at least 1, got {n}")
    return (n - 1) * mean_edge_prob(i, theta)


def edge_prob_small_limit(i: int, j: int, theta: SchemeParams) -> float:
    a, b = _check_class(i, theta), _check_class(j, theta)
    return theta.K[a] * theta.K[b] / theta.P


def edge_prob_lower_bound(i: int, j: int, theta: SchemeParams) -> float:
    """1 - exp(-Ki Kj / P); never exceeds edge_prob(i, j, theta)."""
    return -math.expm1(-edge_prob_small_limit(i, j, theta))


def ratio_power_lhs(a: float, Ki: int, Kj: int, P: int) -> float:
    """C(P - ceil(a Ki), Kj) / C(P, Kj), which is at most the a-th power of the a = 1 ratio."""
    if a < 1:
        logger.error("Exponent a=%s below 1", a)
        raise ParameterRangeError(f"exponent a must be at least 1, got {a}")
    log_ratio_no_overlap(Ki, Kj, P)
    shifted = math.ceil(a * Ki)
    if shifted + Kj > P:
        return 0.0
    return _no_overlap(shifted, Kj, P)


def psi(x: float) -> float:
    """Psi(x) = -x - log(1 - x), the remainder of the first-order expansion of log(1 - x)."""
    if not 0.0 <= x < 1.0:
        raise ParameterRangeError(f"psi is defined on [0, 1), got {x}")
    return -x - math.log1p(-x)


def expected_isolated(n: int, theta: SchemeParams) -> float:
    """E[I_n] = n * sum_i mu[i] * (1 - lambda_i) ** (n - 1)."""
    if n < 1:
        raise ParameterRangeError(f"node count must be at least 1, got {n}")
    lambdas = mean_edge_probs(theta)
    terms = (mu * _one_minus_power(float(lam), n - 1) for mu, lam in zip(theta.mu, lambdas))
    return n * math.fsum(terms)


def expected_class1_isolated(n: int, theta: SchemeParams) -> float:
    if n < 1:
        raise ParameterRangeError(f"node count must be at least 1, got {n}")
    return n * theta.mu[0] * _one_minus_power(mean_edge_prob(1, theta), n - 1)


def _log_pair_class1_isolated(n: int, theta: SchemeParams) -> float:
    """log P[nodes 1, 2 both class-1 and isolated]; -inf when the event is impossible."""
    K1, P = theta.K[0], theta.P
    log_disjoint = _log_no_overlap(K1, K1, P)
    if log_disjoint == NEG_INF:
        return NEG_INF
    if n == 2:
        return 2.0 * math.log(theta.mu[0]) + log_disjoint
    avoid_both = math.fsum(
        mu * _no_overlap(2 * K1, k, P) for mu, k in zip(theta.mu, theta.K)
    )
    if avoid_both <= 0.0:
        return NEG_INF
    return 2.0 * math.log(theta.mu[0]) + log_disjoint + (n - 2) * math.log(avoid_both)


def pair_class1_isolated_prob(n: int, theta: SchemeParams) -> float:
    """
    Probability that nodes 1 and 2 are both class-1 and both isolated.

    Conditioning on the class of every other node, each one must avoid the
    2 K1 keys held jointly by the (disjoint) first two rings.
    """
    if n < 2:
        raise ParameterRangeError(f"pair isolation needs n >= 2, got {n}")
    log_pair = _log_pair_class1_isolated(n, theta)
    return 0.0 if log_pair == NEG_INF else math.exp(log_pair)


def second_moment_ratio(n: int, theta: SchemeParams) -> float:
    """
    E[chi_1 chi_2] / E[chi_1] ** 2 for the class-1 isolation indicators.

    Evaluated as a difference of logs: both moments underflow long before
    their ratio does.
    """
    if n < 2:
        raise ParameterRangeError(f"second moment ratio needs n >= 2, got {n}")
    lambda_1 = mean_edge_prob(1, theta)
    if lambda_1 >= 1.0:
        logger.error("lambda_1 = 1: class-1 nodes are never isolated")
        raise ParameterRangeError("second moment ratio undefined when lambda_1 = 1")
    log_pair = _log_pair_class1_isolated(n, theta)
    if log_pair == NEG_INF:
        return 0.0
    log_ratio = log_pair - 2.0 * math.log(theta.mu[0]) - 2.0 * (n - 1) * math.log1p(-lambda_1)
    if log_ratio > MAX_LOG:
        return math.inf
    return math.exp(log_ratio)


def z_distribution(theta: SchemeParams) -> Tuple[np.ndarray, np.ndarray]:
    """Values C(P - K1, Kj) / C(P, Kj) and their probabilities mu[j]."""
    K1 = theta.K[0]
    values = np.array([_no_overlap(K1, k, theta.P) for k in theta.K])
    return values, np.asarray(theta.mu, dtype=np.float64)


def z_variance(theta: SchemeParams) -> float:
    values, probs = z_distribution(theta)
    mean = float(np.dot(probs, values))
    return float(np.dot(probs, (values - mean) ** 2))


def popoviciu_bound(theta: SchemeParams) -> float:
    """p_1r ** 2 / 4, an upper bound on z_variance(theta)."""
    return 0.25 * edge_prob(1, theta.r, theta) ** 2


def expected_pool_coverage(s: int, theta: SchemeParams) -> float:
    """Expected fraction of the pool held by at least one of s independent rings."""
    if s < 0:
        raise ParameterRangeError(f"captured node count must be nonnegative, got {s}")
    miss = math.fsum(mu * (1.0 - k / theta.P) for mu, k in zip(theta.mu, theta.K))
    return -math.expm1(s * math.log(miss))


def isolated_leading_term(n: int, theta: SchemeParams) -> float:
    """mu[1] * n ** (1 - c_n), the leading term of E[I_n] as n grows."""
    if n < 2:
        raise ParameterRangeError(f"leading term needs n >= 2, got {n}")
    c_n = mean_edge_prob(1, theta) * n / math.log(n)
    return theta.mu[0] * math.exp((1.0 - c_n) * math.log(n))


__all__ = [
    "log_ratio_no_overlap",
    "is_saturated",
    "edge_prob",
    "edge_prob_matrix",
    "mean_edge_prob",
    "mean_edge_probs",
    "expected_degree",
    "edge_prob_small_limit",
    "edge_prob_lower_bound",
    "ratio_power_lhs",
    "psi",
    "expected_isolated",
    "expected_class1_isolated",
    "pair_class1_isolated_prob",
    "second_moment_ratio",
    "z_distribution",
    "z_variance",
    "popoviciu_bound",
    "expected_pool_coverage",
    "isolated_leading_term",
]
