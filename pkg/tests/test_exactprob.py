import logging
import math
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest

from core import exactprob
from core.errors import ParameterRangeError
from core.model import SchemeParams, validate_scheme


logger = logging.getLogger(__name__)


def _enumerated_edge_prob(Ki: int, Kj: int, P: int) -> Fraction:
    rings_i = [set(c) for c in combinations(range(P), Ki)]
    rings_j = [set(c) for c in combinations(range(P), Kj)]
    hits = sum(1 for a in rings_i for b in rings_j if a & b)
    return Fraction(hits, len(rings_i) * len(rings_j))


def _enumerated_isolation(n: int, theta: SchemeParams) -> tuple:
    """Exact (E[I_n], P[nodes 1, 2 both class-1 and isolated]) by full enumeration."""
    expected = Fraction(0)
    pair = Fraction(0)
    mu = [Fraction(m).limit_denominator(10**6) for m in theta.mu]
    for labels in product(range(theta.r), repeat=n):
        label_weight = math.prod(mu[c] for c in labels)
        choices = [list(combinations(range(theta.P), theta.K[c])) for c in labels]
        ring_weight = Fraction(1, math.prod(len(c) for c in choices))
        for rings in product(*choices):
            sets = [set(ring) for ring in rings]
            isolated = [
                all(not (sets[x] & sets[y]) for y in range(n) if y != x) for x in range(n)
            ]
            weight = label_weight * ring_weight
            expected += weight * sum(isolated)
            if n >= 2 and labels[0] == 0 and labels[1] == 0 and isolated[0] and isolated[1]:
                pair += weight
    return expected, pair


@pytest.mark.parametrize("P", range(2, 9))
def test_edge_prob_matches_enumeration(P: int) -> None:
    for Ki in range(1, P):
        for Kj in range(Ki, P):
            theta = validate_scheme(2, [0.5, 0.5], [Ki, Kj], P)
            expected = float(_enumerated_edge_prob(Ki, Kj, P))
            assert exactprob.edge_prob(1, 2, theta) == pytest.approx(expected, abs=1e-12)
            assert exactprob.edge_prob(2, 1, theta) == exactprob.edge_prob(1, 2, theta)


def test_edge_prob_probe_values(probe_scheme: SchemeParams) -> None:
    matrix = exactprob.edge_prob_matrix(probe_scheme)
    logger.info("Probe edge probabilities: %s", matrix)
    assert matrix[0, 0] == pytest.approx(0.25, abs=1e-15)
    assert matrix[0, 1] == pytest.approx(0.5, abs=1e-15)
    assert matrix[1, 1] == pytest.approx(5.0 / 6.0, abs=1e-15)
    assert np.array_equal(matrix, matrix.T)


def test_edge_prob_saturated_is_exactly_one() -> None:
    theta = validate_scheme(1, [1.0], [3], 5)
    assert exactprob.is_saturated(1, 1, theta)
    assert exactprob.edge_prob(1, 1, theta) == 1.0
    assert exactprob.log_ratio_no_overlap(3, 3, 5) == float("-inf")


def test_edge_prob_large_pool_keeps_precision() -> None:
    theta = validate_scheme(1, [1.0], [1], 10**7)
    assert exactprob.edge_prob(1, 1, theta) == pytest.approx(1e-7, rel=1e-12)


def test_edge_prob_rejects_bad_class_index(probe_scheme: SchemeParams) -> None:
    with pytest.raises(ParameterRangeError):
        exactprob.edge_prob(3, 1, probe_scheme)
    with pytest.raises(ParameterRangeError):
        exactprob.edge_prob(0, 1, probe_scheme)


def test_log_ratio_rejects_out_of_range_rings() -> None:
    with pytest.raises(ParameterRangeError):
        exactprob.log_ratio_no_overlap(0, 1, 4)
    with pytest.raises(ParameterRangeError):
        exactprob.log_ratio_no_overlap(4, 1, 4)


def test_mean_edge_probs_probe_values(probe_scheme: SchemeParams) -> None:
    lambdas = exactprob.mean_edge_probs(probe_scheme)
    assert lambdas[0] == pytest.approx(0.375, abs=1e-15)
    assert lambdas[1] == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert exactprob.mean_edge_prob(1, probe_scheme) == lambdas[0]
    assert exactprob.expected_degree(1, 3, probe_scheme) == pytest.approx(0.75)


def test_mean_edge_probs_single_class_has_length_one() -> None:
    theta = validate_scheme(1, [1.0], [2], 10)
    assert exactprob.mean_edge_probs(theta).shape == (1,)


def test_expected_isolated_probe_values(probe_scheme: SchemeParams) -> None:
    assert exactprob.expected_isolated(3, probe_scheme) == pytest.approx(0.752604166666, abs=1e-9)
    assert exactprob.expected_class1_isolated(3, probe_scheme) == pytest.approx(0.5859375, abs=1e-12)
    assert exactprob.expected_isolated(1, probe_scheme) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "mu,K,P",
    [
        ([0.5, 0.5], [1, 2], 4),
        ([1.0], [1], 4),
        ([1.0], [2], 5),
        ([0.25, 0.75], [1, 2], 5),
    ],
)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_expected_isolated_matches_enumeration(mu, K, P, n: int) -> None:
    theta = validate_scheme(len(mu), mu, K, P)
    expected, pair = _enumerated_isolation(n, theta)
    assert exactprob.expected_isolated(n, theta) == pytest.approx(float(expected), abs=1e-12)
    if n >= 2:
        assert exactprob.pair_class1_isolated_prob(n, theta) == pytest.approx(
            float(pair), abs=1e-12
        )


def test_pair_class1_isolated_single_class_value() -> None:
    theta = validate_scheme(1, [1.0], [1], 4)
    assert exactprob.pair_class1_isolated_prob(3, theta) == pytest.approx(0.375, abs=1e-15)
    assert exactprob.second_moment_ratio(3, theta) == pytest.approx(0.375 / 0.5625)


def test_second_moment_ratio_needs_lambda_below_one() -> None:
    theta = validate_scheme(1, [1.0], [3], 5)
    with pytest.raises(ParameterRangeError):
        exactprob.second_moment_ratio(4, theta)


def test_lambda_ordering_follows_ring_sizes() -> None:
    for P in (20, 50, 200):
        theta = validate_scheme(3, [0.2, 0.3, 0.5], [1, 3, 7], P)
        lambdas = exactprob.mean_edge_probs(theta)
        assert np.all(np.diff(lambdas) >= 0.0)


def test_edge_prob_lower_bound_never_exceeds_exact() -> None:
    for P in range(4, 61, 7):
        for Ki in range(1, P // 2):
            for Kj in range(Ki, P, 3):
                theta = validate_scheme(2, [0.5, 0.5], [Ki, Kj], P)
                exact = exactprob.edge_prob(1, 2, theta)
                assert exactprob.edge_prob_lower_bound(1, 2, theta) <= exact + 1e-15
                assert 1.0 - exact <= math.exp(-Ki * Kj / P) + 1e-15


@pytest.mark.parametrize("a", [1.0, 1.5, 2.0, 3.0])
def test_ratio_power_bound(a: float) -> None:
    for P in range(4, 61, 4):
        for Ki in range(1, P, 3):
            for Kj in range(1, P, 5):
                lhs = exactprob.ratio_power_lhs(a, Ki, Kj, P)
                base = exactprob.log_ratio_no_overlap(Ki, Kj, P)
                rhs = 0.0 if base == float("-inf") else math.exp(a * base)
                assert lhs <= rhs * (1 + 1e-12) + 1e-300


def test_ratio_power_lhs_rejects_small_exponent() -> None:
    with pytest.raises(ParameterRangeError):
        exactprob.ratio_power_lhs(0.5, 1, 1, 10)


def test_psi_reconstructs_log() -> None:
    for x in np.linspace(0.0, 0.9, 91):
        assert math.log(1.0 - x) == pytest.approx(-x - exactprob.psi(float(x)), abs=1e-12)
    with pytest.raises(ParameterRangeError):
        exactprob.psi(1.0)


def test_small_limit_rate_improves_with_pool() -> None:
    errors = []
    for P in (10**4, 10**5, 10**6, 10**7):
        theta = validate_scheme(1, [1.0], [10], P)
        p = exactprob.edge_prob(1, 1, theta)
        errors.append(abs(p / exactprob.edge_prob_small_limit(1, 1, theta) - 1.0))
    logger.info("Relative errors of K^2/P: %s", errors)
    assert all(b < a for a, b in zip(errors, errors[1:]))
    assert errors[-1] < 0.02


def test_z_variance_below_popoviciu_bound(probe_scheme: SchemeParams) -> None:
    values, probs = exactprob.z_distribution(probe_scheme)
    assert values.tolist() == pytest.approx([0.75, 0.5])
    assert probs.tolist() == [0.5, 0.5]
    assert exactprob.z_variance(probe_scheme) == pytest.approx(0.015625)
    assert exactprob.popoviciu_bound(probe_scheme) == pytest.approx(0.0625)
    for K2 in range(2, 30, 3):
        theta = validate_scheme(2, [0.3, 0.7], [2, K2], 40)
        assert exactprob.z_variance(theta) <= exactprob.popoviciu_bound(theta) + 1e-15


def test_expected_pool_coverage(probe_scheme: SchemeParams) -> None:
    assert exactprob.expected_pool_coverage(0, probe_scheme) == 0.0
    assert exactprob.expected_pool_coverage(3, probe_scheme) == pytest.approx(0.755859375)
    with pytest.raises(ParameterRangeError):
        exactprob.expected_pool_coverage(-1, probe_scheme)


def test_isolated_count_near_leading_term() -> None:
    theta = validate_scheme(2, [0.5, 0.5], [5, 10], 15202)
    exact = exactprob.expected_isolated(2000, theta)
    leading = exactprob.isolated_leading_term(2000, theta)
    logger.info("E[I_n]=%.4f, leading term=%.4f", exact, leading)
    assert abs(exact / leading - 1.0) < 0.25


def test_second_moment_ratio_survives_underflowing_moments() -> None:
    # The pair probability and the squared single moment underflow at this n; the ratio does not.
    theta = validate_scheme(1, [1.0], [2], 20)
    n = 2000
    assert exactprob.pair_class1_isolated_prob(n, theta) == 0.0
    assert (exactprob.expected_class1_isolated(n, theta) / n) ** 2 == 0.0
    expected = math.exp(1998 * math.log(120 / 190) - 3997 * math.log(153 / 190))
    ratio = exactprob.second_moment_ratio(n, theta)
    assert ratio == pytest.approx(expected, rel=1e-9)
    assert 0.0 < ratio < 1.0


def test_second_moment_ratio_is_zero_when_pair_cannot_be_isolated() -> None:
    theta = validate_scheme(1, [1.0], [2], 5)
    assert exactprob.pair_class1_isolated_prob(1000, theta) == 0.0
    assert exactprob.second_moment_ratio(1000, theta) == 0.0
    assert exactprob.second_moment_ratio(2, theta) == pytest.approx(1 / 0.3)
