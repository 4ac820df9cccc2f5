import logging

import pytest
from pydantic import ValidationError

from core.errors import SchemeValidationError
from core.model import ClassMix, SchemeParams, ring_size_mean, ring_size_rv, validate_scheme


logger = logging.getLogger(__name__)


def test_validate_scheme_accepts_valid_parameters() -> None:
    theta = validate_scheme(2, [0.5, 0.5], [1, 2], 4)
    assert theta.r == 2
    assert theta.mu == (0.5, 0.5)
    assert theta.K == (1, 2)
    assert theta.P == 4


def test_validate_scheme_single_class() -> None:
    theta = validate_scheme(1, [1.0], [3], 10)
    assert theta.r == 1
    assert ring_size_mean(theta.mix) == 3.0


def test_validate_scheme_rejects_non_monotone_rings() -> None:
    with pytest.raises(SchemeValidationError, match="nondecreasing"):
        validate_scheme(2, [0.5, 0.5], [2, 1], 4)


def test_validate_scheme_rejects_mu_not_summing_to_one() -> None:
    with pytest.raises(SchemeValidationError, match="sum to"):
        validate_scheme(2, [0.5, 0.6], [1, 2], 4)


def test_validate_scheme_rejects_zero_mu() -> None:
    with pytest.raises(SchemeValidationError, match="strictly positive"):
        validate_scheme(2, [1.0, 0.0], [1, 2], 4)


def test_validate_scheme_rejects_ring_as_large_as_pool() -> None:
    with pytest.raises(SchemeValidationError, match="below pool size"):
        validate_scheme(1, [1.0], [4], 4)


def test_validate_scheme_rejects_zero_ring() -> None:
    with pytest.raises(SchemeValidationError, match="positive integers"):
        validate_scheme(2, [0.5, 0.5], [0, 2], 4)


def test_validate_scheme_rejects_class_count_mismatch() -> None:
    with pytest.raises(SchemeValidationError, match="class count"):
        validate_scheme(3, [0.5, 0.5], [1, 2], 4)


def test_validation_error_is_a_value_error() -> None:
    with pytest.raises(ValueError):
        validate_scheme(2, [0.5, 0.5], [2, 1], 4)


def test_scheme_params_are_frozen() -> None:
    theta = validate_scheme(1, [1.0], [2], 5)
    with pytest.raises(ValidationError):
        theta.P = 6


def test_models_raise_pydantic_errors_directly() -> None:
    with pytest.raises(ValidationError):
        ClassMix(mu=(), K=())
    with pytest.raises(ValidationError):
        SchemeParams(mix=ClassMix(mu=(1.0,), K=(1,)), P=1)


def test_ring_size_rv_moments() -> None:
    theta = validate_scheme(2, [0.25, 0.75], [2, 6], 100)
    rv = ring_size_rv(theta.mix)
    logger.info("Ring size rv: %s", rv)
    assert rv.mean() == pytest.approx(5.0)
    # E[S^2] = 0.25 * 4 + 0.75 * 36 = 28
    assert rv.variance() == pytest.approx(28.0 - 25.0)
