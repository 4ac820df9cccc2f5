import pytest

from core.model import SchemeParams, validate_scheme


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line(
        "markers", "integration: long statistical runs (millions of trials or full sweeps)"
    )


@pytest.fixture
def probe_scheme() -> SchemeParams:
    """mu=[.5,.5], K=[1,2], P=4: small enough to check by hand."""
    return validate_scheme(2, [0.5, 0.5], [1, 2], 4)


@pytest.fixture
def sparse_scheme() -> SchemeParams:
    return validate_scheme(2, [0.5, 0.5], [5, 10], 10_000)
