"""Pytest configuration for scitopics tests."""

import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Generator

import pytest
from _pytest.config import Config

# Add the project root directory to the Python path
sys.path.insert(0, str(Path(__file__).parent.parent.absolute()))

from src.common.config import RunConfig, load_run_config  # noqa: E402
from src.covariates.design import DesignMatrix  # noqa: E402
from src.stm.fit import FitResult, fit  # noqa: E402
from src.stm.simulate import SimulatedStudy  # noqa: E402
from tests.test_utils.data_generators import (
    small_fit_settings,
    small_study  # noqa: E402,
)

# Configure logging for tests
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)


def pytest_configure(config: Config) -> None:
    """Configure pytest."""
    # Register custom markers
    config.addinivalue_line("markers", "unit: mark a test as a unit test")
    config.addinivalue_line(
        "markers", "integration: mark a test as an integration test"
    )
    config.addinivalue_line("markers", "e2e: mark a test as an end-to-end test")
    config.addinivalue_line("markers", "performance: mark a test as a performance test")
    config.addinivalue_line("markers", "slow: mark a test as slow running")


@pytest.fixture
def temp_dir(tmp_path: Path) -> Generator[Path, None, None]:
    """Create a temporary directory for tests."""
    yield tmp_path


@pytest.fixture
def run_config(tmp_path: Path) -> Callable[..., RunConfig]:
    """Factory for validated configurations writing under a temporary directory."""

    def factory(**overrides: Any) -> RunConfig:
        values: Dict[str, Any] = {
            "seed": 11,
            "paths": {"output_dir": str(tmp_path / "out")},
        }
        values.update(overrides)
        return load_run_config(None, **values)

    return factory


@pytest.fixture(scope="session")
def simulated_study() -> SimulatedStudy:
    """A 150-document, 3-topic synthetic study."""
    return small_study(seed=7)


@pytest.fixture(scope="session")
def fitted_study(simulated_study: SimulatedStudy) -> FitResult:
    """The synthetic study fitted with the true number of topics."""
    design: DesignMatrix = simulated_study.design
    return fit(simulated_study.dtm, design, 3, small_fit_settings(), seed=5)
