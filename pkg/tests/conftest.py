import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mflica.dtw import BandSpec  # noqa: E402
from mflica.pipeline import run_mflica  # noqa: E402
from mflica.simgen import ScenarioConfig, generate_dataset  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def benchmark_scenario():
    return generate_dataset(ScenarioConfig(seed=42))


@pytest.fixture(scope="session")
def benchmark_run(benchmark_scenario):
    tss, _ = benchmark_scenario
    return run_mflica(tss, omega=60, delta=6, sigma=0.5, band=BandSpec(0.1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
