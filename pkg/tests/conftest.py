import numpy as np
import pytest

import vdmkit as v
from helpers import ACCEPTANCE_LINES


@pytest.fixture(scope="session")
def sphere500():
    cloud = v.sample(v.ManifoldSpec("sphere", 500, dim=2, seed=3))
    return v.run_pipeline(cloud, v.PipelineParams(eps_pca=0.1, n_eigs=60))


@pytest.fixture(scope="session")
def sphere2000():
    cloud = v.sample(v.ManifoldSpec("sphere", 2000, dim=2, seed=0))
    return v.run_pipeline(cloud, v.PipelineParams(eps_pca=0.1, n_eigs=60, tau=0.02))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
