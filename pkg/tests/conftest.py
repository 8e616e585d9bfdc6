import numpy as np
import pytest

from bitlet import CpuMachine, PimMachine, PowerBudget


@pytest.fixture
def pim():
    return PimMachine()  # 1024 x 1024 cells, 1024 arrays, 10 ns, 0.1 pJ


@pytest.fixture
def cpu():
    return CpuMachine()  # 4 Tbps, 15 pJ/bit


@pytest.fixture
def budget():
    return PowerBudget(tdp_watts=20.0)


@pytest.fixture
def rng():
    return np.random.default_rng(0xB17B17)
