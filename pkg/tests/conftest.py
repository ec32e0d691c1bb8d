"""Shared branch fixtures.

The production-size branches (N = 256, step 0.001) are expensive, so
they are computed once per session and shared between the unit tests
and the acceptance suite.
"""

import numpy as np
import pytest

from biwhitham import ContinuationConfig, continue_branch, get_model


@pytest.fixture(scope="session")
def ej_branch():
    model = get_model("ej")
    config = ContinuationConfig(kappa=1.0, n_points=256, step=0.001)
    return continue_branch(model, config), config


@pytest.fixture(scope="session")
def bw_branch():
    model = get_model("bw")
    config = ContinuationConfig(kappa=1.0, n_points=256, step=0.001)
    return continue_branch(model, config), config


@pytest.fixture(scope="session")
def hp_branch():
    model = get_model("hp")
    config = ContinuationConfig(kappa=1.611, n_points=256, step=0.001,
                                max_height=3.0)
    return continue_branch(model, config), config


@pytest.fixture(scope="session")
def ejp_branch():
    # positive-constant-state branch; heights are velocity-profile heights
    model = get_model("ej-positive")
    config = ContinuationConfig(kappa=1.0, n_points=256, step=0.001,
                                max_height=0.45)
    return continue_branch(model, config), config


@pytest.fixture(scope="session")
def ej_small_branch():
    # cheap small-amplitude branch for unit tests
    model = get_model("ej")
    config = ContinuationConfig(kappa=1.0, n_points=64, step=0.001,
                                max_height=0.05)
    return continue_branch(model, config), config
