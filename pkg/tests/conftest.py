import numpy as np
import pytest

from lfkit import (
    DEFAULT,
    STRICT,
    FormSpec,
    build_coefficient_table,
    load_form,
)


@pytest.fixture(scope="session")
def profile():
    return DEFAULT


@pytest.fixture(scope="session")
def strict_profile():
    return STRICT


@pytest.fixture(scope="session")
def all_ones2() -> FormSpec:
    return load_form("all-ones:2")


@pytest.fixture(scope="session")
def all_ones3() -> FormSpec:
    return load_form("all-ones:3")


@pytest.fixture(scope="session")
def delta() -> FormSpec:
    return load_form("delta")


@pytest.fixture(scope="session")
def unitary3() -> FormSpec:
    return load_form("random-unitary:3:1")


@pytest.fixture(scope="session")
def table_ao2_small(all_ones2):
    return build_coefficient_table(all_ones2, 5000)


@pytest.fixture(scope="session")
def table_delta_small(delta):
    return build_coefficient_table(delta, 5000)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260814)
