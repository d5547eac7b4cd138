import pytest

from riskreg.register_io import load_golden_layout, load_golden_register, load_seed_catalog


@pytest.fixture(scope="session")
def golden_register():
    return load_golden_register()


@pytest.fixture(scope="session")
def golden_layout():
    return load_golden_layout()


@pytest.fixture(scope="session")
def seed_catalog():
    return load_seed_catalog()
