from pathlib import Path

import pytest

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def toy_gdp_csv() -> Path:
    return DATA_DIR / "toy_gdp.csv"


@pytest.fixture
def toy_gci_csv() -> Path:
    return DATA_DIR / "toy_gci.csv"


@pytest.fixture
def fig7_config() -> Path:
    return DATA_DIR / "fig7.json"
