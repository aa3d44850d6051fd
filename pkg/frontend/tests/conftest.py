from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    if not (DATA / "split" / "diag.csv").exists():
        pytest.fail(
            "stored run outputs missing; regenerate with the commands in "
            "tests/data/README.md")
    return DATA
