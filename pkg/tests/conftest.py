import os

import pytest

from dcbam.project import load_project_file

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures")
GRIDSTIX_PATH = os.path.join(FIXTURE_DIR, "gridstix.dcbam.json")
CONTRIB_CSV_PATH = os.path.join(FIXTURE_DIR, "gridstix_contrib.csv")
RATINGS_CSV_PATH = os.path.join(FIXTURE_DIR, "gridstix_ratings.csv")


@pytest.fixture(scope="session")
def gridstix():
    return load_project_file(GRIDSTIX_PATH)


@pytest.fixture(scope="session")
def gridstix_bytes():
    with open(GRIDSTIX_PATH, "rb") as fh:
        return fh.read()
