import pathlib

import pytest

from forestpi import ingest

MODELS = pathlib.Path(__file__).resolve().parent.parent / "models"


@pytest.fixture(scope="session")
def models_dir() -> pathlib.Path:
    return MODELS


@pytest.fixture(scope="session")
def fig1():
    """Two continuous features; class 1 on (X=x1 ∧ Y=y2) ∨ X=x2."""
    return ingest.parse_model((MODELS / "fig1.json").read_text())


@pytest.fixture(scope="session")
def ternary():
    """Two ternary features; class 1 on Y=y1 ∨ X=x3."""
    return ingest.parse_model((MODELS / "ternary.json").read_text())


@pytest.fixture(scope="session")
def const1():
    """Single-leaf model that always answers class 1."""
    return ingest.parse_model((MODELS / "const1.json").read_text())


@pytest.fixture(scope="session")
def even_tie():
    """Two trees that can split their votes; ties resolve to class 0."""
    return ingest.parse_model((MODELS / "even_tie.json").read_text())
