from pathlib import Path

import pytest

from mlmm import bind_sheet, default_mlmm, parse_responses

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture_sheet(name, model=None):
    model = model or default_mlmm()
    text = (FIXTURES / name).read_text(encoding="utf-8")
    records, diags = parse_responses(text, "csv")
    assert not diags
    sheet, bind_diags = bind_sheet(
        records, model, mode="strict", institution=Path(name).stem
    )
    assert not bind_diags
    return sheet


@pytest.fixture
def model():
    return default_mlmm()


@pytest.fixture
def sheet_a():
    return load_fixture_sheet("university_a.csv")


@pytest.fixture
def sheet_b():
    return load_fixture_sheet("university_b.csv")
