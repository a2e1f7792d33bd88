import json
import random
import string

import pytest

from mlmm import IngestError, ResponseRecord, bind_sheet, default_mlmm, parse_responses
from mlmm.validation import ERROR, WARNING, has_errors

HEADER = "rater_id,level,statement_id,rating"


def _csv(*rows) -> str:
    return "\n".join([HEADER, *rows]) + "\n"


def test_parse_csv_happy_path() -> None:
    records, diags = parse_responses(_csv("r1,2,1,3", "r1,2,2,0"), "csv")
    assert diags == []
    assert records == [
        ResponseRecord("r1", 2, 1, 3),
        ResponseRecord("r1", 2, 2, 0),
    ]


def test_parse_csv_strips_cell_whitespace() -> None:
    records, diags = parse_responses(_csv(" r1 , 2 , 1 , 3 "), "csv")
    assert diags == []
    assert records == [ResponseRecord("r1", 2, 1, 3)]


def test_parse_csv_rejects_wrong_header() -> None:
    records, diags = parse_responses("rater,lvl,stmt,score\nr1,2,1,3\n", "csv")
    assert records == []
    assert len(diags) == 1
    assert diags[0].severity == ERROR
    assert diags[0].path == "line 1"


def test_parse_csv_rejects_empty_document() -> None:
    records, diags = parse_responses("", "csv")
    assert records == [] and has_errors(diags)


def test_parse_csv_reports_bad_rows_and_keeps_good_ones() -> None:
    doc = _csv(
        "r1,2,1,3",
        "r1,2,5",          # field count
        "r1,7,1,3",        # level out of range
        "r1,2,0,3",        # statement id not positive
        "r1,2,2,9",        # rating out of range
        "r1,2,3,",         # blank rating
        ",2,4,3",          # empty rater
        "r1,2,x,3",        # not an integer
        "r1,2,6,2",
    )
    records, diags = parse_responses(doc, "csv")
    assert [(r.statement_id, r.rating) for r in records] == [(1, 3), (6, 2)]
    assert len(diags) == 7
    assert {d.severity for d in diags} == {ERROR}
    assert all(d.path.startswith("line ") for d in diags)


def test_parse_csv_rejects_duplicates_keeping_first() -> None:
    records, diags = parse_responses(_csv("r1,2,1,3", "r1,2,1,4"), "csv")
    assert records == [ResponseRecord("r1", 2, 1, 3)]
    assert len(diags) == 1 and "duplicate" in diags[0].message


def test_parse_csv_ignores_blank_lines_and_crlf() -> None:
    doc = HEADER + "\r\nr1,2,1,3\r\n\r\nr1,2,2,4\r\n"
    records, diags = parse_responses(doc, "csv")
    assert diags == []
    assert len(records) == 2


def test_parse_json_happy_path() -> None:
    doc = json.dumps(
        [
            {"rater_id": "r1", "level": 2, "statement_id": 1, "rating": 3},
            {"rater_id": "r1", "level": 2, "statement_id": 2, "rating": 0},
        ]
    )
    records, diags = parse_responses(doc, "json")
    assert diags == []
    assert records == [
        ResponseRecord("r1", 2, 1, 3),
        ResponseRecord("r1", 2, 2, 0),
    ]


def test_parse_json_rejects_malformed_document() -> None:
    records, diags = parse_responses("{not json", "json")
    assert records == [] and len(diags) == 1 and diags[0].path == "$"


def test_parse_json_rejects_non_array() -> None:
    records, diags = parse_responses('{"rater_id": "r1"}', "json")
    assert records == [] and has_errors(diags)


def test_parse_json_rejects_bad_elements() -> None:
    doc = json.dumps(
        [
            {"rater_id": "r1", "level": 2, "statement_id": 1, "rating": 3},
            {"rater_id": "r1", "level": 2, "statement_id": 2},
            {"rater_id": "r1", "level": 2, "statement_id": 3, "rating": True},
            {"rater_id": "r1", "level": "2", "statement_id": 4, "rating": 3},
            {"rater_id": 5, "level": 2, "statement_id": 5, "rating": 3},
            42,
        ]
    )
    records, diags = parse_responses(doc, "json")
    assert len(records) == 1
    assert len(diags) == 5
    assert all(d.path.startswith("[") for d in diags)


def test_parse_rejects_unknown_format() -> None:
    with pytest.raises(ValueError):
        parse_responses("", "xml")


def test_parse_never_raises_on_garbage() -> None:
    rng = random.Random(1234)
    alphabet = string.printable
    for _ in range(200):
        doc = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 120)))
        for format in ("csv", "json"):
            records, diags = parse_responses(doc, format)
            assert isinstance(records, list) and isinstance(diags, list)


def _records_for(model, raters, rating=3):
    out = []
    for rater in raters:
        for level, sid in model.statement_keys():
            out.append(ResponseRecord(rater, level, sid, rating))
    return out


def test_bind_strict_accepts_complete_records(model) -> None:
    records = _records_for(model, ["u1", "u2"])
    sheet, diags = bind_sheet(records, model, mode="strict", institution="inst")
    assert diags == []
    assert sheet.raters == ("u1", "u2")
    assert sheet.institution == "inst"
    assert sheet.rater_aliases() == ("R1", "R2")
    assert sheet.rating("u1", 2, 1) == 3
    assert sheet.missing_keys() == []


def test_bind_strict_rejects_missing_statements(model) -> None:
    records = _records_for(model, ["u1"])[:-1]
    with pytest.raises(IngestError, match="missing"):
        bind_sheet(records, model, mode="strict")


def test_bind_lenient_drops_incomplete_raters(model) -> None:
    records = _records_for(model, ["u1", "u2"]) + _records_for(model, ["u3"])[:-3]
    sheet, diags = bind_sheet(records, model, mode="lenient")
    assert sheet.raters == ("u1", "u2")
    dropped = [d for d in diags if d.severity == WARNING]
    assert len(dropped) == 1 and "u3" in dropped[0].path
    assert "missing 3" in dropped[0].message


def test_bind_lenient_with_no_complete_rater_raises(model) -> None:
    records = _records_for(model, ["u1"])[:-1]
    with pytest.raises(IngestError):
        bind_sheet(records, model, mode="lenient")


def test_bind_rejects_unknown_statements(model) -> None:
    records = _records_for(model, ["u1"]) + [ResponseRecord("u1", 2, 99, 3)]
    sheet, diags = bind_sheet(records, model, mode="strict")
    assert sheet.raters == ("u1",)
    assert len(diags) == 1
    assert diags[0].severity == ERROR
    assert "no statement 99" in diags[0].message


def test_bind_rejects_duplicate_records(model) -> None:
    records = _records_for(model, ["u1"]) + [ResponseRecord("u1", 2, 1, 4)]
    sheet, diags = bind_sheet(records, model, mode="strict")
    assert sheet.rating("u1", 2, 1) == 3
    assert any("duplicate" in d.message for d in diags)


def test_bind_empty_records_raises(model) -> None:
    with pytest.raises(IngestError):
        bind_sheet([], model, mode="strict")


def test_bind_rejects_unknown_mode(model) -> None:
    with pytest.raises(ValueError):
        bind_sheet([], model, mode="loose")


def test_csv_and_json_encodings_are_equivalent(model) -> None:
    rng = random.Random(777)
    for _ in range(30):
        raters = [f"u{i}" for i in range(1, rng.randint(2, 4) + 1)]
        records = [
            ResponseRecord(r, lv, sid, rng.randint(0, 4))
            for r in raters
            for lv, sid in model.statement_keys()
        ]
        csv_doc = HEADER + "\n" + "\n".join(
            f"{r.rater_id},{r.level},{r.statement_id},{r.rating}" for r in records
        )
        json_doc = json.dumps(
            [
                {
                    "rater_id": r.rater_id,
                    "level": r.level,
                    "statement_id": r.statement_id,
                    "rating": r.rating,
                }
                for r in records
            ]
        )
        from_csv, csv_diags = parse_responses(csv_doc, "csv")
        from_json, json_diags = parse_responses(json_doc, "json")
        assert csv_diags == [] and json_diags == []
        assert from_csv == from_json
        sheet_csv, _ = bind_sheet(from_csv, model, institution="same")
        sheet_json, _ = bind_sheet(from_json, model, institution="same")
        assert sheet_csv == sheet_json


def test_sheet_matrix_layout(sheet_a) -> None:
    matrix = sheet_a.to_matrix()
    assert matrix.shape == (75, 8)
    keys = sheet_a.model.statement_keys()
    assert matrix[0, 0] == sheet_a.rating(sheet_a.raters[0], *keys[0])
    assert matrix[74, 7] == sheet_a.rating(sheet_a.raters[7], *keys[74])
