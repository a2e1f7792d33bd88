"""Reading questionnaire responses and binding them to a model.

Two encodings carry the same record shape: CSV with the exact header
``rater_id,level,statement_id,rating``, and JSON as an array of objects
with those four fields. Parsing never raises on bad content; every
rejected row or element is reported as an error diagnostic and the
well-formed records are returned. Binding attaches records to a model
and enforces coverage according to the binding mode.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .exceptions import IngestError
from .model import MaturityModel
from .scoring import ResponseSheet
from .validation import ERROR, WARNING, Diagnostic

CSV_COLUMNS = ("rater_id", "level", "statement_id", "rating")
BINDING_MODES = ("strict", "lenient")


@dataclass(frozen=True)
class ResponseRecord:
    """One rater's rating of one statement."""

    rater_id: str
    level: int
    statement_id: int
    rating: int


def parse_responses(
    document: str, format: str
) -> tuple[list[ResponseRecord], list[Diagnostic]]:
    """Decode a response document into records plus diagnostics.

    format is "csv" or "json". Content problems (bad header, malformed
    row, out-of-range value, duplicate record) become error diagnostics;
    the record in question is dropped and parsing continues. A document
    that cannot be decoded at all yields no records and a single
    document-level diagnostic.
    """
    if format == "csv":
        return _parse_csv(document)
    if format == "json":
        return _parse_json(document)
    raise ValueError(f"format must be 'csv' or 'json', got {format!r}")


def _coerce_int(raw: str) -> int | None:
    try:
        return int(raw)
    except (TypeError, ValueError):
        return None


def _check_record(
    rater_id, level, statement_id, rating, where: str, diags: list[Diagnostic]
) -> ResponseRecord | None:
    problems = []
    if not rater_id:
        problems.append("rater_id must be non-empty")
    if level is None or not 2 <= level <= 5:
        problems.append(f"level must be an integer in 2..5, got {level!r}")
    if statement_id is None or statement_id < 1:
        problems.append(f"statement_id must be a positive integer, got {statement_id!r}")
    if rating is None or not 0 <= rating <= 4:
        problems.append(f"rating must be an integer in 0..4, got {rating!r}")
    if problems:
        for p in problems:
            diags.append(Diagnostic(ERROR, where, p))
        return None
    return ResponseRecord(
        rater_id=rater_id, level=level, statement_id=statement_id, rating=rating
    )


def _dedupe(
    record: ResponseRecord,
    seen: set[tuple[str, int, int]],
    where: str,
    diags: list[Diagnostic],
) -> ResponseRecord | None:
    key = (record.rater_id, record.level, record.statement_id)
    if key in seen:
        diags.append(
            Diagnostic(
                ERROR,
                where,
                f"duplicate response for rater {record.rater_id!r}, "
                f"level {record.level}, statement {record.statement_id}",
            )
        )
        return None
    seen.add(key)
    return record


def _read_csv_rows(document: str, diags: list[Diagnostic]) -> list[list[str]]:
    # Stray control characters can make the csv module itself raise;
    # that must surface as a diagnostic, not an exception.
    reader = csv.reader(io.StringIO(document, newline=""))
    rows: list[list[str]] = []
    while True:
        try:
            rows.append(next(reader))
        except StopIteration:
            return rows
        except csv.Error as exc:
            diags.append(
                Diagnostic(ERROR, f"line {reader.line_num}", f"unparseable row: {exc}")
            )
            return rows


def _parse_csv(document: str) -> tuple[list[ResponseRecord], list[Diagnostic]]:
    records: list[ResponseRecord] = []
    diags: list[Diagnostic] = []
    rows = _read_csv_rows(document, diags)
    if diags and not rows:
        return records, diags
    if not rows:
        diags.append(Diagnostic(ERROR, "line 1", "document is empty, header expected"))
        return records, diags
    header = tuple(cell.strip() for cell in rows[0])
    if header != CSV_COLUMNS:
        diags.append(
            Diagnostic(
                ERROR,
                "line 1",
                f"header must be {','.join(CSV_COLUMNS)!r}, got {','.join(header)!r}",
            )
        )
        return records, diags
    seen: set[tuple[str, int, int]] = set()
    for lineno, row in enumerate(rows[1:], start=2):
        where = f"line {lineno}"
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(CSV_COLUMNS):
            diags.append(
                Diagnostic(
                    ERROR, where, f"expected {len(CSV_COLUMNS)} fields, got {len(row)}"
                )
            )
            continue
        rater_id = row[0].strip()
        record = _check_record(
            rater_id,
            _coerce_int(row[1].strip()),
            _coerce_int(row[2].strip()),
            _coerce_int(row[3].strip()),
            where,
            diags,
        )
        if record is None:
            continue
        record = _dedupe(record, seen, where, diags)
        if record is not None:
            records.append(record)
    return records, diags


def _json_int(obj: dict, key: str) -> int | None:
    value = obj.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        return None
    return value


def _parse_json(document: str) -> tuple[list[ResponseRecord], list[Diagnostic]]:
    records: list[ResponseRecord] = []
    diags: list[Diagnostic] = []
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        diags.append(Diagnostic(ERROR, "$", f"document is not valid JSON: {exc}"))
        return records, diags
    if not isinstance(data, list):
        diags.append(
            Diagnostic(ERROR, "$", "document must be a JSON array of response objects")
        )
        return records, diags
    seen: set[tuple[str, int, int]] = set()
    for i, item in enumerate(data):
        where = f"[{i}]"
        if not isinstance(item, dict):
            diags.append(Diagnostic(ERROR, where, "expected a JSON object"))
            continue
        missing = [k for k in CSV_COLUMNS if k not in item]
        if missing:
            diags.append(
                Diagnostic(ERROR, where, f"missing field(s): {', '.join(missing)}")
            )
            continue
        rater_id = item.get("rater_id")
        if not isinstance(rater_id, str):
            diags.append(Diagnostic(ERROR, where, "rater_id must be a string"))
            continue
        record = _check_record(
            rater_id.strip(),
            _json_int(item, "level"),
            _json_int(item, "statement_id"),
            _json_int(item, "rating"),
            where,
            diags,
        )
        if record is None:
            continue
        record = _dedupe(record, seen, where, diags)
        if record is not None:
            records.append(record)
    return records, diags


def bind_sheet(
    records,
    model: MaturityModel,
    mode: str = "strict",
    institution: str = "",
) -> tuple[ResponseSheet, list[Diagnostic]]:
    """Attach parsed records to a model, enforcing coverage.

    In strict mode, any rater missing any statement aborts with
    IngestError naming the gaps. In lenient mode, incomplete raters are
    dropped with a warning diagnostic and the remaining complete raters
    form the sheet. Records referencing statements the model does not
    define are rejected with an error diagnostic in both modes. A bind
    that leaves no raters raises IngestError.
    """
    if mode not in BINDING_MODES:
        raise ValueError(f"mode must be one of {BINDING_MODES}, got {mode!r}")
    diags: list[Diagnostic] = []
    known = set(model.statement_keys())
    raters: list[str] = []
    entries: dict[tuple[str, int, int], int] = {}
    for record in records:
        if (record.level, record.statement_id) not in known:
            diags.append(
                Diagnostic(
                    ERROR,
                    f"rater {record.rater_id!r}",
                    f"model defines no statement {record.statement_id} "
                    f"at level {record.level}",
                )
            )
            continue
        key = (record.rater_id, record.level, record.statement_id)
        if key in entries:
            diags.append(
                Diagnostic(
                    ERROR,
                    f"rater {record.rater_id!r}",
                    f"duplicate response for level {record.level}, "
                    f"statement {record.statement_id}; keeping the first",
                )
            )
            continue
        if record.rater_id not in raters:
            raters.append(record.rater_id)
        entries[key] = record.rating
    if not raters:
        raise IngestError("no usable raters in the response document")

    expected = model.statement_keys()
    missing: list[tuple[str, int, int]] = []
    incomplete: list[str] = []
    for rater in raters:
        gaps = [(rater, lv, sid) for lv, sid in expected if (rater, lv, sid) not in entries]
        if gaps:
            missing.extend(gaps)
            incomplete.append(rater)
    if missing and mode == "strict":
        shown = ", ".join(
            f"({r!r}, level {lv}, statement {sid})" for r, lv, sid in missing[:8]
        )
        rest = len(missing) - 8
        tail = f" and {rest} more" if rest > 0 else ""
        raise IngestError(
            f"strict binding: {len(missing)} missing rating(s): {shown}{tail}"
        )
    if incomplete:
        for rater in incomplete:
            count = sum(1 for r, _, _ in missing if r == rater)
            diags.append(
                Diagnostic(
                    WARNING,
                    f"rater {rater!r}",
                    f"dropped: missing {count} of {len(expected)} statements",
                )
            )
        raters = [r for r in raters if r not in incomplete]
        entries = {k: v for k, v in entries.items() if k[0] not in set(incomplete)}
    if not raters:
        raise IngestError("no rater covered every statement; nothing to score")
    return (
        ResponseSheet(
            institution=institution,
            raters=tuple(raters),
            entries=entries,
            model=model,
        ),
        diags,
    )
