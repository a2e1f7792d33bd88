"""Maturity model structure: levels, statements, and critical success factors.

A maturity model is a fixed ladder of five levels. Level 1 is an entry
state with no questionnaire statements; levels 2 through 5 each carry a
block of statements, and every statement is tagged with one critical
success factor (CSF). Models are value objects: load, validate,
serialize, compare.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Any, Iterator

from .exceptions import ModelParseError, ModelValidationError
from .validation import ERROR, Diagnostic, has_errors

LEVEL_NUMBERS = (1, 2, 3, 4, 5)
ASSESSED_LEVELS = (2, 3, 4, 5)

DEFAULT_MODEL_NAME = "m-learning maturity model"
DEFAULT_LEVEL_NAMES = (
    "Preliminary",
    "Established",
    "Defined",
    "Structured",
    "Continuous Improvement",
)
DEFAULT_STATEMENT_COUNTS = (0, 18, 20, 20, 17)
DEFAULT_CSF_COUNT = 9


@dataclass(frozen=True)
class CsfTag:
    """A critical success factor a statement can be tagged with."""

    id: int
    label: str


@dataclass(frozen=True)
class Statement:
    """One questionnaire statement. ``csf`` references a CsfTag id."""

    id: int
    text: str
    csf: int


@dataclass(frozen=True)
class Level:
    """One maturity level and its block of statements."""

    number: int
    name: str
    statements: tuple[Statement, ...]


@dataclass(frozen=True)
class MaturityModel:
    name: str
    csfs: tuple[CsfTag, ...]
    levels: tuple[Level, ...]

    def level(self, number: int) -> Level:
        for lv in self.levels:
            if lv.number == number:
                return lv
        raise KeyError(f"no level {number} in model {self.name!r}")

    def assessed_levels(self) -> tuple[Level, ...]:
        """Levels that carry statements and are scored (2 through 5)."""
        return tuple(lv for lv in self.levels if lv.number in ASSESSED_LEVELS)

    def iter_statements(self) -> Iterator[tuple[int, Statement]]:
        """Yield (level number, statement) in canonical document order."""
        for lv in self.assessed_levels():
            for st in lv.statements:
                yield lv.number, st

    def statement_keys(self) -> tuple[tuple[int, int], ...]:
        return tuple((num, st.id) for num, st in self.iter_statements())

    def total_statements(self) -> int:
        return sum(len(lv.statements) for lv in self.levels)

    def statement_text(self, level: int, statement_id: int) -> str:
        for st in self.level(level).statements:
            if st.id == statement_id:
                return st.text
        raise KeyError(f"no statement {statement_id} at level {level}")


def default_mlmm() -> MaturityModel:
    """Build the built-in five-level model.

    Statement texts are placeholders; the level ladder, the per-level
    statement counts, and the nine-factor tag set are the real content.
    CSF tags are assigned round-robin over each level's statements.
    """
    csfs = tuple(
        CsfTag(id=i, label=f"Factor {i}") for i in range(1, DEFAULT_CSF_COUNT + 1)
    )
    levels = []
    for number, name, count in zip(
        LEVEL_NUMBERS, DEFAULT_LEVEL_NAMES, DEFAULT_STATEMENT_COUNTS
    ):
        statements = tuple(
            Statement(
                id=i,
                text=f"Statement {number}.{i} (placeholder)",
                csf=(i - 1) % DEFAULT_CSF_COUNT + 1,
            )
            for i in range(1, count + 1)
        )
        levels.append(Level(number=number, name=name, statements=statements))
    return MaturityModel(name=DEFAULT_MODEL_NAME, csfs=csfs, levels=tuple(levels))


def validate_model(model: MaturityModel) -> list[Diagnostic]:
    """Check every structural rule; return one diagnostic per violation."""
    diags: list[Diagnostic] = []

    def err(path: str, message: str) -> None:
        diags.append(Diagnostic(ERROR, path, message))

    if not model.name or not model.name.strip():
        err("name", "model name must be a non-empty string")

    seen_csf_ids: set[int] = set()
    for i, csf in enumerate(model.csfs):
        if csf.id < 1:
            err(f"csfs[{i}].id", f"CSF id must be a positive integer, got {csf.id}")
        if csf.id in seen_csf_ids:
            err(f"csfs[{i}].id", f"duplicate CSF id {csf.id}")
        seen_csf_ids.add(csf.id)
        if not csf.label or not csf.label.strip():
            err(f"csfs[{i}].label", "CSF label must be a non-empty string")
    if not model.csfs:
        err("csfs", "model must declare at least one CSF")

    numbers = tuple(lv.number for lv in model.levels)
    if numbers != LEVEL_NUMBERS:
        err(
            "levels",
            f"model must define exactly levels {list(LEVEL_NUMBERS)} in order, "
            f"got {list(numbers)}",
        )
    names = [lv.name for lv in model.levels]
    for i, lv in enumerate(model.levels):
        if not lv.name or not lv.name.strip():
            err(f"levels[{i}].name", "level name must be a non-empty string")
        elif names.count(lv.name) > 1 and names.index(lv.name) == i:
            err(f"levels[{i}].name", f"level name {lv.name!r} is not unique")

    for i, lv in enumerate(model.levels):
        if lv.number == 1 and lv.statements:
            err(
                f"levels[{i}].statements",
                f"level 1 must not carry statements, found {len(lv.statements)}",
            )
        if lv.number in ASSESSED_LEVELS and not lv.statements:
            err(
                f"levels[{i}].statements",
                f"level {lv.number} must carry at least one statement",
            )
        seen_ids: set[int] = set()
        for j, st in enumerate(lv.statements):
            path = f"levels[{i}].statements[{j}]"
            if st.id < 1:
                err(f"{path}.id", f"statement id must be positive, got {st.id}")
            if st.id in seen_ids:
                err(f"{path}.id", f"duplicate statement id {st.id} at level {lv.number}")
            seen_ids.add(st.id)
            if not st.text or not st.text.strip():
                err(f"{path}.text", "statement text must be non-empty")
            if st.csf not in seen_csf_ids:
                err(f"{path}.csf", f"statement references undeclared CSF {st.csf}")
    return diags


def _expect(obj: Any, key: str, kind: type, path: str, diags: list[Diagnostic]):
    """Fetch obj[key] checking its JSON type; record a diagnostic on failure."""
    if not isinstance(obj, dict):
        diags.append(Diagnostic(ERROR, path, "expected a JSON object"))
        return None
    if key not in obj:
        diags.append(Diagnostic(ERROR, f"{path}.{key}", "missing required field"))
        return None
    value = obj[key]
    if kind is int and isinstance(value, bool):
        diags.append(Diagnostic(ERROR, f"{path}.{key}", "expected an integer, got a boolean"))
        return None
    if not isinstance(value, kind):
        diags.append(
            Diagnostic(
                ERROR,
                f"{path}.{key}",
                f"expected {kind.__name__}, got {type(value).__name__}",
            )
        )
        return None
    return value


def _model_from_obj(obj: Any) -> tuple[MaturityModel | None, list[Diagnostic]]:
    diags: list[Diagnostic] = []
    if not isinstance(obj, dict):
        return None, [Diagnostic(ERROR, "$", "model document must be a JSON object")]

    name = _expect(obj, "name", str, "$", diags)

    csfs: list[CsfTag] = []
    raw_csfs = _expect(obj, "csfs", list, "$", diags)
    if raw_csfs is not None:
        for i, raw in enumerate(raw_csfs):
            cid = _expect(raw, "id", int, f"csfs[{i}]", diags)
            label = _expect(raw, "label", str, f"csfs[{i}]", diags)
            if cid is not None and label is not None:
                csfs.append(CsfTag(id=cid, label=label))

    levels: list[Level] = []
    raw_levels = _expect(obj, "levels", list, "$", diags)
    if raw_levels is not None:
        for i, raw in enumerate(raw_levels):
            number = _expect(raw, "number", int, f"levels[{i}]", diags)
            lv_name = _expect(raw, "name", str, f"levels[{i}]", diags)
            statements: list[Statement] = []
            raw_sts = _expect(raw, "statements", list, f"levels[{i}]", diags)
            if raw_sts is not None:
                for j, raw_st in enumerate(raw_sts):
                    spath = f"levels[{i}].statements[{j}]"
                    sid = _expect(raw_st, "id", int, spath, diags)
                    text = _expect(raw_st, "text", str, spath, diags)
                    csf = _expect(raw_st, "csf", int, spath, diags)
                    if None not in (sid, text, csf):
                        statements.append(Statement(id=sid, text=text, csf=csf))
            if number is not None and lv_name is not None:
                levels.append(
                    Level(number=number, name=lv_name, statements=tuple(statements))
                )

    if has_errors(diags):
        return None, diags
    return MaturityModel(name=name, csfs=tuple(csfs), levels=tuple(levels)), diags


def load_model(document: str) -> MaturityModel:
    """Parse and validate a JSON model document.

    Raises ModelParseError when the document is not JSON at all, and
    ModelValidationError (carrying per-field diagnostics) when it is
    JSON but breaks a structural rule.
    """
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ModelParseError(f"model document is not valid JSON: {exc}") from exc
    model, diags = _model_from_obj(obj)
    if model is None:
        raise ModelValidationError(diags)
    diags = validate_model(model)
    if has_errors(diags):
        raise ModelValidationError(diags)
    return model


def model_to_dict(model: MaturityModel) -> dict[str, Any]:
    return {
        "name": model.name,
        "csfs": [{"id": c.id, "label": c.label} for c in model.csfs],
        "levels": [
            {
                "number": lv.number,
                "name": lv.name,
                "statements": [
                    {"id": st.id, "text": st.text, "csf": st.csf}
                    for st in lv.statements
                ],
            }
            for lv in model.levels
        ],
    }


def serialize_model(model: MaturityModel) -> str:
    """Render a model as canonical JSON; load_model round-trips it."""
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def packaged_default_document() -> str:
    """The shipped JSON copy of the default model (reference document)."""
    return (
        resources.files("mlmm").joinpath("data/default_model.json").read_text("utf-8")
    )
