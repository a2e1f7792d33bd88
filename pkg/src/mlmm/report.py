"""Gap analysis and report rendering.

The gap report names the lowest failed level, how many more achieved
statements it needs, and which statements block it. Rendering is
deterministic: the same inputs always produce byte-identical output in
each of the three formats (text, json, markdown).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .exceptions import ScoringError
from .metrics import AgreementReport, KappaValue, PairwiseKappa
from .model import MaturityModel
from .scoring import (
    AggregatedRatings,
    AssessmentResult,
    LevelResult,
    LIKERT_ANCHORS,
    is_achieved,
)

REPORT_FORMATS = ("text", "json", "markdown")


@dataclass(frozen=True)
class BlockingStatement:
    """A statement whose consolidated rating keeps the target level failing."""

    statement_id: int
    text: str
    rating: int
    rater_ratings: tuple[int, ...]


@dataclass(frozen=True)
class GapReport:
    """Shortfall against the lowest failed level."""

    target_level: int
    target_name: str
    shortfall: int
    blocking_statements: tuple[BlockingStatement, ...]


@dataclass(frozen=True)
class RenderedReport:
    format: str
    body: str


def gap_analysis(
    result: AssessmentResult,
    aggregated: AggregatedRatings,
    model: MaturityModel,
) -> GapReport | None:
    """Describe the gap to the next unreached level.

    Returns None when every level passed. The target is the lowest
    failed level; the shortfall is how many more achieved statements it
    needs; blocking statements are its unachieved statements sorted by
    rating ascending, then id.
    """
    for lr in result.levels:
        if lr.tns != len(model.level(lr.number).statements):
            raise ScoringError(
                f"result and model disagree on level {lr.number} statement count"
            )
    target: LevelResult | None = None
    for lr in result.levels:
        if not lr.passed:
            target = lr
            break
    if target is None:
        return None
    blockers = [
        BlockingStatement(
            statement_id=st.statement_id,
            text=model.statement_text(target.number, st.statement_id),
            rating=st.rating,
            rater_ratings=st.rater_ratings,
        )
        for st in aggregated.ratings_for(target.number)
        if not is_achieved(st.rating)
    ]
    blockers.sort(key=lambda b: (b.rating, b.statement_id))
    return GapReport(
        target_level=target.number,
        target_name=target.name,
        shortfall=target.pt - target.nas,
        blocking_statements=tuple(blockers),
    )


def _check_format(format: str) -> None:
    if format not in REPORT_FORMATS:
        raise ValueError(f"format must be one of {REPORT_FORMATS}, got {format!r}")


def _kappa_dict(kv: KappaValue | None) -> dict[str, Any]:
    if kv is None:
        return {"kappa": None, "p_observed": None, "p_expected": None}
    return {"kappa": kv.value, "p_observed": kv.p_observed, "p_expected": kv.p_expected}


def _agreement_dict(agreement: AgreementReport) -> dict[str, Any]:
    return {
        "raters": list(agreement.raters),
        "pairwise": [
            {"rater_a": pk.rater_a, "rater_b": pk.rater_b, **_kappa_dict(pk.kappa)}
            for pk in agreement.pairwise
        ],
        "fleiss": _kappa_dict(agreement.fleiss),
        "min_kappa": agreement.min_kappa,
        "max_kappa": agreement.max_kappa,
        "overall_band": agreement.overall_band,
    }


def _gap_dict(gap: GapReport) -> dict[str, Any]:
    return {
        "target_level": gap.target_level,
        "target_name": gap.target_name,
        "shortfall": gap.shortfall,
        "blocking_statements": [
            {
                "statement_id": b.statement_id,
                "text": b.text,
                "rating": b.rating,
                "rater_ratings": list(b.rater_ratings),
            }
            for b in gap.blocking_statements
        ],
    }


def report_dict(
    result: AssessmentResult,
    agreement: AgreementReport | None = None,
    gap: GapReport | None = None,
) -> dict[str, Any]:
    """The JSON-format report as a plain dict."""
    return {
        "institution": result.institution,
        "aggregation": result.aggregation,
        "entry_level_name": result.entry_level_name,
        "maturity_level": result.maturity_level,
        "maturity_name": result.maturity_name,
        "levels": [
            {
                "number": lr.number,
                "name": lr.name,
                "tns": lr.tns,
                "pass_threshold": lr.pt,
                "nas": lr.nas,
                "passed": lr.passed,
                "attainment_label": lr.attainment_label,
                "inapplicable": lr.inapplicable,
            }
            for lr in result.levels
        ],
        "agreement": _agreement_dict(agreement) if agreement else None,
        "gap": _gap_dict(gap) if gap else None,
    }


def _text_table(result: AssessmentResult) -> list[str]:
    rows = [("Level", "Statements", "Threshold", "NAS", "Verdict", "Attainment")]
    rows.append((result.entry_level_name, "0", "Not Valid", "-", "-", "-"))
    for lr in result.levels:
        rows.append(
            (
                lr.name,
                str(lr.tns),
                str(lr.pt),
                str(lr.nas),
                "PASS" if lr.passed else "FAIL",
                lr.attainment_label,
            )
        )
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [
            r[i].rjust(widths[i]) for i in range(1, len(r))
        ]
        lines.append("  ".join(cells).rstrip())
    return lines


def _inapplicable_note(result: AssessmentResult) -> str | None:
    parts = [
        f"level {lr.number}: {lr.inapplicable}"
        for lr in result.levels
        if lr.inapplicable
    ]
    if not parts:
        return None
    return "Inapplicable statements counted as achieved: " + ", ".join(parts)


def _fmt_kappa(value: float) -> str:
    return f"{value:.4f}"


def _agreement_text(agreement: AgreementReport) -> list[str]:
    lines = [f"Inter-rater agreement ({len(agreement.raters)} raters)"]
    lines.append(f"  Fleiss kappa: {_fmt_kappa(agreement.fleiss.value)}")
    lines.append(
        f"  Pairwise Cohen kappa: min {_fmt_kappa(agreement.min_kappa)}, "
        f"max {_fmt_kappa(agreement.max_kappa)}"
    )
    lines.append(f"  Overall band (weakest pair): {agreement.overall_band}")
    for pk in agreement.pairwise:
        shown = "undefined" if pk.kappa is None else _fmt_kappa(pk.kappa.value)
        lines.append(f"    {pk.rater_a}-{pk.rater_b}: {shown}")
    return lines


def _gap_text(gap: GapReport) -> list[str]:
    lines = [f"Gap to next level: level {gap.target_level} ({gap.target_name})"]
    lines.append(f"  Shortfall: {gap.shortfall} achieved statement(s)")
    lines.append("  Blocking statements (lowest rated first):")
    for b in gap.blocking_statements:
        raters = ",".join(str(r) for r in b.rater_ratings)
        lines.append(
            f"    - statement {b.statement_id}: rated {b.rating} "
            f"({LIKERT_ANCHORS[b.rating]}); raters gave [{raters}]; {b.text}"
        )
    return lines


def _render_text(
    result: AssessmentResult,
    agreement: AgreementReport | None,
    gap: GapReport | None,
) -> str:
    lines = [f"Maturity assessment: {result.institution}"]
    lines.append(f"Aggregation policy: {result.aggregation}")
    lines.append("")
    lines.extend(_text_table(result))
    lines.append("")
    lines.append(f"Maturity level: {result.maturity_level} ({result.maturity_name})")
    note = _inapplicable_note(result)
    if note:
        lines.append(note)
    if agreement:
        lines.append("")
        lines.extend(_agreement_text(agreement))
    if gap:
        lines.append("")
        lines.extend(_gap_text(gap))
    return "\n".join(lines) + "\n"


def _render_markdown(
    result: AssessmentResult,
    agreement: AgreementReport | None,
    gap: GapReport | None,
) -> str:
    lines = [f"# Maturity assessment: {result.institution}"]
    lines.append("")
    lines.append(f"Aggregation policy: `{result.aggregation}`")
    lines.append("")
    lines.append("| Level | Statements | Threshold | NAS | Verdict | Attainment |")
    lines.append("| --- | --- | --- | --- | --- | --- |")
    lines.append(f"| {result.entry_level_name} | 0 | Not Valid | - | - | - |")
    for lr in result.levels:
        verdict = "PASS" if lr.passed else "FAIL"
        lines.append(
            f"| {lr.name} | {lr.tns} | {lr.pt} | {lr.nas} | {verdict} "
            f"| {lr.attainment_label} |"
        )
    lines.append("")
    lines.append(
        f"**Maturity level: {result.maturity_level} ({result.maturity_name})**"
    )
    note = _inapplicable_note(result)
    if note:
        lines.append("")
        lines.append(note)
    if agreement:
        lines.append("")
        lines.append("## Inter-rater agreement")
        lines.append("")
        lines.append(f"Raters: {len(agreement.raters)}")
        lines.append("")
        lines.append("| Pair | Cohen kappa |")
        lines.append("| --- | --- |")
        for pk in agreement.pairwise:
            shown = "undefined" if pk.kappa is None else _fmt_kappa(pk.kappa.value)
            lines.append(f"| {pk.rater_a}-{pk.rater_b} | {shown} |")
        lines.append("")
        lines.append(f"Fleiss kappa: {_fmt_kappa(agreement.fleiss.value)}")
        lines.append("")
        lines.append(
            f"Pairwise minimum {_fmt_kappa(agreement.min_kappa)}, "
            f"maximum {_fmt_kappa(agreement.max_kappa)}; "
            f"overall band (weakest pair): **{agreement.overall_band}**"
        )
    if gap:
        lines.append("")
        lines.append("## Gap to next level")
        lines.append("")
        lines.append(
            f"Target: level {gap.target_level} ({gap.target_name}), "
            f"shortfall {gap.shortfall} achieved statement(s)."
        )
        lines.append("")
        for b in gap.blocking_statements:
            raters = ",".join(str(r) for r in b.rater_ratings)
            lines.append(
                f"- statement {b.statement_id}: rated {b.rating} "
                f"({LIKERT_ANCHORS[b.rating]}); raters gave [{raters}]; {b.text}"
            )
    return "\n".join(lines) + "\n"


def render(
    result: AssessmentResult,
    agreement: AgreementReport | None = None,
    gap: GapReport | None = None,
    format: str = "text",
) -> RenderedReport:
    """Render an assessment (plus optional agreement and gap sections)."""
    _check_format(format)
    if format == "json":
        body = json.dumps(report_dict(result, agreement, gap), indent=2) + "\n"
    elif format == "markdown":
        body = _render_markdown(result, agreement, gap)
    else:
        body = _render_text(result, agreement, gap)
    return RenderedReport(format=format, body=body)


def render_agreement(
    agreement: AgreementReport, institution: str = "", format: str = "text"
) -> RenderedReport:
    """Render just the agreement section (the CLI agreement command)."""
    _check_format(format)
    if format == "json":
        body = (
            json.dumps(
                {"institution": institution, "agreement": _agreement_dict(agreement)},
                indent=2,
            )
            + "\n"
        )
    elif format == "markdown":
        lines = [f"# Inter-rater agreement: {institution}", ""]
        lines.append("| Pair | Cohen kappa |")
        lines.append("| --- | --- |")
        for pk in agreement.pairwise:
            shown = "undefined" if pk.kappa is None else _fmt_kappa(pk.kappa.value)
            lines.append(f"| {pk.rater_a}-{pk.rater_b} | {shown} |")
        lines.append("")
        lines.append(f"Fleiss kappa: {_fmt_kappa(agreement.fleiss.value)}")
        lines.append(
            f"Pairwise minimum {_fmt_kappa(agreement.min_kappa)}, "
            f"maximum {_fmt_kappa(agreement.max_kappa)}; "
            f"overall band (weakest pair): **{agreement.overall_band}**"
        )
        body = "\n".join(lines) + "\n"
    else:
        lines = [f"Inter-rater agreement: {institution}"]
        lines.extend(_agreement_text(agreement))
        body = "\n".join(lines) + "\n"
    return RenderedReport(format=format, body=body)


def _kappa_from_dict(obj: dict[str, Any]) -> KappaValue | None:
    if obj.get("kappa") is None:
        return None
    return KappaValue(
        value=obj["kappa"],
        p_observed=obj["p_observed"],
        p_expected=obj["p_expected"],
    )


def decode_report(body: str) -> tuple[
    AssessmentResult, AgreementReport | None, GapReport | None
]:
    """Rebuild the typed report values from a json-format rendering.

    Inverse of ``render(..., format="json")``: decoding a rendered body
    yields values equal to the originals.
    """
    obj = json.loads(body)
    levels = tuple(
        LevelResult(
            number=lv["number"],
            name=lv["name"],
            tns=lv["tns"],
            nas=lv["nas"],
            pt=lv["pass_threshold"],
            passed=lv["passed"],
            attainment_label=lv["attainment_label"],
            inapplicable=lv["inapplicable"],
        )
        for lv in obj["levels"]
    )
    result = AssessmentResult(
        institution=obj["institution"],
        aggregation=obj["aggregation"],
        entry_level_name=obj["entry_level_name"],
        levels=levels,
        maturity_level=obj["maturity_level"],
        maturity_name=obj["maturity_name"],
    )
    agreement = None
    if obj.get("agreement") is not None:
        raw = obj["agreement"]
        agreement = AgreementReport(
            raters=tuple(raw["raters"]),
            pairwise=tuple(
                PairwiseKappa(
                    rater_a=pk["rater_a"],
                    rater_b=pk["rater_b"],
                    kappa=_kappa_from_dict(pk),
                )
                for pk in raw["pairwise"]
            ),
            fleiss=_kappa_from_dict(raw["fleiss"]),
            min_kappa=raw["min_kappa"],
            max_kappa=raw["max_kappa"],
            overall_band=raw["overall_band"],
        )
    gap = None
    if obj.get("gap") is not None:
        raw = obj["gap"]
        gap = GapReport(
            target_level=raw["target_level"],
            target_name=raw["target_name"],
            shortfall=raw["shortfall"],
            blocking_statements=tuple(
                BlockingStatement(
                    statement_id=b["statement_id"],
                    text=b["text"],
                    rating=b["rating"],
                    rater_ratings=tuple(b["rater_ratings"]),
                )
                for b in raw["blocking_statements"]
            ),
        )
    return result, agreement, gap
