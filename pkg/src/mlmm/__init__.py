"""Staged maturity-model assessment for multi-rater Likert questionnaires.

The package scores per-rater questionnaire responses against a
five-level maturity model: ratings are consolidated across raters,
levels pass when enough statements are achieved, and the overall
maturity level is the highest unbroken chain of passed levels. Cohen
and Fleiss kappa statistics qualify how much the raters agreed, and the
gap report explains what blocks the next level.
"""

from .exceptions import (
    IngestError,
    MlmmError,
    ModelParseError,
    ModelValidationError,
    ScoringError,
    UndefinedKappaError,
)
from .estimator import MaturityAssessor
from .ingest import ResponseRecord, bind_sheet, parse_responses
from .metrics import (
    AGREEMENT_BANDS,
    AgreementReport,
    KappaValue,
    PairwiseKappa,
    classify_agreement,
    cohen_kappa,
    fleiss_kappa,
    pairwise_kappa_matrix,
)
from .model import (
    CsfTag,
    Level,
    MaturityModel,
    Statement,
    default_mlmm,
    load_model,
    serialize_model,
    validate_model,
)
from .report import (
    BlockingStatement,
    GapReport,
    RenderedReport,
    decode_report,
    gap_analysis,
    render,
    render_agreement,
    report_dict,
)
from .scoring import (
    LIKERT_ANCHORS,
    AggregatedRatings,
    AggregationPolicy,
    AssessmentResult,
    LevelResult,
    ResponseSheet,
    StatementRating,
    aggregate_matrix,
    aggregate_ratings,
    assess,
    consolidate,
    is_achieved,
    nas,
    pass_threshold,
    pct_to_rating,
)
from .validation import Diagnostic

__version__ = "0.1.0"

__all__ = [
    "AGREEMENT_BANDS",
    "AggregatedRatings",
    "AggregationPolicy",
    "AgreementReport",
    "AssessmentResult",
    "BlockingStatement",
    "CsfTag",
    "Diagnostic",
    "GapReport",
    "IngestError",
    "KappaValue",
    "LIKERT_ANCHORS",
    "Level",
    "LevelResult",
    "MaturityAssessor",
    "MaturityModel",
    "MlmmError",
    "ModelParseError",
    "ModelValidationError",
    "PairwiseKappa",
    "RenderedReport",
    "ResponseRecord",
    "ResponseSheet",
    "ScoringError",
    "Statement",
    "StatementRating",
    "UndefinedKappaError",
    "aggregate_matrix",
    "aggregate_ratings",
    "assess",
    "bind_sheet",
    "classify_agreement",
    "cohen_kappa",
    "consolidate",
    "decode_report",
    "default_mlmm",
    "fleiss_kappa",
    "gap_analysis",
    "is_achieved",
    "load_model",
    "nas",
    "pairwise_kappa_matrix",
    "parse_responses",
    "pass_threshold",
    "pct_to_rating",
    "render",
    "render_agreement",
    "report_dict",
    "serialize_model",
    "validate_model",
]
