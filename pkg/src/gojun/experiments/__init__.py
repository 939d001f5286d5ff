"""Experiment runners: one per word-order analysis, all report-producing."""

from .agreement import run_human_agreement
from .base import CANONICAL_ORDER, MODE_COUNT, MODE_LM
from .double_object import (
    build_cooccurrence_table,
    run_cooccurrence_analysis,
    run_double_object,
    run_omission_analysis,
    run_semantic_role_analysis,
    run_verb_type_test,
)
from .order import (
    DEFAULT_ADVERB_REFERENCE,
    precedence_matrix,
    run_adverb_position,
    run_case_order,
    run_long_before_short,
)
from .report import ExperimentReport, VerbRecord, report_to_tsv, verb_records_from_report, write_report
from .topic import (
    run_adverbial_particles,
    run_topicalization_claim_i,
    run_topicalization_claim_ii,
    topicalization_matrix,
)

__all__ = [
    "CANONICAL_ORDER",
    "MODE_COUNT",
    "MODE_LM",
    "DEFAULT_ADVERB_REFERENCE",
    "ExperimentReport",
    "VerbRecord",
    "build_cooccurrence_table",
    "precedence_matrix",
    "report_to_tsv",
    "run_adverb_position",
    "run_adverbial_particles",
    "run_case_order",
    "run_cooccurrence_analysis",
    "run_double_object",
    "run_human_agreement",
    "run_long_before_short",
    "run_omission_analysis",
    "run_semantic_role_analysis",
    "run_topicalization_claim_i",
    "run_topicalization_claim_ii",
    "run_verb_type_test",
    "topicalization_matrix",
    "verb_records_from_report",
    "write_report",
]
