"""Link Set Median (LSM) text segmentation by lexical cohesion."""

__version__ = "0.1.0"

from .cohesion import LinkMatrix, LinkSet, build_link_matrix, build_link_sets, count_links
from .evaluation import (
    CorpusSummary,
    EvalReport,
    ReferenceSegments,
    aggregate,
    extract_reference,
    score,
    significance,
)
from .lsm import Segmentation, combine, median, median_differences, mean_median_difference, segment
from .text_model import Document, NormalizationConfig, Sentence, Token, parse_document, tokenize

__all__ = [
    "CorpusSummary",
    "Document",
    "EvalReport",
    "LinkMatrix",
    "LinkSet",
    "NormalizationConfig",
    "ReferenceSegments",
    "Segmentation",
    "Sentence",
    "Token",
    "aggregate",
    "build_link_matrix",
    "build_link_sets",
    "combine",
    "count_links",
    "extract_reference",
    "mean_median_difference",
    "median",
    "median_differences",
    "parse_document",
    "score",
    "segment",
    "significance",
    "tokenize",
]
