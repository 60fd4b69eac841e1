"""Toolkit for entity and relation annotations on biomedical abstracts:
PubTator parsing, corpus statistics, BIO/RE preprocessing, NER/RE scoring,
and findings synthesis against curated reference tables."""

__version__ = "0.1.0"

from .model import (
    CoreEntityType,
    Document,
    Mention,
    RelationAnnotation,
    ValidationReport,
    full_text,
    map_entity_type,
    validate_document,
)
from .pubtator import (
    Corpus,
    PubTatorParseError,
    corpus_stats,
    parse_pubtator,
    read_pubtator,
    serialize_pubtator,
    write_pubtator,
)
from .preprocess import (
    BioSequence,
    CoreRelationLabel,
    PromptBundle,
    ReInstance,
    SentenceSpan,
    Token,
    build_fewshot_prompt,
    decode_bio,
    emit_bio,
    generate_re_instances,
    normalize_relation_label,
    segment_document,
    segment_sentences,
    tokenize,
    window_reachability,
)
from .evaluate import (
    InstancePrediction,
    MatchMode,
    MetricReport,
    RelationKey,
    ScoringError,
    aggregate_instance_predictions,
    corpus_to_relation_keys,
    match_mentions,
    score_ner,
    score_re,
)
from .synthesis import (
    CoverageReport,
    Finding,
    ReferenceTable,
    SourceKind,
    aggregate_findings,
    load_findings,
    load_reference_table,
    match_findings,
)

__all__ = [
    "BioSequence",
    "Corpus",
    "CoreEntityType",
    "CoreRelationLabel",
    "CoverageReport",
    "Document",
    "Finding",
    "InstancePrediction",
    "MatchMode",
    "Mention",
    "MetricReport",
    "PromptBundle",
    "PubTatorParseError",
    "ReInstance",
    "ReferenceTable",
    "RelationAnnotation",
    "RelationKey",
    "ScoringError",
    "SentenceSpan",
    "SourceKind",
    "Token",
    "ValidationReport",
    "aggregate_findings",
    "aggregate_instance_predictions",
    "build_fewshot_prompt",
    "corpus_stats",
    "corpus_to_relation_keys",
    "decode_bio",
    "emit_bio",
    "full_text",
    "generate_re_instances",
    "load_findings",
    "load_reference_table",
    "map_entity_type",
    "match_findings",
    "match_mentions",
    "normalize_relation_label",
    "parse_pubtator",
    "read_pubtator",
    "score_ner",
    "score_re",
    "segment_document",
    "segment_sentences",
    "serialize_pubtator",
    "tokenize",
    "validate_document",
    "window_reachability",
    "write_pubtator",
]
