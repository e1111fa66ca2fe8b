"""CTI report text to STIX 2.1 knowledge bundles.

Pipeline stages: sanitize/chunk text, extract IOCs by pattern matching,
extract entities through pluggable NER backends (supervised BIO decoding or
zero-shot taxonomy mapping), score candidate relations with a cross-encoder
style backend, and emit a validated STIX bundle.
"""

from .model import (
    EntitySpan,
    EntityType,
    IocType,
    Relation,
    RelationType,
    SpanSource,
    SroTable,
    allowed_relations,
    load_default_sro_table,
    load_sro_table,
)

__version__ = "0.1.0"

__all__ = [
    "EntitySpan",
    "EntityType",
    "IocType",
    "Relation",
    "RelationType",
    "SpanSource",
    "SroTable",
    "allowed_relations",
    "load_default_sro_table",
    "load_sro_table",
    "__version__",
]
