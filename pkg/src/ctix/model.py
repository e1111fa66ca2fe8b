"""Closed vocabularies, span/relation data types, and the SRO compatibility table.

The three enums below are the contract every other stage builds on: 9 entity
classes, 23 IOC types, 21 relation types. Their cardinalities are asserted at
import time; extending the sets is a configuration concern (extra type names
may be whitelisted when loading an SRO table), never a runtime one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import SroTableError, UnknownSymbolError


class EntityType(str, Enum):
    """STIX Domain Object classes recognized by the entity extractors."""

    ATTACK_PATTERN = "ATTACK_PATTERN"
    CAMPAIGN = "CAMPAIGN"
    IDENTITY_ORGANIZATION = "IDENTITY_ORGANIZATION"
    IDENTITY_PERSON = "IDENTITY_PERSON"
    LOCATION = "LOCATION"
    MALWARE = "MALWARE"
    THREAT_ACTOR = "THREAT_ACTOR"
    TOOL = "TOOL"
    VULNERABILITY = "VULNERABILITY"


class IocType(str, Enum):
    """Indicator-of-compromise types handled by pattern matching."""

    ATTACK_TACTICS_ENTERPRISE = "ATTACK_TACTICS_ENTERPRISE"
    ATTACK_TACTICS_MOBILE = "ATTACK_TACTICS_MOBILE"
    ATTACK_TECHNIQUES_ENTERPRISE = "ATTACK_TECHNIQUES_ENTERPRISE"
    ATTACK_TECHNIQUES_MOBILE = "ATTACK_TECHNIQUES_MOBILE"
    BITCOIN_ADDRESSES = "BITCOIN_ADDRESSES"
    CVES = "CVES"
    DOMAINS = "DOMAINS"
    EMAIL_ADDRESSES = "EMAIL_ADDRESSES"
    FILE_PATHS = "FILE_PATHS"
    IMPHASHES = "IMPHASHES"
    IPV4S = "IPV4S"
    IPV4_CIDRS = "IPV4_CIDRS"
    MAC_ADDRESSES = "MAC_ADDRESSES"
    MD5S = "MD5S"
    MONERO_ADDRESSES = "MONERO_ADDRESSES"
    REGISTRY_KEY_PATHS = "REGISTRY_KEY_PATHS"
    SHA1S = "SHA1S"
    SHA256S = "SHA256S"
    SHA512S = "SHA512S"
    SSDEEPS = "SSDEEPS"
    TLP_LABELS = "TLP_LABELS"
    URLS = "URLS"
    USER_AGENTS = "USER_AGENTS"

    @property
    def placeholder(self) -> str:
        """Masking token substituted for occurrences of this IOC type."""
        return f"INDICATOR_{self.value}"


class RelationType(str, Enum):
    """STIX Relationship Object types scored by the relation extractor."""

    ATTRIBUTED_TO = "ATTRIBUTED_TO"
    AUTHORED_BY = "AUTHORED_BY"
    BEACONS_TO = "BEACONS_TO"
    COMMUNICATES_WITH = "COMMUNICATES_WITH"
    COMPROMISES = "COMPROMISES"
    CONSISTS_OF = "CONSISTS_OF"
    CONTROLS = "CONTROLS"
    DELIVERS = "DELIVERS"
    DOWNLOADS = "DOWNLOADS"
    DROPS = "DROPS"
    EXFILTRATE_TO = "EXFILTRATE_TO"
    EXPLOITS = "EXPLOITS"
    HAS = "HAS"
    HOSTS = "HOSTS"
    IMPERSONATES = "IMPERSONATES"
    INDICATES = "INDICATES"
    LOCATED_AT = "LOCATED_AT"
    ORIGINATES_FROM = "ORIGINATES_FROM"
    OWNS = "OWNS"
    TARGETS = "TARGETS"
    USES = "USES"

    @property
    def verb_phrase(self) -> str:
        """Fixed English surface form used to template candidate sentences."""
        return _VERB_PHRASES[self]

    @property
    def wire_name(self) -> str:
        """Lowercase hyphenated name used on emitted STIX relationship objects."""
        return _WIRE_NAMES[self]


_VERB_PHRASES = {
    RelationType.ATTRIBUTED_TO: "is attributed to",
    RelationType.AUTHORED_BY: "is authored by",
    RelationType.BEACONS_TO: "beacons to",
    RelationType.COMMUNICATES_WITH: "communicates with",
    RelationType.COMPROMISES: "compromises",
    RelationType.CONSISTS_OF: "consists of",
    RelationType.CONTROLS: "controls",
    RelationType.DELIVERS: "delivers",
    RelationType.DOWNLOADS: "downloads",
    RelationType.DROPS: "drops",
    RelationType.EXFILTRATE_TO: "exfiltrates to",
    RelationType.EXPLOITS: "exploits",
    RelationType.HAS: "has",
    RelationType.HOSTS: "hosts",
    RelationType.IMPERSONATES: "impersonates",
    RelationType.INDICATES: "indicates",
    RelationType.LOCATED_AT: "is located at",
    RelationType.ORIGINATES_FROM: "originates from",
    RelationType.OWNS: "owns",
    RelationType.TARGETS: "targets",
    RelationType.USES: "uses",
}

_WIRE_NAMES = {
    RelationType.ATTRIBUTED_TO: "attributed-to",
    RelationType.AUTHORED_BY: "authored-by",
    RelationType.BEACONS_TO: "beacons-to",
    RelationType.COMMUNICATES_WITH: "communicates-with",
    RelationType.COMPROMISES: "compromises",
    RelationType.CONSISTS_OF: "consists-of",
    RelationType.CONTROLS: "controls",
    RelationType.DELIVERS: "delivers",
    RelationType.DOWNLOADS: "downloads",
    RelationType.DROPS: "drops",
    RelationType.EXFILTRATE_TO: "exfiltrates-to",
    RelationType.EXPLOITS: "exploits",
    RelationType.HAS: "has",
    RelationType.HOSTS: "hosts",
    RelationType.IMPERSONATES: "impersonates",
    RelationType.INDICATES: "indicates",
    RelationType.LOCATED_AT: "located-at",
    RelationType.ORIGINATES_FROM: "originates-from",
    RelationType.OWNS: "owns",
    RelationType.TARGETS: "targets",
    RelationType.USES: "uses",
}

def label_name(label: str) -> str:
    """Plain string name of a label that may be an enum member."""
    return label.value if isinstance(label, Enum) else label


ENTITY_TYPE_COUNT = 9
IOC_TYPE_COUNT = 23
RELATION_TYPE_COUNT = 21

assert len(EntityType) == ENTITY_TYPE_COUNT
assert len(IocType) == IOC_TYPE_COUNT
assert len(RelationType) == RELATION_TYPE_COUNT
assert len(set(_WIRE_NAMES.values())) == RELATION_TYPE_COUNT


class SpanSource(str, Enum):
    """Which extractor produced a span."""

    SUPERVISED_NER = "SUPERVISED_NER"
    ZERO_SHOT_NER = "ZERO_SHOT_NER"
    IOC_FINDER = "IOC_FINDER"
    # Annotations read back from CoNLL files (gold corpora) rather than
    # produced by an extractor.
    GOLD = "GOLD"


@dataclass(frozen=True)
class EntitySpan:
    """A typed, scored text span with half-open character offsets.

    Offsets are document-global unless a chunk-local context is stated by the
    operation that produced the span. `label` is an EntityType or IocType
    member, or a plain string for configuration-extended classes.
    """

    text: str
    start: int
    end: int
    label: str
    confidence: float
    source: SpanSource

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise ValueError(f"bad span offsets [{self.start}, {self.end})")
        if math.isnan(self.confidence) or not (0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence {self.confidence!r} outside [0, 1]")

    def matches(self, document_text: str) -> bool:
        """True iff this span's text is the slice it claims to cover."""
        return (
            self.end <= len(document_text)
            and document_text[self.start : self.end] == self.text
        )

    @property
    def key(self) -> tuple[int, int, str]:
        """Identity used for deduplication and pairing: (start, end, label)."""
        return (self.start, self.end, label_name(self.label))


@dataclass(frozen=True)
class Relation:
    """A validated, directed relation between two extracted spans."""

    source: EntitySpan
    relation: RelationType
    target: EntitySpan
    score: float

    def __post_init__(self):
        if math.isnan(self.score) or not (0.0 <= self.score <= 1.0):
            raise ValueError(f"score {self.score!r} outside [0, 1]")


def _label_names(extra_types: tuple[str, ...] = ()) -> set[str]:
    names = {e.value for e in EntityType} | {i.value for i in IocType}
    return names | set(extra_types)


@dataclass
class SroTable:
    """Allowed (source type, relation, target type) triples, in file order."""

    triples: list[tuple[str, RelationType, str]]
    _index: dict[tuple[str, str], list[RelationType]] = field(
        init=False, repr=False, default_factory=dict
    )

    def __post_init__(self):
        for src, rel, dst in self.triples:
            self._index.setdefault((label_name(src), label_name(dst)), []).append(rel)

    def allowed(self, src: str, dst: str) -> list[RelationType]:
        """Relations permitted from src type to dst type, in file order."""
        return list(self._index.get((label_name(src), label_name(dst)), []))

    def __contains__(self, triple: tuple[str, RelationType, str]) -> bool:
        src, rel, dst = triple
        return rel in self._index.get((label_name(src), label_name(dst)), [])

    def __len__(self) -> int:
        return len(self.triples)


def load_sro_table(path: str | Path, extra_types: tuple[str, ...] = ()) -> SroTable:
    """Load the SRO compatibility table from a whitespace-separated text file.

    File format: one `SOURCE_TYPE RELATION TARGET_TYPE` triple per line,
    '#' starts a comment, blank lines ignored. Unknown symbols are a hard
    error unless whitelisted via extra_types (configuration profiles).
    """
    path = Path(path)
    if not path.is_file():
        raise SroTableError(f"SRO table file not found: {path}")
    known_labels = _label_names(extra_types)
    relation_names = {r.value: r for r in RelationType}
    triples: list[tuple[str, RelationType, str]] = []
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise SroTableError(
                f"expected 'SOURCE RELATION TARGET', got {len(parts)} fields", line_no
            )
        src, rel_name, dst = parts
        if src not in known_labels:
            raise UnknownSymbolError(f"unknown source type {src!r}", line_no)
        if dst not in known_labels:
            raise UnknownSymbolError(f"unknown target type {dst!r}", line_no)
        if rel_name not in relation_names:
            raise UnknownSymbolError(f"unknown relation {rel_name!r}", line_no)
        triples.append((src, relation_names[rel_name], dst))
    if not triples:
        raise SroTableError(f"SRO table is empty: {path}")
    return SroTable(triples)


def allowed_relations(table: SroTable, src: str, dst: str) -> list[RelationType]:
    """Relations r with (src, r, dst) in the table, in file order."""
    return table.allowed(src, dst)


def default_sro_table_path() -> Path:
    return Path(__file__).parent / "data" / "sro_table.txt"


def load_default_sro_table() -> SroTable:
    return load_sro_table(default_sro_table_path())
