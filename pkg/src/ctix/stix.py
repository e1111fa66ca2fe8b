"""Emitting STIX 2.1 bundles: SDOs for entity classes, SCOs/indicator SDOs
for IOCs, SROs for relations, with deterministic ids and pinned timestamps
available for reproducible output."""

from __future__ import annotations

import json
import math
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import DanglingReferenceError
from .iocs import IocMatch, canonical_value
from .model import (
    EntitySpan,
    EntityType,
    IocType,
    Relation,
    RelationType,
    label_name,
)

# Namespace for UUIDv5 ids in deterministic mode; fixed for the artifact's
# lifetime so golden files stay stable.
CTIX_NAMESPACE = uuid.UUID("6ba0cb7a-5b4c-4e67-94d6-ffb53ba5f976")

SPEC_VERSION = "2.1"

ENTITY_SDO_TYPES: dict[EntityType, str] = {
    EntityType.ATTACK_PATTERN: "attack-pattern",
    EntityType.CAMPAIGN: "campaign",
    EntityType.IDENTITY_ORGANIZATION: "identity",
    EntityType.IDENTITY_PERSON: "identity",
    EntityType.LOCATION: "location",
    EntityType.MALWARE: "malware",
    EntityType.THREAT_ACTOR: "threat-actor",
    EntityType.TOOL: "tool",
    EntityType.VULNERABILITY: "vulnerability",
}

_HASH_KEYS: dict[IocType, str] = {
    IocType.MD5S: "MD5",
    IocType.SHA1S: "SHA-1",
    IocType.SHA256S: "SHA-256",
    IocType.SHA512S: "SHA-512",
    IocType.SSDEEPS: "SSDEEP",
    IocType.IMPHASHES: "IMPHASH",
}

_VALUE_SCO_TYPES: dict[IocType, str] = {
    IocType.IPV4S: "ipv4-addr",
    IocType.IPV4_CIDRS: "ipv4-addr",
    IocType.DOMAINS: "domain-name",
    IocType.URLS: "url",
    IocType.EMAIL_ADDRESSES: "email-addr",
    IocType.MAC_ADDRESSES: "mac-addr",
}

# IOC types with no concrete STIX observable: emitted as indicator SDOs
# carrying the value in their name plus a descriptive label.
_INDICATOR_LABELS: dict[IocType, str] = {
    IocType.ATTACK_TACTICS_ENTERPRISE: "attack-tactic-enterprise",
    IocType.ATTACK_TACTICS_MOBILE: "attack-tactic-mobile",
    IocType.ATTACK_TECHNIQUES_ENTERPRISE: "attack-technique-enterprise",
    IocType.ATTACK_TECHNIQUES_MOBILE: "attack-technique-mobile",
    IocType.TLP_LABELS: "tlp-label",
    IocType.BITCOIN_ADDRESSES: "bitcoin-address",
    IocType.MONERO_ADDRESSES: "monero-address",
    IocType.USER_AGENTS: "user-agent",
    IocType.CVES: "cve",
}

_SDO_WIRE_TYPES = set(ENTITY_SDO_TYPES.values()) | {"indicator"}


@dataclass(frozen=True)
class StixObject:
    type: str
    id: str
    props: dict

    def to_dict(self) -> dict:
        out = {"type": self.type, "id": self.id}
        for key in sorted(self.props):
            out[key] = self.props[key]
        return out


@dataclass
class StixBundle:
    id: str
    objects: list[StixObject] = field(default_factory=list)

    def object_ids(self) -> set[str]:
        return {o.id for o in self.objects}


def normalize_name(name: str) -> str:
    """Dedup key normalization: lowercase with whitespace collapsed."""
    return " ".join(name.lower().split())


def format_timestamp(dt: datetime) -> str:
    dt = dt.astimezone(timezone.utc)
    return f"{dt:%Y-%m-%dT%H:%M:%S}.{dt.microsecond // 1000:03d}Z"


def deterministic_id(wire_type: str, name: str) -> str:
    return f"{wire_type}--{uuid.uuid5(CTIX_NAMESPACE, f'{wire_type}|{normalize_name(name)}')}"


def random_id(wire_type: str) -> str:
    return f"{wire_type}--{uuid.uuid4()}"


def _make_id(wire_type: str, name: str, deterministic: bool) -> str:
    return deterministic_id(wire_type, name) if deterministic else random_id(wire_type)


def sdo_type_for(label: str) -> str:
    """Wire type for an entity label; extension classes become x- custom SDOs."""
    try:
        return ENTITY_SDO_TYPES[EntityType(label_name(label))]
    except ValueError:
        slug = label_name(label).lower().replace("_", "-")
        return f"x-{slug}"


def entity_to_sdo(span: EntitySpan, now: datetime, deterministic: bool = True) -> StixObject:
    """SDO for one extracted entity span."""
    wire = sdo_type_for(span.label)
    props: dict = {
        "spec_version": SPEC_VERSION,
        "created": format_timestamp(now),
        "modified": format_timestamp(now),
        "name": span.text,
    }
    name = label_name(span.label)
    if name == EntityType.IDENTITY_PERSON.value:
        props["identity_class"] = "individual"
    elif name == EntityType.IDENTITY_ORGANIZATION.value:
        props["identity_class"] = "organization"
    elif name == EntityType.MALWARE.value:
        props["is_family"] = True
    return StixObject(type=wire, id=_make_id(wire, span.text, deterministic), props=props)


def ioc_to_sco(match: IocMatch, now: datetime, deterministic: bool = True) -> StixObject:
    """SCO (or indicator SDO for abstract types) for one IOC match."""
    ioc_type = match.label
    value = match.refanged_value
    if ioc_type in _VALUE_SCO_TYPES:
        wire = _VALUE_SCO_TYPES[ioc_type]
        props = {"value": value}
    elif ioc_type in _HASH_KEYS:
        wire = "file"
        props = {"hashes": {_HASH_KEYS[ioc_type]: value}}
    elif ioc_type is IocType.FILE_PATHS:
        wire = "file"
        props = {"name": value}
    elif ioc_type is IocType.REGISTRY_KEY_PATHS:
        wire = "windows-registry-key"
        props = {"key": value}
    elif ioc_type in _INDICATOR_LABELS:
        wire = "indicator"
        props = {
            "spec_version": SPEC_VERSION,
            "created": format_timestamp(now),
            "modified": format_timestamp(now),
            "name": value,
            "labels": [_INDICATOR_LABELS[ioc_type]],
        }
    else:  # pragma: no cover - the three maps cover all 23 types
        raise KeyError(f"unmapped IOC type {ioc_type!r}")
    return StixObject(type=wire, id=_make_id(wire, _ioc_id_name(ioc_type, value), deterministic), props=props)


def _ioc_id_name(ioc_type: IocType, value: str) -> str:
    # Hash observables of different algorithms must not collide on "file".
    if ioc_type in _HASH_KEYS:
        return f"{_HASH_KEYS[ioc_type]}:{value}"
    return value


def _round_half_up_percent(score: float) -> int:
    return int(math.floor(score * 100 + 0.5))


def relation_to_sro(
    relation: Relation,
    source_id: str,
    target_id: str,
    now: datetime,
    deterministic: bool = True,
) -> StixObject:
    wire_rel = relation.relation.wire_name
    seed = f"{source_id}|{wire_rel}|{target_id}"
    rel_id = (
        f"relationship--{uuid.uuid5(CTIX_NAMESPACE, f'relationship|{seed}')}"
        if deterministic
        else random_id("relationship")
    )
    return StixObject(
        type="relationship",
        id=rel_id,
        props={
            "spec_version": SPEC_VERSION,
            "created": format_timestamp(now),
            "modified": format_timestamp(now),
            "relationship_type": wire_rel,
            "source_ref": source_id,
            "target_ref": target_id,
            "confidence": _round_half_up_percent(relation.score),
            "x_score": relation.score,
        },
    )


def _endpoint_identity(span: EntitySpan) -> tuple[str, str]:
    """(wire type, id-name) for a relation endpoint, resolved by name so the
    same mention maps to the same object across chunks and documents."""
    name = label_name(span.label)
    try:
        ioc_type = IocType(name)
    except ValueError:
        return sdo_type_for(span.label), span.text
    value = canonical_value(ioc_type, span.text)
    if ioc_type in _VALUE_SCO_TYPES:
        return _VALUE_SCO_TYPES[ioc_type], value
    if ioc_type in _HASH_KEYS or ioc_type is IocType.FILE_PATHS:
        return "file", _ioc_id_name(ioc_type, value)
    if ioc_type is IocType.REGISTRY_KEY_PATHS:
        return "windows-registry-key", value
    return "indicator", value


def build_bundle(
    spans: list[EntitySpan],
    iocs: list[IocMatch],
    relations: list[Relation],
    now: datetime | None = None,
    deterministic: bool = True,
    bundle_seed: str | None = None,
) -> StixBundle:
    """Assemble the knowledge bundle.

    One object per distinct (wire type, normalized name/value); one SRO per
    relation. Relation endpoints must correspond to a supplied span or IOC,
    otherwise DanglingReferenceError is raised.
    """
    now = now or datetime.now(timezone.utc)
    objects: list[StixObject] = []
    by_key: dict[tuple[str, str], str] = {}

    def add(obj: StixObject, wire: str, name: str) -> str:
        key = (wire, normalize_name(name))
        if key not in by_key:
            by_key[key] = obj.id
            objects.append(obj)
        return by_key[key]

    for span in spans:
        add(entity_to_sdo(span, now, deterministic), sdo_type_for(span.label), span.text)
    for match in iocs:
        obj = ioc_to_sco(match, now, deterministic)
        add(obj, obj.type, _ioc_id_name(match.label, match.refanged_value))

    sro_seen: set[tuple[str, str, str]] = set()
    sros: list[StixObject] = []
    for rel in relations:
        src_wire, src_name = _endpoint_identity(rel.source)
        tgt_wire, tgt_name = _endpoint_identity(rel.target)
        src_id = by_key.get((src_wire, normalize_name(src_name)))
        tgt_id = by_key.get((tgt_wire, normalize_name(tgt_name)))
        if src_id is None or tgt_id is None:
            missing = rel.source.text if src_id is None else rel.target.text
            raise DanglingReferenceError(
                f"relation endpoint {missing!r} has no object in the bundle"
            )
        key = (src_id, rel.relation.wire_name, tgt_id)
        if key in sro_seen:
            continue
        sro_seen.add(key)
        sros.append(relation_to_sro(rel, src_id, tgt_id, now, deterministic))
    objects.extend(sros)

    if bundle_seed is not None:
        bundle_id = f"bundle--{uuid.uuid5(CTIX_NAMESPACE, f'bundle|{bundle_seed}')}"
    else:
        bundle_id = f"bundle--{uuid.uuid4()}"
    return StixBundle(id=bundle_id, objects=objects)


def serialize_bundle(bundle: StixBundle) -> str:
    """Canonical JSON: keys ordered type, id, then alphabetical; two-space
    indent; LF endings; trailing newline."""
    doc = {
        "type": "bundle",
        "id": bundle.id,
        "objects": [o.to_dict() for o in bundle.objects],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_bundle(text: str) -> StixBundle:
    doc = json.loads(text)
    objects = [
        StixObject(
            type=o["type"],
            id=o["id"],
            props={k: v for k, v in o.items() if k not in ("type", "id")},
        )
        for o in doc.get("objects", [])
    ]
    return StixBundle(id=doc["id"], objects=objects)


def validate_bundle(bundle: StixBundle) -> list[str]:
    """Referential-integrity and schema problems; empty list means valid."""
    problems = []
    if not bundle.id.startswith("bundle--"):
        problems.append(f"bundle id {bundle.id!r} lacks the bundle-- prefix")
    ids = [o.id for o in bundle.objects]
    if len(ids) != len(set(ids)):
        problems.append("duplicate object ids")
    id_set = set(ids)
    wire_names = {r.wire_name for r in RelationType}
    for obj in bundle.objects:
        if not obj.id.startswith(obj.type + "--"):
            problems.append(f"id {obj.id!r} does not match type {obj.type!r}")
        if obj.type in _SDO_WIRE_TYPES or obj.type == "relationship":
            if obj.props.get("spec_version") != SPEC_VERSION:
                problems.append(f"{obj.id}: missing spec_version {SPEC_VERSION}")
            if "created" not in obj.props or "modified" not in obj.props:
                problems.append(f"{obj.id}: missing timestamps")
        if obj.type == "relationship":
            if obj.props.get("relationship_type") not in wire_names:
                problems.append(
                    f"{obj.id}: relationship_type "
                    f"{obj.props.get('relationship_type')!r} not in the vocabulary"
                )
            for ref in ("source_ref", "target_ref"):
                if obj.props.get(ref) not in id_set:
                    problems.append(f"{obj.id}: {ref} does not resolve")
    return problems
