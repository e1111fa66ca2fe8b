"""Entity extraction over masked chunks: supervised BIO decoding, zero-shot
taxonomy mapping, and merging of the two outputs with the IOC spans."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import MalformedBackendOutputError, UnknownChildLabelError
from .model import EntitySpan, EntityType, SpanSource, label_name
from .textproc import Chunk

_TAXONOMY_PATH = Path(__file__).parent / "data" / "taxonomy.txt"

BIO_LABELS = tuple(
    [f"{p}-{e.value}" for e in EntityType for p in ("B", "I")] + ["O"]
)


class OverlapRule(str, Enum):
    HIGHEST_CONFIDENCE = "HIGHEST_CONFIDENCE"
    PREFER_SUPERVISED = "PREFER_SUPERVISED"


@dataclass(frozen=True)
class MergePolicy:
    supervised_threshold: float = 0.5
    zeroshot_threshold: float = 0.5
    overlap_rule: OverlapRule = OverlapRule.HIGHEST_CONFIDENCE

    def __post_init__(self):
        for t in (self.supervised_threshold, self.zeroshot_threshold):
            if math.isnan(t) or not (0.0 <= t <= 1.0):
                raise ValueError(f"threshold {t!r} outside [0, 1]")


class TaxonomyMap:
    """Parent class -> natural-language child labels, child -> parent inverse."""

    def __init__(self, parents: dict[str, list[str]]):
        known = {e.value for e in EntityType}
        self.parents: dict[str, list[str]] = {}
        self.child_to_parent: dict[str, str] = {}
        for parent, children in parents.items():
            if not children:
                raise ValueError(f"taxonomy parent {parent!r} has no children")
            if parent not in known:
                warnings.warn(
                    f"taxonomy parent {parent!r} is outside the core entity classes; "
                    "its spans pass through with this label",
                    stacklevel=2,
                )
            self.parents[parent] = list(children)
            for child in children:
                if child in self.child_to_parent:
                    raise ValueError(
                        f"child label {child!r} maps to both "
                        f"{self.child_to_parent[child]!r} and {parent!r}"
                    )
                self.child_to_parent[child] = parent
        missing = known - set(self.parents)
        if missing:
            raise ValueError(f"taxonomy lacks children for {sorted(missing)}")

    @property
    def all_children(self) -> list[str]:
        return sorted(self.child_to_parent)

    def parent_of(self, child: str) -> str:
        return self.child_to_parent[child]


def load_taxonomy(path: str | Path = _TAXONOMY_PATH) -> TaxonomyMap:
    """Parse a `PARENT: child1, child2, ...` taxonomy file."""
    parents: dict[str, list[str]] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parent, _, rest = line.partition(":")
        children = [c.strip() for c in rest.split(",") if c.strip()]
        parents[parent.strip()] = children
    return TaxonomyMap(parents)


def _resolve_parent(name: str) -> str:
    try:
        return EntityType(name)
    except ValueError:
        return name


def _check_item(item, text_len: int):
    start, end, label, conf = item
    if not (0 <= start < end <= text_len):
        raise MalformedBackendOutputError(f"span [{start}, {end}) out of range")
    if math.isnan(conf) or not (0.0 <= conf <= 1.0):
        raise MalformedBackendOutputError(f"confidence {conf!r} outside [0, 1]")
    return start, end, label, conf


def extract_supervised(chunk: Chunk, backend) -> list[EntitySpan]:
    """Decode a token-classification backend's BIO output into spans.

    Span confidence is the minimum token confidence; a leading I- tag is
    repaired to B- rather than rejected.
    """
    items = backend.predict(chunk.text, list(BIO_LABELS))
    spans: list[EntitySpan] = []
    open_tokens: list[tuple[int, int, float]] = []
    open_class: str | None = None

    def close():
        nonlocal open_class
        if open_class is not None and open_tokens:
            start = open_tokens[0][0]
            end = open_tokens[-1][1]
            spans.append(
                EntitySpan(
                    text=chunk.text[start:end],
                    start=start,
                    end=end,
                    label=_resolve_parent(open_class),
                    confidence=min(t[2] for t in open_tokens),
                    source=SpanSource.SUPERVISED_NER,
                )
            )
        open_tokens.clear()
        open_class = None

    for item in sorted(items, key=lambda it: (it[0], it[1])):
        start, end, tag, conf = _check_item(item, len(chunk.text))
        if tag == "O":
            close()
            continue
        if len(tag) < 3 or tag[1] != "-" or tag[0] not in "BI":
            raise MalformedBackendOutputError(f"unknown tag {tag!r}")
        kind, cls = tag[0], tag[2:]
        if f"B-{cls}" not in BIO_LABELS:
            raise MalformedBackendOutputError(f"unknown class in tag {tag!r}")
        if kind == "B" or cls != open_class:
            close()
            open_class = cls
        open_tokens.append((start, end, conf))
    close()
    return spans


def extract_zeroshot(chunk: Chunk, backend, taxonomy: TaxonomyMap) -> list[EntitySpan]:
    """Query a span-prediction backend with all child labels and map each hit
    to its parent class, collapsing duplicates by maximum confidence."""
    items = backend.predict(chunk.text, taxonomy.all_children)
    best: dict[tuple[int, int, str], float] = {}
    order: list[tuple[int, int, str]] = []
    for item in items:
        start, end, child, conf = _check_item(item, len(chunk.text))
        if child not in taxonomy.child_to_parent:
            raise UnknownChildLabelError(f"backend returned unknown label {child!r}")
        parent = taxonomy.parent_of(child)
        key = (start, end, parent)
        if key not in best:
            order.append(key)
            best[key] = conf
        else:
            best[key] = max(best[key], conf)
    return [
        EntitySpan(
            text=chunk.text[start:end],
            start=start,
            end=end,
            label=_resolve_parent(parent),
            confidence=best[(start, end, parent)],
            source=SpanSource.ZERO_SHOT_NER,
        )
        for start, end, parent in sorted(order)
    ]


def _threshold_for(span: EntitySpan, policy: MergePolicy) -> float:
    if span.source is SpanSource.ZERO_SHOT_NER:
        return policy.zeroshot_threshold
    return policy.supervised_threshold


def merge(
    supervised: list[EntitySpan],
    zeroshot: list[EntitySpan],
    iocs: list[EntitySpan],
    policy: MergePolicy,
) -> list[EntitySpan]:
    """Combine extractor outputs into one non-overlapping span set.

    IOC spans are kept unconditionally and always win overlaps. Overlap
    winners among NER spans are chosen by the policy's rule before the
    per-source thresholds filter them, which keeps the surviving set
    monotone in both thresholds: raising a threshold only removes spans.
    """
    if policy.overlap_rule is OverlapRule.PREFER_SUPERVISED:
        def rank(s: EntitySpan):
            return (
                0 if s.source is SpanSource.SUPERVISED_NER else 1,
                -s.confidence,
                s.start - s.end,
                s.start,
                s.end,
                label_name(s.label),
            )
    else:
        def rank(s: EntitySpan):
            return (
                -s.confidence,
                s.start - s.end,
                0 if s.source is SpanSource.SUPERVISED_NER else 1,
                s.start,
                s.end,
                label_name(s.label),
            )

    kept: list[EntitySpan] = sorted(iocs, key=lambda s: (s.start, s.end))
    for span in sorted(supervised + zeroshot, key=rank):
        if all(span.end <= k.start or span.start >= k.end for k in kept):
            kept.append(span)
    out = [
        s
        for s in kept
        if s.source is SpanSource.IOC_FINDER or s.confidence >= _threshold_for(s, policy)
    ]
    out.sort(key=lambda s: (s.start, s.end))
    return out
