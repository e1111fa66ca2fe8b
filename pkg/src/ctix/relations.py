"""Zero-shot relation extraction: enumerate type-compatible entity pairs,
template candidate sentences, score them, threshold, and disambiguate."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from itertools import groupby, islice

from .errors import MalformedBackendOutputError, UnscoredCandidateError
from .model import EntitySpan, Relation, RelationType, SroTable, label_name

Surfaces = dict[tuple[int, int, str], str]


@dataclass(frozen=True)
class CandidateRelation:
    """A directed relation hypothesis between two spans of one chunk."""

    source: EntitySpan
    relation: RelationType
    target: EntitySpan
    hypothesis: str
    premise: str
    score: float | None = None


def render_hypothesis(source_text: str, relation: RelationType, target_text: str) -> str:
    return f"{source_text} {relation.verb_phrase} {target_text}"


def _surface(span: EntitySpan, surfaces: Surfaces | None) -> str:
    if surfaces:
        return surfaces.get(span.key, span.text)
    return span.text


def generate_candidates(
    chunk_text: str,
    spans: list[EntitySpan],
    table: SroTable,
    surfaces: Surfaces | None = None,
) -> list[CandidateRelation]:
    """One candidate per ordered span pair and table-allowed relation.

    Output order is deterministic: source span position, target span
    position, then the table's relation order. `surfaces` substitutes
    display text per span key (IOC spans use their refanged value).
    """
    unique: list[EntitySpan] = []
    seen = set()
    for span in sorted(spans, key=lambda s: (s.start, s.end, label_name(s.label))):
        if span.key not in seen:
            seen.add(span.key)
            unique.append(span)
    out: list[CandidateRelation] = []
    for a in unique:
        for b in unique:
            if a.key == b.key:
                continue
            for rel in table.allowed(a.label, b.label):
                out.append(
                    CandidateRelation(
                        source=a,
                        relation=rel,
                        target=b,
                        hypothesis=render_hypothesis(
                            _surface(a, surfaces), rel, _surface(b, surfaces)
                        ),
                        premise=chunk_text,
                    )
                )
    return out


def score_candidates(
    cands: list[CandidateRelation], backend, batch_size: int = 32
) -> list[CandidateRelation]:
    """Attach backend scores, batching hypotheses per premise.

    Scores come back index-aligned; batch size never changes results.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be positive")
    out: list[CandidateRelation] = []
    for premise, group in groupby(cands, key=lambda c: c.premise):
        group = list(group)
        it = iter(group)
        while batch := list(islice(it, batch_size)):
            scores = backend.score(premise, [c.hypothesis for c in batch])
            if len(scores) != len(batch):
                raise MalformedBackendOutputError(
                    f"scorer returned {len(scores)} scores for {len(batch)} hypotheses"
                )
            for cand, score in zip(batch, scores):
                score = float(score)
                if math.isnan(score) or not (0.0 <= score <= 1.0):
                    raise MalformedBackendOutputError(f"score {score!r} outside [0, 1]")
                out.append(replace(cand, score=score))
    return out


def validate(cands: list[CandidateRelation], threshold: float) -> list[CandidateRelation]:
    """Keep candidates whose score meets the threshold (inclusive)."""
    for c in cands:
        if c.score is None:
            raise UnscoredCandidateError(f"candidate {c.hypothesis!r} has no score")
    return [c for c in cands if c.score >= threshold]


def disambiguate(cands: list[CandidateRelation]) -> list[Relation]:
    """Resolve pairs where the same relation survived in both directions.

    The higher-scoring direction wins; exact ties go to the direction whose
    (source text, target text) pair sorts first. Everything else passes
    through unchanged, in input order.
    """
    groups: dict[tuple, list[CandidateRelation]] = {}
    for c in cands:
        pair = tuple(sorted((c.source.key, c.target.key)))
        groups.setdefault((pair, c.relation), []).append(c)
    winners = {
        id(min(group, key=lambda c: (-c.score, (c.source.text, c.target.text))))
        for group in groups.values()
    }
    return [
        Relation(source=c.source, relation=c.relation, target=c.target, score=c.score)
        for c in cands
        if id(c) in winners
    ]


def extract_relations(
    chunks: list[tuple[str, list[EntitySpan]]],
    table: SroTable,
    backend,
    threshold: float = 0.5,
    batch_size: int = 32,
    surfaces: Surfaces | None = None,
) -> list[Relation]:
    """Run the per-chunk pipeline and deduplicate across chunks.

    `chunks` pairs each premise text with the spans it contains; span
    offsets double as the cross-chunk identity, so callers pass spans in
    document-global coordinates. Duplicates keep the maximum score.
    """
    best: dict[tuple, Relation] = {}
    order: list[tuple] = []
    for chunk_text, spans in chunks:
        cands = generate_candidates(chunk_text, spans, table, surfaces)
        scored = score_candidates(cands, backend, batch_size)
        for rel in disambiguate(validate(scored, threshold)):
            key = (rel.source.key, rel.relation, rel.target.key)
            if key not in best:
                best[key] = rel
                order.append(key)
            elif rel.score > best[key].score:
                best[key] = rel
    return [best[k] for k in order]
