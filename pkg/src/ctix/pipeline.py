"""End-to-end orchestration: ingest documents, run every extraction stage,
and assemble one STIX bundle plus a run manifest."""

from __future__ import annotations

import hashlib
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import iocs as ioc_mod
from .backends import make_ner_backend, make_scorer_backend
from .errors import ConfigError, CtixError, EmptyDocumentError, IngestError
from .model import (
    EntitySpan,
    EntityType,
    SpanSource,
    SroTable,
    label_name,
    load_default_sro_table,
    load_sro_table,
)
from .ner import MergePolicy, OverlapRule, extract_supervised, extract_zeroshot, load_taxonomy, merge
from .relations import extract_relations
from .stix import StixBundle, build_bundle, serialize_bundle, validate_bundle
from .textproc import (
    Chunk,
    Document,
    chunk as chunk_doc,
    make_document,
    strip_html,
    to_conll,
    tokenize,
)

log = logging.getLogger("ctix")

MODES = ("supervised", "zeroshot", "both")


@dataclass
class PipelineConfig:
    window: int = 256
    stride: int = 128
    mode: str = "zeroshot"
    supervised_backend: str | None = "stub-lexicon"
    zeroshot_backend: str | None = "stub-lexicon"
    scorer_backend: str = "stub-verb"
    backend_url: str | None = None
    timeout: float = 30.0
    supervised_threshold: float = 0.5
    zeroshot_threshold: float = 0.5
    relation_threshold: float = 0.5
    overlap_rule: str = "HIGHEST_CONFIDENCE"
    batch_size: int = 32
    taxonomy_path: str | None = None
    sro_table_path: str | None = None
    deterministic_ids: bool = False
    pinned_timestamp: str | None = None
    bundle_seed: str | None = None
    workers: int | None = None
    out: str | None = None
    conll_out: str | None = None
    manifest_out: str | None = None

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (1 <= self.stride <= self.window):
            raise ConfigError("need 1 <= stride <= window")
        for name in ("supervised_threshold", "zeroshot_threshold", "relation_threshold"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.mode in ("supervised", "both") and not self.supervised_backend:
            raise ConfigError(f"mode {self.mode!r} requires a supervised backend")
        if self.mode in ("zeroshot", "both") and not self.zeroshot_backend:
            raise ConfigError(f"mode {self.mode!r} requires a zero-shot backend")
        if self.overlap_rule not in OverlapRule.__members__:
            raise ConfigError(f"unknown overlap_rule {self.overlap_rule!r}")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be positive")

    def config_hash(self) -> str:
        canon = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()[:16]

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        unknown = set(data) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass
class DocumentResult:
    doc_id: str
    path: str
    ok: bool
    error: str | None = None
    counts: dict = field(default_factory=dict)
    duration_ms: int = 0
    entities: list[EntitySpan] = field(default_factory=list)
    ioc_matches: list = field(default_factory=list)
    relations: list = field(default_factory=list)
    conll_chunks: list[Chunk] = field(default_factory=list)


@dataclass
class PipelineResult:
    bundle: StixBundle
    bundle_json: str
    manifest: dict
    documents: list[DocumentResult]
    conll_text: str

    @property
    def ok(self) -> bool:
        return all(d.ok for d in self.documents)


def read_document(path: str | Path) -> Document:
    """Ingest a plain-text or HTML report; other formats are rejected."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix in (".pdf", ".docx", ".doc"):
        raise IngestError(
            f"{path.name}: binary formats are not parsed natively; convert to "
            "text or HTML first (e.g. pdftotext, pandoc) and re-run"
        )
    try:
        raw = path.read_text(encoding="utf-8", errors="replace")
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc
    if suffix in (".html", ".htm") or raw.lstrip()[:1] == "<":
        raw = strip_html(raw)
    return make_document(path.stem, raw, provenance=str(path))


def _clock_from(config: PipelineConfig) -> datetime:
    if config.pinned_timestamp:
        dt = datetime.fromisoformat(config.pinned_timestamp.replace("Z", "+00:00"))
        return dt if dt.tzinfo else dt.replace(tzinfo=timezone.utc)
    return datetime.now(timezone.utc)


class _Stages:
    """Backends and tables resolved once per run, shared across documents."""

    def __init__(self, config: PipelineConfig):
        config.validate()
        self.config = config
        self.table: SroTable = (
            load_sro_table(config.sro_table_path)
            if config.sro_table_path
            else load_default_sro_table()
        )
        self.taxonomy = load_taxonomy(config.taxonomy_path) if config.taxonomy_path else load_taxonomy()
        self.supervised = (
            make_ner_backend(config.supervised_backend, supervised=True,
                             url=config.backend_url, timeout=config.timeout)
            if config.mode in ("supervised", "both")
            else None
        )
        self.zeroshot = (
            make_ner_backend(config.zeroshot_backend, supervised=False,
                             url=config.backend_url, timeout=config.timeout)
            if config.mode in ("zeroshot", "both")
            else None
        )
        self.scorer = make_scorer_backend(
            config.scorer_backend, url=config.backend_url, timeout=config.timeout
        )
        self.policy = MergePolicy(
            supervised_threshold=config.supervised_threshold,
            zeroshot_threshold=config.zeroshot_threshold,
            overlap_rule=OverlapRule(config.overlap_rule),
        )

    def backend_versions(self) -> dict:
        out = {"scorer": {"name": self.scorer.name, "version": getattr(self.scorer, "version", "?")}}
        for key, backend in (("supervised", self.supervised), ("zeroshot", self.zeroshot)):
            if backend is not None:
                out[key] = {"name": backend.name, "version": getattr(backend, "version", "?")}
        return out


def _dedup_spans(spans: list[EntitySpan]) -> list[EntitySpan]:
    """Collapse identical (offsets, label) spans from overlapping chunks,
    keeping the maximum confidence."""
    best: dict[tuple, EntitySpan] = {}
    for span in spans:
        cur = best.get(span.key)
        if cur is None or span.confidence > cur.confidence:
            best[span.key] = span
    return sorted(best.values(), key=lambda s: (s.start, s.end, label_name(s.label)))


@contextmanager
def _stage(name: str, doc_id: str, counts: dict, count_key: str | None = None):
    """Times a stage and prefixes its errors with stage name and document."""
    t0 = time.monotonic()
    try:
        yield
    except CtixError as exc:
        raise CtixError(
            f"stage {name} on document {doc_id!r}: {type(exc).__name__}: {exc}"
        ) from exc
    finally:
        ms = int((time.monotonic() - t0) * 1000)
        log.info("stage=%s doc=%s duration_ms=%d count=%s",
                 name, doc_id, ms, counts.get(count_key, "-"))


def process_document(doc: Document, stages: _Stages) -> DocumentResult:
    """Run sanitize -> IOCs -> mask -> chunk -> NER -> merge -> relations."""
    config = stages.config
    t0 = time.monotonic()
    result = DocumentResult(doc_id=doc.id, path=doc.provenance, ok=True)
    counts = result.counts
    counts["chars_raw"] = len(doc.raw_text)
    counts["chars_clean"] = len(doc.clean_text)

    with _stage("iocs", doc.id, counts, "iocs"):
        matches = ioc_mod.find_iocs(doc.clean_text)
        counts["iocs"] = len(matches)
        masked_text, records = ioc_mod.mask(doc.clean_text, matches)
    with _stage("chunk", doc.id, counts, "chunks"):
        if not tokenize(masked_text):
            raise EmptyDocumentError(f"document {doc.id!r} has no tokens")
        # Table-like IOC line runs feed the IOC finder only, never NER.
        chunks: list[Chunk] = []
        for seg_start, seg_end in ioc_mod.ner_segments(masked_text):
            seg_text = masked_text[seg_start:seg_end]
            if not tokenize(seg_text):
                continue
            sub = Document(id=doc.id, raw_text=seg_text, clean_text=seg_text,
                           provenance=doc.provenance)
            for c in chunk_doc(sub, config.window, config.stride):
                chunks.append(Chunk(doc.id, len(chunks), c.global_start + seg_start,
                                    c.text, c.tokens, []))
        counts["chunks"] = len(chunks)

    def to_clean(span: EntitySpan, chunk: Chunk) -> tuple[EntitySpan, tuple[int, int]] | None:
        m_start = span.start + chunk.global_start
        m_end = span.end + chunk.global_start
        translated = ioc_mod.masked_to_original_span(records, m_start, m_end)
        if translated is None:
            return None
        c_start, c_end = translated
        return (
            EntitySpan(
                text=doc.clean_text[c_start:c_end],
                start=c_start,
                end=c_end,
                label=span.label,
                confidence=span.confidence,
                source=span.source,
            ),
            (m_start, m_end),
        )

    supervised_spans: list[EntitySpan] = []
    zeroshot_spans: list[EntitySpan] = []
    masked_pos: dict[tuple, tuple[int, int]] = {}
    with _stage("ner", doc.id, counts, "merged_spans"):
        for ch in chunks:
            if stages.supervised is not None:
                for span in extract_supervised(ch, stages.supervised):
                    mapped = to_clean(span, ch)
                    if mapped:
                        supervised_spans.append(mapped[0])
                        masked_pos[mapped[0].key] = mapped[1]
            if stages.zeroshot is not None:
                for span in extract_zeroshot(ch, stages.zeroshot, stages.taxonomy):
                    mapped = to_clean(span, ch)
                    if mapped:
                        zeroshot_spans.append(mapped[0])
                        masked_pos[mapped[0].key] = mapped[1]
        supervised_spans = _dedup_spans(supervised_spans)
        zeroshot_spans = _dedup_spans(zeroshot_spans)
        counts["supervised_spans"] = len(supervised_spans)
        counts["zeroshot_spans"] = len(zeroshot_spans)

        ioc_spans = [m.span for m in matches]
        merged = merge(supervised_spans, zeroshot_spans, ioc_spans, stages.policy)
        counts["merged_spans"] = len(merged)

    with _stage("relations", doc.id, counts, "relations"):
        surfaces = {m.span.key: m.refanged_value for m in matches}
        re_chunks = []
        for ch in chunks:
            c_start = ioc_mod.masked_to_original_pos(records, ch.global_start)
            c_end = ioc_mod.masked_to_original_pos(records, ch.global_end)
            in_range = [s for s in merged if s.start >= c_start and s.end <= c_end]
            re_chunks.append((doc.clean_text[c_start:c_end], in_range))
        relations = extract_relations(
            re_chunks,
            stages.table,
            stages.scorer,
            threshold=config.relation_threshold,
            batch_size=config.batch_size,
            surfaces=surfaces,
        )
        counts["relations"] = len(relations)

    entity_spans = [s for s in merged if s.source is not SpanSource.IOC_FINDER]
    result.entities = entity_spans
    result.ioc_matches = matches
    result.relations = relations
    result.conll_chunks = _annotated_chunks(chunks, entity_spans, masked_pos)
    result.duration_ms = int((time.monotonic() - t0) * 1000)
    return result


def _annotated_chunks(
    chunks: list[Chunk],
    entity_spans: list[EntitySpan],
    masked_pos: dict[tuple, tuple[int, int]],
) -> list[Chunk]:
    """Masked chunks annotated with the merged entity spans (for CoNLL dumps)."""
    out = []
    for ch in chunks:
        anns = []
        for span in entity_spans:
            pos = masked_pos.get(span.key)
            if pos is None:
                continue
            m_start, m_end = pos
            if m_start >= ch.global_start and m_end <= ch.global_end:
                anns.append(
                    EntitySpan(
                        text=ch.text[m_start - ch.global_start : m_end - ch.global_start],
                        start=m_start - ch.global_start,
                        end=m_end - ch.global_start,
                        label=span.label,
                        confidence=span.confidence,
                        source=span.source,
                    )
                )
        out.append(Chunk(ch.doc_id, ch.index, ch.global_start, ch.text, ch.tokens, anns))
    return out


def run_pipeline(config: PipelineConfig, inputs: list[str | Path]) -> PipelineResult:
    """Process every input document and emit one bundle plus a manifest.

    A failing document is recorded in the manifest and does not abort the
    batch; output order follows input order.
    """
    stages = _Stages(config)
    now = _clock_from(config)

    def run_one(path: str | Path) -> DocumentResult:
        t0 = time.monotonic()
        try:
            doc = read_document(path)
            result = process_document(doc, stages)
        except (CtixError, OSError) as exc:
            result = DocumentResult(
                doc_id=Path(path).stem, path=str(path), ok=False,
                error=f"{type(exc).__name__}: {exc}",
                duration_ms=int((time.monotonic() - t0) * 1000),
            )
            log.error("stage=pipeline doc=%s error=%s", result.doc_id, result.error)
        return result

    workers = config.workers or None
    if len(inputs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            documents = list(pool.map(run_one, inputs))
    else:
        documents = [run_one(p) for p in inputs]

    all_entities: list[EntitySpan] = []
    all_matches = []
    all_relations = []
    conll_chunks: list[Chunk] = []
    for res in documents:
        all_entities.extend(res.entities)
        all_matches.extend(res.ioc_matches)
        all_relations.extend(res.relations)
        conll_chunks.extend(res.conll_chunks)

    bundle = build_bundle(
        all_entities,
        all_matches,
        all_relations,
        now=now,
        deterministic=config.deterministic_ids,
        bundle_seed=config.bundle_seed,
    )
    problems = validate_bundle(bundle)
    if problems:  # pragma: no cover - construction guarantees validity
        raise CtixError(f"emitted bundle failed validation: {problems}")
    manifest = {
        "config_hash": config.config_hash(),
        "config": asdict(config),
        "backends": stages.backend_versions(),
        "documents": [
            {
                "doc_id": d.doc_id,
                "path": d.path,
                "ok": d.ok,
                "error": d.error,
                "counts": d.counts,
                "duration_ms": d.duration_ms,
            }
            for d in documents
        ],
        "totals": {
            "documents": len(documents),
            "failures": sum(1 for d in documents if not d.ok),
            "objects": len(bundle.objects),
        },
    }
    return PipelineResult(
        bundle=bundle,
        bundle_json=serialize_bundle(bundle),
        manifest=manifest,
        documents=documents,
        conll_text=to_conll(conll_chunks),
    )
