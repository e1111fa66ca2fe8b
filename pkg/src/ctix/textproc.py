"""Text ingestion: sanitization, chunking, offset recalibration, CoNLL I/O.

All offsets are character-based and half-open. Sanitization returns an offset
map so that annotations made against raw text can be carried into clean text;
chunking slices clean text into overlapping token windows and recalibration
moves document-global spans into chunk-local coordinates.
"""

from __future__ import annotations

import math
import re
import string
import unicodedata
from dataclasses import dataclass, field
from html.parser import HTMLParser

from .errors import (
    EmptyDocumentError,
    IllegalTagTransitionError,
    MalformedConllError,
    OverlappingAnnotationsError,
)
from .model import EntitySpan, EntityType, IocType, SpanSource, label_name

PUNCT_CHARS = set(string.punctuation) | set("«»“”‘’—–…¿¡·")

# Control/format characters other than newline are stripped; tab becomes a
# space so token boundaries survive.
_DROP_CATEGORIES = {"Cc", "Cf", "Cs"}


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int


@dataclass
class Document:
    """A report with its raw and sanitized text."""

    id: str
    raw_text: str
    clean_text: str
    provenance: str = ""


@dataclass
class Chunk:
    """A contiguous token window over a document.

    `text` is the chunk's slice of the document's clean text; token and
    annotation offsets are local to that slice.
    """

    doc_id: str
    index: int
    global_start: int
    text: str
    tokens: list[Token]
    annotations: list[EntitySpan] = field(default_factory=list)

    @property
    def global_end(self) -> int:
        return self.global_start + len(self.text)


def sanitize(raw: str) -> tuple[str, dict[int, int]]:
    """Clean a raw text and map surviving raw offsets to clean offsets.

    Removes control/format characters (newline survives, tab becomes a
    space) and collapses runs of 3+ identical separator characters to a
    single one. The returned map has an entry for every raw character that
    survives; it is monotone, and the whole operation is idempotent.
    """
    # Character-level pass: drop or substitute.
    kept: list[str] = []
    kept_raw_idx: list[int] = []
    for i, ch in enumerate(raw):
        if ch == "\n":
            out = ch
        elif ch == "\t":
            out = " "
        elif unicodedata.category(ch) in _DROP_CATEGORIES:
            continue
        else:
            out = ch
        kept.append(out)
        kept_raw_idx.append(i)

    # Run-collapse pass over the kept characters.
    clean: list[str] = []
    offset_map: dict[int, int] = {}
    n = len(kept)
    i = 0
    while i < n:
        ch = kept[i]
        j = i
        while j < n and kept[j] == ch:
            j += 1
        run = j - i
        collapsible = run >= 3 and not ch.isalnum()
        take = 1 if collapsible else run
        for k in range(i, i + take):
            offset_map[kept_raw_idx[k]] = len(clean)
            clean.append(kept[k])
        i = j
    return "".join(clean), offset_map


def tokenize(text: str) -> list[Token]:
    """Whitespace tokenization with leading/trailing punctuation split off."""
    tokens: list[Token] = []
    for m in re.finditer(r"\S+", text):
        s, e = m.start(), m.end()
        # Peel leading punctuation one character at a time.
        while e - s > 1 and text[s] in PUNCT_CHARS:
            tokens.append(Token(text[s], s, s + 1))
            s += 1
        trailing: list[Token] = []
        while e - s > 1 and text[e - 1] in PUNCT_CHARS:
            trailing.append(Token(text[e - 1], e - 1, e))
            e -= 1
        tokens.append(Token(text[s:e], s, e))
        tokens.extend(reversed(trailing))
    return tokens


def make_document(doc_id: str, raw_text: str, provenance: str = "") -> Document:
    clean, _ = sanitize(raw_text)
    return Document(id=doc_id, raw_text=raw_text, clean_text=clean, provenance=provenance)


def chunk_starts(n_tokens: int, window: int, stride: int) -> list[int]:
    """Token positions at which chunks begin: 0, stride, 2*stride, ...

    The sequence stops with the first window that reaches the last token, so
    every token is covered and no fully redundant tail window is emitted.
    """
    if n_tokens <= window:
        return [0]
    last = math.ceil((n_tokens - window) / stride)
    return [i * stride for i in range(last + 1)]


def chunk(doc: Document, window: int = 256, stride: int = 128) -> list[Chunk]:
    """Split a document into overlapping token-window chunks.

    Consecutive chunks overlap by window - stride tokens; every token lands
    in at least one chunk. Raises EmptyDocumentError when the document has
    no tokens.
    """
    if not (1 <= stride <= window):
        raise ValueError(f"need 1 <= stride <= window, got ({window}, {stride})")
    tokens = tokenize(doc.clean_text)
    if not tokens:
        raise EmptyDocumentError(f"document {doc.id!r} has no tokens")
    chunks = []
    for idx, start_tok in enumerate(chunk_starts(len(tokens), window, stride)):
        window_toks = tokens[start_tok : start_tok + window]
        g_start = window_toks[0].start
        g_end = window_toks[-1].end
        local = [Token(t.text, t.start - g_start, t.end - g_start) for t in window_toks]
        chunks.append(
            Chunk(
                doc_id=doc.id,
                index=idx,
                global_start=g_start,
                text=doc.clean_text[g_start:g_end],
                tokens=local,
            )
        )
    return chunks


def recalibrate(spans: list[EntitySpan], chunk: Chunk) -> list[EntitySpan]:
    """Project document-global spans into a chunk's local coordinates.

    A span is kept only when it lies entirely inside the chunk's character
    range; boundary-straddling spans are dropped for this chunk (an
    overlapping neighbor carries them whole when window/stride permit).
    """
    out = []
    for span in spans:
        if span.start >= chunk.global_start and span.end <= chunk.global_end:
            out.append(
                EntitySpan(
                    text=span.text,
                    start=span.start - chunk.global_start,
                    end=span.end - chunk.global_start,
                    label=span.label,
                    confidence=span.confidence,
                    source=span.source,
                )
            )
    return out


def _bio_tags(chunk: Chunk) -> list[str]:
    """Per-token BIO tags for a chunk's annotations."""
    spans = sorted(chunk.annotations, key=lambda s: (s.start, s.end))
    for a, b in zip(spans, spans[1:]):
        if b.start < a.end:
            raise OverlappingAnnotationsError(
                f"chunk {chunk.index}: spans {a.key} and {b.key} overlap"
            )
    tags = ["O"] * len(chunk.tokens)
    si = 0
    open_span = None
    for ti, tok in enumerate(chunk.tokens):
        while si < len(spans) and spans[si].end <= tok.start:
            si += 1
        if si < len(spans) and spans[si].start < tok.end and tok.start < spans[si].end:
            prefix = "I-" if open_span is spans[si] else "B-"
            tags[ti] = prefix + label_name(spans[si].label)
            open_span = spans[si]
        else:
            open_span = None
    return tags


def to_conll(chunks: list[Chunk]) -> str:
    """Serialize chunks to CoNLL-2003 style `TOKEN TAG` lines.

    One token per line, blank line between chunks, LF endings, trailing
    newline. Raises OverlappingAnnotationsError when a chunk's annotations
    are not disjoint.
    """
    blocks = []
    for ch in chunks:
        tags = _bio_tags(ch)
        blocks.append("\n".join(f"{t.text} {tag}" for t, tag in zip(ch.tokens, tags)))
    return "\n\n".join(blocks) + "\n" if blocks else ""


def _resolve_label(name: str) -> str:
    """Map a tag class name to its enum member when one exists."""
    try:
        return EntityType(name)
    except ValueError:
        pass
    try:
        return IocType(name)
    except ValueError:
        return name


def from_conll(text: str) -> list[Chunk]:
    """Parse CoNLL text produced by to_conll back into chunks.

    Reconstructed chunks join tokens with single spaces, so round-tripping
    preserves tokens and BIO tags exactly (not original character offsets).
    """
    chunks: list[Chunk] = []
    pending: list[tuple[str, str, int]] = []

    def flush():
        if not pending:
            return
        toks: list[Token] = []
        pos = 0
        for tok_text, _, _ in pending:
            toks.append(Token(tok_text, pos, pos + len(tok_text)))
            pos += len(tok_text) + 1
        chunk_text = " ".join(t for t, _, _ in pending)
        spans: list[EntitySpan] = []
        open_start = open_end = None
        open_label = None
        for tok, (_, tag, line_no) in zip(toks, pending):
            if tag == "O":
                kind, cls = "O", None
            else:
                kind, cls = tag[0], tag[2:]
            if kind == "I":
                if open_label is None or cls != open_label:
                    raise IllegalTagTransitionError(
                        f"I-{cls} without preceding B-{cls}/I-{cls}", line_no
                    )
                open_end = tok.end
                continue
            if open_label is not None:
                spans.append(
                    EntitySpan(
                        text=chunk_text[open_start:open_end],
                        start=open_start,
                        end=open_end,
                        label=_resolve_label(open_label),
                        confidence=1.0,
                        source=SpanSource.GOLD,
                    )
                )
                open_label = None
            if kind == "B":
                open_start, open_end, open_label = tok.start, tok.end, cls
        if open_label is not None:
            spans.append(
                EntitySpan(
                    text=chunk_text[open_start:open_end],
                    start=open_start,
                    end=open_end,
                    label=_resolve_label(open_label),
                    confidence=1.0,
                    source=SpanSource.GOLD,
                )
            )
        chunks.append(
            Chunk(
                doc_id="conll",
                index=len(chunks),
                global_start=0,
                text=chunk_text,
                tokens=toks,
                annotations=spans,
            )
        )
        pending.clear()

    for line_no, line in enumerate(text.split("\n"), 1):
        if line == "":
            flush()
            continue
        parts = line.split(" ")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise MalformedConllError(f"expected 'TOKEN TAG', got {line!r}", line_no)
        tag = parts[1]
        if tag != "O" and not re.fullmatch(r"[BI]-\S+", tag):
            raise MalformedConllError(f"illegal tag {tag!r}", line_no)
        pending.append((parts[0], tag, line_no))
    flush()
    return chunks


class _HtmlTextExtractor(HTMLParser):
    _SKIP = {"script", "style", "head", "title"}

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in self._SKIP:
            self._skip_depth += 1

    def handle_endtag(self, tag):
        if tag in self._SKIP and self._skip_depth:
            self._skip_depth -= 1

    def handle_data(self, data):
        if not self._skip_depth:
            self.parts.append(data)


def strip_html(markup: str) -> str:
    """Plain text from an HTML document: tags removed, entities decoded."""
    parser = _HtmlTextExtractor()
    parser.feed(markup)
    parser.close()
    return " ".join(" ".join(parser.parts).split())
