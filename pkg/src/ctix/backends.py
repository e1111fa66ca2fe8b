"""NER and relation-scorer backends.

Two families: bundled deterministic stubs (gazetteer matcher over a small
lexicon, verb-template keyword scorer) for tests and offline runs, and thin
HTTP clients speaking the sidecar wire protocol. All backends are stateless
after construction and safe for concurrent calls.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import BackendUnavailableError, ConfigError, MalformedBackendOutputError
from .model import RelationType
from .textproc import tokenize

RawSpan = tuple[int, int, str, float]

_LEXICON_PATH = Path(__file__).parent / "data" / "stub_lexicon.txt"


@dataclass(frozen=True)
class LexiconEntry:
    surface: str
    parent: str
    child: str
    confidence: float


def load_lexicon(path: str | Path = _LEXICON_PATH) -> list[LexiconEntry]:
    entries = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        surface, parent, child, conf = line.split("\t")
        entries.append(LexiconEntry(surface, parent, child, float(conf)))
    return entries


class _LexiconMatcher:
    """Finds lexicon surfaces as token sequences; longest match wins."""

    def __init__(self, entries: list[LexiconEntry]):
        self._by_first: dict[str, list[tuple[tuple[str, ...], LexiconEntry]]] = {}
        for entry in entries:
            toks = tuple(t.text for t in tokenize(entry.surface))
            self._by_first.setdefault(toks[0], []).append((toks, entry))
        for options in self._by_first.values():
            options.sort(key=lambda o: -len(o[0]))

    def match_tokens(self, tokens) -> list[tuple[int, int, LexiconEntry]]:
        """Non-overlapping (first_index, token_count, entry) hits, left to right."""
        hits = []
        i = 0
        while i < len(tokens):
            hit = None
            for toks, entry in self._by_first.get(tokens[i].text, ()):
                if tuple(t.text for t in tokens[i : i + len(toks)]) == toks:
                    hit = (i, len(toks), entry)
                    break
            if hit:
                hits.append(hit)
                i += hit[1]
            else:
                i += 1
        return hits


class StubSupervisedBackend:
    """Token-classification stub: emits one BIO-tagged item per token."""

    name = "stub-lexicon"
    version = "1"

    def __init__(self, lexicon: list[LexiconEntry] | None = None):
        self._matcher = _LexiconMatcher(lexicon or load_lexicon())

    def predict(self, text: str, labels: list[str]) -> list[RawSpan]:
        allowed = set(labels)
        tokens = tokenize(text)
        tags = [("O", 0.99)] * len(tokens)
        for i, count, entry in self._matcher.match_tokens(tokens):
            for j in range(count):
                prefix = "B-" if j == 0 else "I-"
                tags[i + j] = (prefix + entry.parent, entry.confidence)
        out: list[RawSpan] = []
        for tok, (tag, conf) in zip(tokens, tags):
            if tag not in allowed:
                tag, conf = "O", 0.99
            out.append((tok.start, tok.end, tag, conf))
        return out


class StubZeroShotBackend:
    """Span-prediction stub: returns lexicon hits whose child label was asked."""

    name = "stub-lexicon"
    version = "1"

    def __init__(self, lexicon: list[LexiconEntry] | None = None):
        self._matcher = _LexiconMatcher(lexicon or load_lexicon())

    def predict(self, text: str, labels: list[str]) -> list[RawSpan]:
        wanted = set(labels)
        tokens = tokenize(text)
        out: list[RawSpan] = []
        for i, count, entry in self._matcher.match_tokens(tokens):
            if entry.child in wanted:
                out.append((tokens[i].start, tokens[i + count - 1].end, entry.child,
                            entry.confidence))
        return out


class StubVerbScorer:
    """Keyword scorer: 0.9 when both endpoints of the templated sentence
    occur in the premise, 0.1 otherwise."""

    name = "stub-verb"
    version = "1"

    _VERBS = sorted((r.verb_phrase for r in RelationType), key=len, reverse=True)

    def score(self, premise: str, hypotheses: list[str]) -> list[float]:
        scores = []
        for hyp in hypotheses:
            subject = obj = None
            for verb in self._VERBS:
                sep = f" {verb} "
                if sep in hyp:
                    subject, obj = hyp.split(sep, 1)
                    break
            if subject and obj and subject in premise and obj in premise:
                scores.append(0.9)
            else:
                scores.append(0.1)
        return scores


class RemoteNerBackend:
    """Client for the sidecar's span-prediction endpoint."""

    name = "remote"

    def __init__(self, base_url: str, timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.version = base_url

    def predict(self, text: str, labels: list[str]) -> list[RawSpan]:
        try:
            resp = requests.post(
                f"{self.base_url}/v1/ner",
                json={"text": text, "labels": labels, "threshold": 0.0},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise BackendUnavailableError(f"NER backend at {self.base_url}: {exc}") from exc
        if resp.status_code != 200:
            raise BackendUnavailableError(
                f"NER backend returned HTTP {resp.status_code}: {resp.text[:200]}"
            )
        try:
            entities = resp.json()["entities"]
            return [(e["start"], e["end"], e["label"], float(e["score"])) for e in entities]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedBackendOutputError(f"bad NER response: {exc}") from exc


class RemoteScorer:
    """Client for the sidecar's premise/hypothesis scoring endpoint."""

    name = "remote"

    def __init__(self, base_url: str, timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.version = base_url

    def score(self, premise: str, hypotheses: list[str]) -> list[float]:
        try:
            resp = requests.post(
                f"{self.base_url}/v1/score",
                json={"premise": premise, "hypotheses": hypotheses},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise BackendUnavailableError(f"scorer at {self.base_url}: {exc}") from exc
        if resp.status_code != 200:
            raise BackendUnavailableError(
                f"scorer returned HTTP {resp.status_code}: {resp.text[:200]}"
            )
        try:
            return [float(s) for s in resp.json()["scores"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedBackendOutputError(f"bad score response: {exc}") from exc


def resolve_backend_url(explicit: str | None) -> str | None:
    return explicit or os.environ.get("CTIX_BACKEND_URL")


def make_ner_backend(name: str, *, supervised: bool, url: str | None = None,
                     timeout: float = 30.0):
    """Instantiate an NER backend by configured name."""
    if name == "stub-lexicon":
        return StubSupervisedBackend() if supervised else StubZeroShotBackend()
    if name == "remote":
        url = resolve_backend_url(url)
        if not url:
            raise ConfigError("remote backend requires --backend-url or CTIX_BACKEND_URL")
        return RemoteNerBackend(url, timeout)
    raise ConfigError(f"unknown NER backend {name!r}")


def make_scorer_backend(name: str, *, url: str | None = None, timeout: float = 30.0):
    """Instantiate a relation scorer by configured name."""
    if name == "stub-verb":
        return StubVerbScorer()
    if name == "remote":
        url = resolve_backend_url(url)
        if not url:
            raise ConfigError("remote scorer requires --backend-url or CTIX_BACKEND_URL")
        return RemoteScorer(url, timeout)
    raise ConfigError(f"unknown scorer backend {name!r}")
