"""Inference engines behind the sidecar endpoints.

Engine choice is configuration: "stub" engines are deterministic and
dependency-free (contract testing, offline runs); the real engines load a
GLiNER checkpoint for span prediction and a cross-encoder for pair scoring.
Every engine maps its scores into [0, 1].
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass


@dataclass(frozen=True)
class NerSpan:
    start: int
    end: int
    label: str
    score: float


class StubNerEngine:
    """Marks case-insensitive occurrences of each requested label string."""

    mapping = "exact-label-occurrence"

    def __init__(self, name: str = "stub"):
        self.version = f"{name} ({self.mapping})"

    def predict(self, text: str, labels: list[str]) -> list[NerSpan]:
        spans = []
        for label in labels:
            if not label:
                continue
            for m in re.finditer(re.escape(label), text, re.IGNORECASE):
                spans.append(NerSpan(m.start(), m.end(), label, 0.9))
        spans.sort(key=lambda s: (s.start, s.end, s.label))
        return spans


class StubScoreEngine:
    """Token-overlap scoring: Jaccard similarity of lowercased word sets."""

    mapping = "jaccard-token-overlap"

    def __init__(self, name: str = "stub"):
        self.version = f"{name} ({self.mapping})"

    def score(self, premise: str, hypotheses: list[str]) -> list[float]:
        p_tokens = set(premise.lower().split())
        out = []
        for hyp in hypotheses:
            h_tokens = set(hyp.lower().split())
            union = p_tokens | h_tokens
            out.append(len(p_tokens & h_tokens) / len(union) if union else 0.0)
        return out


class GlinerNerEngine:
    """Zero-shot span prediction with a GLiNER checkpoint."""

    mapping = "gliner-span-scores"

    def __init__(self, model_name: str):
        try:
            from gliner import GLiNER
        except ImportError as exc:  # pragma: no cover - environment dependent
            raise RuntimeError(
                "the gliner package is required for a GLiNER NER engine; "
                "install the 'models' extra"
            ) from exc
        self._model = GLiNER.from_pretrained(model_name)
        self.version = f"{model_name} ({self.mapping})"

    def predict(self, text: str, labels: list[str]) -> list[NerSpan]:
        raw = self._model.predict_entities(text, labels, threshold=0.0)
        spans = []
        for entity in raw:
            score = min(1.0, max(0.0, float(entity["score"])))
            spans.append(NerSpan(int(entity["start"]), int(entity["end"]),
                                 str(entity["label"]), score))
        spans.sort(key=lambda s: (s.start, s.end, s.label))
        return spans


class CrossEncoderScoreEngine:
    """Premise/hypothesis scoring with a sentence-transformers cross-encoder.

    NLI heads (3 labels) report the softmax probability of the entailment
    class; single-logit heads go through a logistic transform. The mapping
    is part of the version string surfaced by the health endpoint.
    """

    def __init__(self, model_name: str):
        try:
            from sentence_transformers import CrossEncoder
        except ImportError as exc:  # pragma: no cover - environment dependent
            raise RuntimeError(
                "sentence-transformers is required for a cross-encoder engine; "
                "install the 'models' extra"
            ) from exc
        self._model = CrossEncoder(model_name)
        config = self._model.model.config
        self._entailment_index = None
        if getattr(config, "num_labels", 1) > 1:
            id2label = {int(k): v.lower() for k, v in config.id2label.items()}
            for idx, label in id2label.items():
                if "entail" in label:
                    self._entailment_index = idx
                    break
            if self._entailment_index is None:
                self._entailment_index = 0
            self.mapping = f"softmax-entailment[{self._entailment_index}]"
        else:
            self.mapping = "sigmoid-logit"
        self.version = f"{model_name} ({self.mapping})"

    def score(self, premise: str, hypotheses: list[str]) -> list[float]:
        pairs = [(premise, hyp) for hyp in hypotheses]
        logits = self._model.predict(pairs, apply_softmax=False, convert_to_numpy=True)
        out = []
        for row in logits:
            if self._entailment_index is not None:
                exps = [math.exp(v - max(row)) for v in row]
                prob = exps[self._entailment_index] / sum(exps)
            else:
                value = float(row if not hasattr(row, "__len__") else row[0])
                prob = 1.0 / (1.0 + math.exp(-value))
            out.append(min(1.0, max(0.0, float(prob))))
        return out


def make_ner_engine(model_name: str):
    if model_name == "stub":
        return StubNerEngine()
    return GlinerNerEngine(model_name)


def make_score_engine(model_name: str):
    if model_name == "stub":
        return StubScoreEngine()
    return CrossEncoderScoreEngine(model_name)
