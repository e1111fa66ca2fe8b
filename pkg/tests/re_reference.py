"""Independent brute-force reference for the relation-extraction algorithm.

Single pass, no code shared with the library implementation: enumerate every
directed typed pair against the raw triple set, score with the injected rule,
threshold, resolve both-direction conflicts, and deduplicate keeping maxima.
"""

from __future__ import annotations

from ctix.model import RelationType, label_name


def reference_extract(chunks, triples, score_fn, threshold, surfaces=None):
    """Expected result set: {(source key, relation, target key, score)}."""
    surfaces = surfaces or {}
    survivors = []
    for chunk_text, spans in chunks:
        unique = {}
        for s in spans:
            unique.setdefault((s.start, s.end, label_name(s.label)), s)
        scored = {}
        for ka, a in unique.items():
            for kb, b in unique.items():
                if ka == kb:
                    continue
                for rel in RelationType:
                    if (label_name(a.label), rel.value, label_name(b.label)) not in triples:
                        continue
                    a_text = surfaces.get(ka, a.text)
                    b_text = surfaces.get(kb, b.text)
                    hypothesis = f"{a_text} {rel.verb_phrase} {b_text}"
                    scored[(ka, rel, kb)] = (
                        score_fn(chunk_text, hypothesis),
                        (a_text, b_text),
                    )
        for (ka, rel, kb), (score, texts) in scored.items():
            if score < threshold:
                continue
            reverse = scored.get((kb, rel, ka))
            if reverse is not None and reverse[0] >= threshold:
                r_score, r_texts = reverse
                if r_score > score:
                    continue
                if r_score == score and r_texts < texts:
                    continue
            survivors.append((ka, rel, kb, score))
    best = {}
    for ka, rel, kb, score in survivors:
        key = (ka, rel, kb)
        best[key] = max(best.get(key, 0.0), score)
    return {(ka, rel, kb, score) for (ka, rel, kb), score in best.items()}
