"""Span-level scoring of predictions against gold CoNLL annotations.

Exact-match criterion: a predicted span counts only when an identical
(start, end, class) span exists in the gold chunk. Classes with zero gold
support are excluded from the weighted average.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import TokenMismatchError
from .model import label_name
from .textproc import Chunk


@dataclass(frozen=True)
class ClassMetrics:
    support: int
    precision: float
    recall: float
    f1: float


@dataclass
class EvalReport:
    per_class: dict[str, ClassMetrics]
    weighted_f1: float
    totals: tuple[int, int, int]  # (true positives, false positives, false negatives)


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _check_alignment(gold: list[Chunk], predicted: list[Chunk]) -> None:
    index = 0
    for gi in range(max(len(gold), len(predicted))):
        if gi >= len(gold) or gi >= len(predicted):
            raise TokenMismatchError("chunk counts differ", index)
        g_toks = [t.text for t in gold[gi].tokens]
        p_toks = [t.text for t in predicted[gi].tokens]
        for g, p in zip(g_toks, p_toks):
            if g != p:
                raise TokenMismatchError(f"{g!r} vs {p!r}", index)
            index += 1
        if len(g_toks) != len(p_toks):
            raise TokenMismatchError("chunk token counts differ", index)


def evaluate(gold: list[Chunk], predicted: list[Chunk]) -> EvalReport:
    """Per-class precision/recall/F1 on exact (span, label) matches."""
    _check_alignment(gold, predicted)
    tp: Counter[str] = Counter()
    fp: Counter[str] = Counter()
    fn: Counter[str] = Counter()
    support: Counter[str] = Counter()
    for g_chunk, p_chunk in zip(gold, predicted):
        gold_keys = {s.key for s in g_chunk.annotations}
        pred_keys = {s.key for s in p_chunk.annotations}
        for start, end, label in gold_keys:
            support[label] += 1
            if (start, end, label) in pred_keys:
                tp[label] += 1
            else:
                fn[label] += 1
        for key in pred_keys - gold_keys:
            fp[key[2]] += 1

    per_class: dict[str, ClassMetrics] = {}
    for label in sorted(set(support) | set(fp)):
        t, f_pos = tp[label], fp[label]
        sup = support[label]
        precision = t / (t + f_pos) if t + f_pos else 0.0
        recall = t / sup if sup else 0.0
        per_class[label] = ClassMetrics(sup, precision, recall, _f1(precision, recall))

    scored = [(m.support, m.f1) for m in per_class.values() if m.support > 0]
    total_support = sum(s for s, _ in scored)
    weighted = sum(s * f for s, f in scored) / total_support if total_support else 0.0
    totals = (sum(tp.values()), sum(fp.values()), sum(fn.values()))
    return EvalReport(per_class=per_class, weighted_f1=weighted, totals=totals)


def format_report(report: EvalReport) -> str:
    """Fixed-width table: class, count, precision, recall, F1, plus the
    weighted-average row (zero-support classes shown but not averaged)."""
    width = max([len("Weighted average")] + [len(c) for c in report.per_class])
    lines = [f"{'Type':<{width}}  {'Count':>6}  {'P':>6}  {'R':>6}  {'F1':>6}"]
    for label, m in report.per_class.items():
        lines.append(
            f"{label:<{width}}  {m.support:>6}  {m.precision:>6.2f}  "
            f"{m.recall:>6.2f}  {m.f1:>6.2f}"
        )
    total = sum(m.support for m in report.per_class.values())
    lines.append(
        f"{'Weighted average':<{width}}  {total:>6}  {'':>6}  {'':>6}  "
        f"{report.weighted_f1:>6.2f}"
    )
    return "\n".join(lines)
