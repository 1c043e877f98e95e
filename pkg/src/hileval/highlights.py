"""Per-annotator highlights: budget validation, token weights and coverage.

A highlight is a set of token-index spans one annotator marked as salient,
capped at K tokens.  All downstream weighting (per-token weights, heatmap
intensities, n-gram weights) starts from the validated sets collected here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .text import TokenizedText

__all__ = [
    "HighlightError",
    "BudgetExceeded",
    "OutOfBounds",
    "EmptyHighlight",
    "HighlightSet",
    "HighlightCorpusEntry",
    "merge_spans",
    "validate_highlight",
    "num_h",
    "num_h_vector",
    "heatmap_weights",
    "CoverageStats",
    "coverage_stats",
]

Span = tuple[int, int]


class HighlightError(ValueError):
    """Base class for highlight validation failures."""


class BudgetExceeded(HighlightError):
    def __init__(self, total: int, budget: int):
        super().__init__(f"highlight covers {total} tokens, budget is {budget}")
        self.total = total
        self.budget = budget


class OutOfBounds(HighlightError):
    pass


class EmptyHighlight(HighlightError):
    pass


def merge_spans(spans: list[Span] | tuple[Span, ...]) -> tuple[Span, ...]:
    """Canonical form: sorted, with overlapping or adjacent spans merged.

    Merging first means a token highlighted twice by the same annotator
    counts once, both toward the budget and in every weight computation.
    """
    ordered = sorted((int(s), int(e)) for s, e in spans)
    merged: list[Span] = []
    for s, e in ordered:
        if merged and s <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], e))
        else:
            merged.append((s, e))
    return tuple(merged)


@dataclass(frozen=True)
class HighlightSet:
    """One annotator's merged highlight spans over one document."""

    doc_id: str
    annotator_id: str
    spans: tuple[Span, ...]
    created_at: float = 0.0

    @property
    def token_count(self) -> int:
        return sum(e - s for s, e in self.spans)

    def token_indices(self) -> set[int]:
        return {i for s, e in self.spans for i in range(s, e)}

    def covers(self, index: int) -> bool:
        return any(s <= index < e for s, e in self.spans)

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "annotator_id": self.annotator_id,
            "spans": [list(sp) for sp in self.spans],
            "created_at": self.created_at,
        }


def validate_highlight(
    doc: TokenizedText,
    spans: list[Span] | tuple[Span, ...],
    budget: int,
    doc_id: str = "",
    annotator_id: str = "",
    created_at: float = 0.0,
) -> HighlightSet:
    """Validate raw spans against a document and its budget.

    Spans are merged first; the merged token count must be >= 1 and <= budget
    (the boundary is inclusive).  When the tokenizer config says punctuation
    does not count, punctuation tokens inside spans are free.

    Raises OutOfBounds, EmptyHighlight or BudgetExceeded.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    m = len(doc)
    merged = merge_spans(spans)
    for s, e in merged:
        if s < 0 or e > m or s >= e:
            raise OutOfBounds(f"span [{s}, {e}) outside document of {m} tokens")

    counted = sum(e - s for s, e in merged)
    if not doc.config.count_punctuation:
        counted -= sum(
            1 for s, e in merged for i in range(s, e) if doc.tokens[i].is_punctuation
        )
    if counted == 0:
        raise EmptyHighlight("highlight selects no counted tokens")
    if counted > budget:
        raise BudgetExceeded(counted, budget)

    return HighlightSet(
        doc_id=doc_id, annotator_id=annotator_id, spans=merged, created_at=created_at
    )


@dataclass(frozen=True)
class HighlightCorpusEntry:
    """A document together with all N highlights collected for it under budget K."""

    doc: TokenizedText
    highlights: tuple[HighlightSet, ...]
    budget_k: int
    doc_id: str = ""

    def __post_init__(self):
        if not self.highlights:
            raise ValueError("at least one highlight is required")
        if self.budget_k < 1:
            raise ValueError("budget K must be >= 1")

    @property
    def num_annotators(self) -> int:
        return len(self.highlights)


def _counted_length(doc: TokenizedText, h: HighlightSet) -> int:
    """Highlight length in the same units as the budget K."""
    if doc.config.count_punctuation:
        return h.token_count
    return sum(
        1 for s, e in h.spans for i in range(s, e) if not doc.tokens[i].is_punctuation
    )


def num_h(entry: HighlightCorpusEntry, index: int) -> float:
    """Length-weighted count of annotators highlighting the token at ``index``.

    Each covering annotator contributes len(H_k)/K, so short highlights count
    proportionally less; the value lies in [0, N].
    """
    if not 0 <= index < len(entry.doc):
        raise IndexError(f"token index {index} out of range for {len(entry.doc)} tokens")
    k = float(entry.budget_k)
    return sum(
        _counted_length(entry.doc, h) / k for h in entry.highlights if h.covers(index)
    )


def num_h_vector(entry: HighlightCorpusEntry) -> list[float]:
    """num_h for every token; one pass per annotator instead of per token."""
    weights = [0.0] * len(entry.doc)
    k = float(entry.budget_k)
    for h in entry.highlights:
        contribution = _counted_length(entry.doc, h) / k
        for s, e in h.spans:
            for i in range(s, e):
                weights[i] += contribution
    return weights


def heatmap_weights(entry: HighlightCorpusEntry) -> list[float]:
    """Per-token intensity in [0, 1]: fraction of annotators covering the token."""
    n = entry.num_annotators
    counts = [0] * len(entry.doc)
    for h in entry.highlights:
        for s, e in h.spans:
            for i in range(s, e):
                counts[i] += 1
    return [c / n for c in counts]


@dataclass(frozen=True)
class CoverageStats:
    union_coverage: float
    second_half_fraction: float
    union_tokens: int = 0
    total_instances: int = 0


def coverage_stats(entry: HighlightCorpusEntry) -> CoverageStats:
    """How much of the document the union of highlights covers, and how much
    of the highlighting (instances summed over annotators) sits in the second
    half of the article.  The half boundary is token index ceil(m/2)."""
    m = len(entry.doc)
    union: set[int] = set()
    total = 0
    second = 0
    half = math.ceil(m / 2)
    for h in entry.highlights:
        for i in h.token_indices():
            union.add(i)
            total += 1
            if i >= half:
                second += 1
    return CoverageStats(
        union_coverage=len(union) / m if m else 0.0,
        second_half_fraction=second / total if total else 0.0,
        union_tokens=len(union),
        total_instances=total,
    )
