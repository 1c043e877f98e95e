"""Highlight-weighted n-gram precision/recall and its uniform-weight case.

The weight of a document n-gram is the occurrence-averaged window mean of the
per-token highlight weights, normalized by the number of annotators, so it
lies in [0, 1] and reaches 1 only when every annotator highlighted every
occurrence with a full-length highlight.  A summary is then scored against
the document (not against a reference): recall divides the weighted clipped
overlap by the total weighted mass of the document, precision divides the
same overlap by the summary's unweighted n-gram count, so unhighlighted
summary content still costs precision.

With every weight forced to 1 the same scorer degenerates to plain clipped
n-gram precision/recall of the summary against the document.
"""

from __future__ import annotations

from dataclasses import dataclass

from .highlights import HighlightCorpusEntry, num_h_vector
from .text import Ngram, TokenizedText, ngram_counts

__all__ = [
    "EmptyDocument",
    "NgramWeightTable",
    "HrougeScore",
    "ngram_weights",
    "uniform_weights",
    "score_with_weights",
    "hrouge",
    "doc_rouge",
]

MODE_HIGHLIGHTED = "highlighted"
MODE_UNIFORM = "uniform"


class EmptyDocument(ValueError):
    pass


@dataclass(frozen=True)
class NgramWeightTable:
    """Per-n-gram weight in [0, 1] for one document.

    Grams absent from the table (i.e. absent from the document) implicitly
    weigh 0.  ``num_annotators`` and ``budget_k`` are provenance so a score
    can always be traced back to its highlight collection.
    """

    n: int
    weights: dict[Ngram, float]
    doc_id: str = ""
    mode: str = MODE_HIGHLIGHTED
    num_annotators: int = 0
    budget_k: int = 0

    def get(self, gram: Ngram) -> float:
        return self.weights.get(gram, 0.0)


@dataclass(frozen=True)
class HrougeScore:
    """Precision/recall in [0, 1], or None where the denominator is empty.

    An undefined recall (every document weight zero) is deliberately kept as
    None rather than coerced to 0 so empty-highlight corpora stay detectable
    in reports.
    """

    n: int
    precision: float | None
    recall: float | None
    mode: str = MODE_HIGHLIGHTED

    def scaled(self, factor: float = 100.0) -> tuple[float | None, float | None]:
        p = None if self.precision is None else self.precision * factor
        r = None if self.recall is None else self.recall * factor
        return p, r


def ngram_weights(entry: HighlightCorpusEntry, n: int) -> NgramWeightTable:
    """Weight table for every distinct n-gram of the entry's document.

    Each occurrence window contributes the mean, over its n tokens, of the
    per-token highlight weight divided by the annotator count; the gram's
    weight is the average contribution over its occurrences.
    """
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    doc = entry.doc
    m = len(doc)
    if m == 0:
        raise EmptyDocument("cannot weight n-grams of an empty document")

    surfaces = doc.surfaces
    num_annotators = entry.num_annotators
    numh = num_h_vector(entry)

    sums: dict[Ngram, float] = {}
    counts: dict[Ngram, int] = {}
    for i in range(m - n + 1):
        gram = surfaces[i : i + n]
        window_mean = sum(numh[i : i + n]) / (n * num_annotators)
        sums[gram] = sums.get(gram, 0.0) + window_mean
        counts[gram] = counts.get(gram, 0) + 1

    weights = {gram: sums[gram] / counts[gram] for gram in sums}
    return NgramWeightTable(
        n=n,
        weights=weights,
        doc_id=entry.doc_id,
        mode=MODE_HIGHLIGHTED,
        num_annotators=num_annotators,
        budget_k=entry.budget_k,
    )


def uniform_weights(doc: TokenizedText, n: int, doc_id: str = "") -> NgramWeightTable:
    """Weight 1 for every document n-gram: the degenerate, highlight-free case."""
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    if len(doc) == 0:
        raise EmptyDocument("cannot weight n-grams of an empty document")
    weights = {gram: 1.0 for gram in ngram_counts(doc, n)}
    return NgramWeightTable(n=n, weights=weights, doc_id=doc_id, mode=MODE_UNIFORM)


def score_with_weights(
    table: NgramWeightTable, doc: TokenizedText, summary: TokenizedText
) -> HrougeScore:
    """Score a summary against a document under an explicit weight table.

    The shared numerator sums, over the summary's distinct n-grams, the gram
    weight times the clipped count min(count in doc, count in summary).
    Recall divides by the weighted document mass, precision by the summary's
    total n-gram count (uniform weights in the denominator, so off-highlight
    summary content is not free).
    """
    n = table.n
    doc_counts = ngram_counts(doc, n)
    summary_counts = ngram_counts(summary, n)

    numerator = sum(
        table.get(gram) * min(count, doc_counts.get(gram, 0))
        for gram, count in summary_counts.items()
    )
    recall_denom = sum(table.get(gram) * count for gram, count in doc_counts.items())
    precision_denom = sum(summary_counts.values())

    recall = numerator / recall_denom if recall_denom > 0 else None
    precision = numerator / precision_denom if precision_denom > 0 else None
    return HrougeScore(n=n, precision=precision, recall=recall, mode=table.mode)


def hrouge(entry: HighlightCorpusEntry, summary: TokenizedText, n: int) -> HrougeScore:
    """Highlight-weighted n-gram precision/recall of a summary."""
    table = ngram_weights(entry, n)
    return score_with_weights(table, entry.doc, summary)


def doc_rouge(doc: TokenizedText, summary: TokenizedText, n: int) -> HrougeScore:
    """Plain clipped n-gram precision/recall with the document as reference."""
    table = uniform_weights(doc, n)
    return score_with_weights(table, doc, summary)
