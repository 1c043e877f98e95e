import pytest

from hileval.highlights import HighlightCorpusEntry, HighlightSet
from hileval.text import tokenize


def spans_from_indices(indices):
    """Contiguous [start, end) spans from a set of token indices."""
    spans = []
    for i in sorted(indices):
        if spans and spans[-1][1] == i:
            spans[-1][1] = i + 1
        else:
            spans.append([i, i + 1])
    return [tuple(s) for s in spans]


def make_entry(doc_text, highlight_index_sets, budget_k, doc_id="doc"):
    """HighlightCorpusEntry from raw text and per-annotator token index sets."""
    doc = tokenize(doc_text)
    highlights = tuple(
        HighlightSet(
            doc_id=doc_id,
            annotator_id=f"a{k}",
            spans=tuple(spans_from_indices(indices)),
        )
        for k, indices in enumerate(highlight_index_sets)
    )
    return HighlightCorpusEntry(doc=doc, highlights=highlights, budget_k=budget_k, doc_id=doc_id)


@pytest.fixture
def worked_entry():
    """doc [a, b, c, d], one annotator highlighting {a, b} under K = 2."""
    return make_entry("a b c d", [{0, 1}], budget_k=2)
