"""Highlight-based, reference-less human evaluation toolkit for summarization.

Summaries are judged against their source document via crowd-collected
highlights: token-level salience weights drive both human judging interfaces
(heatmaps, budgeted highlighting, planted quality checks) and the
highlight-weighted n-gram precision/recall scores, with agreement statistics
and report generation on top.
"""

from .highlights import (
    BudgetExceeded,
    CoverageStats,
    EmptyHighlight,
    HighlightCorpusEntry,
    HighlightSet,
    OutOfBounds,
    coverage_stats,
    heatmap_weights,
    merge_spans,
    num_h,
    num_h_vector,
    validate_highlight,
)
from .metrics import (
    HrougeScore,
    NgramWeightTable,
    doc_rouge,
    hrouge,
    ngram_weights,
    score_with_weights,
    uniform_weights,
)
from .protocol import (
    JudgmentRecord,
    SanityTriple,
    build_tasks,
    make_sanity_summaries,
    validate_annotation_submission,
    validate_quality_batch,
)
from .stats import (
    KappaResult,
    aggregate_scores,
    coefficient_of_variation,
    fleiss_kappa,
    pearson,
)
from .text import (
    Ngram,
    Token,
    TokenizedText,
    TokenizerConfig,
    clipped_count,
    extract_ngrams,
    ngram_counts,
    tokenize,
)

__version__ = "0.1.0"
