import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hileval.metrics import (
    EmptyDocument,
    MODE_UNIFORM,
    NgramWeightTable,
    doc_rouge,
    hrouge,
    ngram_weights,
    score_with_weights,
    uniform_weights,
)
from hileval.text import tokenize

from conftest import make_entry
from oracles import direct_beta, direct_clipped_pr, direct_hrouge


def test_unigram_weights_worked_example(worked_entry):
    table = ngram_weights(worked_entry, 1)
    assert table.weights == {("a",): 1.0, ("b",): 1.0, ("c",): 0.0, ("d",): 0.0}


def test_bigram_weights_worked_example(worked_entry):
    table = ngram_weights(worked_entry, 2)
    assert table.weights[("a", "b")] == pytest.approx(1.0)
    assert table.weights[("b", "c")] == pytest.approx(0.5)
    assert table.weights[("c", "d")] == pytest.approx(0.0)


def test_weights_zero_without_highlighted_tokens():
    entry = make_entry("a b c d", [{3}], budget_k=1)
    table = ngram_weights(entry, 1)
    assert table.weights[("a",)] == 0.0
    assert table.weights[("d",)] == 1.0


def test_weights_average_over_occurrences():
    # 'a' occurs at 0 (highlighted) and 2 (not): beta is the occurrence mean
    entry = make_entry("a b a", [{0}], budget_k=1)
    table = ngram_weights(entry, 1)
    assert table.weights[("a",)] == pytest.approx(0.5)


def test_weight_table_empty_when_n_exceeds_doc():
    entry = make_entry("a b", [{0}], budget_k=1)
    assert ngram_weights(entry, 3).weights == {}


def test_empty_document_rejected():
    with pytest.raises(EmptyDocument):
        uniform_weights(tokenize(""), 1)


def test_hrouge_unigram_worked_example(worked_entry):
    score = hrouge(worked_entry, tokenize("a c"), 1)
    assert score.precision == pytest.approx(0.5)
    assert score.recall == pytest.approx(0.5)


def test_hrouge_bigram_worked_example(worked_entry):
    score = hrouge(worked_entry, tokenize("a b"), 2)
    assert score.precision == pytest.approx(1.0)
    assert score.recall == pytest.approx(2 / 3)


def test_hrouge_summary_equal_to_document_has_recall_one(worked_entry):
    score = hrouge(worked_entry, tokenize("a b c d"), 1)
    assert score.recall == pytest.approx(1.0)


def test_hrouge_undefined_recall_when_all_weights_zero():
    # the annotator highlighted nothing relevant is impossible; an all-zero
    # table needs a document whose every occurrence window is unhighlighted,
    # which cannot happen with a validated highlight, so force the table
    table = NgramWeightTable(n=1, weights={("a",): 0.0, ("b",): 0.0})
    score = score_with_weights(table, tokenize("a b"), tokenize("a"))
    assert score.recall is None
    assert score.precision == pytest.approx(0.0)


def test_hrouge_undefined_precision_for_empty_summary(worked_entry):
    score = hrouge(worked_entry, tokenize(""), 1)
    assert score.precision is None


def test_doc_rouge_trivial_cases():
    doc = tokenize("a b c d")
    same = doc_rouge(doc, tokenize("a b c d"), 1)
    assert (same.precision, same.recall) == (1.0, 1.0)

    partial = doc_rouge(doc, tokenize("a c"), 1)
    assert partial.precision == pytest.approx(1.0)
    assert partial.recall == pytest.approx(0.5)

    disjoint = doc_rouge(doc, tokenize("x y"), 1)
    assert disjoint.precision == 0.0
    assert disjoint.recall == 0.0


def test_scaled_output(worked_entry):
    score = hrouge(worked_entry, tokenize("a c"), 1)
    assert score.scaled() == (pytest.approx(50.0), pytest.approx(50.0))


# -- correspondence against the direct transcription -------------------------


def spans_from(indices):
    spans = []
    for i in sorted(indices):
        if spans and spans[-1][1] == i:
            spans[-1][1] = i + 1
        else:
            spans.append([i, i + 1])
    return [tuple(s) for s in spans]


def all_subsets(m):
    items = range(m)
    for size in range(1, m + 1):
        yield from (set(c) for c in itertools.combinations(items, size))


@pytest.mark.parametrize("doc_text", ["a b a", "a a a", "a b c", "c b c a"])
@pytest.mark.parametrize("n", [1, 2])
def test_weights_match_direct_transcription(doc_text, n):
    doc_tokens = doc_text.split()
    m = len(doc_tokens)
    for h1 in all_subsets(m):
        for h2 in all_subsets(m):
            for budget in range(max(len(h1), len(h2)), m + 1):
                entry = make_entry(doc_text, [h1, h2], budget_k=budget)
                table = ngram_weights(entry, n)
                expected = direct_beta(doc_tokens, [h1, h2], budget, n)
                assert table.weights.keys() == expected.keys()
                for gram, value in expected.items():
                    assert table.weights[gram] == pytest.approx(value, abs=1e-12)
                    assert -1e-12 <= table.weights[gram] <= 1 + 1e-12


@pytest.mark.parametrize("summary_text", ["a", "b a", "a b c", "c c", "a b"])
def test_scores_match_direct_transcription(summary_text):
    doc_text = "a b c a"
    doc_tokens = doc_text.split()
    summary = tokenize(summary_text)
    for h1 in all_subsets(4):
        entry = make_entry(doc_text, [h1], budget_k=4)
        for n in (1, 2):
            table = ngram_weights(entry, n)
            expected_p, expected_r = direct_hrouge(
                doc_tokens, summary_text.split(), direct_beta(doc_tokens, [h1], 4, n), n
            )
            score = hrouge(entry, summary, n)
            assert score.precision == pytest.approx(expected_p, abs=1e-12)
            if expected_r is None:
                assert score.recall is None
            else:
                assert score.recall == pytest.approx(expected_r, abs=1e-12)


# -- invariants ---------------------------------------------------------------

token_lists = st.lists(st.sampled_from("abc"), min_size=1, max_size=7)


@given(token_lists, token_lists, st.integers(min_value=1, max_value=2))
@settings(max_examples=150)
def test_uniform_override_degenerates_to_doc_rouge(doc_tokens, summary_tokens, n):
    doc = tokenize(" ".join(doc_tokens))
    summary = tokenize(" ".join(summary_tokens))
    entry = make_entry(" ".join(doc_tokens), [{0}], budget_k=1)
    table = ngram_weights(entry, n)
    forced = NgramWeightTable(
        n=n, weights={g: 1.0 for g in table.weights}, mode=MODE_UNIFORM
    )
    left = score_with_weights(forced, doc, summary)
    right = doc_rouge(doc, summary, n)
    assert left.precision == right.precision
    assert left.recall == right.recall

    expected_p, expected_r = direct_clipped_pr(doc_tokens, summary_tokens, n)
    assert right.precision == (pytest.approx(expected_p, abs=1e-12) if expected_p is not None else None)
    assert right.recall == (pytest.approx(expected_r, abs=1e-12) if expected_r is not None else None)


@given(
    token_lists,
    st.sets(st.integers(min_value=0, max_value=6), min_size=1),
    st.sets(st.integers(min_value=0, max_value=6), min_size=1),
    st.integers(min_value=1, max_value=2),
)
@settings(max_examples=150)
def test_enlarging_a_highlight_never_decreases_weights(doc_tokens, base, extra, n):
    m = len(doc_tokens)
    base = {i for i in base if i < m} or {0}
    larger = base | {i for i in extra if i < m}
    text = " ".join(doc_tokens)
    small = ngram_weights(make_entry(text, [base], budget_k=m), n)
    grown = ngram_weights(make_entry(text, [larger], budget_k=m), n)
    for gram, value in small.weights.items():
        assert grown.weights[gram] >= value - 1e-12


@given(token_lists, token_lists, st.integers(min_value=1, max_value=2))
@settings(max_examples=150)
def test_scores_stay_in_unit_interval(doc_tokens, summary_tokens, n):
    entry = make_entry(" ".join(doc_tokens), [{0}], budget_k=2)
    score = hrouge(entry, tokenize(" ".join(summary_tokens)), n)
    if score.precision is not None:
        assert -1e-12 <= score.precision <= 1 + 1e-12
    if score.recall is not None:
        assert -1e-12 <= score.recall <= 1 + 1e-12
