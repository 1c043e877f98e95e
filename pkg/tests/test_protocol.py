from collections import Counter

import pytest

from hileval.protocol import (
    DocumentTooShort,
    InvalidCampaignConfig,
    MissingPlantedScore,
    MissingSummary,
    PLANTED_TAGS,
    build_tasks,
    generate_sanity_question,
    make_sanity_summaries,
    validate_annotation_submission,
    validate_quality_batch,
)
from hileval.text import tokenize

DOC = tokenize(
    "The red fox jumped over the lazy dog. "
    "A storm was gathering over the hills. "
    "Farmers watched the clouds rolling in quickly."
)
SUMMARY = tokenize("A fox jumped while a storm gathered.")


def test_good_is_original_verbatim():
    triple = make_sanity_summaries(DOC, SUMMARY, seed=7)
    assert triple.good is SUMMARY
    assert triple.good.raw == SUMMARY.raw


def test_triple_deterministic_for_fixed_seed():
    first = make_sanity_summaries(DOC, SUMMARY, seed=42)
    second = make_sanity_summaries(DOC, SUMMARY, seed=42)
    assert first.mediocre.raw == second.mediocre.raw
    assert first.bad.raw == second.bad.raw


def test_different_seeds_vary():
    raws = {make_sanity_summaries(DOC, SUMMARY, seed=s).mediocre.raw for s in range(8)}
    assert len(raws) > 1


def test_bad_is_within_sentence_permutation_of_mediocre():
    for seed in range(10):
        triple = make_sanity_summaries(DOC, SUMMARY, seed=seed)
        assert len(triple.bad.sentence_bounds) == len(triple.mediocre.sentence_bounds)
        for i in range(len(triple.mediocre.sentence_bounds)):
            mediocre = Counter(t.surface for t in triple.mediocre.sentence_tokens(i))
            bad = Counter(t.surface for t in triple.bad.sentence_tokens(i))
            assert mediocre == bad


def test_mediocre_differs_from_document_sentences():
    triple = make_sanity_summaries(DOC, SUMMARY, seed=3)
    doc_sentences = {
        " ".join(t.surface for t in DOC.sentence_tokens(i))
        for i in range(len(DOC.sentence_bounds))
    }
    mediocre_sentences = [
        " ".join(t.surface for t in triple.mediocre.sentence_tokens(i))
        for i in range(len(triple.mediocre.sentence_bounds))
    ]
    assert any(s not in doc_sentences for s in mediocre_sentences)
    assert triple.edit_count >= 2


def test_single_sentence_document_too_short():
    with pytest.raises(DocumentTooShort):
        make_sanity_summaries(tokenize("Only one sentence here."), SUMMARY, seed=1)


def test_tags_never_leak_into_text():
    triple = make_sanity_summaries(DOC, SUMMARY, seed=11)
    for tag in PLANTED_TAGS:
        assert tag not in triple.mediocre.raw
        assert tag not in triple.bad.raw


def test_quality_chain_accepts_strict_order():
    accepted, reason = validate_quality_batch({"bad": 20, "mediocre": 50, "good": 80})
    assert accepted and reason is None


def test_quality_chain_rejects_violation_and_ties():
    accepted, reason = validate_quality_batch({"bad": 20, "mediocre": 85, "good": 80})
    assert not accepted and "ordering" in reason
    accepted, _ = validate_quality_batch({"bad": 50, "mediocre": 50, "good": 80})
    assert not accepted


def test_quality_chain_missing_score_is_error():
    with pytest.raises(MissingPlantedScore):
        validate_quality_batch({"bad": 20, "good": 80})


def test_exactly_the_strict_chain_region_accepts():
    grid = (20.0, 50.0, 80.0)
    for bad in grid:
        for mediocre in grid:
            for good in grid:
                accepted, _ = validate_quality_batch(
                    {"bad": bad, "mediocre": mediocre, "good": good}
                )
                assert accepted == (bad < mediocre < good)


def test_annotation_sanity_answer_decides():
    ok, _ = validate_annotation_submission(True, True)
    assert ok
    rejected, reason = validate_annotation_submission(True, False)
    assert not rejected and reason


def test_sanity_question_generator_marks_machine_made():
    question = generate_sanity_question(DOC, seed=5)
    assert question["machine_made"] is True
    assert isinstance(question["answer"], bool)
    assert question["statement"]


def _docs(n_docs, summaries_per_doc=("reference", "sysA", "sysB")):
    text = (
        "Alice met Bob at the market on Monday. "
        "They argued about the harvest prices. "
        "Carol later joined them for lunch."
    )
    documents = {f"d{i:02d}": tokenize(text) for i in range(n_docs)}
    summaries = {
        doc_id: {system: f"summary about {doc_id} from {system}." for system in summaries_per_doc}
        for doc_id in documents
    }
    return documents, summaries


def test_annotation_assignment_count_scales():
    documents, summaries = _docs(50)
    tasks = build_tasks(documents, summaries, {}, budget_k=30, seed=1, annotators_per_doc=10)
    assert sum(t.slots for t in tasks.annotation) == 500


def test_content_assignments_three_summaries_three_judges():
    documents, summaries = _docs(1)
    tasks = build_tasks(documents, summaries, {}, budget_k=30, seed=1, judges_per_item=3)
    assert sum(t.slots for t in tasks.content) == 9


def test_no_highlight_condition_doubles_content_tasks():
    documents, summaries = _docs(2)
    without = build_tasks(documents, summaries, {}, budget_k=30, seed=1)
    with_control = build_tasks(
        documents, summaries, {}, budget_k=30, seed=1, include_no_highlight=True
    )
    assert len(with_control.content) == 2 * len(without.content)


def test_zero_judges_is_invalid_config():
    documents, summaries = _docs(1)
    with pytest.raises(InvalidCampaignConfig):
        build_tasks(documents, summaries, {}, budget_k=30, seed=1, judges_per_item=0)


def test_missing_summary_rejected():
    documents, summaries = _docs(2)
    summaries.pop("d01")
    with pytest.raises(MissingSummary):
        build_tasks(documents, summaries, {}, budget_k=30, seed=1)


def test_task_generation_deterministic():
    documents, summaries = _docs(3)
    a = build_tasks(documents, summaries, {}, budget_k=30, seed=99)
    b = build_tasks(documents, summaries, {}, budget_k=30, seed=99)
    assert a.annotation == b.annotation
    assert a.content == b.content
    assert [q.items for q in a.quality] == [q.items for q in b.quality]
    assert [q.planted for q in a.quality] == [q.planted for q in b.quality]


def test_quality_batches_single_metric_and_planted_trio():
    documents, summaries = _docs(2)
    tasks = build_tasks(documents, summaries, {}, budget_k=30, seed=5)
    metrics = {batch.metric for batch in tasks.quality}
    assert metrics == {"fluency", "clarity"}
    for batch in tasks.quality:
        assert set(batch.planted.keys()) == set(PLANTED_TAGS)
        item_ids = {item_id for item_id, _ in batch.items}
        assert set(batch.planted.values()) <= item_ids
        assert set(batch.systems.keys()) <= item_ids
        # item ids and texts carry no planted tag
        for item_id, text in batch.items:
            assert all(tag not in item_id for tag in PLANTED_TAGS)


def test_planted_positions_shuffled_across_docs():
    documents, summaries = _docs(6)
    tasks = build_tasks(documents, summaries, {}, budget_k=30, seed=2)
    positions = set()
    for batch in tasks.quality:
        order = [item_id for item_id, _ in batch.items]
        positions.add(order.index(batch.planted["good"]))
    assert len(positions) > 1
