"""Task generation and acceptance rules for the three judging task types.

Three task families: highlight annotation (budgeted spans plus a True/False
sanity question), content judgment (two 1-100 scores against a heatmapped or
plain document, same sanity question), and per-metric quality judgment over
batches that carry three planted summaries of known relative quality.  A
quality batch is accepted only when the judge ordered the planted trio
bad < mediocre < good, strictly.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field

from .highlights import HighlightSet
from .text import Token, TokenizedText, TokenizerConfig, tokenize

__all__ = [
    "DocumentTooShort",
    "MissingPlantedScore",
    "MissingSummary",
    "InvalidCampaignConfig",
    "SCORE_MIN",
    "SCORE_MAX",
    "PLANTED_TAGS",
    "SanityTriple",
    "make_sanity_summaries",
    "generate_sanity_question",
    "validate_quality_batch",
    "validate_annotation_submission",
    "AnnotationTask",
    "ContentJudgmentTask",
    "QualityBatch",
    "JudgmentRecord",
    "TaskSet",
    "build_tasks",
]

SCORE_MIN = 1.0
SCORE_MAX = 100.0

TAG_GOOD = "good"
TAG_MEDIOCRE = "mediocre"
TAG_BAD = "bad"
PLANTED_TAGS = (TAG_BAD, TAG_MEDIOCRE, TAG_GOOD)

CONTENT_HIGHLIGHT = "content"
CONTENT_NO_HIGHLIGHT = "content_nohl"
METRIC_FLUENCY = "fluency"
METRIC_CLARITY = "clarity"


class DocumentTooShort(ValueError):
    pass


class MissingPlantedScore(ValueError):
    pass


class MissingSummary(ValueError):
    pass


class InvalidCampaignConfig(ValueError):
    pass


@dataclass(frozen=True)
class SanityTriple:
    """Planted summaries: the original verbatim, a lightly corrupted sample of
    document sentences, and the same sample with tokens scrambled per sentence."""

    good: TokenizedText
    mediocre: TokenizedText
    bad: TokenizedText
    edit_count: int
    seed: str

    def tagged(self) -> dict[str, TokenizedText]:
        return {TAG_GOOD: self.good, TAG_MEDIOCRE: self.mediocre, TAG_BAD: self.bad}


def _text_from_sentences(
    sentences: list[list[str]], config: TokenizerConfig
) -> TokenizedText:
    """Build a TokenizedText directly from per-sentence token lists.

    Joining with single spaces keeps offsets trivial, and the sentence bounds
    are taken from the lists rather than re-derived, so scrambled sentences
    keep their intended boundaries even when punctuation moved inward.
    """
    tokens = []
    bounds = []
    pieces = []
    pos = 0
    index = 0
    for sent in sentences:
        start_index = index
        for surface in sent:
            if pieces:
                pos += 1  # joining space
            pieces.append(surface)
            tokens.append(Token(config.normalize(surface), pos, pos + len(surface)))
            pos += len(surface)
            index += 1
        bounds.append((start_index, index))
    return TokenizedText(
        raw=" ".join(pieces), tokens=tuple(tokens), sentence_bounds=tuple(bounds), config=config
    )


_INFLECTION_RULES = (
    (re.compile(r"ing$"), ""),
    (re.compile(r"ed$"), "ing"),
    (re.compile(r"s$"), ""),
)


def _break_inflection(word: str) -> str:
    for pattern, repl in _INFLECTION_RULES:
        if pattern.search(word) and len(word) > len(pattern.pattern):
            return pattern.sub(repl, word)
    return word + "s"


def make_sanity_summaries(
    doc: TokenizedText, original_summary: TokenizedText, seed: int | str
) -> SanityTriple:
    """Deterministically derive the planted good/mediocre/bad triple.

    good is the original summary verbatim.  mediocre samples 1-2 document
    sentences and injects E = max(2, ceil(10% of tokens)) word edits
    (inflection-breaking substitutions or deletions).  bad permutes the
    mediocre tokens within each sentence.  Identical (doc, summary, seed)
    always produce the identical triple.
    """
    n_sentences = len(doc.sentence_bounds)
    if n_sentences < 2:
        raise DocumentTooShort(f"need at least 2 sentences, document has {n_sentences}")

    rng = random.Random(f"sanity|{seed}")
    count = rng.choice((1, 2))
    chosen = sorted(rng.sample(range(n_sentences), count))
    sentences = [[t.surface for t in doc.sentence_tokens(i)] for i in chosen]

    total_tokens = sum(len(s) for s in sentences)
    edit_count = max(2, math.ceil(0.10 * total_tokens))

    # word-level edits: only alphabetic tokens are eligible, and a deletion
    # never empties a sentence
    eligible = [
        (si, ti)
        for si, sent in enumerate(sentences)
        for ti, tok in enumerate(sent)
        if tok.isalpha()
    ]
    rng.shuffle(eligible)
    edits = sorted(eligible[:edit_count], reverse=True)
    for si, ti in edits:
        if rng.random() < 0.5 and len(sentences[si]) > 1:
            del sentences[si][ti]
        else:
            sentences[si][ti] = _break_inflection(sentences[si][ti])

    mediocre = _text_from_sentences(sentences, doc.config)

    scramble = random.Random(f"scramble|{seed}")
    scrambled = [list(sent) for sent in sentences]
    for sent in scrambled:
        scramble.shuffle(sent)
    bad = _text_from_sentences(scrambled, doc.config)

    return SanityTriple(
        good=original_summary,
        mediocre=mediocre,
        bad=bad,
        edit_count=len(edits),
        seed=str(seed),
    )


def generate_sanity_question(doc: TokenizedText, seed: int | str) -> dict:
    """Heuristic True/False statement about the document, marked machine-made.

    Swaps two capitalized words of a sentence to fabricate a false statement;
    if a sentence has no two distinct capitalized words it is used verbatim as
    a true statement.  Meant as a fallback when the corpus author supplied no
    hand-written question.
    """
    rng = random.Random(f"sanityq|{seed}")
    if not doc.sentence_bounds:
        raise DocumentTooShort("cannot build a sanity question for an empty document")
    order = list(range(len(doc.sentence_bounds)))
    rng.shuffle(order)
    for si in order:
        sentence = doc.sentence_text(si)
        capitalized = [w for w in dict.fromkeys(re.findall(r"\b[A-Z][a-z]+\b", sentence))]
        if len(capitalized) >= 2:
            a, b = rng.sample(capitalized, 2)
            swapped = re.sub(
                rf"\b({re.escape(a)}|{re.escape(b)})\b",
                lambda match: b if match.group(0) == a else a,
                sentence,
            )
            return {"statement": swapped, "answer": False, "machine_made": True}
    sentence = doc.sentence_text(order[0])
    return {"statement": sentence, "answer": True, "machine_made": True}


def validate_quality_batch(
    scores_by_tag: dict[str, float],
) -> tuple[bool, str | None]:
    """Accept iff score(bad) < score(mediocre) < score(good), strictly.

    ``scores_by_tag`` maps the planted tags to the judge's scores; a missing
    planted score is an error, not a rejection.
    """
    missing = [tag for tag in PLANTED_TAGS if tag not in scores_by_tag]
    if missing:
        raise MissingPlantedScore(f"missing planted scores: {', '.join(missing)}")
    bad = scores_by_tag[TAG_BAD]
    mediocre = scores_by_tag[TAG_MEDIOCRE]
    good = scores_by_tag[TAG_GOOD]
    if bad < mediocre < good:
        return True, None
    return False, (
        f"planted ordering violated: bad={bad:g}, mediocre={mediocre:g}, good={good:g}"
    )


def validate_annotation_submission(
    expected_answer: bool, answer: bool, highlight: HighlightSet | None = None
) -> tuple[bool, str | None]:
    """Accept iff the sanity answer is correct; the highlight never rescues a
    wrong answer.  Rejection is a value, not an exception."""
    if bool(answer) != bool(expected_answer):
        return False, "sanity check failed"
    return True, None


@dataclass(frozen=True)
class AnnotationTask:
    task_id: str
    doc_id: str
    budget_k: int
    sanity_statement: str
    sanity_answer: bool
    slots: int

    type: str = "highlight"


@dataclass(frozen=True)
class ContentJudgmentTask:
    task_id: str
    doc_id: str
    summary_id: str
    system: str
    condition: str  # CONTENT_HIGHLIGHT | CONTENT_NO_HIGHLIGHT
    sanity_statement: str
    sanity_answer: bool
    slots: int

    @property
    def type(self) -> str:
        return self.condition


@dataclass(frozen=True)
class QualityBatch:
    """All summaries of one document for one metric, planted trio included.

    ``items`` maps opaque item ids to summary text in presentation order;
    ``planted`` maps the three tags to their item ids and stays server-side.
    """

    task_id: str
    doc_id: str
    metric: str  # METRIC_FLUENCY | METRIC_CLARITY
    items: tuple[tuple[str, str], ...]
    planted: dict[str, str]
    systems: dict[str, str]
    rng_seed: str
    slots: int

    @property
    def type(self) -> str:
        return self.metric

    def __post_init__(self):
        if self.metric not in (METRIC_FLUENCY, METRIC_CLARITY):
            raise InvalidCampaignConfig(f"unknown quality metric {self.metric!r}")
        if set(self.planted) != set(PLANTED_TAGS):
            raise InvalidCampaignConfig("quality batch must plant exactly good/mediocre/bad")


@dataclass(frozen=True)
class JudgmentRecord:
    """One judge's score for one metric on one target, already range-checked."""

    task_id: str
    judge_id: str
    doc_id: str
    system: str
    summary_id: str
    metric: str
    value: float
    condition: str = ""
    sanity_outcome: str = "pass"
    created_at: float = 0.0

    def __post_init__(self):
        if not SCORE_MIN <= self.value <= SCORE_MAX:
            raise ValueError(f"score {self.value} outside [{SCORE_MIN:g}, {SCORE_MAX:g}]")

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "judge_id": self.judge_id,
            "doc_id": self.doc_id,
            "system": self.system,
            "summary_id": self.summary_id,
            "metric": self.metric,
            "value": self.value,
            "condition": self.condition,
            "sanity_outcome": self.sanity_outcome,
            "created_at": self.created_at,
        }


@dataclass
class TaskSet:
    annotation: list[AnnotationTask] = field(default_factory=list)
    content: list[ContentJudgmentTask] = field(default_factory=list)
    quality: list[QualityBatch] = field(default_factory=list)

    def all_tasks(self) -> list:
        return [*self.annotation, *self.content, *self.quality]

    @property
    def assignment_count(self) -> int:
        return sum(t.slots for t in self.all_tasks())


def build_tasks(
    documents: dict[str, TokenizedText],
    summaries: dict[str, dict[str, str]],
    sanity_questions: dict[str, dict],
    budget_k: int,
    seed: int | str,
    annotators_per_doc: int = 10,
    judges_per_item: int = 3,
    include_no_highlight: bool = False,
    reference_system: str = "reference",
) -> TaskSet:
    """Build the full task set for a campaign, deterministically from the seed.

    ``summaries`` maps doc_id -> {system -> summary text}; every document
    must have at least one summary.  Quality batches are built per document
    and metric, with the planted trio derived from the reference summary
    (falling back to the first system) and shuffled into the real summaries.
    """
    if annotators_per_doc < 1 or judges_per_item < 1:
        raise InvalidCampaignConfig(
            "annotators_per_doc and judges_per_item must both be >= 1"
        )

    tasks = TaskSet()
    for doc_id in sorted(documents):
        doc = documents[doc_id]
        doc_summaries = summaries.get(doc_id) or {}
        if not doc_summaries:
            raise MissingSummary(f"document {doc_id!r} has no summaries")
        question = sanity_questions.get(doc_id) or generate_sanity_question(
            doc, f"{seed}|{doc_id}"
        )

        tasks.annotation.append(
            AnnotationTask(
                task_id=f"hl:{doc_id}",
                doc_id=doc_id,
                budget_k=budget_k,
                sanity_statement=question["statement"],
                sanity_answer=bool(question["answer"]),
                slots=annotators_per_doc,
            )
        )

        conditions = [CONTENT_HIGHLIGHT]
        if include_no_highlight:
            conditions.append(CONTENT_NO_HIGHLIGHT)
        for system in sorted(doc_summaries):
            for condition in conditions:
                tasks.content.append(
                    ContentJudgmentTask(
                        task_id=f"{condition}:{doc_id}:{system}",
                        doc_id=doc_id,
                        summary_id=f"{doc_id}:{system}",
                        system=system,
                        condition=condition,
                        sanity_statement=question["statement"],
                        sanity_answer=bool(question["answer"]),
                        slots=judges_per_item,
                    )
                )

        original_system = (
            reference_system if reference_system in doc_summaries else sorted(doc_summaries)[0]
        )
        original = tokenize(doc_summaries[original_system], doc.config)
        triple = make_sanity_summaries(doc, original, f"{seed}|{doc_id}")
        for metric in (METRIC_FLUENCY, METRIC_CLARITY):
            batch_seed = f"{seed}|{doc_id}|{metric}"
            rng = random.Random(f"batch|{batch_seed}")
            entries: list[tuple[str, str, str, str]] = []  # (kind, key, text, system)
            for system in sorted(doc_summaries):
                entries.append(("system", system, doc_summaries[system], system))
            for tag, text in sorted(triple.tagged().items()):
                entries.append(("planted", tag, text.raw, ""))
            rng.shuffle(entries)

            items: list[tuple[str, str]] = []
            planted: dict[str, str] = {}
            systems: dict[str, str] = {}
            for idx, (kind, key, text, system) in enumerate(entries):
                item_id = f"item-{idx}"
                items.append((item_id, text))
                if kind == "planted":
                    planted[key] = item_id
                else:
                    systems[item_id] = system
            tasks.quality.append(
                QualityBatch(
                    task_id=f"{metric}:{doc_id}",
                    doc_id=doc_id,
                    metric=metric,
                    items=tuple(items),
                    planted=planted,
                    systems=systems,
                    rng_seed=batch_seed,
                    slots=judges_per_item,
                )
            )
    return tasks
