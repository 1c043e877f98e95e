"""Persistence: corpus files, append-only event log, and campaign state.

A campaign lives in one directory: ``corpus.json`` (the normalized corpus),
``campaign.json`` (seed and parameters), ``tasks.ndjson`` (the generated task
set, in serving order) and ``events.ndjson`` (append-only submissions log).
Everything downstream -- serving decisions, reports -- is a pure function of
the corpus, the task set and the event log, so replaying the log rebuilds
the exact pre-crash state.  Task leases are the only mutable coordination
point; they are held in memory and guarded by a lock.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import protocol
from .highlights import (
    HighlightCorpusEntry,
    HighlightError,
    HighlightSet,
    validate_highlight,
)
from .protocol import (
    AnnotationTask,
    ContentJudgmentTask,
    JudgmentRecord,
    QualityBatch,
    TaskSet,
    build_tasks,
)
from .text import TokenizedText, TokenizerConfig, tokenize

__all__ = [
    "SchemaMismatch",
    "DuplicateDocId",
    "UnknownTask",
    "UnknownTaskType",
    "LeaseExpired",
    "InsufficientData",
    "CorpusFile",
    "load_corpus",
    "corpus_to_canonical_json",
    "EventLog",
    "Campaign",
    "load_highlight_file",
    "write_atomic",
    "canonical_dumps",
]

CORPUS_VERSION = "1"

EVENT_HIGHLIGHT = "HighlightSubmitted"
EVENT_JUDGMENT = "JudgmentSubmitted"
EVENT_REJECTED = "SubmissionRejected"

TASK_TYPES = ("highlight", "content", "content_nohl", "fluency", "clarity")

DEFAULT_LEASE_TIMEOUT = 30 * 60.0


class SchemaMismatch(ValueError):
    pass


class DuplicateDocId(ValueError):
    pass


class UnknownTask(KeyError):
    pass


class UnknownTaskType(ValueError):
    pass


class LeaseExpired(RuntimeError):
    pass


class InsufficientData(ValueError):
    pass


def canonical_dumps(obj) -> str:
    """Deterministic JSON: sorted keys, compact separators, raw unicode."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_atomic(path: Path, data: bytes) -> None:
    """Write via temp file + rename so failures never leave partial output."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


@dataclass
class CorpusFile:
    """Documents plus system/reference summaries, with the tokenizer config
    embedded so every consumer tokenizes identically."""

    documents: dict[str, dict]  # doc_id -> {"text":..., "sanity": {...}|None}
    summaries: dict[str, dict[str, str]]  # doc_id -> {system -> text}
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    budget_k: int = 30
    version: str = CORPUS_VERSION

    def tokenized_documents(self) -> dict[str, TokenizedText]:
        return {
            doc_id: tokenize(doc["text"], self.tokenizer)
            for doc_id, doc in self.documents.items()
        }

    def sanity_questions(self) -> dict[str, dict]:
        return {
            doc_id: doc["sanity"]
            for doc_id, doc in self.documents.items()
            if doc.get("sanity")
        }

    def systems(self) -> list[str]:
        names = {system for per_doc in self.summaries.values() for system in per_doc}
        return sorted(names)


def _parse_corpus(data: dict) -> CorpusFile:
    if not isinstance(data, dict):
        raise SchemaMismatch("corpus file must be a JSON object")
    version = str(data.get("version", ""))
    if version != CORPUS_VERSION:
        raise SchemaMismatch(
            f"unsupported corpus version {version!r}, expected {CORPUS_VERSION!r}"
        )
    tokenizer = TokenizerConfig.from_dict(data.get("tokenizer", {}))
    budget_k = int(data.get("budget_k", 30))
    if budget_k < 1:
        raise SchemaMismatch("budget_k must be >= 1")

    documents: dict[str, dict] = {}
    for doc in data.get("documents", []):
        if "id" not in doc or "text" not in doc:
            raise SchemaMismatch("document entries need 'id' and 'text'")
        doc_id = str(doc["id"])
        if doc_id in documents:
            raise DuplicateDocId(f"duplicate document id {doc_id!r}")
        sanity = doc.get("sanity")
        if sanity is not None and (
            "statement" not in sanity or "answer" not in sanity
        ):
            raise SchemaMismatch(f"sanity question for {doc_id!r} needs statement/answer")
        documents[doc_id] = {"text": str(doc["text"]), "sanity": sanity}
    if not documents:
        raise SchemaMismatch("corpus contains no documents")

    summaries: dict[str, dict[str, str]] = {}
    for summ in data.get("summaries", []):
        for key in ("doc_id", "system", "text"):
            if key not in summ:
                raise SchemaMismatch(f"summary entries need {key!r}")
        doc_id = str(summ["doc_id"])
        if doc_id not in documents:
            raise SchemaMismatch(f"summary references unknown document {doc_id!r}")
        system = str(summ["system"])
        per_doc = summaries.setdefault(doc_id, {})
        if system in per_doc:
            raise SchemaMismatch(f"duplicate summary ({doc_id!r}, {system!r})")
        per_doc[system] = str(summ["text"])

    return CorpusFile(
        documents=documents,
        summaries=summaries,
        tokenizer=tokenizer,
        budget_k=budget_k,
    )


def load_corpus(path: str | Path) -> CorpusFile:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"corpus file is not valid JSON: {exc}") from exc
    return _parse_corpus(data)


def corpus_to_canonical_json(corpus: CorpusFile) -> bytes:
    """Canonical serialization; ingest-then-export round-trips byte-identically."""
    payload = {
        "version": corpus.version,
        "tokenizer": corpus.tokenizer.to_dict(),
        "budget_k": corpus.budget_k,
        "documents": [
            {
                "id": doc_id,
                "text": corpus.documents[doc_id]["text"],
                **(
                    {"sanity": corpus.documents[doc_id]["sanity"]}
                    if corpus.documents[doc_id].get("sanity")
                    else {}
                ),
            }
            for doc_id in sorted(corpus.documents)
        ],
        "summaries": [
            {"doc_id": doc_id, "system": system, "text": corpus.summaries[doc_id][system]}
            for doc_id in sorted(corpus.summaries)
            for system in sorted(corpus.summaries[doc_id])
        ],
    }
    return (json.dumps(payload, sort_keys=True, indent=1, ensure_ascii=False) + "\n").encode()


class EventLog:
    """Append-only newline-delimited record log with fsync on every append."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def append(self, kind: str, payload: dict) -> dict:
        record = {"kind": kind, "seq": self._next_seq(), "ts": time.time(), "payload": payload}
        line = canonical_dumps(record) + "\n"
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(line)
            fh.flush()
            os.fsync(fh.fileno())
        return record

    def _next_seq(self) -> int:
        return sum(1 for _ in self.read())

    def read(self) -> list[dict]:
        if not self.path.exists():
            return []
        records = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return records


def _task_to_dict(task) -> dict:
    if isinstance(task, AnnotationTask):
        return {
            "task_kind": "annotation",
            "task_id": task.task_id,
            "doc_id": task.doc_id,
            "budget_k": task.budget_k,
            "sanity_statement": task.sanity_statement,
            "sanity_answer": task.sanity_answer,
            "slots": task.slots,
        }
    if isinstance(task, ContentJudgmentTask):
        return {
            "task_kind": "content",
            "task_id": task.task_id,
            "doc_id": task.doc_id,
            "summary_id": task.summary_id,
            "system": task.system,
            "condition": task.condition,
            "sanity_statement": task.sanity_statement,
            "sanity_answer": task.sanity_answer,
            "slots": task.slots,
        }
    if isinstance(task, QualityBatch):
        return {
            "task_kind": "quality",
            "task_id": task.task_id,
            "doc_id": task.doc_id,
            "metric": task.metric,
            "items": [list(item) for item in task.items],
            "planted": task.planted,
            "systems": task.systems,
            "rng_seed": task.rng_seed,
            "slots": task.slots,
        }
    raise TypeError(f"unknown task type {type(task)!r}")


def _task_from_dict(data: dict):
    kind = data.get("task_kind")
    if kind == "annotation":
        return AnnotationTask(
            task_id=data["task_id"],
            doc_id=data["doc_id"],
            budget_k=data["budget_k"],
            sanity_statement=data["sanity_statement"],
            sanity_answer=data["sanity_answer"],
            slots=data["slots"],
        )
    if kind == "content":
        return ContentJudgmentTask(
            task_id=data["task_id"],
            doc_id=data["doc_id"],
            summary_id=data["summary_id"],
            system=data["system"],
            condition=data["condition"],
            sanity_statement=data["sanity_statement"],
            sanity_answer=data["sanity_answer"],
            slots=data["slots"],
        )
    if kind == "quality":
        return QualityBatch(
            task_id=data["task_id"],
            doc_id=data["doc_id"],
            metric=data["metric"],
            items=tuple((i, t) for i, t in data["items"]),
            planted=dict(data["planted"]),
            systems=dict(data["systems"]),
            rng_seed=data["rng_seed"],
            slots=data["slots"],
        )
    raise SchemaMismatch(f"unknown task record kind {kind!r}")


def _done_key(task) -> tuple:
    """Key under which a judge may do a task at most once.

    Content tasks share the key across the highlight / no-highlight
    conditions, so the two conditions get disjoint judges.
    """
    if isinstance(task, AnnotationTask):
        return ("hl", task.doc_id)
    if isinstance(task, ContentJudgmentTask):
        return ("content", task.doc_id, task.system)
    return (task.metric, task.doc_id)


class Campaign:
    """One evaluation campaign rooted in a directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.corpus = load_corpus(self.root / "corpus.json")
        self.config = json.loads((self.root / "campaign.json").read_text(encoding="utf-8"))
        self.documents = self.corpus.tokenized_documents()
        self.events = EventLog(self.root / "events.ndjson")
        self._lock = threading.Lock()
        self._leases: dict[tuple[str, str], float] = {}
        self._tasks: list | None = None
        self._tasks_by_id: dict[str, object] = {}
        if self.tasks_path.exists():
            self._load_tasks()

    # -- creation ---------------------------------------------------------

    @classmethod
    def create(
        cls,
        corpus: CorpusFile,
        root: str | Path,
        seed: int = 0,
        lease_timeout: float = DEFAULT_LEASE_TIMEOUT,
    ) -> "Campaign":
        root = Path(root)
        corpus_bytes = corpus_to_canonical_json(corpus)
        corpus_path = root / "corpus.json"
        if corpus_path.exists():
            if corpus_path.read_bytes() != corpus_bytes:
                raise SchemaMismatch(
                    f"{root} already holds a different corpus; refusing to overwrite"
                )
        else:
            write_atomic(corpus_path, corpus_bytes)
        config = {
            "seed": seed,
            "budget_k": corpus.budget_k,
            "lease_timeout": lease_timeout,
            "tokenizer": corpus.tokenizer.to_dict(),
        }
        config_path = root / "campaign.json"
        if not config_path.exists():
            write_atomic(config_path, (canonical_dumps(config) + "\n").encode())
        return cls(root)

    @classmethod
    def open(cls, root: str | Path) -> "Campaign":
        root = Path(root)
        if not (root / "corpus.json").exists():
            raise SchemaMismatch(f"{root} is not a campaign directory (no corpus.json)")
        return cls(root)

    # -- properties --------------------------------------------------------

    @property
    def seed(self) -> int:
        return int(self.config["seed"])

    @property
    def budget_k(self) -> int:
        return int(self.config["budget_k"])

    @property
    def lease_timeout(self) -> float:
        return float(self.config.get("lease_timeout", DEFAULT_LEASE_TIMEOUT))

    @property
    def tasks_path(self) -> Path:
        return self.root / "tasks.ndjson"

    # -- task generation ---------------------------------------------------

    def generate_tasks(
        self,
        annotators_per_doc: int = 10,
        judges_per_item: int = 3,
        include_no_highlight: bool = False,
    ) -> TaskSet:
        task_set = build_tasks(
            documents=self.documents,
            summaries=self.corpus.summaries,
            sanity_questions=self.corpus.sanity_questions(),
            budget_k=self.budget_k,
            seed=self.seed,
            annotators_per_doc=annotators_per_doc,
            judges_per_item=judges_per_item,
            include_no_highlight=include_no_highlight,
        )
        lines = [canonical_dumps(_task_to_dict(t)) for t in task_set.all_tasks()]
        write_atomic(self.tasks_path, ("\n".join(lines) + "\n").encode())
        self._load_tasks()
        gen_config = {
            "annotators_per_doc": annotators_per_doc,
            "judges_per_item": judges_per_item,
            "include_no_highlight": include_no_highlight,
        }
        self.config.update(gen_config)
        write_atomic(
            self.root / "campaign.json", (canonical_dumps(self.config) + "\n").encode()
        )
        return task_set

    def _load_tasks(self) -> None:
        tasks = []
        with open(self.tasks_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    tasks.append(_task_from_dict(json.loads(line)))
        self._tasks = tasks
        self._tasks_by_id = {t.task_id: t for t in tasks}

    @property
    def tasks(self) -> list:
        if self._tasks is None:
            raise InsufficientData("no task set generated yet")
        return self._tasks

    def task(self, task_id: str):
        try:
            return self._tasks_by_id[task_id]
        except KeyError:
            raise UnknownTask(task_id) from None

    # -- derived state from the event log ----------------------------------

    def _accepted_and_done(self) -> tuple[dict[str, int], dict[str, set]]:
        accepted: dict[str, int] = {}
        done: dict[str, set] = {}
        for record in self.events.read():
            payload = record["payload"]
            task_id = payload.get("task_id")
            judge = payload.get("judge_id")
            if task_id is None or judge is None or task_id not in self._tasks_by_id:
                continue
            key = _done_key(self.task(task_id))
            done.setdefault(judge, set()).add(key)
            if record["kind"] in (EVENT_HIGHLIGHT, EVENT_JUDGMENT):
                accepted[task_id] = accepted.get(task_id, 0) + 1
        return accepted, done

    def accepted_highlights(self) -> dict[str, list[HighlightSet]]:
        """Accepted highlight sets grouped per document, in submission order."""
        out: dict[str, list[HighlightSet]] = {}
        for record in self.events.read():
            if record["kind"] != EVENT_HIGHLIGHT:
                continue
            payload = record["payload"]
            out.setdefault(payload["doc_id"], []).append(
                HighlightSet(
                    doc_id=payload["doc_id"],
                    annotator_id=payload["judge_id"],
                    spans=tuple((int(s), int(e)) for s, e in payload["spans"]),
                    created_at=record["ts"],
                )
            )
        return out

    def highlight_entries(self) -> dict[str, HighlightCorpusEntry]:
        entries = {}
        for doc_id, sets in self.accepted_highlights().items():
            entries[doc_id] = HighlightCorpusEntry(
                doc=self.documents[doc_id],
                highlights=tuple(sets),
                budget_k=self.budget_k,
                doc_id=doc_id,
            )
        return entries

    def judgment_records(self) -> list[JudgmentRecord]:
        records: list[JudgmentRecord] = []
        for record in self.events.read():
            if record["kind"] != EVENT_JUDGMENT:
                continue
            for row in record["payload"].get("records", []):
                records.append(
                    JudgmentRecord(
                        task_id=row["task_id"],
                        judge_id=row["judge_id"],
                        doc_id=row["doc_id"],
                        system=row["system"],
                        summary_id=row["summary_id"],
                        metric=row["metric"],
                        value=float(row["value"]),
                        condition=row.get("condition", ""),
                        sanity_outcome=row.get("sanity_outcome", "pass"),
                        created_at=record["ts"],
                    )
                )
        return records

    # -- serving ------------------------------------------------------------

    def _task_type(self, task) -> str:
        return task.type

    def next_task(self, judge_id: str, task_type: str, now: float | None = None):
        """The judge's current lease for this type, or the first eligible task.

        Returns None when every matching task is done, fully leased, or
        already seen by this judge.
        """
        if task_type not in TASK_TYPES:
            raise UnknownTaskType(task_type)
        now = time.time() if now is None else now
        with self._lock:
            self._purge_leases(now)
            for (task_id, holder), _ in self._leases.items():
                if holder == judge_id and self._task_type(self.task(task_id)) == task_type:
                    return self.task(task_id)

            accepted, done = self._accepted_and_done()
            judge_done = done.get(judge_id, set())
            highlighted_docs = {
                doc_id for doc_id, sets in self.accepted_highlights().items() if sets
            }
            lease_counts: dict[str, int] = {}
            for (task_id, _), _ in self._leases.items():
                lease_counts[task_id] = lease_counts.get(task_id, 0) + 1

            for task in self.tasks:
                if self._task_type(task) != task_type:
                    continue
                if _done_key(task) in judge_done:
                    continue
                if accepted.get(task.task_id, 0) + lease_counts.get(task.task_id, 0) >= task.slots:
                    continue
                if (
                    isinstance(task, ContentJudgmentTask)
                    and task.condition == protocol.CONTENT_HIGHLIGHT
                    and task.doc_id not in highlighted_docs
                ):
                    continue
                self._leases[(task.task_id, judge_id)] = now + self.lease_timeout
                return task
            return None

    def _purge_leases(self, now: float) -> None:
        expired = [key for key, expiry in self._leases.items() if expiry <= now]
        for key in expired:
            del self._leases[key]

    def expire_lease(self, task_id: str, judge_id: str) -> None:
        """Drop a lease immediately (test hook and admin path)."""
        with self._lock:
            self._leases.pop((task_id, judge_id), None)

    # -- submission ----------------------------------------------------------

    def submit(self, judge_id: str, payload: dict, now: float | None = None) -> tuple[str, str | None]:
        """Validate a submission and append its outcome to the event log.

        Returns ("accepted", None) or ("rejected", reason).  Structural
        problems (unknown task, expired lease, malformed or incomplete
        payloads) raise instead and leave no event.
        """
        now = time.time() if now is None else now
        task_id = payload.get("task_id")
        if not task_id:
            raise UnknownTask("submission payload lacks task_id")
        with self._lock:
            task = self.task(task_id)
            self._purge_leases(now)
            if (task_id, judge_id) not in self._leases:
                raise LeaseExpired(f"judge {judge_id!r} holds no live lease on {task_id!r}")

            if isinstance(task, AnnotationTask):
                outcome = self._validate_annotation(task, judge_id, payload)
            elif isinstance(task, ContentJudgmentTask):
                outcome = self._validate_content(task, judge_id, payload)
            else:
                outcome = self._validate_quality(task, judge_id, payload)

            kind, event_payload, reason = outcome
            self.events.append(kind, event_payload)
            del self._leases[(task_id, judge_id)]
            return ("accepted", None) if kind != EVENT_REJECTED else ("rejected", reason)

    def _validate_annotation(self, task: AnnotationTask, judge_id: str, payload: dict):
        spans = payload.get("spans")
        if spans is None or "sanity_answer" not in payload:
            raise ValueError("highlight submission needs 'spans' and 'sanity_answer'")
        answer = bool(payload["sanity_answer"])
        base = {"task_id": task.task_id, "judge_id": judge_id, "doc_id": task.doc_id}

        ok, reason = protocol.validate_annotation_submission(task.sanity_answer, answer)
        if not ok:
            return EVENT_REJECTED, {**base, "reason": reason, "spans": spans}, reason
        try:
            highlight = validate_highlight(
                self.documents[task.doc_id],
                [(int(s), int(e)) for s, e in spans],
                task.budget_k,
                doc_id=task.doc_id,
                annotator_id=judge_id,
            )
        except HighlightError as exc:
            reason = f"{type(exc).__name__}: {exc}"
            return EVENT_REJECTED, {**base, "reason": reason, "spans": spans}, reason
        event = {
            **base,
            "spans": [list(sp) for sp in highlight.spans],
            "budget_k": task.budget_k,
            "sanity_answer": answer,
        }
        return EVENT_HIGHLIGHT, event, None

    def _validate_content(self, task: ContentJudgmentTask, judge_id: str, payload: dict):
        scores = payload.get("scores") or {}
        for metric in ("content_precision", "content_recall"):
            if metric not in scores:
                raise ValueError(f"content submission needs scores[{metric!r}]")
            value = float(scores[metric])
            if not protocol.SCORE_MIN <= value <= protocol.SCORE_MAX:
                raise ValueError(f"{metric} score {value} outside 1-100")
        if "sanity_answer" not in payload:
            raise ValueError("content submission needs 'sanity_answer'")
        answer = bool(payload["sanity_answer"])
        base = {
            "task_id": task.task_id,
            "judge_id": judge_id,
            "doc_id": task.doc_id,
            "type": task.condition,
        }
        ok, reason = protocol.validate_annotation_submission(task.sanity_answer, answer)
        if not ok:
            return EVENT_REJECTED, {**base, "reason": reason, "scores": scores}, reason
        rows = [
            {
                "task_id": task.task_id,
                "judge_id": judge_id,
                "doc_id": task.doc_id,
                "system": task.system,
                "summary_id": task.summary_id,
                "metric": metric,
                "value": float(scores[metric]),
                "condition": task.condition,
                "sanity_outcome": "pass",
            }
            for metric in ("content_precision", "content_recall")
        ]
        event = {**base, "scores": scores, "sanity_answer": answer, "records": rows}
        return EVENT_JUDGMENT, event, None

    def _validate_quality(self, task: QualityBatch, judge_id: str, payload: dict):
        scores = payload.get("scores") or {}
        missing = [item_id for item_id, _ in task.items if item_id not in scores]
        if missing:
            raise ValueError(f"quality submission incomplete, missing {missing}")
        for item_id, _ in task.items:
            value = float(scores[item_id])
            if not protocol.SCORE_MIN <= value <= protocol.SCORE_MAX:
                raise ValueError(f"score for {item_id} outside 1-100")
        base = {
            "task_id": task.task_id,
            "judge_id": judge_id,
            "doc_id": task.doc_id,
            "type": task.metric,
        }
        by_tag = {tag: float(scores[item_id]) for tag, item_id in task.planted.items()}
        accepted, reason = protocol.validate_quality_batch(by_tag)
        if not accepted:
            return EVENT_REJECTED, {**base, "reason": reason, "scores": scores}, reason
        rows = [
            {
                "task_id": task.task_id,
                "judge_id": judge_id,
                "doc_id": task.doc_id,
                "system": system,
                "summary_id": f"{task.doc_id}:{system}",
                "metric": task.metric,
                "value": float(scores[item_id]),
                "condition": "",
                "sanity_outcome": "pass",
            }
            for item_id, system in sorted(task.systems.items())
        ]
        event = {**base, "scores": scores, "planted_scores": by_tag, "records": rows}
        return EVENT_JUDGMENT, event, None


def load_highlight_file(
    path: str | Path,
    documents: dict[str, TokenizedText],
    budget_k: int,
) -> dict[str, HighlightCorpusEntry]:
    """Read highlight records (ndjson) and validate them against the corpus.

    Each record: {"doc_id", "annotator_id", "spans": [[start, end), ...]},
    optionally "budget_k" which must match the corpus-wide budget.
    """
    per_doc: dict[str, list[HighlightSet]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            doc_id = str(record["doc_id"])
            if doc_id not in documents:
                raise SchemaMismatch(
                    f"highlight line {lineno} references unknown document {doc_id!r}"
                )
            if "budget_k" in record and int(record["budget_k"]) != budget_k:
                raise SchemaMismatch(
                    f"highlight line {lineno} carries budget_k={record['budget_k']}, "
                    f"corpus says {budget_k}"
                )
            highlight = validate_highlight(
                documents[doc_id],
                [(int(s), int(e)) for s, e in record["spans"]],
                budget_k,
                doc_id=doc_id,
                annotator_id=str(record.get("annotator_id", f"line-{lineno}")),
                created_at=float(record.get("created_at", 0.0)),
            )
            per_doc.setdefault(doc_id, []).append(highlight)
    return {
        doc_id: HighlightCorpusEntry(
            doc=documents[doc_id], highlights=tuple(sets), budget_k=budget_k, doc_id=doc_id
        )
        for doc_id, sets in per_doc.items()
    }
