"""HTTP surface over a campaign: task serving, submissions, documents, reports.

Bodies are JSON mirroring the storage schema.  Rejections are normal 200
responses carrying {"status": "rejected", "reason": ...} because a rejection
is a recorded outcome; structural problems (unknown task, expired lease,
malformed payloads) are 4xx errors and leave no event.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse, Response

from . import protocol
from .highlights import heatmap_weights
from .protocol import AnnotationTask, ContentJudgmentTask, QualityBatch
from .report import build_report, render_records, render_section_csv
from .store import (
    Campaign,
    LeaseExpired,
    UnknownTask,
    UnknownTaskType,
)

__all__ = ["create_app"]


def _document_payload(campaign: Campaign, doc_id: str) -> dict:
    doc = campaign.documents.get(doc_id)
    if doc is None:
        raise HTTPException(status_code=404, detail=f"unknown document {doc_id!r}")
    entries = campaign.highlight_entries()
    heatmap = heatmap_weights(entries[doc_id]) if doc_id in entries else [0.0] * len(doc)
    return {
        "doc_id": doc_id,
        "raw": doc.raw,
        "tokens": [
            {"surface": t.surface, "char_start": t.char_start, "char_end": t.char_end}
            for t in doc.tokens
        ],
        "sentence_bounds": [list(b) for b in doc.sentence_bounds],
        "heatmap": heatmap,
        "n_annotators": entries[doc_id].num_annotators if doc_id in entries else 0,
    }


def _task_payload(campaign: Campaign, task) -> dict:
    if isinstance(task, AnnotationTask):
        return {
            "task_id": task.task_id,
            "type": "highlight",
            "doc_id": task.doc_id,
            "budget_k": task.budget_k,
            "sanity_statement": task.sanity_statement,
        }
    if isinstance(task, ContentJudgmentTask):
        payload = {
            "task_id": task.task_id,
            "type": task.condition,
            "doc_id": task.doc_id,
            "summary_id": task.summary_id,
            "summary_text": campaign.corpus.summaries[task.doc_id][task.system],
            "sanity_statement": task.sanity_statement,
        }
        if task.condition == protocol.CONTENT_HIGHLIGHT:
            entries = campaign.highlight_entries()
            payload["heatmap"] = (
                heatmap_weights(entries[task.doc_id]) if task.doc_id in entries else []
            )
        return payload
    if isinstance(task, QualityBatch):
        return {
            "task_id": task.task_id,
            "type": task.metric,
            "metric": task.metric,
            "doc_id": task.doc_id,
            "items": [{"item_id": item_id, "text": text} for item_id, text in task.items],
        }
    raise HTTPException(status_code=500, detail="unrenderable task")


def create_app(campaign: Campaign) -> FastAPI:
    app = FastAPI(title="hileval", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.get("/api/tasks/next")
    def next_task(judge: str = Query(...), type: str = Query(...)):
        try:
            task = campaign.next_task(judge, type)
        except UnknownTaskType as exc:
            raise HTTPException(status_code=400, detail=f"unknown task type {exc}") from exc
        if task is None:
            return {"status": "exhausted"}
        return {"status": "ok", "task": _task_payload(campaign, task)}

    @app.post("/api/submissions")
    async def submit(request: Request):
        body = await request.json()
        judge = body.get("judge_id")
        if not judge:
            raise HTTPException(status_code=400, detail="submission needs judge_id")
        try:
            status, reason = campaign.submit(judge, body)
        except UnknownTask as exc:
            raise HTTPException(status_code=404, detail=f"unknown task: {exc}") from exc
        except LeaseExpired as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except (ValueError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        if status == "accepted":
            return {"status": "accepted"}
        return {"status": "rejected", "reason": reason}

    @app.get("/api/documents/{doc_id}")
    def document(doc_id: str):
        return _document_payload(campaign, doc_id)

    @app.get("/api/reports/{section}")
    def report(section: str, format: str = Query("records")):
        if section not in ("content", "quality", "hrouge"):
            raise HTTPException(status_code=404, detail=f"unknown report section {section!r}")
        full = build_report(campaign)
        rows = full.section(section)
        status = full.section_status.get(section, "unknown")
        if not rows:
            raise HTTPException(status_code=404, detail=status)
        if format == "csv":
            return Response(
                content=render_section_csv(section, rows), media_type="text/csv"
            )
        if format == "records":
            return PlainTextResponse(render_records(rows).decode("utf-8"))
        raise HTTPException(status_code=400, detail=f"unknown format {format!r}")

    return app
