"""Conformance run API: upload a model and a log, run the pipeline, browse past runs."""
import json
import logging
import uuid
from datetime import datetime
from pathlib import Path

from fastapi import APIRouter, Depends, File, Form, HTTPException, UploadFile
from fastapi.responses import PlainTextResponse
from pydantic import ValidationError
from sqlalchemy import select
from sqlalchemy.ext.asyncio import AsyncSession

from app.config import UPLOADS_DIR
from app.database.connection import get_db
from app.errors import PipelineError
from app.models.run import ConformanceRun, RunStatus
from app.pipeline.orchestrator import Approach, RunConfig, run
from app.pipeline.report import ConformanceReport, render_text

logger = logging.getLogger(__name__)
router = APIRouter(prefix="/api/runs", tags=["runs"])


async def _store_upload(upload: UploadFile) -> Path:
    """Save an upload under UPLOADS_DIR keeping its extension (the log reader depends on it)."""
    name = Path(upload.filename or "upload").name
    target = UPLOADS_DIR / f"{uuid.uuid4().hex[:12]}_{name}"
    target.write_bytes(await upload.read())
    return target


@router.post("")
async def create_run(
    model: UploadFile = File(...),
    log: UploadFile = File(...),
    approach: Approach = Form(Approach.hybrid),
    emit_alignments: bool = Form(False),
    db: AsyncSession = Depends(get_db),
):
    """Run the conformance pipeline on uploaded files and persist the outcome.

    Uploads only live for the duration of the request.
    """
    uploads = [await _store_upload(model), await _store_upload(log)]
    try:
        return await _execute(uploads, model, log, approach, emit_alignments, db)
    finally:
        for path in uploads:
            path.unlink(missing_ok=True)


async def _execute(uploads, model, log, approach, emit_alignments, db) -> dict:
    model_path, log_path = uploads
    try:
        cfg = RunConfig(model_path=model_path, log_path=log_path, approach=approach, emit_alignments=emit_alignments)
    except ValidationError as exc:
        raise HTTPException(400, str(exc))

    record = ConformanceRun(
        model_name=model.filename or "",
        log_name=log.filename or "",
        approach_requested=approach.value,
        status=RunStatus.running.value,
    )
    db.add(record)
    await db.commit()
    await db.refresh(record)

    try:
        report = await run(cfg)
        report_json = report.model_dump_json(exclude_none=True)
    except PipelineError as exc:
        await _mark_failed(db, record, exc.phase, exc.cause)
        raise HTTPException(422, {"id": record.id, "phase": exc.phase, "error": str(exc.cause)})
    except Exception as exc:
        await _mark_failed(db, record, "internal", exc)
        raise

    record.status = RunStatus.completed.value
    record.approach_used = report.approach_used
    record.traces = report.traces
    record.distinct_reduced_traces = report.distinct_reduced_traces
    record.search_calls = report.search.calls
    record.total_cost = report.total_cost
    record.average_cost = report.average_cost
    record.report_json = report_json
    record.completed_at = datetime.utcnow()
    await db.commit()
    logger.info("Run %d completed: %d traces, total cost %d", record.id, report.traces, report.total_cost)
    return {"id": record.id, "status": record.status, "report": json.loads(record.report_json)}


async def _mark_failed(db: AsyncSession, record: ConformanceRun, phase: str, cause: BaseException) -> None:
    logger.warning("Run %d failed in phase %s: %s", record.id, phase, cause)
    record.status = RunStatus.failed.value
    record.error_phase = phase
    record.error_log = str(cause)
    record.completed_at = datetime.utcnow()
    await db.commit()


@router.get("")
async def list_runs(limit: int = 50, db: AsyncSession = Depends(get_db)):
    """List recent runs, newest first."""
    stmt = select(ConformanceRun).order_by(ConformanceRun.id.desc()).limit(limit)
    result = await db.execute(stmt)
    return [_to_dict(r) for r in result.scalars().all()]


@router.get("/{run_id}")
async def get_run(run_id: int, db: AsyncSession = Depends(get_db)):
    record = await db.get(ConformanceRun, run_id)
    if not record:
        raise HTTPException(404, "run not found")
    data = _to_dict(record)
    data["report"] = json.loads(record.report_json) if record.report_json else None
    return data


@router.get("/{run_id}/text", response_class=PlainTextResponse)
async def get_run_text(run_id: int, db: AsyncSession = Depends(get_db)):
    record = await db.get(ConformanceRun, run_id)
    if not record:
        raise HTTPException(404, "run not found")
    if not record.report_json:
        raise HTTPException(409, "run has no report")
    return render_text(ConformanceReport.model_validate_json(record.report_json))


@router.delete("/{run_id}")
async def delete_run(run_id: int, db: AsyncSession = Depends(get_db)):
    record = await db.get(ConformanceRun, run_id)
    if not record:
        raise HTTPException(404, "run not found")
    await db.delete(record)
    await db.commit()
    return {"ok": True}


def _to_dict(r: ConformanceRun) -> dict:
    return {
        "id": r.id,
        "status": r.status,
        "model_name": r.model_name,
        "log_name": r.log_name,
        "approach_requested": r.approach_requested,
        "approach_used": r.approach_used,
        "traces": r.traces,
        "distinct_reduced_traces": r.distinct_reduced_traces,
        "search_calls": r.search_calls,
        "total_cost": r.total_cost,
        "average_cost": r.average_cost,
        "error_phase": r.error_phase,
        "error_log": r.error_log,
        "started_at": str(r.started_at) if r.started_at else None,
        "completed_at": str(r.completed_at) if r.completed_at else None,
    }
