"""HTTP service: run creation, history and failure reporting."""
import pytest
from fastapi.testclient import TestClient

from app.config import UPLOADS_DIR
from app.database.connection import async_session
from app.main import app, cleanup_stale_runs
from app.models.run import ConformanceRun, RunStatus


@pytest.fixture
def client():
    with TestClient(app) as c:
        yield c


def _files(model, log):
    return {
        "model": (model.name, model.read_bytes(), "application/xml"),
        "log": (log.name, log.read_bytes(), "text/plain"),
    }


def test_health(client):
    assert client.get("/api/health").json() == {"status": "ok"}


def test_create_and_browse_run(client, running_files):
    resp = client.post("/api/runs", files=_files(*running_files), data={"approach": "tandem"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "completed"
    assert body["report"]["total_cost"] == 18
    run_id = body["id"]

    record = client.get(f"/api/runs/{run_id}").json()
    assert record["approach_used"] == "tandem"
    assert record["traces"] == 5
    assert record["distinct_reduced_traces"] == 3
    assert record["search_calls"] == 4
    assert record["report"]["results"][2]["cost"] == 3

    assert run_id in [r["id"] for r in client.get("/api/runs", params={"limit": 10}).json()]

    text = client.get(f"/api/runs/{run_id}/text")
    assert text.status_code == 200
    assert text.text.startswith("Conformance report")

    assert client.delete(f"/api/runs/{run_id}").json() == {"ok": True}
    assert client.get(f"/api/runs/{run_id}").status_code == 404


def test_alignments_on_request(client, running_files):
    resp = client.post("/api/runs", files=_files(*running_files), data={"emit_alignments": "true"})
    results = resp.json()["report"]["results"]
    assert results[0]["alignment"].startswith("MT(A),MT(B)")


def test_failed_run_is_recorded(client, tmp_path, running_files):
    _, log = running_files
    bad = tmp_path / "bad.pnml"
    bad.write_text("<pnml><net>", encoding="utf-8")
    resp = client.post("/api/runs", files=_files(bad, log))
    assert resp.status_code == 422
    detail = resp.json()["detail"]
    assert detail["phase"] == "model"

    record = client.get(f"/api/runs/{detail['id']}").json()
    assert record["status"] == "failed"
    assert record["error_phase"] == "model"
    assert record["report"] is None
    assert client.get(f"/api/runs/{detail['id']}/text").status_code == 409


def test_unknown_approach_is_rejected(client, running_files):
    resp = client.post("/api/runs", files=_files(*running_files), data={"approach": "greedy"})
    assert resp.status_code == 422


def test_unknown_run(client):
    assert client.get("/api/runs/999999").status_code == 404
    assert client.get("/api/runs/999999/text").status_code == 404
    assert client.delete("/api/runs/999999").status_code == 404


def test_uploads_are_removed(client, tmp_path, running_files):
    resp = client.post("/api/runs", files=_files(*running_files))
    assert resp.status_code == 200
    assert list(UPLOADS_DIR.iterdir()) == []

    _, log = running_files
    bad = tmp_path / "bad.pnml"
    bad.write_text("<pnml><net>", encoding="utf-8")
    assert client.post("/api/runs", files=_files(bad, log)).status_code == 422
    assert list(UPLOADS_DIR.iterdir()) == []

    assert client.delete(f"/api/runs/{resp.json()['id']}").json() == {"ok": True}
    assert list(UPLOADS_DIR.iterdir()) == []


def test_unexpected_error_marks_run_failed(client, running_files, monkeypatch):
    async def broken(cfg):
        raise RuntimeError("report assembly broke")

    monkeypatch.setattr("app.api.runs.run", broken)
    with pytest.raises(RuntimeError):
        client.post("/api/runs", files=_files(*running_files))

    latest = client.get("/api/runs", params={"limit": 1}).json()[0]
    assert latest["status"] == "failed"
    assert latest["error_phase"] == "internal"
    assert latest["error_log"] == "report assembly broke"
    assert list(UPLOADS_DIR.iterdir()) == []


def test_stale_runs_are_failed_on_startup(client):
    async def insert_running() -> int:
        async with async_session() as db:
            record = ConformanceRun(status=RunStatus.running.value)
            db.add(record)
            await db.commit()
            return record.id

    run_id = client.portal.call(insert_running)
    assert client.portal.call(cleanup_stale_runs) >= 1

    record = client.get(f"/api/runs/{run_id}").json()
    assert record["status"] == "failed"
    assert record["error_phase"] == "interrupted"

