"""FastAPI application entry point."""
import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI
from sqlalchemy import update

from app.config import APP_HOST, APP_PORT
from app.database.connection import async_session, init_db

# Import all models so SQLAlchemy knows about them
from app.models.run import ConformanceRun, RunStatus

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
)
logger = logging.getLogger(__name__)


async def cleanup_stale_runs() -> int:
    """Mark runs left 'running' by a previous process as failed."""
    async with async_session() as db:
        result = await db.execute(
            update(ConformanceRun)
            .where(ConformanceRun.status == RunStatus.running.value)
            .values(
                status=RunStatus.failed.value,
                error_phase="interrupted",
                error_log="service restarted before the run finished",
            )
        )
        if result.rowcount:
            await db.commit()
            logger.info("Cleaned up %d stale running runs", result.rowcount)
        return result.rowcount


@asynccontextmanager
async def lifespan(app: FastAPI):
    await init_db()
    await cleanup_stale_runs()
    logger.info("Application started")
    yield


app = FastAPI(title="Tandem conformance checker", version="1.0.0", lifespan=lifespan)

# Register API routers
from app.api.runs import router as runs_router  # noqa: E402

app.include_router(runs_router)


@app.get("/api/health")
async def health():
    return {"status": "ok"}


def main():
    import uvicorn

    uvicorn.run("app.main:app", host=APP_HOST, port=APP_PORT, reload=False)


if __name__ == "__main__":
    main()
