from datetime import datetime
import enum

from sqlalchemy import Float, Integer, String, Text, DateTime
from sqlalchemy.orm import Mapped, mapped_column

from app.database.connection import Base


class RunStatus(str, enum.Enum):
    running = "running"
    completed = "completed"
    failed = "failed"


class ConformanceRun(Base):
    __tablename__ = "conformance_runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    status: Mapped[str] = mapped_column(String(20), default=RunStatus.running.value)
    model_name: Mapped[str] = mapped_column(String(255), default="")
    log_name: Mapped[str] = mapped_column(String(255), default="")
    approach_requested: Mapped[str] = mapped_column(String(20), default="hybrid")
    approach_used: Mapped[str] = mapped_column(String(20), default="")
    traces: Mapped[int] = mapped_column(Integer, default=0)
    distinct_reduced_traces: Mapped[int] = mapped_column(Integer, default=0)
    search_calls: Mapped[int] = mapped_column(Integer, default=0)
    total_cost: Mapped[int] = mapped_column(Integer, default=0)
    average_cost: Mapped[float] = mapped_column(Float, default=0.0)
    report_json: Mapped[str] = mapped_column(Text, default="")
    error_phase: Mapped[str] = mapped_column(String(30), default="")
    error_log: Mapped[str] = mapped_column(Text, default="")
    started_at: Mapped[datetime] = mapped_column(DateTime, default=datetime.utcnow)
    completed_at: Mapped[datetime | None] = mapped_column(DateTime, nullable=True)
