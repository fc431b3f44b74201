# app/models.py
from sqlalchemy import Column, DateTime, Integer, String, Text
from sqlalchemy.sql import func

from .database import Base


class ExperimentRun(Base):
    __tablename__ = "experiment_runs"

    id = Column(Integer, primary_key=True, index=True)
    command = Column(String, index=True, nullable=False)
    parameters = Column(Text, nullable=False)  # RunConfig as JSON
    exit_code = Column(Integer, nullable=False)
    rows = Column(Integer, nullable=False, default=0)
    output_sha256 = Column(String(64), nullable=False)

    started_at = Column(DateTime(timezone=True), nullable=False)
    finished_at = Column(DateTime(timezone=True), server_default=func.now())

    def __repr__(self):
        return f"<ExperimentRun(command='{self.command}', exit_code={self.exit_code})>"
