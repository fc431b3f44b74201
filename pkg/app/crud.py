# app/crud.py

from datetime import datetime
from typing import List, Optional

from sqlalchemy.orm import Session

from . import models

# --- Run ledger ---

def create_run(
    db: Session,
    command: str,
    parameters: str,
    exit_code: int,
    rows: int,
    output_sha256: str,
    started_at: datetime,
) -> models.ExperimentRun:
    """
    Record one finished CLI run.
    """
    db_run = models.ExperimentRun(
        command=command,
        parameters=parameters,
        exit_code=exit_code,
        rows=rows,
        output_sha256=output_sha256,
        started_at=started_at,
    )
    db.add(db_run)
    db.commit()
    db.refresh(db_run)
    return db_run

def get_run(db: Session, run_id: int) -> Optional[models.ExperimentRun]:
    return db.query(models.ExperimentRun).filter(models.ExperimentRun.id == run_id).first()

def list_runs(
    db: Session, command: Optional[str] = None, skip: int = 0, limit: int = 100
) -> List[models.ExperimentRun]:
    """
    Recorded runs, oldest first, optionally for one subcommand.
    """
    query = db.query(models.ExperimentRun)
    if command:
        query = query.filter(models.ExperimentRun.command == command)
    return query.order_by(models.ExperimentRun.id).offset(skip).limit(limit).all()
