# /app/database.py
from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

Base = declarative_base()


def init_db(database_url: str) -> sessionmaker:
    """Create the engine and tables for the run ledger, return a session factory."""
    # the ORM models must be registered on Base before create_all
    from . import models  # noqa: F401

    engine = create_engine(database_url)
    Base.metadata.create_all(bind=engine)
    return sessionmaker(autocommit=False, autoflush=False, bind=engine)
