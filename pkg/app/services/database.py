import logging
from datetime import datetime
from functools import lru_cache
from typing import Iterator, List

from sqlalchemy import Column, DateTime, Float, Integer, String, create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, declarative_base, sessionmaker

from app.services.config import get_settings

logger = logging.getLogger(__name__)

Base = declarative_base()


# One row per benchmarked group
class BenchRunDB(Base):
    __tablename__ = "bench_runs"

    id = Column(Integer, primary_key=True, index=True)
    name = Column(String(200), nullable=False, index=True)
    n = Column(Integer, nullable=False)
    group_order = Column(Integer, nullable=False)
    t = Column(Integer, nullable=False)
    seconds = Column(Float, nullable=False)
    peak_candidates = Column(Integer, nullable=False)
    created_at = Column(DateTime, default=datetime.utcnow)


@lru_cache(maxsize=None)
def get_engine(url: str = None) -> Engine:
    """Engine for the configured DATABASE_URL, created on first use"""
    url = url or get_settings().database_url
    connect_args = {"check_same_thread": False} if url.startswith("sqlite") else {}
    return create_engine(url, connect_args=connect_args)


def session_factory(url: str = None) -> sessionmaker:
    return sessionmaker(autocommit=False, autoflush=False, bind=get_engine(url))


def create_tables(url: str = None) -> None:
    """Create database tables"""
    Base.metadata.create_all(bind=get_engine(url))
    logger.debug("bench_runs table ready")


def get_db() -> Iterator[Session]:
    """Get database session"""
    create_tables()
    db = session_factory()()
    try:
        yield db
    finally:
        db.close()


def store_bench_rows(rows, url: str = None) -> int:
    """Persist benchmark rows; returns how many were written"""
    create_tables(url)
    db = session_factory(url)()
    try:
        for row in rows:
            db.add(BenchRunDB(name=row.name, n=row.n, group_order=row.order, t=row.t,
                              seconds=row.seconds, peak_candidates=row.peak_candidates))
        db.commit()
        logger.info("✅ stored %d bench rows", len(rows))
        return len(rows)
    except Exception as e:
        logger.error("❌ storing bench rows failed: %s", e)
        db.rollback()
        raise
    finally:
        db.close()


def list_bench_runs(db: Session, limit: int = 50) -> List[BenchRunDB]:
    """Stored rows, newest first"""
    return (db.query(BenchRunDB)
            .order_by(BenchRunDB.created_at.desc(), BenchRunDB.id.desc())
            .limit(limit)
            .all())
