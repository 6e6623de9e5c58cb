import logging
import math
from typing import List

from fastapi import APIRouter, Depends, HTTPException
from sqlalchemy.orm import Session

from app.schemas.invariants import (
    BenchRunOut,
    CanonicalOut,
    GroupInfo,
    GroupRequest,
    HilbertOut,
    PointsOut,
    SecondaryResultOut,
    VerifyOut,
)
from app.services.cyclo import cyclotomic_field
from app.services.database import get_db, list_bench_runs
from app.services.engine import EngineOptions, secondary_invariants, verify
from app.services.errors import ConsistencyError, InputError, ResourceError, SecInvError, VerificationError
from app.services.evalpoints import build_point_set
from app.services.groups import catalog, parse_group
from app.services.perm import PermGroup
from app.services.series import hilbert_series, secondary_spec

logger = logging.getLogger(__name__)

router = APIRouter()

# Map service errors to HTTP status codes
STATUS_FOR = (
    (VerificationError, 422),
    (InputError, 400),
    (ResourceError, 413),
    (ConsistencyError, 500),
)


def to_http(error: SecInvError) -> HTTPException:
    for cls, code in STATUS_FOR:
        if isinstance(error, cls):
            return HTTPException(status_code=code, detail=str(error))
    return HTTPException(status_code=500, detail=str(error))


def _group(request: GroupRequest) -> PermGroup:
    try:
        return parse_group(request.group)
    except SecInvError as e:
        raise to_http(e)


@router.get("/groups", response_model=List[GroupInfo])
def list_groups(max_n: int = 5):
    """Built-in catalog of named groups"""
    if not 1 <= max_n <= 7:
        raise HTTPException(status_code=400, detail="max_n must be between 1 and 7")
    return [GroupInfo(name=name, n=G.degree, order=G.order, t=math.factorial(G.degree) // G.order)
            for name, G in catalog(max_n)]


@router.post("/hilbert", response_model=HilbertOut)
def hilbert(request: GroupRequest):
    """Hilbert series prefix and the secondary-degree numerator"""
    G = _group(request)
    try:
        spec = secondary_spec(G)
        prefix = hilbert_series(G, spec.degree_bound).to_ints()
    except SecInvError as e:
        raise to_http(e)
    return HilbertOut.from_spec(spec, prefix)


@router.post("/points", response_model=PointsOut)
def points(request: GroupRequest):
    """Evaluation point representatives"""
    G = _group(request)
    try:
        P = build_point_set(G, cyclotomic_field(G.degree))
    except SecInvError as e:
        raise to_http(e)
    return PointsOut.from_points(G, P)


@router.post("/canonical-monomials", response_model=CanonicalOut)
def canonical_monomials(request: GroupRequest):
    """Counts of canonical monomials under the staircase"""
    return CanonicalOut.from_group(_group(request))


@router.post("/secondary", response_model=SecondaryResultOut)
def secondary(request: GroupRequest):
    """Secondary and irreducible secondary invariants"""
    G = _group(request)
    try:
        result = secondary_invariants(G, EngineOptions(exclude_partitions=request.exclude_partitions))
    except SecInvError as e:
        raise to_http(e)
    return SecondaryResultOut.from_result(result)


@router.post("/verify", response_model=VerifyOut)
def verify_group(request: GroupRequest):
    """Compute and verify; a failed clause answers 422 with the clause named"""
    G = _group(request)
    try:
        result = secondary_invariants(G, EngineOptions(exclude_partitions=request.exclude_partitions))
        report = verify(result, G)
        report.raise_for_failure()
    except SecInvError as e:
        raise to_http(e)
    return VerifyOut.from_report(report)


@router.get("/bench-runs", response_model=List[BenchRunOut])
def bench_runs(limit: int = 50, db: Session = Depends(get_db)):
    """Stored benchmark rows, newest first"""
    return [BenchRunOut.model_validate(row) for row in list_bench_runs(db, limit)]
