import math
from datetime import datetime
from typing import List, Optional

from pydantic import BaseModel, Field

from app.services.cyclo import CycloElement
from app.services.engine import SecondaryResult, VerificationReport
from app.services.evalpoints import PointSet
from app.services.monomials import canonical_counts, catalan
from app.services.perm import PermGroup
from app.services.series import SecondarySpec


# Explicit group input: 1-based cycles per generator
class ExplicitGroupSpec(BaseModel):
    degree: int = Field(ge=1)
    generators: List[List[List[int]]] = []
    name: Optional[str] = None


# For API requests
class GroupRequest(BaseModel):
    group: str
    exclude_partitions: bool = False


class CycloOut(BaseModel):
    coeffs: List[str]

    @classmethod
    def from_element(cls, x: CycloElement) -> "CycloOut":
        return cls(**x.to_json())


def _vector(phi) -> List[CycloOut]:
    return [CycloOut.from_element(x) for x in phi]


class IrreducibleOut(BaseModel):
    id: int
    degree: int
    monomial: List[int]
    phi: List[CycloOut]


class SecondaryOut(BaseModel):
    degree: int
    factors: List[int]
    phi: List[CycloOut]


# Full result of the secondary computation; field order is the wire order
class SecondaryResultOut(BaseModel):
    n: int
    group_order: int
    t: int
    epsilon: int
    numerator: List[int]
    points: List[List[int]]
    irreducibles: List[IrreducibleOut]
    secondaries: List[SecondaryOut]

    @classmethod
    def from_result(cls, result: SecondaryResult) -> "SecondaryResultOut":
        spec = result.spec
        return cls(
            n=spec.n,
            group_order=spec.group_order,
            t=spec.t,
            epsilon=spec.epsilon,
            numerator=list(spec.s),
            points=[list(p.exponents) for p in result.points.points],
            irreducibles=[
                IrreducibleOut(id=i.id, degree=i.degree, monomial=list(i.monomial), phi=_vector(i.phi))
                for i in result.irreducibles
            ],
            secondaries=[
                SecondaryOut(degree=s.degree, factors=list(s.factors), phi=_vector(s.phi))
                for s in result.secondaries
            ],
        )


class HilbertOut(BaseModel):
    n: int
    group_order: int
    hilbert_prefix: List[int]
    secondary_numerator: List[int]
    t: int
    degree_bound: int

    @classmethod
    def from_spec(cls, spec: SecondarySpec, prefix: List[int]) -> "HilbertOut":
        return cls(
            n=spec.n,
            group_order=spec.group_order,
            hilbert_prefix=prefix,
            secondary_numerator=list(spec.s),
            t=spec.t,
            degree_bound=spec.degree_bound,
        )


class PointsOut(BaseModel):
    n: int
    group_order: int
    points: List[List[int]]

    @classmethod
    def from_points(cls, G: PermGroup, P: PointSet) -> "PointsOut":
        return cls(n=G.degree, group_order=G.order, points=[list(p.exponents) for p in P.points])


class CanonicalOut(BaseModel):
    n: int
    group_order: int
    counts_by_degree: List[int]
    C: int
    C_prime: int
    catalan: int
    t: int
    per_secondary: float

    @classmethod
    def from_group(cls, G: PermGroup) -> "CanonicalOut":
        counts = canonical_counts(G)
        total = sum(counts.values())
        t = math.factorial(G.degree) // G.order
        return cls(
            n=G.degree,
            group_order=G.order,
            counts_by_degree=[counts[d] for d in sorted(counts)],
            C=total,
            C_prime=total - catalan(G.degree) + 1,
            catalan=catalan(G.degree),
            t=t,
            per_secondary=total / t,
        )


class ClauseOut(BaseModel):
    clause: str
    passed: bool
    skipped: bool
    detail: str


class VerifyOut(BaseModel):
    ok: bool
    clauses: List[ClauseOut]

    @classmethod
    def from_report(cls, report: VerificationReport) -> "VerifyOut":
        return cls(
            ok=report.ok,
            clauses=[ClauseOut(clause=c.clause, passed=c.passed, skipped=c.skipped, detail=c.detail)
                     for c in report.clauses],
        )


class GroupInfo(BaseModel):
    name: str
    n: int
    order: int
    t: int


# For stored benchmark rows
class BenchRunOut(BaseModel):
    id: int
    name: str
    n: int
    group_order: int
    t: int
    seconds: float
    peak_candidates: int
    created_at: datetime

    class Config:
        from_attributes = True  # For SQLAlchemy compatibility
