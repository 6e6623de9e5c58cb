"""
Secondary and irreducible secondary invariants of a permutation group by
evaluation, with e_1, ..., e_n as primary invariants.

Degree by degree, E_d models Φ(R^G_d). It starts from E_(d-n)
(Φ(e_n) is a nonzero constant, so E_(d-n)·e_n lands in degree d), is grown
by products η·η' of a secondary and an irreducible of lower degrees, and is
then completed with orbit sums of staircase monomials, which become the new
irreducibles. A degree is done once dim E_d = e_d.

Independence is decided on the images in GF(p) (see exactla), which certify
independence over Q(ζ). The exact Φ-vectors of products are only formed when
something reads them.
"""
import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np

from app.services.config import get_settings
from app.services.cyclo import cyclotomic_field
from app.services.errors import ConsistencyError, InputError, ResourceError, VerificationError
from app.services.evalpoints import (
    EvalVector,
    OrbitSumEvaluator,
    PointSet,
    ProductVector,
    build_point_set,
    eval_elementary,
    eval_orbitsum,
    eval_polynomial,
    hadamard,
)
from app.services.exactla import (
    EchelonBasis,
    ModularEchelonBasis,
    ModularReduction,
    modular_rank,
    reduction_primes,
)
from app.services.monomials import CandidateStream, Monomial, compositions
from app.services.perm import PermGroup, act_on_vector, orbit_of_vector
from app.services.series import SecondarySpec, secondary_spec

logger = logging.getLogger(__name__)

Polynomial = Dict[Monomial, Fraction]


@dataclass(frozen=True)
class IrreducibleSecondary:
    id: int
    monomial: Monomial
    degree: int
    phi: EvalVector


@dataclass(frozen=True)
class SecondaryInvariant:
    factors: Tuple[int, ...]  # sorted irreducible ids; () is the invariant 1
    degree: int
    phi: EvalVector


@dataclass(frozen=True)
class EngineOptions:
    exclude_partitions: bool = False
    workers: int = 1
    max_points_n: Optional[int] = None
    primes: Tuple[int, ...] = ()  # elimination primes, tried in order; empty for the defaults


@dataclass
class SecondaryResult:
    group: PermGroup
    spec: SecondarySpec
    S: List[List[SecondaryInvariant]]
    I: List[List[IrreducibleSecondary]]
    points: PointSet
    timings: Dict[str, float] = field(default_factory=dict)
    candidates_per_degree: List[int] = field(default_factory=list)

    @property
    def secondaries(self) -> List[SecondaryInvariant]:
        return [s for level in self.S for s in level]

    @property
    def irreducibles(self) -> List[IrreducibleSecondary]:
        return [i for level in self.I for i in level]

    def irreducible_map(self) -> Dict[int, IrreducibleSecondary]:
        return {irr.id: irr for irr in self.irreducibles}

    @property
    def degrees(self) -> List[int]:
        return [s.degree for s in self.secondaries]

    @property
    def peak_candidates(self) -> int:
        return max(self.candidates_per_degree, default=0)


def _product_pairs(S: Sequence[Sequence[SecondaryInvariant]],
                   I: Sequence[Sequence[IrreducibleSecondary]],
                   d: int) -> Iterator[Tuple[Tuple[int, ...], SecondaryInvariant, IrreducibleSecondary]]:
    if d <= 0:
        raise InputError(f"products need a positive degree, got {d}")
    seen: Set[Tuple[int, ...]] = set()
    for k in range(d):
        l = d - k
        if k >= len(S) or l >= len(I):
            continue
        for eta in S[k]:
            for irr in I[l]:
                factors = tuple(sorted(eta.factors + (irr.id,)))
                if factors in seen:
                    continue
                seen.add(factors)
                yield factors, eta, irr


def iter_product_candidates(S: Sequence[Sequence[SecondaryInvariant]],
                            I: Sequence[Sequence[IrreducibleSecondary]],
                            d: int) -> Iterator[SecondaryInvariant]:
    """Products η·η' with η in S_k, η' in I_l, k + l = d, l >= 1; each factor multiset once"""
    for factors, eta, irr in _product_pairs(S, I, d):
        yield SecondaryInvariant(factors=factors, degree=d, phi=ProductVector(eta.phi, irr.phi))


def product_candidates(S, I, d: int) -> List[SecondaryInvariant]:
    return list(iter_product_candidates(S, I, d))


class _DegreeRun:
    """Book-keeping for one degree of the main loop"""

    def __init__(self, basis: ModularEchelonBasis, target: int):
        self.basis = basis
        self.target = target
        self.considered = 0
        self.eval_seconds = 0.0
        self.elim_seconds = 0.0

    @property
    def done(self) -> bool:
        return self.basis.dimension >= self.target

    def offer(self, image: np.ndarray) -> bool:
        self.considered += 1
        started = time.perf_counter()
        grew = self.basis.insert(image)
        self.elim_seconds += time.perf_counter() - started
        return grew


class _ShortDegree(Exception):
    def __init__(self, degree: int, dimension: int, target: int):
        self.degree = degree
        self.dimension = dimension
        self.target = target
        super().__init__(f"degree {degree}: reached dimension {dimension}, expected e_d = {target}")


@dataclass
class _Elimination:
    S: List[List[SecondaryInvariant]] = field(default_factory=list)
    I: List[List[IrreducibleSecondary]] = field(default_factory=list)
    candidates_per_degree: List[int] = field(default_factory=list)
    eval_seconds: float = 0.0
    elim_seconds: float = 0.0


def _check_point_cap(n: int, max_n: Optional[int]) -> None:
    max_n = get_settings().max_points_n if max_n is None else max_n
    if n > max_n:
        raise ResourceError(f"enumerating {n}! permutation words exceeds the cap n <= {max_n}")


def _check_epsilon(spec: SecondarySpec, P: PointSet) -> None:
    expected = P.field.scalar(spec.epsilon)
    if any(v != expected for v in eval_elementary(spec.n, P)):
        raise ConsistencyError(f"e_{spec.n} does not evaluate to {spec.epsilon} at every point")


def _eliminate(G: PermGroup, spec: SecondarySpec, P: PointSet, reduction: ModularReduction,
               evaluator: OrbitSumEvaluator, options: EngineOptions) -> _Elimination:
    """
    The degree loop over GF(p) images. Accepted candidates are certified
    independent over Q(ζ); a shortfall means p was unlucky.
    """
    n = G.degree
    r = P.size
    out = _Elimination()
    secondary_images: Dict[Tuple[int, ...], np.ndarray] = {}
    irreducible_images: Dict[int, np.ndarray] = {}
    # E_(d-n) is handed on to degree d; nothing else reads it
    carried: Dict[int, ModularEchelonBasis] = {}
    next_id = 0

    for d in range(spec.max_degree + 1):
        target = spec.e[d]
        basis = carried.pop(d % n, None)
        if basis is None:
            basis = ModularEchelonBasis(reduction, r, target)
        else:
            basis.reserve(target)
        run = _DegreeRun(basis, target)
        S_d: List[SecondaryInvariant] = []
        I_d: List[IrreducibleSecondary] = []

        if d == 0:
            one = SecondaryInvariant(factors=(), degree=0, phi=P.ones())
            secondary_images[()] = reduction.image(one.phi)
            run.offer(secondary_images[()])
            S_d.append(one)
        else:
            started = time.perf_counter()
            for factors, eta, irr in _product_pairs(out.S, out.I, d):
                if run.done:
                    break
                image = reduction.product(secondary_images[eta.factors], irreducible_images[irr.id])
                run.eval_seconds += time.perf_counter() - started
                if run.offer(image):
                    S_d.append(SecondaryInvariant(factors=factors, degree=d,
                                                  phi=ProductVector(eta.phi, irr.phi)))
                    secondary_images[factors] = image
                started = time.perf_counter()

            tried: Set[Monomial] = set()
            streams = [CandidateStream(G, d, options.exclude_partitions)]
            if options.exclude_partitions:
                streams.append(CandidateStream(G, d, False))
            for attempt, stream in enumerate(streams):
                if run.done:
                    break
                if attempt:
                    logger.warning("degree %d stuck at dim %d/%d without partitions; retrying with them",
                                   d, run.basis.dimension, run.target)
                monomials = (m for m in stream if m not in tried)
                while not run.done:
                    batch = list(itertools.islice(monomials, evaluator.batch_size))
                    if not batch:
                        break
                    started = time.perf_counter()
                    vectors = evaluator.evaluate(batch)
                    images = [reduction.image(phi) for phi in vectors]
                    run.eval_seconds += time.perf_counter() - started
                    for m, phi, image in zip(batch, vectors, images):
                        if run.done:
                            break
                        tried.add(m)
                        if run.offer(image):
                            irr = IrreducibleSecondary(id=next_id, monomial=m, degree=d, phi=phi)
                            next_id += 1
                            I_d.append(irr)
                            S_d.append(SecondaryInvariant(factors=(irr.id,), degree=d, phi=phi))
                            irreducible_images[irr.id] = image
                            secondary_images[(irr.id,)] = image

        out.eval_seconds += run.eval_seconds
        out.elim_seconds += run.elim_seconds
        if run.basis.dimension < run.target:
            raise _ShortDegree(d, run.basis.dimension, run.target)
        if run.basis.dimension > run.target:
            raise ConsistencyError(
                f"degree {d}: reached dimension {run.basis.dimension}, expected e_d = {run.target}")
        out.S.append(S_d)
        out.I.append(I_d)
        out.candidates_per_degree.append(run.considered)
        carried[d % n] = run.basis
        logger.info("✅ degree %d: dim %d/%d, %d secondaries, %d irreducibles, %d candidates",
                    d, run.basis.dimension, run.target, len(S_d), len(I_d), run.considered)
    return out


def secondary_invariants(G: PermGroup, options: EngineOptions = EngineOptions()) -> SecondaryResult:
    """Secondary invariants S_d and irreducible secondary invariants I_d of G, per degree"""
    n = G.degree
    _check_point_cap(n, options.max_points_n)
    timings = {"closure": G.closure_seconds, "series": 0.0, "points": 0.0,
               "evaluation": 0.0, "elimination": 0.0}

    started = time.perf_counter()
    spec = secondary_spec(G)
    timings["series"] = time.perf_counter() - started

    started = time.perf_counter()
    F = cyclotomic_field(n)
    P = build_point_set(G, F, options.max_points_n)
    _check_epsilon(spec, P)
    timings["points"] = time.perf_counter() - started

    primes = options.primes or reduction_primes(n)
    with OrbitSumEvaluator(G, P, options.workers) as evaluator:
        for prime in primes:
            try:
                out = _eliminate(G, spec, P, ModularReduction(F, prime), evaluator, options)
                break
            except _ShortDegree as e:
                logger.warning("%s mod %d; retrying with another prime", e, prime)
        else:
            raise ConsistencyError(f"no elimination prime in {list(primes)} reached every e_d")

    timings["evaluation"] = out.eval_seconds
    timings["elimination"] = out.elim_seconds
    return SecondaryResult(group=G, spec=spec, S=out.S, I=out.I, points=P, timings=timings,
                           candidates_per_degree=out.candidates_per_degree)


def _multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    out: Polynomial = {}
    for a, x in p.items():
        for b, y in q.items():
            key = tuple(i + j for i, j in zip(a, b))
            out[key] = out.get(key, Fraction(0)) + x * y
    return {k: v for k, v in out.items() if v != 0}


def orbit_sum_polynomial(G: PermGroup, m: Sequence[int]) -> Polynomial:
    return {beta: Fraction(1) for beta in orbit_of_vector(G, m)}


def expand(s: SecondaryInvariant, G: PermGroup, irreducibles: Mapping[int, IrreducibleSecondary],
           cap: Optional[int] = None) -> Polynomial:
    """The secondary invariant as an explicit polynomial {exponent vector: coefficient}"""
    cap = get_settings().expansion_cap if cap is None else cap
    if G.degree > cap:
        raise ResourceError(f"expanding invariants on {G.degree} variables exceeds the cap n <= {cap}")
    poly: Polynomial = {(0,) * G.degree: Fraction(1)}
    for fid in s.factors:
        poly = _multiply(poly, orbit_sum_polynomial(G, irreducibles[fid].monomial))
    return poly


@dataclass(frozen=True)
class ClauseResult:
    clause: str
    passed: bool
    detail: str
    skipped: bool = False


@dataclass
class VerificationReport:
    clauses: List[ClauseResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.clauses)

    @property
    def failures(self) -> List[ClauseResult]:
        return [c for c in self.clauses if not c.passed]

    def clause(self, name: str) -> ClauseResult:
        return next(c for c in self.clauses if c.clause == name)

    def raise_for_failure(self) -> None:
        for c in self.failures:
            raise VerificationError(c.clause, c.detail)


def _check_counts(result: SecondaryResult) -> ClauseResult:
    spec = result.spec
    counts = [len(level) for level in result.S]
    if counts != list(spec.s):
        return ClauseResult("a", False, f"per-degree counts {counts} differ from numerator {list(spec.s)}")
    if sum(counts) != spec.t:
        return ClauseResult("a", False, f"{sum(counts)} secondaries, expected t = {spec.t}")
    return ClauseResult("a", True, f"counts {counts} match the numerator, t = {spec.t}")


def _full_rank_mod_p(vectors: Sequence[EvalVector], P: PointSet) -> bool:
    """True only when the vectors are certainly independent over Q(ζ)"""
    if not vectors:
        return True
    try:
        reduction = ModularReduction(P.field, reduction_primes(P.field.n)[0])
        return modular_rank(vectors, reduction) == len(vectors)
    except ConsistencyError:
        return False


def _check_basis(result: SecondaryResult) -> ClauseResult:
    vectors = [s.phi for s in result.secondaries]
    if _full_rank_mod_p(vectors, result.points):
        rank = len(vectors)
    else:
        basis = EchelonBasis(result.points.field, result.points.size)
        for v in vectors:
            basis.insert(v)
        rank = basis.dimension
    if rank != result.spec.t:
        return ClauseResult("b", False, f"Φ-images have rank {rank}, expected {result.spec.t}")
    return ClauseResult("b", True, f"Φ-images form a basis (rank {rank})")


def _check_graded(result: SecondaryResult) -> ClauseResult:
    n = result.group.degree
    F, r = result.points.field, result.points.size
    for d, level in enumerate(result.S):
        lower = [s.phi for j in range(d - n, -1, -n) for s in result.S[j]]
        if _full_rank_mod_p(lower + [s.phi for s in level], result.points):
            continue
        carried = EchelonBasis(F, r)
        for v in lower:
            carried.insert(v)
        for s in level:
            if not carried.insert(s.phi):
                return ClauseResult("c", False, f"degree {d}: {s.factors} depends on lower degrees")
    return ClauseResult("c", True, "each degree is independent modulo the carried subspace")


def _check_expansions(result: SecondaryResult, cap: int) -> ClauseResult:
    G = result.group
    if G.degree > cap:
        return ClauseResult("d", True, f"skipped: n = {G.degree} > {cap}", skipped=True)
    irreducibles = result.irreducible_map()
    for s in result.secondaries:
        structural = result.points.ones()
        for fid in s.factors:
            structural = hadamard(structural, irreducibles[fid].phi)
        if structural != s.phi:
            return ClauseResult("d", False, f"{s.factors}: phi is not the product of its factors' phi")
        poly = expand(s, G, irreducibles, cap)
        for g in G.generators:
            if {act_on_vector(g, alpha): c for alpha, c in poly.items()} != poly:
                return ClauseResult("d", False, f"{s.factors}: expansion is not fixed by {g}")
        if eval_polynomial(poly, result.points) != s.phi:
            return ClauseResult("d", False, f"{s.factors}: Φ of the expansion differs from the stored phi")
    return ClauseResult("d", True, "expansions are invariant and evaluate to the stored phi")


def _check_dimensions(result: SecondaryResult, cap: int) -> ClauseResult:
    G = result.group
    n = G.degree
    if n > cap:
        return ClauseResult("e", True, f"skipped: n = {n} > {cap}", skipped=True)
    spec = result.spec
    for d in range(math.comb(n, 2) + 1):
        basis = EchelonBasis(result.points.field, result.points.size)
        seen: Set[Monomial] = set()
        for alpha in compositions(d, n):
            if alpha in seen:
                continue
            seen |= orbit_of_vector(G, alpha)
            basis.insert(eval_orbitsum(G, alpha, result.points))
        expected = sum(spec.s[j] for j in range(d, -1, -n) if j < len(spec.s))
        if basis.dimension != expected:
            return ClauseResult("e", False, f"dim Φ(R^G_{d}) = {basis.dimension}, expected {expected}")
    return ClauseResult("e", True, "dim Φ(R^G_d) matches the carried counts for every degree")


def verify(result: SecondaryResult, G: Optional[PermGroup] = None,
           expansion_cap: Optional[int] = None, dimension_cap: Optional[int] = None) -> VerificationReport:
    """Check counts, the basis property, graded independence, expansions and degree dimensions"""
    settings = get_settings()
    if G is not None and G.elements != result.group.elements:
        raise InputError("result was computed for a different group")
    expansion_cap = settings.expansion_cap if expansion_cap is None else expansion_cap
    dimension_cap = settings.dimension_cap if dimension_cap is None else dimension_cap
    report = VerificationReport(clauses=[
        _check_counts(result),
        _check_basis(result),
        _check_graded(result),
        _check_expansions(result, expansion_cap),
        _check_dimensions(result, dimension_cap),
    ])
    for c in report.failures:
        logger.error("❌ verification clause (%s): %s", c.clause, c.detail)
    return report
