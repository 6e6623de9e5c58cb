"""
Permutations of {0, ..., n-1} and finite permutation groups.

A permutation is stored as its image array: ``images[i] = g(i)``. Cycle
notation at the edges of the package (CLI, JSON) is 1-based; everything in
here is 0-based.
"""
import logging
import time
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from app.services.config import get_settings
from app.services.errors import InputError, ResourceError

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class Permutation:
    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if not images:
            raise InputError("a permutation needs degree >= 1")
        if sorted(images) != list(range(len(images))):
            raise InputError(f"{images} is not a permutation of 0..{len(images) - 1}")
        object.__setattr__(self, "images", images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def is_identity(self) -> bool:
        return all(i == g for i, g in enumerate(self.images))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point"""
        seen = [False] * self.degree
        result = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cycle = []
            i = start
            while not seen[i]:
                seen[i] = True
                cycle.append(i)
                i = self.images[i]
            if len(cycle) > 1:
                result.append(tuple(cycle))
        return result

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cycles)


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
    """Build a permutation from 1-based cycles, e.g. from_cycles(3, [(1, 2, 3)])"""
    images = list(range(n))
    used: Set[int] = set()
    for cycle in cycles:
        points = [p - 1 for p in cycle]
        for p in points:
            if not 0 <= p < n:
                raise InputError(f"point {p + 1} out of range 1..{n}")
            if p in used:
                raise InputError(f"point {p + 1} appears twice")
            used.add(p)
        for a, b in zip(points, points[1:] + points[:1]):
            images[a] = b
    return Permutation(tuple(images))


def compose(g: Permutation, h: Permutation) -> Permutation:
    """(g ∘ h)(i) = g(h(i))"""
    if g.degree != h.degree:
        raise InputError(f"degree mismatch: {g.degree} vs {h.degree}")
    gi = g.images
    return Permutation(tuple(gi[j] for j in h.images))


def inverse(g: Permutation) -> Permutation:
    images = [0] * g.degree
    for i, j in enumerate(g.images):
        images[j] = i
    return Permutation(tuple(images))


def _act(images: Sequence[int], v: Sequence[int]) -> Vector:
    result = [0] * len(images)
    for i, gi in enumerate(images):
        result[gi] = v[i]
    return tuple(result)


def act_on_vector(g: Permutation, v: Sequence[int]) -> Vector:
    """Left action on positions: result[g(i)] = v[i]"""
    if len(v) != g.degree:
        raise InputError(f"vector of length {len(v)} for a permutation of degree {g.degree}")
    return _act(g.images, v)


def cycle_type(g: Permutation) -> Tuple[int, ...]:
    """Cycle lengths (fixed points included), sorted descending"""
    seen = [False] * g.degree
    lengths = []
    for start in range(g.degree):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            length += 1
            i = g.images[i]
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: Tuple[Permutation, ...]
    elements: Tuple[Permutation, ...]
    closure_seconds: float = field(default=0.0, compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Permutation) -> bool:
        return g in self._element_set

    @property
    def _element_set(self) -> frozenset:
        cached = self.__dict__.get("_cached_set")
        if cached is None:
            cached = frozenset(self.elements)
            object.__setattr__(self, "_cached_set", cached)
        return cached

    def cycle_type_tally(self) -> Counter:
        """How many elements share each cycle type"""
        return Counter(cycle_type(g) for g in self.elements)


def closure(generators: Sequence[Permutation], degree: Optional[int] = None,
            cap: Optional[int] = None) -> PermGroup:
    """
    Enumerate the group generated by ``generators``.

    Breadth-first: multiply every new element on the left by each generator
    until nothing new appears. ``degree`` is only needed when there are no
    generators.
    """
    generators = tuple(generators)
    if degree is None:
        if not generators:
            raise InputError("closure of an empty generator list needs an explicit degree")
        degree = generators[0].degree
    if degree < 1:
        raise InputError("degree must be >= 1")
    for g in generators:
        if g.degree != degree:
            raise InputError(f"generator {g} has degree {g.degree}, expected {degree}")
    cap = get_settings().closure_cap if cap is None else cap

    started = time.perf_counter()
    one = tuple(range(degree))
    seen = {one}
    order = [one]
    queue = deque([one])
    gens = [g.images for g in generators]
    while queue:
        current = queue.popleft()
        for g in gens:
            product = tuple(g[j] for j in current)
            if product not in seen:
                seen.add(product)
                order.append(product)
                queue.append(product)
                if len(order) > cap:
                    raise ResourceError(f"group closure exceeds the cap of {cap} elements")
    elapsed = time.perf_counter() - started
    logger.debug("closure on %d points: %d elements in %.3fs", degree, len(order), elapsed)
    return PermGroup(
        degree=degree,
        generators=generators,
        elements=tuple(Permutation(images) for images in order),
        closure_seconds=elapsed,
    )


def orbit_of_vector(G: PermGroup, v: Sequence[int]) -> Set[Vector]:
    """G-orbit of an integer vector, by closing {v} under the generators"""
    v = tuple(v)
    if len(v) != G.degree:
        raise InputError(f"vector of length {len(v)} for a group of degree {G.degree}")
    orbit = {v}
    stack = [v]
    gens = [g.images for g in G.generators]
    while stack:
        w = stack.pop()
        for g in gens:
            u = _act(g, w)
            if u not in orbit:
                orbit.add(u)
                stack.append(u)
    return orbit


def stabilizer_order(G: PermGroup, v: Sequence[int]) -> int:
    v = tuple(v)
    return sum(1 for g in G.elements if _act(g.images, v) == v)
