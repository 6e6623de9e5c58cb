"""
Group input: named families, explicit generators, and the built-in catalog.

Named families (1-based cycle notation):
  S<n>        (1 2), (1 2 ... n)
  A<n>        (1 2 3), and (1 2 ... n) for odd n or (2 3 ... n) for even n
  C<n>        (1 2 ... n)
  D<n>        (1 2 ... n), and the reversal i -> n+1-i
  trivial<n>  no generators
"""
import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from pydantic import ValidationError

from app.schemas.invariants import ExplicitGroupSpec
from app.services.config import get_settings
from app.services.errors import InputError, ParseError
from app.services.perm import PermGroup, closure, from_cycles

logger = logging.getLogger(__name__)

Cycles = List[List[int]]

NAMED = re.compile(r"^\s*(S|A|C|D|trivial)(\d+)\s*$", re.IGNORECASE)
FAMILIES = ("S", "A", "C", "D", "trivial")


@dataclass(frozen=True)
class GroupSpec:
    name: str
    degree: int
    generators: Tuple[Tuple[Tuple[int, ...], ...], ...]

    def build(self, cap: Optional[int] = None) -> PermGroup:
        try:
            perms = [from_cycles(self.degree, cycles) for cycles in self.generators]
        except InputError as e:
            raise ParseError(f"{self.name}: {e}", 0)
        G = closure(perms, degree=self.degree, cap=cap)
        logger.debug("built %s: order %d", self.name, G.order)
        return G


def _freeze(generators: Sequence[Cycles]) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    return tuple(tuple(tuple(c) for c in gen) for gen in generators)


def family_generators(family: str, n: int) -> List[Cycles]:
    """Generators of a named family on n points, as 1-based cycles"""
    family = family.lower()
    full = list(range(1, n + 1))
    if family == "trivial" or n == 1:
        return []
    if family == "s":
        return [[[1, 2]], [full]]
    if family == "a":
        if n < 3:
            return []
        second = full if n % 2 else full[1:]
        return [[[1, 2, 3]]] + ([[second]] if second != [1, 2, 3] else [])
    if family == "c":
        return [[full]]
    if family == "d":
        reversal = [[i, n + 1 - i] for i in range(1, n // 2 + 1)]
        return [[full], reversal]
    raise InputError(f"unknown group family {family!r}")


def named_spec(name: str) -> GroupSpec:
    match = NAMED.match(name)
    if not match:
        raise ParseError(f"unknown group name {name.strip()!r}", 0)
    family, n = match.group(1), int(match.group(2))
    if n < 1:
        raise ParseError("degree must be >= 1", match.start(2))
    label = "trivial" if family.lower() == "trivial" else family.upper()
    return GroupSpec(name=f"{label}{n}", degree=n, generators=_freeze(family_generators(family, n)))


def named_group(name: str) -> PermGroup:
    return named_spec(name).build()


def _parse_json(text: str) -> GroupSpec:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.pos)
    try:
        spec = ExplicitGroupSpec.model_validate(payload)
    except ValidationError as e:
        raise ParseError(f"invalid group description: {e.errors()[0]['msg']}", 0)
    position = max(text.find('"generators"'), 0)
    for gen in spec.generators:
        _check_cycles(gen, spec.degree, position)
    name = spec.name or f"G{spec.degree}"
    return GroupSpec(name=name, degree=spec.degree, generators=_freeze(spec.generators))


def _check_cycles(cycles: Cycles, n: int, position: int) -> None:
    used = set()
    for cycle in cycles:
        for p in cycle:
            if not 1 <= p <= n:
                raise ParseError(f"point {p} out of range 1..{n}", position)
            if p in used:
                raise ParseError(f"point {p} repeated within a generator", position)
            used.add(p)


def _parse_cycle_text(text: str) -> GroupSpec:
    """'<n>: (1 2 3)(4 5), (1 2)' -- degree, then comma-separated generators"""
    head, _, body = text.partition(":")
    try:
        n = int(head.strip())
    except ValueError:
        raise ParseError(f"expected a degree before ':', got {head.strip()!r}", 0)
    if n < 1:
        raise ParseError("degree must be >= 1", 0)
    offset = len(head) + 1
    generators: List[Cycles] = []
    current: Cycles = []
    used: set = set()
    cycle: Optional[List[int]] = None
    i = 0
    while i < len(body):
        ch = body[i]
        pos = offset + i
        if ch.isspace():
            i += 1
        elif ch == "(":
            if cycle is not None:
                raise ParseError("nested '('", pos)
            cycle = []
            i += 1
        elif ch == ")":
            if cycle is None:
                raise ParseError("unmatched ')'", pos)
            if cycle:
                current.append(cycle)
            cycle = None
            i += 1
        elif ch == ",":
            if cycle is not None:
                # commas inside a cycle separate points: (1,2,3)
                i += 1
                continue
            generators.append(current)
            current, used = [], set()
            i += 1
        elif ch.isdigit():
            if cycle is None:
                raise ParseError("point outside of a cycle", pos)
            j = i
            while j < len(body) and body[j].isdigit():
                j += 1
            p = int(body[i:j])
            if not 1 <= p <= n:
                raise ParseError(f"point {p} out of range 1..{n}", pos)
            if p in used:
                raise ParseError(f"point {p} repeated within a generator", pos)
            used.add(p)
            cycle.append(p)
            i = j
        else:
            raise ParseError(f"unexpected character {ch!r}", pos)
    if cycle is not None:
        raise ParseError("unclosed '('", offset + len(body))
    if current or body.strip():
        generators.append(current)
    return GroupSpec(name=text.strip(), degree=n, generators=_freeze(generators))


def parse_group_spec(text: str) -> GroupSpec:
    """A group name, a JSON description, or '<n>: cycles, cycles, ...'"""
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty group description", 0)
    if stripped.startswith("{"):
        return _parse_json(text)
    if ":" in stripped:
        return _parse_cycle_text(text)
    return named_spec(stripped)


def parse_group(text: str, cap: Optional[int] = None) -> PermGroup:
    return parse_group_spec(text).build(cap)


def parse_group_file(path) -> GroupSpec:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")
    return parse_group_spec(text)


def parse_group_list(path) -> List[GroupSpec]:
    """Newline-separated group descriptions; blank lines and # comments are skipped"""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")
    specs = []
    for number, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            specs.append(parse_group_spec(line))
        except ParseError as e:
            raise ParseError(f"line {number}: {e.detail}", e.position)
    return specs


def _catalog(max_n: int, min_n: int) -> List[Tuple[GroupSpec, PermGroup]]:
    entries = []
    seen = set()
    cap = get_settings().closure_cap
    for n in range(min_n, max_n + 1):
        candidates = [named_spec(f"{family}{n}") for family in FAMILIES]
        if n == 4:
            candidates.append(GroupSpec(name="V4", degree=4, generators=(((1, 2), (3, 4)), ((1, 3), (2, 4)))))
        for spec in candidates:
            G = spec.build(cap)
            key = frozenset(G.elements)
            if key in seen:
                continue
            seen.add(key)
            entries.append((spec, G))
    return entries


def catalog_specs(max_n: int, min_n: int = 1) -> List[GroupSpec]:
    """Families S, A, C, D, trivial per degree, without repeated groups, plus V4"""
    return [spec for spec, _ in _catalog(max_n, min_n)]


def catalog(max_n: int, min_n: int = 1) -> List[Tuple[str, PermGroup]]:
    return [(spec.name, G) for spec, G in _catalog(max_n, min_n)]
