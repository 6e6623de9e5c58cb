import dataclasses
import logging

import pytest

from app.schemas.invariants import SecondaryResultOut
from app.services.engine import (
    EngineOptions,
    expand,
    product_candidates,
    secondary_invariants,
    verify,
)
from app.services.errors import ConsistencyError, InputError, ResourceError, VerificationError
from app.services.exactla import ModularReduction, reduction_primes
from app.services.groups import catalog, named_group
from app.services.perm import closure


def as_json(result):
    return SecondaryResultOut.from_result(result).model_dump_json()


@pytest.mark.parametrize("n", range(1, 7))
def test_symmetric_group_needs_only_one(n):
    result = secondary_invariants(named_group(f"S{n}"))
    assert [[s.factors for s in level] for level in result.S] == [[()]]
    assert result.irreducibles == []
    assert result.secondaries[0].phi == result.points.ones()


def test_a3(a3, f3):
    result = secondary_invariants(a3)
    assert result.degrees == [0, 3]
    [irr] = result.irreducibles
    assert irr.monomial == (2, 1, 0)
    assert irr.degree == 3
    z = f3.root_power(1)
    assert irr.phi == (z * 3, z * z * 3)
    assert result.S[3][0].factors == (irr.id,)


def test_trivial3(trivial3):
    result = secondary_invariants(trivial3)
    assert [len(level) for level in result.S] == [1, 2, 2, 1]
    assert [irr.monomial for irr in result.irreducibles] == [(1, 0, 0), (0, 1, 0)]
    assert all(len(s.factors) == s.degree for s in result.secondaries)


def test_counts_follow_the_numerator(small_catalog):
    for name, G in small_catalog:
        result = secondary_invariants(G)
        assert [len(level) for level in result.S] == list(result.spec.s), name
        assert len(result.secondaries) == result.spec.t, name


def test_timings_are_recorded(a3):
    result = secondary_invariants(a3)
    assert set(result.timings) == {"closure", "series", "points", "evaluation", "elimination"}
    assert all(v >= 0 for v in result.timings.values())
    assert len(result.candidates_per_degree) == 4
    assert result.peak_candidates >= 1


def test_product_candidates(trivial3):
    result = secondary_invariants(trivial3)
    products = product_candidates(result.S[:2], result.I[:2], 2)
    assert [p.factors for p in products] == [(0, 0), (0, 1), (1, 1)]
    assert all(p.degree == 2 for p in products)
    with pytest.raises(InputError):
        product_candidates(result.S, result.I, 0)


def test_expand_a3(a3):
    result = secondary_invariants(a3)
    poly = expand(result.S[3][0], a3, result.irreducible_map())
    assert set(poly) == {(2, 1, 0), (0, 2, 1), (1, 0, 2)}
    assert all(c == 1 for c in poly.values())
    assert expand(result.S[0][0], a3, result.irreducible_map()) == {(0, 0, 0): 1}


def test_expand_cap(a3):
    result = secondary_invariants(a3)
    with pytest.raises(ResourceError):
        expand(result.S[3][0], a3, result.irreducible_map(), cap=2)


def test_verify_passes_for_small_groups(small_catalog):
    for name, G in small_catalog:
        report = verify(secondary_invariants(G), G)
        assert report.ok, (name, [c.detail for c in report.failures])
        assert not any(c.skipped for c in report.clauses), name


@pytest.mark.slow
def test_verify_passes_on_five_points():
    for name in ("A5", "C5", "D5"):
        G = named_group(name)
        report = verify(secondary_invariants(G), G)
        assert report.ok, name
        assert report.clause("e").skipped


def test_verify_detects_a_dependent_secondary(a3):
    result = secondary_invariants(a3)
    broken = dataclasses.replace(result.S[3][0], phi=result.points.ones())
    result.S = [result.S[0], [], [], [broken]]
    report = verify(result, a3)
    assert not report.ok
    assert not report.clause("b").passed
    assert report.clause("a").passed
    with pytest.raises(VerificationError) as info:
        report.raise_for_failure()
    assert info.value.clause == "b"
    assert str(info.value).startswith("clause (b) failed")


def test_verify_detects_wrong_counts(a3):
    result = secondary_invariants(a3)
    result.S = [result.S[0], [], [], []]
    assert not verify(result).clause("a").passed


def test_verify_rejects_another_group(a3, s3):
    with pytest.raises(InputError):
        verify(secondary_invariants(a3), s3)


def test_verify_skips_above_caps(c4):
    report = verify(secondary_invariants(c4), c4, expansion_cap=3, dimension_cap=3)
    assert report.ok
    assert report.clause("d").skipped
    assert report.clause("e").skipped


def test_output_is_deterministic(small_catalog):
    for name, G in small_catalog:
        assert as_json(secondary_invariants(G)) == as_json(secondary_invariants(G)), name


def test_partition_fallback(a3, caplog):
    with caplog.at_level(logging.WARNING, logger="app.services.engine"):
        result = secondary_invariants(a3, EngineOptions(exclude_partitions=True))
    assert result.degrees == [0, 3]
    assert result.irreducibles[0].monomial == (2, 1, 0)
    assert "retrying with them" in caplog.text


def test_excluding_partitions_keeps_counts(small_catalog):
    for name, G in small_catalog:
        result = secondary_invariants(G, EngineOptions(exclude_partitions=True))
        assert [len(level) for level in result.S] == list(result.spec.s), name
        assert verify(result, G).ok, name


def test_parallel_matches_sequential(c4):
    sequential = secondary_invariants(c4)
    parallel = secondary_invariants(c4, EngineOptions(workers=2))
    assert as_json(parallel) == as_json(sequential)


def test_point_cap_is_respected(a3):
    with pytest.raises(ResourceError):
        secondary_invariants(a3, EngineOptions(max_points_n=2))


def test_point_cap_is_checked_before_the_series(monkeypatch):
    def unreachable(G):
        raise AssertionError("series computed for an uncapped degree")

    monkeypatch.setattr("app.services.engine.secondary_spec", unreachable)
    with pytest.raises(ResourceError):
        secondary_invariants(closure([], degree=100_000))


def test_epsilon_is_cross_checked(a3, monkeypatch):
    monkeypatch.setattr("app.services.engine.eval_elementary", lambda i, P: P.zeros())
    with pytest.raises(ConsistencyError):
        secondary_invariants(a3)


class CollapsingReduction(ModularReduction):
    """Sends everything to zero for one chosen prime"""

    collapse = None

    def image(self, v):
        values = super().image(v)
        return values * 0 if self.prime == self.collapse else values


def test_an_unlucky_prime_is_retried(c4, monkeypatch, caplog):
    first, second = reduction_primes(4)[:2]
    monkeypatch.setattr(CollapsingReduction, "collapse", first)
    monkeypatch.setattr("app.services.engine.ModularReduction", CollapsingReduction)
    with caplog.at_level(logging.WARNING, logger="app.services.engine"):
        result = secondary_invariants(c4, EngineOptions(primes=(first, second)))
    assert "retrying with another prime" in caplog.text
    assert [len(level) for level in result.S] == list(result.spec.s)
    assert verify(result, c4).ok
    with pytest.raises(ConsistencyError):
        secondary_invariants(c4, EngineOptions(primes=(first,)))


def test_small_primes_still_give_a_basis(c4):
    for prime in (13, 17, 29):
        result = secondary_invariants(c4, EngineOptions(primes=(prime,) + reduction_primes(4)))
        assert [len(level) for level in result.S] == list(result.spec.s), prime
        assert verify(result, c4).ok, prime


def test_products_are_evaluated_lazily(trivial3):
    result = secondary_invariants(trivial3)
    products = [s for s in result.secondaries if len(s.factors) > 1]
    assert products
    assert all("pending" in repr(s.phi) for s in products)
    irreducibles = result.irreducible_map()
    for s in products:
        expected = result.points.ones()
        for fid in s.factors:
            expected = tuple(a * b for a, b in zip(expected, irreducibles[fid].phi))
        assert s.phi == expected


def mahonian(n):
    coefficients = [1]
    for k in range(1, n + 1):
        out = [0] * (len(coefficients) + k - 1)
        for i, c in enumerate(coefficients):
            for j in range(k):
                out[i + j] += c
        coefficients = out
    return coefficients


@pytest.mark.slow
@pytest.mark.parametrize("n", range(2, 6))
def test_trivial_groups_follow_the_mahonian_numbers(n):
    result = secondary_invariants(named_group(f"trivial{n}"))
    assert [len(level) for level in result.S] == mahonian(n)
    assert list(result.spec.s) == mahonian(n)


@pytest.mark.slow
def test_catalog_on_six_points_passes_the_basis_clauses():
    for name, G in catalog(6, min_n=5):
        report = verify(secondary_invariants(G), G, expansion_cap=4)
        for clause in ("a", "b", "c"):
            assert report.clause(clause).passed, (name, clause)
