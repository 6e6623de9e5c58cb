import math

import pytest

from app.services.errors import InputError, ResourceError
from app.services.perm import (
    Permutation,
    act_on_vector,
    closure,
    compose,
    cycle_type,
    from_cycles,
    identity,
    inverse,
    orbit_of_vector,
    stabilizer_order,
)


def symmetric_generators(n):
    return [from_cycles(n, [(1, 2)]), from_cycles(n, [tuple(range(1, n + 1))])]


def test_compose_with_identity():
    h = Permutation((2, 0, 1))
    assert compose(identity(3), h) == h


def test_compose_three_cycle_with_itself():
    g = Permutation((2, 0, 1))
    assert compose(g, g).images == (1, 2, 0)


def test_compose_with_inverse_is_identity():
    g = Permutation((3, 0, 4, 1, 2))
    assert compose(g, inverse(g)).is_identity()


def test_compose_degree_mismatch():
    with pytest.raises(InputError):
        compose(identity(3), identity(4))


def test_rejects_non_bijection():
    with pytest.raises(InputError):
        Permutation((0, 0, 1))


def test_from_cycles_is_one_based():
    assert from_cycles(3, [(1, 2, 3)]).images == (1, 2, 0)
    assert str(from_cycles(4, [(1, 2), (3, 4)])) == "(1 2)(3 4)"
    assert str(identity(3)) == "()"


def test_from_cycles_rejects_repeated_point():
    with pytest.raises(InputError):
        from_cycles(3, [(1, 2, 1)])


def test_act_identity():
    assert act_on_vector(identity(3), (4, 5, 6)) == (4, 5, 6)


def test_act_transposition_matches_permuted_roots():
    # swapping the first two positions of (1, ρ, ρ²) gives (ρ, 1, ρ²)
    swap = from_cycles(3, [(1, 2)])
    assert act_on_vector(swap, (0, 1, 2)) == (1, 0, 2)


def test_act_length_mismatch():
    with pytest.raises(InputError):
        act_on_vector(identity(3), (1, 2))


def test_act_is_left_action(rng):
    G = closure(symmetric_generators(5))
    for _ in range(50):
        g, h = rng.choice(G.elements), rng.choice(G.elements)
        v = tuple(rng.randrange(4) for _ in range(5))
        assert act_on_vector(g, act_on_vector(h, v)) == act_on_vector(compose(g, h), v)


def test_closure_of_nothing_is_trivial():
    assert closure([], degree=3).order == 1


def test_closure_needs_degree_without_generators():
    with pytest.raises(InputError):
        closure([])


def test_closure_of_three_cycle():
    assert closure([Permutation((1, 2, 0))]).order == 3


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_closure_of_symmetric_generators(n):
    assert closure(symmetric_generators(n)).order == math.factorial(n)


def test_closure_cap():
    with pytest.raises(ResourceError):
        closure(symmetric_generators(5), cap=10)


def test_closure_contains_inverses_and_order_divides(small_catalog):
    for name, G in small_catalog:
        assert math.factorial(G.degree) % G.order == 0, name
        assert identity(G.degree) in G
        for g in G.elements:
            assert inverse(g) in G, name


def test_orbit_under_trivial_group():
    G = closure([], degree=3)
    assert orbit_of_vector(G, (2, 1, 0)) == {(2, 1, 0)}


def test_orbit_under_a3(a3):
    assert orbit_of_vector(a3, (2, 1, 0)) == {(2, 1, 0), (0, 2, 1), (1, 0, 2)}


def test_orbit_stabilizer(catalog5, rng):
    for name, G in catalog5:
        for _ in range(5):
            v = tuple(rng.randrange(3) for _ in range(G.degree))
            orbit = orbit_of_vector(G, v)
            assert len(orbit) * stabilizer_order(G, v) == G.order, name


def test_cycle_types():
    assert cycle_type(identity(4)) == (1, 1, 1, 1)
    assert cycle_type(from_cycles(4, [(1, 2, 3, 4)])) == (4,)
    assert cycle_type(from_cycles(4, [(1, 2), (3, 4)])) == (2, 2)
