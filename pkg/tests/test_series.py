import math

import pytest
import sympy

from app.services.errors import InputError, ResourceError
from app.services.groups import named_group
from app.services.series import burnside_dimension, hilbert_series, secondary_spec


def test_s3_hilbert_prefix(s3):
    assert hilbert_series(s3, 6).to_ints() == [1, 1, 2, 3, 4, 5, 7]


def test_a3_hilbert_matches_closed_form(a3):
    z = sympy.Symbol("z")
    closed = (1 + z**3) / ((1 - z) * (1 - z**2) * (1 - z**3))
    expected = sympy.Poly(sympy.series(closed, z, 0, 9).removeO(), z).all_coeffs()[::-1]
    assert hilbert_series(a3, 8).to_ints() == [int(c) for c in expected]
    assert hilbert_series(a3, 3)[3] == 4


def test_trivial_hilbert_counts_all_monomials(trivial3):
    assert hilbert_series(trivial3, 5).to_ints() == [math.comb(d + 2, 2) for d in range(6)]


def test_hilbert_rejects_negative_truncation(s3):
    with pytest.raises(InputError):
        hilbert_series(s3, -1)


def test_a3_secondary_spec(a3):
    spec = secondary_spec(a3)
    assert spec.s == (1, 0, 0, 1)
    assert spec.e == (1, 0, 0, 2)
    assert spec.t == 2
    assert spec.degree_bound == 3
    assert spec.rational_form() == "(1 + z^3)/((1-z)(1-z^2)(1-z^3))"


def test_trivial3_secondary_spec(trivial3):
    spec = secondary_spec(trivial3)
    assert spec.s == (1, 2, 2, 1)
    assert spec.e == (1, 2, 2, 2)
    assert spec.t == 6


def test_c4_secondary_spec(c4):
    spec = secondary_spec(c4)
    assert spec.s == (1, 0, 1, 1, 2, 1)
    assert spec.t == 6
    assert spec.epsilon == -1


@pytest.mark.parametrize("n", range(1, 7))
def test_symmetric_group_has_one_secondary(n):
    spec = secondary_spec(named_group(f"S{n}"))
    assert spec.s == (1,)
    assert spec.t == 1
    assert spec.max_degree == 0


def test_numerator_is_q_factorial_for_trivial_group():
    spec = secondary_spec(named_group("trivial4"))
    assert spec.s == (1, 3, 5, 6, 5, 3, 1)
    assert spec.t == 24


def test_secondary_spec_is_consistent(catalog5):
    for name, G in catalog5:
        spec = secondary_spec(G)
        assert spec.s[0] == 1, name
        assert spec.max_degree <= spec.degree_bound, name
        assert spec.t * G.order == math.factorial(G.degree), name
        assert all(c >= 0 for c in spec.s), name


def test_burnside_small_cases(a3, s3, trivial3):
    assert burnside_dimension(s3, 3) == 3
    assert burnside_dimension(a3, 3) == 4
    assert burnside_dimension(trivial3, 2) == 6
    assert burnside_dimension(a3, 0) == 1


def test_burnside_agrees_with_hilbert(catalog5):
    for name, G in catalog5:
        series = hilbert_series(G, 6).to_ints()
        for d in range(7):
            assert burnside_dimension(G, d) == series[d], (name, d)


def test_subgroup_has_more_invariants():
    big, small = named_group("S4"), named_group("A4")
    hb, hs = hilbert_series(big, 8), hilbert_series(small, 8)
    assert all(hb[d] <= hs[d] for d in range(9))


def test_burnside_guard(s3):
    with pytest.raises(ResourceError):
        burnside_dimension(s3, 10, guard=5)


def test_burnside_rejects_negative_degree(s3):
    with pytest.raises(InputError):
        burnside_dimension(s3, -1)
