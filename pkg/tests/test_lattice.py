import numpy as np
import pytest

from opgroupoid.algebra import Algebra, opnorm, polar_decompose
from opgroupoid.generators import (
    random_chart_coordinate,
    random_nearby_projection,
    random_projection,
)
from opgroupoid.lattice import (
    ChartDomainError,
    LatticeOrbit,
    chart_section,
    from_chart,
    in_chart,
    is_chart_coordinate,
    to_chart,
    transition,
    transition_coefficients,
)
from opgroupoid.rng import SplitMix64

ALG2 = Algebra(2)
ALG6 = Algebra(6)

P = np.diag([1.0 + 0j, 0.0])
Q = 0.5 * np.ones((2, 2), dtype=complex)


def test_in_chart_basic():
    assert in_chart(ALG2, P, P)
    assert in_chart(ALG2, P, Q)
    assert not in_chart(ALG2, P, np.diag([0.0, 1.0 + 0j]))


def test_in_chart_rank_mismatch_is_empty_overlap():
    assert not in_chart(ALG2, P, np.eye(2, dtype=complex))


def test_chart_hand_example():
    y = to_chart(ALG2, P, Q)
    assert np.allclose(y, [[0, 0], [1, 0]], atol=1e-14)
    assert np.allclose(from_chart(ALG2, P, y), Q, atol=1e-12)
    assert is_chart_coordinate(ALG2, P, y)


def test_chart_center():
    assert opnorm(to_chart(ALG2, P, P)) <= ALG2.tol_eq
    assert opnorm(from_chart(ALG2, P, np.zeros((2, 2))) - P) <= ALG2.tol_eq


def test_chart_domain_error():
    with pytest.raises(ChartDomainError):
        to_chart(ALG2, P, np.diag([0.0, 1.0 + 0j]))


def test_round_trips_random():
    rng = SplitMix64(11)
    for _ in range(25):
        p = random_projection(rng, ALG6, 2)
        y = random_chart_coordinate(rng, ALG6, p)
        q = from_chart(ALG6, p, y)
        assert opnorm(to_chart(ALG6, p, q) - y) <= ALG6.tol_eq
        assert opnorm(from_chart(ALG6, p, to_chart(ALG6, p, q)) - q) <= ALG6.tol_eq


def test_section_supports():
    rng = SplitMix64(13)
    for _ in range(10):
        p = random_projection(rng, ALG6, 2)
        q = random_nearby_projection(rng, ALG6, p)
        s = chart_section(ALG6, p, q)
        pd = polar_decompose(ALG6, s)
        assert opnorm(pd.left - q) <= ALG6.tol_eq
        assert opnorm(pd.right - p) <= ALG6.tol_eq


def test_transition_coefficients():
    a, b, c, d = transition_coefficients(ALG2, P, Q)
    assert np.allclose(a + b + c + d, np.eye(2), atol=1e-14)
    assert np.allclose(a, [[0.5, 0.0], [0.5, 0.0]], atol=1e-14)
    a2, b2, c2, d2 = transition_coefficients(ALG2, P, P)
    assert np.allclose(a2, P, atol=1e-14)
    assert np.allclose(b2, 0.0, atol=1e-14)
    assert np.allclose(c2, 0.0, atol=1e-14)
    assert np.allclose(d2, np.eye(2) - P, atol=1e-14)


def test_transition_identity_and_center():
    rng = SplitMix64(17)
    p = random_projection(rng, ALG6, 2)
    y = random_chart_coordinate(rng, ALG6, p)
    assert opnorm(transition(ALG6, p, p, y) - y) <= ALG6.tol_eq
    # at the chart center the image is the coordinate of p in the new chart
    p_new = random_nearby_projection(rng, ALG6, p)
    moved = transition(ALG6, p, p_new, np.zeros((6, 6), dtype=complex))
    assert opnorm(moved - to_chart(ALG6, p_new, p)) <= 10 * ALG6.tol_eq


def test_transition_matches_recompute_and_cocycle():
    rng = SplitMix64(19)
    for _ in range(10):
        p = random_projection(rng, ALG6, 2)
        y = random_chart_coordinate(rng, ALG6, p, 0.1, 0.4)
        q = from_chart(ALG6, p, y)
        p1 = random_nearby_projection(rng, ALG6, q)
        p2 = random_nearby_projection(rng, ALG6, q)
        direct = to_chart(ALG6, p1, q)
        assert opnorm(transition(ALG6, p, p1, y) - direct) <= 10 * ALG6.tol_eq
        via = transition(ALG6, p1, p2, transition(ALG6, p, p1, y))
        assert opnorm(via - transition(ALG6, p, p2, y)) <= 10 * ALG6.tol_eq


def test_orbit_membership():
    orbit = LatticeOrbit(ALG6, 2)
    rng = SplitMix64(23)
    assert orbit.contains(random_projection(rng, ALG6, 2))
    assert not orbit.contains(random_projection(rng, ALG6, 3))
