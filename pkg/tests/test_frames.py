import pytest

from opgroupoid.algebra import Algebra, adj, opnorm, polar_decompose
from opgroupoid.frames import (
    GaugeClass,
    frame_chart,
    frame_chart_inverse,
    frame_transition,
    gauge_compose,
    gauge_inverse,
    gauge_to_groupoid,
    gauge_to_groupoid_unitary,
    gauge_unit,
    is_frame,
    is_unitary_frame,
    make_anchor,
    right_translate,
    transition_cocycle,
    trivialize,
    unitary_reduce,
)
from opgroupoid.generators import (
    random_frame,
    random_group_element,
    random_projection,
)
from opgroupoid.groupoid import compose, inverse
from opgroupoid.lattice import chart_section
from opgroupoid.rng import SplitMix64
from opgroupoid.suites import _anchor_for, _base_near

ALG = Algebra(6)
K = 2


def _setup(seed):
    rng = SplitMix64(seed)
    p0 = random_projection(rng, ALG, K)
    eta = random_frame(rng, ALG, p0, K)
    return rng, p0, eta


def test_random_frame_is_frame():
    rng, p0, eta = _setup(71)
    assert is_frame(ALG, p0, eta)
    assert opnorm(polar_decompose(ALG, eta).right - p0) <= ALG.tol_eq


def test_frame_chart_center():
    rng, p0, eta = _setup(73)
    p = polar_decompose(ALG, eta).left
    pt = frame_chart(ALG, p, eta)
    assert opnorm(pt.y) <= ALG.tol_eq
    assert opnorm(pt.z - p @ eta) <= ALG.tol_eq


def test_frame_chart_of_base_projection():
    rng = SplitMix64(79)
    p0 = random_projection(rng, ALG, K)
    pt = frame_chart(ALG, p0, p0)
    assert opnorm(pt.y) <= ALG.tol_eq
    assert opnorm(pt.z - p0) <= ALG.tol_eq


def test_frame_chart_reconstruction_and_transition():
    rng, p0, eta = _setup(83)
    q = polar_decompose(ALG, eta).left
    p1 = _base_near(rng, ALG, q)
    p2 = _base_near(rng, ALG, q)
    pt = frame_chart(ALG, p1, eta)
    assert opnorm(frame_chart_inverse(pt) - eta) <= ALG.tol_eq
    moved = frame_transition(ALG, pt, p2)
    direct = frame_chart(ALG, p2, eta)
    assert opnorm(moved.y - direct.y) <= 10 * ALG.tol_eq
    assert opnorm(moved.z - direct.z) <= 10 * ALG.tol_eq
    same = frame_transition(ALG, pt, p1)
    assert opnorm(same.z - pt.z) <= 10 * ALG.tol_eq


def test_right_action_unit_and_support():
    rng, p0, eta = _setup(89)
    assert opnorm(right_translate(eta, p0) - eta) <= ALG.tol_eq
    g = random_group_element(rng, ALG, p0, K)
    lhs = polar_decompose(ALG, right_translate(eta, g)).left
    assert opnorm(lhs - polar_decompose(ALG, eta).left) <= ALG.tol_eq


def test_trivialize_canonical_frame():
    # the frame built from the section and the anchor trivializes to the unit
    rng, p0, eta = _setup(97)
    q = polar_decompose(ALG, eta).left
    p = _base_near(rng, ALG, q)
    lam = _anchor_for(rng, ALG, p, p0, K)
    canonical = chart_section(ALG, p, q) @ lam
    q_out, zeta = trivialize(ALG, p, lam, canonical)
    assert opnorm(q_out - q) <= 10 * ALG.tol_eq
    assert opnorm(zeta - p0) <= 10 * ALG.tol_eq


def test_trivialize_equivariance():
    rng, p0, eta = _setup(101)
    p = _base_near(rng, ALG, polar_decompose(ALG, eta).left)
    lam = _anchor_for(rng, ALG, p, p0, K)
    g = random_group_element(rng, ALG, p0, K)
    _, zeta = trivialize(ALG, p, lam, eta)
    _, zeta_g = trivialize(ALG, p, lam, eta @ g)
    assert opnorm(zeta_g - zeta @ g) <= 10 * ALG.tol_eq


def test_cocycle_unit_and_identity():
    rng = SplitMix64(103)
    p0 = random_projection(rng, ALG, K)
    q = random_projection(rng, ALG, K)
    ps = [_base_near(rng, ALG, q) for _ in range(3)]
    lams = [_anchor_for(rng, ALG, p, p0, K) for p in ps]
    same = transition_cocycle(ALG, ps[0], ps[0], lams[0], lams[0], q)
    assert opnorm(same - p0) <= 10 * ALG.tol_eq
    g21 = transition_cocycle(ALG, ps[0], ps[1], lams[0], lams[1], q)
    g32 = transition_cocycle(ALG, ps[1], ps[2], lams[1], lams[2], q)
    g31 = transition_cocycle(ALG, ps[0], ps[2], lams[0], lams[2], q)
    assert opnorm(g32 @ g21 - g31) <= 100 * ALG.tol_eq


def test_gauge_unit_maps_to_support():
    rng, p0, eta = _setup(107)
    img = gauge_to_groupoid(ALG, gauge_unit(eta))
    assert opnorm(img.op - polar_decompose(ALG, eta).left) <= ALG.tol_eq


def test_gauge_representative_independence_and_functoriality():
    rng, p0, eta = _setup(109)
    xi = random_frame(rng, ALG, p0, K)
    g = random_group_element(rng, ALG, p0, K)
    c = GaugeClass(eta, xi)
    translated = GaugeClass(eta @ g, xi @ g)
    assert opnorm(c.invariant(ALG) - translated.invariant(ALG)) <= ALG.tol_eq
    # inverse class maps to the groupoid inverse
    img = gauge_to_groupoid(ALG, c)
    img_inv = gauge_to_groupoid(ALG, gauge_inverse(c))
    assert opnorm(img_inv.op - inverse(ALG, img).op) <= ALG.tol_eq
    # composition of classes maps to the product
    kappa = random_frame(rng, ALG, p0, K)
    c2 = GaugeClass(xi @ g, kappa)
    lhs = gauge_to_groupoid(ALG, gauge_compose(ALG, c, c2))
    rhs = compose(ALG, img, gauge_to_groupoid(ALG, c2))
    assert opnorm(lhs.op - rhs.op) <= ALG.tol_eq


def test_unitary_reduce_examples():
    rng, p0, eta = _setup(113)
    eta_u = unitary_reduce(ALG, eta)
    assert is_unitary_frame(ALG, p0, eta_u)
    assert opnorm(unitary_reduce(ALG, eta_u) - eta_u) <= ALG.tol_eq
    assert opnorm(unitary_reduce(ALG, 2.0 * eta_u) - eta_u) <= ALG.tol_eq


def test_unitary_gauge_map():
    rng, p0, eta = _setup(127)
    xi = random_frame(rng, ALG, p0, K)
    eta_u = unitary_reduce(ALG, eta)
    xi_u = unitary_reduce(ALG, xi)
    c = GaugeClass(eta_u, xi_u)
    img_u = gauge_to_groupoid_unitary(ALG, p0, c)
    assert opnorm(img_u.op - eta_u @ adj(xi_u)) <= ALG.tol_eq
    assert opnorm(img_u.op - gauge_to_groupoid(ALG, c).op) <= ALG.tol_eq
    unit = gauge_to_groupoid_unitary(ALG, p0, GaugeClass(eta_u, eta_u))
    assert opnorm(unit.op - polar_decompose(ALG, eta_u).left) <= ALG.tol_eq
    with pytest.raises(ValueError):
        gauge_to_groupoid_unitary(ALG, p0, GaugeClass(eta, xi))


def test_make_anchor_is_partial_isometry():
    rng, p0, eta = _setup(131)
    p = _base_near(rng, ALG, polar_decompose(ALG, eta).left)
    lam = make_anchor(ALG, p, p0, random_frame(rng, ALG, p0, K))
    assert opnorm(adj(lam) @ lam - p0) <= ALG.tol_eq
    assert opnorm(lam @ adj(lam) - p) <= ALG.tol_eq
