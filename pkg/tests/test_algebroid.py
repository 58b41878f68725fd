import numpy as np
import pytest

from opgroupoid.algebra import Algebra, adj, opnorm
from opgroupoid.algebroid import (
    InvariantField,
    atiyah_exactness,
    anchor_flow_residual,
    canonical_frame,
    chart_bracket,
    chart_field_value,
    chart_unitary_form,
    constant_section,
    equivariance_residual,
    field_bracket,
    field_from_section,
    leibniz_residual,
    linear_field,
    poly_section,
    section_adjoint,
    section_bracket,
    section_bracket_chart_value,
    support_projection,
    tangent_act,
    tangent_inverse,
    tangent_mul,
    to_chart_field,
    trace_function,
    unitary_residual,
)
from opgroupoid.frames import frame_chart, unitary_reduce
from opgroupoid.generators import (
    random_frame,
    random_group_element,
    random_operator,
    random_projection,
    random_quadratic_section,
    random_section,
    random_skew_section,
    random_vertical_section,
)
from opgroupoid.rng import SplitMix64
from opgroupoid.suites import _anchor_for, _base_near

ALG = Algebra(6)
K = 2


def _setup(seed):
    rng = SplitMix64(seed)
    p0 = random_projection(rng, ALG, K)
    eta = random_frame(rng, ALG, p0, K)
    return rng, p0, eta


def _chart(rng, p0, eta):
    p = _base_near(rng, ALG, support_projection(ALG, eta))
    lam = _anchor_for(rng, ALG, p, p0, K)
    y = frame_chart(ALG, p, eta).y
    return p, lam, y


def test_poly_section_value_and_derivative():
    rng = SplitMix64(1)
    c0, c1, c2 = (rng.complex_normal((6, 6)) for _ in range(3))
    x = poly_section([(c0,), (c1, c2)])
    q = random_projection(rng, ALG, K)
    dq = rng.complex_normal((6, 6))
    assert opnorm(x.value(q) - (c0 + c1 @ q @ c2)) <= 1e-12
    assert opnorm(x.dvalue(q, dq) - c1 @ dq @ c2) <= 1e-12
    star = section_adjoint(x)
    assert opnorm(star.value(q) - adj(x.value(q))) <= 1e-12


def test_constant_section_gives_linear_field():
    rng, p0, eta = _setup(2)
    b = random_operator(rng, ALG, 0.5)
    f = field_from_section(ALG, constant_section(b))
    assert opnorm(f.value(eta) - b @ eta) <= 1e-12


def test_field_equivariance_by_construction():
    rng, p0, eta = _setup(3)
    f = field_from_section(ALG, random_quadratic_section(rng, ALG))
    g = random_group_element(rng, ALG, p0, K)
    assert equivariance_residual(ALG, f, eta, g) <= ALG.tol_eq


def test_bracket_of_constant_fields_vanishes():
    rng, p0, eta = _setup(4)
    c = random_operator(rng, ALG)
    const = InvariantField(
        lambda m: c, lambda m, e: np.zeros_like(c), lambda m, e: np.zeros_like(c)
    )
    assert opnorm(field_bracket(const, const).value(eta)) == 0.0


def test_bracket_linear_fields_reversed_commutator():
    rng, p0, eta = _setup(5)
    a = random_operator(rng, ALG, 0.5)
    b = random_operator(rng, ALG, 0.5)
    br = field_bracket(linear_field(a), linear_field(b))
    assert opnorm(br.value(eta) - (b @ a - a @ b) @ eta) <= 1e-12


def test_bracket_antisymmetry_is_exact():
    rng, p0, eta = _setup(6)
    f = field_from_section(ALG, random_section(rng, ALG))
    assert opnorm(field_bracket(f, f).value(eta)) <= 1e-10


def test_chart_field_reconstruction_and_vertical_center():
    rng, p0, eta = _setup(7)
    f = field_from_section(ALG, random_section(rng, ALG))
    p, lam, y = _chart(rng, p0, eta)
    c = to_chart_field(ALG, f, p, lam)
    assert opnorm(chart_field_value(ALG, c, eta) - f.value(eta)) <= 1e-7
    v = field_from_section(ALG, random_vertical_section(rng, ALG))
    cv = to_chart_field(ALG, v, p, lam)
    assert opnorm(cv.a(y)) <= 1e-7


def test_chart_bracket_agrees_with_field_bracket():
    rng, p0, eta = _setup(8)
    f1 = field_from_section(ALG, random_section(rng, ALG))
    f2 = field_from_section(ALG, random_quadratic_section(rng, ALG))
    p, lam, y = _chart(rng, p0, eta)
    c12 = chart_bracket(ALG, to_chart_field(ALG, f1, p, lam), to_chart_field(ALG, f2, p, lam))
    flat = to_chart_field(ALG, field_bracket(f1, f2), p, lam)
    assert opnorm(c12.a(y) - flat.a(y)) <= 1e-6
    assert opnorm(c12.b(y) - flat.b(y)) <= 1e-6


def test_section_bracket_constant_case():
    rng, p0, eta = _setup(9)
    b1 = random_operator(rng, ALG, 0.5)
    b2 = random_operator(rng, ALG, 0.5)
    x12 = section_bracket(ALG, p0, constant_section(b1), constant_section(b2))
    q = support_projection(ALG, eta)
    assert opnorm(x12.value(q) - (b2 @ b1 - b1 @ b2)) <= 1e-9


def test_section_bracket_consistency_both_forms():
    rng, p0, eta = _setup(10)
    x1 = random_section(rng, ALG)
    x2 = random_quadratic_section(rng, ALG)
    f1 = field_from_section(ALG, x1)
    f2 = field_from_section(ALG, x2)
    q = support_projection(ALG, eta)
    x12 = section_bracket(ALG, p0, x1, x2)
    assert opnorm(x12.value(q) @ eta - field_bracket(f1, f2).value(eta)) <= 1e-6
    p, lam, y = _chart(rng, p0, eta)
    from opgroupoid.lattice import from_chart

    via_chart = section_bracket_chart_value(ALG, p, x1, x2, y)
    assert opnorm(via_chart - x12.value(from_chart(ALG, p, y))) <= 1e-6


def test_jacobi_identity():
    rng, p0, eta = _setup(11)
    fs = [
        field_from_section(ALG, random_section(rng, ALG, 0.6)),
        field_from_section(ALG, random_quadratic_section(rng, ALG, 0.6)),
        linear_field(random_operator(rng, ALG, 0.5)),
    ]
    total = None
    for i, j, l in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        t = field_bracket(fs[i], field_bracket(fs[j], fs[l])).value(eta)
        total = t if total is None else total + t
    assert opnorm(total) <= 1e-5


def test_leibniz_rule():
    rng, p0, eta = _setup(12)
    f1 = field_from_section(ALG, random_section(rng, ALG))
    f2 = field_from_section(ALG, random_quadratic_section(rng, ALG))
    func = trace_function(rng.complex_normal((6, 6)))
    assert leibniz_residual(ALG, f1, f2, func, eta) <= 1e-6


def test_anchor_matches_lattice_flow():
    rng, p0, eta = _setup(13)
    f = field_from_section(ALG, random_section(rng, ALG))
    p, lam, _ = _chart(rng, p0, eta)
    assert anchor_flow_residual(ALG, f, p, lam, eta) <= 1e-4


def test_tangent_group_and_action():
    rng, p0, eta = _setup(14)
    from opgroupoid.generators import random_corner_element

    unit = (p0, np.zeros((6, 6), dtype=complex))
    t1 = (random_group_element(rng, ALG, p0, K), random_corner_element(rng, ALG, p0, K))
    t2 = (random_group_element(rng, ALG, p0, K), random_corner_element(rng, ALG, p0, K))
    gu = tangent_mul(ALG, unit, t1)
    assert opnorm(gu[0] - t1[0]) <= 1e-12 and opnorm(gu[1] - t1[1]) <= 1e-12
    inv = tangent_inverse(ALG, t1)
    rt = tangent_mul(ALG, t1, inv)
    assert opnorm(rt[0] - p0) <= 1e-7 and opnorm(rt[1]) <= 1e-7
    theta = random_operator(rng, ALG) @ p0
    v = (theta, eta)
    assert all(
        opnorm(a - b) <= 1e-7
        for a, b in zip(tangent_act(tangent_act(v, t1), t2), tangent_act(v, tangent_mul(ALG, t1, t2)))
    )
    # the unit acts trivially
    same = tangent_act(v, unit)
    assert opnorm(same[0] - theta) <= 1e-12 and opnorm(same[1] - eta) <= 1e-12


def test_atiyah_ranks_small_case():
    alg4 = Algebra(4)
    rng = SplitMix64(15)
    p0 = random_projection(rng, alg4, 2)
    eta = random_frame(rng, alg4, p0, 2)
    p = _base_near(rng, alg4, support_projection(alg4, eta))
    rep = atiyah_exactness(alg4, p0, p, [eta])
    assert rep["rank_vertical"] == [4]
    assert rep["rank_anchor"] == [4]
    assert rep["dim_total"] == 8
    assert rep["kernel_dim"] == [4]
    assert rep["containment_residual"] <= alg4.tol_eq
    assert rep["ok"]


def test_atiyah_full_rank_one_point_orbit():
    # rank equal to the dimension: the base is a single point, no anchor image
    alg3 = Algebra(3)
    rng = SplitMix64(16)
    p0 = np.eye(3, dtype=complex)
    eta = random_frame(rng, alg3, p0, 3)
    rep = atiyah_exactness(alg3, p0, p0, [eta])
    assert rep["rank_vertical"] == [9]
    assert rep["rank_anchor"] == [0]
    assert rep["kernel_dim"] == [9]


def test_unitary_tangency_examples():
    rng, p0, eta = _setup(17)
    eta_u = unitary_reduce(ALG, eta)
    rot = InvariantField(lambda m: 1j * m, lambda m, e: 1j * e, lambda m, e: np.zeros_like(e))
    assert unitary_residual(ALG, rot, eta_u) <= 1e-10
    dil = linear_field(np.eye(6, dtype=complex))
    assert unitary_residual(ALG, dil, eta_u) > 1.0


def test_unitary_bracket_closure():
    rng, p0, eta = _setup(18)
    eta_u = unitary_reduce(ALG, eta)
    f1 = field_from_section(ALG, random_skew_section(rng, ALG))
    f2 = field_from_section(ALG, random_skew_section(rng, ALG))
    assert unitary_residual(ALG, f1, eta_u) <= 1e-7
    assert unitary_residual(ALG, field_bracket(f1, f2), eta_u) <= 1e-6


def test_chart_unitary_form_center_and_closure():
    rng, p0, eta = _setup(19)
    eta_u = unitary_reduce(ALG, eta)
    p, lam, y = _chart(rng, p0, eta_u)
    f1 = field_from_section(ALG, random_skew_section(rng, ALG))
    f2 = field_from_section(ALG, random_skew_section(rng, ALG))
    c1 = to_chart_field(ALG, f1, p, lam)
    yy = chart_unitary_form(c1, y)
    assert opnorm(yy + adj(yy)) <= 1e-6
    c12 = chart_bracket(ALG, c1, to_chart_field(ALG, f2, p, lam))
    yy12 = chart_unitary_form(c12, y)
    assert opnorm(yy12 + adj(yy12)) <= 1e-6
    # at the chart center the form reduces to the corner part
    zero = np.zeros((6, 6), dtype=complex)
    c_any = to_chart_field(ALG, field_from_section(ALG, random_section(rng, ALG)), p, lam)
    assert opnorm(chart_unitary_form(c_any, zero) - c_any.b(zero)) <= 1e-7


def test_canonical_frame_supports():
    rng = SplitMix64(20)
    p0 = random_projection(rng, ALG, K)
    q = random_projection(rng, ALG, K)
    eta = canonical_frame(ALG, q, p0)
    assert opnorm(support_projection(ALG, eta) - q) <= 1e-8
    assert opnorm(adj(eta) @ eta - p0) <= 1e-8
    with pytest.raises(ValueError):
        canonical_frame(ALG, random_projection(rng, ALG, 3), p0)
