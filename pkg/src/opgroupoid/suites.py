"""Randomized property suites for every structural identity.

Each property draws its own seeded sub-stream, runs a per-sample check
returning a residual, and records the worst case against its tolerance.
Counting checks (rank equalities, rejection tests) report the number of
violations against a zero tolerance.
"""
from __future__ import annotations

import numpy as np

from .algebra import (
    Algebra,
    adj,
    opnorm,
    partial_inverse,
    polar_decompose,
    projection_basis,
    projection_rank,
)
from .algebroid import (
    InvariantField,
    atiyah_exactness,
    anchor_flow_residual,
    chart_bracket,
    chart_field_value,
    chart_unitary_form,
    equivariance_residual,
    field_bracket,
    field_from_section,
    leibniz_residual,
    linear_field,
    section_bracket,
    section_bracket_chart_value,
    support_projection,
    tangent_act,
    tangent_inverse,
    tangent_mul,
    to_chart_field,
    unitary_residual,
)
from .derivations import (
    CornerBasis,
    Derivation,
    TrivialArrow,
    apply_bisection,
    compose_bisections,
    derivation_apply,
    derivation_bracket,
    derivation_leibniz_residual,
    endo_norm,
    equivariance_residuals,
    gauge_flow,
    left_flow,
    lift_bracket,
    linear_lift,
    mod_factor,
    pair_groupoid_report,
    quotient_class,
    transport,
    trivial_compose,
    trivial_inverse,
    trivial_unit,
    NotModAutomorphismError,
)
from .dirac import (
    DiracFrame,
    block_bracket,
    embed_block_field,
    embed_columns,
    embed_y,
    extract_b,
    extract_y,
    gram_polar,
    index_projection,
    multiindex_coordinates,
    poly_block_field,
    supports_from_columns,
)
from .frames import (
    GaugeClass,
    corner_polar,
    frame_chart,
    frame_chart_inverse,
    frame_transition,
    gauge_compose,
    gauge_inverse,
    gauge_to_groupoid,
    gauge_to_groupoid_unitary,
    gauge_unit,
    make_anchor,
    transition_cocycle,
    trivialize,
    unitary_reduce,
)
from .generators import (
    random_chart_coordinate,
    random_corner_element,
    random_frame,
    random_group_element,
    random_groupoid_element,
    random_nearby_projection,
    random_operator,
    random_projection,
    random_quadratic_section,
    random_section,
    random_skew_section,
    random_trace_function,
    random_unitary,
    random_vertical_section,
)
from .groupoid import (
    element,
    compose,
    groupoid_chart,
    groupoid_chart_inverse,
    groupoid_chart_transition,
    inverse,
    involution,
    involution_in_chart,
)
from .harness import PropertyResult, SuiteConfig
from .lattice import from_chart, in_chart, to_chart, transition
from .rng import SplitMix64, subseed
from .wirtinger import conj_directional, holo_directional, real_directional


def _run(cfg: SuiteConfig, suite: str, name: str, law: str, tol: float, sample_fn, samples=None):
    rng = SplitMix64(subseed(cfg.seed, suite, name))
    count = cfg.samples if samples is None else samples
    worst = 0.0
    try:
        for _ in range(count):
            worst = max(worst, float(sample_fn(rng)))
    except Exception as exc:  # a failing draw or evaluation is a failed property
        return PropertyResult(name, law, count, float("inf"), tol, False, f"{type(exc).__name__}: {exc}")
    return PropertyResult(name, law, count, worst, tol, worst <= tol)


def _base_near(rng, alg: Algebra, q: np.ndarray) -> np.ndarray:
    """A projection whose chart contains q, with margin."""
    for _ in range(64):
        p = from_chart(alg, q, random_chart_coordinate(rng, alg, q, 0.1, 0.5))
        if in_chart(alg, p, q):
            return p
    raise RuntimeError("no nearby chart base found")


def _anchor_for(rng, alg: Algebra, p: np.ndarray, p0: np.ndarray, k: int) -> np.ndarray:
    """Anchor from a fresh reference frame, retried on rank-deficient draws."""
    for _ in range(64):
        try:
            return make_anchor(alg, p, p0, random_frame(rng, alg, p0, k))
        except ValueError:
            continue
    raise RuntimeError("no full-rank anchor found")


def _group_element_away(rng, alg: Algebra, p0: np.ndarray, k: int, dist: float = 0.3) -> np.ndarray:
    """Structure-group element bounded away from the unit."""
    for _ in range(64):
        g = random_group_element(rng, alg, p0, k)
        if opnorm(g - p0) > dist:
            return g
    raise RuntimeError("no group element away from the unit")


def _composable_with(rng, alg: Algebra, right_support: np.ndarray):
    """Arrow whose left support is the given projection."""
    for _ in range(64):
        a = rng.complex_normal((alg.dim, alg.dim))
        x = right_support @ a
        s = np.linalg.svd(x, compute_uv=False)
        k = projection_rank(right_support)
        if float(s[k - 1]) > 0.2 and float(s[0]) < 5.0:
            return element(alg, x)
    raise RuntimeError("no composable arrow found")


# ---------------------------------------------------------------------------
# wstar


def suite_wstar(cfg: SuiteConfig):
    alg = cfg.algebra()
    n, k = cfg.dim, cfg.rank

    def rank_for(rng):
        return 1 + int(rng.uniform_in(0, n, 1)[0]) % n

    def polar_reconstruction(rng):
        x = random_groupoid_element(rng, alg, rank_for(rng)).op
        pd = polar_decompose(alg, x)
        return opnorm(pd.u @ pd.modulus - x)

    def polar_supports(rng):
        x = random_groupoid_element(rng, alg, rank_for(rng)).op
        pd = polar_decompose(alg, x)
        return max(
            opnorm(adj(pd.u) @ pd.u - pd.right),
            opnorm(pd.u @ adj(pd.u) - pd.left),
            opnorm(pd.left @ pd.left - pd.left),
            opnorm(pd.right - adj(pd.right)),
        )

    def inverse_relations(rng):
        x = random_groupoid_element(rng, alg, rank_for(rng))
        y = partial_inverse(alg, x.op)
        return max(opnorm(y @ x.op - x.right), opnorm(x.op @ y - x.left))

    def inverse_uniqueness(rng):
        x = random_groupoid_element(rng, alg, k)
        y = partial_inverse(alg, x.op)
        if not (alg.eq(y @ x.op, x.right) and alg.eq(x.op @ y, x.left)):
            return 1.0
        bad = 0
        for _ in range(10):
            e = x.left @ rng.complex_normal((n, n)) @ x.right
            e = e / opnorm(e)
            y_bad = y + 100.0 * alg.tol_eq * e
            if alg.eq(y_bad @ x.op, x.right) and alg.eq(x.op @ y_bad, x.left):
                bad += 1
        return float(bad)

    def support_adjoint(rng):
        x = random_groupoid_element(rng, alg, rank_for(rng))
        pd_star = polar_decompose(alg, adj(x.op))
        return max(opnorm(pd_star.left - x.right), opnorm(pd_star.right - x.left))

    def support_composition(rng):
        x = random_groupoid_element(rng, alg, k)
        y = _composable_with(rng, alg, x.right)
        xy = compose(alg, x, y)
        return max(opnorm(xy.left - x.left), opnorm(xy.right - y.right))

    def norm_submultiplicative(rng):
        x = random_operator(rng, alg)
        y = random_operator(rng, alg)
        return max(0.0, opnorm(x @ y) - opnorm(x) * opnorm(y))

    def adjoint_isometry(rng):
        x = random_operator(rng, alg)
        return abs(opnorm(adj(x)) - opnorm(x))

    s = "wstar"
    return [
        _run(cfg, s, "polar_reconstruction", "u |x| rebuilds x", cfg.tol_eq, polar_reconstruction),
        _run(cfg, s, "polar_supports", "polar factors give the supports", cfg.tol_eq, polar_supports),
        _run(cfg, s, "inverse_relations", "x^-1 x and x x^-1 are the supports", cfg.tol_eq, inverse_relations),
        _run(cfg, s, "inverse_uniqueness", "perturbed inverses are rejected", 0.0, inverse_uniqueness),
        _run(cfg, s, "support_adjoint", "supports swap under the adjoint", cfg.tol_eq, support_adjoint),
        _run(cfg, s, "support_composition", "product keeps outer supports", cfg.tol_eq, support_composition),
        _run(cfg, s, "norm_submultiplicative", "operator norm is submultiplicative", cfg.tol_eq, norm_submultiplicative),
        _run(cfg, s, "adjoint_isometry", "adjoint preserves the norm", cfg.tol_eq, adjoint_isometry),
    ]


# ---------------------------------------------------------------------------
# lattice


def suite_lattice(cfg: SuiteConfig):
    alg = cfg.algebra()
    k = cfg.rank

    def chart_round_trip(rng):
        p = random_projection(rng, alg, k)
        y = random_chart_coordinate(rng, alg, p)
        q = from_chart(alg, p, y)
        y_back = to_chart(alg, p, q)
        q_back = from_chart(alg, p, y_back)
        return max(opnorm(y_back - y), opnorm(q_back - q))

    def section_supports(rng):
        p = random_projection(rng, alg, k)
        q = random_nearby_projection(rng, alg, p)
        pd = polar_decompose(alg, p + to_chart(alg, p, q))
        return max(opnorm(pd.left - q), opnorm(pd.right - p))

    def transition_vs_recompute(rng):
        p = random_projection(rng, alg, k)
        y = random_chart_coordinate(rng, alg, p)
        q = from_chart(alg, p, y)
        p_new = _base_near(rng, alg, q)
        return opnorm(transition(alg, p, p_new, y) - to_chart(alg, p_new, q))

    def transition_cocycle_law(rng):
        p = random_projection(rng, alg, k)
        y = random_chart_coordinate(rng, alg, p, 0.1, 0.4)
        q = from_chart(alg, p, y)
        p1 = _base_near(rng, alg, q)
        p2 = _base_near(rng, alg, q)
        via = transition(alg, p1, p2, transition(alg, p, p1, y))
        direct = transition(alg, p, p2, y)
        return opnorm(via - direct)

    def rank_mismatch(rng):
        p = random_projection(rng, alg, k)
        k2 = k + 1 if k < alg.dim else k - 1
        q = random_projection(rng, alg, k2)
        return 1.0 if in_chart(alg, p, q) else 0.0

    s = "lattice"
    return [
        _run(cfg, s, "chart_round_trip", "chart and inverse chart cancel", cfg.tol_eq, chart_round_trip),
        _run(cfg, s, "section_supports", "local section has supports (q, p)", cfg.tol_eq, section_supports),
        _run(cfg, s, "transition_vs_recompute", "Moebius rule equals recomputation", 10 * cfg.tol_eq, transition_vs_recompute),
        _run(cfg, s, "transition_cocycle", "chart changes compose", 100 * cfg.tol_eq, transition_cocycle_law),
        _run(cfg, s, "rank_mismatch_rejected", "different ranks never share charts", 0.0, rank_mismatch),
    ]


# ---------------------------------------------------------------------------
# groupoid


def suite_groupoid(cfg: SuiteConfig):
    alg = cfg.algebra()
    k = cfg.rank

    def _chain(rng):
        x = random_groupoid_element(rng, alg, k)
        y = _composable_with(rng, alg, x.right)
        z = _composable_with(rng, alg, y.right)
        return x, y, z

    def associativity(rng):
        x, y, z = _chain(rng)
        left = compose(alg, compose(alg, x, y), z)
        right = compose(alg, x, compose(alg, y, z))
        return opnorm(left.op - right.op)

    def unit_laws(rng):
        x = random_groupoid_element(rng, alg, k)
        lu = element(alg, x.left)
        ru = element(alg, x.right)
        return max(
            opnorm(compose(alg, lu, x).op - x.op),
            opnorm(compose(alg, x, ru).op - x.op),
            opnorm(compose(alg, x, inverse(alg, x)).op - x.left),
        )

    def involution_involutive(rng):
        x = random_groupoid_element(rng, alg, k)
        return opnorm(involution(alg, involution(alg, x)).op - x.op)

    def involution_multiplicative(rng):
        x = random_groupoid_element(rng, alg, k)
        y = _composable_with(rng, alg, x.right)
        lhs = involution(alg, compose(alg, x, y))
        rhs = compose(alg, involution(alg, x), involution(alg, y))
        return opnorm(lhs.op - rhs.op)

    def involution_supports(rng):
        x = random_groupoid_element(rng, alg, k)
        jx = involution(alg, x)
        return max(opnorm(jx.left - x.left), opnorm(jx.right - x.right))

    def isometry_closure(rng):
        x = random_groupoid_element(rng, alg, k)
        u = element(alg, x.polar.u)
        y = _composable_with(rng, alg, u.right)
        v = element(alg, y.polar.u)
        uv = compose(alg, u, v)
        ui = inverse(alg, u)
        res_prod = opnorm(adj(uv.op) @ uv.op - uv.right)
        res_inv = opnorm(adj(ui.op) @ ui.op - ui.right)
        return max(res_prod, res_inv)

    def _charted(rng):
        x = random_groupoid_element(rng, alg, k)
        p_t = _base_near(rng, alg, x.left)
        p_s = _base_near(rng, alg, x.right)
        return x, groupoid_chart(alg, p_t, p_s, x)

    def chart_round_trip(rng):
        x, pt = _charted(rng)
        return opnorm(groupoid_chart_inverse(alg, pt).op - x.op)

    def chart_transition(rng):
        x, pt = _charted(rng)
        p_t2 = _base_near(rng, alg, x.left)
        p_s2 = _base_near(rng, alg, x.right)
        moved = groupoid_chart_transition(alg, pt, p_t2, p_s2)
        direct = groupoid_chart(alg, p_t2, p_s2, x)
        return max(
            opnorm(moved.y_target - direct.y_target),
            opnorm(moved.z - direct.z),
            opnorm(moved.y_source - direct.y_source),
        )

    def involution_chart(rng):
        x, pt = _charted(rng)
        via_chart = involution_in_chart(alg, pt)
        direct = groupoid_chart(alg, pt.p_target, pt.p_source, involution(alg, x))
        return max(
            opnorm(via_chart.z - direct.z),
            opnorm(via_chart.y_target - direct.y_target),
            opnorm(via_chart.y_source - direct.y_source),
        )

    def isometry_chart_fixed(rng):
        x = random_groupoid_element(rng, alg, k)
        u = element(alg, x.polar.u)
        p_t = _base_near(rng, alg, u.left)
        p_s = _base_near(rng, alg, u.right)
        pt = groupoid_chart(alg, p_t, p_s, u)
        fixed = involution_in_chart(alg, pt)
        return opnorm(fixed.z - pt.z)

    s = "groupoid"
    return [
        _run(cfg, s, "associativity", "partial product is associative", 10 * cfg.tol_eq, associativity),
        _run(cfg, s, "unit_laws", "supports act as units", cfg.tol_eq, unit_laws),
        _run(cfg, s, "involution_involutive", "adjoint-inverse squares to identity", 10 * cfg.tol_eq, involution_involutive),
        _run(cfg, s, "involution_multiplicative", "adjoint-inverse respects products", 10 * cfg.tol_eq, involution_multiplicative),
        _run(cfg, s, "involution_supports", "adjoint-inverse keeps both supports", cfg.tol_eq, involution_supports),
        _run(cfg, s, "isometry_closure", "partial isometries are closed under the operations", cfg.tol_eq, isometry_closure),
        _run(cfg, s, "chart_round_trip", "three-block chart inverts exactly", cfg.tol_eq, chart_round_trip),
        _run(cfg, s, "chart_transition", "chart change matches recharting", 10 * cfg.tol_eq, chart_transition),
        _run(cfg, s, "involution_chart", "adjoint-inverse commutes with charts", 10 * cfg.tol_eq, involution_chart),
        _run(cfg, s, "isometry_chart_fixed", "partial isometries are chart fixed points", 10 * cfg.tol_eq, isometry_chart_fixed),
    ]


# ---------------------------------------------------------------------------
# bundle


def suite_bundle(cfg: SuiteConfig):
    alg = cfg.algebra()
    k = cfg.rank

    def _setup(rng):
        p0 = random_projection(rng, alg, k)
        eta = random_frame(rng, alg, p0, k)
        return p0, eta

    def frame_chart_reconstruction(rng):
        p0, eta = _setup(rng)
        p = _base_near(rng, alg, polar_decompose(alg, eta).left)
        pt = frame_chart(alg, p, eta)
        return opnorm(frame_chart_inverse(pt) - eta)

    def frame_transition_consistency(rng):
        p0, eta = _setup(rng)
        q = polar_decompose(alg, eta).left
        p1 = _base_near(rng, alg, q)
        p2 = _base_near(rng, alg, q)
        moved = frame_transition(alg, frame_chart(alg, p1, eta), p2)
        direct = frame_chart(alg, p2, eta)
        return max(opnorm(moved.y - direct.y), opnorm(moved.z - direct.z))

    def action_support_freeness(rng):
        p0, eta = _setup(rng)
        g = random_group_element(rng, alg, p0, k)
        res = opnorm(support_projection(alg, eta @ g) - support_projection(alg, eta))
        if opnorm(g - p0) > 1e-3 and opnorm(eta @ g - eta) <= alg.tol_eq:
            res = max(res, 1.0)
        return res

    def trivialization_equivariance(rng):
        p0, eta = _setup(rng)
        q = polar_decompose(alg, eta).left
        p = _base_near(rng, alg, q)
        lam = _anchor_for(rng, alg, p, p0, k)
        g = random_group_element(rng, alg, p0, k)
        q1, zeta1 = trivialize(alg, p, lam, eta)
        q2, zeta2 = trivialize(alg, p, lam, eta @ g)
        return max(opnorm(q2 - q1), opnorm(zeta2 - zeta1 @ g))

    def trivialization_chart_consistency(rng):
        p0, eta = _setup(rng)
        p = _base_near(rng, alg, polar_decompose(alg, eta).left)
        lam = _anchor_for(rng, alg, p, p0, k)
        _, zeta = trivialize(alg, p, lam, eta)
        pt = frame_chart(alg, p, eta)
        return opnorm(zeta - partial_inverse(alg, lam) @ pt.z)

    def cocycle_identity(rng):
        p0 = random_projection(rng, alg, k)
        q = random_projection(rng, alg, k)
        ps = [_base_near(rng, alg, q) for _ in range(3)]
        lams = [_anchor_for(rng, alg, p, p0, k) for p in ps]
        g21 = transition_cocycle(alg, ps[0], ps[1], lams[0], lams[1], q)
        g32 = transition_cocycle(alg, ps[1], ps[2], lams[1], lams[2], q)
        g31 = transition_cocycle(alg, ps[0], ps[2], lams[0], lams[2], q)
        return opnorm(g32 @ g21 - g31)

    def cocycle_anchor_change(rng):
        p0 = random_projection(rng, alg, k)
        q = random_projection(rng, alg, k)
        p1 = _base_near(rng, alg, q)
        p2 = _base_near(rng, alg, q)
        lam1 = _anchor_for(rng, alg, p1, p0, k)
        lam2 = _anchor_for(rng, alg, p2, p0, k)
        h1 = random_group_element(rng, alg, p0, k)
        h2 = random_group_element(rng, alg, p0, k)
        g = transition_cocycle(alg, p1, p2, lam1, lam2, q)
        g_new = transition_cocycle(alg, p1, p2, lam1 @ h1, lam2 @ h2, q)
        return opnorm(g_new - partial_inverse(alg, h2) @ g @ h1)

    def gauge_unit_law(rng):
        p0, eta = _setup(rng)
        img = gauge_to_groupoid(alg, gauge_unit(eta))
        return opnorm(img.op - polar_decompose(alg, eta).left)

    def gauge_representative_independence(rng):
        p0, eta = _setup(rng)
        xi = random_frame(rng, alg, p0, k)
        g = random_group_element(rng, alg, p0, k)
        a = gauge_to_groupoid(alg, GaugeClass(eta, xi))
        b = gauge_to_groupoid(alg, GaugeClass(eta @ g, xi @ g))
        return opnorm(a.op - b.op)

    def gauge_composition(rng):
        p0, eta = _setup(rng)
        xi = random_frame(rng, alg, p0, k)
        g = random_group_element(rng, alg, p0, k)
        lam = xi @ g
        kappa = random_frame(rng, alg, p0, k)
        c1 = GaugeClass(eta, xi)
        c2 = GaugeClass(lam, kappa)
        lhs = gauge_to_groupoid(alg, gauge_compose(alg, c1, c2))
        rhs = compose(alg, gauge_to_groupoid(alg, c1), gauge_to_groupoid(alg, c2))
        return opnorm(lhs.op - rhs.op)

    def gauge_inverse_and_supports(rng):
        p0, eta = _setup(rng)
        xi = random_frame(rng, alg, p0, k)
        c = GaugeClass(eta, xi)
        img = gauge_to_groupoid(alg, c)
        img_inv = gauge_to_groupoid(alg, gauge_inverse(c))
        return max(
            opnorm(img_inv.op - inverse(alg, img).op),
            opnorm(img.left - polar_decompose(alg, eta).left),
            opnorm(img.right - polar_decompose(alg, xi).left),
        )

    def coordinates_diagonal_invariance(rng):
        p0, eta = _setup(rng)
        xi = random_frame(rng, alg, p0, k)
        g = random_group_element(rng, alg, p0, k)
        p_t = _base_near(rng, alg, polar_decompose(alg, eta).left)
        p_s = _base_near(rng, alg, polar_decompose(alg, xi).left)
        z1 = (p_t @ eta) @ partial_inverse(alg, p_s @ xi)
        z2 = (p_t @ eta @ g) @ partial_inverse(alg, p_s @ xi @ g)
        x = gauge_to_groupoid(alg, GaugeClass(eta, xi))
        pt = groupoid_chart(alg, p_t, p_s, x)
        return max(opnorm(z1 - z2), opnorm(pt.z - z1))

    def unitary_reduction(rng):
        p0, eta = _setup(rng)
        eta_u = unitary_reduce(alg, eta)
        return max(
            opnorm(adj(eta_u) @ eta_u - p0),
            opnorm(unitary_reduce(alg, eta_u) - eta_u),
            opnorm(support_projection(alg, eta_u) - support_projection(alg, eta)),
        )

    def unitary_gauge_agreement(rng):
        p0, eta = _setup(rng)
        xi = random_frame(rng, alg, p0, k)
        eta_u = unitary_reduce(alg, eta)
        xi_u = unitary_reduce(alg, xi)
        c = GaugeClass(eta_u, xi_u)
        img_u = gauge_to_groupoid_unitary(alg, p0, c)
        img = gauge_to_groupoid(alg, c)
        return max(
            opnorm(img_u.op - img.op),
            opnorm(adj(img_u.op) @ img_u.op - img_u.right),
        )

    def corner_polar_splitting(rng):
        p0 = random_projection(rng, alg, k)
        g = random_group_element(rng, alg, p0, k)
        u, pos = corner_polar(alg, g)
        evals = np.linalg.eigvalsh(pos)
        return max(
            opnorm(u @ pos - g),
            opnorm(adj(u) @ u - p0),
            opnorm(pos - adj(pos)),
            max(0.0, -float(evals.min())),
        )

    s = "bundle"
    return [
        _run(cfg, s, "frame_chart_reconstruction", "(p+y) z rebuilds the frame", cfg.tol_eq, frame_chart_reconstruction),
        _run(cfg, s, "frame_transition", "frame chart change matches recharting", 10 * cfg.tol_eq, frame_transition_consistency),
        _run(cfg, s, "action_support_freeness", "right action keeps support and is free", cfg.tol_eq, action_support_freeness),
        _run(cfg, s, "trivialization_equivariance", "trivialization is right equivariant", 10 * cfg.tol_eq, trivialization_equivariance),
        _run(cfg, s, "trivialization_chart", "trivialization equals anchor-adjusted chart", 10 * cfg.tol_eq, trivialization_chart_consistency),
        _run(cfg, s, "cocycle_identity", "trivialization cocycle composes", 100 * cfg.tol_eq, cocycle_identity),
        _run(cfg, s, "cocycle_anchor_change", "anchor change conjugates the cocycle", 100 * cfg.tol_eq, cocycle_anchor_change),
        _run(cfg, s, "gauge_unit", "diagonal classes map to units", cfg.tol_eq, gauge_unit_law),
        _run(cfg, s, "gauge_representative_independence", "class map ignores the representative", cfg.tol_eq, gauge_representative_independence),
        _run(cfg, s, "gauge_composition", "class map is a homomorphism", cfg.tol_eq, gauge_composition),
        _run(cfg, s, "gauge_inverse_supports", "class map respects inverse and supports", cfg.tol_eq, gauge_inverse_and_supports),
        _run(cfg, s, "coordinates_diagonal_invariance", "pair coordinates ignore diagonal translation", 10 * cfg.tol_eq, coordinates_diagonal_invariance),
        _run(cfg, s, "unitary_reduction", "orthonormal part is idempotent and support preserving", cfg.tol_eq, unitary_reduction),
        _run(cfg, s, "unitary_gauge_agreement", "orthonormal class map gives partial isometries", cfg.tol_eq, unitary_gauge_agreement),
        _run(cfg, s, "corner_polar_splitting", "corner elements factor as unitary times positive", cfg.tol_eq, corner_polar_splitting),
    ]


# ---------------------------------------------------------------------------
# algebroid


def suite_algebroid(cfg: SuiteConfig):
    alg = cfg.algebra()
    k = cfg.rank
    n = cfg.dim
    h = cfg.fd_step

    def _field_setup(rng):
        p0 = random_projection(rng, alg, k)
        eta = random_frame(rng, alg, p0, k)
        return p0, eta

    def section_field_equivariance(rng):
        p0, eta = _field_setup(rng)
        f = field_from_section(alg, random_section(rng, alg))
        g = random_group_element(rng, alg, p0, k)
        return equivariance_residual(alg, f, eta, g)

    def bracket_linear_commutator(rng):
        p0, eta = _field_setup(rng)
        a = random_operator(rng, alg, 0.5)
        b = random_operator(rng, alg, 0.5)
        br = field_bracket(linear_field(a), linear_field(b), h)
        return opnorm(br.value(eta) - (b @ a - a @ b) @ eta)

    def bracket_equivariance(rng):
        p0, eta = _field_setup(rng)
        f1 = field_from_section(alg, random_section(rng, alg))
        f2 = field_from_section(alg, random_quadratic_section(rng, alg))
        br = field_bracket(f1, f2, h)
        g = random_group_element(rng, alg, p0, k)
        return opnorm(br.value(eta @ g) - br.value(eta) @ g)

    def _chart_setup(rng, p0, eta):
        q = support_projection(alg, eta)
        p = _base_near(rng, alg, q)
        lam = _anchor_for(rng, alg, p, p0, k)
        return p, lam

    def chart_reconstruction(rng):
        p0, eta = _field_setup(rng)
        f = field_from_section(alg, random_section(rng, alg))
        p, lam = _chart_setup(rng, p0, eta)
        c = to_chart_field(alg, f, p, lam)
        return opnorm(chart_field_value(alg, c, eta) - f.value(eta))

    def vertical_chart_a_zero(rng):
        p0, eta = _field_setup(rng)
        f = field_from_section(alg, random_vertical_section(rng, alg))
        p, lam = _chart_setup(rng, p0, eta)
        c = to_chart_field(alg, f, p, lam)
        y = frame_chart(alg, p, eta).y
        return opnorm(c.a(y))

    def flat_vs_chart_bracket(rng):
        p0, eta = _field_setup(rng)
        f1 = field_from_section(alg, random_section(rng, alg))
        f2 = field_from_section(alg, random_quadratic_section(rng, alg))
        p, lam = _chart_setup(rng, p0, eta)
        c1 = to_chart_field(alg, f1, p, lam)
        c2 = to_chart_field(alg, f2, p, lam)
        c12 = chart_bracket(alg, c1, c2, h)
        flat = to_chart_field(alg, field_bracket(f1, f2, h), p, lam)
        y = frame_chart(alg, p, eta).y
        return max(opnorm(c12.a(y) - flat.a(y)), opnorm(c12.b(y) - flat.b(y)))

    def flat_vs_chart_bracket_fd(rng):
        # strip the analytic derivatives so every term goes through central differences
        p0, eta = _field_setup(rng)
        f1 = field_from_section(alg, random_section(rng, alg))
        f2 = field_from_section(alg, random_quadratic_section(rng, alg))
        f1_fd = InvariantField(f1.value)
        f2_fd = InvariantField(f2.value)
        p, lam = _chart_setup(rng, p0, eta)
        c1 = to_chart_field(alg, f1_fd, p, lam)
        c2 = to_chart_field(alg, f2_fd, p, lam)
        c12 = chart_bracket(alg, c1, c2, h)
        flat = to_chart_field(alg, field_bracket(f1_fd, f2_fd, h), p, lam)
        y = frame_chart(alg, p, eta).y
        return max(opnorm(c12.a(y) - flat.a(y)), opnorm(c12.b(y) - flat.b(y)))

    def wirtinger_fd_agreement(rng):
        # analytic directional derivatives must match the difference quotients;
        # tangent directions live in the ideal of the base projection
        p0, eta = _field_setup(rng)
        f = field_from_section(alg, random_quadratic_section(rng, alg))
        e = rng.complex_normal((n, n)) @ p0
        res_h = opnorm(f.d_eta(eta, e) - holo_directional(f.value, eta, e, h))
        res_c = opnorm(f.d_conj(eta, e) - conj_directional(f.value, eta, e, h))
        return max(res_h, res_c)

    def flat_vs_section_bracket(rng):
        p0, eta = _field_setup(rng)
        x1 = random_section(rng, alg)
        x2 = random_quadratic_section(rng, alg)
        f1 = field_from_section(alg, x1)
        f2 = field_from_section(alg, x2)
        x12 = section_bracket(alg, p0, x1, x2, h)
        lhs = x12.value(support_projection(alg, eta)) @ eta
        return opnorm(lhs - field_bracket(f1, f2, h).value(eta))

    def section_chart_agreement(rng):
        p0, eta = _field_setup(rng)
        x1 = random_section(rng, alg)
        x2 = random_quadratic_section(rng, alg)
        p, _ = _chart_setup(rng, p0, eta)
        y = frame_chart(alg, p, eta).y
        q = from_chart(alg, p, y)
        via_chart = section_bracket_chart_value(alg, p, x1, x2, y, h)
        direct = section_bracket(alg, p0, x1, x2, h).value(q)
        return opnorm(via_chart - direct)

    def antisymmetry(rng):
        p0, eta = _field_setup(rng)
        f = field_from_section(alg, random_section(rng, alg))
        p, lam = _chart_setup(rng, p0, eta)
        c = to_chart_field(alg, f, p, lam)
        y = frame_chart(alg, p, eta).y
        cb = chart_bracket(alg, c, c, h)
        return max(
            opnorm(field_bracket(f, f, h).value(eta)),
            opnorm(cb.a(y)),
            opnorm(cb.b(y)),
        )

    def jacobi(rng):
        p0, eta = _field_setup(rng)
        fs = [
            field_from_section(alg, random_section(rng, alg, 0.6)),
            field_from_section(alg, random_quadratic_section(rng, alg, 0.6)),
            linear_field(random_operator(rng, alg, 0.5)),
        ]
        total = None
        for i, j, l in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            term = field_bracket(fs[i], field_bracket(fs[j], fs[l], h), h).value(eta)
            total = term if total is None else total + term
        return opnorm(total)

    def vertical_ideal(rng):
        p0, eta = _field_setup(rng)
        v1 = field_from_section(alg, random_vertical_section(rng, alg))
        v2 = field_from_section(alg, random_vertical_section(rng, alg))
        f = field_from_section(alg, random_section(rng, alg))
        p, lam = _chart_setup(rng, p0, eta)
        y = frame_chart(alg, p, eta).y
        c_vv = chart_bracket(alg, to_chart_field(alg, v1, p, lam), to_chart_field(alg, v2, p, lam), h)
        c_vf = chart_bracket(alg, to_chart_field(alg, v1, p, lam), to_chart_field(alg, f, p, lam), h)
        return max(opnorm(c_vv.a(y)), opnorm(c_vf.a(y)))

    def holomorphic_closure(rng):
        p0, eta = _field_setup(rng)
        a1 = random_operator(rng, alg, 0.5)
        a2 = random_operator(rng, alg, 0.5)
        c = random_operator(rng, alg, 0.3)

        def quad_value(m):
            return a2 @ m @ c @ m

        quad = InvariantField(
            quad_value,
            lambda m, e: a2 @ e @ c @ m + a2 @ m @ c @ e,
            lambda m, e: np.zeros_like(m),
        )
        br = field_bracket(linear_field(a1), quad, h)
        e_dir = rng.complex_normal((n, n)) @ p0
        return opnorm(conj_directional(br.value, eta, e_dir, h))

    def leibniz(rng):
        p0, eta = _field_setup(rng)
        f1 = field_from_section(alg, random_section(rng, alg))
        f2 = field_from_section(alg, random_quadratic_section(rng, alg))
        func = random_trace_function(rng, alg)
        return leibniz_residual(alg, f1, f2, func, eta, h)

    def anchor_homomorphism(rng):
        p0, eta = _field_setup(rng)
        f1 = field_from_section(alg, random_section(rng, alg))
        f2 = field_from_section(alg, random_quadratic_section(rng, alg))
        p, lam = _chart_setup(rng, p0, eta)
        c1 = to_chart_field(alg, f1, p, lam)
        c2 = to_chart_field(alg, f2, p, lam)
        y = frame_chart(alg, p, eta).y
        jl = real_directional(c2.a, y, c1.a(y), h) - real_directional(c1.a, y, c2.a(y), h)
        flat_a = to_chart_field(alg, field_bracket(f1, f2, h), p, lam).a(y)
        return opnorm(jl - flat_a)

    def anchor_flow(rng):
        p0, eta = _field_setup(rng)
        f = field_from_section(alg, random_section(rng, alg))
        p, lam = _chart_setup(rng, p0, eta)
        return anchor_flow_residual(alg, f, p, lam, eta, h)

    def tangent_group_laws(rng):
        p0 = random_projection(rng, alg, k)
        ts = [
            (random_group_element(rng, alg, p0, k), random_corner_element(rng, alg, p0, k))
            for _ in range(3)
        ]
        assoc_l = tangent_mul(alg, tangent_mul(alg, ts[0], ts[1]), ts[2])
        assoc_r = tangent_mul(alg, ts[0], tangent_mul(alg, ts[1], ts[2]))
        unit = (p0, np.zeros_like(p0))
        u_l = tangent_mul(alg, unit, ts[0])
        inv = tangent_inverse(alg, ts[0])
        round_trip = tangent_mul(alg, ts[0], inv)
        return max(
            opnorm(assoc_l[0] - assoc_r[0]),
            opnorm(assoc_l[1] - assoc_r[1]),
            opnorm(u_l[0] - ts[0][0]),
            opnorm(u_l[1] - ts[0][1]),
            opnorm(round_trip[0] - p0),
            opnorm(round_trip[1]),
        )

    def tangent_action_property(rng):
        p0, eta = _field_setup(rng)
        theta = random_operator(rng, alg) @ p0
        t1 = (random_group_element(rng, alg, p0, k), random_corner_element(rng, alg, p0, k))
        t2 = (random_group_element(rng, alg, p0, k), random_corner_element(rng, alg, p0, k))
        step = tangent_act(tangent_act((theta, eta), t1), t2)
        direct = tangent_act((theta, eta), tangent_mul(alg, t1, t2))
        return max(opnorm(step[0] - direct[0]), opnorm(step[1] - direct[1]))

    def vertical_span_rank(rng):
        p0, eta = _field_setup(rng)
        w0 = projection_basis(p0, k)
        cols = []
        for i in range(k):
            for j in range(k):
                m = np.outer(w0[:, i], w0[:, j].conj())
                cols.append((eta @ m @ w0).reshape(-1))
        mat = np.stack(cols, axis=1)
        s_vals = np.linalg.svd(mat, compute_uv=False)
        rank = int(np.count_nonzero(s_vals > alg.tol_rank * float(s_vals[0])))
        return float(abs(rank - k * k))

    s = "algebroid"
    return [
        _run(cfg, s, "section_field_equivariance", "section fields are right equivariant", cfg.tol_eq, section_field_equivariance),
        _run(cfg, s, "bracket_linear_commutator", "linear fields bracket to the reversed commutator", cfg.tol_bracket, bracket_linear_commutator),
        _run(cfg, s, "bracket_equivariance", "the bracket preserves equivariance", cfg.tol_bracket, bracket_equivariance),
        _run(cfg, s, "chart_reconstruction", "a z + (p+y) b z rebuilds the field", 10 * cfg.tol_eq, chart_reconstruction),
        _run(cfg, s, "vertical_chart_a_zero", "vertical fields have no base velocity", 10 * cfg.tol_eq, vertical_chart_a_zero),
        _run(cfg, s, "flat_vs_chart_bracket", "frame and chart brackets agree", cfg.tol_bracket, flat_vs_chart_bracket),
        _run(cfg, s, "flat_vs_chart_bracket_fd", "bracket agreement on the difference-quotient path", cfg.tol_fd, flat_vs_chart_bracket_fd),
        _run(cfg, s, "wirtinger_fd_agreement", "analytic derivatives match difference quotients", cfg.tol_fd, wirtinger_fd_agreement),
        _run(cfg, s, "flat_vs_section_bracket", "frame and section brackets agree", cfg.tol_bracket, flat_vs_section_bracket),
        _run(cfg, s, "section_chart_agreement", "both section bracket evaluators agree", cfg.tol_bracket, section_chart_agreement),
        _run(cfg, s, "antisymmetry", "bracket of a field with itself vanishes", 1e-10, antisymmetry),
        _run(cfg, s, "jacobi", "cyclic nested brackets cancel", cfg.tol_jacobi, jacobi),
        _run(cfg, s, "vertical_ideal", "vertical fields form an ideal", cfg.tol_bracket, vertical_ideal),
        _run(cfg, s, "holomorphic_closure", "holomorphic fields are bracket closed", cfg.tol_fd, holomorphic_closure),
        _run(cfg, s, "leibniz", "bracket satisfies the module rule", cfg.tol_bracket, leibniz),
        _run(cfg, s, "anchor_homomorphism", "base velocities bracket to the base bracket", cfg.tol_fd, anchor_homomorphism),
        _run(cfg, s, "anchor_flow", "base velocity matches the lattice flow", cfg.tol_fd, anchor_flow),
        _run(cfg, s, "tangent_group_laws", "tangent group multiplies correctly", 10 * cfg.tol_eq, tangent_group_laws),
        _run(cfg, s, "tangent_action", "tangent action respects the product", 10 * cfg.tol_eq, tangent_action_property),
        _run(cfg, s, "vertical_span_rank", "orbit directions span k^2 dimensions", 0.0, vertical_span_rank),
    ]


# ---------------------------------------------------------------------------
# unitary subbundle


def suite_unitary(cfg: SuiteConfig):
    alg = cfg.algebra()
    k = cfg.rank
    h = cfg.fd_step

    def _unitary_setup(rng):
        p0 = random_projection(rng, alg, k)
        eta = unitary_reduce(alg, random_frame(rng, alg, p0, k))
        return p0, eta

    def tangency(rng):
        p0, eta = _unitary_setup(rng)
        f = field_from_section(alg, random_skew_section(rng, alg))
        return unitary_residual(alg, f, eta)

    def bracket_tangency_closure(rng):
        p0, eta = _unitary_setup(rng)
        f1 = field_from_section(alg, random_skew_section(rng, alg))
        f2 = field_from_section(alg, random_skew_section(rng, alg))
        return unitary_residual(alg, field_bracket(f1, f2, h), eta)

    def _chart_pair(rng, p0, eta):
        q = support_projection(alg, eta)
        p = _base_near(rng, alg, q)
        lam = _anchor_for(rng, alg, p, p0, k)
        y = frame_chart(alg, p, eta).y
        return p, lam, y

    def chart_form_antihermitian(rng):
        p0, eta = _unitary_setup(rng)
        f = field_from_section(alg, random_skew_section(rng, alg))
        p, lam, y = _chart_pair(rng, p0, eta)
        yy = chart_unitary_form(to_chart_field(alg, f, p, lam), y)
        return opnorm(yy + adj(yy))

    def chart_bracket_closure(rng):
        p0, eta = _unitary_setup(rng)
        f1 = field_from_section(alg, random_skew_section(rng, alg))
        f2 = field_from_section(alg, random_skew_section(rng, alg))
        p, lam, y = _chart_pair(rng, p0, eta)
        c12 = chart_bracket(
            alg, to_chart_field(alg, f1, p, lam), to_chart_field(alg, f2, p, lam), h
        )
        yy = chart_unitary_form(c12, y)
        return opnorm(yy + adj(yy))

    def chart_form_at_center(rng):
        p0, eta = _unitary_setup(rng)
        f = field_from_section(alg, random_section(rng, alg))
        p = support_projection(alg, eta)
        lam = make_anchor(alg, p, p0, eta)
        c = to_chart_field(alg, f, p, lam)
        zero = np.zeros_like(p)
        return opnorm(chart_unitary_form(c, zero) - c.b(zero))

    s = "unitary"
    return [
        _run(cfg, s, "tangency", "skew sections are tangent to orthonormal frames", 10 * cfg.tol_eq, tangency),
        _run(cfg, s, "bracket_tangency_closure", "tangency survives the bracket", cfg.tol_bracket, bracket_tangency_closure),
        _run(cfg, s, "chart_form_antihermitian", "the chart form is anti-hermitian", cfg.tol_bracket, chart_form_antihermitian),
        _run(cfg, s, "chart_bracket_closure", "anti-hermitian chart forms are bracket closed", cfg.tol_bracket, chart_bracket_closure),
        _run(cfg, s, "chart_form_at_center", "chart form reduces to b at the center", 10 * cfg.tol_eq, chart_form_at_center),
    ]


# ---------------------------------------------------------------------------
# exact sequence


def suite_atiyah(cfg: SuiteConfig):
    alg = cfg.algebra()
    k = cfg.rank

    def _report(rng):
        p0 = random_projection(rng, alg, k)
        eta = random_frame(rng, alg, p0, k)
        p = _base_near(rng, alg, support_projection(alg, eta))
        return atiyah_exactness(alg, p0, p, [eta])

    def rank_counts(rng):
        rep = _report(rng)
        bad = 0
        bad += sum(1 for r in rep["rank_vertical"] if r != k * k)
        bad += sum(1 for r in rep["rank_anchor"] if r != k * (cfg.dim - k))
        bad += sum(1 for d in rep["kernel_dim"] if d != k * k)
        if rep["dim_total"] != k * k + k * (cfg.dim - k):
            bad += 1
        return float(bad)

    def containment(rng):
        return _report(rng)["containment_residual"]

    s = "atiyah"
    return [
        _run(cfg, s, "rank_counts", "vertical, anchor and total ranks split as k^2 + k(n-k)", 0.0, rank_counts),
        _run(cfg, s, "containment", "anchor annihilates the vertical image", cfg.tol_eq, containment),
    ]


# ---------------------------------------------------------------------------
# derivations


def suite_derivations(cfg: SuiteConfig):
    alg = cfg.algebra()
    k = cfg.rank
    n = cfg.dim
    h = cfg.fd_step

    def _setup(rng):
        p0 = random_projection(rng, alg, k)
        basis = CornerBasis.from_projection(p0)
        eta = random_frame(rng, alg, p0, k)
        return p0, basis, eta

    def _random_auto(rng, basis):
        nk = basis.n * basis.k
        for _ in range(64):
            m = rng.complex_normal((nk, nk))
            s = np.linalg.svd(m, compute_uv=False)
            if float(s[0]) / float(s[-1]) < 1e4:
                return m
        raise RuntimeError("no well conditioned automorphism found")

    def trivial_laws(rng):
        p0, basis, eta = _setup(rng)
        etas = [eta, random_frame(rng, alg, p0, k), random_frame(rng, alg, p0, k), random_frame(rng, alg, p0, k)]
        arrows = [
            TrivialArrow(etas[i], _random_auto(rng, basis), etas[i + 1]) for i in range(3)
        ]
        lhs = trivial_compose(alg, trivial_compose(alg, arrows[0], arrows[1]), arrows[2])
        rhs = trivial_compose(alg, arrows[0], trivial_compose(alg, arrows[1], arrows[2]))
        unit = trivial_compose(alg, arrows[0], trivial_unit(basis, etas[1]))
        inv = trivial_compose(alg, arrows[0], trivial_inverse(alg, arrows[0]))
        return max(
            endo_norm(lhs.auto - rhs.auto),
            endo_norm(unit.auto - arrows[0].auto),
            endo_norm(inv.auto - basis.identity_map()),
        )

    def mod_characterization(rng):
        p0, basis, eta = _setup(rng)
        g = random_group_element(rng, alg, p0, k)
        f = mod_factor(alg, basis, basis.right_mult(g))
        bad = 0.0 if opnorm(f - g) <= 10 * alg.tol_eq else 1.0
        tampered = basis.right_mult(g) + 1e-3 * basis.left_mult(random_operator(rng, alg, 1.0))
        try:
            mod_factor(alg, basis, tampered)
            bad += 1.0
        except NotModAutomorphismError:
            pass
        return bad

    def quotient_invariance(rng):
        p0, basis, eta = _setup(rng)
        xi = random_frame(rng, alg, p0, k)
        f = random_group_element(rng, alg, p0, k)
        arrow = TrivialArrow(xi, basis.right_mult(f), eta)
        g = random_group_element(rng, alg, p0, k)
        hgrp = random_group_element(rng, alg, p0, k)
        translated = TrivialArrow(
            xi @ hgrp,
            basis.right_mult(hgrp) @ basis.right_mult(f) @ basis.right_mult(partial_inverse(alg, g)),
            eta @ g,
        )
        a = quotient_class(alg, basis, arrow)
        b = quotient_class(alg, basis, translated)
        return opnorm(a.op - b.op)

    def quotient_homomorphism(rng):
        p0, basis, eta = _setup(rng)
        xi = random_frame(rng, alg, p0, k)
        lam = random_frame(rng, alg, p0, k)
        f1 = random_group_element(rng, alg, p0, k)
        f2 = random_group_element(rng, alg, p0, k)
        a1 = TrivialArrow(lam, basis.right_mult(f1), xi)
        a2 = TrivialArrow(xi, basis.right_mult(f2), eta)
        lhs = quotient_class(alg, basis, trivial_compose(alg, a1, a2))
        rhs = compose(alg, quotient_class(alg, basis, a1), quotient_class(alg, basis, a2))
        return opnorm(lhs.op - rhs.op)

    def quotient_unit(rng):
        p0, basis, eta = _setup(rng)
        img = quotient_class(alg, basis, trivial_unit(basis, eta))
        return opnorm(img.op - support_projection(alg, eta))

    def pair_table(rng):
        p0, basis, eta = _setup(rng)
        frames = [eta, random_frame(rng, alg, p0, k), random_frame(rng, alg, p0, k)]
        gs = [random_group_element(rng, alg, p0, k), random_group_element(rng, alg, p0, k)]
        return pair_groupoid_report(alg, p0, frames, gs)["max_residual"]

    def random_corner_section(rng, p0):
        # section with values in the corner around p0, so frames flow vertically
        from .algebroid import poly_section

        c0 = p0 @ random_operator(rng, alg, 0.5) @ p0
        c1 = p0 @ random_operator(rng, alg, 0.5)
        c2 = random_operator(rng, alg, 0.5) @ p0
        return poly_section([(c0,), (c1, c2)])

    def _flows(rng, p0, basis):
        a = random_operator(rng, alg, 0.5)
        theta0 = basis.left_mult(random_operator(rng, alg, 0.5))
        fl = left_flow(basis, a, theta0)
        fg = gauge_flow(alg, basis, random_corner_section(rng, p0))
        return fl, fg

    def bisection_product(rng):
        p0, basis, eta = _setup(rng)
        fl, fg = _flows(rng, p0, basis)
        b1 = fl.at(0.3)
        b2 = fg.at(0.2)
        w = random_operator(rng, alg) @ p0
        v = (w, eta)
        lhs = apply_bisection(basis, compose_bisections(b1, b2), v)
        step = apply_bisection(basis, b2, v)
        rhs = apply_bisection(basis, b1, step)
        return max(opnorm(lhs[0] - rhs[0]), opnorm(lhs[1] - rhs[1]))

    def bisection_equivariance(rng):
        p0, basis, eta = _setup(rng)
        _, fg = _flows(rng, p0, basis)
        b = fg.at(0.4)
        g = random_group_element(rng, alg, p0, k)
        hval = b.h(eta, g)
        res_gamma = opnorm(b.gamma(eta @ g) - b.gamma(eta) @ hval)
        lhs = b.auto(eta @ g)
        rhs = basis.right_mult(hval) @ b.auto(eta) @ basis.right_mult(partial_inverse(alg, g))
        return max(res_gamma, endo_norm(lhs - rhs))

    def bisection_cocycle(rng):
        p0, basis, eta = _setup(rng)
        _, fg = _flows(rng, p0, basis)
        b = fg.at(0.4)
        g1 = random_group_element(rng, alg, p0, k)
        g2 = random_group_element(rng, alg, p0, k)
        lhs = b.h(eta, g1 @ g2)
        rhs = b.h(eta, g1) @ b.h(eta @ g1, g2)
        return opnorm(lhs - rhs)

    def transport_time_zero(rng):
        p0, basis, eta = _setup(rng)
        fl, _ = _flows(rng, p0, basis)
        z = field_from_section(alg, random_section(rng, alg))
        return opnorm(transport(alg, basis, fl, z, 0.0).value(eta) - z.value(eta))

    def transport_derivative(rng):
        p0, basis, eta = _setup(rng)
        fl, fg = _flows(rng, p0, basis)
        z = field_from_section(alg, random_section(rng, alg))
        worst = 0.0
        for flow in (fl, fg):
            fd = (
                transport(alg, basis, flow, z, h).value(eta)
                - transport(alg, basis, flow, z, -h).value(eta)
            ) / (2.0 * h)
            direct = derivation_apply(basis, flow.derivation, z, h).value(eta)
            worst = max(worst, opnorm(fd - direct))
        return worst

    def transport_group_law(rng):
        p0, basis, eta = _setup(rng)
        fl, fg = _flows(rng, p0, basis)
        z = field_from_section(alg, random_section(rng, alg))
        worst = 0.0
        for flow in (fl, fg):
            both = transport(alg, basis, flow, transport(alg, basis, flow, z, 0.2), 0.3)
            direct = transport(alg, basis, flow, z, 0.5)
            worst = max(worst, opnorm(both.value(eta) - direct.value(eta)))
        return worst

    def derivation_leibniz(rng):
        p0, basis, eta = _setup(rng)
        fl, _ = _flows(rng, p0, basis)
        z = field_from_section(alg, random_section(rng, alg))
        func = random_trace_function(rng, alg)
        return derivation_leibniz_residual(alg, basis, fl.derivation, func, z, eta, h)

    def operator_commutator(rng):
        p0, basis, eta = _setup(rng)
        fl, fg = _flows(rng, p0, basis)
        d1, d2 = fl.derivation, fg.derivation
        z = field_from_section(alg, random_section(rng, alg))
        br = derivation_bracket(basis, d1, d2, h)
        lhs = derivation_apply(basis, br, z, h).value(eta)
        d2z = derivation_apply(basis, d2, z, h)
        d1z = derivation_apply(basis, d1, z, h)
        rhs = derivation_apply(basis, d1, d2z, h).value(eta) - derivation_apply(basis, d2, d1z, h).value(eta)
        return opnorm(lhs - rhs)

    def lift_commutation(rng):
        p0, basis, eta = _setup(rng)
        fl, fg = _flows(rng, p0, basis)
        d1, d2 = fl.derivation, fg.derivation
        br = derivation_bracket(basis, d1, d2, h)
        w = random_operator(rng, alg) @ p0
        lifted = linear_lift(basis, br)(eta, w)
        bracketed = lift_bracket(linear_lift(basis, d1), linear_lift(basis, d2), h)(eta, w)
        return max(opnorm(lifted[0] - bracketed[0]), opnorm(lifted[1] - bracketed[1]))

    def anchor_law(rng):
        p0, basis, eta = _setup(rng)
        fl, fg = _flows(rng, p0, basis)
        d1, d2 = fl.derivation, fg.derivation
        br = derivation_bracket(basis, d1, d2, h)
        # the anchor of a derivation is minus its field; those brackets must match
        jl = real_directional(d2.field.value, eta, d1.field.value(eta), h) - real_directional(
            d1.field.value, eta, d2.field.value(eta), h
        )
        return opnorm(-br.field.value(eta) - jl)

    def equivariance_conditions(rng):
        p0, basis, eta = _setup(rng)
        fl, fg = _flows(rng, p0, basis)
        g = random_group_element(rng, alg, p0, k)
        rep = equivariance_residuals(alg, basis, fg.derivation, [(eta, g)])
        worst = max(rep["max_field_residual"], rep["max_map_residual"])
        rep0 = equivariance_residuals(alg, basis, fl.derivation, [(eta, g)])
        return max(worst, rep0["max_field_residual"], rep0["max_map_residual"])

    def violation_detected(rng):
        p0, basis, eta = _setup(rng)
        f = field_from_section(alg, random_section(rng, alg))
        c = random_operator(rng, alg, 1.0) @ p0
        broken = InvariantField(lambda m: f.value(m) + 0.01 * c)
        d = Derivation(broken, lambda m: basis.left_mult(np.zeros((n, n), dtype=complex)))
        g = _group_element_away(rng, alg, p0, k)
        rep = equivariance_residuals(alg, basis, d, [(eta, g)])
        return 1.0 if rep["max_field_residual"] <= 1e-3 else 0.0

    def bracket_equivariant_closure(rng):
        p0, basis, eta = _setup(rng)

        def equivariant_derivation():
            sec = random_section(rng, alg)
            theta_sec = random_section(rng, alg)
            return Derivation(
                field_from_section(alg, sec),
                lambda m: basis.left_mult(theta_sec.value(support_projection(alg, m))),
            )

        d1 = equivariant_derivation()
        d2 = equivariant_derivation()
        br = derivation_bracket(basis, d1, d2, h)
        g = random_group_element(rng, alg, p0, k)
        rep = equivariance_residuals(alg, basis, br, [(eta, g)])
        return max(rep["max_field_residual"], rep["max_map_residual"])

    s = "derivations"
    return [
        _run(cfg, s, "trivial_laws", "the trivial groupoid multiplies correctly", 100 * cfg.tol_eq, trivial_laws),
        _run(cfg, s, "mod_characterization", "module automorphisms are right translations", 0.0, mod_characterization),
        _run(cfg, s, "quotient_invariance", "the class invariant ignores translations", cfg.tol_eq, quotient_invariance),
        _run(cfg, s, "quotient_homomorphism", "the class map is a homomorphism", cfg.tol_eq, quotient_homomorphism),
        _run(cfg, s, "quotient_unit", "units map to supports", cfg.tol_eq, quotient_unit),
        _run(cfg, s, "pair_table", "frame pairs compose like base pairs", 10 * cfg.tol_eq, pair_table),
        _run(cfg, s, "bisection_product", "bisection product acts as composition", 10 * cfg.tol_eq, bisection_product),
        _run(cfg, s, "bisection_equivariance", "equivariant bisections satisfy both rules", 100 * cfg.tol_eq, bisection_equivariance),
        _run(cfg, s, "bisection_cocycle", "the bisection cocycle composes", 100 * cfg.tol_eq, bisection_cocycle),
        _run(cfg, s, "transport_time_zero", "transport at time zero is the identity", cfg.tol_eq, transport_time_zero),
        _run(cfg, s, "transport_derivative", "transport differentiates to the derivation", cfg.tol_fd, transport_derivative),
        _run(cfg, s, "transport_group_law", "transports compose in time", 100 * cfg.tol_eq, transport_group_law),
        _run(cfg, s, "derivation_leibniz", "derivations obey the module rule", cfg.tol_bracket, derivation_leibniz),
        _run(cfg, s, "operator_commutator", "the bracket is the operator commutator", cfg.tol_jacobi, operator_commutator),
        _run(cfg, s, "lift_commutation", "linear lifts intertwine the brackets", cfg.tol_jacobi, lift_commutation),
        _run(cfg, s, "anchor_law", "the anchor respects derivation brackets", cfg.tol_fd, anchor_law),
        _run(cfg, s, "equivariance_conditions", "flow derivations satisfy both conditions", 100 * cfg.tol_eq, equivariance_conditions),
        _run(cfg, s, "violation_detected", "broken equivariance is detected", 0.0, violation_detected),
        _run(cfg, s, "bracket_equivariant_closure", "equivariance survives the bracket", cfg.tol_fd, bracket_equivariant_closure),
    ]


# ---------------------------------------------------------------------------
# column-vector example


_GRASSMANN_CASES = [(d, nn) for d in range(3, 9) for nn in range(1, min(3, d - 1) + 1)]


def suite_grassmann(cfg: SuiteConfig):
    tol = 1e-12

    def _case(rng):
        idx = min(int(rng.uniform_in(0, len(_GRASSMANN_CASES), 1)[0]), len(_GRASSMANN_CASES) - 1)
        d, nn = _GRASSMANN_CASES[idx]
        alg_d = Algebra(d, tol_rank=cfg.tol_rank, tol_eq=cfg.tol_eq)
        return d, nn, alg_d

    def _columns(rng, alg_d, d, nn):
        u = random_unitary(rng, d)
        s = rng.uniform_in(0.5, 2.0, nn)
        return u[:, :nn] * s

    def gram_polar_agreement(rng):
        d, nn, alg_d = _case(rng)
        cols = _columns(rng, alg_d, d, nn)
        ucols, modulus_block = gram_polar(alg_d, DiracFrame(cols))
        pd = polar_decompose(alg_d, embed_columns(cols))
        mod_embed = np.zeros((d, d), dtype=complex)
        mod_embed[:nn, :nn] = modulus_block
        return max(opnorm(embed_columns(ucols) - pd.u), opnorm(mod_embed - pd.modulus))

    def supports_agreement(rng):
        d, nn, alg_d = _case(rng)
        eta_cols = _columns(rng, alg_d, d, nn)
        xi_cols = _columns(rng, alg_d, d, nn)
        left, right = supports_from_columns(alg_d, eta_cols, xi_cols)
        pd = polar_decompose(alg_d, eta_cols @ adj(xi_cols))
        return max(opnorm(left - pd.left), opnorm(right - pd.right))

    def _indices(rng, d, nn):
        keys = rng.uniform(d)
        return tuple(sorted(np.argsort(keys)[:nn].tolist()))

    def multiindex_agreement(rng):
        d, nn, alg_d = _case(rng)
        for _ in range(64):
            cols = _columns(rng, alg_d, d, nn)
            indices = _indices(rng, d, nn)
            minor = cols[list(indices), :]
            s = np.linalg.svd(minor, compute_uv=False)
            if float(s[-1]) > 0.15:
                break
        else:
            raise RuntimeError("no well conditioned minor")
        z_blk, y_blk = multiindex_coordinates(alg_d, indices, DiracFrame(cols))
        p = index_projection(d, indices)
        pt = frame_chart(alg_d, p, embed_columns(cols))
        z_res = opnorm(z_blk - (pt.z)[list(indices), :nn])
        y_res = opnorm(y_blk - extract_y(indices, d, pt.y))
        return max(z_res, y_res)

    def _block_fields(rng, d, nn, indices):
        m = d - nn

        def mat(r, c, scale=0.5):
            return rng.complex_normal((r, c)) * scale

        def coeffs():
            return {
                "a0": mat(m, nn),
                "a1": (mat(m, m), mat(nn, nn)),
                "a2": (mat(m, nn), mat(m, nn)),
                "b0": mat(nn, nn),
                "b1": (mat(nn, m), mat(nn, nn)),
                "b2": (mat(nn, nn), mat(m, nn)),
            }

        return (
            poly_block_field(indices, d, coeffs()),
            poly_block_field(indices, d, coeffs()),
        )

    def bracket_agreement(rng):
        d, nn, alg_d = _case(rng)
        indices = _indices(rng, d, nn)
        c1, c2 = _block_fields(rng, d, nn, indices)
        y_blk = rng.complex_normal((d - nn, nn)) * 0.5
        blk = block_bracket(c1, c2, cfg.fd_step)
        gen = chart_bracket(alg_d, embed_block_field(c1), embed_block_field(c2), cfg.fd_step)
        y_op = embed_y(indices, d, y_blk)
        a_res = opnorm(blk.a(y_blk) - extract_y(indices, d, gen.a(y_op)))
        b_res = opnorm(blk.b(y_blk) - extract_b(indices, d, gen.b(y_op)))
        return max(a_res, b_res)

    def anchor_agreement(rng):
        d, nn, alg_d = _case(rng)
        indices = _indices(rng, d, nn)
        c1, c2 = _block_fields(rng, d, nn, indices)
        y_blk = rng.complex_normal((d - nn, nn)) * 0.5
        blk = block_bracket(c1, c2, cfg.fd_step)
        gen = chart_bracket(alg_d, embed_block_field(c1), embed_block_field(c2), cfg.fd_step)
        y_op = embed_y(indices, d, y_blk)
        return opnorm(blk.a(y_blk) - extract_y(indices, d, gen.a(y_op)))

    def stiefel_identification(rng):
        d, nn, alg_d = _case(rng)
        cols = _columns(rng, alg_d, d, nn)
        p0 = index_projection(d, range(nn))
        gram = adj(cols) @ cols
        w, v = np.linalg.eigh(gram)
        block_ortho = cols @ ((v / np.sqrt(w)) @ adj(v))
        res = opnorm(unitary_reduce(alg_d, embed_columns(cols)) - embed_columns(block_ortho))
        # any rank-nn projection arises as the support of a frame
        q = random_projection(rng, alg_d, nn)
        eta = projection_basis(q, nn) @ adj(projection_basis(p0, nn))
        res = max(res, opnorm(support_projection(alg_d, eta) - q))
        return res

    s = "grassmann"
    return [
        _run(cfg, s, "gram_polar_agreement", "column polar data matches the operator polar data", tol, gram_polar_agreement),
        _run(cfg, s, "supports_agreement", "column supports match the operator supports", tol, supports_agreement),
        _run(cfg, s, "multiindex_agreement", "multi-index blocks match the frame chart", tol, multiindex_agreement),
        _run(cfg, s, "bracket_agreement", "matrix-element bracket matches the chart bracket", tol, bracket_agreement),
        _run(cfg, s, "anchor_agreement", "matrix-element anchor matches the chart anchor", tol, anchor_agreement),
        _run(cfg, s, "stiefel_identification", "orthonormal frames and supports identify correctly", 10 * cfg.tol_eq, stiefel_identification),
    ]


SUITES = {
    "wstar": suite_wstar,
    "lattice": suite_lattice,
    "groupoid": suite_groupoid,
    "bundle": suite_bundle,
    "algebroid": suite_algebroid,
    "unitary": suite_unitary,
    "atiyah": suite_atiyah,
    "derivations": suite_derivations,
    "grassmann": suite_grassmann,
}

SUITE_DESCRIPTIONS = {
    "wstar": "polar data, partial inverses, supports",
    "lattice": "projection charts and chart changes",
    "groupoid": "composition, involution, three-block charts",
    "bundle": "frames, trivializations, gauge classes",
    "algebroid": "invariant fields, brackets, anchor",
    "unitary": "the orthonormal-frame subbundle",
    "atiyah": "vertical and anchor rank splitting",
    "derivations": "trivial groupoid, bisections, derivations",
    "grassmann": "column-vector cross checks",
}
