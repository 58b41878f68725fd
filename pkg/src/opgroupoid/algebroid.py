"""Invariant vector fields on the frame space and their Lie brackets.

Sections of the algebroid over the lattice orbit are realized three
ways, with conversion maps and brackets for each:

* as invariant fields on the frame space, theta(eta) in the p0 ideal,
  equivariant under the structure group: theta(eta g) = theta(eta) g;
* as chart fields (a, b) over a lattice chart, where a(y) is the base
  velocity in (1-p)Mp and b(y) the corner part of the fiber velocity;
* as lattice sections q -> X(q), related by theta(eta) = X(l(eta)) eta.

All derivatives run through the Wirtinger engine; fields built from
polynomial sections carry analytic derivative evaluators, everything
else falls back to central differences.  Bracket values of two fields
are the difference of the directional derivatives of one field along the
other, expanded into the four Wirtinger pairings.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .algebra import (
    Algebra,
    adj,
    opnorm,
    partial_inverse,
    projection_basis,
    projection_rank,
)
from .lattice import from_chart
from .frames import frame_chart
from .wirtinger import DEFAULT_STEP, conj_directional, holo_directional, real_directional


# ---------------------------------------------------------------------------
# field and section containers


@dataclass(frozen=True)
class InvariantField:
    """Vector field on the frame space, given by its value map theta.

    d_eta and d_conj, when present, evaluate the analytic pairings
    <dtheta/deta, e> and <dtheta/deta*, e*>.
    """

    value: Callable[[np.ndarray], np.ndarray]
    d_eta: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    d_conj: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None

    @property
    def analytic(self) -> bool:
        return self.d_eta is not None and self.d_conj is not None


def field_d_eta(f: InvariantField, eta, e, h: float = DEFAULT_STEP):
    if f.d_eta is not None:
        return f.d_eta(eta, e)
    return holo_directional(f.value, eta, e, h)


def field_d_conj(f: InvariantField, eta, e, h: float = DEFAULT_STEP):
    if f.d_conj is not None:
        return f.d_conj(eta, e)
    return conj_directional(f.value, eta, e, h)


def field_real_directional(f: InvariantField, eta, e, h: float = DEFAULT_STEP):
    """Full real directional derivative <d/deta, e> + <d/deta*, e*>."""
    if f.analytic:
        return f.d_eta(eta, e) + f.d_conj(eta, e)
    return real_directional(f.value, eta, e, h)


@dataclass(frozen=True)
class Section:
    """Lattice section q -> X(q), optionally with a directional derivative
    dvalue(q, dq) and, for polynomial sections, the defining terms."""

    value: Callable[[np.ndarray], np.ndarray]
    dvalue: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    terms: Optional[tuple] = None


def poly_section(terms) -> Section:
    """Section built from matrix polynomial terms.

    Each term is a sequence (M0, M1, ..., Md) standing for the product
    M0 q M1 q ... q Md; the directional derivative replaces one q at a
    time by dq.
    """
    terms = tuple(tuple(np.asarray(m, dtype=complex) for m in t) for t in terms)

    def value(q):
        total = None
        for t in terms:
            acc = t[0]
            for m in t[1:]:
                acc = acc @ q @ m
            total = acc if total is None else total + acc
        return total

    def dvalue(q, dq):
        total = None
        for t in terms:
            npos = len(t) - 1
            for i in range(npos):
                acc = t[0]
                for j in range(1, len(t)):
                    acc = acc @ (dq if j - 1 == i else q) @ t[j]
                total = acc if total is None else total + acc
        if total is None:
            total = np.zeros_like(q)
        return total

    return Section(value, dvalue, terms)


def section_adjoint(x: Section) -> Section:
    """Pointwise adjoint of a polynomial section (q stays hermitian)."""
    if x.terms is None:
        raise ValueError("adjoint needs the polynomial terms")
    rev = tuple(tuple(adj(m) for m in reversed(t)) for t in x.terms)
    return poly_section(rev)


def constant_section(b) -> Section:
    b = np.asarray(b, dtype=complex)
    return poly_section([(b,)])


# ---------------------------------------------------------------------------
# the support map and fields generated by sections


def support_projection(alg: Algebra, eta: np.ndarray) -> np.ndarray:
    """Left support of a frame in the smooth form eta (eta*eta)^{-1} eta*."""
    gram_inv = partial_inverse(alg, adj(eta) @ eta)
    return eta @ gram_inv @ adj(eta)


def support_d_eta(alg: Algebra, eta, e) -> np.ndarray:
    """<dl/deta, e> for l(eta) = eta (eta*eta)^{-1} eta*."""
    gi = partial_inverse(alg, adj(eta) @ eta)
    return e @ gi @ adj(eta) - eta @ gi @ (adj(eta) @ e) @ gi @ adj(eta)


def support_d_conj(alg: Algebra, eta, e) -> np.ndarray:
    """<dl/deta*, e*> for the same support map."""
    gi = partial_inverse(alg, adj(eta) @ eta)
    return eta @ gi @ adj(e) - eta @ gi @ (adj(e) @ eta) @ gi @ adj(eta)


def field_from_section(alg: Algebra, x: Section) -> InvariantField:
    """The invariant field theta(eta) = X(l(eta)) eta.

    Equivariance holds by construction since l(eta g) = l(eta).
    Analytic derivatives are chained through the support map when the
    section provides its own.
    """

    def value(eta):
        return x.value(support_projection(alg, eta)) @ eta

    if x.dvalue is None:
        return InvariantField(value)

    def d_eta(eta, e):
        q = support_projection(alg, eta)
        return x.dvalue(q, support_d_eta(alg, eta, e)) @ eta + x.value(q) @ e

    def d_conj(eta, e):
        q = support_projection(alg, eta)
        return x.dvalue(q, support_d_conj(alg, eta, e)) @ eta

    return InvariantField(value, d_eta, d_conj)


def linear_field(a) -> InvariantField:
    """Holomorphic linear field theta(eta) = A eta."""
    a = np.asarray(a, dtype=complex)
    return InvariantField(
        lambda eta: a @ eta,
        lambda eta, e: a @ e,
        lambda eta, e: np.zeros_like(e),
    )


def equivariance_residual(alg: Algebra, f: InvariantField, eta, g) -> float:
    """Norm of theta(eta g) - theta(eta) g."""
    return opnorm(f.value(eta @ g) - f.value(eta) @ g)


# ---------------------------------------------------------------------------
# scalar functions on the lattice and module structure


@dataclass(frozen=True)
class ScalarFunction:
    """Real scalar function on the lattice with a directional derivative."""

    value: Callable[[np.ndarray], float]
    dvalue: Optional[Callable[[np.ndarray, np.ndarray], float]] = None


def trace_function(c) -> ScalarFunction:
    """f(q) = Re tr(C q), the basic linear observable."""
    c = np.asarray(c, dtype=complex)
    return ScalarFunction(
        lambda q: float(np.trace(c @ q).real),
        lambda q, dq: float(np.trace(c @ dq).real),
    )


def scalar_on_frames(alg: Algebra, func: ScalarFunction):
    """func composed with the support map, as a function of the frame."""
    return lambda eta: func.value(support_projection(alg, eta))


def scalar_directional(alg: Algebra, func: ScalarFunction, eta, e, h: float = DEFAULT_STEP) -> float:
    """Real directional derivative of func(l(eta)) along e."""
    if func.dvalue is not None:
        q = support_projection(alg, eta)
        dq = support_d_eta(alg, eta, e) + support_d_conj(alg, eta, e)
        return func.dvalue(q, dq)
    g = scalar_on_frames(alg, func)
    return float((g(eta + h * e) - g(eta - h * e)) / (2.0 * h))


def scale_field(alg: Algebra, func: ScalarFunction, f: InvariantField, h: float = DEFAULT_STEP) -> InvariantField:
    """Module action: the field func(l(eta)) * theta(eta).

    Keeps analytic derivatives when both factors have them; the scalar
    Wirtinger pairings come from two real directional derivatives.
    """

    def value(eta):
        return func.value(support_projection(alg, eta)) * f.value(eta)

    if not f.analytic or func.dvalue is None:
        return InvariantField(value)

    def _scalar_pair(eta, e):
        d_re = scalar_directional(alg, func, eta, e)
        d_im = scalar_directional(alg, func, eta, 1j * e)
        return 0.5 * (d_re - 1j * d_im), 0.5 * (d_re + 1j * d_im)

    def d_eta(eta, e):
        s_hol, _ = _scalar_pair(eta, e)
        fq = func.value(support_projection(alg, eta))
        return s_hol * f.value(eta) + fq * f.d_eta(eta, e)

    def d_conj(eta, e):
        _, s_conj = _scalar_pair(eta, e)
        fq = func.value(support_projection(alg, eta))
        return s_conj * f.value(eta) + fq * f.d_conj(eta, e)

    return InvariantField(value, d_eta, d_conj)


# ---------------------------------------------------------------------------
# brackets


def field_bracket(f1: InvariantField, f2: InvariantField, h: float = DEFAULT_STEP) -> InvariantField:
    """Lie bracket of invariant fields.

    theta_12 = <dtheta2/deta, theta1> - <dtheta1/deta, theta2>
             + <dtheta2/deta*, theta1*> - <dtheta1/deta*, theta2*>,
    i.e. the derivative of each field along the other, antisymmetrized.
    The result carries no analytic derivatives; nested brackets
    differentiate it by central differences over these values.
    """

    def value(eta):
        t1 = f1.value(eta)
        t2 = f2.value(eta)
        return field_real_directional(f2, eta, t1, h) - field_real_directional(f1, eta, t2, h)

    return InvariantField(value)


def leibniz_residual(
    alg: Algebra,
    f1: InvariantField,
    f2: InvariantField,
    func: ScalarFunction,
    eta,
    h: float = DEFAULT_STEP,
) -> float:
    """Residual of the module rule for the bracket.

    [f1, func * f2] = func * [f1, f2] + (derivative of func along f1) f2,
    where the derivative term carries the sign of the base flow of f1.
    """
    scaled = scale_field(alg, func, f2, h)
    lhs = field_bracket(f1, scaled, h).value(eta)
    q = support_projection(alg, eta)
    dfunc = scalar_directional(alg, func, eta, f1.value(eta), h)
    rhs = func.value(q) * field_bracket(f1, f2, h).value(eta) + dfunc * f2.value(eta)
    return opnorm(lhs - rhs)


# ---------------------------------------------------------------------------
# chart fields


@dataclass(frozen=True)
class ChartField:
    """Field over one lattice chart: base velocity a(y) in (1-p)Mp and
    corner part b(y) in pMp, with optional analytic y-derivatives."""

    p: np.ndarray
    a: Callable[[np.ndarray], np.ndarray]
    b: Callable[[np.ndarray], np.ndarray]
    d_a: Optional[Callable] = None
    d_a_conj: Optional[Callable] = None
    d_b: Optional[Callable] = None
    d_b_conj: Optional[Callable] = None


def _component_real_directional(fn, d_hol, d_conj, y, e, h):
    if d_hol is not None and d_conj is not None:
        return d_hol(y, e) + d_conj(y, e)
    return real_directional(fn, y, e, h)


def chart_a_directional(c: ChartField, y, e, h: float = DEFAULT_STEP):
    return _component_real_directional(c.a, c.d_a, c.d_a_conj, y, e, h)


def chart_b_directional(c: ChartField, y, e, h: float = DEFAULT_STEP):
    return _component_real_directional(c.b, c.d_b, c.d_b_conj, y, e, h)


def to_chart_field(alg: Algebra, f: InvariantField, p: np.ndarray, anchor: np.ndarray) -> ChartField:
    """Express an invariant field over the chart around p.

    With z = p eta the components are
        a = (1 - eta (p eta)^{-1}) theta (p eta)^{-1},
        b = p theta (p eta)^{-1},
    evaluated on the anchored frame eta_y = (p + y) anchor, so a and b
    are functions of the chart coordinate alone.  Operator order matters
    throughout.  For equivariant fields the values do not depend on the
    anchor choice.
    """
    lam = anchor
    lam_inv = partial_inverse(alg, lam)
    one = np.eye(alg.dim, dtype=complex)

    def frame_at(y):
        return (p + y) @ lam

    def a(y):
        return (one - p - y) @ f.value(frame_at(y)) @ lam_inv

    def b(y):
        return p @ f.value(frame_at(y)) @ lam_inv

    if not f.analytic:
        return ChartField(p, a, b)

    def d_a(y, e):
        return -e @ f.value(frame_at(y)) @ lam_inv + (one - p - y) @ f.d_eta(frame_at(y), e @ lam) @ lam_inv

    def d_a_conj(y, e):
        return (one - p - y) @ f.d_conj(frame_at(y), e @ lam) @ lam_inv

    def d_b(y, e):
        return p @ f.d_eta(frame_at(y), e @ lam) @ lam_inv

    def d_b_conj(y, e):
        return p @ f.d_conj(frame_at(y), e @ lam) @ lam_inv

    return ChartField(p, a, b, d_a, d_a_conj, d_b, d_b_conj)


def chart_field_value(alg: Algebra, c: ChartField, eta: np.ndarray) -> np.ndarray:
    """Reconstruct theta(eta) = a z + (p + y) b z from the chart data."""
    pt = frame_chart(alg, c.p, eta)
    return c.a(pt.y) @ pt.z + (c.p + pt.y) @ c.b(pt.y) @ pt.z


def chart_bracket(alg: Algebra, c1: ChartField, c2: ChartField, h: float = DEFAULT_STEP) -> ChartField:
    """Bracket in chart components.

    a = D a2 [a1] - D a1 [a2]
    b = D b2 [a1] - D b1 [a2] + b2 b1 - b1 b2
    with D the full real y-derivative along the base velocities; note the
    reversed commutator of the corner parts.
    """
    if opnorm(c1.p - c2.p) > alg.tol_eq:
        raise ValueError("chart fields live over different base projections")
    p = c1.p

    def a(y):
        a1 = c1.a(y)
        a2 = c2.a(y)
        return chart_a_directional(c2, y, a1, h) - chart_a_directional(c1, y, a2, h)

    def b(y):
        a1 = c1.a(y)
        a2 = c2.a(y)
        b1 = c1.b(y)
        b2 = c2.b(y)
        return (
            chart_b_directional(c2, y, a1, h)
            - chart_b_directional(c1, y, a2, h)
            + b2 @ b1
            - b1 @ b2
        )

    return ChartField(p, a, b)


def anchor_chart(alg: Algebra, f: InvariantField, p: np.ndarray, anchor: np.ndarray):
    """Anchor of a field over one chart: the base-velocity map y -> a(y).

    This is the tangent field of the induced lattice flow; on brackets it
    is a homomorphism onto the bracket of the base fields.
    """
    c = to_chart_field(alg, f, p, anchor)
    return c.a


def anchor_flow_residual(
    alg: Algebra,
    f: InvariantField,
    p: np.ndarray,
    anchor: np.ndarray,
    eta: np.ndarray,
    h: float = DEFAULT_STEP,
) -> float:
    """Compare the chart anchor with a finite difference of the lattice flow.

    Moves the frame one Euler step along the field and differentiates the
    chart coordinate of its support.
    """
    from .lattice import to_chart

    theta = f.value(eta)

    def coord(t):
        return to_chart(alg, p, support_projection(alg, eta + t * theta))

    fd = (coord(h) - coord(-h)) / (2.0 * h)
    pt = frame_chart(alg, p, eta)
    return opnorm(anchor_chart(alg, f, p, anchor)(pt.y) - fd)


# ---------------------------------------------------------------------------
# lattice sections and their bracket


def canonical_frame(alg: Algebra, q: np.ndarray, p0: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal frame with left support q and right support p0."""
    k = projection_rank(p0)
    if projection_rank(q) != k:
        raise ValueError("support ranks differ")
    vq = projection_basis(q, k)
    w0 = projection_basis(p0, k)
    return vq @ adj(w0)


def section_on_frame_directional(alg: Algebra, x: Section, eta, e, h: float = DEFAULT_STEP):
    """Real directional derivative of eta -> X(l(eta)) along e."""
    if x.dvalue is not None:
        q = support_projection(alg, eta)
        dq = support_d_eta(alg, eta, e) + support_d_conj(alg, eta, e)
        return x.dvalue(q, dq)
    return real_directional(lambda m: x.value(support_projection(alg, m)), eta, e, h)


def section_bracket(alg: Algebra, p0: np.ndarray, x1: Section, x2: Section, h: float = DEFAULT_STEP) -> Section:
    """Algebroid bracket of lattice sections.

    [X1, X2](q) = X2 X1 - X1 X2
                + D(X2 o l)[X1 eta] - D(X1 o l)[X2 eta]
    evaluated through any frame eta over q; consistent with the field
    bracket under theta = X(l) eta.  Note the reversed leading
    commutator.
    """

    def value(q):
        eta = canonical_frame(alg, q, p0)
        v1 = x1.value(q)
        v2 = x2.value(q)
        out = v2 @ v1 - v1 @ v2
        out = out + section_on_frame_directional(alg, x2, eta, v1 @ eta, h)
        out = out - section_on_frame_directional(alg, x1, eta, v2 @ eta, h)
        return out

    return Section(value)


def section_bracket_chart_value(
    alg: Algebra,
    p: np.ndarray,
    x1: Section,
    x2: Section,
    y: np.ndarray,
    h: float = DEFAULT_STEP,
) -> np.ndarray:
    """Alternate chart evaluator of the section bracket.

    The y-derivative of X o l(p + y) is taken along the anchored
    direction (1 - (p+y)) X (p+y), the base velocity induced by the
    other section; must agree with the frame-based bracket at
    q = l(p + y).
    """
    s = p + y
    q = from_chart(alg, p, y)
    one = np.eye(alg.dim, dtype=complex)
    v1 = x1.value(q)
    v2 = x2.value(q)
    dir1 = (one - s) @ v1 @ s
    dir2 = (one - s) @ v2 @ s
    out = v2 @ v1 - v1 @ v2
    out = out + section_on_frame_directional(alg, x2, s, dir1, h)
    out = out - section_on_frame_directional(alg, x1, s, dir2, h)
    return out


# ---------------------------------------------------------------------------
# tangent group of the structure group and its action


def tangent_mul(alg: Algebra, t1, t2):
    """(g, x) . (h, y) = (g h, x + g y g^{-1}) on corner pairs."""
    g1, x1 = t1
    g2, x2 = t2
    g1_inv = partial_inverse(alg, g1)
    return g1 @ g2, x1 + g1 @ x2 @ g1_inv


def tangent_inverse(alg: Algebra, t):
    g, x = t
    gi = partial_inverse(alg, g)
    return gi, -gi @ x @ g


def tangent_act(v, t):
    """Right action on tangent pairs: (theta, eta) * (g, x) = (theta g + eta x g, eta g)."""
    theta, eta = v
    g, x = t
    return theta @ g + eta @ x @ g, eta @ g


# ---------------------------------------------------------------------------
# exactness of the vertical / anchor sequence


def atiyah_exactness(alg: Algebra, p0: np.ndarray, p: np.ndarray, frames) -> dict:
    """Numerical exactness report for the vertical-anchor sequence at
    sampled frames over the chart around p.

    Checks that m -> eta m is injective from the corner (rank k^2), that
    the anchor theta -> (1 - eta (p eta)^{-1}) theta (p eta)^{-1} is onto
    the chart directions (rank k(n-k)), and that the kernel of the anchor
    is exactly the vertical image (dimension count plus the vanishing of
    the composite map).
    """
    n = alg.dim
    k = projection_rank(p0)
    w0 = projection_basis(p0, k)
    wp = projection_basis(p, k)
    one = np.eye(n, dtype=complex)
    wperp = projection_basis(one - p, n - k)

    def vec_ideal(m):
        return np.asarray(m @ w0, order="F").reshape(-1, order="F")

    def vec_chart(m):
        return np.asarray(adj(wperp) @ m @ wp, order="F").reshape(-1, order="F")

    report = {
        "dim_total": n * k,
        "dim_vertical_expected": k * k,
        "dim_base_expected": k * (n - k),
        "rank_vertical": [],
        "rank_anchor": [],
        "kernel_dim": [],
        "containment_residual": 0.0,
    }
    for eta in frames:
        z_inv = partial_inverse(alg, p @ eta)
        pre = one - eta @ z_inv

        cols_iota = []
        for i in range(k):
            for j in range(k):
                m = np.outer(w0[:, i], w0[:, j].conj())
                cols_iota.append(vec_ideal(eta @ m))
        iota_mat = np.stack(cols_iota, axis=1)

        cols_anchor = []
        # column order must match the column-major coordinates of vec_ideal
        for j in range(k):
            for a in range(n):
                theta = np.outer(one[:, a], w0[:, j].conj())
                cols_anchor.append(vec_chart(pre @ theta @ z_inv))
        anchor_mat = np.stack(cols_anchor, axis=1)

        def _rank(m):
            if 0 in m.shape:
                return 0
            s = np.linalg.svd(m, compute_uv=False)
            smax = float(s[0]) if s.size else 0.0
            if smax == 0.0:
                return 0
            return int(np.count_nonzero(s > alg.tol_rank * smax))

        r_iota = _rank(iota_mat)
        r_anchor = _rank(anchor_mat)
        report["rank_vertical"].append(r_iota)
        report["rank_anchor"].append(r_anchor)
        report["kernel_dim"].append(n * k - r_anchor)

        if 0 in anchor_mat.shape:
            composite = 0.0
        else:
            scale = max(opnorm(anchor_mat) * opnorm(iota_mat), 1.0)
            composite = opnorm(anchor_mat @ iota_mat) / scale
        report["containment_residual"] = max(report["containment_residual"], composite)

    report["ok"] = (
        all(r == k * k for r in report["rank_vertical"])
        and all(r == k * (n - k) for r in report["rank_anchor"])
        and all(d == k * k for d in report["kernel_dim"])
        and report["containment_residual"] <= alg.tol_eq
    )
    return report


# ---------------------------------------------------------------------------
# the orthonormal-frame subbundle


def unitary_residual(alg: Algebra, f: InvariantField, eta: np.ndarray) -> float:
    """Tangency residual to the orthonormal frames: ||eta* theta + theta* eta||."""
    theta = f.value(eta)
    return opnorm(adj(eta) @ theta + adj(theta) @ eta)


def chart_unitary_form(c: ChartField, y: np.ndarray) -> np.ndarray:
    """The corner form Y(y) = (p+y)* (a + (p+y) b).

    Tangency to the orthonormal frames reads Y + Y* = 0; at the chart
    center it reduces to Y = b.
    """
    s = c.p + y
    return adj(s) @ (c.a(y) + s @ c.b(y))
