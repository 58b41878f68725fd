"""Frame-space linear maps, bisections, and derivations of vector fields.

The trivial groupoid over the frame space has arrows (target frame,
linear automorphism of the p0 ideal, source frame).  Automorphisms that
commute with left multiplication are exactly right translations, and the
quotient by the structure-group action recovers the operator groupoid
through the invariant  target . f^{-1} . source^{-1}.

One-parameter families of bisections transport vector fields; the time
derivative of the transport is a first-order derivation
D w = -(derivative of w along the field) + Theta w.  Brackets of
derivations are operator commutators, and their linear lifts to the
tangent space commute with that bracket.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import expm

from .algebra import (
    Algebra,
    adj,
    opnorm,
    partial_inverse,
    projection_basis,
    projection_rank,
)
from .algebroid import (
    InvariantField,
    Section,
    field_real_directional,
    linear_field,
    support_projection,
)
from .groupoid import GroupoidElement, NotComposableError, element
from .wirtinger import DEFAULT_STEP, pair_real_directional


class NotModAutomorphismError(ValueError):
    """The automorphism does not commute with left multiplications."""


# ---------------------------------------------------------------------------
# the p0 ideal as a coordinate space


@dataclass(frozen=True)
class CornerBasis:
    """Identification of the p0 ideal M p0 with C^{n k}.

    Vectorization is column major over the n x k block obtained by
    compressing onto an orthonormal basis of the range of p0; linear
    endomorphisms are stored as (nk) x (nk) complex matrices acting on
    these coordinates.
    """

    p0: np.ndarray
    w: np.ndarray

    @classmethod
    def from_projection(cls, p0: np.ndarray) -> "CornerBasis":
        k = projection_rank(p0)
        return cls(p0, projection_basis(p0, k))

    @property
    def n(self) -> int:
        return self.w.shape[0]

    @property
    def k(self) -> int:
        return self.w.shape[1]

    def vec(self, m: np.ndarray) -> np.ndarray:
        return np.asarray(m @ self.w, order="F").reshape(-1, order="F")

    def unvec(self, v: np.ndarray) -> np.ndarray:
        block = v.reshape((self.n, self.k), order="F")
        return block @ adj(self.w)

    def apply(self, mat: np.ndarray, m: np.ndarray) -> np.ndarray:
        return self.unvec(mat @ self.vec(m))

    def identity_map(self) -> np.ndarray:
        return np.eye(self.n * self.k, dtype=complex)

    def right_mult(self, g: np.ndarray) -> np.ndarray:
        """Matrix of theta -> theta g.  Note g -> right_mult(g) reverses
        products: right_mult(g) @ right_mult(h) = right_mult(h g)."""
        gt = adj(self.w) @ g @ self.w
        return np.kron(gt.T, np.eye(self.n, dtype=complex))

    def left_mult(self, a: np.ndarray) -> np.ndarray:
        """Matrix of theta -> a theta."""
        return np.kron(np.eye(self.k, dtype=complex), a)


def endo_norm(mat: np.ndarray) -> float:
    return float(np.linalg.norm(mat, 2))


def invert_endo(alg: Algebra, mat: np.ndarray) -> np.ndarray:
    """Inverse of an endomorphism matrix under the usual gap policy."""
    s = np.linalg.svd(mat, compute_uv=False)
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0 or float(s[-1]) <= np.sqrt(alg.tol_rank) * smax:
        raise ValueError("endomorphism is numerically singular")
    return np.linalg.inv(mat)


# ---------------------------------------------------------------------------
# the trivial groupoid and its quotient


@dataclass(frozen=True)
class TrivialArrow:
    """Arrow (target frame, automorphism of the p0 ideal, source frame)."""

    target: np.ndarray
    auto: np.ndarray
    source: np.ndarray


def trivial_unit(basis: CornerBasis, eta: np.ndarray) -> TrivialArrow:
    return TrivialArrow(eta, basis.identity_map(), eta)


def trivial_compose(alg: Algebra, a1: TrivialArrow, a2: TrivialArrow) -> TrivialArrow:
    """(lam, L, xi)(xi, G, eta) = (lam, L G, eta); middle frames must match."""
    if opnorm(a1.source - a2.target) > alg.tol_eq:
        raise NotComposableError("middle frames do not match")
    return TrivialArrow(a1.target, a1.auto @ a2.auto, a2.source)


def trivial_inverse(alg: Algebra, a: TrivialArrow) -> TrivialArrow:
    return TrivialArrow(a.source, invert_endo(alg, a.auto), a.target)


def mod_factor(alg: Algebra, basis: CornerBasis, auto: np.ndarray) -> np.ndarray:
    """The g with auto = right_mult(g), when one exists.

    Probing the automorphism on p0 determines the candidate; the
    automorphism commutes with left multiplications on a spanning set
    exactly when it equals that right translation.
    """
    f = basis.apply(auto, basis.p0)
    if endo_norm(auto - basis.right_mult(f)) > alg.tol_eq * max(endo_norm(auto), 1.0):
        raise NotModAutomorphismError("automorphism is not a right translation")
    return f


def quotient_class(alg: Algebra, basis: CornerBasis, arrow: TrivialArrow) -> GroupoidElement:
    """Canonical invariant  target f^{-1} source^{-1}  of a right-translation
    arrow; constant on the orbits of the structure-group action and a
    groupoid homomorphism onto the operator groupoid."""
    f = mod_factor(alg, basis, arrow.auto)
    return element(
        alg,
        arrow.target @ partial_inverse(alg, f) @ partial_inverse(alg, arrow.source),
    )


def pair_groupoid_report(alg: Algebra, p0: np.ndarray, frames, group_elements) -> dict:
    """Check that frame pairs modulo independent right translations compose
    like the pair groupoid of the base points.

    The class of a pair (eta, xi) is labelled by the two left supports.
    The report verifies that translations keep the label, that frames
    over a common base differ by a unique corner element (so middles can
    always be aligned), and that aligned composition, inversion and units
    reproduce the pair-groupoid tables on labels.
    """

    def label(eta):
        return support_projection(alg, eta)

    labels = [label(eta) for eta in frames]
    max_residual = 0.0
    m = len(frames)

    for i in range(m):
        for g in group_elements:
            # translated representatives keep the label
            max_residual = max(max_residual, opnorm(label(frames[i] @ g) - labels[i]))
            # frames over one base differ by a unique corner element
            xi = frames[i] @ g
            u = partial_inverse(alg, frames[i]) @ xi
            max_residual = max(max_residual, opnorm(frames[i] @ u - xi))

    g1 = group_elements[0]
    g2 = group_elements[-1]
    for j in range(m):
        for l in range(m):
            # compose [(eta_i, f_j g1)] with [(f_j g2, kappa_l)] by aligning
            # the middle frames; the aligned middle must reproduce the first
            # representative exactly and the result keeps the label (q_i, q_l)
            xi = frames[j] @ g1
            lam = frames[j] @ g2
            u = partial_inverse(alg, lam) @ xi
            max_residual = max(max_residual, opnorm(lam @ u - xi))
            kappa = frames[l] @ u
            max_residual = max(max_residual, opnorm(label(kappa) - labels[l]))

    # inversion swaps the label pair and units sit on the diagonal, both by
    # construction; the numeric content is the invariance and alignment above
    return {"max_residual": max_residual, "points": m}


# ---------------------------------------------------------------------------
# bisections of the trivial groupoid


@dataclass(frozen=True)
class Bisection:
    """A frame diffeomorphism gamma together with a field of automorphisms
    Gamma, and optionally the structure-group cocycle h for equivariant
    bisections: gamma(eta g) = gamma(eta) h(eta, g)."""

    gamma: Callable[[np.ndarray], np.ndarray]
    auto: Callable[[np.ndarray], np.ndarray]
    h: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None


def apply_bisection(basis: CornerBasis, b: Bisection, v):
    """Push a tangent pair: (w, eta) -> (Gamma(eta) w, gamma(eta))."""
    w, eta = v
    return basis.apply(b.auto(eta), w), b.gamma(eta)


def compose_bisections(b1: Bisection, b2: Bisection) -> Bisection:
    """(b1 * b2)(eta) uses gamma1 o gamma2 and Gamma1(gamma2(eta)) Gamma2(eta)."""
    gamma = lambda eta: b1.gamma(b2.gamma(eta))
    auto = lambda eta: b1.auto(b2.gamma(eta)) @ b2.auto(eta)
    h = None
    if b1.h is not None and b2.h is not None:
        h = lambda eta, g: b1.h(b2.gamma(eta), b2.h(eta, g))
    return Bisection(gamma, auto, h)


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class Derivation:
    """First-order derivation D w = -(derivative of w along field) + Theta w.

    theta_map(eta) is the endomorphism matrix; cocycle_rate, when
    present, is the infinitesimal structure-group cocycle H(eta, g) used
    by the equivariance conditions.
    """

    field: InvariantField
    theta_map: Callable[[np.ndarray], np.ndarray]
    cocycle_rate: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None


def derivation_apply(
    basis: CornerBasis, d: Derivation, z: InvariantField, h: float = DEFAULT_STEP
) -> InvariantField:
    """Apply a derivation to a vector field, returning the new field."""

    def value(eta):
        return -field_real_directional(z, eta, d.field.value(eta), h) + basis.apply(
            d.theta_map(eta), z.value(eta)
        )

    return InvariantField(value)


def _theta_directional(theta_map, eta, direction, h):
    """Derivative of the endomorphism field along an Euler step."""
    return (theta_map(eta + h * direction) - theta_map(eta - h * direction)) / (2.0 * h)


def derivation_bracket(
    basis: CornerBasis, d1: Derivation, d2: Derivation, h: float = DEFAULT_STEP
) -> Derivation:
    """Operator commutator of two derivations, in normal form.

    As an operator, [D1, D2] = D1 D2 - D2 D1 has first-order part equal
    to the derivative along the bracket of the two fields; written back
    in the -field + Theta normal form the stored field is the reversed
    bracket [field2, field1], and
    Theta = (field2 . Theta1) - (field1 . Theta2) + Theta1 Theta2 - Theta2 Theta1.
    With this normal form the anchor D -> -field takes the bracket of
    derivations to the bracket of the anchor fields.
    """
    from .algebroid import field_bracket

    field = field_bracket(d2.field, d1.field, h)

    def theta_map(eta):
        t1 = d1.theta_map(eta)
        t2 = d2.theta_map(eta)
        d2_on_t1 = _theta_directional(d1.theta_map, eta, d2.field.value(eta), h)
        d1_on_t2 = _theta_directional(d2.theta_map, eta, d1.field.value(eta), h)
        return d2_on_t1 - d1_on_t2 + t1 @ t2 - t2 @ t1

    return Derivation(field, theta_map)


def linear_lift(basis: CornerBasis, d: Derivation):
    """Linear tangent-space vector field generating the inverse transport flow.

    Returns the map (eta, w) -> (-theta(eta), -Theta(eta) w).  With this
    normalization the lift intertwines the derivation bracket with the
    bracket of tangent-space vector fields.
    """

    def lift(eta, w):
        return -d.field.value(eta), -basis.apply(d.theta_map(eta), w)

    return lift


def lift_bracket(l1, l2, h: float = DEFAULT_STEP):
    """Bracket of vector fields on the tangent space (pairs (eta, w))."""

    def value(eta, w):
        pt = (eta, w)
        v1 = l1(eta, w)
        v2 = l2(eta, w)
        d21 = pair_real_directional(lambda e, v: l2(e, v), pt, v1, h)
        d12 = pair_real_directional(lambda e, v: l1(e, v), pt, v2, h)
        return tuple(a - b for a, b in zip(d21, d12))

    return value


def derivation_leibniz_residual(
    alg: Algebra,
    basis: CornerBasis,
    d: Derivation,
    func,
    z: InvariantField,
    eta: np.ndarray,
    h: float = DEFAULT_STEP,
) -> float:
    """Residual of D(f Z) = f D Z - (derivative of f along the field) Z.

    The scalar term carries the sign of the transported function, i.e.
    the time derivative of f o gamma_{-t}.
    """
    from .algebroid import ScalarFunction, scalar_directional, scale_field

    assert isinstance(func, ScalarFunction)
    scaled = scale_field(alg, func, z, h)
    lhs = derivation_apply(basis, d, scaled, h).value(eta)
    q = support_projection(alg, eta)
    dfunc = scalar_directional(alg, func, eta, d.field.value(eta), h)
    rhs = func.value(q) * derivation_apply(basis, d, z, h).value(eta) - dfunc * z.value(eta)
    return opnorm(lhs - rhs)


# ---------------------------------------------------------------------------
# one-parameter bisection families


@dataclass(frozen=True)
class BisectionFlow:
    """One-parameter family of bisections with exact group law, given by
    a bisection factory and the derivation it generates."""

    at: Callable[[float], Bisection]
    derivation: Derivation


def corner_expm(p0: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Exponential within the corner algebra: unit p0 instead of 1."""
    n = a.shape[0]
    return expm(a) - np.eye(n, dtype=complex) + p0


def left_flow(basis: CornerBasis, a: np.ndarray, theta0: np.ndarray) -> BisectionFlow:
    """gamma_t(eta) = exp(tA) eta with a constant automorphism generator.

    The cocycle is trivial (h_t(eta, g) = g), so the derivation is plainly
    equivariant when theta0 commutes with right translations.
    """
    a = np.asarray(a, dtype=complex)
    theta0 = np.asarray(theta0, dtype=complex)

    def at(t):
        ea = expm(t * a)
        emat = expm(t * theta0)
        return Bisection(lambda eta: ea @ eta, lambda eta: emat, lambda eta, g: g)

    return BisectionFlow(at, Derivation(linear_field(a), lambda eta: theta0))


def gauge_flow(alg: Algebra, basis: CornerBasis, m: Section) -> BisectionFlow:
    """Vertical family gamma_t(eta) = eta exp(t m(l(eta))) in the corner.

    The cocycle h_t conjugates by the corner exponential, so the
    infinitesimal cocycle is H(eta, g) = g m - m g with m = m(l(eta)).
    The automorphism part is the right translation by the exponential,
    giving Theta(eta) = right_mult(m(l(eta))).
    """
    p0 = basis.p0

    def at(t):
        def gamma(eta):
            return eta @ corner_expm(p0, t * m.value(support_projection(alg, eta)))

        def auto(eta):
            return basis.right_mult(corner_expm(p0, t * m.value(support_projection(alg, eta))))

        def h(eta, g):
            mq = m.value(support_projection(alg, eta))
            return corner_expm(p0, -t * mq) @ g @ corner_expm(p0, t * mq)

        return Bisection(gamma, auto, h)

    field = _vertical_field(alg, m)

    def theta_map(eta):
        return basis.right_mult(m.value(support_projection(alg, eta)))

    def cocycle_rate(eta, g):
        mq = m.value(support_projection(alg, eta))
        return g @ mq - mq @ g

    return BisectionFlow(at, Derivation(field, theta_map, cocycle_rate))


def _vertical_field(alg: Algebra, m: Section) -> InvariantField:
    """theta(eta) = eta m(l(eta)), with analytic derivatives when m has them."""
    from .algebroid import support_d_conj, support_d_eta

    def value(eta):
        return eta @ m.value(support_projection(alg, eta))

    if m.dvalue is None:
        return InvariantField(value)

    def d_eta(eta, e):
        q = support_projection(alg, eta)
        return e @ m.value(q) + eta @ m.dvalue(q, support_d_eta(alg, eta, e))

    def d_conj(eta, e):
        q = support_projection(alg, eta)
        return eta @ m.dvalue(q, support_d_conj(alg, eta, e))

    return InvariantField(value, d_eta, d_conj)


def transport(
    alg: Algebra, basis: CornerBasis, flow: BisectionFlow, z: InvariantField, t: float
) -> InvariantField:
    """Transported field (Sigma_t Z)(eta) = Gamma_t(gamma_{-t} eta) w(gamma_{-t} eta).

    Its time derivative at zero is the derivation of the family.
    """

    def value(eta):
        back = flow.at(-t).gamma(eta)
        fwd = flow.at(t)
        return basis.apply(fwd.auto(back), z.value(back))

    return InvariantField(value)


def equivariance_residuals(alg: Algebra, basis: CornerBasis, d: Derivation, samples) -> dict:
    """Residuals of the two infinitesimal equivariance conditions.

    For each sampled (eta, g):
      field:  theta(eta g) - theta(eta) g - eta H(eta, g)
      map:    Theta(eta g) - R_g Theta(eta) R_{g^{-1}} - R_{g^{-1} H(eta, g)}
    where the map correction is the derivative of the finite conjugation
    rule for the automorphism part.  Zero cocycle rate recovers plain
    equivariance.
    """
    max_field = 0.0
    max_map = 0.0
    for eta, g in samples:
        hval = (
            d.cocycle_rate(eta, g)
            if d.cocycle_rate is not None
            else np.zeros_like(np.asarray(g))
        )
        rv = opnorm(d.field.value(eta @ g) - d.field.value(eta) @ g - eta @ hval)
        g_inv = partial_inverse(alg, g)
        expected = (
            basis.right_mult(g) @ d.theta_map(eta) @ basis.right_mult(g_inv)
            + basis.right_mult(g_inv @ hval)
        )
        rt = endo_norm(d.theta_map(eta @ g) - expected)
        max_field = max(max_field, rv)
        max_map = max(max_map, rt)
    return {"max_field_residual": max_field, "max_map_residual": max_map}
