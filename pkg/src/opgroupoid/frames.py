"""Frames over a base projection and the gauge description of the groupoid.

A frame is an arrow eta landing in the right ideal of the base
projection p0, i.e. eta = eta p0 with right support exactly p0.  Frames
carry a free right action of the structure group (the invertibles of the
corner p0 M p0); orbit pairs of frames reproduce the groupoid through
eta xi^{-1}, and orthonormal frames reproduce the partial isometries
through eta xi*.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    Algebra,
    adj,
    corner_invertible,
    opnorm,
    partial_inverse,
    polar_decompose,
    projection_rank,
)
from .groupoid import GroupoidElement, element
from .lattice import ChartDomainError, chart_section, in_chart, transition


def is_frame(alg: Algebra, p0: np.ndarray, eta: np.ndarray) -> bool:
    """eta lies in the p0 ideal and its Gram matrix is corner invertible."""
    if opnorm(eta @ p0 - eta) > alg.tol_eq:
        return False
    return corner_invertible(alg, p0, adj(eta) @ eta)


def right_translate(eta: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Right action of the structure group on frames."""
    return eta @ g


@dataclass(frozen=True)
class FrameChartPoint:
    """Frame coordinates (y, z): lattice coordinate of the support plus
    the corner-invertible block z = p eta."""

    p: np.ndarray
    y: np.ndarray
    z: np.ndarray


def frame_chart(alg: Algebra, p: np.ndarray, eta: np.ndarray) -> FrameChartPoint:
    """Chart of a frame: y = (1-p) eta (p eta)^{-1}, z = p eta."""
    q = polar_decompose(alg, eta).left
    if not in_chart(alg, p, q):
        raise ChartDomainError("frame support outside the chart domain")
    z = p @ eta
    one = np.eye(alg.dim, dtype=complex)
    y = (one - p) @ eta @ partial_inverse(alg, z)
    return FrameChartPoint(p, y, z)


def frame_chart_inverse(pt: FrameChartPoint) -> np.ndarray:
    """Reconstruct the frame (p + y) z."""
    return (pt.p + pt.y) @ pt.z


def frame_transition(alg: Algebra, pt: FrameChartPoint, p_new: np.ndarray) -> FrameChartPoint:
    """Chart change: Moebius rule on y, z' = (p' + y')^{-1} (p + y) z."""
    y_new = transition(alg, pt.p, p_new, pt.y)
    z_new = partial_inverse(alg, p_new + y_new) @ (pt.p + pt.y) @ pt.z
    return FrameChartPoint(p_new, y_new, z_new)


def make_anchor(alg: Algebra, p: np.ndarray, p0: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Partial isometry from the p0 range onto the p range.

    Built as the polar factor of p @ ref, where ref is any frame-like
    reference in the p0 ideal; deterministic given the reference.
    """
    pd = polar_decompose(alg, p @ ref @ p0)
    if pd.rank != projection_rank(p):
        raise ValueError("reference is rank deficient against the target projection")
    return pd.u


def trivialize(alg: Algebra, p: np.ndarray, anchor: np.ndarray, eta: np.ndarray):
    """Local trivialization over the chart around p.

    Returns (support, group part): the group part is
    anchor^{-1} (p + y)^{-1} eta and multiplies on the right under the
    frame action.
    """
    q = polar_decompose(alg, eta).left
    if not in_chart(alg, p, q):
        raise ChartDomainError("frame support outside the chart domain")
    s = chart_section(alg, p, q)
    zeta = partial_inverse(alg, anchor) @ partial_inverse(alg, s) @ eta
    return q, zeta


def transition_cocycle(
    alg: Algebra,
    p1: np.ndarray,
    p2: np.ndarray,
    anchor1: np.ndarray,
    anchor2: np.ndarray,
    q: np.ndarray,
) -> np.ndarray:
    """Structure-group cocycle comparing the trivializations over p1 and p2
    at a common support q: anchor2^{-1} (p2+y2)^{-1} (p1+y1) anchor1."""
    if not (in_chart(alg, p1, q) and in_chart(alg, p2, q)):
        raise ChartDomainError("support outside the chart overlap")
    s1 = chart_section(alg, p1, q)
    s2 = chart_section(alg, p2, q)
    return partial_inverse(alg, anchor2) @ partial_inverse(alg, s2) @ s1 @ anchor1


@dataclass(frozen=True)
class GaugeClass:
    """Orbit pair of frames under the diagonal right action.

    Two representative pairs describe the same class exactly when the
    canonical invariant eta xi^{-1} agrees, so equality routes through it.
    """

    eta: np.ndarray
    xi: np.ndarray

    def invariant(self, alg: Algebra) -> np.ndarray:
        return self.eta @ partial_inverse(alg, self.xi)


def gauge_unit(eta: np.ndarray) -> GaugeClass:
    return GaugeClass(eta, eta)


def gauge_inverse(c: GaugeClass) -> GaugeClass:
    return GaugeClass(c.xi, c.eta)


def gauge_compose(alg: Algebra, c1: GaugeClass, c2: GaugeClass) -> GaugeClass:
    """Class composition: align the middle frames inside one orbit."""
    from .groupoid import NotComposableError

    l_xi = polar_decompose(alg, c1.xi).left
    l_eta = polar_decompose(alg, c2.eta).left
    if opnorm(l_xi - l_eta) > alg.tol_eq:
        raise NotComposableError("middle frames lie over different base points")
    g = partial_inverse(alg, c2.eta) @ c1.xi
    return GaugeClass(c1.eta, c2.xi @ g)


def gauge_to_groupoid(alg: Algebra, c: GaugeClass) -> GroupoidElement:
    """The canonical invariant eta xi^{-1} as a groupoid element.

    Constant on classes and functorial: units map to left supports,
    class inverses to partial inverses, composition to composition.
    """
    return element(alg, c.invariant(alg))


def unitary_reduce(alg: Algebra, eta: np.ndarray) -> np.ndarray:
    """Orthonormal part eta (eta* eta)^{-1/2} of a frame.

    Idempotent on already orthonormal frames and support preserving.
    """
    gram = adj(eta) @ eta
    w, v = np.linalg.eigh(gram)
    wmax = float(w[-1]) if w.size else 0.0
    if wmax <= 0.0:
        raise ValueError("zero frame cannot be reduced")
    keep = w > alg.tol_rank * wmax
    inv_sqrt = (v[:, keep] / np.sqrt(w[keep])) @ adj(v[:, keep])
    return eta @ inv_sqrt


def is_unitary_frame(alg: Algebra, p0: np.ndarray, eta: np.ndarray) -> bool:
    """Whether eta* eta = p0 within tol_eq."""
    return opnorm(adj(eta) @ eta - p0) <= alg.tol_eq


def gauge_to_groupoid_unitary(alg: Algebra, p0: np.ndarray, c: GaugeClass) -> GroupoidElement:
    """eta xi* for orthonormal representatives; the image is a partial
    isometry and agrees with the general invariant since xi^{-1} = xi*."""
    if not (is_unitary_frame(alg, p0, c.eta) and is_unitary_frame(alg, p0, c.xi)):
        raise ValueError("representatives are not orthonormal frames")
    return element(alg, c.eta @ adj(c.xi))


def corner_polar(alg: Algebra, g: np.ndarray):
    """Polar factors of a structure-group element, both within the corner."""
    pd = polar_decompose(alg, g)
    return pd.u, pd.modulus
