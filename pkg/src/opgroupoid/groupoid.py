"""The groupoid of partially invertible operators over one lattice orbit.

Arrows are partially invertible operators; the target and source of an
arrow are its left and right support projections, and the partial
product is the matrix product of arrows with matching supports.  Charts
describe an arrow by a triple (y_target, z, y_source): two lattice
coordinates plus a corner-invertible middle block.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    Algebra,
    BorderlineSpectrumError,
    PolarData,
    adj,
    corner_inverse,
    is_partially_invertible,
    opnorm,
    partial_inverse,
    polar_decompose,
)
from .lattice import ChartDomainError, in_chart, to_chart


class NotComposableError(ValueError):
    """Right support of the first factor differs from the left support of the second."""


@dataclass(frozen=True)
class GroupoidElement:
    """A partially invertible operator with cached polar data."""

    op: np.ndarray
    polar: PolarData

    @property
    def left(self) -> np.ndarray:
        return self.polar.left

    @property
    def right(self) -> np.ndarray:
        return self.polar.right

    @property
    def rank(self) -> int:
        return self.polar.rank


def element(alg: Algebra, x) -> GroupoidElement:
    """Wrap an operator as a groupoid element, enforcing the gap policy."""
    x = np.asarray(x, dtype=complex)
    if not is_partially_invertible(alg, x):
        raise BorderlineSpectrumError("operator has a borderline singular spectrum")
    return GroupoidElement(x, polar_decompose(alg, x))


def compose(alg: Algebra, x: GroupoidElement, y: GroupoidElement) -> GroupoidElement:
    """Partial product xy; defined when right(x) = left(y).

    Polar data of the product is recomputed from scratch so supports
    never go stale.
    """
    if opnorm(x.right - y.left) > alg.tol_eq:
        raise NotComposableError("supports do not match")
    return element(alg, x.op @ y.op)


def inverse(alg: Algebra, x: GroupoidElement) -> GroupoidElement:
    """Groupoid inverse: the two-sided partial inverse."""
    return element(alg, partial_inverse(alg, x.op))


def involution(alg: Algebra, x: GroupoidElement) -> GroupoidElement:
    """The involution x -> (x*)^{-1}.

    It squares to the identity, preserves both supports, and its fixed
    points are exactly the partial isometries.
    """
    return element(alg, partial_inverse(alg, adj(x.op)))


def is_partial_isometry(alg: Algebra, x: GroupoidElement) -> bool:
    """Whether adj(x) x equals the right support, i.e. |x| = right(x)."""
    return opnorm(adj(x.op) @ x.op - x.right) <= alg.tol_eq


@dataclass(frozen=True)
class GroupoidChartPoint:
    """Chart description (y_target, z, y_source) of an arrow.

    y_target and y_source are lattice coordinates of the supports around
    the base projections; z sits in p_target M p_source and is invertible
    in that corner.
    """

    p_target: np.ndarray
    p_source: np.ndarray
    y_target: np.ndarray
    z: np.ndarray
    y_source: np.ndarray


def groupoid_chart(alg: Algebra, p_t: np.ndarray, p_s: np.ndarray, x: GroupoidElement) -> GroupoidChartPoint:
    """Chart of an arrow whose supports lie in the domains around p_t, p_s.

    z is the arrow conjugated by the local sections of the two supports;
    the chart inverse reconstructs the arrow exactly.
    """
    if not in_chart(alg, p_t, x.left) or not in_chart(alg, p_s, x.right):
        raise ChartDomainError("supports outside the chart domains")
    y_t = to_chart(alg, p_t, x.left)
    y_s = to_chart(alg, p_s, x.right)
    z = partial_inverse(alg, p_t + y_t) @ x.op @ (p_s + y_s)
    return GroupoidChartPoint(p_t, p_s, y_t, z, y_s)


def groupoid_chart_inverse(alg: Algebra, pt: GroupoidChartPoint) -> GroupoidElement:
    """Reconstruct the arrow (p_t + y_t) z (p_s + y_s)^{-1}."""
    return element(
        alg,
        (pt.p_target + pt.y_target) @ pt.z @ partial_inverse(alg, pt.p_source + pt.y_source),
    )


def groupoid_chart_transition(
    alg: Algebra, pt: GroupoidChartPoint, p_t_new: np.ndarray, p_s_new: np.ndarray
) -> GroupoidChartPoint:
    """Chart change: Moebius rule on both y blocks, conjugation on z.

    z' = (p_t' + y_t')^{-1} (p_t + y_t) z (p_s + y_s)^{-1} (p_s' + y_s').
    """
    from .lattice import transition

    y_t_new = transition(alg, pt.p_target, p_t_new, pt.y_target)
    y_s_new = transition(alg, pt.p_source, p_s_new, pt.y_source)
    z_new = (
        partial_inverse(alg, p_t_new + y_t_new)
        @ (pt.p_target + pt.y_target)
        @ pt.z
        @ partial_inverse(alg, pt.p_source + pt.y_source)
        @ (p_s_new + y_s_new)
    )
    return GroupoidChartPoint(p_t_new, p_s_new, y_t_new, z_new, y_s_new)


def involution_in_chart(alg: Algebra, pt: GroupoidChartPoint) -> GroupoidChartPoint:
    """The involution expressed in chart coordinates.

    Both y blocks are fixed (supports are preserved); the middle block
    maps to ((p_t+y_t)*(p_t+y_t))^{-1} (z*)^{-1} (p_s+y_s)*(p_s+y_s)
    with the first inverse taken in the corner around p_t.  Applying it
    twice returns the original chart point.
    """
    s_t = pt.p_target + pt.y_target
    s_s = pt.p_source + pt.y_source
    gram_t_inv = corner_inverse(alg, pt.p_target, adj(s_t) @ s_t)
    z_new = gram_t_inv @ partial_inverse(alg, adj(pt.z)) @ (adj(s_s) @ s_s)
    return GroupoidChartPoint(pt.p_target, pt.p_source, pt.y_target, z_new, pt.y_source)
