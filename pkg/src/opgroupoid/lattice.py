"""Charts on one orbit of the projection lattice.

Projections of equal rank form an orbit under the groupoid action.  A
projection q lies in the chart domain around p exactly when p q p is
invertible in the corner pMp; the chart coordinate is an operator y in
the off-diagonal corner (1-p)Mp, and chart changes act by the Moebius
rule y' = (b + d y)(a + c y)^{-1} built from corners of the identity.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    Algebra,
    BorderlineSpectrumError,
    corner_inverse,
    corner_invertible,
    opnorm,
    partial_inverse,
    polar_decompose,
    projection_rank,
)


class ChartDomainError(ValueError):
    """The projection (or reconstructed point) is outside the chart domain."""


@dataclass(frozen=True)
class LatticeOrbit:
    """The set of projections of a fixed rank inside one algebra."""

    algebra: Algebra
    base_rank: int

    def contains(self, q: np.ndarray) -> bool:
        return projection_rank(q) == self.base_rank


def in_chart(alg: Algebra, p: np.ndarray, q: np.ndarray) -> bool:
    """Whether q lies in the chart domain around p.

    Projections of different rank never share a chart.
    """
    if projection_rank(p) != projection_rank(q):
        return False
    return corner_invertible(alg, p, q)


def to_chart(alg: Algebra, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Chart coordinate of q around p: y = (1-p) q (pqp)^{-1} p."""
    if not in_chart(alg, p, q):
        raise ChartDomainError("projection is outside the chart domain")
    ci = corner_inverse(alg, p, q)
    one = np.eye(alg.dim, dtype=complex)
    return (one - p) @ q @ ci


def from_chart(alg: Algebra, p: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Projection with chart coordinate y around p: the left support of p + y."""
    return polar_decompose(alg, p + y).left


def chart_section(alg: Algebra, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Local section p + y of the target map; its left support is q, right is p."""
    return p + to_chart(alg, p, q)


def is_chart_coordinate(alg: Algebra, p: np.ndarray, y: np.ndarray) -> bool:
    """Whether y is confined to the corner (1-p)Mp."""
    return opnorm(p @ y) <= alg.tol_eq and opnorm(y - y @ p) <= alg.tol_eq


def transition_coefficients(alg: Algebra, p: np.ndarray, p_new: np.ndarray):
    """Corners (a, b, c, d) of the identity with respect to p and p_new.

    a = p'p, b = (1-p')p, c = p'(1-p), d = (1-p')(1-p); they sum to the
    identity and realize the chart-change coefficients.
    """
    one = np.eye(alg.dim, dtype=complex)
    a = p_new @ p
    b = (one - p_new) @ p
    c = p_new @ (one - p)
    d = (one - p_new) @ (one - p)
    return a, b, c, d


def transition(alg: Algebra, p: np.ndarray, p_new: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Moebius chart change y' = (b + d y)(a + c y)^{-1}.

    The inverse is the two-sided partial inverse of a + cy = p'(p + y),
    an operator with left support p' and right support p.  Must agree
    with recomputing the coordinate of the underlying projection.
    """
    q = from_chart(alg, p, y)
    if not in_chart(alg, p_new, q):
        raise ChartDomainError("point is outside the chart overlap")
    one = np.eye(alg.dim, dtype=complex)
    s = p + y
    w = p_new @ s
    try:
        w_inv = partial_inverse(alg, w)
    except BorderlineSpectrumError as exc:
        raise ChartDomainError("chart-change corner is ill conditioned") from exc
    return (one - p_new) @ s @ w_inv
