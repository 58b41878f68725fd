"""Random test objects: projections, arrows, frames, fields, sections.

All draws go through the seeded portable stream.  Conditioning is kept
under control by construction (singular values in a fixed band, bounded
retries on badly conditioned draws) so residual tolerances stay
meaningful.
"""
from __future__ import annotations

import numpy as np

from .algebra import Algebra, adj, opnorm, projection_basis
from .algebroid import Section, poly_section, section_adjoint, trace_function
from .groupoid import GroupoidElement, element
from .lattice import from_chart, in_chart
from .rng import SplitMix64

_MAX_RETRIES = 64


def random_unitary(rng: SplitMix64, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.complex_normal((n, n)))
    # fix the phase convention so the draw is a deterministic function of the stream
    phases = np.diag(r).copy()
    phases = phases / np.abs(phases)
    return q * phases


def random_projection(rng: SplitMix64, alg: Algebra, k: int) -> np.ndarray:
    """Left support of an n x k Gaussian draw, re-sampled when ill conditioned."""
    n = alg.dim
    for _ in range(_MAX_RETRIES):
        g = rng.complex_normal((n, k))
        s = np.linalg.svd(g, compute_uv=False)
        if float(s[0]) / float(s[-1]) <= 1e6:
            u, _, _ = np.linalg.svd(g, full_matrices=False)
            p = u @ adj(u)
            return 0.5 * (p + adj(p))
    raise RuntimeError("could not draw a well conditioned projection")


def random_groupoid_element(rng: SplitMix64, alg: Algebra, k: int) -> GroupoidElement:
    """Rank-k arrow U diag(s) V* with singular values in [0.5, 2]."""
    n = alg.dim
    u = random_unitary(rng, n)
    v = random_unitary(rng, n)
    s = rng.uniform_in(0.5, 2.0, k)
    x = (u[:, :k] * s) @ adj(v[:, :k])
    return element(alg, x)


def random_frame(rng: SplitMix64, alg: Algebra, p0: np.ndarray, k: int) -> np.ndarray:
    """Frame with right support exactly p0 and controlled conditioning."""
    w0 = projection_basis(p0, k)
    u = random_unitary(rng, alg.dim)
    s = rng.uniform_in(0.5, 2.0, k)
    return (u[:, :k] * s) @ adj(w0)


def random_group_element(rng: SplitMix64, alg: Algebra, p0: np.ndarray, k: int) -> np.ndarray:
    """Invertible element of the corner algebra around p0."""
    w0 = projection_basis(p0, k)
    u = random_unitary(rng, k)
    v = random_unitary(rng, k)
    s = rng.uniform_in(0.5, 2.0, k)
    return w0 @ ((u * s) @ adj(v)) @ adj(w0)


def random_unitary_group_element(rng: SplitMix64, alg: Algebra, p0: np.ndarray, k: int) -> np.ndarray:
    w0 = projection_basis(p0, k)
    return w0 @ random_unitary(rng, k) @ adj(w0)


def random_corner_skew(rng: SplitMix64, alg: Algebra, p0: np.ndarray, k: int, scale: float = 1.0) -> np.ndarray:
    """Anti-hermitian element of the corner algebra."""
    w0 = projection_basis(p0, k)
    a = rng.complex_normal((k, k)) * scale
    return w0 @ (a - adj(a)) @ adj(w0)


def random_corner_element(rng: SplitMix64, alg: Algebra, p0: np.ndarray, k: int, scale: float = 1.0) -> np.ndarray:
    w0 = projection_basis(p0, k)
    return w0 @ (rng.complex_normal((k, k)) * scale) @ adj(w0)


def random_chart_coordinate(
    rng: SplitMix64, alg: Algebra, p: np.ndarray, lo: float = 0.2, hi: float = 0.8
) -> np.ndarray:
    """Coordinate in (1-p)Mp with operator norm drawn from [lo, hi]."""
    one = np.eye(alg.dim, dtype=complex)
    y = (one - p) @ rng.complex_normal((alg.dim, alg.dim)) @ p
    target = float(rng.uniform_in(lo, hi, 1)[0])
    nrm = opnorm(y)
    if nrm <= 1e-9:
        # degenerate corner (rank(p) equal to 0 or the dimension): only zero
        return np.zeros_like(y)
    return y * (target / nrm)


def random_nearby_projection(rng: SplitMix64, alg: Algebra, p: np.ndarray) -> np.ndarray:
    """Projection inside the chart around p, with margin."""
    for _ in range(_MAX_RETRIES):
        q = from_chart(alg, p, random_chart_coordinate(rng, alg, p, 0.1, 0.6))
        if in_chart(alg, p, q):
            return q
    raise RuntimeError("could not draw an in-chart projection")


def random_operator(rng: SplitMix64, alg: Algebra, scale: float = 1.0) -> np.ndarray:
    return rng.complex_normal((alg.dim, alg.dim)) * scale


def random_section(rng: SplitMix64, alg: Algebra, scale: float = 0.7) -> Section:
    """Polynomial lattice section C0 + C1 q C2 with O(1) values."""
    n = alg.dim
    s = scale / np.sqrt(n)
    c0 = rng.complex_normal((n, n)) * s
    c1 = rng.complex_normal((n, n)) * s
    c2 = rng.complex_normal((n, n)) * s
    return poly_section([(c0,), (c1, c2)])


def random_quadratic_section(rng: SplitMix64, alg: Algebra, scale: float = 0.7) -> Section:
    """Section with a q-quadratic term, still with analytic derivatives."""
    n = alg.dim
    s = scale / np.sqrt(n)
    c0 = rng.complex_normal((n, n)) * s
    c1 = rng.complex_normal((n, n)) * s
    c2 = rng.complex_normal((n, n)) * s
    c3 = rng.complex_normal((n, n)) * s
    c4 = rng.complex_normal((n, n)) * s
    return poly_section([(c0,), (c1, c2), (c3, c4, np.eye(n, dtype=complex))])


def random_skew_section(rng: SplitMix64, alg: Algebra, scale: float = 0.7) -> Section:
    """Pointwise anti-hermitian section X - X*, tangent to the orthonormal frames."""
    base = random_section(rng, alg, scale)
    star = section_adjoint(base)
    negated = tuple((-t[0],) + t[1:] for t in star.terms)
    return poly_section(tuple(base.terms) + negated)


def random_vertical_section(rng: SplitMix64, alg: Algebra, scale: float = 0.7) -> Section:
    """Section with values q C q, generating a vertical field."""
    n = alg.dim
    one = np.eye(n, dtype=complex)
    c = rng.complex_normal((n, n)) * (scale / np.sqrt(n))
    return poly_section([(one, c, one)])


def random_trace_function(rng: SplitMix64, alg: Algebra):
    return trace_function(rng.complex_normal((alg.dim, alg.dim)))
