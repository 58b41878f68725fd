"""Column-vector formulas for the standard-basis Grassmannian setting.

Here the base projection is the span of the first N standard basis
vectors of a D-dimensional space, a frame is a list of N independent
columns, and every chart or bracket formula becomes an explicit matrix
element computation on small blocks.  Each operation has a block form
and must agree with the general operator-level computation under the
obvious embedding (columns into the first N columns of a D x D matrix).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .algebra import Algebra, adj
from .algebroid import ChartField
from .lattice import ChartDomainError
from .wirtinger import DEFAULT_STEP, real_directional


def standard_projection(dim: int, n_cols: int) -> np.ndarray:
    """Projection onto the span of the first n_cols basis vectors."""
    p = np.zeros((dim, dim), dtype=complex)
    for i in range(n_cols):
        p[i, i] = 1.0
    return p


def index_projection(dim: int, indices) -> np.ndarray:
    """Projection onto the span of the chosen basis vectors."""
    p = np.zeros((dim, dim), dtype=complex)
    for i in indices:
        p[i, i] = 1.0
    return p


@dataclass(frozen=True)
class DiracFrame:
    """Frame given by N independent columns in C^D."""

    columns: np.ndarray  # shape (D, N)

    @property
    def dim(self) -> int:
        return self.columns.shape[0]

    @property
    def n_cols(self) -> int:
        return self.columns.shape[1]


def embed_columns(columns: np.ndarray) -> np.ndarray:
    """The operator sum over k of |col_k><e_k|, i.e. columns padded to D x D."""
    d, n = columns.shape
    out = np.zeros((d, d), dtype=complex)
    out[:, :n] = columns
    return out


def check_independent(alg: Algebra, columns: np.ndarray) -> None:
    gram = adj(columns) @ columns
    s = np.linalg.svd(gram, compute_uv=False)
    if s.size == 0 or float(s[-1]) <= alg.tol_rank * float(s[0]):
        raise ValueError("columns are linearly dependent")


def gram_polar(alg: Algebra, frame: DiracFrame):
    """Polar data from the Gram matrix.

    modulus block = (Gram)^{1/2} with Gram_{kl} = <col_k, col_l>; the
    orthonormalized columns are cols @ Gram^{-1/2}.
    """
    check_independent(alg, frame.columns)
    gram = adj(frame.columns) @ frame.columns
    w, v = np.linalg.eigh(gram)
    sqrt_g = (v * np.sqrt(w)) @ adj(v)
    inv_sqrt_g = (v / np.sqrt(w)) @ adj(v)
    return frame.columns @ inv_sqrt_g, sqrt_g


def supports_from_columns(alg: Algebra, eta_cols: np.ndarray, xi_cols: np.ndarray):
    """Supports of the operator sum over k of |eta_k><xi_k|.

    The left support projects onto the span of the eta columns, the
    right support onto the span of the xi columns; both are computed via
    the Gram inverses and match the operator-level supports.
    """
    check_independent(alg, eta_cols)
    check_independent(alg, xi_cols)
    left = eta_cols @ np.linalg.inv(adj(eta_cols) @ eta_cols) @ adj(eta_cols)
    right = xi_cols @ np.linalg.inv(adj(xi_cols) @ xi_cols) @ adj(xi_cols)
    return left, right


def multiindex_coordinates(alg: Algebra, indices, frame: DiracFrame):
    """Chart blocks over the basis projection picked by a multi-index.

    z[t, s] = <e_{n_t}, col_s> is the N x N minor at the chosen rows and
    must be invertible (the chart-domain condition); the complementary
    block is y = (cols @ z^{-1}) restricted to the remaining rows.
    """
    indices = tuple(indices)
    d, n = frame.columns.shape
    if len(indices) != n or list(indices) != sorted(set(indices)):
        raise ValueError("indices must be strictly increasing and match the column count")
    z = frame.columns[list(indices), :]
    s = np.linalg.svd(z, compute_uv=False)
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0 or float(s[-1]) <= np.sqrt(alg.tol_rank) * smax:
        raise ChartDomainError("multi-index minor is singular")
    rest = [r for r in range(d) if r not in indices]
    y = (frame.columns @ np.linalg.inv(z))[rest, :]
    return z, y


# ---------------------------------------------------------------------------
# block chart fields and their bracket


@dataclass(frozen=True)
class BlockChartField:
    """Chart field in block form over a multi-index chart.

    a(y) has shape (D-N) x N (rows off the index set), b(y) has shape
    N x N (rows and columns on the index set); optional analytic
    derivatives take the block direction and its adjoint slot.
    """

    indices: tuple
    dim: int
    a: Callable[[np.ndarray], np.ndarray]
    b: Callable[[np.ndarray], np.ndarray]
    d_a: Optional[Callable] = None
    d_a_conj: Optional[Callable] = None
    d_b: Optional[Callable] = None
    d_b_conj: Optional[Callable] = None


def _block_real_directional(fn, d_hol, d_conj, y, e, h):
    if d_hol is not None and d_conj is not None:
        return d_hol(y, e) + d_conj(y, e)
    return real_directional(fn, y, e, h)


def block_bracket(c1: BlockChartField, c2: BlockChartField, h: float = DEFAULT_STEP) -> BlockChartField:
    """Matrix-element bracket of two block chart fields.

    a[r, t] collects the derivative pairings of the a blocks along each
    other; b[t, s] adds the reversed product difference
    sum_m (b2[t, m] b1[m, s] - b1[t, m] b2[m, s]).
    """
    if c1.indices != c2.indices or c1.dim != c2.dim:
        raise ValueError("block fields live over different charts")

    def a(y):
        a1 = c1.a(y)
        a2 = c2.a(y)
        return _block_real_directional(c2.a, c2.d_a, c2.d_a_conj, y, a1, h) - _block_real_directional(
            c1.a, c1.d_a, c1.d_a_conj, y, a2, h
        )

    def b(y):
        a1 = c1.a(y)
        a2 = c2.a(y)
        b1 = c1.b(y)
        b2 = c2.b(y)
        return (
            _block_real_directional(c2.b, c2.d_b, c2.d_b_conj, y, a1, h)
            - _block_real_directional(c1.b, c1.d_b, c1.d_b_conj, y, a2, h)
            + b2 @ b1
            - b1 @ b2
        )

    return BlockChartField(c1.indices, c1.dim, a, b)


def block_anchor(c: BlockChartField):
    """Anchor in matrix elements: the a block alone."""
    return c.a


# ---------------------------------------------------------------------------
# embedding block data into operator-level chart fields


def embed_y(indices, dim: int, y_block: np.ndarray) -> np.ndarray:
    """Lift a (D-N) x N block to the chart-coordinate operator."""
    rest = [r for r in range(dim) if r not in indices]
    out = np.zeros((dim, dim), dtype=complex)
    for bi, r in enumerate(rest):
        for bj, t in enumerate(indices):
            out[r, t] = y_block[bi, bj]
    return out


def extract_y(indices, dim: int, y_op: np.ndarray) -> np.ndarray:
    rest = [r for r in range(dim) if r not in indices]
    return y_op[np.ix_(rest, list(indices))]


def embed_b(indices, dim: int, b_block: np.ndarray) -> np.ndarray:
    out = np.zeros((dim, dim), dtype=complex)
    idx = list(indices)
    out[np.ix_(idx, idx)] = b_block
    return out


def extract_b(indices, dim: int, b_op: np.ndarray) -> np.ndarray:
    idx = list(indices)
    return b_op[np.ix_(idx, idx)]


def embed_block_field(c: BlockChartField) -> ChartField:
    """Operator-level chart field backed by the block functions.

    The embedded field performs the same arithmetic on padded matrices,
    so the two bracket paths can be compared at tight tolerance.
    """
    indices, dim = c.indices, c.dim
    p = index_projection(dim, indices)

    def a(y):
        return embed_y(indices, dim, c.a(extract_y(indices, dim, y)))

    def b(y):
        return embed_b(indices, dim, c.b(extract_y(indices, dim, y)))

    d_a = d_a_conj = d_b = d_b_conj = None
    if c.d_a is not None and c.d_a_conj is not None:
        d_a = lambda y, e: embed_y(
            indices, dim, c.d_a(extract_y(indices, dim, y), extract_y(indices, dim, e))
        )
        d_a_conj = lambda y, e: embed_y(
            indices, dim, c.d_a_conj(extract_y(indices, dim, y), extract_y(indices, dim, e))
        )
    if c.d_b is not None and c.d_b_conj is not None:
        d_b = lambda y, e: embed_b(
            indices, dim, c.d_b(extract_y(indices, dim, y), extract_y(indices, dim, e))
        )
        d_b_conj = lambda y, e: embed_b(
            indices, dim, c.d_b_conj(extract_y(indices, dim, y), extract_y(indices, dim, e))
        )
    return ChartField(p, a, b, d_a, d_a_conj, d_b, d_b_conj)


def poly_block_field(indices, dim: int, coeffs) -> BlockChartField:
    """Polynomial block field with analytic derivatives.

    coeffs is a dict with entries
      a0 ((D-N) x N), a1 pair (P, Q) for P y Q, a2 pair (R, S) for R y* S,
      b0 (N x N),     b1 pair (U, V) for U y V ... values shaped to b,
      b2 pair for the y* slot.
    """
    a0, (p1, q1), (r1, s1) = coeffs["a0"], coeffs["a1"], coeffs["a2"]
    b0, (u1, v1), (w1, x1) = coeffs["b0"], coeffs["b1"], coeffs["b2"]

    def a(y):
        return a0 + p1 @ y @ q1 + r1 @ adj(y) @ s1

    def d_a(y, e):
        return p1 @ e @ q1

    def d_a_conj(y, e):
        return r1 @ adj(e) @ s1

    def b(y):
        return b0 + u1 @ y @ v1 + w1 @ adj(y) @ x1

    def d_b(y, e):
        return u1 @ e @ v1

    def d_b_conj(y, e):
        return w1 @ adj(e) @ x1

    return BlockChartField(tuple(indices), dim, a, b, d_a, d_a_conj, d_b, d_b_conj)
