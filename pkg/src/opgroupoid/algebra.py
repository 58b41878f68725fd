"""Complex matrix algebra with tolerance-aware rank decisions.

An n x n complex array is treated as an element of the matrix algebra
M_n(C) with the operator (spectral) norm.  Polar data, support
projections, partial inverses and corner inverses are all computed
through one explicit singular-value gap policy, so every rank decision
made downstream is reproducible:

* a singular value s is treated as zero when s <= tol_rank * s_max,
* it is accepted as nonzero when s >= sqrt(tol_rank) * s_max,
* anything strictly inside the band is rejected as borderline.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class BorderlineSpectrumError(ValueError):
    """Singular values fall inside the rejection band of the gap policy."""


class CornerInversionError(ValueError):
    """The compression p x p is not invertible in the corner algebra pMp."""


def adj(x: np.ndarray) -> np.ndarray:
    """Hermitian adjoint."""
    return x.conj().T


def opnorm(x: np.ndarray) -> float:
    """Operator (spectral) norm."""
    return float(np.linalg.norm(x, 2))


@dataclass(frozen=True)
class Algebra:
    """Ambient algebra M_n(C) together with the tolerance policy.

    tol_rank is the relative singular-value threshold of the gap policy;
    tol_eq is the absolute operator-norm tolerance used for equality of
    operators (inputs are expected at unit scale).
    """

    dim: int
    tol_rank: float = 1e-9
    tol_eq: float = 1e-8

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        if not 0.0 < self.tol_rank < 1.0:
            raise ValueError("tol_rank must lie in (0, 1)")
        if self.tol_eq <= 0.0:
            raise ValueError("tol_eq must be positive")

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def zero(self) -> np.ndarray:
        return np.zeros((self.dim, self.dim), dtype=complex)

    def eq(self, a: np.ndarray, b: np.ndarray) -> bool:
        return opnorm(np.asarray(a) - np.asarray(b)) <= self.tol_eq


@dataclass(frozen=True)
class PolarData:
    """Polar factor, modulus and the two support projections of an operator.

    u @ modulus reconstructs the operator; u is the partial isometry with
    adj(u) @ u = right and u @ adj(u) = left; modulus is positive
    semidefinite with support equal to right.
    """

    u: np.ndarray
    modulus: np.ndarray
    left: np.ndarray
    right: np.ndarray
    rank: int


def _as_operator(alg: Algebra, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (alg.dim, alg.dim):
        raise ValueError(f"expected a {alg.dim}x{alg.dim} operator, got {x.shape}")
    if not (np.all(np.isfinite(x.real)) and np.all(np.isfinite(x.imag))):
        raise ValueError("operator has non-finite entries")
    return x


def polar_decompose(alg: Algebra, x) -> PolarData:
    """Polar decomposition x = u |x| via SVD, truncated to the support.

    Singular values below tol_rank * s_max are discarded, which also
    yields the left and right support projections.  The zero operator
    decomposes into all-zero factors.
    """
    x = _as_operator(alg, x)
    u_svd, s, vh = np.linalg.svd(x)
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0:
        z = alg.zero()
        return PolarData(z, z.copy(), z.copy(), z.copy(), 0)
    r = int(np.count_nonzero(s > alg.tol_rank * smax))
    uk = u_svd[:, :r]
    vk = vh[:r, :]
    u = uk @ vk
    modulus = (vk.conj().T * s[:r]) @ vk
    left = uk @ uk.conj().T
    right = vk.conj().T @ vk
    return PolarData(u, modulus, left, right, r)


def is_partially_invertible(alg: Algebra, x) -> bool:
    """Whether the spectrum of x clears the singular-value gap policy.

    True iff every singular value is either <= tol_rank * s_max or
    >= sqrt(tol_rank) * s_max.  The zero operator passes vacuously.
    Degenerate borderline spectra are rejected.
    """
    x = _as_operator(alg, x)
    s = np.linalg.svd(x, compute_uv=False)
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0:
        return True
    lo = alg.tol_rank * smax
    hi = math.sqrt(alg.tol_rank) * smax
    return not bool(np.any((s > lo) & (s < hi)))


def partial_inverse(alg: Algebra, x) -> np.ndarray:
    """Two-sided inverse within the support: |x|^{-1} adj(u).

    Only singular values above the gap threshold are inverted, so the
    result y satisfies y x = right(x) and x y = left(x).
    """
    x = _as_operator(alg, x)
    if not is_partially_invertible(alg, x):
        raise BorderlineSpectrumError("singular values inside the rejection band")
    u_svd, s, vh = np.linalg.svd(x)
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0:
        return alg.zero()
    r = int(np.count_nonzero(s > alg.tol_rank * smax))
    return (vh[:r, :].conj().T * (1.0 / s[:r])) @ u_svd[:, :r].conj().T


def is_inverse_pair(alg: Algebra, x, y) -> bool:
    """Whether y x = right(x) and x y = left(x) within tol_eq."""
    x = _as_operator(alg, x)
    y = _as_operator(alg, y)
    pd = polar_decompose(alg, x)
    return alg.eq(y @ x, pd.right) and alg.eq(x @ y, pd.left)


def corner(p: np.ndarray, q: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Compression p x q."""
    return p @ x @ q


def projection_rank(p: np.ndarray) -> int:
    """Rank of a projection, read off from its trace."""
    t = float(np.trace(p).real)
    r = round(t)
    if abs(t - r) >= 0.01:
        raise ValueError(f"trace {t} is not close to an integer; not a projection")
    return int(r)


def is_projection(alg: Algebra, p) -> bool:
    """Hermitian idempotent within tol_eq, with near-integer trace."""
    p = np.asarray(p, dtype=complex)
    if not alg.eq(p, adj(p)) or not alg.eq(p @ p, p):
        return False
    return abs(float(np.trace(p).real) - round(float(np.trace(p).real))) < 0.01


def projection_basis(p: np.ndarray, rank: int) -> np.ndarray:
    """Deterministic isometry whose columns span the range of p."""
    w, v = np.linalg.eigh(p)
    if rank == 0:
        return np.zeros((p.shape[0], 0), dtype=complex)
    return v[:, -rank:]


def corner_invertible(alg: Algebra, p: np.ndarray, x: np.ndarray) -> bool:
    """Whether p x p is invertible in the corner algebra pMp."""
    kp = projection_rank(p)
    if kp == 0:
        return True
    a = p @ x @ p
    s = np.linalg.svd(a, compute_uv=False)
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0:
        return False
    lo = alg.tol_rank * smax
    hi = math.sqrt(alg.tol_rank) * smax
    if bool(np.any((s > lo) & (s < hi))):
        return False
    return int(np.count_nonzero(s >= hi)) == kp


def corner_inverse(alg: Algebra, p: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Inverse of p x p inside pMp: the z with z(pxp) = (pxp)z = p.

    Computed by pseudo-inversion restricted to the range of p; raises
    when the compression does not have full corner rank.
    """
    kp = projection_rank(p)
    if kp == 0:
        return np.zeros_like(np.asarray(x, dtype=complex))
    if not corner_invertible(alg, p, x):
        raise CornerInversionError("compression is rank deficient in the corner")
    a = p @ x @ p
    u_svd, s, vh = np.linalg.svd(a)
    return (vh[:kp, :].conj().T * (1.0 / s[:kp])) @ u_svd[:, :kp].conj().T
