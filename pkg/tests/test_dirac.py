import numpy as np
import pytest

from opgroupoid.algebra import Algebra, adj, opnorm, polar_decompose
from opgroupoid.algebroid import chart_bracket
from opgroupoid.dirac import (
    DiracFrame,
    block_anchor,
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
    standard_projection,
    supports_from_columns,
)
from opgroupoid.frames import frame_chart
from opgroupoid.lattice import ChartDomainError
from opgroupoid.rng import SplitMix64


def test_gram_polar_orthonormal_and_scaled():
    alg = Algebra(4)
    cols = np.zeros((4, 2), dtype=complex)
    cols[0, 0] = 1.0
    cols[1, 1] = 1.0
    u, mod = gram_polar(alg, DiracFrame(cols))
    assert np.allclose(mod, np.eye(2), atol=1e-12)
    assert np.allclose(u, cols, atol=1e-12)
    u2, mod2 = gram_polar(alg, DiracFrame(2.0 * cols))
    assert np.allclose(mod2, 2.0 * np.eye(2), atol=1e-12)
    assert np.allclose(u2, cols, atol=1e-12)


def test_gram_polar_matches_operator_polar():
    alg = Algebra(5)
    rng = SplitMix64(7)
    from opgroupoid.generators import random_unitary

    u_full = random_unitary(rng, 5)
    cols = u_full[:, :2] * np.array([0.7, 1.6])
    ucols, mod = gram_polar(alg, DiracFrame(cols))
    pd = polar_decompose(alg, embed_columns(cols))
    assert opnorm(embed_columns(ucols) - pd.u) <= 1e-12
    mod_embedded = np.zeros((5, 5), dtype=complex)
    mod_embedded[:2, :2] = mod
    assert opnorm(mod_embedded - pd.modulus) <= 1e-12


def test_gram_polar_rejects_dependent_columns():
    alg = Algebra(3)
    cols = np.array([[1.0, 2.0], [0.0, 0.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(ValueError):
        gram_polar(alg, DiracFrame(cols))


def test_supports_rank_one_hand_case():
    alg = Algebra(3)
    eta = np.array([[1.0], [1.0], [0.0]], dtype=complex)
    xi = np.array([[0.0], [2.0], [0.0]], dtype=complex)
    left, right = supports_from_columns(alg, eta, xi)
    assert np.allclose(left, np.outer(eta, eta.conj()) / 2.0, atol=1e-12)
    assert np.allclose(right, np.diag([0.0, 1.0, 0.0]), atol=1e-12)
    pd = polar_decompose(alg, eta @ adj(xi))
    assert opnorm(left - pd.left) <= 1e-12
    assert opnorm(right - pd.right) <= 1e-12


def test_supports_of_base_projection():
    alg = Algebra(4)
    p0 = standard_projection(4, 2)
    cols = np.zeros((4, 2), dtype=complex)
    cols[0, 0] = cols[1, 1] = 1.0
    left, right = supports_from_columns(alg, cols, cols)
    assert opnorm(left - p0) <= 1e-12
    assert opnorm(right - p0) <= 1e-12


def test_multiindex_identity_chart():
    alg = Algebra(5)
    cols = np.zeros((5, 2), dtype=complex)
    cols[1, 0] = 1.0
    cols[3, 1] = 1.0
    z, y = multiindex_coordinates(alg, (1, 3), DiracFrame(cols))
    assert np.allclose(z, np.eye(2), atol=1e-12)
    assert np.allclose(y, 0.0, atol=1e-12)


def test_multiindex_hand_case():
    alg = Algebra(3)
    cols = np.array([[1.0], [2.0], [3.0]], dtype=complex)
    z, y = multiindex_coordinates(alg, (0,), DiracFrame(cols))
    assert np.allclose(z, [[1.0]], atol=1e-12)
    assert np.allclose(y, [[2.0], [3.0]], atol=1e-12)
    with pytest.raises(ChartDomainError):
        multiindex_coordinates(alg, (0,), DiracFrame(np.array([[0.0], [1.0], [0.0]], dtype=complex)))


def test_multiindex_matches_frame_chart():
    alg = Algebra(6)
    rng = SplitMix64(11)
    from opgroupoid.generators import random_unitary

    for _ in range(10):
        cols = random_unitary(rng, 6)[:, :2] * rng.uniform_in(0.5, 2.0, 2)
        indices = (1, 4)
        minor = cols[list(indices), :]
        if np.linalg.svd(minor, compute_uv=False)[-1] < 0.15:
            continue
        z, y = multiindex_coordinates(alg, indices, DiracFrame(cols))
        p = index_projection(6, indices)
        pt = frame_chart(alg, p, embed_columns(cols))
        assert opnorm(z - pt.z[list(indices), :2]) <= 1e-12
        assert opnorm(y - extract_y(indices, 6, pt.y)) <= 1e-12


def _random_block_fields(rng, d, nn, indices):
    m = d - nn

    def coeffs():
        return {
            "a0": rng.complex_normal((m, nn)) * 0.5,
            "a1": (rng.complex_normal((m, m)) * 0.5, rng.complex_normal((nn, nn)) * 0.5),
            "a2": (rng.complex_normal((m, nn)) * 0.5, rng.complex_normal((m, nn)) * 0.5),
            "b0": rng.complex_normal((nn, nn)) * 0.5,
            "b1": (rng.complex_normal((nn, m)) * 0.5, rng.complex_normal((nn, nn)) * 0.5),
            "b2": (rng.complex_normal((nn, nn)) * 0.5, rng.complex_normal((m, nn)) * 0.5),
        }

    return poly_block_field(indices, d, coeffs()), poly_block_field(indices, d, coeffs())


def test_block_bracket_constant_corner_parts():
    # with a = 0 and constant b blocks the bracket is the reversed commutator
    alg = Algebra(5)
    rng = SplitMix64(13)
    nn, d = 2, 5
    indices = (0, 2)
    b1 = rng.complex_normal((nn, nn))
    b2 = rng.complex_normal((nn, nn))
    zero = np.zeros((d - nn, nn), dtype=complex)

    def make(bconst):
        return poly_block_field(
            indices,
            d,
            {
                "a0": zero,
                "a1": (np.zeros((d - nn, d - nn), dtype=complex), np.zeros((nn, nn), dtype=complex)),
                "a2": (zero, zero),
                "b0": bconst,
                "b1": (np.zeros((nn, d - nn), dtype=complex), np.zeros((nn, nn), dtype=complex)),
                "b2": (np.zeros((nn, nn), dtype=complex), zero),
            },
        )

    br = block_bracket(make(b1), make(b2))
    y = rng.complex_normal((d - nn, nn)) * 0.4
    assert opnorm(br.a(y)) <= 1e-12
    assert opnorm(br.b(y) - (b2 @ b1 - b1 @ b2)) <= 1e-12


def test_block_bracket_and_anchor_match_general():
    rng = SplitMix64(17)
    for d, nn in ((3, 1), (5, 2), (6, 3)):
        alg = Algebra(d)
        indices = tuple(sorted(np.argsort(rng.uniform(d))[:nn].tolist()))
        c1, c2 = _random_block_fields(rng, d, nn, indices)
        y_blk = rng.complex_normal((d - nn, nn)) * 0.5
        blk = block_bracket(c1, c2)
        gen = chart_bracket(alg, embed_block_field(c1), embed_block_field(c2))
        y_op = embed_y(indices, d, y_blk)
        assert opnorm(blk.a(y_blk) - extract_y(indices, d, gen.a(y_op))) <= 1e-12
        assert opnorm(blk.b(y_blk) - extract_b(indices, d, gen.b(y_op))) <= 1e-12
        assert opnorm(block_anchor(blk)(y_blk) - extract_y(indices, d, gen.a(y_op))) <= 1e-12
