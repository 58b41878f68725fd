from opgroupoid.algebra import Algebra, adj, opnorm
from opgroupoid.rng import SplitMix64
from opgroupoid.wirtinger import (
    conj_directional,
    holo_directional,
    real_directional,
    wirtinger_directional,
)

ALG = Algebra(4)


def _draw(seed):
    rng = SplitMix64(seed)
    x = rng.complex_normal((4, 4))
    e = rng.complex_normal((4, 4))
    return rng, x, e


def test_linear_holomorphic_map():
    rng, x, e = _draw(1)
    a = rng.complex_normal((4, 4))
    f = lambda m: a @ m
    assert opnorm(holo_directional(f, x, e) - a @ e) <= 1e-9
    assert opnorm(conj_directional(f, x, e)) <= 1e-9


def test_antiholomorphic_map():
    rng, x, e = _draw(2)
    b = rng.complex_normal((4, 4))
    f = lambda m: b @ adj(m)
    assert opnorm(holo_directional(f, x, e)) <= 1e-9
    assert opnorm(conj_directional(f, x, e) - b @ adj(e)) <= 1e-9


def test_gram_like_map_against_hand_derivative():
    # f(m) = m m* m has one conjugate slot in the middle
    _, x, e = _draw(3)
    f = lambda m: m @ adj(m) @ m
    d_hol, d_conj = wirtinger_directional(f, x, e)
    assert opnorm(d_hol - (e @ adj(x) @ x + x @ adj(x) @ e)) <= 1e-8
    assert opnorm(d_conj - x @ adj(e) @ x) <= 1e-8


def test_real_directional_is_sum_of_pairings():
    _, x, e = _draw(4)
    f = lambda m: m @ adj(m) @ m
    d_hol, d_conj = wirtinger_directional(f, x, e)
    assert opnorm(real_directional(f, x, e) - (d_hol + d_conj)) <= 1e-8


def test_product_rule():
    rng, x, e = _draw(5)
    a = rng.complex_normal((4, 4))
    f = lambda m: a @ m
    g = lambda m: m @ adj(m)
    fg = lambda m: f(m) @ g(m)
    lhs = real_directional(fg, x, e)
    rhs = real_directional(f, x, e) @ g(x) + f(x) @ real_directional(g, x, e)
    assert opnorm(lhs - rhs) <= 1e-7
