"""Directional derivatives for maps of a complex matrix argument.

For a real-differentiable map F of a complex matrix x, the two
directional Wirtinger derivatives along a direction e are recovered from
two real central differences:

    <dF/dx , e>  = (D_e F - i D_{ie} F) / 2
    <dF/dx*, e*> = (D_e F + i D_{ie} F) / 2

where D_e F = (F(x + h e) - F(x - h e)) / (2 h).  Their sum is the full
real directional derivative of F along e.  Maps that carry analytic
derivative evaluators should be differentiated through those instead;
the finite-difference path is the fallback and the cross check.
"""
from __future__ import annotations

import numpy as np

DEFAULT_STEP = 1e-5


def real_directional(f, x: np.ndarray, e: np.ndarray, h: float = DEFAULT_STEP):
    """Central-difference derivative of f at x along the real direction e."""
    return (f(x + h * e) - f(x - h * e)) / (2.0 * h)


def holo_directional(f, x: np.ndarray, e: np.ndarray, h: float = DEFAULT_STEP):
    """The pairing <dF/dx, e>."""
    d_re = real_directional(f, x, e, h)
    d_im = real_directional(f, x, 1j * e, h)
    return 0.5 * (d_re - 1j * d_im)


def conj_directional(f, x: np.ndarray, e: np.ndarray, h: float = DEFAULT_STEP):
    """The pairing <dF/dx*, e*>; e is the unconjugated direction."""
    d_re = real_directional(f, x, e, h)
    d_im = real_directional(f, x, 1j * e, h)
    return 0.5 * (d_re + 1j * d_im)


def wirtinger_directional(f, x: np.ndarray, e: np.ndarray, h: float = DEFAULT_STEP):
    """Both Wirtinger pairings (<dF/dx, e>, <dF/dx*, e*>) at once."""
    d_re = real_directional(f, x, e, h)
    d_im = real_directional(f, x, 1j * e, h)
    return 0.5 * (d_re - 1j * d_im), 0.5 * (d_re + 1j * d_im)


def pair_real_directional(f, pt, d, h: float = DEFAULT_STEP):
    """Real directional derivative for maps of a pair of matrices.

    f takes (x, v) and returns a pair; the derivative moves both
    components along d = (dx, dv) simultaneously.
    """
    (x, v), (dx, dv) = pt, d
    up = f(x + h * dx, v + h * dv)
    dn = f(x - h * dx, v - h * dv)
    return tuple((a - b) / (2.0 * h) for a, b in zip(up, dn))
