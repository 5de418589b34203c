"""Closed-form z-integrals shared by the kernels, Zeno times and field maps.

All integrals run over v in [1, L + 1] (v = 1 + z, L = cutoff ratio) and are
written through the entire function ``ein_i`` so that frequencies may be
zero or negative.
"""
from __future__ import annotations

import numpy as np

from .specfun import ein_i


def inv_moment(alpha, cutoff):
    """int_1^{L+1} exp(i alpha v) / v dv."""
    alpha = np.asarray(alpha, dtype=float)
    top = cutoff + 1.0
    return ein_i(alpha * top) - ein_i(alpha) + np.log(top)


def inv2_moment(alpha, cutoff):
    """int_1^{L+1} exp(i alpha v) / v**2 dv, by one integration by parts."""
    alpha = np.asarray(alpha, dtype=float)
    top = cutoff + 1.0
    return (
        np.exp(1j * alpha)
        - np.exp(1j * alpha * top) / top
        + 1j * alpha * inv_moment(alpha, cutoff)
    )


def shifted_pole(alpha, lower, upper):
    """int_lower^upper (exp(i alpha u) - 1) / u du for any real bounds."""
    alpha = np.asarray(alpha, dtype=float)
    return ein_i(alpha * upper) - ein_i(alpha * lower)


def weight_transform(model: str, phase, lag, cutoff):
    """int_0^L w(z) cos(z phase) exp(i (1 - z) lag) dz.

    ``w = 1/(1+z)^2`` for const, ``z/(1+z)^2`` for lin.  This is the memory
    kernel of the amplitude equations up to the factor 2 Gamma0 / pi.
    """
    phase = np.asarray(phase, dtype=float)
    lag = np.asarray(lag, dtype=float)
    out = 0.0
    for s in (1.0, -1.0):
        alpha = s * phase - lag
        i2 = inv2_moment(alpha, cutoff)
        if model == "const":
            part = i2
        else:
            part = inv_moment(alpha, cutoff) - i2
        out = out + 0.5 * np.exp(-1j * s * phase + 2j * lag) * part
    return out
