"""An exactly automorphic test profile built from the discriminant form.

F(g) = y^6 |Delta(z)| at z = g^{-1} . i is genuinely invariant under the
full integer lattice acting on the right (weight-12 modularity of Delta
cancels the y^6 factor), so it is exactly t-periodic with period 1 and
exactly symmetric under the rotation by the Weyl element -- unlike model
Whittaker functions, whose symmetry is merely asserted.  In the K a n_t
coordinates, z = -t + i a^{-2} independently of k.
"""

from __future__ import annotations

import math

import numpy as np

from .coeffs import ramanujan_tau_table

TWO_PI = 2.0 * math.pi


def reduce_to_fundamental(x, y, max_steps=200):
    """Reduce z = x + iy into the standard fundamental domain
    (|x| <= 1/2, |z| >= 1) by integer shifts and inversions."""
    x = np.array(x, dtype=float, copy=True)
    y = np.array(y, dtype=float, copy=True)
    for _ in range(max_steps):
        x -= np.round(x)
        r2 = x * x + y * y
        inside = r2 >= 1.0 - 1e-15
        if np.all(inside):
            break
        x = np.where(inside, x, -x / r2)
        y = np.where(inside, y, y / r2)
    return x, y


def delta_profile(x, y, n_terms=40):
    """y^6 |Delta(x+iy)| evaluated through fundamental-domain reduction.

    y^6 |Delta| is invariant, so reducing first makes the q-expansion
    converge rapidly (|q| <= e^{-pi sqrt(3)} after reduction).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    xr, yr = reduce_to_fundamental(x, y)
    tau_tab = ramanujan_tau_table(n_terms)
    q = np.exp(TWO_PI * (1j * xr - yr))
    acc = np.zeros(xr.shape, dtype=complex)
    # Horner in q, highest coefficient first; Delta = sum tau(n) q^n
    for n in range(n_terms, 0, -1):
        acc = (acc + float(tau_tab[n])) * q
    return yr ** 6 * np.abs(acc)


class CuspProfile:
    """Protocol object for the region-norm module: K-invariant, exactly
    periodic (period 1) and exactly Weyl-symmetric."""

    period = 1
    k_order = 0  # K-invariant

    def __init__(self):
        from .siegel import SymmetryFlags
        self.flags = SymmetryFlags(hasPeriod=True, hasWeyl=True)

    def value(self, theta, a, t):
        """|F| at k_theta a n_t; z = g^{-1} . i = -t + i a^{-2}."""
        a = np.asarray(a, dtype=float)
        t = np.asarray(t, dtype=float)
        y = a ** (-2.0)
        return delta_profile(-t + 0.0 * y, y + 0.0 * t)

    def ksq(self, avals, ts, tol=None):
        avals = np.atleast_1d(np.asarray(avals, dtype=float))
        ts = np.broadcast_to(np.asarray(ts, dtype=float), avals.shape)
        return TWO_PI * np.abs(self.value(0.0, avals, ts)) ** 2

    def cell_integral(self, avals, t_lo, t_hi, tol=None, th=None):
        r"""\int_K \int_{t_lo}^{t_hi} |F(k a n_t)|^2 dt dk, vectorized
        over ``avals`` (t_lo/t_hi broadcast against it)."""
        avals = np.atleast_1d(np.asarray(avals, dtype=float))
        t_lo = np.broadcast_to(np.asarray(t_lo, dtype=float), avals.shape)
        t_hi = np.broadcast_to(np.asarray(t_hi, dtype=float), avals.shape)
        # GL in t; the integrand is smooth and 1-periodic
        from .quadrature import _gl_rule
        xg, wg = _gl_rule(24)
        mid = 0.5 * (t_hi + t_lo)
        half = 0.5 * (t_hi - t_lo)
        tg = mid[:, None] + half[:, None] * xg[None, :]
        vals = self.value(0.0, np.repeat(avals, len(xg)),
                          tg.ravel()).reshape(tg.shape)
        kmass = TWO_PI if th is None else th[1] - th[0]
        return kmass * np.sum(half[:, None] * wg[None, :]
                              * np.abs(vals) ** 2, axis=1)
