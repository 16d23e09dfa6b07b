"""Representation-level norms and the intertwining operator.

Implements the intertwining eigenvalues c_{2m}^{(u)} (two closed forms,
cross-checked), the weakly singular integral operator A_u on (0,1), the
normalizer G(u) relating the two inner products, the weighted-Fourier
norm ||.||_{C_u}, the K-averaged norm |||.|||_u, the Kirillov-type norm,
and the multiplier maps between principal-series models.

Sign conventions: the pairing (phi, psi)_u = <A_u phi, conj(psi)> is
conjugate-linear in the second slot.  K-mass 2*pi throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import loggamma as _loggamma
from scipy.special import roots_jacobi

from .errors import (BadParameterRange, DivergentIntegral, OutOfRange,
                     ParityMismatch, PoleParameter)
from .fourier import fourier_transform_batch
from .group import K_MASS
from .principal import CayleySum, ReprParams, SmoothVector
from .quadrature import (DEFAULT_TOL, fit_powerlaw_tail, gauss_panels,
                         tanh_sinh_map)

_POLE_EPS = 1e-12


@dataclass(frozen=True)
class IntertwineEigenvalue:
    m: int  # half-index: acts on the weight-2m K-type
    u: complex
    value: complex


@dataclass
class NormValue:
    kind: str  # C_u | triple | standard_u | kirillov
    value: float
    tailBound: float = 0.0
    params: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def tail_ok(self) -> bool:
        return self.tailBound < 0.01 * max(self.value, 1e-300)


def intertwine_constant(m: int, u: complex, cross_check: bool = True):
    """Eigenvalue c_{2m}^{(u)} of A_u on the weight-2m K-type:
    A_u v_{2m}^{(u)} = c_{2m}^{(u)} v_{2m}^{(-u)}.

    Primary form:  (-1)^m 2^{1-u} pi Gamma(u) /
                   (Gamma((u+1)/2 + m) Gamma((u+1)/2 - m)).
    Cross-check (reflection formula):
        2^{1-u} Gamma(u) Gamma(m + (1-u)/2) sin(pi(u+1)/2)
                 / Gamma((u+1)/2 + m).
    """
    u = complex(u)
    if abs(u.imag) < _POLE_EPS and abs(u.real - round(u.real)) < _POLE_EPS \
            and round(u.real) <= 0:
        raise PoleParameter(f"A_u has a pole at u = {u.real:g}")
    half = (u + 1.0) / 2.0
    ma = abs(m)  # both forms are even in m
    if ma <= 100:
        primary = (-1.0) ** m * 2.0 ** (1.0 - u) * math.pi * _gamma(u) \
            / (_gamma(half + ma) * _gamma(half - ma))
        alt = 2.0 ** (1.0 - u) * _gamma(u) * _gamma(ma + (1.0 - u) / 2.0) \
            * np.sin(np.pi * half) / _gamma(half + ma)
    else:
        # log-Gamma route: the direct form overflows past m ~ 100
        lg = _loggamma(complex(ma + (1.0 - u) / 2.0)) \
            - _loggamma(complex(half + ma))
        alt = 2.0 ** (1.0 - u) * _gamma(u) * np.sin(np.pi * half) * np.exp(lg)
        primary = alt
        cross_check = False
    if cross_check and abs(alt - primary) > 1e-9 * (1 + abs(primary)):
        raise AssertionError(
            f"closed forms disagree at m={m}, u={u}: {primary} vs {alt}")
    return primary


def intertwine_apply(v, u: float, x, tol: float = None):
    r"""(A_u v)(x) = \int v(y) |x-y|^{u-1} dy for u in (0,1).

    ``x`` may be a scalar or an array.  The singularity at y = x is
    absorbed by Gauss-Jacobi weights; the smooth middle ranges use
    Gauss-Legendre panels; the tails use the binomial expansion of
    |x-y|^{u-1} against the asymptotic series of v.
    """
    if not (0.0 < u < 1.0):
        raise OutOfRange(
            f"A_u kernel integrable only for u in (0,1); got {u} "
            "(outside, the operator is defined spectrally via c_2m)")
    tol = DEFAULT_TOL if tol is None else tol
    cs = v.sampler if isinstance(v, SmoothVector) else v
    if not isinstance(cs, CayleySum):
        raise TypeError("intertwine_apply needs a CayleySum-backed sampler")

    xs = np.atleast_1d(np.asarray(x, dtype=float))
    n_gj = 24 if tol < 1e-6 else 16
    tj, wj = roots_jacobi(n_gj, 0.0, u - 1.0)
    out = np.empty(xs.shape, dtype=complex)
    # cut scales with |x| so the binomial tail ratio |x|/B stays <= ~2/3
    B = 1.5 * float(np.max(np.abs(xs))) + 41.0
    up = cs.asymptotic("upper", 10)
    lo = cs.asymptotic("lower", 10)
    for i, xc in enumerate(xs):
        # |y - x| <= 1, both sides, Gauss-Jacobi in the weight |y-x|^{u-1}
        acc = 0.5 ** u * np.sum(wj * (cs(xc + 0.5 * (1.0 + tj))
                                      + cs(xc - 0.5 * (1.0 + tj))))
        # smooth middle, panels graded away from both the kernel point x
        # and the poles of v at +-i
        for lo_edge, hi_edge in ((xc + 1.0, B), (-B, xc - 1.0)):
            ny, wy = _graded_panels(lo_edge, hi_edge, xc)
            acc = acc + np.sum(wy * cs(ny) * np.abs(xc - ny) ** (u - 1.0))
        acc = acc + _intertwine_tail(up, xc, B, u)
        acc = acc + _intertwine_tail(lo, -xc, B, u)
        out[i] = acc
    return out[0] if np.isscalar(x) or np.asarray(x).ndim == 0 else out


def _graded_panels(lo_edge, hi_edge, xc, order=16):
    """Composite GL panels on [lo_edge, hi_edge] with widths growing in
    proportion to the distance from the kernel point xc and from 0,
    where the integrand varies fastest."""
    edges = [lo_edge]
    e = lo_edge
    while e < hi_edge:
        w = 0.4 * max(1.0, min(abs(e - xc), abs(e) + 1.0))
        e = min(e + w, hi_edge)
        edges.append(e)
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.asarray(edges)
    mids = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    return ((mids[:, None] + half[:, None] * xg[None, :]).ravel(),
            (half[:, None] * wg[None, :]).ravel())


def _intertwine_tail(asym, xeff, B, u, max_terms=400):
    r"""\int_B^inf (sum_n c_n y^{-s_n}) y^{u-1} (1 - xeff/y)^{u-1} dy,
    termwise exact through the binomial series of the kernel, summed
    adaptively in the ratio xeff/B (|ratio| < 1 by the choice of B).

    Upper tail: kernel (y - xc)^{u-1}, xeff = xc.  Lower tail (after the
    substitution y -> -y): kernel (y + xc)^{u-1}, xeff = -xc.
    """
    ratio = xeff / B
    total = 0.0 + 0.0j
    for c, s in asym:
        base = complex(s) - (u - 1.0)  # integrand ~ y^{-base-j}
        if base.real <= 1.0:
            raise DivergentIntegral(
                f"A_u tail diverges: exponent {base.real:.3f} <= 1")
        head = c * B ** (1.0 - base)
        bj = 1.0  # binom(u-1, j) * (-1)^j
        rpow = 1.0
        acc = 0.0 + 0.0j
        for j in range(max_terms):
            term = bj * rpow / (base + j - 1.0)
            acc += term
            if abs(term) < 1e-17 * max(abs(acc), 1e-30):
                break
            bj *= (u - 1.0 - j) / (j + 1.0) * (-1.0)
            rpow *= ratio
        total += head * acc
    return total


def g_normalizer(u: float, method: str = "quadrature") -> float:
    r"""G(u) with  F[|xi|^{-u}](x) = G(u) |x|^{u-1}  (distributionally).

    Computed by pairing both sides with the self-dual Gaussian
    exp(-pi x^2):  G(u) = I(-u) / I(u-1)  where
    I(p) = \int |x|^p exp(-pi x^2) dx, the p <= -1 case taken in the
    regularized (analytically continued) sense.  G(0) = 0 exactly.
    """
    if not (-1.0 < u < 1.0):
        raise OutOfRange(f"g_normalizer needs |u| < 1, got {u}")
    if u == 0.0:
        return 0.0
    if method == "closed":
        return g_normalizer_closed(u)
    return _gaussian_moment(-u) / _gaussian_moment(u - 1.0)


def g_normalizer_closed(u: float) -> float:
    """pi^{u-1/2} Gamma((1-u)/2) / Gamma(u/2); frozen regression form."""
    if u == 0.0:
        return 0.0
    return math.pi ** (u - 0.5) * _gamma((1.0 - u) / 2.0) / _gamma(u / 2.0)


def _gaussian_moment(p: float) -> float:
    r"""I(p) = \int |x|^p e^{-pi x^2} dx, analytically continued in p.

    For p <= -1/2 (including the divergent p <= -1 range, taken in the
    analytically continued sense), subtract the value of the Gaussian at
    0 on (0,1) and add back \int_0^1 x^p dx = 1/(p+1); the remaining
    integrand is O(x^{p+2}), mild enough for full precision."""
    x01, w01 = tanh_sinh_map(0.0, 1.0, 7)
    xg, wg = gauss_panels(1.0, 4.0, 6, 16)
    outer = np.sum(wg * xg ** p * np.exp(-math.pi * xg ** 2))
    if p > -0.5:
        inner = np.sum(w01 * x01 ** p * np.exp(-math.pi * x01 ** 2))
    else:
        inner = np.sum(w01 * x01 ** p * np.expm1(-math.pi * x01 ** 2)) \
            + 1.0 / (p + 1.0)
    return 2.0 * (inner + outer)


def intertwine_pair(phi, psi, u: float, tol: float = None,
                    method: str = "quadrature"):
    """(phi, psi)_u = <A_u phi, conj(psi)>, conjugate-linear in psi.

    method="quadrature": x-integral of (A_u phi)(x) conj(psi(x)) with
    power-law tail completion -- fully independent of the eigenvalues.
    method="spectral": pi * sum_m c_m conj(d_m) c_{2m}^{(u)} for two
    even-parity SmoothVectors with matching u.
    """
    if method == "spectral":
        if not (isinstance(phi, SmoothVector) and isinstance(psi, SmoothVector)):
            raise TypeError("spectral pairing needs SmoothVectors")
        if phi.params.parity != "+" or psi.params.parity != "+":
            raise ParityMismatch("spectral pairing implemented for even parity")
        total = 0.0 + 0.0j
        for m, c in phi.coeffs.items():
            d = psi.coeffs.get(m)
            if d is not None:
                total += c * np.conj(d) * intertwine_constant(m // 2, u)
        return math.pi * total
    tol = DEFAULT_TOL if tol is None else tol
    ps = psi.sampler if isinstance(psi, SmoothVector) else psi
    X = 150.0
    nx, wx = gauss_panels(-X, X, 200, 16)
    av = intertwine_apply(phi, u, nx, tol)
    integrand_vals = av * np.conj(ps(nx))
    core = np.sum(wx * integrand_vals)

    def integrand(xa):
        return intertwine_apply(phi, u, xa, tol) * np.conj(ps(xa))

    t_up, e_up = fit_powerlaw_tail(lambda xa: np.abs(integrand(xa)), X, "upper")
    # attach the phase of the integrand at the cut to the magnitude tail
    ph_up = integrand(np.array([X * 1.05]))[0]
    ph_lo = integrand(np.array([-X * 1.05]))[0]
    t_lo, e_lo = fit_powerlaw_tail(
        lambda xa: np.abs(integrand(-xa)), X, "upper")
    tails = t_up * ph_up / max(abs(ph_up), 1e-300) \
        + t_lo * ph_lo / max(abs(ph_lo), 1e-300)
    return core + tails


# ---------------------------------------------------------------------------
# Weighted-Fourier norms
# ---------------------------------------------------------------------------

def _xi_grid(u: float, mw: float, tol: float):
    r"""Quadrature grid in xi > 0 for \int xi^{-u} |Fv|^2: tanh-sinh on
    (0,1] (algebraic singularity at 0), GL panels on [1, Xi]."""
    level = 6 if tol >= 1e-8 else 7
    x01, w01 = tanh_sinh_map(0.0, 1.0, level)
    Xi = mw / (2.0 * math.pi) + 4.5
    xg, wg = gauss_panels(1.0, Xi, max(4, int(math.ceil(Xi - 1.0))), 16)
    return np.concatenate([x01, xg]), np.concatenate([w01, wg]), Xi


def comp_norm(v, u: float, tol: float = None) -> NormValue:
    r"""||v||_{C_u}^2 = \int |xi|^{-u} |Fv(xi)|^2 d xi for real u, |u| < 1.

    For u = 0 this is the plain L^2 norm of v (Plancherel).
    """
    if not (-1.0 < u < 1.0):
        raise OutOfRange(f"comp_norm needs |u| < 1, got {u}")
    tol = DEFAULT_TOL if tol is None else tol
    cs = v.sampler if isinstance(v, SmoothVector) else v
    if isinstance(cs, CayleySum):
        # transform ~ |xi|^{d-1} near 0 when the decay exponent d < 1
        d = cs.min_decay
        if 2.0 * min(d - 1.0, 0.0) - u <= -1.0:
            raise DivergentIntegral(
                f"xi -> 0 end diverges: decay exponent {d:.3f}, u = {u} "
                f"(need 2*min(d-1,0) - u > -1)")
        mw = cs.max_weight
    else:
        mw = 0.0
    grid, gw, Xi = _xi_grid(u, mw, tol)
    xis = np.concatenate([grid, -grid])
    fv = fourier_transform_batch(cs, xis, tol)
    dens = np.abs(fv) ** 2 * np.abs(xis) ** (-u)
    val = float(np.real(np.sum(gw * (dens[:len(grid)] + dens[len(grid):]))))
    # exponential decay of Fv (pole of v at distance 1 from the real axis)
    edge = max(dens[len(grid) - 1], dens[-1])
    tail = float(edge * Xi ** max(-u, 0.0)) / (4.0 * math.pi) * 2.0
    return NormValue("C_u", val, tail, params={"u": u},
                     meta={"Xi": Xi, "n_xi": len(xis)})


def kirillov_norm(v, u0: float, tol: float = None) -> NormValue:
    r"""\int |a|^{u0} |Fv(a)|^2 da -- the discrete-series bound surrogate.

    Identical to comp_norm with u = -u0 up to the sign convention."""
    if u0 >= 1.0:
        raise OutOfRange(f"kirillov_norm needs u0 < 1, got {u0}")
    nv = comp_norm(v, -u0, tol)
    return NormValue("kirillov", nv.value, nv.tailBound,
                     params={"u0": u0}, meta=nv.meta)


def triple_norm(v: SmoothVector, u: float, tol: float = None,
                method: str = "spectral") -> NormValue:
    r"""|||v|||_u^2 = \int_K || F(pi(k) v) ||^2_{xi^{-u}} dk, K-mass 2 pi.

    method="spectral": sum_m |c_m|^2 * K_MASS * ||v_m||_{C_u}^2
    (K-eigenvectors have constant-norm orbits).
    method="direct": trapezoid in theta over one full K-orbit -- exact
    for the finite trigonometric polynomial the orbit traces, and
    independent of the orthogonality argument.
    """
    tol = DEFAULT_TOL if tol is None else tol
    if method == "spectral":
        val = 0.0
        tail = 0.0
        for m, c in v.coeffs.items():
            nm = comp_norm(CayleySum.ktype(m, v.params.u), u, tol)
            val += abs(c) ** 2 * K_MASS * nm.value
            tail += abs(c) ** 2 * K_MASS * nm.tailBound
        return NormValue("triple", val, tail,
                         params={"u": u}, meta={"k_mass": K_MASS,
                                                "method": method})
    if method == "direct":
        weights = sorted(v.coeffs)
        spread = (weights[-1] - weights[0]) if weights else 0
        n_theta = 2 * spread + 4
        val = 0.0
        tail = 0.0
        for j in range(n_theta):
            th = K_MASS * j / n_theta
            nm = comp_norm(v.rotated(th).sampler, u, tol)
            val += nm.value * K_MASS / n_theta
            tail += nm.tailBound * K_MASS / n_theta
        return NormValue("triple", val, tail,
                         params={"u": u}, meta={"k_mass": K_MASS,
                                                "method": method,
                                                "n_theta": n_theta})
    raise OutOfRange(f"unknown triple_norm method {method!r}")


# ---------------------------------------------------------------------------
# Multiplier maps between models
# ---------------------------------------------------------------------------

def multiplier_map(v, source: ReprParams, target_u: float, case: str):
    """The three model-changing multipliers.

    case="exotic":  v in P(i lambda, +): multiply by (1+x^2)^{(i lam - u)/2};
        weight 2m -> 2m, lands in P(u, +).
    case="exotic1": v in P(i lambda, -): multiply additionally by
        ((1+xi)/(1-xi))^{1/2}; weight 2m-1 -> 2m, lands in P(u, +).
    case="exotic2": v in P(u, +), u real: multiply by (1+x^2)^{-mu/2}
        with mu = target_u - u in (-1-u, 0); weight 2m -> 2m.

    SmoothVector input is mapped exactly on coefficients; CayleySum input
    through exponent shifts.  Returns (sampler, target_params).
    """
    su = complex(source.u)
    if case in ("exotic", "exotic1"):
        if abs(su.real) > 1e-12:
            raise BadParameterRange(
                f"case {case} needs a unitary source (u = i*lambda), "
                f"got Re(u) = {su.real}")
        if not (-1.0 < target_u < 1.0):
            raise BadParameterRange(f"target u = {target_u} outside (-1,1)")
        want_parity = "+" if case == "exotic" else "-"
        if source.parity != want_parity:
            raise ParityMismatch(
                f"case {case} acts on parity {want_parity!r} sources")
        # (1+x^2)^{(i lam - u)/2} -> add (u - i lam)/2 to both exponents
        p = q = (target_u - su) / 2.0
        shift = 0
        if case == "exotic1":
            # ((1+xi)/(1-xi))^{1/2} raises the weight by one: 2m-1 -> 2m
            p, q, shift = p - 0.5, q + 0.5, 1
        tgt = ReprParams(target_u, "+")
    elif case == "exotic2":
        if source.parity != "+" or abs(su.imag) > 1e-12:
            raise BadParameterRange("case exotic2 acts on real-u P(u, +)")
        mu = target_u - su.real
        if not (-1.0 - su.real < mu < 0.0):
            raise BadParameterRange(
                f"mu = {mu:g} outside (-1-u, 0) for u = {su.real:g}")
        p = q = mu / 2.0
        shift = 0
        tgt = ReprParams(target_u, "+")
    else:
        raise BadParameterRange(f"unknown case {case!r}")

    if isinstance(v, SmoothVector):
        if v.params != source:
            raise BadParameterRange("v does not live in the declared source")
        return (SmoothVector(tgt, {m + shift: c for m, c in v.coeffs.items()}),
                tgt)
    if isinstance(v, CayleySum):
        return v.times_power(p, q), tgt
    raise TypeError("multiplier_map needs a SmoothVector or CayleySum")
