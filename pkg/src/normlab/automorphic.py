"""Periodic distributions, Fourier-Whittaker evaluation, and the exact
L^2 identities on the upper-triangular quotient P_0 / N_p.

A distribution tau = sum* b_n exp(2 pi i n x) with n in (1/p) Z, n != 0,
paired against a smooth vector v of the dual principal series, yields

    f(a n_t) = a^{-1-u} sum_n  Fv(-n a^{-2}) b_n exp(-2 pi i t n),

whose weighted L^2 norms over 0 < a < a1, 0 <= t < p admit an exact
spectral form: a coefficient sum against the weighted Fourier-transform
integral of v.  Both sides are implemented and cross-checked.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConstantTermPresent, DivergentIntegral,
                     HypothesisUnverifiable, TailNotControlled)
from .fourier import fourier_transform_batch
from .group import KanCoords
from .principal import CayleySum, ReprParams, SmoothVector
from .quadrature import DEFAULT_TOL, gauss_panels, tanh_sinh_map

TWO_PI = 2.0 * math.pi


@dataclass
class PeriodicDistribution:
    """tau = sum b_{j/p} exp(2 pi i (j/p) x), keyed by the integer
    numerator j != 0.  Optional growth metadata |b_n| <= C |n|^sigma
    declares how the (unmaterialized) tail behaves."""

    period: int
    coeffs: dict
    params: ReprParams
    growth_sigma: float = None
    growth_C: float = None

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be a positive integer")
        if 0 in self.coeffs:
            raise ConstantTermPresent(
                "b_0 must be absent for cuspidal data")
        if self.growth_C is not None:
            bad = [j for j, b in self.coeffs.items()
                   if abs(b) > self.growth_C
                   * abs(j / self.period) ** self.growth_sigma * (1 + 1e-12)]
            if bad:
                raise ValueError(
                    f"declared growth bound violated at numerators {bad[:5]}")

    @property
    def is_finite(self) -> bool:
        return self.growth_C is None

    def frequencies(self):
        """Sorted frequencies n = j / p with their coefficients."""
        return sorted((j / self.period, b) for j, b in self.coeffs.items())

    def max_numerator(self) -> int:
        return max((abs(j) for j in self.coeffs), default=0)

    def to_file(self, path):
        u = complex(self.params.u)
        head = {"period": self.period, "u0": u.real, "u1": u.imag,
                "parity": self.params.parity,
                "growth_sigma": self.growth_sigma,
                "growth_C": self.growth_C}
        records = [[j, complex(b).real, complex(b).imag]
                   for j, b in sorted(self.coeffs.items())]
        with open(path, "w") as fh:
            json.dump({"header": head, "records": records}, fh, indent=1)

    @classmethod
    def from_file(cls, path) -> "PeriodicDistribution":
        with open(path) as fh:
            data = json.load(fh)
        h = data["header"]
        coeffs = {int(j): complex(re, im) for j, re, im in data["records"]}
        return cls(int(h["period"]), coeffs,
                   ReprParams(complex(h["u0"], h["u1"]), h["parity"]),
                   h.get("growth_sigma"), h.get("growth_C"))


@dataclass
class WhittakerEvaluation:
    coords: KanCoords
    value: complex
    truncation: int
    tailEstimate: float

    @property
    def tail_ok(self) -> bool:
        return self.tailEstimate < 0.01 * max(abs(self.value), 1e-300)


def _dual_sampler(v) -> CayleySum:
    return v.sampler if isinstance(v, SmoothVector) else v


def whittaker_eval(tau: PeriodicDistribution, v, coords: KanCoords,
                   tol: float = None) -> WhittakerEvaluation:
    """f(k a n_t) = <pi(k a n_t) tau, v> through the Whittaker expansion.

    A nonzero K-part is absorbed into the vector first:
    <pi(k a n_t) tau, v> = <pi(a n_t) tau, pi(k^{-1}) v>, which for a
    finite K-type expansion is an exact phase change c_m -> e^{-i m th} c_m.
    """
    tol = DEFAULT_TOL if tol is None else tol
    if abs(coords.theta) > 1e-15:
        if not isinstance(v, SmoothVector):
            raise TypeError("K-part absorption needs a SmoothVector")
        v = v.rotated(-coords.theta)
    cs = _dual_sampler(v)
    u = complex(tau.params.u)
    a, t, p = coords.a, coords.t, tau.period

    items = sorted(tau.coeffs.items())
    if not items:
        return WhittakerEvaluation(coords, 0.0 + 0.0j, 0, 0.0)
    js = np.array([j for j, _ in items])
    bs = np.array([b for _, b in items], dtype=complex)
    ns = js / p
    xi = -ns / a ** 2
    fv = fourier_transform_batch(cs, xi, tol)
    value = a ** (-1.0 - u) * np.sum(fv * bs * np.exp(-2j * math.pi * t * ns))

    tail = 0.0
    if not tau.is_finite:
        tail = _coefficient_tail_estimate(tau, cs, a, fv, ns, tol)
        tail *= abs(a ** (-1.0 - u))
    return WhittakerEvaluation(coords, complex(value),
                               int(tau.max_numerator()), float(tail))


def _coefficient_tail_estimate(tau, cs, a, fv, ns, tol):
    """Bound sum_{|n| > n_max} |b_n| |Fv(-n/a^2)| from the declared
    growth and the measured exponential decay of the transform."""
    n_edge = float(np.max(np.abs(ns)))
    probes = np.array([n_edge, 1.25 * n_edge]) / a ** 2
    pv = np.abs(fourier_transform_batch(cs, -probes, tol))
    if pv[0] < 1e-280:
        return 0.0
    c = -(np.log(pv[1]) - np.log(pv[0])) / (probes[1] - probes[0])
    sigma, C = tau.growth_sigma, tau.growth_C
    step = 1.0 / (tau.period * a ** 2)
    r = math.exp(-c * step) * (1.0 + max(sigma, 0.0) / max(n_edge, 1.0))
    if c <= 0 or r >= 1.0:
        raise TailNotControlled(
            f"coefficient growth (sigma={sigma}) not beaten by measured "
            f"transform decay rate {c:.3g}")
    edge_term = C * n_edge ** sigma * pv[0]
    return 2.0 * edge_term * r / (1.0 - r)


def t_average_sq(tau: PeriodicDistribution, v, a: float,
                 tol: float = None) -> float:
    r"""\int_0^p |f(a n_t)|^2 dt by the coefficient-sum (Parseval) form:
    p * sum_n a^{-2-2u0} |b_n|^2 |Fv(-n a^{-2})|^2."""
    tol = DEFAULT_TOL if tol is None else tol
    cs = _dual_sampler(v)
    u0 = tau.params.u0
    items = sorted(tau.coeffs.items())
    if not items:
        return 0.0
    ns = np.array([j for j, _ in items]) / tau.period
    bs = np.array([b for _, b in items], dtype=complex)
    fv = fourier_transform_batch(cs, -ns / a ** 2, tol)
    return float(tau.period * a ** (-2.0 - 2.0 * u0)
                 * np.sum(np.abs(bs) ** 2 * np.abs(fv) ** 2))


def coeff_sum(tau: PeriodicDistribution, eps: float, u0: float, k: float,
              sign: int) -> float:
    """sum_{1/p <= n <= k} n^{eps/2 - 1 - u0} |b_{sign*n}|^2.r"""
    p = tau.period
    total = 0.0
    for j, b in tau.coeffs.items():
        if sign * j > 0 and abs(j) / p <= k:
            total += (abs(j) / p) ** (0.5 * eps - 1.0 - u0) * abs(b) ** 2
    return total


# ---------------------------------------------------------------------------
# Weighted transform integrals  \int_lo^inf a^p |Fv(sign a)|^2 da
# ---------------------------------------------------------------------------

def weighted_fv_integral(v, p: float, lo: float, sign: int,
                         tol: float = None) -> float:
    r"""\int_lo^infty a^p |Fv(sign * a)|^2 da with endpoint care at 0."""
    tol = DEFAULT_TOL if tol is None else tol
    cs = _dual_sampler(v)
    if isinstance(cs, CayleySum):
        d = cs.min_decay
        mw = cs.max_weight
        if lo == 0.0 and p + 2.0 * min(d - 1.0, 0.0) <= -1.0:
            raise DivergentIntegral(
                f"transform-integral side diverges at a -> 0 "
                f"(p={p}, decay {d:.3f})")
    else:
        mw = 0.0
    Xi = max(mw / TWO_PI + 4.5, lo + 4.0)
    pieces = []
    if lo < 1.0:
        x0, w0 = tanh_sinh_map(lo, 1.0, 6 if tol >= 1e-8 else 7)
        pieces.append((x0, w0))
    start = max(lo, 1.0)
    if start < Xi:
        pieces.append(gauss_panels(start, Xi, max(4, int(Xi - start) + 1), 16))
    grid = np.concatenate([x for x, _ in pieces])
    gw = np.concatenate([w for _, w in pieces])
    fv = fourier_transform_batch(cs, sign * grid, tol)
    dens = np.abs(fv) ** 2 * grid ** p
    val = float(np.sum(gw * dens))
    tail = float(dens[-1]) / (2.0 * TWO_PI)
    return val + tail


def p0_weighted_norm(tau: PeriodicDistribution, v, a1, eps: float,
                     tol: float = None, method: str = "spectral") -> float:
    r"""\int_0^{a1} \int_0^p |f(a n_t)|^2 dt a^eps da/a.

    method="spectral": the exact identity -- (p/2) sum_{+-} of the
    weighted transform integral against the running coefficient sum
    (with the n <= a * a1^2 cutoff; closed boundary).
    method="geometric": direct two-dimensional quadrature of |f|^2.
    """
    tol = DEFAULT_TOL if tol is None else tol
    if not tau.coeffs:
        return 0.0
    if not tau.is_finite:
        # refuse extrapolation: the spectral sum needs every coefficient
        # up to the cutoff, and the cutoff is unbounded in a
        conv = 0.5 * eps - 1.0 - tau.params.u0 + 2.0 * tau.growth_sigma
        if conv >= -1.0:
            raise DivergentIntegral(
                f"coefficient-sum side diverges: growth exponent "
                f"{conv:.3f} >= -1")
        raise TailNotControlled(
            "infinite coefficient model: materialize a finite range first")
    if method == "spectral":
        return _p0_spectral(tau, v, a1, eps, tol)
    if method == "geometric":
        return _p0_geometric(tau, v, a1, eps, tol)
    raise ValueError(f"unknown method {method!r}")


def _p0_spectral(tau, v, a1, eps, tol):
    u0 = tau.params.u0
    p = tau.period
    cs = _dual_sampler(v)
    total = 0.0
    for sign in (+1, -1):
        ns = sorted(abs(j) / p for j in tau.coeffs if sign * j > 0)
        if not ns:
            continue
        if math.isinf(a1):
            s_full = coeff_sum(tau, eps, u0, ns[-1], sign)
            # Fv(-sign * a) against the full sum, integrated from 0
            total += 0.5 * p * s_full * weighted_fv_integral(
                cs, -0.5 * eps + u0, 0.0, -sign, tol)
            continue
        # breakpoints where the cutoff n <= a * a1^2 admits a new term
        lo = 1.0 / (a1 ** 2 * p)
        edges = [n / a1 ** 2 for n in ns]
        for i, n_i in enumerate(ns):
            seg_lo = edges[i]
            partial = coeff_sum(tau, eps, u0, n_i, sign)
            if i + 1 < len(ns):
                total += 0.5 * p * partial * _segment_integral(
                    cs, -0.5 * eps + u0, seg_lo, edges[i + 1], -sign, tol)
            else:
                total += 0.5 * p * partial * weighted_fv_integral(
                    cs, -0.5 * eps + u0, seg_lo, -sign, tol)
    return total


def _segment_integral(cs, pw, lo, hi, sign, tol):
    r"""\int_lo^hi a^pw |Fv(sign a)|^2 da on a finite segment."""
    if hi <= lo:
        return 0.0
    if lo == 0.0 or pw < 0:
        grid, gw = tanh_sinh_map(lo, hi, 6 if tol >= 1e-8 else 7)
    else:
        grid, gw = gauss_panels(lo, hi, max(4, int(2 * (hi - lo)) + 1), 16)
    fv = fourier_transform_batch(cs, sign * grid, tol)
    return float(np.sum(gw * np.abs(fv) ** 2 * grid ** pw))


def _p0_geometric(tau, v, a1, eps, tol):
    """Direct quadrature of the double integral; t by trapezoid (exact
    for the finite trigonometric polynomial), a by panels in log a."""
    cs = _dual_sampler(v)
    u = complex(tau.params.u)
    p = tau.period
    items = sorted(tau.coeffs.items())
    js = np.array([j for j, _ in items])
    bs = np.array([b for _, b in items], dtype=complex)
    ns = js / p
    n_min = np.min(np.abs(ns))
    # below a_lo the transform argument exceeds the decay range of Fv
    a_lo = math.sqrt(n_min / 12.0)
    if math.isinf(a1):
        u0 = u.real
        if eps - 2.0 + 2.0 * max(u0, 0.0) >= 0.0:
            raise DivergentIntegral(
                f"geometric side diverges as a -> infinity (eps={eps})")
        a_hi = 160.0
    else:
        a_hi = a1

    def block(lo, hi):
        """Integral over [lo, hi] in log a; returns (value, edge density)."""
        n_pan = max(8, int(12 * math.log(hi / lo)))
        lg, lw = gauss_panels(math.log(lo), math.log(hi), n_pan, 16)
        avals = np.exp(lg)
        # Fv at every (a, n) pair in one batch
        xi = (-np.outer(1.0 / avals ** 2, ns)).ravel()
        fv = fourier_transform_batch(cs, xi, tol).reshape(len(avals), len(ns))
        n_t = 4 * int(np.max(np.abs(js))) + 8
        tgrid = p * np.arange(n_t) / n_t
        phases = np.exp(-2j * math.pi * np.outer(tgrid, ns))  # (n_t, n_j)
        coef = fv * bs[None, :]                               # (n_a, n_j)
        fgrid = coef @ phases.T                               # (n_a, n_t)
        tmean = np.mean(np.abs(fgrid) ** 2, axis=1) * p
        amp = np.abs(avals ** (-1.0 - u)) ** 2
        dens = tmean * amp * avals ** eps   # integrand in log a
        return float(np.sum(lw * dens)), dens[-2:], avals[-2:]

    val, edge, apts = block(a_lo, a_hi)
    if math.isinf(a1):
        # extend outward until the fitted-slope tail is negligible; the
        # density need not be a clean power (the transform can vary
        # logarithmically near zero frequency), so the slope is refit
        # at each doubling rather than assumed
        while a_hi < 3000.0:
            slope = (math.log(edge[1]) - math.log(edge[0])) \
                / (math.log(apts[1]) - math.log(apts[0]))
            tail = edge[1] / max(-slope, 0.05)
            if tail < 1e-3 * tol * max(val, 1e-300) or edge[1] < 1e-280:
                break
            piece, edge, apts = block(a_hi, 2.0 * a_hi)
            val += piece
            a_hi *= 2.0
        slope = (math.log(edge[1]) - math.log(edge[0])) \
            / (math.log(apts[1]) - math.log(apts[0]))
        val += edge[1] / max(-slope, 0.05)
    return val


def l2p_bound_check(tau: PeriodicDistribution, v, eps: float, a1,
                    tol: float = None) -> dict:
    r"""Check the two-sided L^2 estimates on P_0/N_p.

    eps < 0: lhs <= C * sum_{+-} \int_{1/(a1^2 p)}^inf a^{-eps/2+u0}|Fv|^2,
    with C = (p/2) max of the (convergent) full coefficient sums.
    eps > 0: lhs <= C * a1^eps * p * sum_{+-} \int a^{u0} |Fv|^2, with C
    fitted as max_k S(k)/k^{eps/2} over the materialized support.
    """
    tol = DEFAULT_TOL if tol is None else tol
    u0 = tau.params.u0
    p = tau.period
    cs = _dual_sampler(v)
    lhs = p0_weighted_norm(tau, v, a1, eps, tol)
    lo = 0.0 if math.isinf(a1) else 1.0 / (a1 ** 2 * p)
    report = {"eps": eps, "a1": a1, "lhs": lhs}
    if eps < 0:
        n_max = tau.max_numerator() / p
        s_tot = coeff_sum(tau, eps, u0, n_max, +1) \
            + coeff_sum(tau, eps, u0, n_max, -1)
        C = 0.5 * p * s_tot
        integ = sum(weighted_fv_integral(cs, -0.5 * eps + u0, lo, s, tol)
                    for s in (+1, -1))
        rhs = C * integ
    elif eps > 0:
        ks = sorted({abs(j) / p for j in tau.coeffs})
        if len(ks) < 3:
            raise HypothesisUnverifiable(
                "need at least 3 support points to fit the k^{eps/2} "
                "growth constant")
        C = max((coeff_sum(tau, eps, u0, k, +1)
                 + coeff_sum(tau, eps, u0, k, -1)) / k ** (0.5 * eps)
                for k in ks)
        if math.isinf(a1):
            raise DivergentIntegral(
                "eps > 0 bound carries an a1^eps factor; a1 must be finite")
        integ = sum(weighted_fv_integral(cs, u0, lo, s, tol)
                    for s in (+1, -1))
        rhs = C * a1 ** eps * p * integ
    else:
        raise HypothesisUnverifiable("eps = 0 is outside both cases")
    report.update(rhs=rhs, constant=C,
                  ratio=lhs / rhs if rhs > 0 else math.inf,
                  ok=lhs <= rhs * (1.0 + tol))
    return report
