"""Weighted L^2 norms over the regions K N_{T1} A and their splits.

The minus region {0 < a <= a1, 0 <= t <= a^{-2} T1} is integrated by the
exact t-periodicity reduction: the inner t-range holds floor(T1/(p a^2))
full period cells plus one remainder cell, so the unbounded t-range near
a = 0 never appears in quadrature.  The plus region {a >= a1} is
bracketed through the rotation by the Weyl element (which trades (T, a)
for (-T, sqrt(T^2+1)/a)) and can also be integrated directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (EpsilonBarrier, MissingSymmetry, OutOfRange,
                     UnboundedOmega)
from .fourier import fourier_transform_batch
from .group import K_MASS
from .norms import triple_norm
from .principal import SmoothVector
from .quadrature import DEFAULT_TOL, _gl_rule, gauss_panels

A_MIN = 1e-4        # hard lower cutoff in a for region quadrature
MAX_SEGMENTS = 2000  # floor-constant segments resolved exactly


@dataclass
class SymmetryFlags:
    hasPeriod: bool = False
    hasWeyl: bool = False


@dataclass
class RegionSpec:
    T1: float
    eps: float
    period: int = 1
    a1: float = 1.0
    side: str = "minus"

    def __post_init__(self):
        if self.period < 1:
            raise OutOfRange("period must be a positive integer")
        if self.a1 <= 0:
            raise OutOfRange("a1 must be positive")
        if self.side not in ("minus", "plus", "full"):
            raise OutOfRange(f"unknown side {self.side!r}")


class ConstantFunction:
    """f == c on all of G; the closed-form oracle for region norms."""

    k_order = 0

    def __init__(self, c: float = 1.0, period: int = 1):
        self.c = c
        self.period = period
        self.flags = SymmetryFlags(hasPeriod=True, hasWeyl=True)

    def value(self, theta, a, t):
        shape = np.broadcast(np.asarray(theta), np.asarray(a),
                             np.asarray(t)).shape
        return np.full(shape, self.c, dtype=complex)

    def ksq(self, avals, ts, tol=None):
        avals = np.atleast_1d(np.asarray(avals, dtype=float))
        return np.full(avals.shape, K_MASS * self.c ** 2)

    def cell_integral(self, avals, t_lo, t_hi, tol=None, th=None):
        avals = np.atleast_1d(np.asarray(avals, dtype=float))
        width = np.broadcast_to(
            np.asarray(t_hi, dtype=float) - np.asarray(t_lo, dtype=float),
            avals.shape)
        kmass = K_MASS if th is None else th[1] - th[0]
        return kmass * self.c ** 2 * width


class WhittakerModel:
    """f(k a n_t) = <pi(a n_t) tau, pi(k^{-1}) v> as a region-norm
    integrand.  The K integral is exact (K-types are orthogonal), and
    partial-period t-integrals close in elementary phases.

    Weyl symmetry |f(xw)| = |f(x)| holds for genuine automorphic data
    but not for an arbitrary model pair (tau, v); it is asserted by
    flag, never derived.
    """

    def __init__(self, tau, v: SmoothVector, assert_weyl: bool = False,
                 tol: float = None):
        self.tau = tau
        self.v = v
        self.tol = DEFAULT_TOL if tol is None else tol
        self.period = tau.period
        self.u = complex(tau.params.u)
        self.flags = SymmetryFlags(hasPeriod=True, hasWeyl=assert_weyl)
        self.ms = sorted(v.coeffs)
        self.cm = np.array([v.coeffs[m] for m in self.ms], dtype=complex)
        self.k_order = max((abs(m) for m in self.ms), default=0)
        items = sorted(tau.coeffs.items())
        self.ns = np.array([j for j, _ in items]) / self.period
        self.bs = np.array([b for _, b in items], dtype=complex)
        self._amp_cache = {}

    def _amplitudes(self, avals):
        """A[i_m, i_a, i_n] = Fv_m(-n a^{-2}) b_n, one transform batch
        per K-type."""
        from .principal import CayleySum
        avals = np.asarray(avals, dtype=float)
        key = avals.tobytes()
        if key in self._amp_cache:
            return self._amp_cache[key]
        ua, idx = np.unique(avals, return_inverse=True)
        xi = (-np.outer(1.0 / ua ** 2, self.ns)).ravel()
        out = np.empty((len(self.ms), len(avals), len(self.ns)),
                       dtype=complex)
        for i, m in enumerate(self.ms):
            cs = CayleySum.ktype(m, self.v.params.u)
            fv = fourier_transform_batch(cs, xi, self.tol)
            out[i] = fv.reshape(len(ua), len(self.ns))[idx]
        if len(self._amp_cache) > 64:
            self._amp_cache.clear()
        self._amp_cache[key] = out
        return out

    def _fm(self, a_flat, t_flat):
        """Per-K-type Whittaker values f_m(a n_t), shape (m, pts)."""
        amp = self._amplitudes(a_flat) * self.bs[None, None, :]
        phase = np.exp(-2j * math.pi * np.outer(t_flat, self.ns))
        return (a_flat ** (-1.0 - self.u)) * np.einsum(
            "mpn,pn->mp", amp, phase)

    def value(self, theta, a, t):
        """f at k_theta a n_t; arrays broadcast together."""
        theta, a, t = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(a, dtype=float),
            np.asarray(t, dtype=float))
        fm = self._fm(a.ravel(), t.ravel())
        kph = np.array([np.exp(-1j * m * theta.ravel()) for m in self.ms])
        return np.einsum("m,mp,mp->p", self.cm, kph, fm).reshape(a.shape)

    def ksq(self, avals, ts, tol=None):
        r"""\int_K |f(k a n_t)|^2 dk pointwise; K-types are orthogonal,
        so the theta integral collapses to 2 pi sum_m |c_m f_m|^2."""
        avals = np.atleast_1d(np.asarray(avals, dtype=float))
        ts = np.broadcast_to(np.asarray(ts, dtype=float), avals.shape)
        fm = self._fm(avals.ravel(), ts.ravel())
        return K_MASS * np.einsum(
            "m,mp->p", np.abs(self.cm) ** 2, np.abs(fm) ** 2)

    def cell_integral(self, avals, t_lo, t_hi, tol=None, th=None):
        r"""\int \int_{t_lo}^{t_hi} |f(k a n_t)|^2 dt dk over theta in
        ``th`` (default all of K).  Both integrals close exactly:
        a^{-2-2u0} sum_{m,m'} c_m conj(c_{m'}) Phi_K(m'-m)
        sum_{n,n'} A conj(A) Phi_t(n-n')."""
        avals = np.atleast_1d(np.asarray(avals, dtype=float))
        t_lo = np.broadcast_to(np.asarray(t_lo, dtype=float), avals.shape)
        t_hi = np.broadcast_to(np.asarray(t_hi, dtype=float), avals.shape)
        amp = self._amplitudes(avals) * self.bs[None, None, :]
        dn = self.ns[:, None] - self.ns[None, :]
        # Phi_t(d) = \int e^{-2 pi i t d} dt over [lo, hi]
        z = -2j * math.pi * dn[None, :, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            phi = (np.exp(z * t_hi[:, None, None])
                   - np.exp(z * t_lo[:, None, None])) / z
        width = (t_hi - t_lo)[:, None, None]
        phi = np.where(dn[None, :, :] == 0, width + 0j, phi)
        mm = np.array(self.ms, dtype=float)
        dm = mm[None, :] - mm[:, None]  # m' - m from e^{-i(m-m')theta}
        if th is None:
            phik = np.where(dm == 0, 2.0 * math.pi, 0.0) + 0j
        else:
            zk = 1j * dm
            with np.errstate(divide="ignore", invalid="ignore"):
                phik = (np.exp(zk * th[1]) - np.exp(zk * th[0])) / zk
            phik = np.where(dm == 0, th[1] - th[0] + 0j, phik)
        w_mm = (self.cm[:, None] * np.conj(self.cm)[None, :]) * phik
        pair = np.einsum("mpn,qpk,pnk,mq->p",
                         amp, np.conj(amp), phi, w_mm).real
        u0 = self.u.real
        return (avals ** (-2.0 - 2.0 * u0)) * pair


def _require(flag: bool, what: str):
    if not flag:
        raise MissingSymmetry(f"operation requires the {what} flag")


def _segment_edges(T1, a1, period):
    """Yield floor-constant segments (lo, hi, floor_value) of (0, a1],
    top down, stopping at A_MIN or after MAX_SEGMENTS of them."""
    Tabs = abs(T1)
    j = int(math.floor(Tabs / (period * a1 ** 2)))
    hi = a1
    for _ in range(MAX_SEGMENTS):
        b = math.sqrt(Tabs / (period * (j + 1))) if Tabs > 0 else 0.0
        lo = max(b, A_MIN)
        if hi > lo:
            yield lo, hi, j
        if b <= A_MIN:
            return
        hi, j = b, j + 1


def _minus_value(model, T1, a1, eps, kind, tol):
    """kind: 'exact' | 'lower' | 'upper' (the floor-sandwich bounds).

    Segments are processed in batches from the top down; once a batch
    contributes nothing at working precision (rapid cuspidal decay in a)
    the remaining range is folded into the smooth-surrogate piece.
    """
    p = model.period
    xg, wg = _gl_rule(16)
    segs = list(_segment_edges(T1, a1, p))
    val = 0.0
    a_cut = A_MIN
    batch = 64
    for b0 in range(0, len(segs), batch):
        chunk = segs[b0:b0 + batch]
        a_nodes, weights, floors = [], [], []
        for lo_e, hi_e, flv in chunk:
            mid, half = 0.5 * (hi_e + lo_e), 0.5 * (hi_e - lo_e)
            a_nodes.append(mid + half * xg)
            weights.append(half * wg)
            floors.append(np.full(len(xg), flv))
        a = np.concatenate(a_nodes)
        w = np.concatenate(weights)
        fl = np.concatenate(floors)
        rem = abs(T1) / a ** 2 - fl * p
        P = model.cell_integral(a, 0.0, float(p), tol)
        if kind == "exact":
            if T1 >= 0:
                R = model.cell_integral(a, 0.0, rem, tol)
            else:
                R = model.cell_integral(a, p - rem, float(p), tol)
            inner = fl * P + R
        elif kind == "lower":
            inner = fl * P
        else:
            inner = (fl + 1) * P
        piece = float(np.sum(w * a ** (2.0 + eps) * inner / a))
        val += piece
        a_cut = chunk[-1][0]
        if abs(piece) < 1e-16 * max(abs(val), 1e-300):
            return val  # integrand dead; deeper a contributes nothing
    if a_cut > A_MIN * (1 + 1e-12):
        lg, lw = gauss_panels(math.log(A_MIN), math.log(a_cut),
                              max(8, int(6 * math.log(a_cut / A_MIN))), 16)
        ab, wb = np.exp(lg), lw
        Pb = model.cell_integral(ab, 0.0, float(p), tol)
        x = abs(T1) / (p * ab ** 2)  # smooth floor surrogate, err <= 1 cell
        if kind == "lower":
            x = np.maximum(x - 1.0, 0.0)
        elif kind == "upper":
            x = x + 1.0
        val += float(np.sum(wb * ab ** (2.0 + eps) * x * Pb))
    return val


def region_norm_minus(f, spec: RegionSpec, tol: float = None) -> float:
    """||f||^2 over {0 < a <= a1, 0 <= T <= T1} with weight a^eps da/a dT dk,
    via the exact floor + remainder-cell reduction."""
    tol = DEFAULT_TOL if tol is None else tol
    _require(f.flags.hasPeriod, "period")
    if spec.side != "minus":
        raise OutOfRange("region_norm_minus needs spec.side == 'minus'")
    return _minus_value(f, spec.T1, spec.a1, spec.eps, "exact", tol)


def floor_sandwich(f, spec: RegionSpec, tol: float = None):
    """The two floor-expression bounds around the minus-region norm."""
    tol = DEFAULT_TOL if tol is None else tol
    _require(f.flags.hasPeriod, "period")
    return (_minus_value(f, spec.T1, spec.a1, spec.eps, "lower", tol),
            _minus_value(f, spec.T1, spec.a1, spec.eps, "upper", tol))


def region_norm_plus_via_weyl(f, spec: RegionSpec, tol: float = None):
    """Two-sided bracket for ||f||^2 over {a >= a1, 0 <= T <= T1},
    transported by the Weyl flip to minus-region norms at
    (-T1, 1/a1, -eps) and (-T1, sqrt(T1^2+1)/a1, -eps)."""
    tol = DEFAULT_TOL if tol is None else tol
    _require(f.flags.hasPeriod, "period")
    _require(f.flags.hasWeyl, "Weyl-symmetry")
    T1, a1, eps = spec.T1, spec.a1, spec.eps
    s = math.sqrt(T1 ** 2 + 1.0)
    inner = _minus_value(f, -T1, 1.0 / a1, -eps, "exact", tol)
    outer = _minus_value(f, -T1, s / a1, -eps, "exact", tol)
    if eps >= 0:
        return {"lower": inner, "upper": s ** eps * outer}
    return {"lower": s ** eps * inner, "upper": outer}


def region_norm_plus_direct(f, spec: RegionSpec, tol: float = None) -> float:
    """Direct quadrature over the plus region {a >= a1, 0 <= T <= T1}:
    in K a n_t coordinates, a^{2+eps} (floor + remainder) da/a again,
    with the a-range extended outward until the integrand dies."""
    tol = DEFAULT_TOL if tol is None else tol
    _require(f.flags.hasPeriod, "period")
    p = f.period
    Tabs = abs(spec.T1)
    xg, wg = _gl_rule(16)

    def chunk(lo, hi):
        n_pan = max(6, int(8 * math.log(hi / lo)))
        lg, lw = gauss_panels(math.log(lo), math.log(hi), n_pan, 16)
        a = np.exp(lg)
        fl = np.floor(Tabs / (p * a ** 2))
        rem = Tabs / a ** 2 - fl * p
        P = f.cell_integral(a, 0.0, float(p), tol)
        if spec.T1 >= 0:
            R = f.cell_integral(a, 0.0, rem, tol)
        else:
            R = f.cell_integral(a, p - rem, float(p), tol)
        dens = a ** (2.0 + spec.eps) * (fl * P + R)
        return float(np.sum(lw * dens)), float(dens[-1])

    a_lo, a_hi = spec.a1, max(4.0 * spec.a1, 8.0)
    total, edge = chunk(a_lo, a_hi)
    while a_hi < 1e4:
        piece, edge = chunk(a_hi, 2.0 * a_hi)
        total += piece
        a_hi *= 2.0
        if abs(piece) < 1e-3 * tol * max(abs(total), 1e-300):
            break
    return total


def region_norm_plus_weyl_exact(f, spec: RegionSpec,
                                tol: float = None) -> float:
    """The plus-region norm computed exactly through the Weyl flip:
    the transported region is {-T1 <= T' <= 0, a' <= sqrt(T'^2+1)/a1}
    with weight (sqrt(T'^2+1))^eps (a')^{-eps} dT' da'/a' dk.  Exact for
    genuinely Weyl-symmetric f; for asserted symmetry it is the value
    the symmetrized model would have."""
    tol = DEFAULT_TOL if tol is None else tol
    _require(f.flags.hasPeriod, "period")
    _require(f.flags.hasWeyl, "Weyl-symmetry")
    T1, a1, eps = spec.T1, spec.a1, spec.eps
    Tg, Tw = gauss_panels(-T1, 0.0, max(8, int(4 * T1) + 4), 12)
    total = 0.0
    a_rows, t_rows, w_rows = [], [], []
    for Tp, wT in zip(Tg, Tw):
        lim = math.sqrt(Tp ** 2 + 1.0) / a1
        if lim <= A_MIN * (1 + 1e-12):
            continue
        lg, lw = gauss_panels(math.log(A_MIN), math.log(lim),
                              max(8, int(4 * math.log(lim / A_MIN))), 8)
        ap = np.exp(lg)
        a_rows.append(ap)
        t_rows.append(Tp / ap ** 2)
        w_rows.append(wT * lw * (Tp ** 2 + 1.0) ** (0.5 * eps)
                      * ap ** (-eps))
    a_all = np.concatenate(a_rows)
    t_all = np.concatenate(t_rows)
    w_all = np.concatenate(w_rows)
    vals = f.ksq(a_all, t_all, tol)
    return float(np.sum(w_all * vals))


def region_norm_full(f, spec: RegionSpec, tol: float = None) -> float:
    """||f||^2_{T1, eps} over all of K N_{T1} A: minus part (a <= 1)
    plus the plus part (a >= 1), the latter through the Weyl flip when
    the symmetry flag is present and by direct quadrature otherwise."""
    tol = DEFAULT_TOL if tol is None else tol
    _require(f.flags.hasPeriod, "period")
    sub_m = RegionSpec(spec.T1, spec.eps, spec.period, 1.0, "minus")
    sub_p = RegionSpec(spec.T1, spec.eps, spec.period, 1.0, "plus")
    if f.flags.hasWeyl:
        plus = region_norm_plus_weyl_exact(f, sub_p, tol)
    else:
        plus = region_norm_plus_direct(f, sub_p, tol)
    return region_norm_minus(f, sub_m, tol) + plus


def main_constant(T1: float, eps: float, period: int) -> float:
    """The constructive constant: c = 1 + p (1+T1^2)/T1 makes
    floor(T1/(p a^2)) + 1 <= c T1/(p a^2) on 0 < a <= sqrt(1+T1^2);
    the full constant is c * max(2, 1 + (sqrt(1+T1^2))^eps)."""
    c = 1.0 + period * (1.0 + T1 ** 2) / T1
    return c * max(2.0, 1.0 + math.sqrt(1.0 + T1 ** 2) ** eps)


def main_bound_check(f, T1: float, eps: float, tol: float = None) -> dict:
    r"""||f||^2_{T1,eps} <= c_{T1,eps,p} \int_K \int_0^{sqrt(1+T1^2)}
    (a^eps + a^{-eps}) \int_0^p |f|^2 dt da/a dk, constant built exactly
    per the constructive proof."""
    tol = DEFAULT_TOL if tol is None else tol
    _require(f.flags.hasPeriod, "period")
    _require(f.flags.hasWeyl, "Weyl-symmetry")
    p = f.period
    lhs = region_norm_full(f, RegionSpec(T1, eps, p), tol)
    s = math.sqrt(1.0 + T1 ** 2)
    lg, lw = gauss_panels(math.log(A_MIN), math.log(s),
                          max(12, int(6 * math.log(s / A_MIN))), 16)
    a = np.exp(lg)
    P = f.cell_integral(a, 0.0, float(p), tol)
    integral = float(np.sum(lw * (a ** eps + a ** (-eps)) * P))
    rhs = main_constant(T1, eps, p) * integral
    return {"lhs": lhs, "rhs": rhs, "margin": rhs - lhs,
            "constant": main_constant(T1, eps, p), "ok": lhs <= rhs}


def main2_check(tau, v: SmoothVector, T1: float, eps: float,
                tol: float = None) -> dict:
    """||f||_{T1,eps} against the triple norm of v at -|eps|/2 (unitary
    principal type) or -u - |eps|/2 (complementary type)."""
    tol = DEFAULT_TOL if tol is None else tol
    if eps == 0:
        raise EpsilonBarrier(
            "the restriction-norm bound degenerates at eps = 0; "
            "operator norms blow up as eps -> 0")
    u = complex(tau.params.u)
    if abs(u.imag) > 0 and abs(u.real) > 1e-12:
        raise OutOfRange("tau must be unitary-principal or complementary")
    target = -abs(eps) / 2.0 if abs(u.real) < 1e-12 \
        else -u.real - abs(eps) / 2.0
    model = WhittakerModel(tau, v, assert_weyl=True, tol=tol)
    lhs = region_norm_full(model, RegionSpec(T1, eps, tau.period), tol)
    rhs = triple_norm(v, target, tol).value
    return {"lhs": lhs, "rhsNorm": rhs,
            "ratio": math.sqrt(lhs / rhs) if rhs > 0 else math.inf,
            "target_u": target}


def omega_a_norm(f, omega, eps: float, tol: float = None) -> float:
    r"""\int_{Omega A} |f|^2 a^eps da/a dT dk for a compact
    omega = (theta_lo, theta_hi, T_lo, T_hi) in K x N.

    For each a the T-window maps to the t-window [T_lo/a^2, T_hi/a^2],
    whose unbounded growth as a -> 0 is absorbed by the same periodicity
    reduction the region norms use: the window holds whole period cells
    plus two partial ones.
    """
    tol = DEFAULT_TOL if tol is None else tol
    th_lo, th_hi, T_lo, T_hi = omega
    if not all(map(math.isfinite, (th_lo, th_hi, T_lo, T_hi))):
        raise UnboundedOmega("omega must be a bounded subset of K x N")
    th = (float(th_lo), float(th_hi))
    p = f.period

    def window(a):
        """G(t1) - G(t0) with G(t) = floor(t/p) P + cell(0, t mod p)."""
        P = f.cell_integral(a, 0.0, float(p), tol, th=th)

        def G(tv):
            cells = np.floor(tv / p)
            frac = tv - cells * p
            return cells * P + f.cell_integral(a, 0.0, frac, tol, th=th)

        return G(T_hi / a ** 2) - G(T_lo / a ** 2)

    def a_chunk(lo, hi):
        # split at the a-positions where either t-window edge crosses a
        # period cell (the floor kinks); only the first ~1e3 matter
        edges = {math.log(lo), math.log(hi)}
        for Tv in (T_lo, T_hi):
            if Tv == 0.0:
                continue
            for j in range(1, 1025):
                b = math.sqrt(abs(Tv) / (p * j))
                if lo < b < hi:
                    edges.add(math.log(b))
        edges = sorted(edges)
        xg, wg = _gl_rule(8)
        nodes, wts = [], []
        for e0, e1 in zip(edges[:-1], edges[1:]):
            width = e1 - e0
            n_sub = max(1, int(math.ceil(width / 0.15)))
            sub = np.linspace(e0, e1, n_sub + 1)
            for s0, s1 in zip(sub[:-1], sub[1:]):
                mid, half = 0.5 * (s1 + s0), 0.5 * (s1 - s0)
                nodes.append(mid + half * xg)
                wts.append(half * wg)
        lg = np.concatenate(nodes)
        lw = np.concatenate(wts)
        a = np.exp(lg)
        dens = a ** (2.0 + eps) * window(a)
        return float(np.sum(lw * dens)), float(dens[-1])

    total, edge = a_chunk(A_MIN, 8.0)
    hi = 8.0
    while hi < 1e4:
        piece, edge = a_chunk(hi, 2.0 * hi)
        total += piece
        hi *= 2.0
        if abs(piece) < 1e-3 * tol * max(abs(total), 1e-300):
            break
    return total


def eisenstein_scenario(tau, lam: float, eps: float, T1: float,
                        tol: float = None) -> dict:
    """Restriction-norm comparison run for Eisenstein-type (divisor-sum) coefficient
    tables: verify partial-sum summability on the materialized range,
    then fit the restriction-norm constant."""
    tol = DEFAULT_TOL if tol is None else tol
    from .errors import ConstantTermPresent
    if 0 in tau.coeffs:
        raise ConstantTermPresent("Eisenstein scenario needs b_0 = 0")
    p = tau.period
    ks = sorted({abs(j) / p for j in tau.coeffs})
    partial = []
    acc = 0.0
    for k in ks:
        for j in tau.coeffs:
            if abs(abs(j) / p - k) < 1e-15:
                acc += k ** (-0.5 * eps - 1.0) * abs(tau.coeffs[j]) ** 2
        partial.append(acc)
    # summability: tail increments must decay (log-log slope < 0)
    tail_ok = True
    if len(partial) >= 8:
        inc = np.diff(partial[len(partial) // 2:])
        tail_ok = bool(inc[-1] < inc[0]) if len(inc) > 1 else True
    v = SmoothVector.single(0, -1j * lam, "+")
    rep = main2_check(tau, v, T1, eps, tol)
    rep.update(partial_sum=partial[-1], summable=tail_ok, k_max=ks[-1])
    return rep
