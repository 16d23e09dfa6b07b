import math

import mpmath
import numpy as np
import pytest

from normlab.errors import (BadParameterRange, DivergentIntegral, OutOfRange,
                            ParityMismatch, PoleParameter)
from normlab.norms import (comp_norm, g_normalizer, g_normalizer_closed,
                           intertwine_apply, intertwine_constant,
                           intertwine_pair, kirillov_norm, multiplier_map,
                           triple_norm)
from normlab.principal import CayleySum, ReprParams, SmoothVector, ktype_eval

C0_HALF = 5.244115108584236  # frozen: c_0 at u = 1/2, Gamma oracle


def _mp_c2m(m, u):
    u = mpmath.mpmathify(u)
    half = (u + 1) / 2
    return complex((-1) ** m * 2 ** (1 - u) * mpmath.pi * mpmath.gamma(u)
                   / (mpmath.gamma(half + m) * mpmath.gamma(half - m)))


def test_intertwine_constant_frozen_value():
    assert intertwine_constant(0, 0.5) == pytest.approx(C0_HALF, rel=1e-12)


@pytest.mark.parametrize("u", [0.3, 0.5, 0.7, 0.4 + 0.9j])
def test_intertwine_constant_against_mpmath(u):
    for m in (0, 1, 5, -3):
        got = complex(intertwine_constant(m, u))
        assert got == pytest.approx(_mp_c2m(abs(m), u), rel=1e-10)


def test_intertwine_constant_large_m_continuity():
    # the log-Gamma branch (m > 100) continues the direct branch smoothly
    u = 0.5
    r1 = intertwine_constant(100, u) / intertwine_constant(99, u)
    r2 = intertwine_constant(101, u) / intertwine_constant(100, u)
    assert abs(r2 / r1 - 1.0) < 0.05
    got = complex(intertwine_constant(128, u))
    assert got == pytest.approx(_mp_c2m(128, u), rel=1e-9)


def test_intertwine_constant_poles():
    for u in (0.0, -1.0, -2.0):
        with pytest.raises(PoleParameter):
            intertwine_constant(0, u)


@pytest.mark.parametrize("u,m", [(0.5, 0), (0.3, 1)])
def test_intertwine_apply_eigenvalue(u, m):
    xs = np.linspace(-2.0, 2.0, 9)
    av = intertwine_apply(SmoothVector.single(2 * m, u), u, xs)
    target = ktype_eval(2 * m, -u, "+", xs)
    ratios = av / target
    mean = np.mean(ratios)
    spread = float(np.max(np.abs(ratios - mean))) / abs(mean)
    assert spread < 1e-5
    assert mean == pytest.approx(intertwine_constant(m, u), rel=1e-5)


def test_intertwine_apply_range_guard():
    with pytest.raises(OutOfRange):
        intertwine_apply(SmoothVector.single(0, 1.5 + 0j), 1.5, 0.0)


def test_g_normalizer_special_values():
    assert g_normalizer(0.0) == 0.0
    assert g_normalizer(0.5) == pytest.approx(1.0, abs=1e-6)
    for u in (-0.3, 0.3, 0.6, -0.75):
        assert g_normalizer(u) == pytest.approx(g_normalizer_closed(u),
                                                rel=1e-8)
    with pytest.raises(OutOfRange):
        g_normalizer(1.0)


@pytest.mark.parametrize("u", [0.3, 0.6])
def test_intertwine_pair_spectral_vs_quadrature(u):
    lam = 0.7
    phi = SmoothVector(ReprParams(u, "+"), {0: 1.0, 2: 0.4})
    psi = SmoothVector(ReprParams(u, "+"), {0: 0.8, 2: -0.3 + 0.1j})
    spec = intertwine_pair(phi, psi, u, method="spectral")
    quad = intertwine_pair(phi, psi, u, method="quadrature")
    assert quad == pytest.approx(spec, rel=1e-5)
    del lam


def test_intertwine_pair_single_ktype_closed_form():
    # (v_{2m}, v_{2m})_u = pi * c_{2m}^{(u)}
    u = 0.5
    for m in (0, 1):
        v = SmoothVector.single(2 * m, u)
        spec = intertwine_pair(v, v, u, method="spectral")
        assert spec == pytest.approx(math.pi * intertwine_constant(m, u),
                                     rel=1e-12)


def test_comp_norm_is_g_times_pairing():
    # ||v_0||^2_{C_u} = G(u) * pi * c_0^{(u)}
    for u in (0.3, 0.6):
        nv = comp_norm(SmoothVector.single(0, u), u)
        expect = g_normalizer(u) * math.pi \
            * complex(intertwine_constant(0, u)).real
        assert nv.value == pytest.approx(expect, rel=1e-6)


def test_comp_norm_plancherel_at_zero():
    # u = 0 is the plain L^2 norm: ||v_0^{(i lam)}||^2 = pi
    nv = comp_norm(SmoothVector.single(0, 0.9j), 0.0)
    assert nv.value == pytest.approx(math.pi, rel=1e-8)


def test_comp_norm_guards():
    with pytest.raises(OutOfRange):
        comp_norm(SmoothVector.single(0, 0.0j), 1.0)
    with pytest.raises(DivergentIntegral):
        comp_norm(CayleySum.ktype(0, -0.5), 0.0)


def test_kirillov_is_comp_norm_with_flipped_sign():
    v = SmoothVector.single(2, 0.5j)
    assert kirillov_norm(v, 0.25).value == pytest.approx(
        comp_norm(v, -0.25).value, rel=1e-12)


def test_triple_norm_spectral_vs_direct():
    v = SmoothVector(ReprParams(0.8j, "+"), {0: 1.0, 2: 0.5, -2: 0.25j})
    a = triple_norm(v, -0.25, method="spectral")
    b = triple_norm(v, -0.25, method="direct")
    assert b.value == pytest.approx(a.value, rel=1e-8)


def test_triple_norm_single_ktype_is_kmass_comp_norm():
    v = SmoothVector.single(2, 0.5j)
    t = triple_norm(v, -0.25)
    c = comp_norm(v, -0.25)
    assert t.value == pytest.approx(2.0 * math.pi * c.value, rel=1e-12)


def test_multiplier_map_cases():
    lam = 0.8
    src = ReprParams(1j * lam, "+")
    v = SmoothVector(src, {0: 1.0, 2: 0.5})
    mapped, tgt = multiplier_map(v, src, -0.25, "exotic")
    assert tgt.u == -0.25 and sorted(mapped.coeffs) == [0, 2]

    src_odd = ReprParams(1j * lam, "-")
    v_odd = SmoothVector(src_odd, {1: 1.0, -3: 0.5})
    mapped, tgt = multiplier_map(v_odd, src_odd, -0.25, "exotic1")
    assert sorted(mapped.coeffs) == [-2, 2]  # weight 2m-1 -> 2m

    src_c = ReprParams(0.5, "+")
    v_c = SmoothVector(src_c, {0: 1.0})
    mapped, tgt = multiplier_map(v_c, src_c, 0.2, "exotic2")
    assert tgt.u == 0.2

    with pytest.raises(BadParameterRange):
        multiplier_map(v_c, src_c, 0.6, "exotic")  # non-unitary source
    with pytest.raises(ParityMismatch):
        multiplier_map(v, src, -0.25, "exotic1")
    with pytest.raises(BadParameterRange):
        multiplier_map(v_c, src_c, 0.9, "exotic2")  # mu outside (-1-u, 0)


def test_multiplier_map_sampler_route_matches():
    # CayleySum route agrees pointwise with the algebraic statement
    lam, u = 0.8, -0.25
    cs = CayleySum.ktype(0, 1j * lam)
    mapped, _ = multiplier_map(cs, ReprParams(1j * lam, "+"), u, "exotic")
    xs = np.linspace(-3.0, 3.0, 13)
    expect = cs(xs) * (1.0 + xs ** 2) ** ((1j * lam - u) / 2.0)
    assert np.max(np.abs(mapped(xs) - expect)) < 1e-12
