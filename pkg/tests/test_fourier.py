import math

import mpmath
import numpy as np
import pytest

from normlab.errors import NonIntegrableExponent, NotIntegrable, ZeroFrequency
from normlab.fourier import (fourier_transform, fourier_transform_batch,
                             regularized_pairing,
                             series_coefficient_quadrature,
                             signed_sin_power_series, sin_power_series)
from normlab.principal import CayleySum
from normlab.quadrature import expint

TWO_PI = 2.0 * math.pi


def test_cauchy_kernel_closed_form():
    # F[1/(1+x^2)](xi) = pi exp(-2 pi |xi|)
    cs = CayleySum({(1.0, 1.0): 1.0})
    for xi in (0.1, 0.5, -1.3, 2.0):
        got = fourier_transform(cs, xi)
        assert got == pytest.approx(math.pi * math.exp(-TWO_PI * abs(xi)),
                                    rel=1e-9)


def test_one_sided_kernel():
    # 1/(1+ix) has its pole in the upper half plane: transform supported
    # on xi < 0, value 2 pi e^{2 pi xi}
    cs = CayleySum({(1.0, 0.0): 1.0})
    assert fourier_transform(cs, -0.7) == pytest.approx(
        TWO_PI * math.exp(-TWO_PI * 0.7), rel=1e-9)
    assert abs(fourier_transform(cs, 0.7)) < 1e-9


@pytest.mark.parametrize("u", [0.0, 0.5, -0.5, 0.3])
def test_bessel_oracle(u):
    # F[(1+x^2)^{-s}](xi) = 2 pi^s |xi|^{s-1/2} K_{s-1/2}(2 pi |xi|)/Gamma(s)
    s = (1.0 + u) / 2.0
    cs = CayleySum.ktype(0, u)
    for xi in (0.25, 1.0, 3.0):
        expect = 2.0 * mpmath.pi ** s * abs(xi) ** (s - 0.5) \
            * mpmath.besselk(s - 0.5, TWO_PI * abs(xi)) / mpmath.gamma(s)
        got = fourier_transform(cs, xi, tol=1e-10)
        # tolerance is absolute: values decay like e^{-2 pi |xi|}
        assert got.real == pytest.approx(float(expect), rel=1e-6, abs=1e-12)
        assert abs(got.imag) < 1e-12


def test_batch_matches_scalar():
    cs = CayleySum.ktype(2, 0.4j) + CayleySum.ktype(-2, 0.4j, 0.3)
    xis = np.array([-2.0, -0.3, 0.5, 1.7])
    batch = fourier_transform_batch(cs, xis)
    for xi, b in zip(xis, batch):
        assert fourier_transform(cs, xi) == pytest.approx(b, rel=1e-10)


def test_dead_zone_returns_zero_with_bound():
    cs = CayleySum.ktype(0, 0.0)
    vals, err, _ = fourier_transform_batch(cs, np.array([1e5, 0.5]),
                                           return_err=True)
    assert vals[0] == 0.0
    assert vals[1] != 0.0
    # the analytic bound folded into the error covers the dropped value
    assert err < 1e-9


def test_zero_frequency_divergence():
    slow = CayleySum({(0.5, 0.25): 1.0})  # decay exponent 0.75 <= 1
    with pytest.raises(NotIntegrable):
        fourier_transform(slow, 0.0)


def test_regularized_pairing_matches_transform():
    # for an absolutely integrable v the regularized pairing is F[v](-n)
    cs = CayleySum({(1.0, 1.0): 1.0})
    for n in (1.0, -2.0, 0.5):
        direct = fourier_transform(cs, -n)
        reg = regularized_pairing(n, cs)
        assert reg == pytest.approx(direct, rel=1e-7)
    with pytest.raises(ZeroFrequency):
        regularized_pairing(0.0, cs)


@pytest.mark.parametrize("s,z", [(1.5 + 0.5j, 2.0 + 3.0j),
                                 (0.25, 0.1 + 0.0j),
                                 (2.0 + 0.0j, 5.0 - 40.0j),
                                 (1.0 + 2.0j, 0.5 + 0.5j)])
def test_expint_against_mpmath(s, z):
    got = complex(np.asarray(expint(s, np.array([z])))[0])
    expect = complex(mpmath.expint(s, z))
    assert got == pytest.approx(expect, rel=1e-10, abs=1e-14)


# ---------------------------------------------------------------------------
# periodic multiplier series
# ---------------------------------------------------------------------------

def test_sin_series_classical():
    # |sin theta| = 2/pi - (2/pi) sum e^{2 i k theta}/(4k^2-1)
    table = sin_power_series(1.0, 6)
    assert table.coeffs[0].real == pytest.approx(2.0 / math.pi, abs=1e-9)
    for k in range(1, 7):
        expect = -2.0 / (math.pi * (4.0 * k * k - 1.0))
        assert table.coeffs[2 * k].real == pytest.approx(expect, abs=1e-9)
        assert abs(table.coeffs[2 * k].imag) < 1e-12


def test_sin_series_quadrature_oracle():
    s = -0.4 + 0.3j
    table = sin_power_series(s, 4)
    for j in (0, 4):
        oracle = series_coefficient_quadrature(s, j)
        declared = table.errors[j]
        assert abs(table.coeffs[j] - oracle) < 1e-8 + 4.0 * declared


def test_signed_sin_series_quadrature_oracle():
    s = -0.3
    table = signed_sin_power_series(s, 4)
    for j in (1, 3, -1):
        oracle = series_coefficient_quadrature(s, j)
        declared = table.errors[j]
        assert abs(table.coeffs[j] - oracle) < 1e-8 + 4.0 * declared


def test_sin_series_reconstruction_decay():
    # L2 error over theta-samples shrinks as the truncation doubles
    s = 0.5
    thetas = np.linspace(0.05, math.pi - 0.05, 500)
    target = np.sin(thetas) ** s
    errs = []
    for K in (4, 8, 16):
        table = sin_power_series(s, K)
        errs.append(float(np.sqrt(np.mean(
            np.abs(table.reconstruct(thetas) - target) ** 2))))
    assert errs[1] < 0.7 * errs[0]
    assert errs[2] < 0.7 * errs[1]


def test_sin_series_decay_bound():
    table = sin_power_series(-0.5, 8)
    h = table.decay_constant()
    for j, c in table.coeffs.items():
        assert abs(c) <= h / math.sqrt(1.0 + (j / 2.0) ** 2) + 1e-12


def test_non_integrable_exponent():
    with pytest.raises(NonIntegrableExponent):
        sin_power_series(-1.2, 4)
    with pytest.raises(NonIntegrableExponent):
        signed_sin_power_series(-1.0, 4)
