import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normlab.errors import NonUnimodular, UnknownChart
from normlab.group import (GroupElement, decompose_kan, decompose_kna,
                           diagonal, measure_weight, random_elements,
                           rotation, unipotent, weyl_flip,
                           weyl_flip_closed_form)

finite = st.floats(allow_nan=False, allow_infinity=False)


@st.composite
def group_elements(draw):
    theta = draw(st.floats(0.0, 2.0 * math.pi))
    a = math.exp(draw(st.floats(-3.0, 3.0)))
    t = draw(st.floats(-20.0, 20.0))
    return rotation(theta) @ diagonal(a) @ unipotent(t)


@given(group_elements())
@settings(max_examples=200, deadline=None)
def test_kan_roundtrip(g):
    kan = decompose_kan(g)
    assert np.max(np.abs(kan.reconstruct().matrix - g.matrix)) < 1e-10


@given(group_elements())
@settings(max_examples=200, deadline=None)
def test_kna_roundtrip(g):
    kna = decompose_kna(g)
    assert np.max(np.abs(kna.reconstruct().matrix - g.matrix)) < 1e-10


@given(group_elements())
@settings(max_examples=200, deadline=None)
def test_chart_relation(g):
    kan = decompose_kan(g)
    kna = decompose_kna(g)
    assert kan.theta == pytest.approx(kna.theta, abs=1e-12)
    assert kan.a == pytest.approx(kna.a, rel=1e-12)
    assert kna.T == pytest.approx(kan.a ** 2 * kan.t, abs=1e-10, rel=1e-10)


@given(st.floats(-30.0, 30.0), st.floats(-3.0, 3.0))
@settings(max_examples=200, deadline=None)
def test_weyl_flip_closed_form(T, loga):
    a = math.exp(loga)
    fl = weyl_flip(T, a)
    Tc, ac = weyl_flip_closed_form(T, a)
    assert fl.Tprime == pytest.approx(Tc, abs=1e-9, rel=1e-9)
    assert fl.aprime == pytest.approx(ac, rel=1e-9)


def test_weyl_flip_is_involution_on_coords():
    T, a = 1.7, 0.4
    T1, a1 = weyl_flip_closed_form(T, a)
    T2, a2 = weyl_flip_closed_form(T1, a1)
    assert T2 == pytest.approx(T)
    assert a2 == pytest.approx(a)


def test_group_element_rejects_non_unimodular():
    with pytest.raises(NonUnimodular):
        GroupElement(1.0, 0.0, 0.0, 2.0)


def test_measure_weights():
    g = rotation(0.3) @ diagonal(1.7) @ unipotent(0.4)
    kan = decompose_kan(g)
    kna = decompose_kna(g)
    # dT = a^2 dt is exactly the ratio of the two invariant densities
    assert measure_weight("KAN", kan) == pytest.approx(kan.a ** 2)
    assert measure_weight("KNA", kna) == 1.0
    assert measure_weight("KAN-left", kan) == 1.0
    with pytest.raises(UnknownChart):
        measure_weight("NAK", kan)


def test_measure_jacobian_numeric():
    h = 1e-7
    for a, t in [(0.5, 0.3), (2.0, -1.1), (1.0, 0.0)]:
        g0 = diagonal(a) @ unipotent(t)
        g1 = diagonal(a) @ unipotent(t + h)
        dT = decompose_kna(g1).T - decompose_kna(g0).T
        assert dT / h == pytest.approx(a ** 2, rel=1e-5)


def test_random_elements_deterministic():
    xs = random_elements(5, seed=7)
    ys = random_elements(5, seed=7)
    for g, h in zip(xs, ys):
        assert np.array_equal(g.matrix, h.matrix)
