"""Bi-orthogonal family: evaluations, projections, Gram identity."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fracmix.basis import (
    CoefficientSet,
    ModeIndex,
    TrigPolynomial,
    adjoint_function,
    biorth_gram,
    mode_list,
    project,
    root_function,
    synthesize,
    synthesize_second_deriv,
)


class TestModeIndex:
    def test_constant_requires_k0(self):
        with pytest.raises(ValueError):
            ModeIndex(1, "constant")
        with pytest.raises(ValueError):
            ModeIndex(0, "cosine")
        with pytest.raises(ValueError):
            ModeIndex(1, "sine")


class TestRootFunctions:
    def test_constant(self):
        assert root_function(ModeIndex(0, "constant"), 0.37) == 1.0

    def test_cosine_half(self):
        assert root_function(ModeIndex(1, "cosine"), 0.5) == pytest.approx(-1.0)

    def test_xsine_quarter(self):
        assert root_function(ModeIndex(2, "x-sine"), 0.25) == pytest.approx(
            0.0, abs=1e-15)

    def test_adjoint_values(self):
        assert adjoint_function(ModeIndex(0, "constant"), 0.0) == 2.0
        assert adjoint_function(ModeIndex(3, "cosine"), 1.0) == pytest.approx(
            0.0, abs=1e-12)
        assert adjoint_function(ModeIndex(1, "x-sine"), 0.25) == pytest.approx(4.0)


class TestProject:
    def test_constant_goes_to_c0_only(self):
        c = project(TrigPolynomial.constant(1.0), 4)
        assert c.c0 == 1.0
        assert np.all(c.c1 == 0.0) and np.all(c.c2 == 0.0)

    def test_constant_quadrature_route(self):
        c = project(lambda x: np.ones_like(x), 4)
        assert c.c0 == pytest.approx(1.0, abs=1e-13)
        assert np.max(np.abs(c.c1)) <= 1e-12
        assert np.max(np.abs(c.c2)) <= 1e-12

    def test_cos_mode(self):
        c = project(lambda x: np.cos(2 * math.pi * x), 4)
        assert c.c0 == pytest.approx(0.0, abs=1e-13)
        assert c.c1[0] == pytest.approx(1.0, abs=1e-12)
        assert abs(c.c1[1:]).max() <= 1e-12
        assert abs(c.c2).max() <= 1e-12

    def test_xsine_mode_biorthogonal(self):
        c = project(lambda x: x * np.sin(2 * math.pi * x), 4)
        assert c.c2[0] == pytest.approx(1.0, abs=1e-12)
        assert abs(c.c1).max() <= 1e-12
        assert c.c0 == pytest.approx(0.0, abs=1e-13)

    def test_exact_vs_quadrature_agree(self):
        tp = TrigPolynomial.from_atoms([
            ("constant", 0, 0.3), ("cosine", 1, 1.0), ("cosine", 3, -0.5),
            ("x-sine", 2, 0.8)])
        exact = project(tp, 5)
        quad = project(lambda x: tp(x), 5)
        assert exact.max_abs_diff(quad) <= 1e-12

    def test_sampled_mode(self):
        xs = np.linspace(0.0, 1.0, 20001)
        c = project((xs, np.cos(2 * math.pi * xs)), 3)
        assert c.c1[0] == pytest.approx(1.0, abs=1e-7)

    def test_truncation_drops_high_modes(self):
        tp = TrigPolynomial.from_atoms([("cosine", 7, 1.0)])
        c = project(tp, 3)
        assert c.max_abs_diff(CoefficientSet.zeros(3)) == 0.0


class TestSynthesize:
    def test_zero(self):
        c = CoefficientSet.zeros(3)
        assert synthesize(c, 0.4) == 0.0

    def test_constant_everywhere(self):
        c = CoefficientSet(1.0, np.zeros(3), np.zeros(3))
        for x in (0.0, 0.3, 1.0):
            assert synthesize(c, x) == 1.0

    def test_round_trip_cos4pix(self):
        c = project(lambda x: np.cos(4 * math.pi * x), 6)
        assert synthesize(c, 0.1) == pytest.approx(
            math.cos(0.4 * math.pi), abs=1e-12)

    def test_round_trip_uniform_in_span(self):
        tp = TrigPolynomial.from_atoms([
            ("constant", 0, -0.2), ("cosine", 2, 0.7), ("x-sine", 1, 1.3),
            ("x-sine", 4, -0.4)])
        c = project(tp, 8)
        xs = np.linspace(0.0, 1.0, 501)
        assert np.max(np.abs(synthesize(c, xs) - tp(xs))) <= 1e-10

    def test_vectorized_matches_scalar(self):
        c = CoefficientSet(0.5, np.array([1.0, -0.2]), np.array([0.0, 0.3]))
        xs = np.array([0.1, 0.5, 0.9])
        vec = synthesize(c, xs)
        assert vec == pytest.approx([synthesize(c, x) for x in xs])


class TestSecondDerivative:
    def test_matches_trig_poly_deriv(self):
        tp = TrigPolynomial.from_atoms([
            ("cosine", 1, 0.5), ("x-sine", 2, -0.8)])
        c = project(tp, 4)
        xs = np.linspace(0.0, 1.0, 101)
        assert np.max(np.abs(synthesize_second_deriv(c, xs)
                             - tp.deriv(xs, 2))) <= 1e-9

    def test_eigen_residual_cosine(self):
        # cosine modes are genuine eigenfunctions
        tp = TrigPolynomial.from_atoms([("cosine", 3, 1.0)])
        lam = (2 * 3 * math.pi) ** 2
        xs = np.linspace(0.0, 1.0, 64)
        assert np.max(np.abs(tp.deriv(xs, 2) + lam * tp(xs))) <= 1e-8

    def test_associate_coupling(self):
        # the x-sine associate couples back to the cosine of the same k
        k = 2
        tp = TrigPolynomial.from_atoms([("x-sine", k, 1.0)])
        lam = 2 * k * math.pi
        xs = np.linspace(0.0, 1.0, 64)
        resid = tp.deriv(xs, 2) + lam**2 * tp(xs) - 2 * lam * np.cos(lam * xs)
        assert np.max(np.abs(resid)) <= 1e-8


class TestGram:
    def test_identity_small(self):
        g = biorth_gram(1)
        assert np.max(np.abs(g - np.eye(3))) <= 1e-12

    def test_identity_k20(self):
        g = biorth_gram(20)
        assert np.max(np.abs(g - np.eye(41))) <= 1e-10

    def test_specific_pairings(self):
        # <cos 2k pi x, 4 sin 2k pi x> = 0 and <1, 2(1-x)> = 1
        g = biorth_gram(2)
        modes = mode_list(2)
        i_cos1 = modes.index(ModeIndex(1, "cosine"))
        j_sin1 = modes.index(ModeIndex(1, "x-sine"))
        assert abs(g[i_cos1, j_sin1]) <= 1e-12
        assert g[0, 0] == pytest.approx(1.0, abs=1e-13)
