import math

import numpy as np
import pytest
from scipy import integrate as sci

from jordansusy import wronskid
from jordansusy.jordan import connection_coeffs
from jordansusy.models import BoxModel, EDHOModel, RadialOscillatorModel
from jordansusy.wronskid import (
    cross_integral,
    double_integral,
    double_integral_quad,
    integrate_u2,
    integrate_u2_energy,
    integrate_u2_quad,
    norm_energy,
    norm_energy_complex,
)

BOX = BoxModel()
ROSC = RadialOscillatorModel(1)
EDHO = EDHOModel()
SQRT_PI_2 = math.sqrt(math.pi) / 2


class TestIntegrateU2:
    def test_empty(self):
        assert integrate_u2(BOX.u1(), 0.4, 0.4, 3.0) == 0.0

    def test_box_first_solution(self):
        lam = 6.2
        k = math.sqrt(lam)
        x = np.linspace(0, 1, 11)
        np.testing.assert_allclose(integrate_u2(BOX.u1(), 0.0, x, lam),
                                   x / 2 - np.sin(2 * k * x) / (4 * k), atol=1e-15)
        assert integrate_u2(BOX.u1(), 0.0, 1.0, math.pi**2) == pytest.approx(0.5, abs=1e-15)

    def test_box_second_solution(self):
        lam = 6.2
        k = math.sqrt(lam)
        x = np.linspace(0, 1, 11)
        np.testing.assert_allclose(integrate_u2(BOX.u2(), 0.0, x, lam),
                                   x / (2 * lam) + np.sin(2 * k * x) / (4 * lam**1.5), atol=1e-15)

    def test_against_scipy_quad(self):
        for fam, lam, a, b in ((ROSC.u1(), 7.3, 0.2, 2.5), (ROSC.u2(), 7.3, 0.4, 1.5),
                               (BOX.u1(), 50.0, 0.1, 0.9)):
            ref, _ = sci.quad(lambda t: float(fam.u(t, lam)) ** 2, a, b, epsabs=1e-13, epsrel=1e-13)
            assert integrate_u2(fam, a, b, lam) == pytest.approx(ref, rel=1e-9, abs=1e-12)

    def test_library_quadrature_route(self):
        assert integrate_u2_quad(BOX.u1(), 0.0, 1.0, math.pi**2) == pytest.approx(0.5, abs=1e-12)


class TestEnergyDependent:
    def test_reduction_is_bit_identical(self):
        x = np.linspace(0.1, 0.9, 9)
        a = integrate_u2(BOX.u1(), 0.2, x, 3.3)
        b = integrate_u2_energy(BOX.u1(), BOX.potential, 0.2, x, 3.3)
        assert np.array_equal(a, b)

    def test_edho_window(self):
        ref, _ = sci.quad(lambda t: (1 - t * t) * math.exp(-t * t), -6, 6, epsabs=1e-14)
        got = integrate_u2_energy(EDHO.state(0), EDHO.potential, -6.0, 6.0, 1.0)
        assert got == pytest.approx(ref, abs=1e-8)

    def test_edho_weighted_quadrature(self):
        got = integrate_u2_quad(EDHO.state(0), -2.0, 1.5, 1.0, EDHO.potential)
        ref, _ = sci.quad(lambda t: (1 - t * t) * math.exp(-t * t), -2, 1.5, epsabs=1e-14)
        assert got == pytest.approx(ref, abs=1e-10)


class TestNorm:
    def test_edho_ground_state(self):
        for method in ("wronskian_limits", "quadrature"):
            r = norm_energy(EDHO.state(0), EDHO.potential, 1.0, method=method)
            assert r.value == pytest.approx(SQRT_PI_2, abs=1e-7)
            assert r.method == method
        r = norm_energy(EDHO.state(0), EDHO.potential, 1.0)
        assert r.left_limit == pytest.approx(SQRT_PI_2, abs=1e-7)
        assert abs(r.right_limit) < 1e-7
        assert r.value == r.left_limit - r.right_limit

    def test_box_amplitude(self):
        r = norm_energy(BOX.u1(), BOX.potential, math.pi**2)
        assert 1 / math.sqrt(r.value) == pytest.approx(math.sqrt(2), abs=1e-12)
        eps, psi = BOX.eigenstate(3)
        assert norm_energy(psi, BOX.potential, eps).value == pytest.approx(1.0, abs=1e-12)

    def test_complex_split(self):
        # u = sin + 0.5 i sin on the box: |u|^2 = 1.25 sin^2
        r = norm_energy_complex(BOX.u1(), BOX.u1(0.5), BOX.potential, math.pi**2)
        assert r.value == pytest.approx(0.625, abs=1e-12)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            norm_energy(BOX.u1(), BOX.potential, 1.0, method="simpson")

    def test_scaled_energy_dependent_oscillator(self):
        # V = c lam x^2: u = exp(-lam x^2/2) solves the equation at lam = c and
        # N = int (1 - c x^2) exp(-c x^2) = sqrt(pi/c)/2
        from jordansusy.jordan import EnergyPotential, SolutionFamily

        c = 3.0
        pot = EnergyPotential(lambda x, l: l * c * x * x, lambda x, l: c * x * x,
                              domain=(-math.inf, math.inf))
        fam = SolutionFamily(lambda x, l: np.exp(-l * x * x / 2),
                             lambda x, l: -l * x * np.exp(-l * x * x / 2), potential=pot)
        r = norm_energy(fam, pot, c, method="quadrature")
        assert r.value == pytest.approx(0.5 * math.sqrt(math.pi / c), abs=1e-9)


class TestDoubleIntegral:
    def test_empty(self):
        assert double_integral(BOX.u1(), BOX.u2(), 0.3, 0.3, 5.0) == pytest.approx(0.0, abs=1e-16)

    def test_box_closed_form(self):
        lam, x0, x = math.pi**2, 0.3, 0.7
        k = math.pi
        closed = (math.cos(k * x0) ** 2 / (2 * lam)
                  - ((x - x0) / (2 * k) + math.sin(2 * k * x0) / (4 * lam)) / math.tan(k * x))
        assert double_integral(BOX.u1(), BOX.u2(), x0, x, lam) == pytest.approx(closed, abs=1e-8)

    def test_against_scipy_dblquad(self):
        lam, x0, x = math.pi**2, 0.3, 0.7
        ref, _ = sci.dblquad(lambda s, t: math.sin(math.pi * s) ** 2 / math.sin(math.pi * t) ** 2,
                             x0, x, lambda t: x0, lambda t: t, epsabs=1e-12, epsrel=1e-12)
        assert double_integral(BOX.u1(), BOX.u2(), x0, x, lam) == pytest.approx(ref, abs=1e-7)
        assert double_integral_quad(BOX.u1(), x0, x, lam) == pytest.approx(ref, abs=1e-7)

    def test_radial_oscillator_against_nested_quadrature(self):
        lam, x0, x = 6.4, 0.5, 1.1
        got = double_integral(ROSC.u1(), ROSC.u2(), x0, x, lam)
        assert got == pytest.approx(double_integral_quad(ROSC.u1(), x0, x, lam), abs=1e-9)

    def test_coefficient_base_point_mismatch(self):
        c = connection_coeffs(BOX.u1(), BOX.u2(), 0.5, 3.0)
        with pytest.raises(ValueError):
            double_integral(BOX.u1(), BOX.u2(), 0.3, 0.6, 3.0, c)

    def test_node(self):
        with pytest.raises(ZeroDivisionError):
            double_integral(BOX.u1(), BOX.u2(), 0.3, 0.0, math.pi**2)


class TestCrossIntegral:
    def test_degenerate(self):
        a = cross_integral(BOX.u1(), BOX.u1(), 0.1, 0.8, 4.0)
        assert a == pytest.approx(integrate_u2(BOX.u1(), 0.1, 0.8, 4.0), abs=1e-15)

    def test_box_antiderivative(self):
        # d/dt cos(2kt)/(4 lam) = -sin(kt) cos(kt)/k = u1 u2
        lam, x0, x = 5.5, 0.15, 0.85
        k = math.sqrt(lam)
        closed = math.cos(2 * k * x) / (4 * lam) - math.cos(2 * k * x0) / (4 * lam)
        ref, _ = sci.quad(lambda t: -math.sin(k * t) * math.cos(k * t) / k, x0, x, epsabs=1e-14)
        assert closed == pytest.approx(ref, abs=1e-13)
        assert cross_integral(BOX.u1(), BOX.u2(), x0, x, lam) == pytest.approx(closed, abs=1e-13)

    def test_radial_oscillator(self):
        lam = 8.0
        u1, u2 = ROSC.u1(), ROSC.u2()
        ref, _ = sci.quad(lambda t: float(u1.u(t, lam) * u2.u(t, lam)), 0.5, 2.0, epsabs=1e-13)
        assert cross_integral(u1, u2, 0.5, 2.0, lam) == pytest.approx(ref, abs=1e-6)
