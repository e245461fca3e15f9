import math

import numpy as np
import pytest
from scipy import integrate as sci

from jordansusy import quadrature
from jordansusy.errors import LimitNotResolved
from jordansusy.limits import approach_points, endpoint_limit
from jordansusy.quadrature import QuadControl


class TestQuadrature:
    @pytest.mark.parametrize("f,a,b", [(np.sin, 0.0, 3.0), (lambda t: np.exp(-t * t), -4.0, 2.0),
                                       (lambda t: 1 / (1 + t * t), 0.0, 10.0)])
    def test_against_scipy_quad(self, f, a, b):
        ref, _ = sci.quad(f, a, b, epsabs=1e-13, epsrel=1e-13)
        assert quadrature.integrate(f, a, b) == pytest.approx(ref, rel=1e-10, abs=1e-12)

    def test_reversed_and_empty(self):
        assert quadrature.integrate(np.cos, 1.0, 1.0) == 0.0
        assert quadrature.integrate(np.cos, 2.0, 0.5) == pytest.approx(
            -quadrature.integrate(np.cos, 0.5, 2.0), rel=1e-14)

    def test_cumulative_matches_pointwise(self):
        xs = np.array([0.3, -0.2, 1.5, 0.3])
        cum = quadrature.cumulative(np.exp, 0.1, xs)
        np.testing.assert_allclose(cum, np.exp(xs) - np.exp(0.1), rtol=1e-12, atol=1e-14)

    def test_nested(self):
        # int_0^1 [int_0^t s ds] dt = 1/6
        assert quadrature.nested(lambda s: s, lambda t: np.ones_like(t), 0.0, 1.0) == \
            pytest.approx(1 / 6, rel=1e-12)

    def test_control_validation(self):
        with pytest.raises(ValueError):
            QuadControl(atol=-1.0)


class TestLimits:
    def test_approach_points(self):
        pts = approach_points(0.0, 1.0, 3)
        assert pts == [0.5, 0.25, 0.125]
        assert approach_points(math.inf, 2.0, 2) == [2.0, 4.0, 8.0]

    def test_finite_limit_at_singular_end(self):
        f = lambda x: np.sin(x) / x
        assert endpoint_limit(f, 0.0, 1.0) == pytest.approx(1.0, abs=1e-9)

    def test_limit_at_infinity(self):
        assert endpoint_limit(lambda x: np.arctan(x), math.inf, 1.0) == pytest.approx(
            math.pi / 2, abs=1e-8)

    def test_divergence_is_signed_infinity(self):
        assert endpoint_limit(lambda x: -np.exp(x * x), math.inf, 1.0) == -math.inf

    def test_unresolved(self):
        with pytest.raises(LimitNotResolved):
            endpoint_limit(lambda x: np.sin(1 / x), 0.0, 1.0, kmax=20)
