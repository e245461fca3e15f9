"""Built-in exactly solvable systems.

* ``BoxModel``: V = 0 on (0, 1) with Dirichlet walls.
* ``RadialOscillatorModel``: V = x^2 + l(l+1)/x^2 on (0, inf).
* ``EDHOModel``: the energy-dependent oscillator V(x, lam) = lam x^2 on the line.

Each model hands out ``SolutionFamily`` objects with analytic derivatives in
both x and lambda, which is what the Wronskian identities consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .jordan import EnergyPotential, JordanPair, SolutionFamily, df_pair
from .limits import endpoint_limit
from .specfun import DEFAULT_SERIES, SeriesControl

__all__ = [
    "BoxModel",
    "RadialOscillatorModel",
    "EDHOModel",
    "box_u",
    "box_v",
    "box_partner_closed",
    "rosc_u",
    "rosc_v",
    "rosc_h",
    "rosc_integral_u1sq",
    "rosc_integral_u2sq",
    "edho_state",
    "edho_u_lambda",
]


def _arr(x):
    return np.asarray(x, dtype=float)


# --- particle in a box -----------------------------------------------------------


@dataclass(frozen=True)
class BoxModel:
    """Infinite well on (0, 1); eigenvalues n^2 pi^2, eigenfunctions sqrt(2) sin(n pi x)."""

    @property
    def potential(self) -> EnergyPotential:
        return EnergyPotential(lambda x, lam: np.zeros_like(_arr(x)), domain=(0.0, 1.0),
                               name="box")

    @staticmethod
    def eigenvalue(n: int) -> float:
        if n < 1:
            raise ValueError("box states are labelled n >= 1")
        return (n * math.pi) ** 2

    def u1(self, amplitude: float = 1.0) -> SolutionFamily:
        """A sin(sqrt(lam) x) with its partial derivatives."""

        def u(x, lam):
            return amplitude * np.sin(math.sqrt(lam) * _arr(x))

        def u_x(x, lam):
            k = math.sqrt(lam)
            return amplitude * k * np.cos(k * _arr(x))

        def u_lam(x, lam):
            k = math.sqrt(lam)
            x = _arr(x)
            return amplitude * x * np.cos(k * x) / (2 * k)

        def u_lam_x(x, lam):
            k = math.sqrt(lam)
            x = _arr(x)
            return amplitude * (np.cos(k * x) - k * x * np.sin(k * x)) / (2 * k)

        return SolutionFamily(u, u_x, u_lam, u_lam_x, potential=self.potential, name="box_u1")

    def u2(self) -> SolutionFamily:
        """-cos(sqrt(lam) x)/sqrt(lam); W[u1, u2] = 1."""

        def u(x, lam):
            k = math.sqrt(lam)
            return -np.cos(k * _arr(x)) / k

        def u_x(x, lam):
            return np.sin(math.sqrt(lam) * _arr(x))

        def u_lam(x, lam):
            k = math.sqrt(lam)
            x = _arr(x)
            return x * np.sin(k * x) / (2 * k * k) + np.cos(k * x) / (2 * k**3)

        def u_lam_x(x, lam):
            k = math.sqrt(lam)
            x = _arr(x)
            return x * np.cos(k * x) / (2 * k)

        return SolutionFamily(u, u_x, u_lam, u_lam_x, potential=self.potential, name="box_u2")

    def eigenstate(self, n: int):
        """``(epsilon_n, family)`` with the family normalised on (0, 1)."""
        return self.eigenvalue(n), self.u1(math.sqrt(2.0))


def box_u() -> SolutionFamily:
    return BoxModel().u1()


def box_v(lam: float, K: float) -> JordanPair:
    """Pair (sin(kx), x cos(kx)/(2k) - K cos(kx)/k), k = sqrt(lam)."""
    if not lam > 0:
        raise ValueError("box transformation needs lam > 0")
    model = BoxModel()
    return df_pair(model.u1(), K, model.u2())


def box_partner_closed(m: int, K: float, x):
    """Closed-form confluent partner of the box for lam = m^2 pi^2."""
    x = _arr(x)
    mp = m * math.pi
    num = 16 * math.pi**2 * m**2 * (1 + mp * (2 * K - x) * np.sin(2 * mp * x) - np.cos(2 * mp * x))
    den = (2 * mp * (2 * K - x) + np.sin(2 * math.pi * m * x)) ** 2
    if np.any(den == 0):
        raise ZeroDivisionError("box partner denominator vanishes (irregular K)")
    return num / den


# --- radial oscillator -----------------------------------------------------------


def _branch(x, lam, coef, power, alpha0, beta, ctl, what):
    """Pieces of coef * x^power exp(-x^2/2) 1F1(alpha0 - lam/4; beta; x^2).

    ``what`` selects u, u_x, u_lam, u_lam_x, h or h_lam, where h is the part
    of u_x produced by differentiating the 1F1 factor.
    """
    x = _arr(x)
    z = x * x
    alpha = alpha0 - lam / 4.0
    env = coef * x**power * np.exp(-z / 2.0)
    if what == "u":
        return env * specfun.hyp1f1(alpha, beta, z, ctl)
    if what == "h":
        return env * 2.0 * x * (alpha / beta) * specfun.hyp1f1(alpha + 1, beta + 1, z, ctl)
    if what == "h_lam":
        g, ga = specfun.hyp1f1_with_da(alpha + 1, beta + 1, z, ctl)
        return env * 2.0 * x * (-0.25 / beta) * (g + alpha * ga)
    # (power/x - x) * env, written so that x = 0 is finite whenever power >= 1
    denv = coef * x ** (power - 1) * np.exp(-z / 2.0) * (power - z)
    if what == "u_x":
        return denv * specfun.hyp1f1(alpha, beta, z, ctl) + _branch(
            x, lam, coef, power, alpha0, beta, ctl, "h")
    if what == "u_lam":
        return -0.25 * env * specfun.hyp1f1_da(alpha, beta, z, ctl)
    if what == "u_lam_x":
        return -0.25 * denv * specfun.hyp1f1_da(alpha, beta, z, ctl) + _branch(
            x, lam, coef, power, alpha0, beta, ctl, "h_lam")
    raise ValueError(what)


@dataclass(frozen=True)
class RadialOscillatorModel:
    """Radial oscillator with angular momentum ``ell``.

    Bound states sit at eps = 4n + 2l + 3. This API counts n from 0, where
    1F1(0; b; x^2) = 1 gives the nodeless ground state.
    """

    ell: int = 1
    series: SeriesControl = DEFAULT_SERIES

    def __post_init__(self):
        if self.ell < 0 or int(self.ell) != self.ell:
            raise ValueError("ell must be a non-negative integer")

    @property
    def potential(self) -> EnergyPotential:
        ell = self.ell

        def v(x, lam):
            x = _arr(x)
            return x * x + ell * (ell + 1) / (x * x)

        return EnergyPotential(v, domain=(0.0, math.inf), name=f"radial_osc(l={ell})")

    def eigenvalue(self, n: int) -> float:
        if n < 0:
            raise ValueError("n must be non-negative")
        return 4.0 * n + 2.0 * self.ell + 3.0

    # regular branch u1 = x^{l+1} e^{-x^2/2} 1F1(a; b; x^2)
    def _u1_args(self):
        ell = self.ell
        return 1.0, ell + 1.0, (2 * ell + 3) / 4.0, ell + 1.5

    # irregular branch u2 = -x^{-l} e^{-x^2/2} 1F1(c; d; x^2) / (2l+1)
    def _u2_args(self):
        ell = self.ell
        return -1.0 / (2 * ell + 1), -float(ell), (-2 * ell + 1) / 4.0, -ell + 0.5

    def _family(self, args, name):
        ctl = self.series

        def make(what):
            return lambda x, lam: _branch(x, lam, *args, ctl, what)

        return SolutionFamily(make("u"), make("u_x"), make("u_lam"), make("u_lam_x"),
                              potential=self.potential, name=name)

    def u1(self) -> SolutionFamily:
        return self._family(self._u1_args(), f"rosc_u1(l={self.ell})")

    def u2(self) -> SolutionFamily:
        """Second solution, singular at the origin, with W[u1, u2] = 1."""
        return self._family(self._u2_args(), f"rosc_u2(l={self.ell})")

    def eigenstate(self, n: int):
        return self.eigenvalue(n), self.u1()

    def h(self, lam, x):
        return _branch(x, lam, *self._u1_args(), self.series, "h")

    def h_lambda(self, lam, x):
        return _branch(x, lam, *self._u1_args(), self.series, "h_lam")

    def w_u_ulambda(self, lam, x):
        """W[u, u_lam] = u h_lam - u_lam h."""
        args = self._u1_args()
        u = _branch(x, lam, *args, self.series, "u")
        u_lam = _branch(x, lam, *args, self.series, "u_lam")
        return u * self.h_lambda(lam, x) - u_lam * self.h(lam, x)

    def partner_closed(self, lam, K, x):
        """SUSY partner written through u, u_x, h and h_lam."""
        x = _arr(x)
        args = self._u1_args()
        u = _branch(x, lam, *args, self.series, "u")
        u_x = _branch(x, lam, *args, self.series, "u_x")
        w = K + self.w_u_ulambda(lam, x)
        return self.potential(x, lam) + (4 * u * u_x * w + 2 * u**4) / w**2

    def _ab(self, lam):
        _, _, alpha0, beta = self._u1_args()
        return alpha0 - lam / 4.0, beta

    def _cd(self, lam):
        _, _, alpha0, beta = self._u2_args()
        return alpha0 - lam / 4.0, beta

    def integral_u1sq(self, lam, x):
        """int_0^x u1^2 from the closed-form series (no quadrature)."""
        x = _arr(x)
        z = x * x
        a, b = self._ab(lam)
        ctl = self.series
        f, fa = specfun.hyp1f1_with_da(a, b, z, ctl)
        g, ga = specfun.hyp1f1_with_da(a + 1, b + 1, z, ctl)
        # a/(2b) {F G_a + G [F/a - F_a]} with the 1/a cleared
        pre = x ** (2 * self.ell + 3) * np.exp(-z) / (2 * b)
        return pre * (a * f * ga + g * (f - a * fa))

    def integral_u2sq_antiderivative(self, lam, x):
        """E(x) with int_x^R u2^2 = E(x) - E(R); equal to W[u2, u2_lam](x)."""
        x = _arr(x)
        z = x * x
        c, d = self._cd(lam)
        ctl = self.series
        f, fc = specfun.hyp1f1_with_da(c, d, z, ctl)
        g, gc = specfun.hyp1f1_with_da(c + 1, d + 1, z, ctl)
        ell = self.ell
        pre = -(x ** (1 - 2 * ell)) * np.exp(-z) / (2 * (2 * ell + 1) ** 2 * d)
        return pre * (c * f * gc + g * (f - c * fc))

    def integral_u2sq(self, lam, x, upper=math.inf):
        """int_x^upper u2^2 via the closed-form series.

        For an infinite ``upper`` the antiderivative's limit is taken
        numerically. u2 grows like exp(x^2/2) unless c is a non-positive
        integer, so the improper integral normally diverges and is reported
        as ``inf``. A terminating c raises PoleError from the c-derivative.
        """
        lower = self.integral_u2sq_antiderivative(lam, x)
        if math.isinf(upper):
            at_end = endpoint_limit(lambda t: self.integral_u2sq_antiderivative(lam, t),
                                    math.inf, float(np.max(x)))
        else:
            at_end = self.integral_u2sq_antiderivative(lam, upper)
        return lower - at_end


def rosc_u(ell, lam, x):
    return RadialOscillatorModel(ell).u1().u(x, lam)


def rosc_v(ell, lam, K, x):
    """u_lam + K u2: the particular solution plus the homogeneous admixture."""
    model = RadialOscillatorModel(ell)
    return model.u1().u_lambda(x, lam) + K * model.u2().u(x, lam)


def rosc_h(ell, lam, x):
    return RadialOscillatorModel(ell).h(lam, x)


def rosc_integral_u1sq(ell, lam, x):
    return RadialOscillatorModel(ell).integral_u1sq(lam, x)


def rosc_integral_u2sq(ell, lam, x, upper=math.inf):
    return RadialOscillatorModel(ell).integral_u2sq(lam, x, upper)


# --- energy-dependent harmonic oscillator -------------------------------------------


@dataclass(frozen=True)
class EDHOModel:
    """u'' + (lam - lam x^2) u = 0 on the real line.

    Bound states: lam_n = (2n+1)^2, u_n = exp(-(2n+1) x^2/2) H_n(sqrt(2n+1) x).
    The lambda derivative exists only on the spectrum, through the chain rule
    in a continuous label n.
    """

    fd_step: float = 1e-5

    @property
    def potential(self) -> EnergyPotential:
        return EnergyPotential(lambda x, lam: lam * _arr(x) ** 2,
                               lambda x, lam: _arr(x) ** 2,
                               domain=(-math.inf, math.inf), name="edho")

    @staticmethod
    def eigenvalue(n: int) -> float:
        return float((2 * n + 1) ** 2)

    def state(self, n: int) -> SolutionFamily:
        if n < 0 or int(n) != n:
            raise ValueError("n must be a non-negative integer")
        s = 2.0 * n + 1.0
        rs = math.sqrt(s)
        lam_n = self.eigenvalue(n)
        h = self.fd_step

        def check(lam):
            if abs(lam - lam_n) > 1e-12 * lam_n:
                raise ValueError(f"EDHO state n={n} only exists at lam={lam_n}, got {lam}")

        def herm(order, y):
            return specfun.hermite(order, y) if order >= 0 else np.zeros_like(y)

        def pieces(x):
            x = _arr(x)
            y = rs * x
            env = np.exp(-s * x * x / 2.0)
            hn = specfun.hermite(n, y)
            dh = 2.0 * n * herm(n - 1, y)  # dH_n/dy
            return x, y, env, hn, dh

        def u(x, lam):
            check(lam)
            x, y, env, hn, _ = pieces(x)
            return env * hn

        def u_x(x, lam):
            check(lam)
            x, y, env, hn, dh = pieces(x)
            return -s * x * env * hn + env * rs * dh

        def du_dn(x):
            x, y, env, hn, dh = pieces(x)
            return -x * x * env * hn + env * dh * x / rs + env * specfun.dhermite_dnu(n, y, h)

        def d2u_dn_dx(x):
            x, y, env, hn, dh = pieces(x)
            uu = env * hn
            ux = -s * x * uu + env * rs * dh
            d2h = 4.0 * n * (n - 1) * herm(n - 2, y)
            dnh = specfun.dhermite_dnu(n, y, h)
            # d/dy dH_nu/dnu = 2 H_{nu-1} + 2 nu dH_{nu-1}/dnu
            dydnh = 2.0 * specfun.hermite(n - 1, y)
            if n:
                dydnh = dydnh + 2.0 * n * specfun.dhermite_dnu(n - 1, y, h)
            t1 = -2.0 * x * uu - x * x * ux
            t2 = -s * x * env * dh * x / rs + env * d2h * x + env * dh / rs
            t3 = -s * x * env * dnh + env * rs * dydnh
            return t1 + t2 + t3

        dlam_dn = 8.0 * n + 4.0

        def u_lam(x, lam):
            check(lam)
            return du_dn(x) / dlam_dn

        def u_lam_x(x, lam):
            check(lam)
            return d2u_dn_dx(x) / dlam_dn

        return SolutionFamily(u, u_x, u_lam, u_lam_x, potential=self.potential,
                              fd_step_lambda=h, name=f"edho_u{n}")


def edho_state(n: int) -> SolutionFamily:
    return EDHOModel().state(n)


def edho_u_lambda(n: int, x):
    model = EDHOModel()
    return model.state(n).u_lambda(x, model.eigenvalue(n))
