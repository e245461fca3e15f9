"""Randomised identities, run under the derandomised hypothesis profile."""

import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import integrate as sci
from scipy import special

from jordansusy import specfun, susy, wronskid
from jordansusy.jordan import EnergyPotential, SolutionFamily, chain_residuals, df_pair, v_vc
from jordansusy.models import BoxModel, EDHOModel, RadialOscillatorModel, box_partner_closed

BOX = BoxModel()
ROSC = RadialOscillatorModel(1)

floats = lambda lo, hi: st.floats(lo, hi, allow_nan=False, allow_infinity=False)


def fd1(f, x, h):
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


# --- special functions -----------------------------------------------------------


@given(a=floats(0.1, 2.0), db=floats(0.1, 3.0), x=floats(-3.0, 3.0))
def test_kummer_identity(a, db, x):
    b = a + db
    lhs = specfun.hyp1f1(a, b, x)
    rhs = math.exp(x) * specfun.hyp1f1(b - a, b, -x)
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


@given(a=floats(-2.5, 2.5), b=floats(0.3, 3.0), x=floats(-2.0, 2.0))
def test_contiguous_derivative(a, b, x):
    h = 1e-3
    fd = fd1(lambda t: specfun.hyp1f1(a, b, t), x, h)
    exact = a / b * specfun.hyp1f1(a + 1, b + 1, x)
    assert abs(fd - exact) <= 1e-10 * (1 + abs(exact))


@given(a=floats(-2.5, 2.5), b=floats(0.2, 3.0), x=floats(-2.0, 2.0))
def test_parameter_derivative_vs_finite_difference(a, b, x):
    assume(abs(a - round(a)) > 0.05)
    h = 1e-6
    fd = (specfun.hyp1f1(a + h, b, x) - specfun.hyp1f1(a - h, b, x)) / (2 * h)
    assert abs(specfun.hyp1f1_da(a, b, x) - fd) <= 1e-7 * (1 + abs(fd))


@given(nu=floats(-3.0, 6.0), x=floats(-3.0, 3.0))
def test_hermite_recurrence(nu, x):
    hp, h0, hm = (specfun.hermite(nu + 1, x), specfun.hermite(nu, x), specfun.hermite(nu - 1, x))
    rhs = 2 * x * h0 - 2 * nu * hm
    assert abs(hp - rhs) <= 1e-9 * (1 + abs(hp) + abs(2 * x * h0) + abs(2 * nu * hm))


@given(nu=floats(-3.0, 6.0), x=floats(-3.0, 3.0))
def test_hermite_matches_parabolic_cylinder(nu, x):
    # H_nu(x) = 2^{nu/2} e^{x^2/2} D_nu(sqrt(2) x)
    ref = 2 ** (nu / 2) * math.exp(x * x / 2) * special.pbdv(nu, math.sqrt(2) * x)[0]
    assert float(specfun.hermite(nu, x)) == pytest.approx(ref, rel=1e-9, abs=1e-9)


# --- integrate_u2 ------------------------------------------------------------------


def _family(which):
    return {"box": BOX.u1(), "box2": BOX.u2(), "rosc": ROSC.u1()}[which]


@given(which=st.sampled_from(["box", "box2", "rosc"]), lam=floats(0.5, 9.5),
       pts=st.lists(floats(0.05, 3.0), min_size=3, max_size=3))
def test_integrate_u2_additive(which, lam, pts):
    fam = _family(which)
    if which.startswith("box"):
        pts = [p / 3.0 for p in pts]
    a, b, c = pts
    lhs = wronskid.integrate_u2(fam, a, c, lam)
    rhs = wronskid.integrate_u2(fam, a, b, lam) + wronskid.integrate_u2(fam, b, c, lam)
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))


@given(which=st.sampled_from(["box", "box2", "rosc"]), lam=floats(0.5, 9.5),
       pts=st.lists(floats(0.05, 3.0), min_size=2, max_size=2))
def test_integrate_u2_nonnegative(which, lam, pts):
    fam = _family(which)
    x0, x = sorted(p / 3.0 if which.startswith("box") else p for p in pts)
    # the Wronskian difference carries round-off of the size of W itself
    scale = abs(fam.w_u_ulambda(x0, lam)) + abs(fam.w_u_ulambda(x, lam))
    assert wronskid.integrate_u2(fam, x0, x, lam) >= -1e-13 * (1 + scale)


@given(lam=floats(2.0, 12.0), x=floats(0.2, 3.0))
def test_rosc_integral_three_routes(lam, x):
    u = ROSC.u1()
    series = float(ROSC.integral_u1sq(lam, x))
    wron = float(wronskid.integrate_u2(u, 0.0, x, lam))
    quad = sci.quad(lambda t: float(u.u(t, lam)) ** 2, 0.0, x, epsabs=1e-13, epsrel=1e-13)[0]
    assert abs(series - wron) <= 1e-6 * (1 + abs(quad))
    assert abs(series - quad) <= 1e-6 * (1 + abs(quad))


# --- V_lam = 0 reduction -------------------------------------------------------------


def _explicit_zero(fam: SolutionFamily) -> SolutionFamily:
    pot = fam.potential
    zero = EnergyPotential(pot.v, lambda x, lam: np.zeros_like(np.asarray(x, dtype=float)),
                           pot.domain, pot.name + "+zero v_lam")
    return SolutionFamily(fam.u, fam.u_x, fam.u_lambda, fam.u_lambda_x, zero,
                          fam.provenance, fam.fd_step_lambda, fam.name)


@given(lam=floats(0.5, 9.5), x=floats(0.2, 0.8))
def test_zero_v_lambda_reduction_is_bitwise(lam, x):
    fam = BOX.u1()
    assert not fam.potential.energy_dependent
    plain = v_vc(fam, 0.5, x, lam)
    routed = v_vc(_explicit_zero(fam), 0.5, x, lam)
    assert plain == routed
    assert wronskid.integrate_u2_energy(fam, fam.potential, 0.3, x, lam) == \
        wronskid.integrate_u2(fam, 0.3, x, lam)
    assert fam.potential.dv_dlambda(np.array([x]), lam)[0] == 0.0


@given(lam=floats(0.5, 9.5), K=floats(-2.0, 2.0))
def test_zero_v_lambda_chain_residual_bitwise(lam, K):
    x = np.linspace(0.2, 0.8, 7)
    fam = BOX.u1()
    a = chain_residuals(df_pair(fam, K, BOX.u2()), x, lam)
    b = chain_residuals(df_pair(_explicit_zero(fam), K, BOX.u2()), x, lam)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


# --- Wronskian monotonicity ----------------------------------------------------------


@given(lam=floats(0.5, 60.0), K=floats(-3.0, 3.0), x=floats(0.01, 0.99))
def test_box_w_slope(lam, K, x):
    T = susy.SusyTransform.differential(BOX.potential, lam, BOX.u1(), K, u2=BOX.u2())
    slope = fd1(T.w, x, 1e-4)
    rhs = -float(BOX.u1().u(x, lam)) ** 2
    assert abs(slope - rhs) <= 1e-7 * (1 + abs(rhs))


@given(x=floats(-4.0, 4.0))
def test_edho_w_slope(x):
    fam, pot = EDHOModel().state(0), EDHOModel().potential
    slope = fd1(lambda t: fam.w_u_ulambda(t, 1.0), x, 1e-4)
    rhs = -(1 - float(pot.dv_dlambda(x, 1.0))) * math.exp(-x * x)
    assert abs(slope - rhs) <= 1e-7 * (1 + abs(rhs))


@given(lam=floats(0.5, 60.0), K=floats(-3.0, 3.0),
       pts=st.lists(floats(0.0, 1.0), min_size=2, max_size=2, unique=True))
def test_box_w_non_increasing(lam, K, pts):
    T = susy.SusyTransform.differential(BOX.potential, lam, BOX.u1(), K, u2=BOX.u2())
    a, b = sorted(pts)
    assert T.w(b) <= T.w(a) + 1e-14


# --- closed forms against the generic pipeline --------------------------------------


@given(m=st.integers(1, 4), K=st.one_of(floats(-3.0, -1e-3), floats(0.5 + 1e-3, 3.0)),
       x=floats(0.0, 1.0))
def test_box_partner_closed_equals_pipeline(m, K, x):
    T = susy.SusyTransform.differential(BOX.potential, BOX.eigenvalue(m), BOX.u1(), K, u2=BOX.u2())
    generic = float(susy.partner_potential(T, x))
    assert abs(generic - float(box_partner_closed(m, K, x))) <= 1e-9 * (1 + abs(generic))


@given(m=st.integers(1, 4), K=st.one_of(floats(-3.0, -1e-3), floats(0.5 + 1e-3, 3.0)),
       x=floats(0.05, 0.95))
def test_box_partner_against_log_derivative(m, K, x):
    # V~ = V - 2 (log|W|)'' with a stencil second derivative
    T = susy.SusyTransform.differential(BOX.potential, BOX.eigenvalue(m), BOX.u1(), K, u2=BOX.u2())
    h = 1e-3
    lw = lambda t: math.log(abs(float(T.w(t))))
    d2 = (-lw(x + 2 * h) + 16 * lw(x + h) - 30 * lw(x) + 16 * lw(x - h) - lw(x - 2 * h)) / (12 * h * h)
    assert float(susy.partner_potential(T, x)) == pytest.approx(-2 * d2, rel=1e-6, abs=1e-6)


# --- VC/DF consistency ---------------------------------------------------------------


@given(lam=floats(0.5, 9.5), K=floats(-2.0, 2.0), x0=floats(0.2, 0.8))
def test_vc_df_wronskians_agree(lam, K, x0):
    # omega0 = K + W[u, u_lam](x0) makes the two representations coincide
    fam = BOX.u1()
    omega0 = K + float(fam.w_u_ulambda(x0, lam))
    a = susy.SusyTransform.differential(BOX.potential, lam, fam, K, u2=BOX.u2())
    b = susy.SusyTransform.integral(BOX.potential, lam, fam, omega0, x0, u2=BOX.u2())
    x = np.linspace(0.05, 0.95, 9)
    np.testing.assert_allclose(a.w(x), b.w(x), atol=1e-9)
