"""Integrals of squared solutions evaluated through Wronskians.

For any solution u of u_xx + (lam - V(x, lam)) u = 0,

    int_{x0}^x (1 - V_lam) u^2 dt = W[u, u_lam](x0) - W[u, u_lam](x),

so integrals, energy-dependent norms and (through the connection
coefficients) double integrals reduce to derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import quadrature
from .jordan import (
    ConnectionCoeffs,
    EnergyPotential,
    SolutionFamily,
    combine,
    connection_coeffs,
)
from .limits import endpoint_limit
from .quadrature import DEFAULT_QUAD, QuadControl

__all__ = [
    "NormResult",
    "integrate_u2",
    "integrate_u2_energy",
    "integrate_u2_quad",
    "norm_energy",
    "norm_energy_complex",
    "double_integral",
    "double_integral_quad",
    "cross_integral",
]


@dataclass(frozen=True)
class NormResult:
    """``value`` may be negative: the energy-dependent weight 1 - V_lam is not positive."""

    value: float
    method: str
    left_limit: float = math.nan
    right_limit: float = math.nan


def integrate_u2(family: SolutionFamily, x0, x, lam: float):
    """int_{x0}^x u^2 = W[u, u_lam](x0) - W[u, u_lam](x)."""
    return family.w_u_ulambda(np.asarray(x0, dtype=float), lam) - family.w_u_ulambda(
        np.asarray(x, dtype=float), lam
    )


def integrate_u2_energy(family: SolutionFamily, pot: EnergyPotential, x0, x, lam: float):
    """int_{x0}^x (1 - V_lam) u^2 through the same Wronskian difference.

    ``pot`` only documents which weight the result carries; the Wronskian
    already accounts for it, so the V_lam = 0 case is the plain integral.
    """
    return integrate_u2(family, x0, x, lam)


def integrate_u2_quad(family: SolutionFamily, x0: float, x: float, lam: float,
                      pot: Optional[EnergyPotential] = None,
                      ctl: QuadControl = DEFAULT_QUAD) -> float:
    """Direct quadrature of (1 - V_lam) u^2, the independent route."""
    if pot is None or not pot.energy_dependent:
        f = lambda t: family.u(t, lam) ** 2
    else:
        f = lambda t: (1.0 - pot.dv_dlambda(t, lam)) * family.u(t, lam) ** 2
    return quadrature.integrate(f, x0, x, ctl)


def _inward(domain):
    lo, hi = domain
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(hi):
        return lo + 1.0
    if math.isinf(lo):
        return hi - 1.0
    return 0.5 * (lo + hi)


def norm_energy(family: SolutionFamily, pot: EnergyPotential, lam: float,
                method: str = "wronskian_limits", tol: float = 1e-9,
                ctl: QuadControl = DEFAULT_QUAD) -> NormResult:
    """N(u) = int_D (1 - V_lam) u^2 over the whole domain of ``pot``.

    ``wronskian_limits`` returns lim_{x->x_l} W - lim_{x->x_r} W with
    W = W[u, u_lam]; ``quadrature`` integrates out to the same Cauchy-stable
    limits.
    """
    lo, hi = pot.domain
    mid = _inward(pot.domain)
    if method == "wronskian_limits":
        w = lambda t: family.w_u_ulambda(t, lam)
        left = endpoint_limit(w, lo, mid, tol)
        right = endpoint_limit(w, hi, mid, tol)
        return NormResult(left - right, method, left, right)
    if method == "quadrature":
        part = lambda b: integrate_u2_quad(family, mid, float(b), lam, pot, ctl)
        left = -endpoint_limit(part, lo, mid, tol)
        right = endpoint_limit(part, hi, mid, tol)
        return NormResult(left + right, method, left, right)
    raise ValueError(f"unknown method {method!r}")


def norm_energy_complex(re_family: SolutionFamily, im_family: SolutionFamily,
                        pot: EnergyPotential, lam: float, **kwargs) -> NormResult:
    """N(u) for complex u = re + i im, as N(re) + N(im)."""
    re = norm_energy(re_family, pot, lam, **kwargs)
    im = norm_energy(im_family, pot, lam, **kwargs)
    return NormResult(re.value + im.value, re.method,
                      re.left_limit + im.left_limit, re.right_limit + im.right_limit)


def double_integral(u1: SolutionFamily, u2: SolutionFamily, x0: float, x, lam: float,
                    coeffs: Optional[ConnectionCoeffs] = None):
    """int_{x0}^x [int_{x0}^t u1^2 ds] u1(t)^-2 dt without quadrature.

    Equals -[u1_lam(x) - d1 u1(x) - d2 u2(x)] / u1(x) with the connection
    coefficients taken at base point ``x0``.
    """
    if coeffs is None:
        coeffs = connection_coeffs(u1, u2, x0, lam)
    elif coeffs.base_point != x0:
        raise ValueError("connection coefficients were computed for another base point")
    x = np.asarray(x, dtype=float)
    a = u1.u(x, lam)
    if np.any(a == 0):
        raise ZeroDivisionError("u1 vanishes at the evaluation point")
    return -(u1.u_lambda(x, lam) - coeffs.d1 * a - coeffs.d2 * u2.u(x, lam)) / a


def double_integral_quad(u1: SolutionFamily, x0: float, x: float, lam: float,
                         ctl: QuadControl = DEFAULT_QUAD) -> float:
    """Nested quadrature of the same double integral (reference route)."""
    return quadrature.nested(lambda s: u1.u(s, lam) ** 2,
                             lambda t: u1.u(t, lam) ** -2.0, x0, x, ctl)


def cross_integral(u1: SolutionFamily, u2: SolutionFamily, x0, x, lam: float):
    """int_{x0}^x u1 u2 from the Wronskian of s = u1 + u2 and the two squares."""
    s = combine(u1, u2, name="u1+u2")
    return 0.5 * (integrate_u2(s, x0, x, lam) - integrate_u2(u1, x0, x, lam)
                  - integrate_u2(u2, x0, x, lam))
