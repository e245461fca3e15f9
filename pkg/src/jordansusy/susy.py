"""Confluent SUSY transformation built from a Jordan chain at one energy.

For an energy-independent ``V`` and transformation Wronskian ``W = W[u, v]``

    V~ = V - 2 (log W)'' = V + (4 u u_x W + 2 u^4) / W^2,

using W' = -u^2. ``W`` is taken either in differential form, K + W[u, u_lam],
or in integral form, omega0 - int_{x0}^x u^2. Because W is non-increasing,
regularity is decided by its two endpoint limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from . import quadrature
from .errors import WronskianZero
from .jordan import (
    EnergyPotential,
    GridSpec,
    JordanPair,
    SolutionFamily,
    df_pair,
    vc_pair,
)
from .limits import approach_points, endpoint_limit
from .quadrature import DEFAULT_QUAD, QuadControl

__all__ = [
    "SusyTransform",
    "RegularityReport",
    "RegularityCheck",
    "Ray",
    "wronskian",
    "wronskian_df",
    "wronskian_vc",
    "partner_potential",
    "transform_state",
    "state_residual",
    "StateResidual",
    "RESIDUAL_STEP",
    "regularity_range",
    "check_regular",
    "w_threshold",
]


def wronskian(f, f_x, g, g_x, x):
    """W[f, g](x) = f g_x - g f_x for callables of x."""
    x = np.asarray(x, dtype=float)
    return f(x) * g_x(x) - g(x) * f_x(x)


@dataclass(frozen=True)
class SusyTransform:
    """Factorisation energy ``lam``, free constant and representation.

    ``free_constant`` is K for ``representation="DF"`` and omega0 for "VC";
    ``x0`` is the VC base point. ``u2`` (with W[u, u2] = 1) is only needed to
    materialise the second transformation function via :meth:`pair`.
    """

    pot: EnergyPotential
    lam: float
    family: SolutionFamily
    free_constant: float = 0.0
    representation: str = "DF"
    x0: Optional[float] = None
    u2: Optional[SolutionFamily] = None
    quad: QuadControl = DEFAULT_QUAD

    def __post_init__(self):
        if self.pot.energy_dependent:
            raise ValueError("the confluent transformation needs an energy-independent potential")
        if self.representation not in ("DF", "VC"):
            raise ValueError("representation must be 'DF' or 'VC'")
        if self.representation == "VC" and self.x0 is None:
            raise ValueError("the integral representation needs a base point x0")

    @classmethod
    def differential(cls, pot, lam, family, K, u2=None):
        return cls(pot, lam, family, K, "DF", u2=u2)

    @classmethod
    def integral(cls, pot, lam, family, omega0, x0, u2=None):
        return cls(pot, lam, family, omega0, "VC", x0=x0, u2=u2)

    @property
    def domain(self):
        return self.pot.domain

    def pair(self) -> JordanPair:
        if self.representation == "DF":
            return df_pair(self.family, self.free_constant, self.u2)
        return vc_pair(self.family, self.x0, self.free_constant, self.u2, self.quad)

    def w(self, x):
        if self.representation == "DF":
            return wronskian_df(self, x)
        return wronskian_vc(self, self.x0, x)

    def threshold(self) -> float:
        return w_threshold(self.free_constant)

    def u_part(self, x):
        """W[u, u_lam] for DF, -int_{x0}^x u^2 for VC: the constant-free part of W."""
        return self.w(x) - self.free_constant


def w_threshold(constant: float) -> float:
    return 1e-12 * (1.0 + abs(constant))


def wronskian_df(transform: SusyTransform, x):
    """K + W[u, u_lam](x)."""
    if transform.representation != "DF":
        raise ValueError("wronskian_df needs the differential representation")
    x = np.asarray(x, dtype=float)
    return transform.free_constant + transform.family.w_u_ulambda(x, transform.lam)


def wronskian_vc(transform: SusyTransform, x0: float, x):
    """omega0 - int_{x0}^x u^2."""
    fam, lam = transform.family, transform.lam
    integral = quadrature.cumulative(lambda t: fam.u(t, lam) ** 2, x0, x, transform.quad)
    out = transform.free_constant - integral
    return float(out) if np.ndim(out) == 0 else out


def _checked_w(transform, x):
    w = transform.w(x)
    if np.any(np.abs(w) <= transform.threshold()):
        bad = np.asarray(x, dtype=float).ravel()[np.argmin(np.abs(np.ravel(w)))]
        raise WronskianZero(f"W[u, v] vanishes near x={bad:.8g}; the partner is singular there")
    return w


def partner_potential(transform: SusyTransform, x):
    """V~ = V + (4 u u_x W + 2 u^4)/W^2."""
    x = np.asarray(x, dtype=float)
    fam, lam = transform.family, transform.lam
    w = _checked_w(transform, x)
    u, u_x = fam.u(x, lam), fam.u_x(x, lam)
    return transform.pot(x, lam) + (4.0 * u * u_x * w + 2.0 * u**4) / w**2


def transform_state(transform: SusyTransform, psi: Optional[SolutionFamily], eps: float, x):
    """Map a solution at energy ``eps`` of the original problem to the partner.

    For eps != lam: phi = u^2 psi_x / W + (lam - eps - u u_x / W) psi.
    For eps == lam: phi = u / W (``psi`` is ignored and may be None).
    """
    x = np.asarray(x, dtype=float)
    fam, lam = transform.family, transform.lam
    w = _checked_w(transform, x)
    u = fam.u(x, lam)
    if eps == lam:
        return u / w
    p, p_x = psi.u(x, eps), psi.u_x(x, eps)
    return u * u * p_x / w + (lam - eps - u * fam.u_x(x, lam) / w) * p


# five-point stencil step for residuals: h = 1e-3 is truncation dominated
# for the box states, below ~2e-4 round-off starts to take over
RESIDUAL_STEP = 5e-4


@dataclass(frozen=True)
class StateResidual:
    """Residual of phi_xx + (eps - V~) phi on a sample.

    ``relative`` divides by max|phi| on the same sample, since phi carries an
    arbitrary normalisation inherited from psi.
    """

    absolute: float
    relative: float
    scale: float


def state_residual(transform: SusyTransform, psi: Optional[SolutionFamily], eps: float, x,
                   h: float = RESIDUAL_STEP) -> StateResidual:
    x = np.asarray(x, dtype=float)
    phi = lambda t: transform_state(transform, psi, eps, t)
    values = phi(x)
    second = (-phi(x + 2 * h) + 16 * phi(x + h) - 30 * values + 16 * phi(x - h)
              - phi(x - 2 * h)) / (12 * h * h)
    r = np.abs(second + (eps - partner_potential(transform, x)) * values)
    scale = float(np.max(np.abs(values)))
    worst = float(np.max(r))
    return StateResidual(worst, worst / scale if scale > 0 else worst, scale)


# --- regularity ------------------------------------------------------------------


@dataclass(frozen=True)
class Ray:
    """Closed ray (-inf, end] (``upward=False``) or [end, inf)."""

    end: float
    upward: bool

    def __contains__(self, value) -> bool:
        return value >= self.end if self.upward else value <= self.end

    def __str__(self):
        return f"[{self.end:.12g}, inf)" if self.upward else f"(-inf, {self.end:.12g}]"


@dataclass(frozen=True)
class RegularityReport:
    w_left: float
    w_right: float
    admissible_K: tuple
    admissible_omega0: tuple
    boundary_class: str
    i_left: float = math.nan
    i_right: float = math.nan

    def admits(self, value, representation="DF") -> bool:
        rays = self.admissible_K if representation == "DF" else self.admissible_omega0
        return any(value in r for r in rays)

    def describe(self, representation="DF") -> str:
        rays = self.admissible_K if representation == "DF" else self.admissible_omega0
        return " U ".join(str(r) for r in rays) if rays else "(empty)"


def _interior_point(domain):
    lo, hi = domain
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(hi):
        return lo + 1.0
    if math.isinf(lo):
        return hi - 1.0
    return 0.5 * (lo + hi)


def _w_u_ulambda_limits(family, lam, domain, inward):
    f = lambda t: family.w_u_ulambda(t, lam)
    return endpoint_limit(f, domain[0], inward), endpoint_limit(f, domain[1], inward)


def _u2_integral_to(family, lam, x0, end, ctl):
    """int between x0 and an (open, possibly infinite) endpoint, by quadrature."""
    f = lambda b: quadrature.integrate(lambda t: family.u(t, lam) ** 2, x0, float(b), ctl)
    return abs(endpoint_limit(f, end, x0))


def regularity_range(transform: SusyTransform) -> RegularityReport:
    """Admissible K (and omega0) values for which W[u, v] has no zero.

    An endpoint contributes a ray when u does not diverge there, i.e. when the
    limit of W[u, u_lam] (or of int u^2 for a family without u_lam) is finite.
    """
    lo, hi = transform.domain
    fam, lam = transform.family, transform.lam
    x0 = transform.x0 if transform.x0 is not None else _interior_point(transform.domain)
    if fam.u_lambda is not None:
        w_left, w_right = _w_u_ulambda_limits(fam, lam, transform.domain, x0)
        left_ok, right_ok = math.isfinite(w_left), math.isfinite(w_right)
        i_left = _u2_integral_to(fam, lam, x0, lo, transform.quad) if left_ok else math.inf
        i_right = _u2_integral_to(fam, lam, x0, hi, transform.quad) if right_ok else math.inf
    else:
        w_left = w_right = math.nan
        i_left = _u2_integral_to(fam, lam, x0, lo, transform.quad)
        i_right = _u2_integral_to(fam, lam, x0, hi, transform.quad)
        left_ok, right_ok = math.isfinite(i_left), math.isfinite(i_right)

    k_rays, omega_rays = [], []
    if left_ok:
        omega_rays.append(Ray(0.0 - i_left, upward=False))
        if fam.u_lambda is not None:
            k_rays.append(Ray(0.0 - w_left, upward=False))
    if right_ok:
        omega_rays.append(Ray(i_right, upward=True))
        if fam.u_lambda is not None:
            k_rays.append(Ray(0.0 - w_right, upward=True))

    cls = {(True, True): "vanishes_both", (True, False): "vanishes_left",
           (False, True): "vanishes_right", (False, False): "neither"}[(left_ok, right_ok)]
    return RegularityReport(w_left, w_right, tuple(k_rays), tuple(omega_rays), cls,
                            i_left, i_right)


@dataclass(frozen=True)
class RegularityCheck:
    regular: bool
    w_left: float
    w_right: float
    zero: Optional[float] = None
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.regular


def _sign(value, thr):
    if math.isnan(value):
        return 0
    return 0 if abs(value) <= thr else (1 if value > 0 else -1)


def check_regular(transform: SusyTransform, grid: Optional[GridSpec] = None) -> RegularityCheck:
    """Decide regularity from the endpoint limits of the monotone W.

    A strict sign change (W > 0 on the left, W < 0 on the right) means exactly
    one interior zero, located by bracketing root search. A limit that is zero
    only at an open end is regular. Both limits zero is inconclusive and
    reported as irregular.
    """
    lo, hi = transform.domain
    x0 = transform.x0 if transform.x0 is not None else _interior_point(transform.domain)
    f = transform.w
    w_left = endpoint_limit(f, lo, x0)
    w_right = endpoint_limit(f, hi, x0)
    thr = transform.threshold()
    s_left, s_right = _sign(w_left, thr), _sign(w_right, thr)
    if s_left == 0 and s_right == 0:
        return RegularityCheck(False, w_left, w_right, notes=["both endpoint limits vanish"])
    if not (s_left > 0 and s_right < 0):
        return RegularityCheck(True, w_left, w_right)

    # candidate bracket points: the grid (if any) plus both approach sequences
    pts = sorted(set(approach_points(lo, x0, 30)) | set(approach_points(hi, x0, 30)) | {x0})
    if grid is not None:
        pts = sorted(set(pts) | set(grid.points().tolist()))
    pts = [p for p in pts if lo < p < hi]
    vals = []
    for p in pts:
        try:
            vals.append(float(f(np.float64(p))))
        except (OverflowError, ArithmeticError):
            vals.append(math.nan)
    a = b = None
    for p, v in zip(pts, vals):
        if math.isfinite(v) and v > 0:
            a = p
        elif math.isfinite(v) and v < 0 and a is not None:
            b = p
            break
    zero = None
    if a is not None and b is not None:
        zero = brentq(lambda t: float(f(np.float64(t))), a, b, xtol=1e-14, rtol=1e-14)
    return RegularityCheck(False, w_left, w_right, zero=zero)
