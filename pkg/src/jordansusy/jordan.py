"""Second-order Jordan chains in integral and differential representation.

A chain is the pair

    u_xx + (lam - V) u = 0,
    v_xx + (lam - V) v = (V_lam - 1) u,

with ``V = V(x, lam)``. Two particular solutions of the second equation are
built here: ``v_vc`` (variation of constants, normalised to vanish with its
derivative at a base point) and ``v_df`` (the parameter derivative ``u_lam``).
Their difference is a homogeneous solution ``d1 u1 + d2 u2`` whose
coefficients come from Wronskians at a single point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import solve_ivp

from . import quadrature
from .errors import SingularIntegrand, StepFailure, WronskianNotUnit
from .quadrature import DEFAULT_QUAD, QuadControl

__all__ = [
    "EnergyPotential",
    "SolutionFamily",
    "JordanPair",
    "ConnectionCoeffs",
    "GridSpec",
    "wronskian_values",
    "second_solution",
    "v_vc",
    "v_vc_with_derivative",
    "v_df",
    "vc_pair",
    "df_pair",
    "connection_coeffs",
    "solve_u_numeric",
    "combine",
    "with_fd_lambda",
    "stencil_second",
    "chain_residuals",
]

Fn = Callable[..., np.ndarray]

ZERO_REL_THRESHOLD = 1e-12


@dataclass(frozen=True)
class EnergyPotential:
    """Potential ``V(x, lam)`` on the open interval ``domain``.

    Leave ``v_lambda`` unset for energy-independent potentials; those are
    routed through the ``V_lam = 0`` branch without ever evaluating it.
    """

    v: Fn
    v_lambda: Optional[Fn] = None
    domain: tuple = (-math.inf, math.inf)
    name: str = ""

    @property
    def energy_dependent(self) -> bool:
        return self.v_lambda is not None

    def __call__(self, x, lam):
        return self.v(np.asarray(x, dtype=float), lam)

    def dv_dlambda(self, x, lam):
        x = np.asarray(x, dtype=float)
        if self.v_lambda is None:
            return np.zeros_like(x)
        return self.v_lambda(x, lam)


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2:
            raise ValueError("a grid needs at least two points")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def inside(self, domain) -> bool:
        lo, hi = domain
        return lo < self.x_min and self.x_max < hi


@dataclass(frozen=True)
class SolutionFamily:
    """A solution ``u(x, lam)`` of the first chain equation and its partials.

    ``u_lambda_x`` is the x-derivative of ``u_lambda``; it is what the
    Wronskian ``W[u, u_lam]`` needs.
    """

    u: Fn
    u_x: Fn
    u_lambda: Optional[Fn] = None
    u_lambda_x: Optional[Fn] = None
    potential: Optional[EnergyPotential] = None
    provenance: str = "closed_form"
    fd_step_lambda: Optional[float] = None
    name: str = ""

    def w_u_ulambda(self, x, lam):
        """W[u, u_lam](x) = u (u_lam)_x - u_lam u_x."""
        if self.u_lambda is None or self.u_lambda_x is None:
            raise ValueError(f"family {self.name!r} has no lambda derivative")
        return self.u(x, lam) * self.u_lambda_x(x, lam) - self.u_lambda(x, lam) * self.u_x(x, lam)


@dataclass(frozen=True)
class JordanPair:
    family: SolutionFamily
    v: Fn
    v_x: Fn
    representation: str  # "VC" or "DF"
    base_point: Optional[float] = None
    constant: float = 0.0


@dataclass(frozen=True)
class ConnectionCoeffs:
    d1: float
    d2: float
    base_point: float
    extra: dict = field(default_factory=dict, compare=False)


def wronskian_values(f, f_x, g, g_x):
    return f * g_x - g * f_x


def combine(first: SolutionFamily, second: SolutionFamily, alpha=1.0, beta=1.0,
            name: str = "") -> SolutionFamily:
    """Linear combination ``alpha*first + beta*second`` of two families."""

    def lin(fa, fb):
        if fa is None or fb is None:
            return None
        return lambda x, lam: alpha * fa(x, lam) + beta * fb(x, lam)

    return SolutionFamily(
        u=lin(first.u, second.u),
        u_x=lin(first.u_x, second.u_x),
        u_lambda=lin(first.u_lambda, second.u_lambda),
        u_lambda_x=lin(first.u_lambda_x, second.u_lambda_x),
        potential=first.potential,
        provenance=first.provenance,
        name=name or f"{alpha}*{first.name}+{beta}*{second.name}",
    )


def with_fd_lambda(family: SolutionFamily, rel_step: float = 1e-5) -> SolutionFamily:
    """Copy of ``family`` whose lambda derivatives are central differences.

    The step is ``rel_step * max(1, |lam|)``. Useful where the analytic
    derivative is undefined, e.g. a terminating 1F1 at an eigenvalue.
    """

    def step(lam):
        return rel_step * max(1.0, abs(lam))

    def d(fn):
        return lambda x, lam: (fn(x, lam + step(lam)) - fn(x, lam - step(lam))) / (2 * step(lam))

    return SolutionFamily(family.u, family.u_x, d(family.u), d(family.u_x),
                          potential=family.potential, provenance=family.provenance,
                          fd_step_lambda=rel_step, name=f"{family.name}[fd-lambda]")


# --- integral representation -------------------------------------------------


def _guarded_u(family, lam, sign0):
    """``u`` evaluated on quadrature nodes, raising if it leaves its sign."""

    def g(t):
        u = np.asarray(family.u(t, lam), dtype=float)
        scale = np.max(np.abs(u)) if u.size else 0.0
        if np.any(np.sign(u) != sign0) or np.any(np.abs(u) <= ZERO_REL_THRESHOLD * scale):
            bad = t[np.argmax((np.sign(u) != sign0) | (np.abs(u) <= ZERO_REL_THRESHOLD * scale))]
            raise SingularIntegrand(f"u vanishes on the integration path near x={bad:.6g}")
        return u

    return g


def _start_sign(family, x0, lam):
    u0 = float(family.u(np.float64(x0), lam))
    if u0 == 0.0 or not math.isfinite(u0):
        raise SingularIntegrand(f"u(x0={x0}) = {u0}; choose a base point off the nodes of u")
    return math.copysign(1.0, u0)


def second_solution(family: SolutionFamily, x0: float,
                    ctl: QuadControl = DEFAULT_QUAD) -> SolutionFamily:
    """Reduction of order: ``u2 = u * int_{x0}^x u^-2``, normalised so W[u, u2] = 1.

    The returned family carries lambda derivatives as well (from
    ``d/dlam u^-2 = -2 u_lam / u^3``) when ``family`` has them.
    """

    def parts(x, lam):
        x = np.asarray(x, dtype=float)
        guard = _guarded_u(family, lam, _start_sign(family, x0, lam))
        inv_sq = quadrature.cumulative(lambda t: guard(t) ** -2.0, x0, x, ctl)
        return x, inv_sq

    def u2(x, lam):
        x, a = parts(x, lam)
        return family.u(x, lam) * a

    def u2_x(x, lam):
        x, a = parts(x, lam)
        return family.u_x(x, lam) * a + 1.0 / family.u(x, lam)

    u2_lam = u2_lam_x = None
    if family.u_lambda is not None and family.u_lambda_x is not None:

        def lam_parts(x, lam):
            x, a = parts(x, lam)
            guard = _guarded_u(family, lam, _start_sign(family, x0, lam))
            b = quadrature.cumulative(
                lambda t: -2.0 * family.u_lambda(t, lam) * guard(t) ** -3.0, x0, x, ctl
            )
            return x, a, b

        def u2_lam(x, lam):
            x, a, b = lam_parts(x, lam)
            return family.u_lambda(x, lam) * a + family.u(x, lam) * b

        def u2_lam_x(x, lam):
            x, a, b = lam_parts(x, lam)
            u = family.u(x, lam)
            return (family.u_lambda_x(x, lam) * a + family.u_x(x, lam) * b
                    - family.u_lambda(x, lam) / u**2)

    return SolutionFamily(
        u=u2, u_x=u2_x, u_lambda=u2_lam, u_lambda_x=u2_lam_x,
        potential=family.potential, provenance=family.provenance,
        name=f"second_solution({family.name}, x0={x0})",
    )


def _source_weight(family, lam):
    pot = family.potential
    if pot is None or not pot.energy_dependent:
        return lambda s: family.u(s, lam) ** 2
    return lambda s: family.u(s, lam) ** 2 * (1.0 - pot.dv_dlambda(s, lam))


def v_vc_with_derivative(family: SolutionFamily, x0: float, x, lam: float,
                         ctl: QuadControl = DEFAULT_QUAD):
    """Return ``(v_VC, d v_VC/dx)`` at ``x`` for base point ``x0``.

    v_VC(x) = -u(x) int_{x0}^x [int_{x0}^t u^2 (1 - V_lam) ds] u(t)^-2 dt.
    """
    x = np.asarray(x, dtype=float)
    guard = _guarded_u(family, lam, _start_sign(family, x0, lam))
    weight = _source_weight(family, lam)

    def outer(t):
        return quadrature.cumulative(weight, x0, t, ctl) / guard(t) ** 2

    double = quadrature.cumulative(outer, x0, x, ctl)
    single = quadrature.cumulative(weight, x0, x, ctl)
    u = family.u(x, lam)
    v = -u * double
    v_x = -family.u_x(x, lam) * double - single / u
    if v.ndim == 0:
        return float(v), float(v_x)
    return v, v_x


def v_vc(family: SolutionFamily, x0: float, x, lam: float,
         ctl: QuadControl = DEFAULT_QUAD):
    return v_vc_with_derivative(family, x0, x, lam, ctl)[0]


def v_df(family: SolutionFamily, x, lam: float):
    """Differential-formula particular solution, v_DF = u_lam."""
    if family.u_lambda is None:
        raise ValueError(f"family {family.name!r} has no lambda derivative")
    return family.u_lambda(np.asarray(x, dtype=float), lam)


def vc_pair(family: SolutionFamily, x0: float, omega0: float = 0.0,
            u2: Optional[SolutionFamily] = None,
            ctl: QuadControl = DEFAULT_QUAD) -> JordanPair:
    """Pair (u, v_VC + omega0*u2); W[u, v] = omega0 - int_{x0}^x u^2 when
    ``V_lam = 0``. ``u2`` must satisfy W[u, u2] = 1 and is only needed when
    ``omega0`` is nonzero."""
    if omega0 != 0.0 and u2 is None:
        u2 = second_solution(family, x0, ctl)

    def v(x, lam):
        val = v_vc(family, x0, x, lam, ctl)
        return val + omega0 * u2.u(x, lam) if omega0 else val

    def v_x(x, lam):
        val = v_vc_with_derivative(family, x0, x, lam, ctl)[1]
        return val + omega0 * u2.u_x(x, lam) if omega0 else val

    return JordanPair(family, v, v_x, "VC", base_point=x0, constant=omega0)


def df_pair(family: SolutionFamily, K: float = 0.0,
            u2: Optional[SolutionFamily] = None) -> JordanPair:
    """Pair (u, u_lam + K*u2); W[u, v] = K + W[u, u_lam] given W[u, u2] = 1."""
    if K != 0.0 and u2 is None:
        raise ValueError("a nonzero K needs a partner solution u2 with W[u, u2] = 1")

    def v(x, lam):
        val = family.u_lambda(x, lam)
        return val + K * u2.u(x, lam) if K else val

    def v_x(x, lam):
        val = family.u_lambda_x(x, lam)
        return val + K * u2.u_x(x, lam) if K else val

    return JordanPair(family, v, v_x, "DF", constant=K)


def connection_coeffs(family: SolutionFamily, u2: SolutionFamily, x0: float,
                      lam: float, tol: float = 1e-8, at: Optional[float] = None,
                      ctl: QuadControl = DEFAULT_QUAD) -> ConnectionCoeffs:
    """Coefficients with d1 u1 + d2 u2 = v_DF - v_VC, where v_VC has base point x0.

    In general d1 = W[v_DF - v_VC, u2] and d2 = W[u1, v_DF - v_VC], both
    constant in x. They are evaluated at ``at`` (default: ``x0``). At the base
    point v_VC and its derivative vanish, which leaves the quadrature-free
    d1 = W[v_DF, u2](x0), d2 = W[u1, v_DF](x0).
    """
    xe = float(x0) if at is None else float(at)
    xa = np.float64(xe)
    u1, u1x = family.u(xa, lam), family.u_x(xa, lam)
    w, wx = u2.u(xa, lam), u2.u_x(xa, lam)
    w12 = float(wronskian_values(u1, u1x, w, wx))
    if abs(w12 - 1.0) > tol:
        raise WronskianNotUnit(f"W[u1, u2]({xe}) = {w12!r}")
    diff, diff_x = family.u_lambda(xa, lam), family.u_lambda_x(xa, lam)
    if xe != x0:
        vc, vc_x = v_vc_with_derivative(family, x0, xe, lam, ctl)
        diff, diff_x = diff - vc, diff_x - vc_x
    d1 = float(wronskian_values(diff, diff_x, w, wx))
    d2 = float(wronskian_values(u1, u1x, diff, diff_x))
    return ConnectionCoeffs(d1, d2, float(x0), extra={"w12": w12, "evaluated_at": xe})


# --- numerical families ---------------------------------------------------------


def _as_lam_fn(value):
    return value if callable(value) else (lambda lam: value)


def solve_u_numeric(pot: EnergyPotential, lam: float, x_init: float,
                    u_init: Union[float, Callable], ux_init: Union[float, Callable],
                    grid: GridSpec, fd_step: Optional[float] = None,
                    rtol: float = 1e-12, atol: float = 1e-14) -> SolutionFamily:
    """Integrate u_xx = (V - lam) u across ``grid`` starting from ``x_init``.

    Uses an 8th-order Runge-Kutta (DOP853) with dense output. ``u_init`` and
    ``ux_init`` may be callables of lambda; ``u_lambda`` is a central difference
    over re-solved trajectories at lam +/- h with h = 1e-5 max(1, |lam|).
    The family can be evaluated at any lambda, not just ``lam``.
    """
    if not (grid.x_min <= x_init <= grid.x_max):
        raise ValueError("x_init must lie on the grid span")
    if not (pot.domain[0] <= grid.x_min and grid.x_max <= pot.domain[1]):
        raise ValueError("grid leaves the potential's domain")
    u0_fn, ux0_fn = _as_lam_fn(u_init), _as_lam_fn(ux_init)
    h_lam = fd_step if fd_step is not None else 1e-5 * max(1.0, abs(lam))
    cache: dict = {}

    def trajectories(lam_):
        key = float(lam_)
        if key in cache:
            return cache[key]

        def rhs(x, y):
            return [y[1], (float(pot(x, key)) - key) * y[0]]

        y0 = [float(u0_fn(key)), float(ux0_fn(key))]
        parts = []
        for end in (grid.x_min, grid.x_max):
            if end == x_init:
                parts.append(None)
                continue
            sol = solve_ivp(rhs, (x_init, end), y0, method="DOP853",
                            rtol=rtol, atol=atol, dense_output=True)
            if not sol.success or not np.all(np.isfinite(sol.y)):
                raise StepFailure(f"ODE integration failed at lam={key}: {sol.message}")
            parts.append(sol.sol)
        if len(cache) > 64:
            cache.clear()
        cache[key] = parts
        return parts

    def state(x, lam_):
        x = np.asarray(x, dtype=float)
        if np.any(x < grid.x_min - 1e-12) or np.any(x > grid.x_max + 1e-12):
            raise ValueError("numeric family evaluated outside its grid")
        left, right = trajectories(lam_)
        flat = x.ravel()
        out = np.empty((2, flat.size))
        out[:, :] = np.array(y0_for(lam_))[:, None]
        lo = flat < x_init
        hi = flat > x_init
        if lo.any():
            out[:, lo] = left(flat[lo])
        if hi.any():
            out[:, hi] = right(flat[hi])
        if not np.all(np.isfinite(out)):
            raise StepFailure("non-finite ODE solution")
        return out[0].reshape(x.shape), out[1].reshape(x.shape)

    def y0_for(lam_):
        return [float(u0_fn(lam_)), float(ux0_fn(lam_))]

    def u(x, lam_):
        return state(x, lam_)[0]

    def u_x(x, lam_):
        return state(x, lam_)[1]

    def u_lambda(x, lam_):
        return (state(x, lam_ + h_lam)[0] - state(x, lam_ - h_lam)[0]) / (2 * h_lam)

    def u_lambda_x(x, lam_):
        return (state(x, lam_ + h_lam)[1] - state(x, lam_ - h_lam)[1]) / (2 * h_lam)

    return SolutionFamily(u, u_x, u_lambda, u_lambda_x, potential=pot,
                          provenance="numeric_ode", fd_step_lambda=h_lam,
                          name=f"numeric({pot.name})")


# --- residuals -----------------------------------------------------------------


def stencil_second(f: Callable, x, h: float = 1e-3):
    """Five-point central second derivative of a vectorised ``f``."""
    x = np.asarray(x, dtype=float)
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


def chain_residuals(pair: JordanPair, x, lam: float, h: float = 1e-3):
    """Pointwise residuals of both chain equations, second derivatives by stencil."""
    fam = pair.family
    pot = fam.potential
    x = np.asarray(x, dtype=float)
    k = lam - pot(x, lam)
    u = fam.u(x, lam)
    r1 = stencil_second(lambda t: fam.u(t, lam), x, h) + k * u
    r2 = (stencil_second(lambda t: pair.v(t, lam), x, h) + k * pair.v(x, lam)
          - (pot.dv_dlambda(x, lam) - 1.0) * u)
    return r1, r2
