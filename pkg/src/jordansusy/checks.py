"""Invariant checks run by ``jordansusy verify``.

Every check measures a maximum error against an independent route (closed
form, quadrature, finite differences) and compares it with its tolerance.
Randomised sweeps draw from ``numpy.random.default_rng(seed)`` (PCG64), so a
run is reproducible for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import quadrature, specfun, susy, wronskid
from .jordan import connection_coeffs, v_vc
from .models import BoxModel, EDHOModel, RadialOscillatorModel, box_partner_closed

__all__ = ["CheckResult", "run_checks", "CHECKS", "MODELS", "w_slope_errors"]

MODELS = ("specfun", "box", "radial_osc", "edho")


@dataclass(frozen=True)
class CheckResult:
    name: str
    model: str
    max_error: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return math.isfinite(self.max_error) and self.max_error <= self.tolerance

    def as_dict(self) -> dict:
        return {"name": self.name, "model": self.model, "max_error": self.max_error,
                "tolerance": self.tolerance, "passed": self.passed, "detail": self.detail}


def _fd_slope(f, x, h=1e-4):
    """Five-point first derivative."""
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def w_slope_errors(w: Callable, family, pot, lam, x, h=1e-4):
    """Mixed error of dW/dx = -(1 - V_lam) u^2 at the points ``x``."""
    x = np.asarray(x, dtype=float)
    rhs = -(1.0 - pot.dv_dlambda(x, lam)) * family.u(x, lam) ** 2
    return np.abs(_fd_slope(w, x, h) - rhs) / (1.0 + np.abs(rhs))


# --- special functions -----------------------------------------------------------


def _kummer(rng):
    a = rng.uniform(0.1, 2.0, 50)
    b = a + rng.uniform(0.1, 3.0, 50)
    x = rng.uniform(-3.0, 3.0, 50)
    err = [abs(specfun.hyp1f1(ai, bi, xi) - math.exp(xi) * specfun.hyp1f1(bi - ai, bi, -xi))
           / abs(specfun.hyp1f1(ai, bi, xi)) for ai, bi, xi in zip(a, b, x)]
    return max(err), 1e-12, "1F1(a;b;x) = e^x 1F1(b-a;b;-x), 50 draws"


def _hyp1f1_da(rng):
    h = 1e-6
    err = []
    for _ in range(30):
        a, b, x = rng.uniform(-2.5, 2.5), rng.uniform(0.2, 3.0), rng.uniform(-2.0, 2.0)
        if abs(a - round(a)) < 0.05:
            a += 0.1
        fd = (specfun.hyp1f1(a + h, b, x) - specfun.hyp1f1(a - h, b, x)) / (2 * h)
        err.append(abs(specfun.hyp1f1_da(a, b, x) - fd))
    return max(err), 1e-7, "d/da 1F1 against a central difference, 30 draws"


def _hermite_minus_one(rng):
    from scipy.special import erfc

    x = rng.uniform(-3.0, 3.0, 40)
    ref = 0.5 * math.sqrt(math.pi) * np.exp(x * x) * erfc(x)
    err = np.abs(specfun.hermite(-1.0, x) - ref) / np.abs(ref)
    return float(err.max()), 1e-10, "H_-1(x) = (sqrt(pi)/2) e^{x^2} erfc(x)"


# --- box -------------------------------------------------------------------------

_BOX = BoxModel()


def _box_norm(rng):
    lam = _BOX.eigenvalue(1)
    res = wronskid.norm_energy(_BOX.u1(), _BOX.potential, lam)
    q = wronskid.norm_energy(_BOX.u1(), _BOX.potential, lam, method="quadrature")
    err = max(abs(res.value - 0.5), abs(q.value - 0.5))
    return err, 1e-10, f"N(sin(pi x)) = {res.value!r}, so A = {1 / math.sqrt(res.value)!r}"


def _box_anchors(rng):
    fam = _BOX.u1()
    err = 0.0
    for m in (1, 2, 3):
        lam = _BOX.eigenvalue(m)
        err = max(err, abs(fam.w_u_ulambda(0.0, lam)), abs(fam.w_u_ulambda(1.0, lam) + 0.5))
    return err, 1e-12, "W[u, u_lam](0) = 0 and W[u, u_lam](1) = -1/2 for m = 1..3"


def _box_transform(K, m=2):
    return susy.SusyTransform.differential(_BOX.potential, _BOX.eigenvalue(m), _BOX.u1(), K,
                                           u2=_BOX.u2())


def _box_regularity(rng):
    rep = susy.regularity_range(_box_transform(0.555))
    ends = sorted(r.end for r in rep.admissible_K)
    err = abs(ends[0] - 0.0) + abs(ends[1] - 0.5) if len(ends) == 2 else math.inf
    chk = susy.check_regular(_box_transform(0.25))
    if chk.regular or chk.zero is None:
        err = math.inf
    return err, 1e-10, f"K in {rep.describe()}; K=0.25 zero at {chk.zero}"


def _box_partner(rng):
    x = np.linspace(0.0, 1.0, 501)
    diff = susy.partner_potential(_box_transform(0.555), x) - box_partner_closed(2, 0.555, x)
    return float(np.max(np.abs(diff))), 1e-9, "m=2, K=0.555, 501 points"


def _box_states(rng):
    T = _box_transform(0.555)
    x = np.linspace(0.002, 0.998, 499)
    worst = 0.0
    for n in (1, 2, 3):
        eps, psi = _BOX.eigenstate(n)
        worst = max(worst, susy.state_residual(T, psi, eps, x).absolute)
    return worst, 1e-5, "first three partner states, lam = 4 pi^2"


def _connection_error(u1, u2, lam, x0, grid):
    c = connection_coeffs(u1, u2, x0, lam)
    lhs = c.d1 * u1.u(grid, lam) + c.d2 * u2.u(grid, lam)
    rhs = u1.u_lambda(grid, lam) - v_vc(u1, x0, grid, lam)
    return float(np.max(np.abs(lhs - rhs)))


def _evaluation_spread(u1, u2, lam, x0, x_alt):
    """d1, d2 at the base point (no quadrature) against the general Wronskian
    formula evaluated at another point of the interval."""
    c = connection_coeffs(u1, u2, x0, lam)
    c_alt = connection_coeffs(u1, u2, x0, lam, at=x_alt)
    return max(abs(c.d1 - c_alt.d1), abs(c.d2 - c_alt.d2))


def _box_connection(rng):
    grid = np.linspace(0.1, 0.9, 200)
    err = max(_connection_error(_BOX.u1(), _BOX.u2(), lam, 0.5, grid)
              for lam in rng.uniform(0.5, 9.5, 5))
    return err, 1e-7, "d1 u1 + d2 u2 = v_DF - v_VC, 5 random lam, 200 points"


def _box_evaluation_point(rng):
    err = max(_evaluation_spread(_BOX.u1(), _BOX.u2(), lam, 0.5, 0.3)
              for lam in rng.uniform(0.5, 9.5, 5))
    return err, 1e-8, "d1, d2 evaluated at x = 0.5 (base point) and x = 0.3"


def _box_integrals(rng):
    u1, u2 = _BOX.u1(), _BOX.u2()
    worst = 0.0
    for _ in range(50):
        lam = rng.uniform(0.5, 9.5)
        x0, x = rng.uniform(0.05, 0.95, 2)
        k = math.sqrt(lam)
        f1 = lambda t: t / 2 - math.sin(2 * k * t) / (4 * k)
        f2 = lambda t: t / (2 * lam) + math.sin(2 * k * t) / (4 * lam**1.5)
        dbl = (math.cos(k * x0) ** 2 / (2 * lam)
               - ((x - x0) / (2 * k) + math.sin(2 * k * x0) / (4 * lam)) / math.tan(k * x))
        pairs = [
            (wronskid.integrate_u2(u1, x0, x, lam), f1(x) - f1(x0),
             wronskid.integrate_u2_quad(u1, x0, x, lam)),
            (wronskid.integrate_u2(u2, x0, x, lam), f2(x) - f2(x0),
             wronskid.integrate_u2_quad(u2, x0, x, lam)),
            (wronskid.double_integral(u1, u2, x0, x, lam), dbl,
             wronskid.double_integral_quad(u1, x0, x, lam)),
        ]
        for w, closed, quad in pairs:
            worst = max(worst, abs(w - closed), abs(quad - closed))
    return worst, 1e-7, "two squared integrals and the double integral, 50 draws"


# --- radial oscillator -----------------------------------------------------------


def _rosc(ell):
    return RadialOscillatorModel(ell)


def _rosc_transform(model, K, lam=8.0):
    return susy.SusyTransform.differential(model.potential, lam, model.u1(), K, u2=model.u2())


def _rosc_partner(rng, ell=1):
    m = _rosc(ell)
    x = np.linspace(0.1, 4.0, 300)
    diff = susy.partner_potential(_rosc_transform(m, -0.01), x) - m.partner_closed(8.0, -0.01, x)
    return float(np.max(np.abs(diff))), 1e-7, f"l={ell}, lam=8, K=-0.01 on [0.1, 4]"


def _rosc_regularity(rng, ell=1):
    m = _rosc(ell)
    rep = susy.regularity_range(_rosc_transform(m, -0.01))
    ok = (len(rep.admissible_K) == 1 and not rep.admissible_K[0].upward)
    err = abs(rep.admissible_K[0].end) if ok else math.inf
    grid = np.linspace(0.05, 6.0, 600)
    w = _rosc_transform(m, -0.01).w(grid)
    if np.any(w >= 0) or not np.all(np.isfinite(susy.partner_potential(_rosc_transform(m, -0.01), grid))):
        err = math.inf
    if susy.check_regular(_rosc_transform(m, 0.01)).regular:
        err = math.inf
    return err, 1e-10, f"K in {rep.describe()}; K=-0.01 regular on [0.05, 6]; K=0.01 rejected"


def _rosc_integrals(rng, ell=1):
    m = _rosc(ell)
    lam = 8.0
    fam1, fam2 = m.u1(), m.u2()
    worst = 0.0
    for x in (0.5, 1.0, 1.5, 2.5):
        closed = float(m.integral_u1sq(lam, x))
        quad = quadrature.integrate(lambda t: fam1.u(t, lam) ** 2, 0.0, x)
        worst = max(worst, abs(closed - quad) / (1 + abs(quad)))
    closed = float(m.integral_u2sq(lam, 3.0, upper=8.0))
    quad = quadrature.integrate(lambda t: fam2.u(t, lam) ** 2, 3.0, 8.0)
    worst = max(worst, abs(closed - quad) / abs(quad))
    return worst, 1e-6, "closed-form int u1^2 from 0 and int u2^2 on [3, 8] vs quadrature"


def _rosc_connection(rng, ell=1):
    m = _rosc(ell)
    grid = np.linspace(0.3, 1.2, 200)
    err = max(_connection_error(m.u1(), m.u2(), lam, 0.7, grid)
              for lam in rng.uniform(2.0, 8.5, 5))
    return err, 1e-7, "d1 u1 + d2 u2 = v_DF - v_VC, 5 random lam, 200 points"


def _rosc_evaluation_point(rng, ell=1):
    m = _rosc(ell)
    err = max(_evaluation_spread(m.u1(), m.u2(), lam, 0.7, 0.5)
              for lam in rng.uniform(2.0, 8.5, 5))
    return err, 1e-8, "d1, d2 evaluated at x = 0.7 (base point) and x = 0.5"


def _rosc_states(rng, ell=1):
    m = _rosc(ell)
    T = _rosc_transform(m, -0.01)
    x = np.linspace(0.05, 6.0, 500)
    lam = 8.0
    eps_list = sorted({lam, m.eigenvalue(0), m.eigenvalue(1), m.eigenvalue(2)})[:3]
    worst = max(susy.state_residual(T, m.u1(), e, x).absolute for e in eps_list)
    return worst, 1e-5, f"states at eps = {eps_list}"


# --- energy-dependent oscillator ---------------------------------------------------


def _edho_norm(rng):
    model = EDHOModel()
    fam, pot = model.state(0), model.potential
    w = wronskid.norm_energy(fam, pot, 1.0)
    q = wronskid.norm_energy(fam, pot, 1.0, method="quadrature")
    target = math.sqrt(math.pi) / 2
    err = max(abs(w.value - target), abs(q.value - target),
              abs(w.left_limit - target), abs(w.right_limit))
    return err, 1e-7, f"N(u0): Wronskian {w.value!r}, quadrature {q.value!r}"


def _edho_wronskian(rng):
    fam = EDHOModel().state(0)
    x = np.linspace(-4.0, 4.0, 81)
    ref = -0.5 * np.exp(-x * x) * (x - specfun.hermite(-1.0, x))
    return float(np.max(np.abs(fam.w_u_ulambda(x, 1.0) - ref))), 1e-7, (
        "W[u0, (u0)_lam] = -(1/2) e^{-x^2} (x - H_-1(x))")


# --- monotonicity law, all models ----------------------------------------------------


def _slope(rng, which, ell=1):
    if which == "box":
        lam = rng.uniform(0.5, 60.0)
        T = susy.SusyTransform.differential(_BOX.potential, lam, _BOX.u1(), 0.7, u2=_BOX.u2())
        x = rng.uniform(0.01, 0.99, 200)
        err = w_slope_errors(T.w, T.family, T.pot, lam, x)
    elif which == "radial_osc":
        m = _rosc(ell)
        T = _rosc_transform(m, -0.01)
        x = rng.uniform(0.1, 4.0, 200)
        err = w_slope_errors(T.w, T.family, T.pot, T.lam, x)
    else:
        model = EDHOModel()
        fam = model.state(0)
        x = rng.uniform(-4.0, 4.0, 200)
        err = w_slope_errors(lambda t: fam.w_u_ulambda(t, 1.0), fam, model.potential, 1.0, x)
    return float(np.max(err)), 1e-7, "dW/dx = -(1 - V_lam) u^2, 200 random points"


CHECKS = {
    "specfun": [("kummer_identity", _kummer), ("hyp1f1_da_fd", _hyp1f1_da),
                ("hermite_minus_one", _hermite_minus_one)],
    "box": [("norm", _box_norm), ("wronskian_anchors", _box_anchors),
            ("regularity", _box_regularity), ("partner_closed_form", _box_partner),
            ("state_residuals", _box_states), ("connection", _box_connection),
            ("connection_evaluation_point", _box_evaluation_point),
            ("integrals", _box_integrals),
            ("w_slope", lambda rng: _slope(rng, "box"))],
    "radial_osc": [("partner_closed_form", _rosc_partner), ("regularity", _rosc_regularity),
                   ("integrals", _rosc_integrals), ("connection", _rosc_connection),
                   ("connection_evaluation_point", _rosc_evaluation_point),
                   ("state_residuals", _rosc_states),
                   ("w_slope", lambda rng, ell=1: _slope(rng, "radial_osc", ell))],
    "edho": [("norm", _edho_norm), ("wronskian_closed_form", _edho_wronskian),
             ("w_slope", lambda rng: _slope(rng, "edho"))],
}


def run_checks(models=MODELS, seed: int = 42, tol_override: Optional[float] = None,
               ell: int = 1) -> list:
    """Run the checks of ``models`` in order. Each model gets a fresh RNG
    seeded with ``seed``, so subsets reproduce the full run's draws."""
    out = []
    for model in models:
        rng = np.random.default_rng(seed)
        for name, fn in CHECKS[model]:
            kwargs = {"ell": ell} if model == "radial_osc" else {}
            try:
                err, tol, detail = fn(rng, **kwargs)
            except Exception as exc:  # a crashing check is a failed check
                err, tol, detail = math.inf, math.nan, f"{type(exc).__name__}: {exc}"
            if tol_override is not None:
                tol = tol_override
            out.append(CheckResult(name, model, float(err), float(tol), detail))
    return out
