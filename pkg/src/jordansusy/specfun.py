"""Special functions used by the closed-form models.

The confluent hypergeometric series is summed directly; all routines accept
scalar or array ``x`` (the parameters stay scalar) and return the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, PoleError

__all__ = [
    "SeriesControl",
    "DEFAULT_SERIES",
    "pochhammer",
    "gamma",
    "rgamma",
    "hyp1f1",
    "hyp1f1_da",
    "hyp1f1_with_da",
    "hermite",
    "dhermite_dnu",
    "HERMITE_MAX_ABS_X",
    "HERMITE_MAX_ABS_NU",
]

_EPS = np.finfo(float).eps

# exp(x**2) must stay representable inside the 1F1 form of H_nu
HERMITE_MAX_ABS_X = 26.0
HERMITE_MAX_ABS_NU = 60.0


@dataclass(frozen=True)
class SeriesControl:
    """Stopping rule for power series.

    A series stops once two consecutive terms are below ``rel_tol`` times the
    partial sum (or below the round-off floor of the largest term seen) and the
    terms are already decreasing.
    """

    rel_tol: float = 1e-15
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_SERIES = SeriesControl()


def _is_nonpos_int(q: float) -> bool:
    return q <= 0 and float(q).is_integer()


def pochhammer(q: float, m: int) -> float:
    """Rising factorial (q)_m = q (q+1) ... (q+m-1)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    out = 1.0
    for k in range(m):
        out *= q + k
    return out


def gamma(x: float) -> float:
    if _is_nonpos_int(x):
        raise PoleError(f"Gamma has a pole at {x}")
    return math.gamma(x)


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles of Gamma."""
    if _is_nonpos_int(x):
        return 0.0
    try:
        return 1.0 / math.gamma(x)
    except OverflowError:
        # next to a pole: 1/Gamma(x) = x / Gamma(x + 1)
        return x * rgamma(x + 1.0)


def _kummer_series(a, b, x, ctl, with_da):
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = np.atleast_1d(x).ravel()

    if with_da and _is_nonpos_int(a):
        # the truncated series misses d/da of the vanishing Pochhammer factors
        raise PoleError(f"parameter derivative undefined by the series at a={a}")

    term = np.ones_like(x)
    total = np.ones_like(x)
    peak = np.ones_like(x)
    dsum = np.zeros_like(x)
    dpeak = np.zeros_like(x)
    harmonic = 0.0
    quiet = np.zeros(x.shape, dtype=int)
    active = np.ones(x.shape, dtype=bool)
    absx = np.abs(x)

    for m in range(ctl.max_terms):
        if b + m == 0:
            raise PoleError(f"1F1 denominator (b)_m vanishes: b={b}, m={m}")
        if a + m == 0:
            break  # polynomial case, every later term is exactly zero
        harmonic += 1.0 / (a + m)
        with np.errstate(over="ignore", invalid="ignore"):
            term = term * ((a + m) / (b + m)) * x / (m + 1)
        total = np.where(active, total + term, total)
        if not np.all(np.isfinite(total)):
            raise OverflowError(f"1F1({a}; {b}; x) overflows for max|x|={absx.max()}")
        aterm = np.abs(term)
        peak = np.maximum(peak, aterm)
        small = (aterm <= ctl.rel_tol * np.abs(total)) | (aterm <= _EPS * peak)
        if with_da:
            dterm = term * harmonic
            dsum = np.where(active, dsum + dterm, dsum)
            adterm = np.abs(dterm)
            dpeak = np.maximum(dpeak, adterm)
            small &= (adterm <= ctl.rel_tol * np.abs(dsum)) | (adterm <= _EPS * dpeak)
        # ratio of the next term; the tail must already be shrinking
        nxt = b + m + 1
        ratio = math.inf if nxt == 0 else abs((a + m + 1) / nxt) * absx / (m + 2)
        quiet = np.where(small & (ratio < 1.0), quiet + 1, 0)
        active &= quiet < 2
        if not active.any():
            break
    else:
        raise NonConvergence(
            f"1F1({a}; {b}; x) not converged after {ctl.max_terms} terms"
        )

    if not (np.all(np.isfinite(total)) and np.all(np.isfinite(dsum))):
        raise OverflowError(f"1F1({a}; {b}; x) overflows for max|x|={absx.max()}")
    return total.reshape(shape), dsum.reshape(shape)


def hyp1f1(a: float, b: float, x, ctl: SeriesControl = DEFAULT_SERIES):
    """Kummer's confluent hypergeometric function 1F1(a; b; x).

    Raises
    ------
    PoleError
        If ``b`` is a non-positive integer reached before the series terminates.
    NonConvergence
        If ``ctl.max_terms`` terms do not meet the tolerance.
    """
    f, _ = _kummer_series(a, b, x, ctl, with_da=False)
    return f[()] if f.ndim == 0 else f


def hyp1f1_da(a: float, b: float, x, ctl: SeriesControl = DEFAULT_SERIES):
    """Derivative of 1F1(a; b; x) with respect to ``a``.

    Term m of the 1F1 series is weighted by sum_{p<m} 1/(p+a). For ``a`` a
    non-positive integer that weighting hits a pole and ``PoleError`` is raised.
    """
    _, d = _kummer_series(a, b, x, ctl, with_da=True)
    return d[()] if d.ndim == 0 else d


def hyp1f1_with_da(a: float, b: float, x, ctl: SeriesControl = DEFAULT_SERIES):
    """Return ``(1F1, d1F1/da)`` from a single pass over the series."""
    f, d = _kummer_series(a, b, x, ctl, with_da=True)
    if f.ndim == 0:
        return f[()], d[()]
    return f, d


def _hermite_poly(n: int, x):
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev
    h = 2.0 * x
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h


def hermite(nu: float, x):
    """Hermite function H_nu(x) of real order.

    Integer orders nu >= 0 use the polynomial recurrence. Other orders use

        H_nu(x) = 2^nu sqrt(pi) [ 1F1(-nu/2; 1/2; x^2) / Gamma((1-nu)/2)
                                  - 2x 1F1((1-nu)/2; 3/2; x^2) / Gamma(-nu/2) ]

    which satisfies H_{-1}(x) = (sqrt(pi)/2) exp(x^2) erfc(x). The 1F1 branch
    is limited to ``|x| <= HERMITE_MAX_ABS_X`` and ``|nu| <= HERMITE_MAX_ABS_NU``;
    outside that range ``OverflowError`` is raised.
    """
    xa = np.asarray(x, dtype=float)
    if float(nu).is_integer() and nu >= 0:
        out = _hermite_poly(int(nu), xa)
        return out[()] if out.ndim == 0 else out
    if abs(nu) > HERMITE_MAX_ABS_NU or np.any(np.abs(xa) > HERMITE_MAX_ABS_X):
        raise OverflowError(f"H_nu(x) outside the safe range (nu={nu})")
    z = xa * xa
    even_w = rgamma((1.0 - nu) / 2.0)
    odd_w = rgamma(-nu / 2.0)
    out = np.zeros_like(xa)
    if even_w != 0.0:
        out = out + even_w * hyp1f1(-nu / 2.0, 0.5, z)
    if odd_w != 0.0:
        out = out - odd_w * 2.0 * xa * hyp1f1((1.0 - nu) / 2.0, 1.5, z)
    out = 2.0**nu * math.sqrt(math.pi) * out
    return out[()] if np.ndim(out) == 0 else out


def dhermite_dnu(nu: float, x, h: float = 1e-5):
    """Central difference of H_nu(x) in the order, [H_{nu+h} - H_{nu-h}] / 2h."""
    if not h > 0:
        raise ValueError("h must be positive")
    return (hermite(nu + h, x) - hermite(nu - h, x)) / (2.0 * h)
