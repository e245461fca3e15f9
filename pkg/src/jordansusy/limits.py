"""Numerical one-sided limits at the ends of an open interval."""

from __future__ import annotations

import math

import numpy as np

from .errors import JordanSusyError, LimitNotResolved

__all__ = ["endpoint_limit", "approach_points"]

DIVERGENCE_LEVEL = 1e200
_SOFT_FAILURES = (OverflowError, FloatingPointError, JordanSusyError)


def approach_points(endpoint: float, inward: float, kmax: int = 40):
    """Points tending to ``endpoint`` from inside: halving distances for a
    finite end, ``+-base * 2**k`` for an infinite one."""
    if math.isinf(endpoint):
        base = max(1.0, abs(inward))
        sign = math.copysign(1.0, endpoint)
        return [sign * base * 2.0**k for k in range(kmax + 1)]
    return [endpoint + (inward - endpoint) * 2.0**-k for k in range(1, kmax + 1)]


def _eval(f, x):
    with np.errstate(all="ignore"):
        return float(f(np.float64(x)))


def endpoint_limit(f, endpoint: float, inward: float, tol: float = 1e-9,
                   kmax: int = 40) -> float:
    """Limit of ``f`` at ``endpoint`` approached from ``inward``.

    Stops once successive values differ by less than ``tol``. At a finite end
    the value at the end itself is returned when it exists and agrees with the
    sequence; otherwise the last value of the sequence is returned. A sequence that
    overflows while growing in magnitude is reported as a signed infinity.
    """
    history = []
    for x in approach_points(endpoint, inward, kmax):
        try:
            val = _eval(f, x)
        except _SOFT_FAILURES:
            val = math.nan
        if not math.isfinite(val) or abs(val) > DIVERGENCE_LEVEL:
            if len(history) >= 2 and abs(history[-1]) > abs(history[-2]):
                return math.copysign(math.inf, history[-1])
            raise LimitNotResolved(f"non-finite value approaching {endpoint} at x={x}")
        history.append(val)
        if len(history) >= 2 and abs(history[-1] - history[-2]) < tol:
            last, prev = history[-1], history[-2]
            if not math.isinf(endpoint):
                try:
                    at_end = _eval(f, endpoint)
                except _SOFT_FAILURES + (ZeroDivisionError,):
                    at_end = math.nan
                if math.isfinite(at_end) and abs(at_end - last) <= 10 * max(tol, abs(last - prev)):
                    return at_end
            return last
    raise LimitNotResolved(
        f"no Cauchy-stable limit at {endpoint} after {kmax} refinements "
        f"(last values {history[-2:]})"
    )
