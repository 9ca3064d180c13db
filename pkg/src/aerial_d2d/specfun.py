"""Special functions and adaptive quadrature for the analytic link models.

Everything here is plain 64-bit float arithmetic; target accuracies are
around 1e-10, far above machine epsilon, so no extended precision is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 600


class ConvergenceError(ArithmeticError):
    """Quadrature failed to reach tolerance within the subdivision budget.

    Carries the best available estimate and a bound on its error so callers
    can decide whether to accept it anyway.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budget for adaptive integration."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and math.isfinite(self.abs_tol)):
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if not (self.rel_tol > 0 and math.isfinite(self.rel_tol)):
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_subdivisions < 1:
            raise ValueError(
                f"max_subdivisions must be >= 1, got {self.max_subdivisions}"
            )


def _check_gamma_domain(s: float, x: float) -> None:
    if not (math.isfinite(s) and math.isfinite(x)):
        raise ValueError(f"arguments must be finite, got s={s}, x={x}")
    if s <= 0:
        raise ValueError(f"order s must be positive, got {s}")
    if x < 0:
        raise ValueError(f"lower limit x must be nonnegative, got {x}")


def _lower_gamma_series(s: float, x: float) -> float:
    """Series for the regularized lower tail P(s, x), valid for x < s + 1."""
    term = 1.0 / s
    total = term
    a = s
    for _ in range(_MAX_ITER):
        a += 1.0
        term *= x / a
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise ConvergenceError(
        f"lower-gamma series did not converge for s={s}, x={x}",
        estimate=total,
        error_bound=abs(term),
    )


def _upper_gamma_cf(s: float, x: float) -> float:
    """Continued fraction for Gamma(s, x) / (x^s e^{-x}), valid for x >= s + 1.

    Modified Lentz evaluation of the standard continued fraction.
    """
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ConvergenceError(
        f"upper-gamma continued fraction did not converge for s={s}, x={x}",
        estimate=h,
        error_bound=abs(h) * 1e-12,
    )


def upper_incomplete_gamma(s: float, x: float) -> float:
    """Upper incomplete gamma function Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt.

    Series expansion below x = s + 1, continued fraction above; both
    converge to near machine precision on the s in (0, 3] range used here.
    Underflows to 0.0 for very large x.
    """
    _check_gamma_domain(s, x)
    if x == 0.0:
        return math.gamma(s)
    if x < s + 1.0:
        p = _lower_gamma_series(s, x)
        return math.gamma(s) * (1.0 - p)
    log_prefactor = -x + s * math.log(x)
    if log_prefactor < -745.0:
        return 0.0
    return math.exp(log_prefactor) * _upper_gamma_cf(s, x)


def upper_incomplete_gamma_scaled(s: float, x: float) -> float:
    """Exponentially scaled tail: e^x * Gamma(s, x).

    Stays finite for arbitrarily large x (where the plain product would
    overflow times underflow); needed by the averaged threshold-distance
    closed form at high platform altitudes.
    """
    _check_gamma_domain(s, x)
    if x == 0.0:
        return math.gamma(s)
    if x < s + 1.0:
        p = _lower_gamma_series(s, x)
        return math.exp(x) * math.gamma(s) * (1.0 - p)
    return math.exp(s * math.log(x)) * _upper_gamma_cf(s, x)


def _simpson(fa: float, fm: float, fb: float, width: float) -> float:
    return width * (fa + 4.0 * fm + fb) / 6.0


def _adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float,
    rel_tol: float,
    max_subdivisions: int,
) -> float:
    # Composite-Simpson pilot pins the relative part of the tolerance to a
    # realistic magnitude before refinement starts.
    n_pilot = 64
    xs = [a + (b - a) * k / n_pilot for k in range(n_pilot + 1)]
    ys = [f(x) for x in xs]
    pilot = sum(
        _simpson(ys[2 * i], ys[2 * i + 1], ys[2 * i + 2], xs[2 * i + 2] - xs[2 * i])
        for i in range(n_pilot // 2)
    )
    tol = max(abs_tol, rel_tol * abs(pilot))

    fa, fm, fb = ys[0], ys[n_pilot // 2], ys[n_pilot]
    whole = _simpson(fa, fm, fb, b - a)
    # Work stack entries: (a, b, fa, fm, fb, simpson_estimate, tol_share)
    stack = [(a, b, fa, fm, fb, whole, tol)]
    total = 0.0
    splits = 0
    budget_exceeded = False
    leftover = 0.0
    leftover_err = 0.0

    while stack:
        xa, xb, ya, ym, yb, s_whole, s_tol = stack.pop()
        xm = 0.5 * (xa + xb)
        xl = 0.5 * (xa + xm)
        xr = 0.5 * (xm + xb)
        yl = f(xl)
        yr = f(xr)
        s_left = _simpson(ya, yl, ym, xm - xa)
        s_right = _simpson(ym, yr, yb, xb - xm)
        delta = s_left + s_right - s_whole
        interval_converged = abs(delta) <= 15.0 * s_tol or (xm - xa) < 1e-14 * (
            abs(xa) + abs(xm) + 1e-6
        )
        if budget_exceeded:
            leftover += s_left + s_right
            leftover_err += abs(delta)
            continue
        if interval_converged:
            total += s_left + s_right + delta / 15.0
        else:
            splits += 1
            if splits > max_subdivisions:
                budget_exceeded = True
                leftover += s_left + s_right
                leftover_err += abs(delta)
                continue
            half_tol = 0.5 * s_tol
            stack.append((xa, xm, ya, yl, ym, s_left, half_tol))
            stack.append((xm, xb, ym, yr, yb, s_right, half_tol))

    if budget_exceeded:
        raise ConvergenceError(
            f"quadrature on [{a}, {b}] exceeded {max_subdivisions} subdivisions",
            estimate=total + leftover,
            error_bound=leftover_err,
        )
    return total


def _truncate_upper_limit(
    f: Callable[[float], float], a: float, spec: QuadratureSpec
) -> tuple[float, float]:
    """Pick a finite cutoff for an integral to +inf.

    Doubles the cutoff until the integrand has dropped below abs_tol times
    the largest magnitude seen; assumes (as everywhere in this package)
    integrands that eventually decay.  Returns (cutoff, peak magnitude).
    """
    cutoff = max(2.0 * abs(a), a + 1.0, 1.0)
    peak = 0.0
    for _ in range(64):
        xs = [a + (cutoff - a) * k / 16.0 for k in range(17)]
        peak = max(peak, max(abs(f(x)) for x in xs))
        edge = max(abs(f(cutoff)), abs(f(0.5 * (a + cutoff) + 0.5 * cutoff)))
        if peak > 0.0 and edge <= spec.abs_tol * peak:
            return cutoff, peak
        cutoff *= 2.0
    raise ConvergenceError(
        f"could not find a decaying tail beyond x={cutoff / 2.0}",
        estimate=math.nan,
        error_bound=math.inf,
    )


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Adaptive Simpson integral of f over [a, b] within spec tolerances.

    b may be math.inf for integrands that decay to zero; the semi-infinite
    range is truncated where the integrand falls below abs_tol times its
    peak (cutoff doubled until that holds).  Deterministic for identical
    inputs.  Raises ConvergenceError (carrying the best estimate and an
    error bound) if the subdivision budget is exhausted.
    """
    if spec is None:
        spec = QuadratureSpec()
    if math.isnan(a) or math.isnan(b):
        raise ValueError("integration limits must not be NaN")
    if math.isinf(a):
        raise ValueError("lower limit must be finite")
    if a > b:
        raise ValueError(f"limits must satisfy a <= b, got a={a}, b={b}")
    if a == b:
        return 0.0
    if math.isinf(b):
        cutoff, _ = _truncate_upper_limit(f, a, spec)
        b = cutoff
    return _adaptive_simpson(
        f, a, b, spec.abs_tol, spec.rel_tol, spec.max_subdivisions
    )
