"""Quadrature, summation, special-function and differentiation kernels.

Everything here is pure and reentrant; reductions always accumulate in a
fixed order so repeated runs are bit-identical.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import zeta as _scipy_zeta

__all__ = [
    "QuadratureSpec",
    "SummationSpec",
    "QuadratureResult",
    "SumResult",
    "ConvergenceError",
    "zeta3",
    "polylog3",
    "integrate_semi_infinite",
    "matsubara_sum",
    "derivative_central",
]


class ConvergenceError(RuntimeError):
    """Numerical scheme failed to meet its tolerance; carries the best estimate."""

    def __init__(self, message, best_estimate, diagnostics=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls for the semi-infinite adaptive quadrature."""

    relative_tolerance: float = 1e-9
    absolute_floor: float = 1e-16
    max_subdivisions: int = 64

    def __post_init__(self):
        if not (0.0 < self.relative_tolerance <= 1e-3):
            raise ValueError("relative_tolerance must lie in (0, 1e-3]")
        if self.absolute_floor <= 0.0:
            raise ValueError("absolute_floor must be positive")
        if self.max_subdivisions < 8:
            raise ValueError("max_subdivisions must be >= 8")


@dataclass(frozen=True)
class SummationSpec:
    """Controls for the Matsubara-style primed sum over l."""

    term_cutoff_ratio: float = 1e-10
    max_matsubara_index: int = 100000
    accelerate: bool = False   # one epsilon-algorithm (Shanks) tail step

    def __post_init__(self):
        if not (0.0 < self.term_cutoff_ratio <= 1e-6):
            raise ValueError("term_cutoff_ratio must lie in (0, 1e-6]")
        if self.max_matsubara_index < 100:
            raise ValueError("max_matsubara_index must be >= 100")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    subdivisions: int


@dataclass(frozen=True)
class SumResult:
    value: float
    truncation_index: int
    tail_estimate: float = 0.0


ZETA3 = float(_scipy_zeta(3.0))


def zeta3():
    """Apery's constant zeta(3)."""
    return ZETA3


def polylog3(z):
    """Trilogarithm Li_3(z) = sum_k z^k/k^3 on [0, 1], relative error <= 1e-12.

    Direct power series; the tail is bounded by z^(K+1)/((K+1)^3 (1-z)).
    """
    z = float(z)
    if z < 0.0 or z > 1.0:
        raise ValueError("polylog3 requires 0 <= z <= 1")
    if z == 0.0:
        return 0.0
    if z == 1.0:
        return ZETA3
    total = 0.0
    term = z
    k = 1
    # geometric tail bound keeps the loop finite for z arbitrarily close to 1
    while True:
        total += term / k**3
        tail = term * z / ((k + 1) ** 3 * (1.0 - z))
        if tail <= 1e-13 * total:
            return total
        k += 1
        term *= z


# fixed Gauss-Legendre pairs reused by every panel (cached at import)
_GL_LOW_X, _GL_LOW_W = leggauss(16)
_GL_HIGH_X, _GL_HIGH_W = leggauss(32)

_BASE_EDGES = (0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 11.0, 15.0,
               20.0, 26.0, 33.0, 41.0, 51.0)


def _panel_edges(absolute_floor):
    """Panel boundaries out to Y with exp(-Y) below the absolute floor."""
    y_max = min(max(-math.log(absolute_floor), 30.0), 700.0)
    edges = [e for e in _BASE_EDGES if e < y_max]
    last = edges[-1]
    while last < y_max:
        last = last * 1.3
        edges.append(last)
    edges.append(last * 1.3)
    return np.array(edges)


def _panel_values(f, lo, hi):
    """High/low-order Gauss values on panels [lo_i, hi_i]; one vectorized call each."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    y_hi = (mid[:, None] + half[:, None] * _GL_HIGH_X[None, :]).ravel()
    y_lo = (mid[:, None] + half[:, None] * _GL_LOW_X[None, :]).ravel()
    f_hi = np.asarray(f(y_hi), dtype=float).reshape(len(lo), -1)
    f_lo = np.asarray(f(y_lo), dtype=float).reshape(len(lo), -1)
    vals = (f_hi * _GL_HIGH_W[None, :]).sum(axis=1) * half
    errs = np.abs(vals - (f_lo * _GL_LOW_W[None, :]).sum(axis=1) * half)
    return vals, errs


def integrate_semi_infinite(f, spec: Optional[QuadratureSpec] = None):
    """Integrate f over [0, inf) for integrands decaying at least exponentially.

    Fixed nested Gauss panels cover [0, Y_max] with exp(-Y_max) below the
    absolute floor; panels whose error estimate exceeds their share of the
    budget are bisected, up to max_subdivisions extra panels.

    Parameters
    ----------
    f : callable
        Integrand, evaluated vectorized on a 1-d ndarray of abscissae.
    spec : QuadratureSpec, optional

    Returns
    -------
    QuadratureResult
        value, estimated absolute error, and number of bisections performed.

    Raises
    ------
    ConvergenceError
        If the tolerance is not met within max_subdivisions; carries the
        best estimate.
    """
    spec = spec or QuadratureSpec()
    edges = _panel_edges(spec.absolute_floor)
    lo, hi = edges[:-1], edges[1:]
    vals, errs = _panel_values(f, lo, hi)
    subdivisions = 0
    while True:
        total = float(vals.sum())
        err = float(errs.sum())
        budget = max(spec.relative_tolerance * abs(total), spec.absolute_floor)
        if err <= budget:
            return QuadratureResult(total, err, subdivisions)
        if subdivisions >= spec.max_subdivisions:
            raise ConvergenceError(
                "quadrature did not reach tolerance",
                total,
                {"error": err, "subdivisions": subdivisions},
            )
        # bisect every panel holding more than its share of the budget
        bad = errs > budget / max(len(vals), 1)
        if not bad.any():
            bad = errs == errs.max()
        n_lo = np.concatenate([lo[~bad], lo[bad], 0.5 * (lo[bad] + hi[bad])])
        n_hi = np.concatenate([hi[~bad], 0.5 * (lo[bad] + hi[bad]), hi[bad]])
        order = np.argsort(n_lo, kind="stable")
        lo, hi = n_lo[order], n_hi[order]
        keep_vals = np.concatenate([vals[~bad], np.zeros(2 * int(bad.sum()))])
        keep_errs = np.concatenate([errs[~bad], np.full(2 * int(bad.sum()), np.inf)])
        vals, errs = keep_vals[order], keep_errs[order]
        redo = ~np.isfinite(errs)
        new_vals, new_errs = _panel_values(f, lo[redo], hi[redo])
        vals[redo], errs[redo] = new_vals, new_errs
        subdivisions += int(bad.sum())


def matsubara_sum(term, spec: Optional[SummationSpec] = None,
                  forced_truncation: Optional[int] = None):
    """Primed sum (1/2)*term(0) + sum_{l>=1} term(l).

    Truncates once two consecutive terms fall below term_cutoff_ratio of the
    running sum and records the truncation index.  With accelerate=True a
    single Shanks step estimates the geometric tail from the last term ratio.
    With forced_truncation the sum runs to exactly that index with no cutoff
    test (used by differentiation stencils to keep truncation structure
    identical across nearby evaluations).

    Raises
    ------
    ConvergenceError
        Cutoff not reached by max_matsubara_index; carries the partial sum.
    """
    spec = spec or SummationSpec()
    total = 0.5 * float(term(0))
    if forced_truncation is not None:
        prev = 0.0
        last = 0.0
        for l in range(1, forced_truncation + 1):
            prev = last
            last = float(term(l))
            total += last
        tail = _shanks_tail(prev, last) if spec.accelerate else 0.0
        return SumResult(total + tail, forced_truncation, tail)

    tiny = 1e-300
    small_streak = 0
    prev = 0.0
    last = 0.0
    for l in range(1, spec.max_matsubara_index + 1):
        prev = last
        last = float(term(l))
        total += last
        if abs(last) <= spec.term_cutoff_ratio * max(abs(total), tiny):
            small_streak += 1
            if small_streak >= 2 or last == 0.0:
                tail = _shanks_tail(prev, last) if spec.accelerate else 0.0
                return SumResult(total + tail, l, tail)
        else:
            small_streak = 0
    raise ConvergenceError(
        "matsubara_sum cutoff not reached",
        total,
        {"max_index": spec.max_matsubara_index, "last_term": last},
    )


def _shanks_tail(prev, last):
    """Geometric tail estimate sum_{k>=1} last*rho^k from the final term ratio."""
    if prev == 0.0 or last == 0.0:
        return 0.0
    rho = last / prev
    if 0.0 < rho < 1.0:
        return last * rho / (1.0 - rho)
    return 0.0


def derivative_central(f, x, h):
    """Five-point central first derivative (Richardson-refined three-point rule).

    Returns (value, error_estimate); the estimate is the refinement
    correction |five_point - three_point|, which bounds the true error on
    polynomials up to degree 4.
    """
    x = float(x)
    h = float(h)
    if x + h == x or x + 2 * h == x + h:
        raise ValueError("step underflows the abscissa precision")
    f_m2 = f(x - 2 * h)
    f_m1 = f(x - h)
    f_p1 = f(x + h)
    f_p2 = f(x + 2 * h)
    three_point = (f_p1 - f_m1) / (2 * h)
    five_point = (-f_p2 + 8 * f_p1 - 8 * f_m1 + f_m2) / (12 * h)
    return five_point, abs(five_point - three_point)


def second_derivative_central(f, x, h):
    """Five-point central second derivative, O(h^4)."""
    x = float(x)
    h = float(h)
    if x + h == x or x + 2 * h == x + h:
        raise ValueError("step underflows the abscissa precision")
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x)
            + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)
